#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace bayestrust {

/// Counter-based random stream.
///
/// The i-th output is a SplitMix64 finalizer applied to `key + i * golden`, so
/// a stream is fully described by its key and how many values it has handed
/// out. `fork` derives an independent child stream from the key alone (never
/// from the consumed position); draws for particle `i` or agent `a` at step
/// `k` therefore depend only on the path of fork ids, not on evaluation order.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  [[nodiscard]] RandomStream fork(std::uint64_t id) const noexcept;
  [[nodiscard]] RandomStream fork(std::string_view id) const noexcept;

  /// Uniform draw on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Standard normal draw by inverse-CDF transform of `uniform()`.
  double normal();
  /// Gamma(shape, 1) draw (Marsaglia-Tsang; boosted for shape < 1).
  double gamma(double shape);

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;
/// FNV-1a, used to turn agent identifiers into fork ids.
std::uint64_t hash_id(std::string_view id) noexcept;

}  // namespace bayestrust
