#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bayestrust {

/// Flat key=value configuration. Later layers override earlier ones, so the
/// usual stack is defaults < file < command line. Every accessor that fails to
/// convert throws sim::ConfigurationError naming the key.
class Settings {
 public:
  /// One "key = value" per line; blank lines and lines starting with '#' are skipped.
  static Settings parse(std::string_view text, const std::string& origin = "config");
  static Settings load(const std::string& path);
  /// "key=value" as given to --set.
  static std::pair<std::string, std::string> parse_assignment(std::string_view text);

  void set(const std::string& key, std::string value);
  /// Entries of `higher` replace ours.
  void merge(const Settings& higher);

  [[nodiscard]] bool contains(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
  [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] double real(const std::string& key, double fallback) const;
  [[nodiscard]] std::optional<double> optional_real(const std::string& key) const;
  [[nodiscard]] std::uint64_t integer(const std::string& key, std::uint64_t fallback) const;
  /// Colon-separated reals, e.g. "1:1:1".
  [[nodiscard]] std::vector<double> reals(const std::string& key) const;

  /// All entries whose key starts with `prefix`, keyed by the remainder.
  [[nodiscard]] std::map<std::string, std::string> with_prefix(const std::string& prefix) const;
  [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace bayestrust
