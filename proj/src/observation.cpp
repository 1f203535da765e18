#include "bayestrust/observation.hpp"

#include <cmath>

#include "bayestrust/error.hpp"

namespace bayestrust {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view observation_kind(const Observation& obs) noexcept {
  constexpr std::string_view kinds[] = {"binary", "categorical", "advisor", "voting", "opinion"};
  return kinds[obs.index()];
}

void validate(const Observation& obs) {
  std::visit(overloaded{
                 [](const BinaryBatch& b) {
                   if (b.m > b.n) throw InvalidObservation("binary batch has more successes than trials");
                 },
                 [](const CategoricalBatch& c) {
                   if (c.counts.empty()) throw InvalidObservation("categorical batch has no categories");
                 },
                 [](const AdvisorReport& r) {
                   if (r.m > r.n) throw InvalidObservation("advisor report has more successes than trials");
                   if (!(r.advisor_trust >= 0.0 && r.advisor_trust <= 1.0)) {
                     throw InvalidObservation("advisor trust outside [0, 1]");
                   }
                 },
                 [](const VotingVector& v) {
                   if (!std::isfinite(v.y0)) throw InvalidObservation("non-finite trustee reading");
                   for (double y : v.neighbors) {
                     if (!std::isfinite(y)) throw InvalidObservation("non-finite neighbor reading");
                   }
                 },
                 [](const OpinionReport&) {},
             },
             obs);
}

}  // namespace bayestrust
