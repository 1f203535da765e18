#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bayestrust/observation.hpp"
#include "bayestrust/random.hpp"

namespace bayestrust::sim {

using AgentId = std::string;

struct StaticBernoulli {
  double p = 0.5;
};

/// Success probability switches from p_before to p_after at change_step.
struct StepChange {
  double p_before = 0.9;
  double p_after = 0.1;
  std::uint64_t change_step = 1;
};

/// Smooth ground-truth signal: base + amplitude * sin(2 pi step / period).
struct SensorSeries {
  double base = 20.0;
  double amplitude = 0.0;
  double period = 100.0;
  [[nodiscard]] double at(std::uint64_t step) const;
};

struct SensorReader {
  SensorSeries truth;
  double noise_sd = 0.0;
  double fault_offset = 0.0;
  std::optional<std::uint64_t> fault_start;  ///< nullopt: never faulty
  [[nodiscard]] bool faulty_at(std::uint64_t step) const { return fault_start && step >= *fault_start; }
};

/// Advisor that adds round(bias * n) to the true success count (clamped). bias = 0 is honest.
struct UnfairRater {
  double reported_success_bias = 0.0;
};

/// Bernoulli behavior whose identity is reborn as "<id>~<generation>" every lifetime_steps.
struct Whitewasher {
  std::uint64_t lifetime_steps = 10;
  double p = 0.1;
};

/// Outcome category drawn from a fixed probability vector each trial.
struct StaticCategorical {
  std::vector<double> probs;
};

using BehaviorProfile =
    std::variant<StaticBernoulli, StepChange, SensorReader, UnfairRater, Whitewasher, StaticCategorical>;

/// Raised for scenario problems (unknown agent, malformed profile).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ConfigurationError for probabilities outside [0, 1] and similar.
void validate(const BehaviorProfile& profile);

/// Success probability at `step` for Bernoulli-type profiles; nullopt otherwise.
std::optional<double> success_probability(const BehaviorProfile& profile, std::uint64_t step);

/// Scalar ground truth used when scoring estimates: success probability,
/// first-category probability, or 1/0 for a sensor before/after its fault.
std::optional<double> ground_truth(const BehaviorProfile& profile, std::uint64_t step);

/// Profile text "<name> key=value ...", e.g. "step p_before=0.9 p_after=0.2 change_step=50".
BehaviorProfile parse_profile(const std::string& text);
/// Canonical text form of a profile; parse_profile(format_profile(p)) reproduces p exactly.
std::string format_profile(const BehaviorProfile& profile);

enum class EncounterKind { binary, categorical, opinion, voting, advisor };

EncounterKind parse_encounter_kind(const std::string& text);
std::string_view encounter_kind_name(EncounterKind kind);

/// One trustor/trustee relation, active at every step of the horizon.
struct Encounter {
  AgentId trustor;
  AgentId trustee;
  EncounterKind kind = EncounterKind::binary;
  std::uint64_t trials = 1;
  /// voting: committee neighbors of the trustee; advisor: the advisors consulted.
  std::vector<AgentId> peers;
};

struct AgentSpec {
  BehaviorProfile profile;
  /// The trustor's trust in this agent when it acts as an advisor.
  double advisor_trust = 1.0;
};

struct Scenario {
  std::map<AgentId, AgentSpec> agents;
  std::vector<Encounter> schedule;
  std::uint64_t horizon = 1;
  std::uint64_t seed = 0;
};

struct TraceRecord {
  std::uint64_t step = 0;
  AgentId trustor;
  AgentId trustee;
  Observation observation;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct TraceHeader {
  int version = 1;
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  /// Agent id -> canonical profile text; the ground truth for comparisons.
  std::map<AgentId, std::string> agents;
  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct Trace {
  TraceHeader header;
  std::vector<TraceRecord> records;
  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Deterministic trace for the scenario. Outcomes for a (trustor, trustee)
/// pair at step k come from a stream keyed by (seed, trustor, trustee, k), and
/// sensor readings from (seed, member, k), so editing the schedule never shifts
/// anyone else's draws. Records are ordered by (step, trustor, trustee).
Trace generate_trace(const Scenario& scenario);

/// One voting vector per member: y0 is the member's reading, neighbors are the
/// other members' readings in committee order. Throws for fewer than 2 members.
std::vector<VotingVector> generate_committee_readings(const std::vector<AgentId>& member_ids,
                                                      const std::vector<SensorReader>& members,
                                                      std::uint64_t step, std::uint64_t seed);

/// Sensor reading of one member: truth + N(0, noise_sd) + fault offset once faulty.
double sensor_reading(const AgentId& id, const SensorReader& reader, std::uint64_t step, std::uint64_t seed);

struct Advisor {
  AgentId id;
  UnfairRater honesty;
  double trust = 1.0;
};

/// Each advisor observes n_per_report trials of the trustee and reports them,
/// honest or biased, tagged with the trustor's trust in that advisor.
std::vector<AdvisorReport> generate_advisor_reports(const AgentId& trustee_id, const BehaviorProfile& trustee,
                                                    const std::vector<Advisor>& advisors,
                                                    std::uint64_t n_per_report, std::uint64_t step,
                                                    std::uint64_t seed);

/// Identity a whitewasher presents at `step` (steps count from 1).
AgentId whitewasher_identity(const AgentId& base, const Whitewasher& w, std::uint64_t step);
/// Strips a "~generation" suffix.
AgentId base_identity(const AgentId& id);

}  // namespace bayestrust::sim
