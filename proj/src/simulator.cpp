#include "bayestrust/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "bayestrust/opinion.hpp"
#include "bayestrust/text.hpp"

namespace bayestrust::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigurationError(std::string(what) + " must lie in [0, 1], got " + text::format_real(p));
  }
}

std::uint64_t count_successes(RandomStream& rng, std::uint64_t n, double p) {
  std::uint64_t m = 0;
  for (std::uint64_t t = 0; t < n; ++t) m += rng.uniform() < p ? 1 : 0;
  return m;
}

std::vector<std::uint64_t> draw_categories(RandomStream& rng, std::uint64_t n, const std::vector<double>& probs) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t t = 0; t < n; ++t) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t k = 0;
    for (; k + 1 < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) break;
    }
    ++counts[k];
  }
  return counts;
}

const AgentSpec& lookup(const Scenario& scenario, const AgentId& id) {
  const auto it = scenario.agents.find(id);
  if (it == scenario.agents.end()) throw ConfigurationError("schedule references unknown agent '" + id + "'");
  return it->second;
}

double success_or_throw(const AgentId& id, const BehaviorProfile& profile, std::uint64_t step) {
  const auto p = success_probability(profile, step);
  if (!p) throw ConfigurationError("agent '" + id + "' has no success probability for binary interactions");
  return *p;
}

// key=value tokens of a profile line; rejects duplicates and unknown keys.
class ProfileArgs {
 public:
  ProfileArgs(const std::vector<std::string_view>& tokens, std::string name) : name_(std::move(name)) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto eq = tokens[i].find('=');
      if (eq == std::string_view::npos) {
        throw ConfigurationError("profile '" + name_ + "': expected key=value, got '" + std::string(tokens[i]) + "'");
      }
      const std::string key(tokens[i].substr(0, eq));
      if (!values_.emplace(key, std::string(tokens[i].substr(eq + 1))).second) {
        throw ConfigurationError("profile '" + name_ + "': duplicate key '" + key + "'");
      }
    }
  }

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto raw = take(key);
    if (!raw) {
      if (fallback) return *fallback;
      throw ConfigurationError("profile '" + name_ + "': missing key '" + key + "'");
    }
    const auto v = text::parse_real(*raw);
    if (!v) throw ConfigurationError("profile '" + name_ + "': key '" + key + "' is not a number");
    return *v;
  }

  std::uint64_t integer(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) {
    const auto raw = take(key);
    if (!raw) {
      if (fallback) return *fallback;
      throw ConfigurationError("profile '" + name_ + "': missing key '" + key + "'");
    }
    const auto v = text::parse_u64(*raw);
    if (!v) throw ConfigurationError("profile '" + name_ + "': key '" + key + "' is not a non-negative integer");
    return *v;
  }

  std::optional<std::string> take(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  void finish() const {
    if (!values_.empty()) {
      throw ConfigurationError("profile '" + name_ + "': unknown key '" + values_.begin()->first + "'");
    }
  }

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

}  // namespace

double SensorSeries::at(std::uint64_t step) const {
  if (amplitude == 0.0) return base;
  return base + amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(step) / period);
}

void validate(const BehaviorProfile& profile) {
  std::visit(overloaded{
                 [](const StaticBernoulli& s) { check_probability(s.p, "p"); },
                 [](const StepChange& s) {
                   check_probability(s.p_before, "p_before");
                   check_probability(s.p_after, "p_after");
                   if (s.change_step == 0) throw ConfigurationError("change_step must be positive");
                 },
                 [](const SensorReader& s) {
                   if (!(s.noise_sd >= 0.0) || !std::isfinite(s.noise_sd)) {
                     throw ConfigurationError("noise_sd must be non-negative");
                   }
                   if (!std::isfinite(s.fault_offset) || !std::isfinite(s.truth.base) ||
                       !std::isfinite(s.truth.amplitude)) {
                     throw ConfigurationError("sensor parameters must be finite");
                   }
                   if (s.truth.amplitude != 0.0 && !(s.truth.period > 0.0)) {
                     throw ConfigurationError("sensor period must be positive");
                   }
                 },
                 [](const UnfairRater& u) {
                   if (!(u.reported_success_bias >= -1.0 && u.reported_success_bias <= 1.0)) {
                     throw ConfigurationError("rater bias must lie in [-1, 1]");
                   }
                 },
                 [](const Whitewasher& w) {
                   check_probability(w.p, "p");
                   if (w.lifetime_steps == 0) throw ConfigurationError("lifetime must be positive");
                 },
                 [](const StaticCategorical& c) {
                   if (c.probs.size() < 2) throw ConfigurationError("categorical profile needs at least 2 categories");
                   double sum = 0.0;
                   for (double p : c.probs) {
                     check_probability(p, "category probability");
                     sum += p;
                   }
                   if (std::abs(sum - 1.0) > 1e-9) throw ConfigurationError("category probabilities must sum to 1");
                 },
             },
             profile);
}

std::optional<double> success_probability(const BehaviorProfile& profile, std::uint64_t step) {
  return std::visit(overloaded{
                        [](const StaticBernoulli& s) -> std::optional<double> { return s.p; },
                        [step](const StepChange& s) -> std::optional<double> {
                          return step < s.change_step ? s.p_before : s.p_after;
                        },
                        [](const Whitewasher& w) -> std::optional<double> { return w.p; },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    profile);
}

std::optional<double> ground_truth(const BehaviorProfile& profile, std::uint64_t step) {
  if (const auto* c = std::get_if<StaticCategorical>(&profile)) return c->probs.front();
  if (const auto* s = std::get_if<SensorReader>(&profile)) return s->faulty_at(step) ? 0.0 : 1.0;
  return success_probability(profile, step);
}

BehaviorProfile parse_profile(const std::string& text) {
  const auto tokens = text::split_whitespace(text);
  if (tokens.empty()) throw ConfigurationError("empty profile");
  const std::string name(tokens[0]);
  ProfileArgs args(tokens, name);
  BehaviorProfile profile;
  if (name == "static") {
    profile = StaticBernoulli{args.real("p")};
  } else if (name == "step") {
    profile = StepChange{args.real("p_before"), args.real("p_after"), args.integer("change_step")};
  } else if (name == "sensor") {
    SensorReader s;
    s.truth.base = args.real("base", 0.0);
    s.truth.amplitude = args.real("amplitude", 0.0);
    s.truth.period = args.real("period", 100.0);
    s.noise_sd = args.real("noise_sd", 0.0);
    s.fault_offset = args.real("fault_offset", 0.0);
    const auto start = args.take("fault_start");
    if (start && *start != "never") {
      const auto v = text::parse_u64(*start);
      if (!v) throw ConfigurationError("profile 'sensor': key 'fault_start' must be an integer or 'never'");
      s.fault_start = *v;
    }
    profile = s;
  } else if (name == "unfair") {
    profile = UnfairRater{args.real("bias")};
  } else if (name == "honest") {
    profile = UnfairRater{0.0};
  } else if (name == "whitewasher") {
    profile = Whitewasher{args.integer("lifetime"), args.real("p")};
  } else if (name == "categorical") {
    const auto raw = args.take("probs");
    if (!raw) throw ConfigurationError("profile 'categorical': missing key 'probs'");
    StaticCategorical c;
    for (auto part : text::split(*raw, ':')) {
      const auto v = text::parse_real(part);
      if (!v) throw ConfigurationError("profile 'categorical': key 'probs' has a non-numeric entry");
      c.probs.push_back(*v);
    }
    profile = std::move(c);
  } else {
    throw ConfigurationError("unknown profile '" + name + "'");
  }
  args.finish();
  validate(profile);
  return profile;
}

std::string format_profile(const BehaviorProfile& profile) {
  using text::format_shortest;
  return std::visit(
      overloaded{
          [](const StaticBernoulli& s) { return "static p=" + format_shortest(s.p); },
          [](const StepChange& s) {
            return "step p_before=" + format_shortest(s.p_before) + " p_after=" + format_shortest(s.p_after) +
                   " change_step=" + std::to_string(s.change_step);
          },
          [](const SensorReader& s) {
            return "sensor base=" + format_shortest(s.truth.base) + " amplitude=" + format_shortest(s.truth.amplitude) +
                   " period=" + format_shortest(s.truth.period) + " noise_sd=" + format_shortest(s.noise_sd) +
                   " fault_offset=" + format_shortest(s.fault_offset) +
                   " fault_start=" + (s.fault_start ? std::to_string(*s.fault_start) : std::string("never"));
          },
          [](const UnfairRater& u) { return "unfair bias=" + format_shortest(u.reported_success_bias); },
          [](const Whitewasher& w) {
            return "whitewasher lifetime=" + std::to_string(w.lifetime_steps) + " p=" + format_shortest(w.p);
          },
          [](const StaticCategorical& c) {
            std::string out = "categorical probs=";
            for (std::size_t k = 0; k < c.probs.size(); ++k) {
              if (k > 0) out += ':';
              out += format_shortest(c.probs[k]);
            }
            return out;
          },
      },
      profile);
}

EncounterKind parse_encounter_kind(const std::string& text) {
  if (text == "binary") return EncounterKind::binary;
  if (text == "categorical") return EncounterKind::categorical;
  if (text == "opinion") return EncounterKind::opinion;
  if (text == "voting") return EncounterKind::voting;
  if (text == "advisor") return EncounterKind::advisor;
  throw ConfigurationError("unknown interaction kind '" + text + "'");
}

std::string_view encounter_kind_name(EncounterKind kind) {
  switch (kind) {
    case EncounterKind::binary: return "binary";
    case EncounterKind::categorical: return "categorical";
    case EncounterKind::opinion: return "opinion";
    case EncounterKind::voting: return "voting";
    case EncounterKind::advisor: return "advisor";
  }
  return "binary";
}

AgentId whitewasher_identity(const AgentId& base, const Whitewasher& w, std::uint64_t step) {
  const std::uint64_t generation = step == 0 ? 0 : (step - 1) / w.lifetime_steps;
  if (generation == 0) return base;
  return base + "~" + std::to_string(generation);
}

AgentId base_identity(const AgentId& id) {
  const auto pos = id.find('~');
  return pos == AgentId::npos ? id : id.substr(0, pos);
}

double sensor_reading(const AgentId& id, const SensorReader& reader, std::uint64_t step, std::uint64_t seed) {
  auto rng = RandomStream(seed).fork("sensor").fork(id).fork(step);
  double y = reader.truth.at(step);
  if (reader.noise_sd > 0.0) y += reader.noise_sd * rng.normal();
  if (reader.faulty_at(step)) y += reader.fault_offset;
  return y;
}

std::vector<VotingVector> generate_committee_readings(const std::vector<AgentId>& member_ids,
                                                      const std::vector<SensorReader>& members,
                                                      std::uint64_t step, std::uint64_t seed) {
  if (members.size() < 2) throw ConfigurationError("committee needs at least 2 members");
  if (members.size() != member_ids.size()) throw ConfigurationError("committee ids and members differ in length");
  std::vector<double> readings(members.size());
  for (std::size_t j = 0; j < members.size(); ++j) readings[j] = sensor_reading(member_ids[j], members[j], step, seed);
  std::vector<VotingVector> out(members.size());
  for (std::size_t j = 0; j < members.size(); ++j) {
    out[j].y0 = readings[j];
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i != j) out[j].neighbors.push_back(readings[i]);
    }
  }
  return out;
}

std::vector<AdvisorReport> generate_advisor_reports(const AgentId& trustee_id, const BehaviorProfile& trustee,
                                                    const std::vector<Advisor>& advisors,
                                                    std::uint64_t n_per_report, std::uint64_t step,
                                                    std::uint64_t seed) {
  if (n_per_report == 0) throw ConfigurationError("advisor reports need at least one trial");
  const double p = success_or_throw(trustee_id, trustee, step);
  std::vector<AdvisorReport> reports;
  reports.reserve(advisors.size());
  for (const auto& advisor : advisors) {
    auto rng = RandomStream(seed).fork("advisor").fork(advisor.id).fork(base_identity(trustee_id)).fork(step);
    const auto m = static_cast<double>(count_successes(rng, n_per_report, p));
    const double shift = std::round(advisor.honesty.reported_success_bias * static_cast<double>(n_per_report));
    const double reported = std::clamp(m + shift, 0.0, static_cast<double>(n_per_report));
    reports.push_back(AdvisorReport{advisor.trust, n_per_report, static_cast<std::uint64_t>(reported)});
  }
  return reports;
}

Trace generate_trace(const Scenario& scenario) {
  if (scenario.agents.empty()) throw ConfigurationError("scenario defines no agents");
  if (scenario.horizon == 0) throw ConfigurationError("horizon must be at least 1");
  for (const auto& [id, spec] : scenario.agents) {
    if (id.empty() || id.find_first_of(" \t~,;") != AgentId::npos) {
      throw ConfigurationError("agent id '" + id + "' contains reserved characters");
    }
    validate(spec.profile);
  }
  // Resolve every reference once so a bad schedule fails before any output.
  for (const auto& e : scenario.schedule) {
    lookup(scenario, e.trustor);
    const auto& trustee = lookup(scenario, e.trustee).profile;
    if (e.trials == 0) throw ConfigurationError("interaction trials must be at least 1");
    for (const auto& peer : e.peers) lookup(scenario, peer);
    switch (e.kind) {
      case EncounterKind::binary:
      case EncounterKind::opinion:
      case EncounterKind::advisor:
        if (!success_probability(trustee, 1)) {
          throw ConfigurationError("agent '" + e.trustee + "' cannot produce " +
                                   std::string(encounter_kind_name(e.kind)) + " interactions");
        }
        break;
      case EncounterKind::categorical:
        if (!std::holds_alternative<StaticCategorical>(trustee) && !success_probability(trustee, 1)) {
          throw ConfigurationError("agent '" + e.trustee + "' cannot produce categorical interactions");
        }
        break;
      case EncounterKind::voting:
        if (!std::holds_alternative<SensorReader>(trustee)) {
          throw ConfigurationError("agent '" + e.trustee + "' is not a sensor");
        }
        for (const auto& peer : e.peers) {
          if (!std::holds_alternative<SensorReader>(lookup(scenario, peer).profile)) {
            throw ConfigurationError("committee peer '" + peer + "' is not a sensor");
          }
        }
        if (e.peers.empty()) throw ConfigurationError("voting interaction with '" + e.trustee + "' has no peers");
        break;
    }
    if (e.kind == EncounterKind::advisor) {
      if (e.peers.empty()) throw ConfigurationError("advisor interaction with '" + e.trustee + "' has no advisors");
      for (const auto& peer : e.peers) {
        if (!std::holds_alternative<UnfairRater>(lookup(scenario, peer).profile)) {
          throw ConfigurationError("advisor '" + peer + "' is not a rater profile");
        }
      }
    }
  }

  Trace trace;
  trace.header.seed = scenario.seed;
  trace.header.horizon = scenario.horizon;
  for (const auto& [id, spec] : scenario.agents) trace.header.agents.emplace(id, format_profile(spec.profile));

  const RandomStream root(scenario.seed);
  for (std::uint64_t step = 1; step <= scenario.horizon; ++step) {
    for (const auto& e : scenario.schedule) {
      const auto& trustee = lookup(scenario, e.trustee).profile;
      AgentId presented = e.trustee;
      if (const auto* w = std::get_if<Whitewasher>(&trustee)) presented = whitewasher_identity(e.trustee, *w, step);
      auto rng = root.fork("pair").fork(e.trustor).fork(e.trustee).fork(step);
      switch (e.kind) {
        case EncounterKind::binary: {
          const auto m = count_successes(rng, e.trials, success_or_throw(e.trustee, trustee, step));
          trace.records.push_back({step, e.trustor, presented, BinaryBatch{e.trials, m}});
          break;
        }
        case EncounterKind::categorical: {
          std::vector<double> probs;
          if (const auto* c = std::get_if<StaticCategorical>(&trustee)) {
            probs = c->probs;
          } else {
            const double p = success_or_throw(e.trustee, trustee, step);
            probs = {p, 1.0 - p};
          }
          trace.records.push_back({step, e.trustor, presented, CategoricalBatch{draw_categories(rng, e.trials, probs)}});
          break;
        }
        case EncounterKind::opinion: {
          const auto m = count_successes(rng, e.trials, success_or_throw(e.trustee, trustee, step));
          trace.records.push_back({step, e.trustor, presented, OpinionReport{opinion_from_outcomes(m, e.trials - m)}});
          break;
        }
        case EncounterKind::voting: {
          VotingVector v;
          v.y0 = sensor_reading(e.trustee, std::get<SensorReader>(trustee), step, scenario.seed);
          for (const auto& peer : e.peers) {
            v.neighbors.push_back(
                sensor_reading(peer, std::get<SensorReader>(lookup(scenario, peer).profile), step, scenario.seed));
          }
          trace.records.push_back({step, e.trustor, presented, std::move(v)});
          break;
        }
        case EncounterKind::advisor: {
          std::vector<Advisor> advisors;
          for (const auto& peer : e.peers) {
            const auto& spec = lookup(scenario, peer);
            advisors.push_back({peer, std::get<UnfairRater>(spec.profile), spec.advisor_trust});
          }
          for (auto& report : generate_advisor_reports(e.trustee, trustee, advisors, e.trials, step, scenario.seed)) {
            trace.records.push_back({step, e.trustor, presented, report});
          }
          break;
        }
      }
    }
  }
  std::stable_sort(trace.records.begin(), trace.records.end(), [](const TraceRecord& a, const TraceRecord& b) {
    return std::tie(a.step, a.trustor, a.trustee) < std::tie(b.step, b.trustor, b.trustee);
  });
  return trace;
}

}  // namespace bayestrust::sim
