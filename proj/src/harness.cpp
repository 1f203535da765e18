#include "bayestrust/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "bayestrust/conjugate.hpp"
#include "bayestrust/error.hpp"
#include "bayestrust/opinion.hpp"
#include "bayestrust/text.hpp"
#include "bayestrust/trace_io.hpp"

namespace bayestrust {

using sim::ConfigurationError;
using text::format_real;

namespace {

const std::set<std::string> kScalarKeys = {
    // scenario
    "horizon", "trials",
    // shared
    "seed", "model", "label",
    // conjugate models
    "prior_alpha", "prior_beta", "forgetting_lambda", "prior_alphas",
    // particle models
    "transition", "particle_count", "resampling", "ess_threshold",
    // state-space dynamics and committee estimation
    "forgetting", "process_variance", "sensitivity", "tolerance_r", "ipf_max_iter", "ipf_epsilon"};

void check_known_keys(const Settings& settings) {
  for (const auto& [key, value] : settings.entries()) {
    if (kScalarKeys.count(key) != 0) continue;
    if ((key.starts_with("agent.") || key.starts_with("pair.")) && key.find('.') + 1 < key.size()) continue;
    throw ConfigurationError("unknown key '" + key + "'");
  }
}

// ---------------------------------------------------------------- scenario

bool is_sensor(const sim::AgentSpec& spec) { return std::holds_alternative<sim::SensorReader>(spec.profile); }
bool is_rater(const sim::AgentSpec& spec) { return std::holds_alternative<sim::UnfairRater>(spec.profile); }

sim::AgentSpec parse_agent(const std::string& key, const std::string& value) {
  try {
    auto tokens = text::split_whitespace(value);
    sim::AgentSpec spec;
    if (!tokens.empty() && tokens.back().starts_with("trust=")) {
      const auto t = text::parse_real(tokens.back().substr(6));
      if (!t || !(*t >= 0.0 && *t <= 1.0)) throw ConfigurationError("trust must be a number in [0, 1]");
      spec.advisor_trust = *t;
      tokens.pop_back();
    }
    std::string profile;
    for (auto tok : tokens) {
      if (!profile.empty()) profile += ' ';
      profile += tok;
    }
    spec.profile = sim::parse_profile(profile);
    return spec;
  } catch (const ConfigurationError& e) {
    throw ConfigurationError("key '" + key + "': " + e.what());
  }
}

sim::Encounter parse_pair(const std::string& key, const std::string& value, std::uint64_t default_trials,
                          const std::map<sim::AgentId, sim::AgentSpec>& agents) {
  try {
    const auto tokens = text::split_whitespace(value);
    if (tokens.size() < 2) throw ConfigurationError("expected '<trustor> <trustee> [kind] [trials=n] [peers=a,b]'");
    sim::Encounter e;
    e.trustor = std::string(tokens[0]);
    e.trustee = std::string(tokens[1]);
    e.trials = default_trials;
    bool explicit_peers = false;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const auto tok = tokens[i];
      if (tok.starts_with("trials=")) {
        const auto n = text::parse_u64(tok.substr(7));
        if (!n || *n == 0) throw ConfigurationError("trials must be a positive integer");
        e.trials = *n;
      } else if (tok.starts_with("peers=")) {
        for (auto peer : text::split(tok.substr(6), ',')) {
          if (peer.empty()) throw ConfigurationError("empty peer id");
          e.peers.emplace_back(peer);
        }
        explicit_peers = true;
      } else if (i == 2) {
        e.kind = sim::parse_encounter_kind(std::string(tok));
      } else {
        throw ConfigurationError("unexpected token '" + std::string(tok) + "'");
      }
    }
    if (!explicit_peers) {
      for (const auto& [id, spec] : agents) {
        if (id == e.trustee || id == e.trustor) continue;
        if ((e.kind == sim::EncounterKind::voting && is_sensor(spec)) ||
            (e.kind == sim::EncounterKind::advisor && is_rater(spec))) {
          e.peers.push_back(id);
        }
      }
    }
    return e;
  } catch (const ConfigurationError& e) {
    throw ConfigurationError("key '" + key + "': " + e.what());
  }
}

// ---------------------------------------------------------------- inference chains

std::string kind_phrase(const Observation& obs) {
  const std::string kind(observation_kind(obs));
  const bool vowel = kind.front() == 'a' || kind.front() == 'o';
  return (vowel ? "an " : "a ") + kind + " observation";
}

[[noreturn]] void incompatible(const ModelConfig& cfg, const Observation& obs) {
  throw ModelError("model " + model_name(cfg.kind) + " cannot use " + kind_phrase(obs));
}

class Chain {
 public:
  virtual ~Chain() = default;
  /// Called once per step with observations, before them; `elapsed` counts steps
  /// since the previous call (1 for the first).
  virtual void advance(std::uint64_t elapsed) = 0;
  virtual void observe(const Observation& obs, std::uint64_t step, std::size_t index) = 0;
  virtual void fill(ResultRow& row) const = 0;
};

class BetaChain final : public Chain {
 public:
  explicit BetaChain(const ModelConfig& cfg) : cfg_(cfg), state_(cfg.prior_alpha, cfg.prior_beta) {}

  void advance(std::uint64_t elapsed) override {
    if (started_ && cfg_.forgetting_lambda < 1.0) {
      state_ = discount_evidence(state_, std::pow(cfg_.forgetting_lambda, static_cast<double>(elapsed)));
    }
    started_ = true;
  }

  void observe(const Observation& obs, std::uint64_t, std::size_t) override {
    if (const auto* b = std::get_if<BinaryBatch>(&obs)) {
      state_ = bdtm_update(state_, *b);
    } else if (const auto* a = std::get_if<AdvisorReport>(&obs)) {
      state_ = advisor_update(state_, *a);
    } else {
      incompatible(cfg_, obs);
    }
  }

  void fill(ResultRow& row) const override {
    row.mean = posterior_mean(state_);
    row.variance = posterior_variance(state_);
    row.detail = "alpha=" + format_real(state_.alpha()) + " beta=" + format_real(state_.beta());
  }

 private:
  const ModelConfig& cfg_;
  BetaParams state_;
  bool started_ = false;
};

class DirichletChain final : public Chain {
 public:
  explicit DirichletChain(const ModelConfig& cfg) : cfg_(cfg) {
    if (!cfg.prior_alphas.empty()) state_.emplace(cfg.prior_alphas);
  }

  void advance(std::uint64_t elapsed) override {
    if (state_ && started_ && cfg_.forgetting_lambda < 1.0) {
      state_ = discount_evidence(*state_, std::pow(cfg_.forgetting_lambda, static_cast<double>(elapsed)));
    }
    started_ = true;
  }

  void observe(const Observation& obs, std::uint64_t, std::size_t) override {
    CategoricalBatch batch;
    if (const auto* b = std::get_if<BinaryBatch>(&obs)) {
      batch.counts = {b->m, b->n - b->m};
    } else if (const auto* c = std::get_if<CategoricalBatch>(&obs)) {
      batch = *c;
    } else {
      incompatible(cfg_, obs);
    }
    if (!state_) state_.emplace(std::vector<double>(batch.counts.size(), 1.0));
    state_ = ddtm_update(*state_, batch);
  }

  void fill(ResultRow& row) const override {
    row.mean = posterior_mean(*state_)[0];
    row.variance = posterior_variance(*state_)[0];
    row.detail = "alphas=";
    for (std::size_t k = 0; k < state_->size(); ++k) {
      if (k > 0) row.detail += ':';
      row.detail += format_real(state_->alpha(k));
    }
  }

 private:
  const ModelConfig& cfg_;
  std::optional<DirichletParams> state_;
  bool started_ = false;
};

class ParticleChain final : public Chain {
 public:
  ParticleChain(const ModelConfig& cfg, const RandomStream& rng)
      : cfg_(cfg), rng_(rng), voting_(cfg.sstm.sensitivity, cfg.sstm.tolerance_r) {
    if (cfg.truncnormal_transition || cfg.kind == ModelKind::sstm) {
      transition_ = std::make_unique<TruncatedNormalTransition>(cfg.sstm.forgetting, cfg.sstm.process_variance);
    } else {
      transition_ = std::make_unique<StaticTransition>();
    }
  }

  void advance(std::uint64_t elapsed) override {
    pending_elapsed_ = elapsed;
    first_in_step_ = true;
  }

  void observe(const Observation& obs, std::uint64_t step, std::size_t index) override {
    const LikelihoodModel* likelihood = nullptr;
    std::size_t dim = 1;
    if (std::holds_alternative<BinaryBatch>(obs) || std::holds_alternative<AdvisorReport>(obs) ||
        std::holds_alternative<OpinionReport>(obs)) {
      likelihood = &binomial_;
    } else if (const auto* c = std::get_if<CategoricalBatch>(&obs)) {
      if (cfg_.kind != ModelKind::gbt_pf) incompatible(cfg_, obs);
      likelihood = &multinomial_;
      dim = c->counts.size();
    } else {
      likelihood = &voting_;
    }
    if (!state_) initialize(dim);
    if (state_->dimension() != dim) {
      throw ModelError("observation dimension " + std::to_string(dim) + " does not match the particle dimension " +
                       std::to_string(state_->dimension()));
    }
    const StaticTransition hold;
    const TransitionModel* transition = &hold;
    if (first_in_step_) {
      // Steps without observations still move the state.
      for (std::uint64_t g = 1; g < pending_elapsed_; ++g) {
        *state_ = predict(*state_, *transition_, rng_.fork(2).fork(step).fork(g));
      }
      transition = transition_.get();
      first_in_step_ = false;
    }
    auto outcome = step_detailed(*state_, *transition, *likelihood, obs, rng_.fork(1).fork(step).fork(index),
                                 cfg_.filter);
    weighted_ = std::move(outcome.weighted);
    *state_ = std::move(outcome.posterior);
    ess_ = outcome.ess;
    resampled_ = outcome.resampled;
  }

  void fill(ResultRow& row) const override {
    const auto& ws = *weighted_;
    if (ws.dimension() == 1) {
      row.mean = estimate_mean(ws);
      row.variance = estimate_variance(ws);
    } else {
      double mean = 0.0;
      for (std::size_t i = 0; i < ws.size(); ++i) mean += ws.weight(i) * ws.particle(i)[0];
      double var = 0.0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const double d = ws.particle(i)[0] - mean;
        var += ws.weight(i) * d * d;
      }
      row.mean = std::clamp(mean, 0.0, 1.0);
      row.variance = var;
    }
    row.ess = ess_;
    row.detail = "particles=" + std::to_string(ws.size()) + " resampled=" + (resampled_ ? "1" : "0");
  }

 private:
  void initialize(std::size_t dim) {
    const auto prior_rng = rng_.fork(0);
    if (dim == 1) {
      state_ = sample_beta(BetaParams(cfg_.prior_alpha, cfg_.prior_beta), cfg_.particle_count, prior_rng);
    } else {
      std::vector<double> alphas = cfg_.prior_alphas;
      if (alphas.empty()) alphas.assign(dim, 1.0);
      if (alphas.size() != dim) {
        throw ModelError("prior_alphas has " + std::to_string(alphas.size()) + " categories, observation has " +
                         std::to_string(dim));
      }
      state_ = sample_dirichlet(DirichletParams(alphas), cfg_.particle_count, prior_rng);
    }
  }

  const ModelConfig& cfg_;
  RandomStream rng_;
  std::unique_ptr<TransitionModel> transition_;
  BinomialLikelihood binomial_;
  MultinomialLikelihood multinomial_;
  sstm::VotingLikelihood voting_;
  std::optional<ParticleSet> state_;
  std::optional<ParticleSet> weighted_;
  std::uint64_t pending_elapsed_ = 1;
  bool first_in_step_ = true;
  double ess_ = 0.0;
  bool resampled_ = false;
};

class OpinionChain final : public Chain {
 public:
  explicit OpinionChain(const ModelConfig& cfg)
      : cfg_(cfg), state_(dirichlet_to_opinion(DirichletParams({1.0, 1.0, 1.0}))) {}

  void advance(std::uint64_t) override {}

  void observe(const Observation& obs, std::uint64_t, std::size_t) override {
    if (const auto* o = std::get_if<OpinionReport>(&obs)) {
      state_ = fuse(state_, o->opinion);
    } else if (const auto* b = std::get_if<BinaryBatch>(&obs)) {
      state_ = observe_outcomes(state_, {b->m, 0, b->n - b->m});
    } else if (const auto* c = std::get_if<CategoricalBatch>(&obs)) {
      if (c->counts.size() != 3) {
        throw ModelError("model sltm needs 3 outcome categories, got " + std::to_string(c->counts.size()));
      }
      state_ = observe_outcomes(state_, {c->counts[0], c->counts[1], c->counts[2]});
    } else {
      incompatible(cfg_, obs);
    }
  }

  void fill(ResultRow& row) const override {
    row.mean = projected_trust(state_);
    // Variance of p_belief + p_ignorance / 2 under the bridged Dirichlet.
    const auto d = opinion_to_dirichlet(state_);
    const double ab = d.alpha(0);
    const double ai = d.alpha(1);
    const double a0 = d.total();
    const double scale = a0 * a0 * (a0 + 1.0);
    const double var_b = ab * (a0 - ab) / scale;
    const double var_i = ai * (a0 - ai) / scale;
    const double cov = -ab * ai / scale;
    row.variance = std::max(0.0, var_b + 0.25 * var_i + cov);
    row.detail = "belief=" + format_real(state_.belief()) + " disbelief=" + format_real(state_.disbelief()) +
                 " ignorance=" + format_real(state_.ignorance()) + " weight=" + format_real(state_.evidence_weight());
  }

 private:
  const ModelConfig& cfg_;
  Opinion state_;
};

std::unique_ptr<Chain> make_chain(const ModelConfig& cfg, const RandomStream& rng) {
  switch (cfg.kind) {
    case ModelKind::bdtm: return std::make_unique<BetaChain>(cfg);
    case ModelKind::ddtm: return std::make_unique<DirichletChain>(cfg);
    case ModelKind::gbt_pf:
    case ModelKind::sstm: return std::make_unique<ParticleChain>(cfg, rng);
    case ModelKind::sltm: return std::make_unique<OpinionChain>(cfg);
    case ModelKind::sstm_ipf: break;
  }
  throw std::logic_error("no chain for committee estimation");
}

std::string where(const sim::TraceRecord& r) {
  return "step " + std::to_string(r.step) + " (" + std::string(observation_kind(r.observation)) + " observation, " +
         r.trustor + " -> " + r.trustee + "): ";
}

using ChainKey = std::pair<std::string, std::string>;

// Calls fn(step, first, last) for every block of records sharing a step.
template <class Fn>
void for_each_step(const sim::Trace& trace, Fn&& fn) {
  const auto& recs = trace.records;
  std::size_t i = 0;
  while (i < recs.size()) {
    std::size_t j = i;
    while (j < recs.size() && recs[j].step == recs[i].step) ++j;
    if (j < recs.size() && recs[j].step < recs[i].step) {
      throw ModelError("step " + std::to_string(recs[j].step) + ": trace steps decrease");
    }
    fn(recs[i].step, i, j);
    i = j;
  }
}

std::vector<ResultRow> run_committee(const sim::Trace& trace, const ModelConfig& cfg) {
  const RandomStream root(cfg.seed);
  const std::string name = model_name(cfg.kind);
  std::map<ChainKey, ParticleSet> carried;
  std::vector<ResultRow> rows;
  for_each_step(trace, [&](std::uint64_t step, std::size_t first, std::size_t last) {
    std::map<std::string, std::map<std::string, const sim::TraceRecord*>> committees;
    for (std::size_t k = first; k < last; ++k) {
      const auto& r = trace.records[k];
      if (!std::holds_alternative<VotingVector>(r.observation)) {
        throw ModelError(where(r) + "model " + name + " cannot use " + kind_phrase(r.observation));
      }
      if (!committees[r.trustor].emplace(r.trustee, &r).second) {
        throw ModelError(where(r) + "member reported twice in one step");
      }
    }
    for (const auto& [trustor, members] : committees) {
      if (members.size() < 2) {
        throw ModelError(where(*members.begin()->second) + "committee needs at least 2 members");
      }
      std::vector<double> readings;
      std::vector<ParticleSet> priors;
      std::vector<std::string> ids;
      for (const auto& [member, rec] : members) {
        readings.push_back(std::get<VotingVector>(rec->observation).y0);
        ids.push_back(member);
        const auto it = carried.find({trustor, member});
        if (it != carried.end()) {
          priors.push_back(it->second);
        } else {
          priors.push_back(sample_beta(BetaParams(cfg.prior_alpha, cfg.prior_beta), cfg.sstm.particle_count,
                                       root.fork(trustor).fork(member).fork(0)));
        }
      }
      sstm::IpfResult res;
      try {
        res = sstm::ipf_estimate(readings, priors, ids, cfg.sstm, root.fork(trustor).fork("ipf").fork(step));
      } catch (const ModelError&) {
        throw;
      } catch (const std::exception& e) {
        throw ModelError(where(*members.begin()->second) + e.what());
      }
      for (std::size_t j = 0; j < ids.size(); ++j) {
        ResultRow row;
        row.step = step;
        row.trustor = trustor;
        row.trustee = ids[j];
        row.model = name;
        row.mean = res.state.trusts[j];
        row.variance = estimate_variance(res.posteriors[j]);
        row.detail = "sweeps=" + std::to_string(res.sweeps) + " converged=" + (res.converged ? "1" : "0");
        rows.push_back(std::move(row));
        carried.insert_or_assign(ChainKey{trustor, ids[j]}, std::move(res.posteriors[j]));
      }
    }
  });
  return rows;
}

std::optional<double> mean_abs(const std::vector<double>& errs) {
  if (errs.empty()) return std::nullopt;
  double s = 0.0;
  for (double e : errs) s += e;
  return s / static_cast<double>(errs.size());
}

std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

void emit(const std::string& text, const std::optional<std::string>& path, std::ostream& fallback) {
  if (!path) {
    fallback << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + *path + "' for writing");
  f << text;
  if (!f.flush()) throw std::runtime_error("failed writing '" + *path + "'");
}

}  // namespace

// ---------------------------------------------------------------- public API

sim::Scenario scenario_from_settings(const Settings& settings) {
  check_known_keys(settings);
  sim::Scenario scenario;
  scenario.horizon = settings.integer("horizon", 100);
  scenario.seed = settings.integer("seed", 0);
  const auto trials = settings.integer("trials", 1);
  if (scenario.horizon == 0) throw ConfigurationError("key 'horizon': must be at least 1");
  if (trials == 0) throw ConfigurationError("key 'trials': must be at least 1");
  for (const auto& [id, value] : settings.with_prefix("agent.")) {
    scenario.agents.emplace(id, parse_agent("agent." + id, value));
  }
  if (scenario.agents.empty()) throw ConfigurationError("no agents defined (expected agent.<id> keys)");
  for (const auto& [name, value] : settings.with_prefix("pair.")) {
    scenario.schedule.push_back(parse_pair("pair." + name, value, trials, scenario.agents));
  }
  return scenario;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "bdtm") return ModelKind::bdtm;
  if (name == "ddtm") return ModelKind::ddtm;
  if (name == "gbt-pf") return ModelKind::gbt_pf;
  if (name == "sstm") return ModelKind::sstm;
  if (name == "sstm-ipf") return ModelKind::sstm_ipf;
  if (name == "sltm") return ModelKind::sltm;
  throw ConfigurationError("key 'model': unknown model '" + name + "'");
}

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::bdtm: return "bdtm";
    case ModelKind::ddtm: return "ddtm";
    case ModelKind::gbt_pf: return "gbt-pf";
    case ModelKind::sstm: return "sstm";
    case ModelKind::sstm_ipf: return "sstm-ipf";
    case ModelKind::sltm: return "sltm";
  }
  return "bdtm";
}

ModelConfig model_config_from_settings(const Settings& settings) {
  check_known_keys(settings);
  const auto model = settings.get("model");
  if (!model) throw ConfigurationError("missing key 'model'");
  ModelConfig cfg;
  cfg.kind = parse_model_kind(*model);
  cfg.label = settings.text("label", *model);
  if (cfg.label.empty() || cfg.label.find_first_of(",\n") != std::string::npos) {
    throw ConfigurationError("key 'label': must be non-empty and free of commas");
  }
  cfg.seed = settings.integer("seed", 0);

  auto positive = [&](const std::string& key, double fallback) {
    const double v = settings.real(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigurationError("key '" + key + "': must be positive");
    return v;
  };
  cfg.prior_alpha = positive("prior_alpha", 1.0);
  cfg.prior_beta = positive("prior_beta", 1.0);
  cfg.forgetting_lambda = settings.real("forgetting_lambda", 1.0);
  if (!(cfg.forgetting_lambda >= 0.0 && cfg.forgetting_lambda <= 1.0)) {
    throw ConfigurationError("key 'forgetting_lambda': must lie in [0, 1]");
  }
  cfg.prior_alphas = settings.reals("prior_alphas");
  if (settings.contains("prior_alphas")) {
    if (cfg.prior_alphas.size() < 2) throw ConfigurationError("key 'prior_alphas': needs at least 2 categories");
    for (double a : cfg.prior_alphas) {
      if (!(a > 0.0) || !std::isfinite(a)) throw ConfigurationError("key 'prior_alphas': entries must be positive");
    }
  }

  const std::string transition = settings.text("transition", "static");
  if (transition != "static" && transition != "truncnormal") {
    throw ConfigurationError("key 'transition': expected static or truncnormal, got '" + transition + "'");
  }
  cfg.truncnormal_transition = transition == "truncnormal" || cfg.kind == ModelKind::sstm;
  const bool state_space = cfg.kind == ModelKind::sstm || cfg.kind == ModelKind::sstm_ipf;
  cfg.particle_count = settings.integer("particle_count", state_space ? 500 : 1000);
  if (cfg.particle_count == 0) throw ConfigurationError("key 'particle_count': must be positive");

  const std::string resampling = settings.text("resampling", "systematic");
  if (resampling == "systematic") {
    cfg.filter.scheme = ResamplingScheme::systematic;
  } else if (resampling == "multinomial") {
    cfg.filter.scheme = ResamplingScheme::multinomial;
  } else {
    throw ConfigurationError("key 'resampling': expected systematic or multinomial, got '" + resampling + "'");
  }
  cfg.filter.ess_threshold = settings.optional_real("ess_threshold");
  if (cfg.filter.ess_threshold && !(*cfg.filter.ess_threshold > 0.0 && *cfg.filter.ess_threshold <= 1.0)) {
    throw ConfigurationError("key 'ess_threshold': must lie in (0, 1]");
  }

  cfg.sstm.forgetting = settings.real("forgetting", cfg.sstm.forgetting);
  cfg.sstm.process_variance = settings.real("process_variance", cfg.sstm.process_variance);
  cfg.sstm.sensitivity = settings.real("sensitivity", cfg.sstm.sensitivity);
  cfg.sstm.tolerance_r = settings.real("tolerance_r", cfg.sstm.tolerance_r);
  cfg.sstm.particle_count = cfg.particle_count;
  cfg.sstm.ipf_max_iter = settings.integer("ipf_max_iter", cfg.sstm.ipf_max_iter);
  cfg.sstm.ipf_epsilon = settings.real("ipf_epsilon", cfg.sstm.ipf_epsilon);
  try {
    cfg.sstm.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigurationError("key '" + std::string(text::split_whitespace(e.what()).front()) + "': " + e.what());
  }
  return cfg;
}

std::vector<ResultRow> run_inference(const sim::Trace& trace, const ModelConfig& cfg) {
  if (cfg.kind == ModelKind::sstm_ipf) return run_committee(trace, cfg);
  const RandomStream root(cfg.seed);
  const std::string name = model_name(cfg.kind);
  struct ChainState {
    std::unique_ptr<Chain> chain;
    std::uint64_t last_step = 0;
  };
  std::map<ChainKey, ChainState> chains;
  std::vector<ResultRow> rows;
  for_each_step(trace, [&](std::uint64_t step, std::size_t first, std::size_t last) {
    std::map<ChainKey, std::vector<const sim::TraceRecord*>> groups;
    for (std::size_t k = first; k < last; ++k) {
      const auto& r = trace.records[k];
      groups[{r.trustor, r.trustee}].push_back(&r);
    }
    for (const auto& [key, recs] : groups) {
      auto& state = chains[key];
      std::uint64_t elapsed = 1;
      if (!state.chain) {
        state.chain = make_chain(cfg, root.fork(key.first).fork(key.second));
      } else {
        elapsed = step - state.last_step;
      }
      state.last_step = step;
      state.chain->advance(elapsed);
      for (std::size_t idx = 0; idx < recs.size(); ++idx) {
        try {
          state.chain->observe(recs[idx]->observation, step, idx);
        } catch (const std::exception& e) {
          throw ModelError(where(*recs[idx]) + e.what());
        }
      }
      ResultRow row;
      row.step = step;
      row.trustor = key.first;
      row.trustee = key.second;
      row.model = name;
      state.chain->fill(row);
      rows.push_back(std::move(row));
    }
  });
  return rows;
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultHeader << '\n';
  for (const auto& r : rows) {
    out << r.step << ',' << r.trustor << ',' << r.trustee << ',' << r.model << ',' << format_real(r.mean) << ','
        << format_real(r.variance) << ',' << cell(r.ess) << ',' << r.detail << '\n';
  }
}

std::optional<double> trace_ground_truth(const sim::TraceHeader& header, const std::string& trustee,
                                         std::uint64_t step) {
  const auto it = header.agents.find(sim::base_identity(trustee));
  if (it == header.agents.end()) return std::nullopt;
  try {
    return sim::ground_truth(sim::parse_profile(it->second), step);
  } catch (const ConfigurationError& e) {
    throw ModelError("trace header profile of '" + it->first + "': " + e.what());
  }
}

std::optional<std::uint64_t> trace_change_step(const sim::TraceHeader& header, const std::string& trustee) {
  const auto it = header.agents.find(sim::base_identity(trustee));
  if (it == header.agents.end()) return std::nullopt;
  sim::BehaviorProfile profile;
  try {
    profile = sim::parse_profile(it->second);
  } catch (const ConfigurationError& e) {
    throw ModelError("trace header profile of '" + it->first + "': " + e.what());
  }
  if (const auto* s = std::get_if<sim::StepChange>(&profile)) return s->change_step;
  if (const auto* s = std::get_if<sim::SensorReader>(&profile)) return s->fault_start;
  return std::nullopt;
}

CompareReport run_compare(const sim::Trace& trace, const std::vector<ModelConfig>& configs, bool timing) {
  CompareReport report;
  using RowKey = std::tuple<std::uint64_t, std::string, std::string>;
  std::map<RowKey, std::vector<std::optional<double>>> table;
  std::map<std::string, int> label_uses;
  for (std::size_t m = 0; m < configs.size(); ++m) {
    std::string label = configs[m].label.empty() ? model_name(configs[m].kind) : configs[m].label;
    if (++label_uses[label] > 1) label += "#" + std::to_string(label_uses[label]);
    report.labels.push_back(label);

    const auto start = std::chrono::steady_clock::now();
    const auto rows = run_inference(trace, configs[m]);
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;

    std::map<ChainKey, std::vector<const ResultRow*>> per_chain;
    for (const auto& r : rows) {
      auto& slot = table[{r.step, r.trustor, r.trustee}];
      slot.resize(configs.size());
      slot[m] = r.mean;
      per_chain[{r.trustor, r.trustee}].push_back(&r);
    }
    std::vector<double> all_err;
    std::vector<double> all_post;
    for (const auto& [key, chain_rows] : per_chain) {
      std::vector<double> err;
      std::vector<double> post;
      const auto change = trace_change_step(trace.header, key.second);
      for (const auto* r : chain_rows) {
        const auto truth = trace_ground_truth(trace.header, r->trustee, r->step);
        if (!truth) continue;
        err.push_back(std::abs(r->mean - *truth));
        if (change && r->step >= *change) post.push_back(err.back());
      }
      all_err.insert(all_err.end(), err.begin(), err.end());
      all_post.insert(all_post.end(), post.begin(), post.end());
      report.summary.push_back({label, key.first, key.second, chain_rows.size(), mean_abs(err), mean_abs(post),
                                chain_rows.back()->mean, std::nullopt});
    }
    CompareSummary aggregate{label, "*", "*", rows.size(), mean_abs(all_err), mean_abs(all_post),
                             std::nullopt, std::nullopt};
    if (timing) aggregate.runtime_seconds = took.count();
    report.summary.push_back(aggregate);
  }
  for (auto& [key, estimates] : table) {
    estimates.resize(configs.size());
    const auto& [step, trustor, trustee] = key;
    report.table.push_back({step, trustor, trustee, trace_ground_truth(trace.header, trustee, step), estimates});
  }
  return report;
}

void write_compare_table(std::ostream& out, const CompareReport& report) {
  out << "step,trustor,trustee,truth";
  for (const auto& l : report.labels) out << ',' << l;
  out << '\n';
  for (const auto& line : report.table) {
    out << line.step << ',' << line.trustor << ',' << line.trustee << ',' << cell(line.truth);
    for (const auto& e : line.estimates) out << ',' << cell(e);
    out << '\n';
  }
}

void write_compare_summary(std::ostream& out, const CompareReport& report) {
  bool timing = false;
  for (const auto& s : report.summary) timing = timing || s.runtime_seconds.has_value();
  out << "model,trustor,trustee,rows,mae,mae_post_change,final_mean" << (timing ? ",runtime_s" : "") << '\n';
  for (const auto& s : report.summary) {
    out << s.model << ',' << s.trustor << ',' << s.trustee << ',' << s.rows << ',' << cell(s.mae) << ','
        << cell(s.mae_post_change) << ',' << cell(s.final_mean);
    if (timing) out << ',' << cell(s.runtime_seconds);
    out << '\n';
  }
}

// ---------------------------------------------------------------- command line

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian trust inference toolkit"};
  app.require_subcommand(1);

  struct Common {
    std::vector<std::string> configs;
    std::vector<std::string> sets;
    std::vector<std::string> models;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> summary;
    std::string trace;
    bool timing = false;
  } opt;

  auto* simulate = app.add_subcommand("simulate", "Generate an interaction trace from a scenario config");
  simulate->add_option("--config", opt.configs, "Scenario config file")->expected(1);
  simulate->add_option("--seed", opt.seed, "Master seed (overrides the config)");
  simulate->add_option("--out", opt.out, "Trace output path (default: stdout)");
  simulate->add_option("--set", opt.sets, "Override a config key: key=value");

  auto* infer = app.add_subcommand("infer", "Run one inference model over a trace");
  infer->add_option("--config", opt.configs, "Model config file")->expected(1);
  infer->add_option("--model", opt.models, "Model: bdtm, ddtm, gbt-pf, sstm, sstm-ipf, sltm")->expected(1);
  infer->add_option("--seed", opt.seed, "Inference seed");
  infer->add_option("--trace", opt.trace, "Input trace file")->required();
  infer->add_option("--out", opt.out, "Results CSV path (default: stdout)");
  infer->add_option("--set", opt.sets, "Override a model key: key=value");

  auto* compare = app.add_subcommand("compare", "Run several models over one trace and score them");
  compare->add_option("--config", opt.configs, "Model config file (repeatable)");
  compare->add_option("--model", opt.models, "Model with default parameters (repeatable)");
  compare->add_option("--seed", opt.seed, "Inference seed for every model");
  compare->add_option("--trace", opt.trace, "Input trace file")->required();
  compare->add_option("--out", opt.out, "Per-step table path (default: stdout)");
  compare->add_option("--summary", opt.summary, "Summary CSV path (default: after the table on stdout)");
  compare->add_option("--set", opt.sets, "Override a key in every model config: key=value");
  compare->add_flag("--timing", opt.timing, "Add wall-clock runtime to the summary (not deterministic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "bayestrust: " << e.what() << '\n';
    return 2;
  }

  try {
    Settings overrides;
    for (const auto& s : opt.sets) {
      auto [k, v] = Settings::parse_assignment(s);
      overrides.set(k, v);
    }
    if (opt.seed) overrides.set("seed", std::to_string(*opt.seed));

    if (simulate->parsed()) {
      Settings settings;
      if (!opt.configs.empty()) settings = Settings::load(opt.configs.front());
      settings.merge(overrides);
      const auto scenario = scenario_from_settings(settings);
      const auto trace = sim::generate_trace(scenario);
      std::ostringstream buf;
      write_trace(buf, trace);
      emit(buf.str(), opt.out, out);
      return 0;
    }

    if (infer->parsed()) {
      Settings settings;
      if (!opt.configs.empty()) settings = Settings::load(opt.configs.front());
      settings.merge(overrides);
      if (!opt.models.empty()) settings.set("model", opt.models.front());
      const auto cfg = model_config_from_settings(settings);
      const auto trace = load_trace(opt.trace);
      std::ostringstream buf;
      write_results(buf, run_inference(trace, cfg));
      emit(buf.str(), opt.out, out);
      return 0;
    }

    // compare: every config is validated before the trace is touched.
    std::vector<ModelConfig> configs;
    for (const auto& path : opt.configs) {
      Settings settings = Settings::load(path);
      settings.merge(overrides);
      try {
        configs.push_back(model_config_from_settings(settings));
      } catch (const ConfigurationError& e) {
        throw ConfigurationError(path + ": " + e.what());
      }
    }
    for (const auto& m : opt.models) {
      Settings settings = overrides;
      settings.set("model", m);
      configs.push_back(model_config_from_settings(settings));
    }
    if (configs.empty()) throw ConfigurationError("compare needs at least one --config or --model");
    const auto trace = load_trace(opt.trace);
    const auto report = run_compare(trace, configs, opt.timing);
    std::ostringstream table;
    write_compare_table(table, report);
    std::ostringstream summary;
    write_compare_summary(summary, report);
    if (opt.summary) {
      emit(table.str(), opt.out, out);
      emit(summary.str(), opt.summary, out);
    } else if (opt.out) {
      emit(table.str(), opt.out, out);
      out << summary.str();
    } else {
      out << table.str() << '\n' << summary.str();
    }
    return 0;
  } catch (const ConfigurationError& e) {
    err << "bayestrust: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "bayestrust: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace bayestrust
