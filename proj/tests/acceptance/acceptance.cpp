// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Reference values are computed here from closed forms, never through the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "bayestrust/conjugate.hpp"
#include "bayestrust/decision.hpp"
#include "bayestrust/filter.hpp"
#include "bayestrust/harness.hpp"
#include "bayestrust/opinion.hpp"
#include "bayestrust/particles.hpp"
#include "bayestrust/simulator.hpp"
#include "bayestrust/sstm.hpp"
#include "bayestrust/trace_io.hpp"

using namespace bayestrust;

namespace {

// Pinned tolerances.
constexpr int kSeeds = 50;
constexpr double kOracleMeanTol = 0.02;
constexpr double kOracleVarRelTol = 0.30;
constexpr int kOracleMinPass = 48;
constexpr double kOracleBudget = 10.0;
constexpr int kFuzzCases = 1000;
constexpr double kAdvisorBudget = 1.0;
constexpr double kTrackDrop = 0.3;
constexpr double kTrackControl = 0.1;
constexpr int kTrackMinPass = 45;
constexpr double kTrackBudget = 30.0;
constexpr int kIpfMinPass = 45;
constexpr double kIpfHonestFloor = 0.9;
constexpr int kIpfSteps = 30;
constexpr double kIpfBudget = 60.0;
constexpr int kBridgeCases = 10000;
constexpr double kBridgeTol = 1e-12;
constexpr double kConjugateEuTol = 1e-9;
constexpr double kMcSigmas = 3.0;
constexpr double kForgettingTol = 0.05;

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Verdict conjugate_oracle() {
  const auto t0 = Clock::now();
  const StaticTransition still;
  const BinomialLikelihood binomial;
  int pass = 0;
  double worst_mean = 0.0;
  double worst_var = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 gen(1000 + seed);
    const double p = std::uniform_real_distribution<double>(0.05, 0.95)(gen);
    const RandomStream root(static_cast<std::uint64_t>(seed));
    auto ps = sample_beta(BetaParams(1.0, 1.0), 10000, root.fork("prior"));
    double a = 1.0;
    double b = 1.0;
    for (int k = 0; k < 20; ++k) {
      const auto n = std::uniform_int_distribution<std::uint64_t>(1, 20)(gen);
      const auto m = std::binomial_distribution<std::uint64_t>(n, p)(gen);
      ps = step(ps, still, binomial, BinaryBatch{n, m}, root.fork("step").fork(k));
      a += static_cast<double>(m);
      b += static_cast<double>(n - m);
    }
    const double mean = a / (a + b);
    const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    const double em = std::abs(estimate_mean(ps).value() - mean);
    const double ev = std::abs(estimate_variance(ps) - var) / var;
    worst_mean = std::max(worst_mean, em);
    worst_var = std::max(worst_var, ev);
    pass += em < kOracleMeanTol && ev < kOracleVarRelTol;
  }
  const double secs = seconds_since(t0);
  return {pass >= kOracleMinPass && secs < kOracleBudget,
          fmt("%d/%d seeds, worst mean err %.4f, worst rel var err %.3f, %.2fs", pass, kSeeds, worst_mean, worst_var,
              secs)};
}

Verdict exact_updates() {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> conc(0.05, 20.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto count = [&](std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(0, hi)(gen); };
  int bad_bdtm = 0;
  int bad_ddtm = 0;
  int bad_adv = 0;
  int bad_obs = 0;
  int bad_split = 0;
  int bad_adv_split = 0;
  for (int c = 0; c < kFuzzCases; ++c) {
    const double a = conc(gen);
    const double b = conc(gen);
    const auto n1 = count(40);
    const auto m1 = count(n1);
    const auto n2 = count(40);
    const auto m2 = count(n2);

    const auto post = bdtm_update(BetaParams(a, b), BinaryBatch{n1, m1});
    bad_bdtm += !(post.alpha() == a + static_cast<double>(m1) && post.beta() == b + static_cast<double>(n1 - m1));
    const auto two = bdtm_update(bdtm_update(BetaParams(a, b), BinaryBatch{n1, m1}), BinaryBatch{n2, m2});
    const auto one = bdtm_update(BetaParams(a, b), BinaryBatch{n1 + n2, m1 + m2});
    bad_split += !(two.alpha() == one.alpha() && two.beta() == one.beta());

    const double t = unit(gen);
    const auto adv = advisor_update(BetaParams(a, b), AdvisorReport{t, n1, m1});
    bad_adv += !(adv.alpha() == a + t * static_cast<double>(m1) &&
                 adv.beta() == b + t * static_cast<double>(n1 - m1));
    // t * m1 + t * m2 and t * (m1 + m2) may differ in the last bit, so this split is held to 1e-12.
    const auto adv2 = advisor_update(adv, AdvisorReport{t, n2, m2});
    const auto adv1 = advisor_update(BetaParams(a, b), AdvisorReport{t, n1 + n2, m1 + m2});
    bad_adv_split += !(std::abs(adv2.alpha() - adv1.alpha()) <= 1e-12 * adv1.alpha() &&
                       std::abs(adv2.beta() - adv1.beta()) <= 1e-12 * adv1.beta());

    const std::size_t k = 2 + gen() % 5;
    std::vector<double> alphas(k);
    std::vector<std::uint64_t> x(k);
    std::vector<std::uint64_t> y(k);
    for (std::size_t i = 0; i < k; ++i) {
      alphas[i] = conc(gen);
      x[i] = count(30);
      y[i] = count(30);
    }
    const auto d = ddtm_update(DirichletParams(alphas), CategoricalBatch{x});
    std::vector<std::uint64_t> xy(k);
    for (std::size_t i = 0; i < k; ++i) {
      bad_ddtm += d.alpha(i) != alphas[i] + static_cast<double>(x[i]);
      xy[i] = x[i] + y[i];
    }
    const auto d2 = ddtm_update(d, CategoricalBatch{y});
    const auto d1 = ddtm_update(DirichletParams(alphas), CategoricalBatch{xy});
    bad_split += d2.alphas() != d1.alphas();

    // Opinion update: the bridged Dirichlet D(w b, w i, w d) gains the counts.
    const double u1 = unit(gen);
    const double u2 = unit(gen);
    const double lo = std::min(u1, u2);
    const double hi = std::max(u1, u2);
    const double w = std::pow(10.0, -1.0 + 4.0 * unit(gen));
    const Opinion o(lo, 1.0 - hi, hi - lo, w);
    const std::array<std::uint64_t, 3> cnt{count(25), count(25), count(25)};
    const double eb = std::max(w * o.belief(), kOpinionEvidenceFloor) + static_cast<double>(cnt[0]);
    const double ei = std::max(w * o.ignorance(), kOpinionEvidenceFloor) + static_cast<double>(cnt[1]);
    const double ed = std::max(w * o.disbelief(), kOpinionEvidenceFloor) + static_cast<double>(cnt[2]);
    const double total = eb + ei + ed;
    const auto op = observe_outcomes(o, cnt);
    bad_obs += !(op.belief() == eb / total && op.ignorance() == ei / total && op.disbelief() == ed / total &&
                 op.evidence_weight() == total);
  }
  const bool ok = bad_bdtm + bad_ddtm + bad_adv + bad_obs + bad_split + bad_adv_split == 0;
  return {ok, fmt("%d cases; mismatches bdtm %d ddtm %d advisor %d opinion %d split %d advisor-split %d", kFuzzCases,
                  bad_bdtm, bad_ddtm, bad_adv, bad_obs, bad_split, bad_adv_split)};
}

Verdict advisor_discounting() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> conc(0.2, 15.0);
  int failures = 0;
  int cases = 0;
  for (int c = 0; c < 100; ++c) {
    const BetaParams prior(conc(gen), conc(gen));
    const auto n = std::uniform_int_distribution<std::uint64_t>(1, 60)(gen);
    const auto m = std::uniform_int_distribution<std::uint64_t>(0, n)(gen);
    ++cases;
    const auto zero = advisor_update(prior, AdvisorReport{0.0, n, m});
    const auto full = advisor_update(prior, AdvisorReport{1.0, n, m});
    const auto direct = bdtm_update(prior, BinaryBatch{n, m});
    bool ok = zero.alpha() == prior.alpha() && zero.beta() == prior.beta();
    ok = ok && full.alpha() == direct.alpha() && full.beta() == direct.beta();
    const double target = static_cast<double>(m) / static_cast<double>(n);
    const double start = prior.alpha() / (prior.alpha() + prior.beta());
    double prev_gap = std::abs(start - target);
    double prev_mean = start;
    for (int s = 0; s <= 100; ++s) {
      const auto post = advisor_update(prior, AdvisorReport{s / 100.0, n, m});
      const double mean = posterior_mean(post).value();
      const double gap = std::abs(mean - target);
      // Never overshoots the report and never moves away from it.
      ok = ok && gap <= prev_gap + 1e-15 && (mean - prev_mean) * (target - start) >= -1e-15;
      prev_gap = gap;
      prev_mean = mean;
    }
    failures += !ok;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < kAdvisorBudget,
          fmt("%d/%d cases hold endpoints and monotonicity over 101 points, %.3fs", cases - failures, cases, secs)};
}

double mean_over(const std::vector<double>& v, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t k = from; k <= to; ++k) s += v[k];
  return s / static_cast<double>(to - from + 1);
}

Verdict sstm_tracking() {
  const auto t0 = Clock::now();
  const sstm::SstmConfig cfg;  // alpha 0.85, Q 0.01, beta 0.2, N 500, r 1
  const double r = cfg.tolerance_r;
  const std::vector<std::string> ids{"t", "n1", "n2", "n3", "n4"};
  int drop_pass = 0;
  int control_pass = 0;
  double min_drop = 1.0;
  double max_control = 0.0;
  for (int fault = 1; fault >= 0; --fault) {
    for (int seed = 0; seed < kSeeds; ++seed) {
      std::vector<sim::SensorReader> members(ids.size());
      for (auto& m : members) {
        m.truth.base = 20.0;
        m.noise_sd = r / 4.0;
      }
      if (fault) {
        members[0].fault_offset = 10.0 * r;
        members[0].fault_start = 100;
      }
      const RandomStream rng(static_cast<std::uint64_t>(seed));
      auto ps = sample_beta(BetaParams(1.0, 1.0), cfg.particle_count, rng.fork("prior"));
      std::vector<double> means(201, 0.0);
      for (std::uint64_t k = 1; k <= 200; ++k) {
        const auto obs = sim::generate_committee_readings(ids, members, k, static_cast<std::uint64_t>(seed));
        ps = sstm::sstm_step(ps, obs[0], cfg, rng.fork(k));
        means[k] = estimate_mean(ps).value();
      }
      const double diff = mean_over(means, 50, 100) - mean_over(means, 130, 200);
      if (fault) {
        drop_pass += diff >= kTrackDrop;
        min_drop = std::min(min_drop, diff);
      } else {
        control_pass += std::abs(diff) < kTrackControl;
        max_control = std::max(max_control, std::abs(diff));
      }
    }
  }
  const double secs = seconds_since(t0);
  return {drop_pass >= kTrackMinPass && control_pass == kSeeds && secs < kTrackBudget,
          fmt("drop >= %.1f in %d/%d seeds (min %.3f), control |diff| < %.1f in %d/%d (max %.3f), %.2fs", kTrackDrop,
              drop_pass, kSeeds, min_drop, kTrackControl, control_pass, kSeeds, max_control, secs)};
}

struct IpfTally {
  int faulty_min = 0;
  int honest_ok = 0;
  double min_honest = 1.0;
};

IpfTally ipf_trial(const sstm::SstmConfig& cfg, int steps) {
  const double r = cfg.tolerance_r;
  const std::vector<std::string> ids{"s0", "s1", "s2", "s3", "s4"};
  IpfTally tally;
  for (int seed = 0; seed < kSeeds; ++seed) {
    for (int fault = 0; fault < 2; ++fault) {
      std::vector<sim::SensorReader> members(ids.size());
      for (auto& m : members) {
        m.truth.base = 20.0;
        m.noise_sd = r / 4.0;
      }
      if (fault) {
        members[2].fault_offset = 10.0 * r;
        members[2].fault_start = 1;
      }
      const RandomStream rng(static_cast<std::uint64_t>(seed));
      std::vector<ParticleSet> priors;
      for (const auto& id : ids) priors.push_back(sample_beta(BetaParams(1.0, 1.0), cfg.particle_count, rng.fork(id)));
      sstm::IpfResult res;
      for (int k = 1; k <= steps; ++k) {
        std::vector<double> y;
        for (std::size_t j = 0; j < ids.size(); ++j) {
          y.push_back(sim::sensor_reading(ids[j], members[j], static_cast<std::uint64_t>(k),
                                          static_cast<std::uint64_t>(seed)));
        }
        res = sstm::ipf_estimate(y, priors, ids, cfg, rng.fork("ipf").fork(k));
        priors = res.posteriors;
      }
      const auto& t = res.state.trusts;
      if (fault) {
        bool strict = true;
        for (std::size_t j = 0; j < t.size(); ++j) strict = strict && (j == 2 || t[j].value() > t[2].value());
        tally.faulty_min += strict;
      } else {
        bool ok = res.converged;
        for (const auto& x : t) {
          ok = ok && x.value() >= kIpfHonestFloor;
          tally.min_honest = std::min(tally.min_honest, x.value());
        }
        tally.honest_ok += ok;
      }
    }
  }
  return tally;
}

sstm::SstmConfig ipf_config() {
  // Static trust with slow drift, tracked over several readings. The default
  // forgetting pulls honest trust toward 0.6 and cannot clear 0.9.
  sstm::SstmConfig cfg;
  cfg.forgetting = 1.0;
  cfg.process_variance = 0.001;
  cfg.ipf_max_iter = 20;
  return cfg;
}

Verdict ipf() {
  const auto t0 = Clock::now();
  const auto tally = ipf_trial(ipf_config(), kIpfSteps);
  const double secs = seconds_since(t0);
  return {tally.faulty_min >= kIpfMinPass && tally.honest_ok == kSeeds && secs < kIpfBudget,
          fmt("faulty strict minimum %d/%d, honest all >= %.1f and converged %d/%d (min %.3f), %.2fs",
              tally.faulty_min, kSeeds, kIpfHonestFloor, tally.honest_ok, kSeeds, tally.min_honest, secs)};
}

bool close(const Opinion& a, const Opinion& b, double tol) {
  return std::abs(a.belief() - b.belief()) <= tol && std::abs(a.disbelief() - b.disbelief()) <= tol &&
         std::abs(a.ignorance() - b.ignorance()) <= tol &&
         std::abs(a.evidence_weight() - b.evidence_weight()) <= tol * std::max(1.0, b.evidence_weight());
}

Verdict opinion_bridge() {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    const double x = unit(gen);
    const double y = unit(gen);
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    return Opinion(lo, 1.0 - hi, hi - lo, std::pow(10.0, -1.0 + 5.0 * unit(gen)));
  };
  int round = 0;
  int comm = 0;
  int assoc = 0;
  int commute = 0;
  for (int c = 0; c < kBridgeCases; ++c) {
    const auto a = draw();
    const auto b = draw();
    const auto d = draw();
    round += !close(dirichlet_to_opinion(opinion_to_dirichlet(a)), a, kBridgeTol);
    comm += !(fuse(a, b) == fuse(b, a));
    assoc += !close(fuse(fuse(a, b), d), fuse(a, fuse(b, d)), kBridgeTol);
    const std::array<std::uint64_t, 3> n{gen() % 40, gen() % 40, gen() % 40};
    const auto via = dirichlet_to_opinion(ddtm_update(opinion_to_dirichlet(a), CategoricalBatch{{n[0], n[1], n[2]}}));
    commute += !close(observe_outcomes(a, n), via, kBridgeTol);
  }
  return {round + comm + assoc + commute == 0,
          fmt("%d opinions; failures round-trip %d commutativity %d associativity %d observe/ddtm %d", kBridgeCases,
              round, comm, assoc, commute)};
}

Verdict decision_layer() {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> conc(0.3, 30.0);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  double worst_conj = 0.0;
  int conj_bad = 0;
  for (int c = 0; c < 100; ++c) {
    const double a = conc(gen);
    const double b = conc(gen);
    const double u0 = coef(gen);
    const double u1 = coef(gen);
    const double eu = expected_utility(BetaParams(a, b), UtilityFunction([=](double t) { return u0 + u1 * t; }));
    const double err = std::abs(eu - (u0 + u1 * a / (a + b)));
    worst_conj = std::max(worst_conj, err);
    conj_bad += err >= kConjugateEuTol;

    std::vector<double> alphas(3);
    std::vector<double> w(3);
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      alphas[k] = conc(gen);
      w[k] = coef(gen);
      sum += alphas[k];
    }
    auto vec = [=](std::span<const double> t) { return u0 + w[0] * t[0] + w[1] * t[1] + w[2] * t[2]; };
    const double deu = expected_utility(DirichletParams(alphas), UtilityFunction(UtilityFunction::Vector(vec)));
    const double dref = u0 + (w[0] * alphas[0] + w[1] * alphas[1] + w[2] * alphas[2]) / sum;
    worst_conj = std::max(worst_conj, std::abs(deu - dref));
    conj_bad += std::abs(deu - dref) >= kConjugateEuTol;
  }

  int mc_bad = 0;
  double worst_sigma = 0.0;
  for (int c = 0; c < 20; ++c) {
    const double a = conc(gen);
    const double b = conc(gen);
    const double u0 = coef(gen);
    const double u1 = coef(gen);
    const auto ps = sample_beta(BetaParams(a, b), 10000, RandomStream(300 + c));
    const double eu = expected_utility(ps, UtilityFunction([=](double t) { return u0 + u1 * t; }));
    const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
    const double se = std::abs(u1) * sd / std::sqrt(10000.0);
    const double z = std::abs(eu - (u0 + u1 * a / (a + b))) / se;
    worst_sigma = std::max(worst_sigma, z);
    mc_bad += z >= kMcSigmas;
  }

  int shift_bad = 0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t k = 2 + gen() % 4;
    std::vector<Candidate> plain;
    std::vector<Candidate> shifted;
    const double shift = coef(gen) * 100.0;
    for (std::size_t i = 0; i < k; ++i) {
      const BetaParams post(conc(gen), conc(gen));
      const double g = coef(gen);
      const double h = coef(gen);
      auto u = [=](double t) { return g * t + h * t * t; };
      plain.push_back({post, UtilityFunction(u)});
      shifted.push_back({post, UtilityFunction([=](double t) { return u(t) + shift; })});
    }
    shift_bad += choose_action(plain) != choose_action(shifted);
  }
  return {conj_bad == 0 && mc_bad == 0 && shift_bad == 0,
          fmt("conjugate worst err %.2e, particle worst %.2f se (%d/20 over %.0f), shift changed %d/100 choices",
              worst_conj, worst_sigma, mc_bad, kMcSigmas, shift_bad)};
}

Verdict forgetting() {
  const TruncatedNormalTransition tn(0.85, 1e-6);
  auto ps = point_mass(0.5, 10000);
  const RandomStream rng(8);
  for (int k = 1; k <= 5; ++k) ps = predict(ps, tn, rng.fork(k));
  const double expected = std::pow(0.85, 5) * 0.5;
  const double got = estimate_mean(ps).value();
  return {std::abs(got - expected) < kForgettingTol, fmt("mean %.6f vs %.6f after 5 steps", got, expected)};
}

// ---------------------------------------------------------------------------

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bayestrust");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("bayestrust-accept-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto cfg = dir / "scenario.cfg";
  std::ofstream(cfg) << "horizon = 60\nseed = 314\ntrials = 8\n"
                        "agent.obs = honest\n"
                        "agent.b = step p_before=0.85 p_after=0.3 change_step=30\n"
                        "agent.c = categorical probs=0.6:0.3:0.1\n"
                        "agent.r = unfair bias=-0.4 trust=0.7\n"
                        "agent.s1 = sensor base=20 noise_sd=0.25\n"
                        "agent.s2 = sensor base=20 noise_sd=0.25\n"
                        "agent.s3 = sensor base=20 noise_sd=0.25 fault_offset=10 fault_start=20\n"
                        "pair.direct = obs b\n"
                        "pair.second = obs b advisor\n"
                        "pair.op = obs b opinion\n"
                        "pair.cat = obs c categorical\n"
                        "pair.vote = obs s3 voting\n";
  const auto t1 = (dir / "a.tsv").string();
  const auto t2 = (dir / "b.tsv").string();
  bool ok = cli({"simulate", "--config", cfg.string(), "--out", t1}) == 0;
  ok = ok && cli({"simulate", "--config", cfg.string(), "--out", t2}) == 0;
  const bool same_trace = ok && slurp(t1) == slurp(t2) && !slurp(t1).empty();

  bool same_results = true;
  for (const char* model : {"gbt-pf", "sltm"}) {
    const auto r1 = (dir / (std::string(model) + "1.csv")).string();
    const auto r2 = (dir / (std::string(model) + "2.csv")).string();
    auto trace = t1;
    if (std::string(model) == "sltm") {
      // sltm has no use for voting or advisor records.
      const auto sub = [&] {
        auto t = load_trace(t1);
        std::erase_if(t.records, [](const sim::TraceRecord& r) {
          return std::holds_alternative<VotingVector>(r.observation) ||
                 std::holds_alternative<AdvisorReport>(r.observation);
        });
        return t;
      }();
      trace = (dir / "sub.tsv").string();
      save_trace(trace, sub);
    }
    ok = ok && cli({"infer", "--model", model, "--seed", "17", "--trace", trace, "--out", r1}) == 0;
    ok = ok && cli({"infer", "--model", model, "--seed", "17", "--trace", trace, "--out", r2}) == 0;
    same_results = same_results && ok && slurp(r1) == slurp(r2) && !slurp(r1).empty();
  }

  bool lossless = false;
  std::size_t kinds = 0;
  if (ok) {
    const auto t = load_trace(t1);
    std::array<bool, 5> seen{};
    for (const auto& r : t.records) seen[r.observation.index()] = true;
    kinds = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
    std::ostringstream text;
    write_trace(text, t);
    std::istringstream back(text.str());
    lossless = read_trace(back) == t && text.str() == slurp(t1);
  }
  fs::remove_all(dir);
  return {ok && same_trace && same_results && lossless && kinds == 5,
          fmt("identical traces %s, identical results %s, round-trip %s over %zu observation kinds",
              same_trace ? "yes" : "no", same_results ? "yes" : "no", lossless ? "lossless" : "lossy", kinds)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"conjugate oracle", conjugate_oracle},  {"exact conjugate updates", exact_updates},
      {"advisor discounting", advisor_discounting}, {"sstm tracking", sstm_tracking},
      {"iterative particle filter", ipf},       {"opinion bridge", opinion_bridge},
      {"decision layer", decision_layer},       {"forgetting dynamics", forgetting},
      {"determinism and trace io", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail.c_str());
    std::fflush(stdout);
  }

  // Not a criterion: how the same committee fares under the default dynamics.
  const auto dflt = ipf_trial(sstm::SstmConfig{}, kIpfSteps);
  std::printf("info ipf at default dynamics: faulty strict minimum %d/%d, honest all >= %.1f %d/%d (min %.3f)\n",
              dflt.faulty_min, kSeeds, kIpfHonestFloor, dflt.honest_ok, kSeeds, dflt.min_honest);
  return failed == 0 ? 0 : 1;
}
