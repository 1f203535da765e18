#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bayestrust/simulator.hpp"

using namespace bayestrust;
using namespace bayestrust::sim;

namespace {

Scenario single_pair(const BehaviorProfile& trustee, std::uint64_t horizon, std::uint64_t trials = 1,
                     std::uint64_t seed = 1) {
  Scenario s;
  s.agents["a"] = {UnfairRater{0.0}};
  s.agents["t"] = {trustee};
  s.schedule.push_back({"a", "t", EncounterKind::binary, trials, {}});
  s.horizon = horizon;
  s.seed = seed;
  return s;
}

double success_rate(const Trace& trace, std::uint64_t from, std::uint64_t to) {
  double n = 0;
  double m = 0;
  for (const auto& r : trace.records) {
    if (r.step < from || r.step > to) continue;
    const auto& b = std::get<BinaryBatch>(r.observation);
    n += b.n;
    m += b.m;
  }
  return m / n;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(validate(StaticBernoulli{1.5}), ConfigurationError);
  CHECK_THROWS_AS(validate(StepChange{0.5, -0.1, 3}), ConfigurationError);
  CHECK_THROWS_AS(validate(StepChange{0.5, 0.5, 0}), ConfigurationError);
  CHECK_THROWS_AS(validate(UnfairRater{1.5}), ConfigurationError);
  CHECK_THROWS_AS(validate(Whitewasher{0, 0.5}), ConfigurationError);
  CHECK_THROWS_AS(validate(StaticCategorical{{0.5, 0.6}}), ConfigurationError);
  SensorReader bad;
  bad.noise_sd = -1.0;
  CHECK_THROWS_AS(validate(bad), ConfigurationError);
}

TEST_CASE("profile text round-trips") {
  SensorReader sensor;
  sensor.truth = {21.5, 0.75, 40.0};
  sensor.noise_sd = 0.25;
  sensor.fault_offset = 10.0;
  sensor.fault_start = 100;
  const std::vector<BehaviorProfile> profiles{StaticBernoulli{0.8},   StepChange{0.9, 0.2, 50}, sensor,
                                              SensorReader{},         UnfairRater{-0.35},       Whitewasher{12, 0.1},
                                              StaticCategorical{{0.1, 0.2, 0.7}}};
  for (const auto& p : profiles) {
    const auto text = format_profile(p);
    CHECK(format_profile(parse_profile(text)) == text);
    CHECK(parse_profile(text).index() == p.index());
  }
  CHECK(std::get<UnfairRater>(parse_profile("honest")).reported_success_bias == 0.0);
  CHECK(std::get<StepChange>(parse_profile("step p_before=0.9 p_after=0.2 change_step=50")).change_step == 50);
  CHECK_THROWS_WITH_AS(parse_profile("gremlin p=1"), doctest::Contains("gremlin"), ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_profile("static q=1"), doctest::Contains("'p'"), ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_profile("static p=1 q=2"), doctest::Contains("'q'"), ConfigurationError);
  CHECK_THROWS_AS(parse_profile("static p=abc"), ConfigurationError);
}

TEST_CASE("ground truth") {
  CHECK(*ground_truth(StepChange{0.9, 0.2, 5}, 4) == 0.9);
  CHECK(*ground_truth(StepChange{0.9, 0.2, 5}, 5) == 0.2);
  SensorReader s;
  s.fault_start = 10;
  CHECK(*ground_truth(s, 9) == 1.0);
  CHECK(*ground_truth(s, 10) == 0.0);
  CHECK(*ground_truth(StaticCategorical{{0.1, 0.9}}, 1) == 0.1);
  CHECK_FALSE(ground_truth(UnfairRater{0.0}, 1).has_value());
}

TEST_CASE("p = 1 always succeeds") {
  const auto trace = generate_trace(single_pair(StaticBernoulli{1.0}, 50, 7));
  REQUIRE(trace.records.size() == 50);
  for (const auto& r : trace.records) {
    const auto& b = std::get<BinaryBatch>(r.observation);
    CHECK(b.n == 7);
    CHECK(b.m == 7);
  }
}

TEST_CASE("empirical success rate") {
  const auto trace = generate_trace(single_pair(StaticBernoulli{0.8}, 10000, 1, 3));
  CHECK(std::abs(success_rate(trace, 1, 10000) - 0.8) < 0.012);
}

TEST_CASE("step change rates on both sides") {
  const auto trace = generate_trace(single_pair(StepChange{0.9, 0.2, 201}, 400, 20, 5));
  const double n = 200.0 * 20.0;
  const double before = success_rate(trace, 1, 200);
  const double after = success_rate(trace, 201, 400);
  CHECK(std::abs(before - 0.9) < 3.0 * std::sqrt(0.9 * 0.1 / n));
  CHECK(std::abs(after - 0.2) < 3.0 * std::sqrt(0.2 * 0.8 / n));
}

TEST_CASE("seeded determinism and substream isolation") {
  auto s = single_pair(StaticBernoulli{0.5}, 100, 5, 9);
  CHECK(generate_trace(s) == generate_trace(s));
  s.seed = 10;
  CHECK_FALSE(generate_trace(s) == generate_trace(single_pair(StaticBernoulli{0.5}, 100, 5, 9)));

  // Adding an unrelated agent and pair leaves the original pair's draws alone.
  const auto base = generate_trace(single_pair(StaticBernoulli{0.5}, 100, 5, 9));
  auto bigger = single_pair(StaticBernoulli{0.5}, 100, 5, 9);
  bigger.agents["c"] = {StaticBernoulli{0.3}};
  bigger.schedule.push_back({"a", "c", EncounterKind::binary, 5, {}});
  const auto more = generate_trace(bigger);
  std::vector<TraceRecord> kept;
  for (const auto& r : more.records) {
    if (r.trustee == "t") kept.push_back(r);
  }
  CHECK(kept == base.records);
}

TEST_CASE("records are ordered by step, trustor, trustee") {
  Scenario s;
  s.agents["z"] = {UnfairRater{0.0}};
  s.agents["b"] = {StaticBernoulli{0.5}};
  s.agents["a"] = {StaticBernoulli{0.5}};
  s.schedule.push_back({"z", "b", EncounterKind::binary, 1, {}});
  s.schedule.push_back({"z", "a", EncounterKind::binary, 1, {}});
  s.schedule.push_back({"b", "a", EncounterKind::binary, 1, {}});
  s.horizon = 20;
  const auto t = generate_trace(s);
  CHECK(t.records.size() == 60);
  CHECK(std::is_sorted(t.records.begin(), t.records.end(), [](const TraceRecord& x, const TraceRecord& y) {
    return std::tie(x.step, x.trustor, x.trustee) < std::tie(y.step, y.trustor, y.trustee);
  }));
}

TEST_CASE("scenario errors") {
  Scenario s = single_pair(StaticBernoulli{0.5}, 10);
  s.schedule.push_back({"a", "ghost", EncounterKind::binary, 1, {}});
  CHECK_THROWS_WITH_AS(generate_trace(s), doctest::Contains("ghost"), ConfigurationError);
  Scenario empty;
  CHECK_THROWS_AS(generate_trace(empty), ConfigurationError);
  Scenario zero = single_pair(StaticBernoulli{0.5}, 0);
  CHECK_THROWS_AS(generate_trace(zero), ConfigurationError);
  Scenario wrong = single_pair(StaticBernoulli{0.5}, 10);
  wrong.schedule.front().kind = EncounterKind::voting;
  wrong.schedule.front().peers = {"a"};
  CHECK_THROWS_AS(generate_trace(wrong), ConfigurationError);
}

TEST_CASE("committee readings") {
  const std::vector<AgentId> ids{"s0", "s1", "s2", "s3"};
  std::vector<SensorReader> clean(4);
  for (auto& r : clean) r.truth.base = 20.0;
  const auto v = generate_committee_readings(ids, clean, 5, 1);
  REQUIRE(v.size() == 4);
  for (const auto& m : v) {
    CHECK(m.y0 == 20.0);
    CHECK(m.neighbors == std::vector<double>(3, 20.0));
  }
  CHECK_THROWS_AS(generate_committee_readings({"s0"}, {SensorReader{}}, 1, 1), ConfigurationError);

  // A 10 r offset with noise r / 4 stands at least 5 r off the committee median.
  const double r = 1.0;
  std::vector<SensorReader> members(5);
  for (auto& m : members) {
    m.truth.base = 20.0;
    m.noise_sd = r / 4;
  }
  members[2].fault_offset = 10 * r;
  members[2].fault_start = 1;
  const std::vector<AgentId> five{"s0", "s1", "s2", "s3", "s4"};
  int far = 0;
  for (std::uint64_t step = 1; step <= 1000; ++step) {
    const auto c = generate_committee_readings(five, members, step, 2);
    std::vector<double> ys;
    for (const auto& m : c) ys.push_back(m.y0);
    std::vector<double> sorted = ys;
    std::sort(sorted.begin(), sorted.end());
    far += std::abs(ys[2] - sorted[2]) >= 5 * r;
  }
  CHECK(far >= 990);
}

TEST_CASE("healthy sensors are statistically alike") {
  SensorReader m;
  m.truth = {20.0, 0.0, 100.0};
  m.noise_sd = 0.5;
  std::vector<double> a;
  std::vector<double> b;
  for (std::uint64_t step = 1; step <= 2000; ++step) {
    a.push_back(sensor_reading("s0", m, step, 4) - m.truth.at(step));
    b.push_back(sensor_reading("s1", m, step, 4) - m.truth.at(step));
  }
  // Critical value at the 1% level for n = m = 2000.
  const double crit = 1.628 * std::sqrt(2.0 / 2000.0);
  CHECK(ks_statistic(a, b) < crit);
}

TEST_CASE("advisor reports") {
  const std::vector<Advisor> honest{{"h", UnfairRater{0.0}, 0.8}};
  const auto r = generate_advisor_reports("t", StaticBernoulli{1.0}, honest, 10, 1, 1);
  REQUIRE(r.size() == 1);
  CHECK(r[0].n == 10);
  CHECK(r[0].m == 10);
  CHECK(r[0].advisor_trust == 0.8);
  const std::vector<Advisor> praise{{"p", UnfairRater{1.0}, 1.0}};
  const std::vector<Advisor> slander{{"s", UnfairRater{-1.0}, 1.0}};
  for (std::uint64_t step = 1; step <= 20; ++step) {
    CHECK(generate_advisor_reports("t", StaticBernoulli{0.3}, praise, 9, step, 1)[0].m == 9);
    CHECK(generate_advisor_reports("t", StaticBernoulli{0.7}, slander, 9, step, 1)[0].m == 0);
  }
  CHECK_THROWS_AS(generate_advisor_reports("t", StaticBernoulli{0.5}, honest, 0, 1, 1), ConfigurationError);
}

TEST_CASE("whitewasher identities") {
  const Whitewasher w{10, 0.1};
  CHECK(whitewasher_identity("w", w, 1) == "w");
  CHECK(whitewasher_identity("w", w, 10) == "w");
  CHECK(whitewasher_identity("w", w, 11) == "w~1");
  CHECK(whitewasher_identity("w", w, 25) == "w~2");
  CHECK(base_identity("w~2") == "w");
  CHECK(base_identity("plain") == "plain");

  const auto trace = generate_trace(single_pair(w, 30));
  std::vector<std::string> seen;
  for (const auto& r : trace.records) {
    if (seen.empty() || seen.back() != r.trustee) seen.push_back(r.trustee);
  }
  CHECK(seen == std::vector<std::string>{"t", "t~1", "t~2"});
}

TEST_CASE("every generated observation satisfies its invariants") {
  Scenario s;
  s.agents["obs"] = {UnfairRater{0.0}};
  s.agents["x"] = {StepChange{0.9, 0.1, 10}};
  s.agents["c"] = {StaticCategorical{{0.2, 0.3, 0.5}}};
  s.agents["r"] = {UnfairRater{0.4}, 0.6};
  SensorReader sr;
  sr.noise_sd = 0.2;
  s.agents["s0"] = {sr};
  s.agents["s1"] = {sr};
  s.schedule = {{"obs", "x", EncounterKind::binary, 5, {}},
                {"obs", "x", EncounterKind::opinion, 5, {}},
                {"obs", "c", EncounterKind::categorical, 6, {}},
                {"obs", "x", EncounterKind::advisor, 4, {"r"}},
                {"obs", "s0", EncounterKind::voting, 1, {"s1"}}};
  s.horizon = 30;
  const auto t = generate_trace(s);
  for (const auto& r : t.records) CHECK_NOTHROW(validate(r.observation));
  std::size_t cats = 0;
  for (const auto& r : t.records) {
    if (const auto* c = std::get_if<CategoricalBatch>(&r.observation)) {
      CHECK(std::accumulate(c->counts.begin(), c->counts.end(), std::uint64_t{0}) == 6);
      ++cats;
    }
  }
  CHECK(cats == 30);
}
