#include <sstream>
#include <string>
#include <vector>

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bayestrust/conjugate.hpp"
#include "bayestrust/decision.hpp"
#include "bayestrust/error.hpp"
#include "bayestrust/filter.hpp"
#include "bayestrust/harness.hpp"
#include "bayestrust/opinion.hpp"
#include "bayestrust/particles.hpp"
#include "bayestrust/simulator.hpp"
#include "bayestrust/sstm.hpp"
#include "bayestrust/trace_io.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace bayestrust;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

Settings settings_from(const py::dict& d) {
  Settings s;
  for (const auto& [k, v] : d) s.set(py::str(k), py::str(v));
  return s;
}

py::dict row_dict(const ResultRow& r) {
  py::dict d("step"_a = r.step, "trustor"_a = r.trustor, "trustee"_a = r.trustee, "model"_a = r.model,
             "mean"_a = r.mean, "variance"_a = r.variance, "detail"_a = r.detail);
  d["ess"] = r.ess ? py::cast(*r.ess) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayesian trust inference: conjugate models, particle filters, state-space trust and opinions";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<InvalidObservation>(m, "InvalidObservation", PyExc_ValueError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<DegenerateUpdate>(m, "DegenerateUpdate", PyExc_RuntimeError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);
  py::register_exception<sim::ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_RuntimeError);
  py::register_exception<TraceFormatError>(m, "TraceFormatError", PyExc_ValueError);

  // conjugate models
  py::class_<BetaParams>(m, "BetaParams")
      .def(py::init<double, double>(), "alpha"_a = 1.0, "beta"_a = 1.0)
      .def_property_readonly("alpha", &BetaParams::alpha)
      .def_property_readonly("beta", &BetaParams::beta)
      .def_property_readonly("mean", [](const BetaParams& p) { return posterior_mean(p).value(); })
      .def_property_readonly("variance", [](const BetaParams& p) { return posterior_variance(p); })
      .def("__eq__", [](const BetaParams& a, const BetaParams& b) { return a == b; })
      .def("__repr__", [](const BetaParams& p) {
        return "BetaParams(" + std::to_string(p.alpha()) + ", " + std::to_string(p.beta()) + ")";
      });

  py::class_<DirichletParams>(m, "DirichletParams")
      .def(py::init<std::vector<double>>(), "alphas"_a)
      .def_property_readonly("alphas", &DirichletParams::alphas)
      .def_property_readonly("mean", [](const DirichletParams& p) {
        const auto s = posterior_mean(p);
        return std::vector<double>(s.values().begin(), s.values().end());
      })
      .def_property_readonly("variance", [](const DirichletParams& p) { return posterior_variance(p); })
      .def("__len__", &DirichletParams::size);

  m.def("bdtm_update", [](const BetaParams& p, std::uint64_t n, std::uint64_t s) {
    return bdtm_update(p, BinaryBatch{n, s});
  }, "prior"_a, "n"_a, "m"_a, "Beta update with m successes out of n trials.");
  m.def("ddtm_update", [](const DirichletParams& p, std::vector<std::uint64_t> counts) {
    return ddtm_update(p, CategoricalBatch{std::move(counts)});
  }, "prior"_a, "counts"_a);
  m.def("advisor_update", [](const BetaParams& p, double trust, std::uint64_t n, std::uint64_t s) {
    return advisor_update(p, AdvisorReport{trust, n, s});
  }, "prior"_a, "advisor_trust"_a, "n"_a, "m"_a);
  m.def("discount_evidence", py::overload_cast<const BetaParams&, double>(&discount_evidence), "params"_a,
        "lam"_a);
  m.def("discount_evidence", py::overload_cast<const DirichletParams&, double>(&discount_evidence), "params"_a,
        "lam"_a);

  // opinions
  py::class_<Opinion>(m, "Opinion")
      .def(py::init<double, double, double, double>(), "belief"_a, "disbelief"_a, "ignorance"_a,
           "evidence_weight"_a)
      .def_property_readonly("belief", &Opinion::belief)
      .def_property_readonly("disbelief", &Opinion::disbelief)
      .def_property_readonly("ignorance", &Opinion::ignorance)
      .def_property_readonly("evidence_weight", &Opinion::evidence_weight)
      .def("__eq__", [](const Opinion& a, const Opinion& b) { return a == b; })
      .def("__repr__", [](const Opinion& o) {
        std::ostringstream s;
        s << "Opinion(b=" << o.belief() << ", d=" << o.disbelief() << ", i=" << o.ignorance()
          << ", w=" << o.evidence_weight() << ")";
        return s.str();
      });
  m.def("opinion_to_dirichlet", &opinion_to_dirichlet, "opinion"_a);
  m.def("dirichlet_to_opinion", &dirichlet_to_opinion, "params"_a);
  m.def("fuse", &fuse, "a"_a, "b"_a);
  m.def("observe_outcomes", &observe_outcomes, "opinion"_a, "counts"_a,
        "counts are (belief, ignorance, disbelief) outcomes.");
  m.def("projected_trust", [](const Opinion& o) { return projected_trust(o).value(); }, "opinion"_a);
  m.def("opinion_from_outcomes", &opinion_from_outcomes, "successes"_a, "failures"_a);

  // particles and filtering
  py::class_<ParticleSet>(m, "ParticleSet")
      .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
                       std::optional<py::array_t<double, py::array::c_style | py::array::forcecast>> weights,
                       std::size_t dimension) {
             if (weights) return ParticleSet(from_array(values), from_array(*weights), dimension);
             return ParticleSet(from_array(values), dimension);
           }),
           "values"_a, "weights"_a = py::none(), "dimension"_a = 1)
      .def_property_readonly("values", [](const ParticleSet& p) { return to_array(p.values()); })
      .def_property_readonly("weights", [](const ParticleSet& p) { return to_array(p.weights()); })
      .def_property_readonly("dimension", &ParticleSet::dimension)
      .def("__len__", &ParticleSet::size)
      .def("mean", [](const ParticleSet& p) { return estimate_mean(p).value(); })
      .def("component_means", &estimate_component_means)
      .def("variance", &estimate_variance)
      .def("ess", &effective_sample_size);

  m.def("sample_beta", [](const BetaParams& p, std::size_t count, std::uint64_t seed) {
    return sample_beta(p, count, RandomStream(seed));
  }, "prior"_a, "count"_a, "seed"_a = 0);
  m.def("sample_dirichlet", [](const DirichletParams& p, std::size_t count, std::uint64_t seed) {
    return sample_dirichlet(p, count, RandomStream(seed));
  }, "prior"_a, "count"_a, "seed"_a = 0);

  m.def(
      "filter_binary",
      [](const ParticleSet& prior, std::uint64_t n, std::uint64_t s, std::uint64_t seed, double forgetting,
         double process_variance, std::optional<double> ess_threshold) {
        const BinomialLikelihood lik;
        FilterOptions opt;
        opt.ess_threshold = ess_threshold;
        const RandomStream rng(seed);
        if (process_variance > 0.0 || forgetting != 1.0) {
          return step(prior, TruncatedNormalTransition(forgetting, process_variance), lik, BinaryBatch{n, s}, rng,
                      opt);
        }
        return step(prior, StaticTransition{}, lik, BinaryBatch{n, s}, rng, opt);
      },
      "prior"_a, "n"_a, "m"_a, "seed"_a = 0, "forgetting"_a = 1.0, "process_variance"_a = 0.0,
      "ess_threshold"_a = py::none(),
      "One predict/weight/resample step on a binary batch. The transition is static unless forgetting or "
      "process_variance is set.");
  m.def(
      "predict",
      [](const ParticleSet& prior, double forgetting, double process_variance, std::uint64_t seed) {
        return predict(prior, TruncatedNormalTransition(forgetting, process_variance), RandomStream(seed));
      },
      "prior"_a, "forgetting"_a, "process_variance"_a, "seed"_a = 0);

  m.def("expected_utility", [](const BetaParams& p, const std::function<double(double)>& u) {
    return expected_utility(p, UtilityFunction(u));
  }, "posterior"_a, "utility"_a);
  m.def("expected_utility", [](const ParticleSet& p, const std::function<double(double)>& u) {
    return expected_utility(p, UtilityFunction(u));
  }, "posterior"_a, "utility"_a);

  // state-space trust
  py::class_<sstm::SstmConfig>(m, "SstmConfig")
      .def(py::init<>())
      .def_readwrite("forgetting", &sstm::SstmConfig::forgetting)
      .def_readwrite("process_variance", &sstm::SstmConfig::process_variance)
      .def_readwrite("sensitivity", &sstm::SstmConfig::sensitivity)
      .def_readwrite("tolerance_r", &sstm::SstmConfig::tolerance_r)
      .def_readwrite("particle_count", &sstm::SstmConfig::particle_count)
      .def_readwrite("ipf_max_iter", &sstm::SstmConfig::ipf_max_iter)
      .def_readwrite("ipf_epsilon", &sstm::SstmConfig::ipf_epsilon)
      .def("validate", &sstm::SstmConfig::validate);

  m.def("sstm_step", [](const ParticleSet& prior, double y0, std::vector<double> neighbors,
                        const sstm::SstmConfig& cfg, std::uint64_t seed) {
    return sstm::sstm_step(prior, VotingVector{y0, std::move(neighbors)}, cfg, RandomStream(seed));
  }, "prior"_a, "y0"_a, "neighbors"_a, "config"_a = sstm::SstmConfig{}, "seed"_a = 0);
  m.def("ipf_estimate", [](std::vector<double> readings, const sstm::SstmConfig& cfg, std::uint64_t seed) {
    const auto state = sstm::ipf_estimate(readings, cfg, RandomStream(seed));
    std::vector<double> out;
    for (const auto& t : state.trusts) out.push_back(t.value());
    return out;
  }, "readings"_a, "config"_a = sstm::SstmConfig{}, "seed"_a = 0,
     "Trust of every committee member from one round of readings.");

  // simulation and inference over traces
  m.def("simulate", [](const py::dict& config) {
    std::ostringstream out;
    write_trace(out, sim::generate_trace(scenario_from_settings(settings_from(config))));
    return out.str();
  }, "config"_a, "Trace text for a scenario given as a dict of config keys.");
  m.def("infer", [](const std::string& trace_text, const py::dict& config) {
    std::istringstream in(trace_text);
    const auto trace = read_trace(in);
    py::list rows;
    for (const auto& r : run_inference(trace, model_config_from_settings(settings_from(config)))) {
      rows.append(row_dict(r));
    }
    return rows;
  }, "trace"_a, "config"_a, "One dict per result row.");
  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "bayestrust");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "args"_a, "Run the command line with the given arguments; returns (status, stdout, stderr).");
}
