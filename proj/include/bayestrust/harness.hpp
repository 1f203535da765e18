#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bayestrust/filter.hpp"
#include "bayestrust/settings.hpp"
#include "bayestrust/simulator.hpp"
#include "bayestrust/sstm.hpp"

namespace bayestrust {

/// The trace holds an observation the chosen model cannot use, or inference
/// failed on it. The message names the step and the observation kind.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario keys:
///   horizon, seed, trials (default trials per interaction)
///   agent.<id>  = <profile text> [trust=<advisor trust>]
///   pair.<name> = <trustor> <trustee> [kind] [trials=<n>] [peers=<a,b,...>]
/// Voting pairs without peers use every other sensor agent; advisor pairs
/// without peers use every rater agent.
sim::Scenario scenario_from_settings(const Settings& settings);

enum class ModelKind { bdtm, ddtm, gbt_pf, sstm, sstm_ipf, sltm };

ModelKind parse_model_kind(const std::string& name);
std::string model_name(ModelKind kind);

struct ModelConfig {
  ModelKind kind = ModelKind::bdtm;
  std::string label;  ///< column name in comparison reports; defaults to the model name
  std::uint64_t seed = 0;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  double forgetting_lambda = 1.0;   ///< evidence discount per step for bdtm and ddtm
  std::vector<double> prior_alphas; ///< ddtm / categorical gbt-pf prior; empty means all ones
  bool truncnormal_transition = false;  ///< gbt-pf only; sstm always uses it
  std::size_t particle_count = 1000;
  FilterOptions filter;
  sstm::SstmConfig sstm;  ///< forgetting, process_variance and particle_count double as gbt-pf dynamics
};

/// Validates every parameter, so a bad config fails before any trace is read.
ModelConfig model_config_from_settings(const Settings& settings);

struct ResultRow {
  std::uint64_t step = 0;
  std::string trustor;
  std::string trustee;
  std::string model;
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> ess;
  std::string detail;
};

/// One row per (step, trustor, trustee) group in (step, trustor, trustee) order.
std::vector<ResultRow> run_inference(const sim::Trace& trace, const ModelConfig& config);

inline constexpr const char* kResultHeader = "step,trustor,trustee,model,mean,variance,ess,detail";
void write_results(std::ostream& out, const std::vector<ResultRow>& rows);

struct CompareSummary {
  std::string model;
  std::string trustor;  ///< "*" for the aggregate over all chains
  std::string trustee;
  std::size_t rows = 0;
  std::optional<double> mae;
  std::optional<double> mae_post_change;
  std::optional<double> final_mean;
  std::optional<double> runtime_seconds;
};

struct CompareReport {
  std::vector<std::string> labels;
  /// step, trustor, trustee, truth, then one estimate per model.
  struct Line {
    std::uint64_t step;
    std::string trustor;
    std::string trustee;
    std::optional<double> truth;
    std::vector<std::optional<double>> estimates;
  };
  std::vector<Line> table;
  std::vector<CompareSummary> summary;
};

/// Ground truth for a trustee at a step, from the profile text in the trace header.
std::optional<double> trace_ground_truth(const sim::TraceHeader& header, const std::string& trustee,
                                         std::uint64_t step);
/// First step at which the trustee's behavior changes (step change or sensor fault), if any.
std::optional<std::uint64_t> trace_change_step(const sim::TraceHeader& header, const std::string& trustee);

CompareReport run_compare(const sim::Trace& trace, const std::vector<ModelConfig>& configs, bool timing = false);
void write_compare_table(std::ostream& out, const CompareReport& report);
void write_compare_summary(std::ostream& out, const CompareReport& report);

/// Command-line entry point. Returns the process exit status:
/// 0 success, 1 runtime or model error, 2 configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bayestrust
