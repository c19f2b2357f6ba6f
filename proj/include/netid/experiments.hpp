#pragma once

// Scenario files, Monte-Carlo batches, the local identification pipeline and
// result emission (CSV tables, SVG scatter plots).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netid/direct_method.hpp"
#include "netid/local_method.hpp"
#include "netid/network.hpp"

namespace netid {

enum class EstimatorKind { direct, local };

std::string to_string(EstimatorKind kind);

enum class NoisePlacement { all, excited };

struct Scenario {
  std::string id;
  NodeSet excited;
  EstimatorKind method = EstimatorKind::direct;
  Edge target{NodeId{3}, NodeId{4}};
  std::size_t runs = 1000;
  std::size_t samples = 10000;
  std::uint64_t base_seed = 0;
  double r_variance = 1.0;
  double v_variance = 1e-6;
  NoisePlacement noise = NoisePlacement::all;

  ExcitationSpec excitation(std::size_t node_count, std::uint64_t seed) const;
  void validate(std::size_t node_count) const;
};

/// "3,5,7-9" -> {3,5,7,8,9}. Throws std::invalid_argument.
NodeSet parse_node_list(const std::string& value);

/// Scenario file, schema version 1:
///
///   netid-scenarios 1
///   scenario id=5 excited=5 method=direct target=3,4 runs=1000 samples=10000 seed=5000 r_var=1 v_var=1e-6
///
/// `excited` takes comma-separated nodes and ranges (1-20). Optional keys:
/// method (direct|local), noise (all|excited), r_var, v_var. Unknown keys are
/// rejected. When node_count is nonzero, node indices are checked against it.
std::vector<Scenario> read_scenarios(std::istream& in, const std::string& source, std::size_t node_count = 0);
std::vector<Scenario> load_scenarios(const std::filesystem::path& path, std::size_t node_count = 0);
/// Scenario by id; throws std::out_of_range.
const Scenario& find_scenario(const std::vector<Scenario>& scenarios, const std::string& id);

struct RunRecord {
  std::size_t run = 0;
  std::vector<double> theta;  // target module taps; NaN when the run failed
  bool informative = false;
  std::string error;  // not serialised

  friend bool operator==(const RunRecord& a, const RunRecord& b);
};

struct ScenarioResult {
  std::string scenario_id;
  std::vector<RunRecord> runs;  // sorted by run index

  std::size_t parameter_count() const;
  std::vector<double> mean() const;    // over runs without error
  std::vector<double> stddev() const;  // sample standard deviation
  double informative_rate() const;
  std::size_t failed_runs() const;

  friend bool operator==(const ScenarioResult&, const ScenarioResult&) = default;
};

using ResultTable = std::vector<ScenarioResult>;

struct LocalPipelineConfig {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::size_t fir_order = kDefaultFirOrder;
  std::size_t grid_points = kDefaultGridPoints;
  double r_variance = 1.0;
  double v_variance = 1e-6;  // applied to the excited nodes
  std::optional<NodeSet> excite_override;
  std::optional<LocalRoute> force_route;
  /// Use the exact T block of the model instead of estimating it.
  bool exact_T = false;
  /// Also run the other route and report its disagreement on the target edge.
  bool cross_check = false;
  SolveOptions solve;
};

struct LocalPipelineResult {
  MethodChoice plan;
  std::optional<TSubmatrixEstimate> t_estimate;
  SolvedEdges solved;
  ModuleEstimate module;
  std::optional<double> cross_check_disagreement;
};

/// plan -> simulate -> estimate T block -> solve -> parametric fit. Errors are
/// rethrown as StageError labelled with the failing stage.
LocalPipelineResult run_local_pipeline(const NetworkModel& model, Edge target, const LocalPipelineConfig& config);

struct MonteCarloOptions {
  std::size_t workers = 1;
  double informativity_threshold = kDefaultInformativityThreshold;
  std::size_t fir_order = kDefaultFirOrder;
  std::size_t grid_points = kDefaultGridPoints;
};

/// Runs seeds base_seed .. base_seed + runs - 1 concurrently. Estimator
/// failures are recorded per run. Deterministic for a given scenario.
ScenarioResult run_monte_carlo(const Scenario& scenario, const NetworkModel& model, const MonteCarloOptions& opts);

/// Worker count from NETID_WORKERS, capped by the hardware; 1 if unset.
std::size_t workers_from_env();

/// scenario_id,run,a1,a2,...,informative
void write_csv(const ResultTable& table, std::ostream& out);
ResultTable read_csv(std::istream& in, const std::string& source = "<csv>");

/// Scatter of (a1, a2) per run with auto-fit axes; `reference` marks the true value.
void write_svg_scatter(const ScenarioResult& result, std::ostream& out,
                       std::optional<std::pair<double, double>> reference = std::nullopt);

enum class OutputFormat { csv, svg };

/// csv: <dir>/results.csv. svg: <dir>/scatter_<id>.svg per scenario.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_results(const ResultTable& table, OutputFormat format,
                                                const std::filesystem::path& dir,
                                                std::optional<std::pair<double, double>> reference = std::nullopt);

}  // namespace netid
