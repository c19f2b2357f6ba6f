#include <exception>

#include "netid/errors.hpp"
#include "netid/experiments.hpp"

namespace netid {

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

FreqResponseMatrix t_block(const NetworkModel& model, const MethodChoice& plan, const LocalPipelineConfig& cfg,
                           const FreqGrid& grid, std::uint64_t seed, std::optional<TSubmatrixEstimate>* keep) {
  if (cfg.exact_T) return stage("estimate_T", [&] { return true_T(model, plan.t_rows, plan.t_cols, grid); });

  const NodeSet excite = cfg.excite_override.value_or(plan.excite);
  const SignalRecord record = stage("simulate", [&] {
    ExcitationSpec spec;
    spec.excited_nodes = excite;
    spec.r_variance = cfg.r_variance;
    spec.v_variance = ExcitationSpec::noise_on(model.node_count(), excite, cfg.v_variance);
    spec.samples = cfg.samples;
    spec.seed = seed;
    return simulate(model, spec);
  });
  TSubmatrixEstimate est =
      stage("estimate_T", [&] { return estimate_T_entries(record, plan.t_rows, plan.t_cols, cfg.fir_order, grid); });
  FreqResponseMatrix samples = est.samples;
  if (keep) *keep = std::move(est);
  return samples;
}

SolvedEdges solve(const FreqResponseMatrix& t, const MethodChoice& plan, Edge target, const SolveOptions& opts) {
  return stage("solve", [&] {
    return plan.route == LocalRoute::outgoing ? solve_outgoing(t, target.from, plan.neighbors, opts)
                                              : solve_incoming(t, target.to, plan.neighbors, opts);
  });
}

}  // namespace

LocalPipelineResult run_local_pipeline(const NetworkModel& model, Edge target, const LocalPipelineConfig& cfg) {
  const LocalTopology topo = stage("plan", [&] { return LocalTopology::from_model(model, target); });
  const MethodChoice plan = stage("plan", [&] { return plan_experiment(topo, cfg.force_route); });
  const FirBand band = stage("plan", [&] { return band_of(model.edge(target)); });
  const FreqGrid grid = stage("plan", [&] { return FreqGrid::equispaced(cfg.grid_points); });

  std::optional<TSubmatrixEstimate> t_est;
  const FreqResponseMatrix t = t_block(model, plan, cfg, grid, cfg.seed, &t_est);
  SolvedEdges solved = solve(t, plan, target, cfg.solve);
  ModuleEstimate module =
      stage("fit", [&] { return fit_parametric(target, grid, solved.responses.at(target), band); });

  LocalPipelineResult out{plan, std::move(t_est), std::move(solved), std::move(module), std::nullopt};

  if (cfg.cross_check) {
    const LocalRoute other =
        plan.route == LocalRoute::outgoing ? LocalRoute::incoming : LocalRoute::outgoing;
    const MethodChoice alt = stage("plan", [&] { return plan_experiment(topo, other); });
    LocalPipelineConfig alt_cfg = cfg;
    alt_cfg.excite_override.reset();
    const FreqResponseMatrix t_alt = t_block(model, alt, alt_cfg, grid, cfg.seed + 1, nullptr);
    const SolvedEdges alt_solved = solve(t_alt, alt, target, cfg.solve);
    out.cross_check_disagreement =
        max_disagreement(out.solved.responses.at(target), alt_solved.responses.at(target));
  }
  return out;
}

}  // namespace netid
