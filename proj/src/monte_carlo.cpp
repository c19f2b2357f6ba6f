#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "netid/experiments.hpp"

namespace netid {

bool operator==(const RunRecord& a, const RunRecord& b) {
  if (a.run != b.run || a.informative != b.informative || a.theta.size() != b.theta.size()) return false;
  for (std::size_t k = 0; k < a.theta.size(); ++k) {
    const bool both_nan = std::isnan(a.theta[k]) && std::isnan(b.theta[k]);
    if (!both_nan && a.theta[k] != b.theta[k]) return false;
  }
  return true;
}

std::size_t ScenarioResult::parameter_count() const {
  std::size_t n = 0;
  for (const auto& r : runs) n = std::max(n, r.theta.size());
  return n;
}

namespace {
bool usable(const RunRecord& r) {
  return r.error.empty() && std::ranges::all_of(r.theta, [](double x) { return std::isfinite(x); });
}
}  // namespace

std::vector<double> ScenarioResult::mean() const {
  const std::size_t p = parameter_count();
  std::vector<double> m(p, 0.0);
  std::size_t count = 0;
  for (const auto& r : runs) {
    if (!usable(r) || r.theta.size() != p) continue;
    for (std::size_t k = 0; k < p; ++k) m[k] += r.theta[k];
    ++count;
  }
  for (double& x : m) x = count ? x / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
  return m;
}

std::vector<double> ScenarioResult::stddev() const {
  const std::size_t p = parameter_count();
  const std::vector<double> m = mean();
  std::vector<double> s(p, 0.0);
  std::size_t count = 0;
  for (const auto& r : runs) {
    if (!usable(r) || r.theta.size() != p) continue;
    for (std::size_t k = 0; k < p; ++k) s[k] += (r.theta[k] - m[k]) * (r.theta[k] - m[k]);
    ++count;
  }
  for (double& x : s)
    x = count > 1 ? std::sqrt(x / static_cast<double>(count - 1)) : std::numeric_limits<double>::quiet_NaN();
  return s;
}

double ScenarioResult::informative_rate() const {
  if (runs.empty()) return 0.0;
  const auto n = std::ranges::count_if(runs, [](const RunRecord& r) { return r.informative; });
  return static_cast<double>(n) / static_cast<double>(runs.size());
}

std::size_t ScenarioResult::failed_runs() const {
  return static_cast<std::size_t>(std::ranges::count_if(runs, [](const RunRecord& r) { return !r.error.empty(); }));
}

std::size_t workers_from_env() {
  const char* env = std::getenv("NETID_WORKERS");
  if (env == nullptr) return 1;
  const long requested = std::strtol(env, nullptr, 10);
  if (requested < 1) return 1;
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  return std::min<std::size_t>(static_cast<std::size_t>(requested), hw);
}

namespace {

RunRecord run_once(const Scenario& sc, const NetworkModel& model, const MonteCarloOptions& opts, std::size_t run,
                   const DirectModelStructure* structure, std::size_t parameter_count) {
  RunRecord rec;
  rec.run = run;
  const std::uint64_t seed = sc.base_seed + run;
  try {
    if (sc.method == EstimatorKind::direct) {
      const SignalRecord data = simulate(model, sc.excitation(model.node_count(), seed));
      const DirectEstimate est = estimate_direct(data, *structure, opts.informativity_threshold);
      rec.theta = est.coefficients(*structure, sc.target.from);
      rec.informative = est.informative;
    } else {
      LocalPipelineConfig cfg;
      cfg.samples = sc.samples;
      cfg.seed = seed;
      cfg.fir_order = opts.fir_order;
      cfg.grid_points = opts.grid_points;
      cfg.r_variance = sc.r_variance;
      cfg.v_variance = sc.v_variance;
      cfg.excite_override = sc.excited;
      const LocalPipelineResult res = run_local_pipeline(model, sc.target, cfg);
      rec.theta = res.module.theta;
      rec.informative = true;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.informative = false;
    rec.theta.assign(parameter_count, std::numeric_limits<double>::quiet_NaN());
  }
  return rec;
}

}  // namespace

ScenarioResult run_monte_carlo(const Scenario& scenario, const NetworkModel& model, const MonteCarloOptions& opts) {
  scenario.validate(model.node_count());
  const std::size_t p = band_of(model.edge(scenario.target)).size();
  std::optional<DirectModelStructure> structure;
  if (scenario.method == EstimatorKind::direct) structure = known_structure(model, scenario.target.to);

  ScenarioResult result{scenario.id, std::vector<RunRecord>(scenario.runs)};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t run = next++; run < scenario.runs; run = next++)
      result.runs[run] = run_once(scenario, model, opts, run, structure ? &*structure : nullptr, p);
  };
  const std::size_t workers = std::clamp<std::size_t>(opts.workers, 1, scenario.runs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
  }
  return result;
}

}  // namespace netid
