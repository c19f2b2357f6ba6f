// netid: simulate, identify and batch-evaluate dynamic network modules.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "netid/errors.hpp"
#include "netid/experiments.hpp"
#include "netid/io_map.hpp"
#include "netid/network_io.hpp"

#ifndef NETID_DATA_DIR
#define NETID_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace netid;

namespace {

struct Options {
  std::string network;
  std::string scenario;
  std::string scenario_file = std::string(NETID_DATA_DIR) + "/excitation_scenarios.txt";
  std::optional<std::size_t> runs;
  bool full_runs = false;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::size_t fir_order = kDefaultFirOrder;
  std::size_t grid_points = kDefaultGridPoints;
  std::string out;
  std::string format = "csv";
  std::string target = "3,4";
  std::string excite;
  std::optional<double> v_var;
  std::string route;
  bool exact_t = false;
  bool cross_check = false;
  std::string rows;
  std::string cols;
  std::string input;
};

NetworkModel network_of(const Options& o) { return o.network.empty() ? build_case_study() : load_network(o.network); }

Edge parse_edge(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("target must be j,i");
  return Edge{NodeId{std::stoi(s.substr(0, comma))}, NodeId{std::stoi(s.substr(comma + 1))}};
}

// --scenario names a file, or an id in the scenario file.
std::vector<Scenario> scenarios_of(const Options& o, std::size_t node_count) {
  if (!o.scenario.empty() && fs::is_regular_file(o.scenario)) return load_scenarios(o.scenario, node_count);
  auto all = load_scenarios(o.scenario_file, node_count);
  if (o.scenario.empty() || o.scenario == "all") return all;
  return {find_scenario(all, o.scenario)};
}

Scenario apply_overrides(Scenario sc, const Options& o, std::size_t default_runs) {
  if (o.runs) sc.runs = *o.runs;
  else if (!o.full_runs) sc.runs = std::min(sc.runs, default_runs);
  if (o.samples) sc.samples = *o.samples;
  if (o.seed) sc.base_seed = *o.seed;
  if (o.v_var) sc.v_variance = *o.v_var;
  return sc;
}

std::ostream& open_out(const Options& o, const std::string& name, std::ofstream& file) {
  if (o.out.empty()) return std::cout;
  fs::create_directories(o.out);
  file.open(fs::path(o.out) / name, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + (fs::path(o.out) / name).string());
  return file;
}

void print_vector(std::ostream& os, const std::vector<double>& v) {
  os << '(';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << format_double(v[k]);
  os << ')';
}

std::string join(const NodeSet& s) {
  std::string out;
  for (NodeId n : s) out += (out.empty() ? "" : ",") + std::to_string(n.value);
  return out;
}

int cmd_simulate(const Options& o) {
  const NetworkModel model = network_of(o);
  ExcitationSpec spec;
  if (!o.excite.empty()) {
    spec.excited_nodes = parse_node_list(o.excite);
    spec.samples = o.samples.value_or(10000);
    spec.seed = o.seed.value_or(0);
    spec.v_variance = ExcitationSpec::uniform_noise(model.node_count(), o.v_var.value_or(1e-6));
  } else {
    const Scenario sc = scenarios_of(o, model.node_count()).front();
    spec = apply_overrides(sc, o, sc.runs).excitation(model.node_count(), o.seed.value_or(sc.base_seed));
  }
  const SignalRecord rec = simulate(model, spec);
  std::ofstream file;
  std::ostream& os = open_out(o, "signals.csv", file);
  const std::size_t n = model.node_count();
  os << "t";
  for (std::size_t k = 1; k <= n; ++k) os << ",w" << k;
  for (std::size_t k = 1; k <= n; ++k) os << ",r" << k;
  os << '\n';
  for (Eigen::Index t = 0; t < rec.w.cols(); ++t) {
    os << t;
    for (Eigen::Index k = 0; k < rec.w.rows(); ++k) os << ',' << format_double(rec.w(k, t));
    for (Eigen::Index k = 0; k < rec.r.rows(); ++k) os << ',' << format_double(rec.r(k, t));
    os << '\n';
  }
  return 0;
}

int cmd_direct(const Options& o) {
  const NetworkModel model = network_of(o);
  Scenario sc;
  if (!o.excite.empty()) {
    sc.id = "cli";
    sc.excited = parse_node_list(o.excite);
    sc.target = parse_edge(o.target);
  } else {
    sc = scenarios_of(o, model.node_count()).front();
  }
  sc = apply_overrides(sc, o, sc.runs);
  const DirectModelStructure structure = known_structure(model, sc.target.to);
  const SignalRecord rec = simulate(model, sc.excitation(model.node_count(), sc.base_seed));
  const DirectEstimate est = estimate_direct(rec, structure);
  std::cout << "scenario " << sc.id << " seed " << sc.base_seed << " samples " << sc.samples << '\n';
  std::cout << "gram condition " << format_double(est.gram_condition) << (est.informative ? " informative" : " NOT informative")
            << '\n';
  for (const auto& reg : structure.regressors) {
    std::cout << "G_" << sc.target.to.value << ',' << reg.from.value << " taps q^-" << reg.band.delay << ".. ";
    print_vector(std::cout, est.coefficients(structure, reg.from));
    std::cout << '\n';
  }
  return 0;
}

int cmd_local(const Options& o) {
  const NetworkModel model = network_of(o);
  const Edge target = parse_edge(o.target);
  LocalPipelineConfig cfg;
  cfg.samples = o.samples.value_or(10000);
  cfg.seed = o.seed.value_or(0);
  cfg.fir_order = o.fir_order;
  cfg.grid_points = o.grid_points;
  if (o.v_var) cfg.v_variance = *o.v_var;
  if (!o.excite.empty()) cfg.excite_override = parse_node_list(o.excite);
  if (o.route == "outgoing") cfg.force_route = LocalRoute::outgoing;
  else if (o.route == "incoming") cfg.force_route = LocalRoute::incoming;
  cfg.exact_T = o.exact_t;
  cfg.cross_check = o.cross_check;

  const LocalPipelineResult res = run_local_pipeline(model, target, cfg);
  std::cout << "route " << to_string(res.plan.route) << " neighbors {" << join(res.plan.neighbors) << "} excite {"
            << join(cfg.excite_override.value_or(res.plan.excite)) << "} measure {" << join(res.plan.measure) << "} entries "
            << res.plan.entry_count << '\n';
  if (res.t_estimate) {
    for (const auto& [key, fit] : res.t_estimate->fit_scores)
      std::cout << "fit T_" << key.first.value << ',' << key.second.value << ' ' << format_double(fit) << '\n';
  }
  std::cout << "dropped grid points " << res.solved.dropped.size() << '\n';
  std::cout << "G_" << target.to.value << ',' << target.from.value << " taps q^-" << res.module.band.delay << ".. ";
  print_vector(std::cout, res.module.theta);
  std::cout << '\n';
  if (res.cross_check_disagreement)
    std::cout << "cross-check disagreement " << format_double(*res.cross_check_disagreement) << '\n';
  return 0;
}

void print_summary(std::ostream& os, const ResultTable& table) {
  os << "scenario runs failed informative_rate mean std\n";
  for (const auto& sr : table) {
    os << sr.scenario_id << ' ' << sr.runs.size() << ' ' << sr.failed_runs() << ' '
       << format_double(sr.informative_rate()) << ' ';
    print_vector(os, sr.mean());
    os << ' ';
    print_vector(os, sr.stddev());
    os << '\n';
  }
}

OutputFormat format_of(const Options& o) { return o.format == "svg" ? OutputFormat::svg : OutputFormat::csv; }

std::optional<std::pair<double, double>> reference_of(const NetworkModel& model, Edge target) {
  if (!model.has_edge(target)) return std::nullopt;
  const RationalTF& g = model.edge(target);
  if (!g.is_fir()) return std::nullopt;
  const FirBand band = band_of(g);
  if (band.size() != 2) return std::nullopt;
  return std::pair{g.num()[band.delay], g.num()[band.delay + 1]};
}

int cmd_montecarlo(const Options& o) {
  const NetworkModel model = network_of(o);
  MonteCarloOptions mc;
  mc.workers = workers_from_env();
  mc.fir_order = o.fir_order;
  mc.grid_points = o.grid_points;
  ResultTable table;
  std::optional<Edge> target;
  for (const Scenario& base : scenarios_of(o, model.node_count())) {
    const Scenario sc = apply_overrides(base, o, 100);
    table.push_back(run_monte_carlo(sc, model, mc));
    target = sc.target;
  }
  if (o.out.empty()) {
    if (format_of(o) == OutputFormat::svg) throw std::invalid_argument("svg output needs --out <dir>");
    write_csv(table, std::cout);
    return 0;
  }
  for (const auto& p : emit_results(table, format_of(o), o.out, target ? reference_of(model, *target) : std::nullopt))
    std::cerr << "wrote " << p.string() << '\n';
  print_summary(std::cout, table);
  return 0;
}

int cmd_truth(const Options& o) {
  const NetworkModel model = network_of(o);
  const FreqGrid grid = FreqGrid::equispaced(o.grid_points);
  std::ofstream file;
  std::ostream& os = open_out(o, "truth.csv", file);
  os << "quantity,row,col,omega,re,im\n";
  auto emit = [&](const char* what, int r, int c, double w, Complex z) {
    os << what << ',' << r << ',' << c << ',' << format_double(w) << ',' << format_double(z.real()) << ','
       << format_double(z.imag()) << '\n';
  };
  if (!o.rows.empty() || !o.cols.empty()) {
    const NodeSet rows = parse_node_list(o.rows.empty() ? o.cols : o.rows);
    const NodeSet cols = parse_node_list(o.cols.empty() ? o.rows : o.cols);
    const FreqResponseMatrix t = true_T(model, rows, cols, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
      for (NodeId r : rows)
        for (NodeId c : cols) emit("T", r.value, c.value, grid.omegas()[k], t.at(r, c, k));
  } else {
    const Edge target = parse_edge(o.target);
    const RationalTF& g = model.edge(target);
    for (double w : grid.omegas()) emit("G", target.to.value, target.from.value, w, tf_eval(g, w));
  }
  return 0;
}

int cmd_report(const Options& o) {
  if (o.input.empty()) throw std::invalid_argument("report needs --input <results.csv>");
  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + o.input);
  const ResultTable table = read_csv(in, o.input);
  print_summary(std::cout, table);
  if (!o.out.empty()) {
    const NetworkModel model = network_of(o);
    for (const auto& p : emit_results(table, format_of(o), o.out, reference_of(model, parse_edge(o.target))))
      std::cerr << "wrote " << p.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identification of modules in dynamic networks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--network", o.network, "Network file (default: built-in 20-node case study)");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--samples", o.samples, "Samples per run");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--v-var", o.v_var, "Disturbance variance");
  };
  auto scenario_opts = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario file, or id in the scenario file");
    sub->add_option("--scenario-file", o.scenario_file, "Scenario file used to resolve ids")->capture_default_str();
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one record and write signals.csv");
  common(simulate_cmd);
  scenario_opts(simulate_cmd);
  simulate_cmd->add_option("--excite", o.excite, "Excited nodes, e.g. 3,4,5 (overrides --scenario)");

  auto* direct_cmd = app.add_subcommand("direct", "Direct-method estimate from one record");
  common(direct_cmd);
  scenario_opts(direct_cmd);
  direct_cmd->add_option("--excite", o.excite, "Excited nodes (overrides --scenario)");
  direct_cmd->add_option("--target", o.target, "Target edge j,i")->capture_default_str();

  auto* local_cmd = app.add_subcommand("local", "Local-method pipeline for one edge");
  common(local_cmd);
  local_cmd->add_option("--target", o.target, "Target edge j,i")->capture_default_str();
  local_cmd->add_option("--excite", o.excite, "Excited nodes (default: as planned)");
  local_cmd->add_option("--fir-order", o.fir_order, "FIR order of T-entry models")->capture_default_str();
  local_cmd->add_option("--grid-points", o.grid_points, "Frequency grid size")->capture_default_str();
  local_cmd->add_option("--route", o.route, "Force route")->check(CLI::IsMember({"outgoing", "incoming"}));
  local_cmd->add_flag("--exact-T", o.exact_t, "Use the exact T block instead of estimating it");
  local_cmd->add_flag("--cross-check", o.cross_check, "Also run the other route and compare");

  auto* mc_cmd = app.add_subcommand("montecarlo", "Monte-Carlo batch over scenarios");
  common(mc_cmd);
  scenario_opts(mc_cmd);
  mc_cmd->add_option("--runs", o.runs, "Runs per scenario (default 100)");
  mc_cmd->add_flag("--full-runs", o.full_runs, "Use the run count from the scenario file");
  mc_cmd->add_option("--fir-order", o.fir_order, "FIR order for local scenarios")->capture_default_str();
  mc_cmd->add_option("--grid-points", o.grid_points, "Grid size for local scenarios")->capture_default_str();
  mc_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();

  auto* truth_cmd = app.add_subcommand("truth", "Dump true T or G frequency responses");
  truth_cmd->add_option("--network", o.network, "Network file");
  truth_cmd->add_option("--out", o.out, "Output directory (default stdout)");
  truth_cmd->add_option("--grid-points", o.grid_points, "Frequency grid size")->capture_default_str();
  truth_cmd->add_option("--rows", o.rows, "Rows of T");
  truth_cmd->add_option("--cols", o.cols, "Columns of T");
  truth_cmd->add_option("--target", o.target, "Edge j,i whose G to dump when no rows/cols are given")
      ->capture_default_str();

  auto* report_cmd = app.add_subcommand("report", "Summarise a results CSV, optionally render plots");
  report_cmd->add_option("--input", o.input, "results.csv from montecarlo")->required();
  report_cmd->add_option("--out", o.out, "Output directory for rendered files");
  report_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();
  report_cmd->add_option("--network", o.network, "Network file");
  report_cmd->add_option("--target", o.target, "Edge marked as reference")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "simulate") return cmd_simulate(o);
    if (name == "direct") return cmd_direct(o);
    if (name == "local") return cmd_local(o);
    if (name == "montecarlo") return cmd_montecarlo(o);
    if (name == "truth") return cmd_truth(o);
    return cmd_report(o);
  } catch (const StageError& e) {
    std::cerr << "netid " << name << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "netid " << name << ": " << name << ": " << e.what() << '\n';
  }
  return 1;
}
