#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "netid/errors.hpp"
#include "netid/experiments.hpp"

using namespace netid;
namespace fs = std::filesystem;

namespace {

constexpr NodeId n(int k) { return NodeId{k}; }

const std::vector<Scenario>& shipped() {
  static const auto s = load_scenarios(NETID_DATA_DIR "/excitation_scenarios.txt", 20);
  return s;
}

Scenario quick(const std::string& id, std::size_t runs) {
  Scenario sc = find_scenario(shipped(), id);
  sc.runs = runs;
  return sc;
}

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_scenarios(in, "s.txt", 20);
  } catch (const ParseError& e) {
    return e.line();
  }
  return std::numeric_limits<std::size_t>::max();
}

struct Captured {
  int status;
  std::string output;
};

Captured run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + NETID_CLI + "\" " + args + " 2>&1";
  Captured c{0, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 512> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) c.output += buf.data();
  c.status = pclose(pipe);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("shipped scenario file") {
  const auto& all = shipped();
  std::size_t direct = 0;
  for (const Scenario& s : all)
    if (s.method == EstimatorKind::direct) {
      ++direct;
      CHECK(s.runs == 1000);
      CHECK(s.samples == 10000);
      CHECK(s.target == Edge{n(3), n(4)});
    }
  CHECK(direct == 18);
  CHECK(find_scenario(all, "1").excited.size() == 20);
  CHECK(find_scenario(all, "2").excited == make_node_set({3, 4, 5}));
  CHECK(find_scenario(all, "17").excited == make_node_set({1, 7}));
  CHECK(find_scenario(all, "18").excited == make_node_set({1, 16}));
  CHECK(find_scenario(all, "12").excited == make_node_set({7, 8, 9, 10}));
  CHECK(find_scenario(all, "local").method == EstimatorKind::local);
  CHECK_THROWS_AS(find_scenario(all, "19"), std::out_of_range);
}

TEST_CASE("scenario parsing errors") {
  CHECK(error_line("") != std::numeric_limits<std::size_t>::max());
  CHECK(error_line("netid-scenarios 1\n") != std::numeric_limits<std::size_t>::max());
  CHECK(error_line("netid-scenarios 2\n") == 1);
  const std::string head = "netid-scenarios 1\n";
  const std::string ok = "scenario id=a excited=1,2 target=3,4 runs=2 samples=10 seed=1\n";
  CHECK(error_line(head + ok) == std::numeric_limits<std::size_t>::max());
  CHECK(error_line(head + ok + "scenario id=b excited=1 target=3,4 runs=2 samples=10 seed=1 colour=red\n") == 3);
  CHECK(error_line(head + "# note\nscenario id=b excited=25 target=3,4 runs=2 samples=10 seed=1\n") == 3);
  CHECK(error_line(head + "scenario id=b excited=1 target=3,4 runs=0 samples=10 seed=1\n") == 2);
  CHECK(error_line(head + "scenario id=b excited=1 target=3,4 runs=2 samples=10\n") == 2);
  CHECK(error_line(head + "scenario id=b id=c excited=1 target=3,4 runs=2 samples=10 seed=1\n") == 2);
  CHECK(error_line(head + "scenario id=b excited=4-2 target=3,4 runs=2 samples=10 seed=1\n") == 2);
  CHECK(error_line(head + "scenario id=b excited=1 target=3,4 runs=2 samples=10 seed=1 method=pem\n") == 2);
  CHECK(error_line(head + "scenario id=b excited=1 target=3,4 runs=2 samples=10 seed=1 v_var=-1\n") == 2);
  CHECK(error_line(head + ok + ok) == 3);
  CHECK(error_line(head + "run id=b\n") == 2);
}

TEST_CASE("node lists") {
  CHECK(parse_node_list("3,5,7-9") == make_node_set({3, 5, 7, 8, 9}));
  CHECK(parse_node_list("2,1,2") == make_node_set({1, 2}));
  CHECK_THROWS_AS(parse_node_list(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_node_list("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_node_list("1,,2"), std::invalid_argument);
}

TEST_CASE("monte carlo: consistent scenarios") {
  const NetworkModel cs = build_case_study();
  MonteCarloOptions opts;
  opts.workers = 2;
  for (const auto& [id, a1, a2] : {std::tuple{"1", -0.3001, 0.7998}, std::tuple{"7", -0.3003, 0.8001}}) {
    const ScenarioResult r = run_monte_carlo(quick(id, 100), cs, opts);
    CHECK(r.runs.size() == 100);
    CHECK(r.failed_runs() == 0);
    CHECK(r.informative_rate() == 1.0);
    const auto m = r.mean();
    CHECK(std::abs(m[0] - a1) < 0.02);
    CHECK(std::abs(m[1] - a2) < 0.02);
    for (std::size_t k = 0; k < r.runs.size(); ++k) CHECK(r.runs[k].run == k);
  }
}

TEST_CASE("monte carlo: noise-free single run is exact") {
  Scenario sc = quick("1", 1);
  sc.v_variance = 0.0;
  const ScenarioResult r = run_monte_carlo(sc, build_case_study(), {});
  REQUIRE(r.runs.size() == 1);
  CHECK(std::abs(r.runs[0].theta[0] + 0.3) < 1e-8);
  CHECK(std::abs(r.runs[0].theta[1] - 0.8) < 1e-8);
}

TEST_CASE("monte carlo: per-run failures are recorded") {
  Scenario sc = quick("1", 3);
  sc.samples = 2;
  const ScenarioResult r = run_monte_carlo(sc, build_case_study(), {});
  CHECK(r.runs.size() == 3);
  CHECK(r.failed_runs() == 3);
  CHECK(std::isnan(r.runs[0].theta[0]));
  CHECK(std::isnan(r.mean()[0]));
  CHECK_FALSE(r.runs[1].informative);

  Scenario bad = quick("1", 1);
  bad.target = Edge{n(20), n(1)};
  CHECK_THROWS(run_monte_carlo(bad, build_case_study(), {}));
}

TEST_CASE("monte carlo: determinism across worker counts") {
  const NetworkModel cs = build_case_study();
  MonteCarloOptions one, four;
  four.workers = 4;
  const ScenarioResult a = run_monte_carlo(quick("4", 12), cs, one);
  const ScenarioResult b = run_monte_carlo(quick("4", 12), cs, four);
  CHECK(a == b);
  std::ostringstream sa, sb;
  write_csv({a}, sa);
  write_csv({b}, sb);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("monte carlo: local estimator scenario") {
  Scenario sc = find_scenario(shipped(), "local");
  sc.runs = 2;
  const ScenarioResult r = run_monte_carlo(sc, build_case_study(), {});
  CHECK(r.failed_runs() == 0);
  CHECK(std::abs(r.mean()[0] + 0.3) < 0.02);
  CHECK(std::abs(r.mean()[1] - 0.8) < 0.02);
}

TEST_CASE("csv emission and round trip") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ScenarioResult one{"1", {RunRecord{0, {-0.30000000000000004, 0.8}, true, {}}}};
  std::ostringstream out;
  write_csv({one}, out);
  CHECK(out.str() == "scenario_id,run,a1,a2,informative\n1,0,-0.30000000000000004,0.8,1\n");

  const ResultTable table{one, ScenarioResult{"x", {RunRecord{0, {1e-300, -7.25}, false, {}},
                                                    RunRecord{1, {nan, nan}, false, "boom"}}}};
  std::stringstream io;
  write_csv(table, io);
  const ResultTable back = read_csv(io);
  CHECK(back == table);

  std::istringstream bad("scenario_id,run,a1,a2,informative\n1,0,abc,0.8,1\n");
  CHECK_THROWS_AS(read_csv(bad), ParseError);
  std::istringstream short_row("scenario_id,run,a1,a2,informative\n1,0,0.8,1\n");
  CHECK_THROWS_AS(read_csv(short_row), ParseError);
}

TEST_CASE("emit_results writes csv and svg") {
  const fs::path dir = fs::temp_directory_path() / "netid_emit_test";
  fs::remove_all(dir);
  const ScenarioResult r = run_monte_carlo(quick("4", 5), build_case_study(), {});
  const ResultTable table{r, run_monte_carlo(quick("1", 5), build_case_study(), {})};

  const auto csv = emit_results(table, OutputFormat::csv, dir);
  REQUIRE(csv.size() == 1);
  std::ifstream f(csv[0], std::ios::binary);
  CHECK(read_csv(f) == table);

  const auto svg = emit_results(table, OutputFormat::svg, dir, std::pair{-0.3, 0.8});
  REQUIRE(svg.size() == 2);
  CHECK(svg[0].filename() == "scatter_4.svg");
  const std::string text = slurp(svg[0]);
  CHECK(text.rfind("<svg", 0) == 0);
  std::size_t circles = 0;
  for (auto pos = text.find("<circle"); pos != std::string::npos; pos = text.find("<circle", pos + 1)) ++circles;
  CHECK(circles == 6);
  fs::remove_all(dir);
}

TEST_CASE("local pipeline") {
  const NetworkModel cs = build_case_study();
  LocalPipelineConfig cfg;
  cfg.seed = 4;
  const LocalPipelineResult r = run_local_pipeline(cs, {n(3), n(4)}, cfg);
  CHECK(r.plan.route == LocalRoute::outgoing);
  REQUIRE(r.t_estimate.has_value());
  CHECK(r.t_estimate->fit_scores.size() == 12);
  CHECK(std::abs(r.module.theta[0] + 0.3) < 0.02);
  CHECK(std::abs(r.module.theta[1] - 0.8) < 0.02);

  LocalPipelineConfig exact;
  exact.exact_T = true;
  exact.v_variance = 0.0;
  exact.cross_check = true;
  const LocalPipelineResult e = run_local_pipeline(cs, {n(3), n(4)}, exact);
  CHECK_FALSE(e.t_estimate.has_value());
  CHECK(std::abs(e.module.theta[0] + 0.3) < 1e-8);
  CHECK(std::abs(e.module.theta[1] - 0.8) < 1e-8);
  REQUIRE(e.cross_check_disagreement.has_value());
  CHECK(*e.cross_check_disagreement < 1e-9);

  LocalPipelineConfig in;
  in.seed = 9;
  in.force_route = LocalRoute::incoming;
  const LocalPipelineResult g21 = run_local_pipeline(cs, {n(2), n(1)}, in);
  CHECK(g21.plan.route == LocalRoute::incoming);
  CHECK(g21.plan.neighbors == make_node_set({1, 6, 8}));
  CHECK(std::abs(g21.module.theta[0] + 0.11576491) < 0.02);
  CHECK(std::abs(g21.module.theta[1] - 0.042048459) < 0.02);
}

TEST_CASE("local pipeline stage labels") {
  const NetworkModel cs = build_case_study();
  auto stage_of = [&](Edge target, LocalPipelineConfig cfg) -> std::string {
    try {
      run_local_pipeline(cs, target, cfg);
    } catch (const StageError& e) {
      return e.stage();
    }
    return "none";
  };
  CHECK(stage_of({n(20), n(1)}, {}) == "plan");
  CHECK(stage_of({n(11), n(10)}, {}) == "plan");
  LocalPipelineConfig tiny;
  tiny.samples = 50;
  CHECK(stage_of({n(3), n(4)}, tiny) == "estimate_T");
  LocalPipelineConfig unexcited;
  unexcited.excite_override = make_node_set({3, 5, 6});
  CHECK(stage_of({n(3), n(4)}, unexcited) == "estimate_T");
  LocalPipelineConfig grid;
  grid.grid_points = 1;
  CHECK(stage_of({n(3), n(4)}, grid) == "fit");
}

TEST_CASE("cli exit codes") {
  const fs::path dir = fs::temp_directory_path() / "netid_cli_test";
  fs::remove_all(dir);
  CHECK(run_cli("direct --scenario 5").status == 0);
  const Captured mc = run_cli("montecarlo --scenario 2 --runs 3 --out \"" + dir.string() + "\"");
  CHECK(mc.status == 0);
  CHECK(fs::exists(dir / "results.csv"));
  const Captured rep = run_cli("report --input \"" + (dir / "results.csv").string() + "\"");
  CHECK(rep.status == 0);
  CHECK(rep.output.find("scenario runs") != std::string::npos);

  const Captured bad = run_cli("local --target 20,1");
  CHECK(bad.status != 0);
  CHECK(bad.output.find("plan:") != std::string::npos);
  const Captured missing = run_cli("montecarlo --scenario nope");
  CHECK(missing.status != 0);
  CHECK(run_cli("frobnicate").status != 0);
  CHECK(run_cli("montecarlo --format pdf").status != 0);
  fs::remove_all(dir);
}
