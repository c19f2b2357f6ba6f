#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "netid/errors.hpp"
#include "netid/experiments.hpp"
#include "netid/network_io.hpp"

namespace netid {

std::string to_string(EstimatorKind kind) { return kind == EstimatorKind::direct ? "direct" : "local"; }

ExcitationSpec Scenario::excitation(std::size_t node_count, std::uint64_t seed) const {
  ExcitationSpec spec;
  spec.excited_nodes = excited;
  spec.r_variance = r_variance;
  spec.v_variance = noise == NoisePlacement::all ? ExcitationSpec::uniform_noise(node_count, v_variance)
                                                 : ExcitationSpec::noise_on(node_count, excited, v_variance);
  spec.samples = samples;
  spec.seed = seed;
  return spec;
}

void Scenario::validate(std::size_t node_count) const {
  if (runs < 1) throw std::invalid_argument("scenario " + id + ": runs must be >= 1");
  if (samples < 1) throw std::invalid_argument("scenario " + id + ": samples must be >= 1");
  auto check = [&](NodeId n) {
    if (n.value < 1 || (node_count != 0 && n.index() >= node_count))
      throw std::invalid_argument("scenario " + id + ": node " + std::to_string(n.value) + " out of range");
  };
  for (NodeId n : excited) check(n);
  check(target.to);
  check(target.from);
  if (!(r_variance >= 0.0) || !(v_variance >= 0.0))
    throw std::invalid_argument("scenario " + id + ": variances must be >= 0");
}

namespace {

template <typename T>
bool parse_integer(const std::string& s, T& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

NodeSet parse_nodes(const std::string& value, const std::string& source, std::size_t line) {
  try {
    return parse_node_list(value);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, line, e.what());
  }
}

double parse_variance(const std::string& value, const std::string& source, std::size_t line) {
  double x = 0.0;
  if (!parse_double(value, x) || !std::isfinite(x) || x < 0.0)
    throw ParseError(source, line, "bad variance '" + value + "'");
  return x;
}

}  // namespace

NodeSet parse_node_list(const std::string& value) {
  std::vector<int> nodes;
  for (const auto& part : split(value, ',')) {
    const auto dash = part.find('-');
    int lo = 0, hi = 0;
    if (dash == std::string::npos) {
      if (!parse_integer(part, lo)) throw std::invalid_argument("bad node '" + part + "'");
      hi = lo;
    } else if (!parse_integer(part.substr(0, dash), lo) || !parse_integer(part.substr(dash + 1), hi) || hi < lo) {
      throw std::invalid_argument("bad node range '" + part + "'");
    }
    if (lo < 1) throw std::invalid_argument("invalid node index " + std::to_string(lo));
    for (int n = lo; n <= hi; ++n) nodes.push_back(n);
  }
  if (nodes.empty()) throw std::invalid_argument("empty node list");
  return make_node_set(std::move(nodes));
}

std::vector<Scenario> read_scenarios(std::istream& in, const std::string& source, std::size_t node_count) {
  static const std::set<std::string> known = {"id",   "excited", "method", "target", "runs",
                                              "samples", "seed", "r_var", "v_var", "noise"};
  std::vector<Scenario> out;
  std::set<std::string> ids;
  bool have_header = false;
  std::size_t line_no = 0;

  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::istringstream ss(line.substr(0, line.find('#')));
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (!have_header) {
      if (tok.size() != 2 || tok[0] != "netid-scenarios")
        throw ParseError(source, line_no, "expected header 'netid-scenarios 1'");
      if (tok[1] != "1") throw ParseError(source, line_no, "unsupported scenario schema version " + tok[1]);
      have_header = true;
      continue;
    }
    if (tok[0] != "scenario") throw ParseError(source, line_no, "unknown record '" + tok[0] + "'");

    std::map<std::string, std::string> kv;
    for (std::size_t k = 1; k < tok.size(); ++k) {
      const auto eq = tok[k].find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError(source, line_no, "expected key=value, got '" + tok[k] + "'");
      const std::string key = tok[k].substr(0, eq);
      if (!known.contains(key)) throw ParseError(source, line_no, "unknown key '" + key + "'");
      if (!kv.emplace(key, tok[k].substr(eq + 1)).second) throw ParseError(source, line_no, "duplicate key '" + key + "'");
    }
    for (const char* required : {"id", "excited", "target", "runs", "samples", "seed"})
      if (!kv.contains(required)) throw ParseError(source, line_no, std::string("missing key '") + required + "'");

    Scenario s;
    s.id = kv["id"];
    if (!ids.insert(s.id).second) throw ParseError(source, line_no, "duplicate scenario id '" + s.id + "'");
    s.excited = parse_nodes(kv["excited"], source, line_no);

    const auto target = split(kv["target"], ',');
    int j = 0, i = 0;
    if (target.size() != 2 || !parse_integer(target[0], j) || !parse_integer(target[1], i) || j < 1 || i < 1)
      throw ParseError(source, line_no, "target must be 'j,i'");
    s.target = {NodeId{j}, NodeId{i}};

    if (!parse_integer(kv["runs"], s.runs) || s.runs < 1) throw ParseError(source, line_no, "runs must be >= 1");
    if (!parse_integer(kv["samples"], s.samples) || s.samples < 1)
      throw ParseError(source, line_no, "samples must be >= 1");
    if (!parse_integer(kv["seed"], s.base_seed)) throw ParseError(source, line_no, "bad seed");

    if (kv.contains("method")) {
      if (kv["method"] == "direct") s.method = EstimatorKind::direct;
      else if (kv["method"] == "local") s.method = EstimatorKind::local;
      else throw ParseError(source, line_no, "method must be direct or local");
    }
    if (kv.contains("noise")) {
      if (kv["noise"] == "all") s.noise = NoisePlacement::all;
      else if (kv["noise"] == "excited") s.noise = NoisePlacement::excited;
      else throw ParseError(source, line_no, "noise must be all or excited");
    }
    if (kv.contains("r_var")) s.r_variance = parse_variance(kv["r_var"], source, line_no);
    if (kv.contains("v_var")) s.v_variance = parse_variance(kv["v_var"], source, line_no);

    try {
      s.validate(node_count);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, e.what());
    }
    out.push_back(std::move(s));
  }
  if (!have_header) throw ParseError(source, line_no, "empty scenario file");
  if (out.empty()) throw ParseError(source, line_no, "no scenarios defined");
  return out;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& path, std::size_t node_count) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path.string());
  return read_scenarios(in, path.string(), node_count);
}

const Scenario& find_scenario(const std::vector<Scenario>& scenarios, const std::string& id) {
  for (const auto& s : scenarios)
    if (s.id == id) return s;
  throw std::out_of_range("no scenario with id '" + id + "'");
}

}  // namespace netid
