#include "netid/network_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "netid/errors.hpp"

namespace netid {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& token, double& out) {
  if (token == "nan") {
    out = std::nan("");
    return true;
  }
  if (token == "inf" || token == "-inf") {
    out = token[0] == '-' ? -INFINITY : INFINITY;
    return true;
  }
  const char* first = token.data();
  if (!token.empty() && token[0] == '+') ++first;
  auto res = std::from_chars(first, token.data() + token.size(), out);
  return res.ec == std::errc{} && res.ptr == token.data() + token.size() && !token.empty();
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

int parse_node(const std::string& tok, const std::string& source, std::size_t line) {
  int value = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError(source, line, "expected node index, got '" + tok + "'");
  return value;
}

}  // namespace

NetworkModel read_network(std::istream& in, const std::string& source) {
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t nodes = 0;
  EdgeMap edges;
  std::vector<std::size_t> edge_lines;

  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok.size() != 2 || tok[0] != "netid-network")
        throw ParseError(source, line_no, "expected header 'netid-network 1'");
      if (tok[1] != "1") throw ParseError(source, line_no, "unsupported network format version " + tok[1]);
      have_header = true;
      continue;
    }
    if (tok[0] == "nodes") {
      if (tok.size() != 2 || nodes != 0) throw ParseError(source, line_no, "expected a single 'nodes <L>' record");
      const int l = parse_node(tok[1], source, line_no);
      if (l < 1) throw ParseError(source, line_no, "node count must be positive");
      nodes = static_cast<std::size_t>(l);
      continue;
    }
    if (tok[0] != "edge") throw ParseError(source, line_no, "unknown record '" + tok[0] + "'");
    if (nodes == 0) throw ParseError(source, line_no, "'nodes' must precede edges");
    if (tok.size() < 7 || tok[3] != "num") throw ParseError(source, line_no, "expected 'edge j i num ... den ...'");
    const int j = parse_node(tok[1], source, line_no);
    const int i = parse_node(tok[2], source, line_no);
    if (j < 1 || i < 1 || static_cast<std::size_t>(j) > nodes || static_cast<std::size_t>(i) > nodes)
      throw ParseError(source, line_no, "edge node index outside 1.." + std::to_string(nodes));
    std::vector<double> num, den;
    std::vector<double>* target = &num;
    for (std::size_t k = 4; k < tok.size(); ++k) {
      if (tok[k] == "den") {
        if (target == &den) throw ParseError(source, line_no, "duplicate 'den'");
        target = &den;
        continue;
      }
      double x = 0.0;
      if (!parse_double(tok[k], x) || !std::isfinite(x))
        throw ParseError(source, line_no, "bad coefficient '" + tok[k] + "'");
      target->push_back(x);
    }
    if (num.empty() || den.empty()) throw ParseError(source, line_no, "numerator and denominator must be nonempty");
    if (den[0] == 0.0) throw ParseError(source, line_no, "denominator constant term must be nonzero");
    const Edge e{NodeId{j}, NodeId{i}};
    if (!edges.emplace(e, RationalTF(PolyQ(num), PolyQ(den))).second)
      throw ParseError(source, line_no, "duplicate edge");
  }
  if (!have_header) throw ParseError(source, line_no, "empty network file");
  if (nodes == 0) throw ParseError(source, line_no, "missing 'nodes' record");
  try {
    return NetworkModel(nodes, std::move(edges));
  } catch (const ModelError& e) {
    throw ParseError(source, line_no, e.what());
  }
}

NetworkModel load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open network file " + path.string());
  return read_network(in, path.string());
}

void write_network(const NetworkModel& model, std::ostream& out) {
  out << "netid-network 1\n";
  out << "nodes " << model.node_count() << "\n";
  for (const auto& [e, tf] : model.edges()) {
    out << "edge " << e.to.value << ' ' << e.from.value << " num";
    for (double c : tf.num().coeffs()) out << ' ' << format_double(c);
    out << " den";
    for (double c : tf.den().coeffs()) out << ' ' << format_double(c);
    out << '\n';
  }
}

void save_network(const NetworkModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write network file " + path.string());
  write_network(model, out);
}

}  // namespace netid
