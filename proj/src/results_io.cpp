#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "netid/errors.hpp"
#include "netid/experiments.hpp"
#include "netid/network_io.hpp"

namespace netid {

void write_csv(const ResultTable& table, std::ostream& out) {
  std::size_t p = 0;
  for (const auto& sr : table) p = std::max(p, sr.parameter_count());
  out << "scenario_id,run";
  for (std::size_t k = 1; k <= p; ++k) out << ",a" << k;
  out << ",informative\n";
  for (const auto& sr : table) {
    for (const auto& r : sr.runs) {
      out << sr.scenario_id << ',' << r.run;
      for (std::size_t k = 0; k < p; ++k)
        out << ',' << (k < r.theta.size() ? format_double(r.theta[k]) : std::string("nan"));
      out << ',' << (r.informative ? 1 : 0) << '\n';
    }
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) parts.push_back(cur);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

ResultTable read_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(source, lineno, "empty file");
  const auto header = split(line, ',');
  if (header.size() < 3 || header.front() != "scenario_id" || header[1] != "run" || header.back() != "informative")
    throw ParseError(source, lineno, "bad header");
  const std::size_t p = header.size() - 3;
  for (std::size_t k = 0; k < p; ++k)
    if (header[k + 2] != "a" + std::to_string(k + 1)) throw ParseError(source, lineno, "bad column " + header[k + 2]);

  ResultTable table;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw ParseError(source, lineno, "expected " + std::to_string(header.size()) + " fields");
    RunRecord rec;
    try {
      std::size_t used = 0;
      rec.run = std::stoul(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument(f[1]);
      for (std::size_t k = 0; k < p; ++k) {
        double x = 0;
        if (!parse_double(f[k + 2], x)) throw std::invalid_argument(f[k + 2]);
        rec.theta.push_back(x);
      }
    } catch (const std::exception&) {
      throw ParseError(source, lineno, "bad number");
    }
    if (f.back() != "0" && f.back() != "1") throw ParseError(source, lineno, "informative must be 0 or 1");
    rec.informative = f.back() == "1";
    if (table.empty() || table.back().scenario_id != f[0]) table.push_back({f[0], {}});
    table.back().runs.push_back(std::move(rec));
  }
  return table;
}

void write_svg_scatter(const ScenarioResult& result, std::ostream& out,
                       std::optional<std::pair<double, double>> reference) {
  constexpr double width = 480, height = 480, margin = 50;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : result.runs)
    if (r.theta.size() >= 2 && std::isfinite(r.theta[0]) && std::isfinite(r.theta[1]))
      pts.emplace_back(r.theta[0], r.theta[1]);

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto extend = [&](double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (auto [x, y] : pts) extend(x, y);
  if (reference) extend(reference->first, reference->second);
  if (!std::isfinite(x0)) x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  const double padx = std::max((x1 - x0) * 0.05, 1e-3), pady = std::max((y1 - y0) * 0.05, 1e-3);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto sx = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
  auto sy = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<title>scenario " << result.scenario_id << "</title>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\""
      << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">a1 ["
      << format_double(x0) << ", " << format_double(x1) << "]</text>\n";
  out << "<text x=\"14\" y=\"" << height / 2 << "\" transform=\"rotate(-90 14 " << height / 2
      << ")\" text-anchor=\"middle\">a2 [" << format_double(y0) << ", " << format_double(y1) << "]</text>\n";
  for (auto [x, y] : pts)
    out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"2\" fill=\"steelblue\"/>\n";
  if (reference)
    out << "<circle cx=\"" << sx(reference->first) << "\" cy=\"" << sy(reference->second)
        << "\" r=\"5\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";
  out << "</svg>\n";
}

std::vector<std::filesystem::path> emit_results(const ResultTable& table, OutputFormat format,
                                                const std::filesystem::path& dir,
                                                std::optional<std::pair<double, double>> reference) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };
  if (format == OutputFormat::csv) {
    const auto path = dir / "results.csv";
    auto f = open(path);
    write_csv(table, f);
    written.push_back(path);
  } else {
    for (const auto& sr : table) {
      const auto path = dir / ("scatter_" + sr.scenario_id + ".svg");
      auto f = open(path);
      write_svg_scatter(sr, f, reference);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace netid
