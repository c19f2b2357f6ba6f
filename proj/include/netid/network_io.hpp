#pragma once

// Plain-text network files.
//
//   netid-network 1
//   nodes <L>
//   edge <j> <i> num <b0> <b1> ... den <a0> <a1> ...
//
// One `edge` record per nonzero G_{j,i}. Blank lines and text after '#' are
// ignored. Coefficients are written in shortest round-trip form, so
// write -> read reproduces every double exactly.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "netid/network.hpp"

namespace netid {

NetworkModel read_network(std::istream& in, const std::string& source = "<network>");
NetworkModel load_network(const std::filesystem::path& path);

void write_network(const NetworkModel& model, std::ostream& out);
void save_network(const NetworkModel& model, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);
/// Strict full-token parse; false on failure.
bool parse_double(const std::string& token, double& out);

}  // namespace netid
