#include "netid/io_map.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "netid/errors.hpp"
#include "netid/simulation.hpp"

namespace netid {

namespace {
Eigen::Index position(const NodeSet& set, NodeId n, const char* what) {
  auto it = std::ranges::lower_bound(set, n);
  if (it == set.end() || *it != n)
    throw std::out_of_range(std::string("FreqResponseMatrix: node ") + std::to_string(n.value) + " not among " + what);
  return static_cast<Eigen::Index>(it - set.begin());
}
}  // namespace

Eigen::Index FreqResponseMatrix::row_pos(NodeId n) const { return position(rows, n, "rows"); }
Eigen::Index FreqResponseMatrix::col_pos(NodeId n) const { return position(cols, n, "cols"); }

Complex FreqResponseMatrix::at(NodeId row, NodeId col, std::size_t k) const {
  return samples.at(k)(row_pos(row), col_pos(col));
}

FreqResponseMatrix FreqResponseMatrix::block(const NodeSet& sub_rows, const NodeSet& sub_cols) const {
  std::vector<Eigen::Index> ri, ci;
  for (NodeId n : sub_rows) ri.push_back(row_pos(n));
  for (NodeId n : sub_cols) ci.push_back(col_pos(n));
  FreqResponseMatrix out{sub_rows, sub_cols, grid, {}};
  out.samples.reserve(samples.size());
  for (const auto& m : samples) out.samples.push_back(m(ri, ci));
  return out;
}

FreqResponseMatrix true_T(const NetworkModel& model, const NodeSet& rows, const NodeSet& cols, const FreqGrid& grid) {
  const auto n = static_cast<Eigen::Index>(model.node_count());
  std::vector<Eigen::Index> ri, ci;
  for (NodeId r : rows) ri.push_back(static_cast<Eigen::Index>(r.index()));
  for (NodeId c : cols) ci.push_back(static_cast<Eigen::Index>(c.index()));
  for (auto idx : ri)
    if (idx < 0 || idx >= n) throw std::invalid_argument("true_T: row node out of range");
  for (auto idx : ci)
    if (idx < 0 || idx >= n) throw std::invalid_argument("true_T: col node out of range");

  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, static_cast<Eigen::Index>(ci.size()));
  for (std::size_t k = 0; k < ci.size(); ++k) rhs(ci[k], static_cast<Eigen::Index>(k)) = 1.0;

  FreqResponseMatrix out{rows, cols, grid, {}};
  out.samples.reserve(grid.size());
  for (double omega : grid.omegas()) {
    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) - model.response(omega);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    if (!lu.isInvertible() || lu.rcond() < 1e-13)
      throw SingularSystemError("true_T: I - G is singular at omega = " + std::to_string(omega), omega);
    const Eigen::MatrixXcd cols_of_t = lu.solve(rhs);
    out.samples.push_back(cols_of_t(ri, Eigen::all));
  }
  return out;
}

namespace {

using Series = std::vector<double>;

Series truncated_product(const Series& a, const Series& b) {
  const std::size_t n = a.size();
  Series out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t k = 0; i + k < n; ++k) out[i + k] += a[i] * b[k];
  }
  return out;
}

// Determinant of the square submatrix of `m` on (rows, cols), where every
// entry is a truncated series and absent entries are zero. Dynamic programme
// over the set of columns already used by the preceding rows.
Series series_determinant(const std::vector<std::vector<const Series*>>& m, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols, std::size_t n) {
  std::unordered_map<std::uint32_t, Series> dp;
  Series one(n, 0.0);
  one[0] = 1.0;
  dp.emplace(0u, one);
  for (std::size_t r : rows) {
    std::unordered_map<std::uint32_t, Series> next;
    for (const auto& [mask, acc] : dp) {
      for (std::size_t pos = 0; pos < cols.size(); ++pos) {
        const std::uint32_t bit = 1u << pos;
        const Series* entry = m[r][cols[pos]];
        if ((mask & bit) || entry == nullptr) continue;
        // Inversions added by placing this column after the used ones.
        const bool odd = std::popcount(mask >> (pos + 1)) % 2 == 1;
        Series term = truncated_product(acc, *entry);
        auto [it, fresh] = next.try_emplace(mask | bit, n, 0.0);
        for (std::size_t t = 0; t < n; ++t) it->second[t] += odd ? -term[t] : term[t];
      }
    }
    dp = std::move(next);
  }
  const std::uint32_t full = cols.size() == 32 ? ~0u : (1u << cols.size()) - 1u;
  auto it = dp.find(full);
  return it == dp.end() ? Series(n, 0.0) : it->second;
}

}  // namespace

std::vector<double> true_T_impulse(const NetworkModel& model, NodeId out, NodeId in, std::size_t n) {
  if (n == 0) throw std::invalid_argument("true_T_impulse: n must be >= 1");
  const std::size_t nodes = model.node_count();
  if (nodes > 31) throw std::invalid_argument("true_T_impulse: cofactor expansion supports at most 31 nodes");
  if (out.value < 1 || out.index() >= nodes || in.value < 1 || in.index() >= nodes)
    throw std::invalid_argument("true_T_impulse: node out of range");

  // Entries of I - G as truncated series.
  std::vector<Series> storage;
  storage.reserve(model.edges().size() + 1);
  Series delta(n, 0.0);
  delta[0] = 1.0;
  storage.push_back(delta);
  std::vector<std::vector<const Series*>> m(nodes, std::vector<const Series*>(nodes, nullptr));
  for (std::size_t k = 0; k < nodes; ++k) m[k][k] = &storage[0];
  for (const auto& [e, tf] : model.edges()) {
    Series h = impulse_response(tf, n);
    for (double& x : h) x = -x;
    storage.push_back(std::move(h));
    m[e.to.index()][e.from.index()] = &storage.back();
  }

  std::vector<std::size_t> all(nodes);
  for (std::size_t k = 0; k < nodes; ++k) all[k] = k;
  const Series det = series_determinant(m, all, all, n);
  if (std::abs(det[0]) < 1e-14) throw ModelError("true_T_impulse: det(I - D0) vanishes");

  std::vector<std::size_t> rows, cols;
  for (std::size_t k = 0; k < nodes; ++k) {
    if (k != in.index()) rows.push_back(k);
    if (k != out.index()) cols.push_back(k);
  }
  Series cof = series_determinant(m, rows, cols, n);
  if ((out.value + in.value) % 2 == 1)
    for (double& x : cof) x = -x;

  Series h(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double s = cof[t];
    for (std::size_t k = 1; k <= t; ++k) s -= det[k] * h[t - k];
    h[t] = s / det[0];
  }
  return h;
}

bool is_internally_stable(const NetworkModel& model, const StabilityOptions& opts) {
  for (const auto& [e, tf] : model.edges())
    if (!is_stable(tf)) return false;

  // Winding number of det(I - G) around the origin; nonzero means zeros of
  // det(I - G(x)) inside the unit disc of x = q^-1, i.e. unstable modes.
  const auto n = static_cast<Eigen::Index>(model.node_count());
  double total_phase = 0.0;
  Complex prev;
  for (std::size_t k = 0; k <= opts.winding_points; ++k) {
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(opts.winding_points);
    const Complex det = (Eigen::MatrixXcd::Identity(n, n) - model.response(omega)).partialPivLu().determinant();
    if (std::abs(det) < 1e-12) return false;
    if (k > 0) total_phase += std::arg(det / prev);
    prev = det;
  }
  if (std::abs(total_phase) > std::numbers::pi) return false;

  const auto horizon = static_cast<Eigen::Index>(opts.horizon);
  const Eigen::Index tail = std::max<Eigen::Index>(1, horizon / 100);
  for (Eigen::Index node = 0; node < n; ++node) {
    Eigen::MatrixXd input = Eigen::MatrixXd::Zero(n, horizon);
    input(node, 0) = 1.0;
    try {
      const Eigen::MatrixXd w = simulate_response(model, input);
      if (w.rightCols(tail).cwiseAbs().maxCoeff() >= opts.decay_tolerance) return false;
    } catch (const SimulationDiverged&) {
      return false;
    }
  }
  return true;
}

}  // namespace netid
