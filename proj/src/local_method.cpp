#include "netid/local_method.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netid/errors.hpp"

namespace netid {

std::string to_string(LocalRoute route) { return route == LocalRoute::outgoing ? "outgoing" : "incoming"; }

LocalTopology LocalTopology::from_model(const NetworkModel& model, Edge target) {
  return {target, model.out_neighbors(target.from), model.in_neighbors(target.to)};
}

MethodChoice plan_experiment(const LocalTopology& topo, std::optional<LocalRoute> force) {
  const Edge e = topo.target;
  const auto edge_name = "G_{" + std::to_string(e.to.value) + "," + std::to_string(e.from.value) + "}";
  if (!topo.source_out && !topo.target_in) throw std::invalid_argument("plan_experiment: no local topology given");
  if (topo.source_out && !contains(*topo.source_out, e.to))
    throw std::invalid_argument("plan_experiment: " + edge_name + " missing from out-neighbours of source");
  if (topo.target_in && !contains(*topo.target_in, e.from))
    throw std::invalid_argument("plan_experiment: " + edge_name + " missing from in-neighbours of target");

  LocalRoute route{};
  if (force) {
    route = *force;
    if (route == LocalRoute::outgoing && !topo.source_out)
      throw std::invalid_argument("plan_experiment: outgoing route needs the out-neighbours of the source");
    if (route == LocalRoute::incoming && !topo.target_in)
      throw std::invalid_argument("plan_experiment: incoming route needs the in-neighbours of the target");
  } else if (topo.source_out && topo.target_in) {
    route = topo.source_out->size() <= topo.target_in->size() ? LocalRoute::outgoing : LocalRoute::incoming;
  } else {
    route = topo.source_out ? LocalRoute::outgoing : LocalRoute::incoming;
  }

  MethodChoice c;
  c.route = route;
  if (route == LocalRoute::outgoing) {
    c.neighbors = *topo.source_out;
    c.excite = with_node(c.neighbors, e.from);
    c.measure = c.neighbors;
    c.t_rows = c.neighbors;
    c.t_cols = c.excite;
  } else {
    c.neighbors = *topo.target_in;
    c.excite = c.neighbors;
    c.measure = with_node(c.neighbors, e.to);
    c.t_rows = c.measure;
    c.t_cols = c.neighbors;
  }
  c.entry_count = c.t_rows.size() * c.t_cols.size();
  return c;
}

double TSubmatrixEstimate::min_fit() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [k, f] : fit_scores) m = std::min(m, f);
  return m;
}

TSubmatrixEstimate estimate_T_entries(const SignalRecord& record, const NodeSet& rows, const NodeSet& cols,
                                      std::size_t fir_order, const FreqGrid& grid) {
  if (fir_order < 1) throw std::invalid_argument("estimate_T_entries: fir_order must be >= 1");
  if (rows.empty() || cols.empty()) throw std::invalid_argument("estimate_T_entries: empty row or column set");
  const auto n = static_cast<Eigen::Index>(record.samples());
  const auto taps = static_cast<Eigen::Index>(fir_order + 1);
  const auto inputs = static_cast<Eigen::Index>(cols.size());
  const Eigen::Index p = taps * inputs;
  if (n <= p) throw IdentificationError("estimate_T_entries: need more samples than parameters");

  std::vector<Eigen::VectorXd> r;
  for (NodeId l : cols) {
    if (l.value < 1 || l.index() >= record.node_count()) throw std::invalid_argument("column node out of range");
    r.emplace_back(record.r_of(l).transpose());
    if (r.back().cwiseAbs().maxCoeff() == 0.0)
      throw IdentificationError("estimate_T_entries: column node " + std::to_string(l.value) +
                                " is not excited; the open-loop experiment is invalid");
  }

  // Gram of the lagged inputs, zero pre-history. Entry ((l,a),(m,b)) sums
  // r_l(t-a) r_m(t-b) over t >= max(a,b), and shifting both lags by one
  // drops the last product: G[a+1][b+1] = G[a][b] - r_l(N-1-a) r_m(N-1-b).
  Eigen::MatrixXd gram(p, p);
  for (Eigen::Index li = 0; li < inputs; ++li) {
    for (Eigen::Index mi = 0; mi < inputs; ++mi) {
      const auto& rl = r[static_cast<std::size_t>(li)];
      const auto& rm = r[static_cast<std::size_t>(mi)];
      auto blk = gram.block(li * taps, mi * taps, taps, taps);
      for (Eigen::Index s = 0; s < taps; ++s) {
        blk(s, 0) = rl.head(n - s).dot(rm.tail(n - s));  // lag a = s, b = 0
        blk(0, s) = rl.tail(n - s).dot(rm.head(n - s));  // a = 0, b = s
      }
      for (Eigen::Index a = 1; a < taps; ++a)
        for (Eigen::Index b = 1; b < taps; ++b) blk(a, b) = blk(a - 1, b - 1) - rl(n - a) * rm(n - b);
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12)
    throw IdentificationError("estimate_T_entries: input regression is rank deficient");

  TSubmatrixEstimate est{rows, cols, fir_order, {}, {}, FreqResponseMatrix{rows, cols, grid, {}}};
  est.samples.samples.assign(grid.size(),
                             Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), inputs));

  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const NodeId k = rows[ri];
    if (k.value < 1 || k.index() >= record.node_count()) throw std::invalid_argument("row node out of range");
    const Eigen::VectorXd y = record.w_of(k).transpose();
    Eigen::VectorXd rhs(p);
    for (Eigen::Index li = 0; li < inputs; ++li)
      for (Eigen::Index a = 0; a < taps; ++a)
        rhs(li * taps + a) = r[static_cast<std::size_t>(li)].head(n - a).dot(y.tail(n - a));
    const Eigen::VectorXd theta = ldlt.solve(rhs);

    Eigen::VectorXd y_hat = Eigen::VectorXd::Zero(n);
    for (Eigen::Index li = 0; li < inputs; ++li)
      for (Eigen::Index a = 0; a < taps; ++a)
        y_hat.tail(n - a) += theta(li * taps + a) * r[static_cast<std::size_t>(li)].head(n - a);
    const double spread = (y.array() - y.mean()).matrix().norm();
    const double fit = spread > 0.0 ? 1.0 - (y - y_hat).norm() / spread : 0.0;

    for (Eigen::Index li = 0; li < inputs; ++li) {
      std::vector<double> coeffs(static_cast<std::size_t>(taps));
      for (Eigen::Index a = 0; a < taps; ++a) coeffs[static_cast<std::size_t>(a)] = theta(li * taps + a);
      RationalTF tf = RationalTF::fir(std::move(coeffs));
      for (std::size_t g = 0; g < grid.size(); ++g)
        est.samples.samples[g](static_cast<Eigen::Index>(ri), li) = tf_eval(tf, grid[g]);
      const EntryKey key{k, cols[static_cast<std::size_t>(li)]};
      est.entries.emplace(key, std::move(tf));
      est.fit_scores.emplace(key, fit);
    }
  }
  return est;
}

namespace {

double condition_of(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

template <typename BuildSystem, typename EdgeOf>
SolvedEdges solve_on_grid(const FreqResponseMatrix& t, const NodeSet& neighbors, const SolveOptions& opts,
                          BuildSystem build, EdgeOf edge_of) {
  const auto nan = Complex(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
  SolvedEdges out{t.grid, {}, {}};
  for (NodeId k : neighbors) out.responses.emplace(edge_of(k), std::vector<Complex>(t.grid.size(), nan));

  for (std::size_t g = 0; g < t.grid.size(); ++g) {
    auto [a, b] = build(t.samples[g]);
    if (!(condition_of(a) <= opts.max_condition)) {
      out.dropped.push_back(g);
      continue;
    }
    const Eigen::VectorXcd x = a.fullPivLu().solve(b);
    for (std::size_t k = 0; k < neighbors.size(); ++k)
      out.responses.at(edge_of(neighbors[k]))[g] = x(static_cast<Eigen::Index>(k));
  }
  if (static_cast<double>(out.dropped.size()) > opts.max_dropped_fraction * static_cast<double>(t.grid.size()))
    throw IdentificationError("T block is numerically singular at " + std::to_string(out.dropped.size()) + " of " +
                              std::to_string(t.grid.size()) + " grid points");
  return out;
}

}  // namespace

SolvedEdges solve_outgoing(const FreqResponseMatrix& t, NodeId i, const NodeSet& out_neighbors,
                           const SolveOptions& opts) {
  std::vector<Eigen::Index> nr, nc;
  for (NodeId k : out_neighbors) {
    nr.push_back(t.row_pos(k));
    nc.push_back(t.col_pos(k));
  }
  const Eigen::Index ic = t.col_pos(i);
  return solve_on_grid(
      t, out_neighbors, opts,
      [&](const Eigen::MatrixXcd& m) {
        return std::pair<Eigen::MatrixXcd, Eigen::VectorXcd>(m(nr, nc), m(nr, ic));
      },
      [&](NodeId k) { return Edge{k, i}; });
}

SolvedEdges solve_incoming(const FreqResponseMatrix& t, NodeId j, const NodeSet& in_neighbors,
                           const SolveOptions& opts) {
  std::vector<Eigen::Index> nr, nc;
  for (NodeId k : in_neighbors) {
    nr.push_back(t.row_pos(k));
    nc.push_back(t.col_pos(k));
  }
  const Eigen::Index jr = t.row_pos(j);
  return solve_on_grid(
      t, in_neighbors, opts,
      [&](const Eigen::MatrixXcd& m) {
        // x T_NN = T_jN  <=>  T_NN^T x^T = T_jN^T
        return std::pair<Eigen::MatrixXcd, Eigen::VectorXcd>(m(nr, nc).transpose(), m(jr, nc).transpose());
      },
      [&](NodeId k) { return Edge{j, k}; });
}

double max_disagreement(std::span<const Complex> a, std::span<const Complex> b) {
  double worst = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t g = 0; g < std::min(a.size(), b.size()); ++g) {
    if (std::isnan(a[g].real()) || std::isnan(b[g].real())) continue;
    const double d = std::abs(a[g] - b[g]);
    worst = std::isnan(worst) ? d : std::max(worst, d);
  }
  return worst;
}

RationalTF ModuleEstimate::model() const {
  std::vector<double> taps(band.max_degree + 1, 0.0);
  for (std::size_t k = 0; k < theta.size(); ++k) taps[band.delay + k] = theta[k];
  return RationalTF::fir(std::move(taps));
}

ModuleEstimate fit_parametric(Edge target, const FreqGrid& grid, std::span<const Complex> samples, FirBand band) {
  if (samples.size() != grid.size()) throw std::invalid_argument("fit_parametric: one sample per grid point");
  if (band.max_degree < band.delay) throw std::invalid_argument("fit_parametric: empty band");
  const auto params = static_cast<Eigen::Index>(band.size());

  std::vector<std::size_t> valid;
  for (std::size_t g = 0; g < samples.size(); ++g)
    if (std::isfinite(samples[g].real()) && std::isfinite(samples[g].imag())) valid.push_back(g);
  const auto m = static_cast<Eigen::Index>(valid.size());
  if (m < params)
    throw IdentificationError("fit_parametric: " + std::to_string(m) + " usable grid points for " +
                              std::to_string(params) + " parameters");

  Eigen::MatrixXd a(2 * m, params);
  Eigen::VectorXd b(2 * m);
  for (Eigen::Index row = 0; row < m; ++row) {
    const std::size_t g = valid[static_cast<std::size_t>(row)];
    for (Eigen::Index c = 0; c < params; ++c) {
      const Complex basis = std::polar(1.0, -static_cast<double>(band.delay + static_cast<std::size_t>(c)) * grid[g]);
      a(row, c) = basis.real();
      a(m + row, c) = basis.imag();
    }
    b(row) = samples[g].real();
    b(m + row) = samples[g].imag();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < params) throw IdentificationError("fit_parametric: under-determined on this grid");
  const Eigen::VectorXd theta = qr.solve(b);

  return ModuleEstimate{target,
                        grid,
                        {samples.begin(), samples.end()},
                        band,
                        {theta.data(), theta.data() + theta.size()},
                        (a * theta - b).squaredNorm()};
}

}  // namespace netid
