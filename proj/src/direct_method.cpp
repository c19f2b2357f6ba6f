#include "netid/direct_method.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "netid/errors.hpp"

namespace netid {

FirBand band_of(const RationalTF& fir_edge) {
  if (!fir_edge.is_fir()) throw std::invalid_argument("band_of: edge is not FIR");
  const auto first = fir_edge.relative_degree();
  if (!first) throw std::invalid_argument("band_of: edge is zero");
  return {*first, fir_edge.num().degree()};
}

std::size_t DirectModelStructure::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& r : regressors) n += r.band.size();
  return n;
}

std::size_t DirectModelStructure::max_delay() const noexcept {
  std::size_t d = 0;
  for (const auto& r : regressors) d = std::max(d, r.band.max_degree);
  return d;
}

void DirectModelStructure::validate() const {
  if (regressors.empty()) throw std::invalid_argument("direct model structure needs at least one regressor");
  for (const auto& r : regressors) {
    if (r.band.max_degree < r.band.delay) throw std::invalid_argument("FIR band with max_degree < delay");
    if (r.from == target) throw std::invalid_argument("target node cannot regress on itself");
  }
}

DirectModelStructure known_structure(const NetworkModel& model, NodeId target) {
  DirectModelStructure s{target, {}};
  for (NodeId k : model.in_neighbors(target)) {
    const RationalTF& g = model.edge({target, k});
    if (!g.is_fir())
      throw std::invalid_argument("direct method supports FIR edges only; G_{" + std::to_string(target.value) + "," +
                                  std::to_string(k.value) + "} is rational");
    s.regressors.push_back({k, band_of(g)});
  }
  s.validate();
  return s;
}

Regression build_regressor(const SignalRecord& record, const DirectModelStructure& structure) {
  structure.validate();
  const std::size_t n = record.samples();
  const std::size_t lag = structure.max_delay();
  if (n <= lag)
    throw IdentificationError("record has " + std::to_string(n) + " samples, need more than " + std::to_string(lag));
  const auto rows = static_cast<Eigen::Index>(n - lag);
  const auto first = static_cast<Eigen::Index>(lag);

  Regression reg;
  reg.phi.resize(rows, static_cast<Eigen::Index>(structure.parameter_count()));
  Eigen::Index col = 0;
  for (const auto& r : structure.regressors) {
    const auto w = record.w_of(r.from);
    for (std::size_t d = r.band.delay; d <= r.band.max_degree; ++d, ++col)
      reg.phi.col(col) = w.segment(first - static_cast<Eigen::Index>(d), rows).transpose();
  }
  reg.y = (record.w_of(structure.target).segment(first, rows) - record.r_of(structure.target).segment(first, rows))
              .transpose();
  return reg;
}

Informativity informativity_of(const Regression& reg, double threshold) {
  const double n = static_cast<double>(std::max<Eigen::Index>(reg.phi.rows(), 1));
  const Eigen::MatrixXd gram = reg.phi.transpose() * reg.phi / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  Informativity out;
  out.min_eigenvalue = lo;
  out.condition_number = (lo > 0.0 && hi > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
  out.informative = out.condition_number < threshold;
  return out;
}

Informativity informativity_diagnostic(const SignalRecord& record, const DirectModelStructure& structure,
                                       double threshold) {
  return informativity_of(build_regressor(record, structure), threshold);
}

DirectEstimate estimate_direct(const Regression& reg, const DirectModelStructure& structure, double threshold) {
  const Informativity info = informativity_of(reg, threshold);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(reg.phi);

  DirectEstimate est;
  est.theta = cod.solve(reg.y);
  if (!est.theta.allFinite()) est.theta = Eigen::VectorXd::Zero(reg.phi.cols());
  est.gram_condition = info.condition_number;
  est.informative = info.informative && cod.rank() == reg.phi.cols();
  const Eigen::VectorXd residual = reg.y - reg.phi * est.theta;
  est.residual_variance = reg.y.size() > 0 ? residual.squaredNorm() / static_cast<double>(reg.y.size()) : 0.0;

  Eigen::Index col = 0;
  for (const auto& r : structure.regressors) {
    std::vector<double> taps(r.band.max_degree + 1, 0.0);
    for (std::size_t d = r.band.delay; d <= r.band.max_degree; ++d) taps[d] = est.theta(col++);
    est.edges.emplace_back(r.from, RationalTF::fir(std::move(taps)));
  }
  return est;
}

DirectEstimate estimate_direct(const SignalRecord& record, const DirectModelStructure& structure, double threshold) {
  return estimate_direct(build_regressor(record, structure), structure, threshold);
}

std::vector<double> DirectEstimate::coefficients(const DirectModelStructure& structure, NodeId from) const {
  Eigen::Index col = 0;
  for (const auto& r : structure.regressors) {
    if (r.from == from) {
      std::vector<double> out(r.band.size());
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = theta(col + static_cast<Eigen::Index>(k));
      return out;
    }
    col += static_cast<Eigen::Index>(r.band.size());
  }
  throw std::out_of_range("node " + std::to_string(from.value) + " is not a regressor");
}

}  // namespace netid
