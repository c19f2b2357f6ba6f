#include "netid/simulation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "netid/errors.hpp"
#include "netid/rng.hpp"

namespace netid {

std::vector<double> ExcitationSpec::noise_on(std::size_t node_count, const NodeSet& nodes, double variance) {
  std::vector<double> out(node_count, 0.0);
  for (NodeId n : nodes) {
    if (n.value < 1 || n.index() >= node_count) throw std::invalid_argument("noise node out of range");
    out[n.index()] = variance;
  }
  return out;
}

void ExcitationSpec::validate(std::size_t node_count) const {
  for (NodeId n : excited_nodes)
    if (n.value < 1 || n.index() >= node_count)
      throw std::invalid_argument("excited node " + std::to_string(n.value) + " outside 1.." +
                                  std::to_string(node_count));
  if (!(r_variance >= 0.0)) throw std::invalid_argument("r_variance must be >= 0");
  if (!v_variance.empty() && v_variance.size() != node_count)
    throw std::invalid_argument("v_variance must have one entry per node");
  for (double s : v_variance)
    if (!(s >= 0.0)) throw std::invalid_argument("v_variance entries must be >= 0");
}

namespace {

// One edge y = (b(q^-1) / a(q^-1)) w_from, with its own output history.
struct EdgeFilter {
  Eigen::Index to, from;
  std::vector<double> b, a;
  std::vector<double> past_y;  // past_y[m-1] = y(t - m)
};

}  // namespace

Eigen::MatrixXd simulate_response(const NetworkModel& model, const Eigen::MatrixXd& input) {
  const auto nodes = static_cast<Eigen::Index>(model.node_count());
  if (input.rows() != nodes) throw std::invalid_argument("simulate_response: input must have one row per node");
  const Eigen::Index n = input.cols();

  std::vector<EdgeFilter> filters;
  filters.reserve(model.edges().size());
  for (const auto& [e, tf] : model.edges()) {
    const auto b = tf.num().coeffs();
    const auto a = tf.den().coeffs();
    filters.push_back({static_cast<Eigen::Index>(e.to.index()), static_cast<Eigen::Index>(e.from.index()),
                       {b.begin(), b.end()}, {a.begin(), a.end()}, std::vector<double>(a.size() - 1, 0.0)});
  }

  const Eigen::MatrixXd solve =
      (Eigen::MatrixXd::Identity(nodes, nodes) - model.feedthrough()).partialPivLu().inverse();

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nodes, n);
  Eigen::VectorXd rhs(nodes);
  std::vector<double> strictly_past(filters.size());

  for (Eigen::Index t = 0; t < n; ++t) {
    rhs = input.col(t);
    for (std::size_t f = 0; f < filters.size(); ++f) {
      const auto& flt = filters[f];
      double s = 0.0;
      for (std::size_t k = 1; k < flt.b.size() && static_cast<Eigen::Index>(k) <= t; ++k)
        s += flt.b[k] * w(flt.from, t - static_cast<Eigen::Index>(k));
      for (std::size_t m = 1; m < flt.a.size(); ++m) s -= flt.a[m] * flt.past_y[m - 1];
      strictly_past[f] = s;
      rhs(flt.to) += s;
    }
    w.col(t).noalias() = solve * rhs;
    if (!w.col(t).allFinite())
      throw SimulationDiverged("simulation diverged: non-finite node signal at sample " + std::to_string(t),
                               static_cast<std::size_t>(t));
    for (std::size_t f = 0; f < filters.size(); ++f) {
      auto& flt = filters[f];
      if (flt.past_y.empty()) continue;
      const double y = strictly_past[f] + flt.b[0] * w(flt.from, t);
      for (std::size_t m = flt.past_y.size() - 1; m > 0; --m) flt.past_y[m] = flt.past_y[m - 1];
      flt.past_y[0] = y;
    }
  }
  return w;
}

SignalRecord simulate(const NetworkModel& model, const ExcitationSpec& spec) {
  const std::size_t nodes = model.node_count();
  spec.validate(nodes);
  const auto n = static_cast<Eigen::Index>(spec.samples);
  const auto rows = static_cast<Eigen::Index>(nodes);

  SignalRecord rec;
  rec.seed = spec.seed;
  rec.r = Eigen::MatrixXd::Zero(rows, n);
  rec.v = Eigen::MatrixXd::Zero(rows, n);

  const double r_sd = std::sqrt(spec.r_variance);
  for (NodeId k : spec.excited_nodes) {
    GaussianSource src(spec.seed, NoiseStream::excitation, static_cast<std::uint32_t>(k.value));
    for (Eigen::Index t = 0; t < n; ++t) rec.r(static_cast<Eigen::Index>(k.index()), t) = r_sd * src.next();
  }
  for (std::size_t k = 0; k < spec.v_variance.size(); ++k) {
    if (spec.v_variance[k] == 0.0) continue;
    const double sd = std::sqrt(spec.v_variance[k]);
    GaussianSource src(spec.seed, NoiseStream::disturbance, static_cast<std::uint32_t>(k + 1));
    for (Eigen::Index t = 0; t < n; ++t) rec.v(static_cast<Eigen::Index>(k), t) = sd * src.next();
  }

  rec.w = simulate_response(model, rec.r + rec.v);
  return rec;
}

}  // namespace netid
