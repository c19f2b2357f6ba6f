#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "netid/network.hpp"

namespace netid {

/// Which nodes receive external excitation, and how much noise enters where.
struct ExcitationSpec {
  NodeSet excited_nodes;
  /// Variance of each r_k for k in excited_nodes.
  double r_variance = 1.0;
  /// Per-node variance of v_k, indexed by node - 1. Empty means noise-free.
  std::vector<double> v_variance;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  /// Same variance on every node of an L-node network.
  static std::vector<double> uniform_noise(std::size_t nodes, double variance) {
    return std::vector<double>(nodes, variance);
  }
  /// `variance` on `nodes`, zero elsewhere.
  static std::vector<double> noise_on(std::size_t node_count, const NodeSet& nodes, double variance);

  /// Throws std::invalid_argument if inconsistent with an L-node network.
  void validate(std::size_t node_count) const;
};

/// Node outputs w, excitations r and disturbances v, each L x N (row = node).
struct SignalRecord {
  Eigen::MatrixXd w;
  Eigen::MatrixXd r;
  Eigen::MatrixXd v;
  std::uint64_t seed = 0;

  std::size_t node_count() const noexcept { return static_cast<std::size_t>(w.rows()); }
  std::size_t samples() const noexcept { return static_cast<std::size_t>(w.cols()); }
  auto w_of(NodeId k) const { return w.row(static_cast<Eigen::Index>(k.index())); }
  auto r_of(NodeId k) const { return r.row(static_cast<Eigen::Index>(k.index())); }
};

/// Response of the network, from zero initial state, to the L x N external
/// input u = r + v. Each edge runs its own difference equation; zero-delay
/// coupling is resolved per sample with the factored (I - D0).
/// Throws SimulationDiverged on the first non-finite sample.
Eigen::MatrixXd simulate_response(const NetworkModel& model, const Eigen::MatrixXd& input);

/// Draws white Gaussian r (excited nodes only) and v, then simulates.
/// Pure function of (model, spec): same seed, bit-identical record.
SignalRecord simulate(const NetworkModel& model, const ExcitationSpec& spec);

}  // namespace netid
