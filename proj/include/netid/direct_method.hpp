#pragma once

// Direct prediction-error identification of one row of G.
//
// Node j obeys w_j = sum_{k in N_j^-} G_jk w_k + r_j + v_j. With FIR models for
// every G_jk and the noise model fixed to 1, the one-step predictor is linear
// in the parameters and minimising the summed squared prediction error is an
// ordinary least-squares problem on y = w_j - r_j.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "netid/network.hpp"
#include "netid/simulation.hpp"

namespace netid {

/// Taps q^-delay .. q^-max_degree of an FIR model.
struct FirBand {
  std::size_t delay = 0;
  std::size_t max_degree = 0;

  std::size_t size() const noexcept { return max_degree - delay + 1; }
  friend bool operator==(const FirBand&, const FirBand&) = default;
};

/// The band spanned by the nonzero taps of an FIR edge.
/// Throws std::invalid_argument for rational or zero edges.
FirBand band_of(const RationalTF& fir_edge);

struct RegressorEdge {
  NodeId from;
  FirBand band;
};

struct DirectModelStructure {
  NodeId target;
  std::vector<RegressorEdge> regressors;

  std::size_t parameter_count() const noexcept;
  std::size_t max_delay() const noexcept;
  void validate() const;
};

/// Regressors for every in-neighbour of `target`, with the bands of the true
/// edges (full-order FIR models).
DirectModelStructure known_structure(const NetworkModel& model, NodeId target);

struct Regression {
  Eigen::MatrixXd phi;  // rows t = max_delay .. N-1; columns edge-major, ascending delay
  Eigen::VectorXd y;    // w_j(t) - r_j(t)
};

/// Throws IdentificationError if the record is too short.
Regression build_regressor(const SignalRecord& record, const DirectModelStructure& structure);

struct Informativity {
  double condition_number = 0.0;  // of Phi^T Phi / N; +inf when singular
  double min_eigenvalue = 0.0;
  bool informative = false;
};

constexpr double kDefaultInformativityThreshold = 1e6;

Informativity informativity_of(const Regression& reg, double threshold = kDefaultInformativityThreshold);
Informativity informativity_diagnostic(const SignalRecord& record, const DirectModelStructure& structure,
                                       double threshold = kDefaultInformativityThreshold);

struct DirectEstimate {
  Eigen::VectorXd theta;
  std::vector<std::pair<NodeId, RationalTF>> edges;  // in regressor order
  double gram_condition = 0.0;
  double residual_variance = 0.0;
  bool informative = false;

  /// Estimated taps of G_{j,from} over its band, lowest delay first.
  std::vector<double> coefficients(const DirectModelStructure& structure, NodeId from) const;
};

/// Least-squares estimate. A rank-deficient regression yields the
/// minimum-norm solution with informative = false instead of an error.
DirectEstimate estimate_direct(const SignalRecord& record, const DirectModelStructure& structure,
                               double threshold = kDefaultInformativityThreshold);
DirectEstimate estimate_direct(const Regression& reg, const DirectModelStructure& structure,
                               double threshold = kDefaultInformativityThreshold);

}  // namespace netid
