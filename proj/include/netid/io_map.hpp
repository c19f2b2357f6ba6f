#pragma once

// Exact input-output map T(q) = (I - G(q))^-1 of a network model. These are
// the ground-truth oracles every estimator is checked against.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "netid/network.hpp"

namespace netid {

/// Samples of a transfer-matrix block on a frequency grid.
struct FreqResponseMatrix {
  NodeSet rows;
  NodeSet cols;
  FreqGrid grid;
  std::vector<Eigen::MatrixXcd> samples;  // one |rows| x |cols| matrix per grid point

  /// Entry (row, col) at grid index k. Throws std::out_of_range for unknown nodes.
  Complex at(NodeId row, NodeId col, std::size_t k) const;
  Eigen::Index row_pos(NodeId n) const;
  Eigen::Index col_pos(NodeId n) const;
  /// Sub-block restricted to the given rows and cols.
  FreqResponseMatrix block(const NodeSet& sub_rows, const NodeSet& sub_cols) const;
};

/// T restricted to rows x cols, on every grid point. Throws
/// SingularSystemError naming omega if I - G(e^{j omega}) is singular.
FreqResponseMatrix true_T(const NetworkModel& model, const NodeSet& rows, const NodeSet& cols, const FreqGrid& grid);

/// First n impulse-response samples of T_{out,in}.
///
/// Computed by cofactor expansion, T_{out,in} = C_{in,out} / det(I - G), in
/// the ring of power series truncated at q^-n: every edge is expanded by long
/// division, the determinants are accumulated over column subsets, and the
/// final quotient is again a long division. Networks of up to 31 nodes.
std::vector<double> true_T_impulse(const NetworkModel& model, NodeId out, NodeId in, std::size_t n);

struct StabilityOptions {
  std::size_t horizon = 2000;
  double decay_tolerance = 1e-8;
  std::size_t winding_points = 4096;
};

/// True iff every edge is stable, det(I - G(e^{j omega})) neither vanishes
/// nor winds around the origin on a dense grid, and impulses injected at
/// each node die out below the tolerance within the horizon.
bool is_internally_stable(const NetworkModel& model, const StabilityOptions& opts = {});

}  // namespace netid
