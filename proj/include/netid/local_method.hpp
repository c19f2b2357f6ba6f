#pragma once

// Local identification of a single module G_{ji}.
//
// Step one identifies a small block of T = (I - G)^-1 in open loop. Step two
// solves the relevant slice of T (I - G) = I (or its dual (I - G) T = I) on a
// frequency grid, then fits the known FIR structure of G_{ji}.
//
//   outgoing route: excite {i} u N_i^+, measure N_i^+,
//                   T_{N_i^+,N_i^+} G_{N_i^+,i} = T_{N_i^+,i}
//   incoming route: excite N_j^-, measure {j} u N_j^-,
//                   G_{j,N_j^-} T_{N_j^-,N_j^-} = T_{j,N_j^-}
//
// Only the neighbour sets of i (outgoing) or j (incoming) are consulted.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netid/direct_method.hpp"
#include "netid/io_map.hpp"
#include "netid/network.hpp"
#include "netid/simulation.hpp"

namespace netid {

/// FIR length for T entries. Must cover the slowest network mode; in the
/// case study that is a pole near 0.955.
constexpr std::size_t kDefaultFirOrder = 200;
constexpr std::size_t kDefaultGridPoints = 100;

enum class LocalRoute { outgoing, incoming };

std::string to_string(LocalRoute route);

/// What is known about the neighbourhood of the target edge. Either side may
/// be unknown; at least one must be present.
struct LocalTopology {
  Edge target;
  std::optional<NodeSet> source_out;  // N_i^+
  std::optional<NodeSet> target_in;   // N_j^-

  static LocalTopology from_model(const NetworkModel& model, Edge target);
  friend bool operator==(const LocalTopology&, const LocalTopology&) = default;
};

struct MethodChoice {
  LocalRoute route = LocalRoute::outgoing;
  NodeSet neighbors;  // N_i^+ or N_j^-
  NodeSet excite;
  NodeSet measure;
  NodeSet t_rows;  // block of T to identify
  NodeSet t_cols;
  std::size_t entry_count = 0;

  friend bool operator==(const MethodChoice&, const MethodChoice&) = default;
};

/// Outgoing iff d_i^+ <= d_j^- when both sides are known; otherwise the only
/// available route. `force` overrides the choice. Throws std::invalid_argument
/// if the target edge is inconsistent with the given neighbour sets.
MethodChoice plan_experiment(const LocalTopology& topology, std::optional<LocalRoute> force = std::nullopt);

using EntryKey = std::pair<NodeId, NodeId>;  // (row, col) of T

struct TSubmatrixEstimate {
  NodeSet rows;
  NodeSet cols;
  std::size_t fir_order = 0;
  std::map<EntryKey, RationalTF> entries;
  /// 1 - |w_k - w_k_hat| / |w_k - mean(w_k)| of the joint regression for row k,
  /// shared by every entry of that row.
  std::map<EntryKey, double> fit_scores;
  FreqResponseMatrix samples;

  double min_fit() const;
};

/// Regresses each measured w_k jointly on lags 0..fir_order of every r_l,
/// l in cols, assuming zero initial conditions. Throws IdentificationError if
/// a column node carries no excitation or the inputs are collinear.
TSubmatrixEstimate estimate_T_entries(const SignalRecord& record, const NodeSet& rows, const NodeSet& cols,
                                      std::size_t fir_order, const FreqGrid& grid);

struct SolveOptions {
  double max_condition = 1e10;
  double max_dropped_fraction = 0.2;
};

/// Sampled frequency responses of the edges recovered by one solve. Dropped
/// grid points carry NaN.
struct SolvedEdges {
  FreqGrid grid;
  std::map<Edge, std::vector<Complex>> responses;
  std::vector<std::size_t> dropped;
};

/// Solves T_{N,N}(w) x(w) = T_{N,i}(w) at each grid point for the
/// out-going edges G_{N,i}. Throws IdentificationError if too many points are
/// ill-conditioned.
SolvedEdges solve_outgoing(const FreqResponseMatrix& t, NodeId i, const NodeSet& out_neighbors,
                           const SolveOptions& opts = {});

/// Solves x(w) T_{N,N}(w) = T_{j,N}(w) for the in-coming edges G_{j,N}.
SolvedEdges solve_incoming(const FreqResponseMatrix& t, NodeId j, const NodeSet& in_neighbors,
                           const SolveOptions& opts = {});

/// Max |a - b| over grid points valid in both; NaN when none overlap.
double max_disagreement(std::span<const Complex> a, std::span<const Complex> b);

struct ModuleEstimate {
  Edge target;
  FreqGrid grid;
  std::vector<Complex> freq_samples;
  FirBand band;
  std::vector<double> theta;  // taps over band, lowest delay first
  double residual = 0.0;      // least-squares cost

  RationalTF model() const;
};

/// min_theta sum_w |sum_d theta_d e^{-j d w} - sample(w)|^2, stacking real and
/// imaginary parts. NaN samples are skipped. Throws IdentificationError when
/// under-determined.
ModuleEstimate fit_parametric(Edge target, const FreqGrid& grid, std::span<const Complex> samples, FirBand band);

}  // namespace netid
