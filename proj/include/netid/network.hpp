#pragma once

// Network model w = G(q) w + r + v with a hollow, sparse matrix G of
// transfer functions. Node numbers are 1-based everywhere in the public API.

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <vector>

#include "netid/tf_core.hpp"

namespace netid {

struct NodeId {
  int value = 0;

  constexpr std::size_t index() const noexcept { return static_cast<std::size_t>(value - 1); }
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// The edge carrying G_{to,from}: signal flows from node `from` into node `to`.
struct Edge {
  NodeId to;
  NodeId from;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free list of nodes.
using NodeSet = std::vector<NodeId>;

NodeSet make_node_set(std::vector<int> nodes);
inline NodeSet make_node_set(std::initializer_list<int> nodes) { return make_node_set(std::vector<int>(nodes)); }
bool contains(const NodeSet& set, NodeId node);
/// Sorted union of `set` and `node`.
NodeSet with_node(NodeSet set, NodeId node);

using EdgeMap = std::map<Edge, RationalTF>;

class NetworkModel {
 public:
  /// Validates node indices, rejects diagonal entries and zero edges, and
  /// requires I - D0 to be nonsingular (D0 = matrix of zero-delay taps).
  NetworkModel(std::size_t nodes, EdgeMap edges);

  std::size_t node_count() const noexcept { return nodes_; }
  const EdgeMap& edges() const noexcept { return edges_; }
  bool has_edge(Edge e) const { return edges_.contains(e); }
  /// Throws std::out_of_range for a missing edge.
  const RationalTF& edge(Edge e) const;

  NodeSet in_neighbors(NodeId j) const;
  NodeSet out_neighbors(NodeId i) const;
  std::size_t in_degree(NodeId j) const { return in_neighbors(j).size(); }
  std::size_t out_degree(NodeId i) const { return out_neighbors(i).size(); }

  /// D0: the zero-delay coefficients of every edge.
  const Eigen::MatrixXd& feedthrough() const noexcept { return d0_; }
  /// True iff D0 is nilpotent, i.e. every directed loop carries at least one delay.
  bool has_delay_in_every_loop() const;

  /// G(e^{j omega}).
  Eigen::MatrixXcd response(double omega) const;

  NetworkModel with_edge(Edge e, RationalTF tf) const;
  NetworkModel without_edge(Edge e) const;

 private:
  void check_node(NodeId n) const;

  std::size_t nodes_;
  EdgeMap edges_;
  Eigen::MatrixXd d0_;
};

/// The 20-node network of the case study with its target module
/// G_{3,4} = -0.3 q^-1 + 0.8 q^-2.
NetworkModel build_case_study();

}  // namespace netid
