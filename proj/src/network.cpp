#include "netid/network.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "netid/errors.hpp"

namespace netid {

NodeSet make_node_set(std::vector<int> nodes) {
  std::ranges::sort(nodes);
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  NodeSet out;
  out.reserve(nodes.size());
  for (int n : nodes) out.push_back(NodeId{n});
  return out;
}

bool contains(const NodeSet& set, NodeId node) { return std::ranges::binary_search(set, node); }

NodeSet with_node(NodeSet set, NodeId node) {
  auto it = std::ranges::lower_bound(set, node);
  if (it == set.end() || *it != node) set.insert(it, node);
  return set;
}

NetworkModel::NetworkModel(std::size_t nodes, EdgeMap edges) : nodes_(nodes), edges_(std::move(edges)) {
  if (nodes_ == 0) throw ModelError("network must have at least one node");
  const auto n = static_cast<Eigen::Index>(nodes_);
  d0_ = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [e, tf] : edges_) {
    check_node(e.to);
    check_node(e.from);
    if (e.to == e.from)
      throw ModelError("diagonal entry G_{" + std::to_string(e.to.value) + "," + std::to_string(e.to.value) +
                       "} is not allowed");
    if (tf.is_zero())
      throw ModelError("edge G_{" + std::to_string(e.to.value) + "," + std::to_string(e.from.value) +
                       "} is identically zero");
    d0_(static_cast<Eigen::Index>(e.to.index()), static_cast<Eigen::Index>(e.from.index())) = tf.feedthrough();
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - d0_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible() || lu.rcond() < 1e-12)
    throw ModelError("I - D0 is singular: zero-delay loops make the network ill-posed");
}

void NetworkModel::check_node(NodeId n) const {
  if (n.value < 1 || static_cast<std::size_t>(n.value) > nodes_)
    throw ModelError("node index " + std::to_string(n.value) + " outside 1.." + std::to_string(nodes_));
}

const RationalTF& NetworkModel::edge(Edge e) const {
  auto it = edges_.find(e);
  if (it == edges_.end())
    throw std::out_of_range("no edge G_{" + std::to_string(e.to.value) + "," + std::to_string(e.from.value) + "}");
  return it->second;
}

NodeSet NetworkModel::in_neighbors(NodeId j) const {
  check_node(j);
  NodeSet out;
  for (const auto& [e, tf] : edges_)
    if (e.to == j) out.push_back(e.from);
  return out;  // map order sorts by (to, from)
}

NodeSet NetworkModel::out_neighbors(NodeId i) const {
  check_node(i);
  NodeSet out;
  for (const auto& [e, tf] : edges_)
    if (e.from == i) out.push_back(e.to);
  std::ranges::sort(out);
  return out;
}

bool NetworkModel::has_delay_in_every_loop() const {
  // Kahn's algorithm on the zero-delay subgraph: nilpotent iff acyclic.
  const std::size_t n = nodes_;
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& [e, tf] : edges_)
    if (tf.feedthrough() != 0.0) ++indeg[e.to.index()];
  std::vector<std::size_t> ready;
  for (std::size_t k = 0; k < n; ++k)
    if (indeg[k] == 0) ready.push_back(k);
  std::size_t removed = 0;
  while (!ready.empty()) {
    const std::size_t k = ready.back();
    ready.pop_back();
    ++removed;
    for (const auto& [e, tf] : edges_)
      if (tf.feedthrough() != 0.0 && e.from.index() == k && --indeg[e.to.index()] == 0) ready.push_back(e.to.index());
  }
  return removed == n;
}

Eigen::MatrixXcd NetworkModel::response(double omega) const {
  const auto n = static_cast<Eigen::Index>(nodes_);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [e, tf] : edges_)
    g(static_cast<Eigen::Index>(e.to.index()), static_cast<Eigen::Index>(e.from.index())) = tf_eval(tf, omega);
  return g;
}

NetworkModel NetworkModel::with_edge(Edge e, RationalTF tf) const {
  EdgeMap copy = edges_;
  copy.insert_or_assign(e, std::move(tf));
  return NetworkModel(nodes_, std::move(copy));
}

NetworkModel NetworkModel::without_edge(Edge e) const {
  EdgeMap copy = edges_;
  copy.erase(e);
  return NetworkModel(nodes_, std::move(copy));
}

}  // namespace netid
