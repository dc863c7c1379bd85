#include "hymn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "hymn/error.hpp"
#include "hymn/rng.hpp"

namespace hymn {

Graph::Graph(std::string id, int num_nodes, std::vector<Edge> edges, RowMatrix node_feat,
             std::optional<std::vector<double>> target)
    : id_(std::move(id)), n_(num_nodes), node_feat_(std::move(node_feat)), target_(std::move(target)) {
  if (n_ < 1) throw Error("graph '" + id_ + "': num_nodes must be at least 1");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) {
      throw Error("graph '" + id_ + "': edge endpoint out of range (" + std::to_string(u) + ", " +
                  std::to_string(v) + ") for num_nodes " + std::to_string(n_));
    }
    if (u == v) throw Error("graph '" + id_ + "': self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  if (node_feat_.size() == 0) {
    node_feat_.resize(n_, 0);
  } else if (node_feat_.rows() != n_) {
    throw Error("graph '" + id_ + "': node_feat has " + std::to_string(node_feat_.rows()) +
                " rows, expected " + std::to_string(n_));
  }
  if (!node_feat_.allFinite()) throw Error("graph '" + id_ + "': non-finite node feature");

  offsets_.assign(n_ + 1, 0);
  for (const auto& [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adj_.resize(2 * edges_.size());
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adj_[cursor[u]++] = v;
    adj_[cursor[v]++] = u;
  }
  for (int v = 0; v < n_; ++v) std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1]);
}

std::vector<int> Graph::degrees() const {
  std::vector<int> out(n_);
  for (int v = 0; v < n_; ++v) out[v] = degree(v);
  return out;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& [u, v] : edges_) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Graph Graph::with_id(std::string id) const {
  Graph g = *this;
  g.id_ = std::move(id);
  return g;
}

Graph Graph::with_target(std::vector<double> target) const {
  Graph g = *this;
  g.target_ = std::move(target);
  return g;
}

int Graph::num_components() const {
  std::vector<int> comp(n_, -1);
  int count = 0;
  std::vector<NodeId> stack;
  for (int s = 0; s < n_; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : neighbors(v)) {
        if (comp[u] < 0) {
          comp[u] = count;
          stack.push_back(u);
        }
      }
    }
    ++count;
  }
  return count;
}

Graph relabel(const Graph& g, std::span<const NodeId> perm) {
  const int n = g.num_nodes();
  if (static_cast<int>(perm.size()) != n) throw Error("relabel: permutation size mismatch");
  std::vector<char> seen(n, 0);
  for (NodeId p : perm) {
    if (p < 0 || p >= n || seen[p]) throw Error("relabel: not a permutation");
    seen[p] = 1;
  }
  std::vector<Edge> edges;
  edges.reserve(g.edges().size());
  for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  RowMatrix feat(n, g.feat_dim());
  for (int v = 0; v < n; ++v) feat.row(perm[v]) = g.node_feat().row(v);
  return Graph(g.id(), n, std::move(edges), std::move(feat), g.target());
}

DatasetSplit split_dataset(std::vector<Graph> graphs, std::size_t n_train, std::size_t n_val,
                           std::size_t n_test, std::uint64_t seed) {
  if (n_train + n_val + n_test != graphs.size()) {
    throw Error("split_dataset: split sizes do not sum to the dataset size");
  }
  std::set<std::string> ids;
  for (const auto& g : graphs) {
    if (!ids.insert(g.id()).second) throw Error("split_dataset: duplicate graph id '" + g.id() + "'");
  }
  Rng rng(seed);
  rng.shuffle(graphs);
  DatasetSplit split;
  split.seed = seed;
  auto it = std::make_move_iterator(graphs.begin());
  split.train.assign(it, it + n_train);
  split.val.assign(it + n_train, it + n_train + n_val);
  split.test.assign(it + n_train + n_val, std::make_move_iterator(graphs.end()));
  return split;
}

}  // namespace hymn
