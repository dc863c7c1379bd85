#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hymn {

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;

/// Row-major dense matrix used for node-feature and activation tables.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Simple undirected graph with optional node features and targets.
///
/// Construction normalizes the edge list (each edge stored once with u < v,
/// sorted, duplicates removed) and rejects self-loops and out-of-range
/// endpoints. Instances are immutable afterwards.
class Graph {
 public:
  Graph(std::string id, int num_nodes, std::vector<Edge> edges, RowMatrix node_feat = {},
        std::optional<std::vector<double>> target = std::nullopt);

  const std::string& id() const { return id_; }
  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  /// Canonical edge list: u < v, lexicographically sorted.
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  int degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::vector<int> degrees() const;
  bool has_edge(NodeId u, NodeId v) const;

  /// n x d feature table; d may be 0.
  const RowMatrix& node_feat() const { return node_feat_; }
  int feat_dim() const { return static_cast<int>(node_feat_.cols()); }
  const std::optional<std::vector<double>>& target() const { return target_; }

  /// Dense symmetric 0/1 adjacency matrix.
  Eigen::MatrixXd adjacency() const;

  Graph with_id(std::string id) const;
  Graph with_target(std::vector<double> target) const;

  /// Number of connected components.
  int num_components() const;
  bool is_connected() const { return num_components() <= 1; }

 private:
  std::string id_;
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> offsets_;
  std::vector<NodeId> adj_;
  RowMatrix node_feat_;
  std::optional<std::vector<double>> target_;
};

/// Relabels nodes: node v of `g` becomes node perm[v] of the result.
Graph relabel(const Graph& g, std::span<const NodeId> perm);

/// Train/validation/test partition of a dataset.
struct DatasetSplit {
  std::vector<Graph> train;
  std::vector<Graph> val;
  std::vector<Graph> test;
  std::uint64_t seed = 0;
};

/// Shuffles `graphs` with `seed` and cuts it into consecutive train/val/test
/// blocks of the given sizes. Sizes must sum to the dataset size and graph ids
/// must be unique.
DatasetSplit split_dataset(std::vector<Graph> graphs, std::size_t n_train, std::size_t n_val,
                           std::size_t n_test, std::uint64_t seed);

}  // namespace hymn
