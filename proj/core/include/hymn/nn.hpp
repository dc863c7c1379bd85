#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hymn/centrality.hpp"
#include "hymn/graph.hpp"
#include "hymn/sampling.hpp"

namespace hymn::nn {

enum class MarkMode { per_layer_concat, input_only };
enum class Pooling { sum, mean };

struct ModelConfig {
  int layers = 6;
  int hidden = 32;
  /// Width of h^(0) excluding any per-layer mark channel; see input_dim_for().
  int input_dim = 1;
  int readout_layers = 2;
  bool epsilon_learnable = false;
  MarkMode mark_mode = MarkMode::per_layer_concat;
  bool cse_drop_first_two = false;
  int output_dim = 1;
  Pooling pooling = Pooling::sum;

  void validate() const;
};

/// Node input width: raw features (or a single constant channel when the
/// graph has none), the kept CSE columns, and the mark channel in
/// input_only mode.
int input_dim_for(int feat_dim, int cse_columns, const ModelConfig& cfg);

/// Number of CSE columns a model consumes from an order-K encoding.
int cse_columns_used(int K, const ModelConfig& cfg);

/// y = W x + b, with W stored out x in.
struct Affine {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// GIN update phi^(l) = second(relu(first(.))) and its epsilon.
struct LayerParams {
  Affine first;
  Affine second;
  double epsilon = 0.0;
};

struct ModelParams {
  std::vector<LayerParams> layers;
  std::vector<Affine> readout;
  std::uint64_t seed = 0;

  /// Glorot-uniform weights, zero biases, epsilon 0.
  static ModelParams init(const ModelConfig& cfg, std::uint64_t seed);
  static ModelParams zeros_like(const ModelParams& other);

  /// Every tensor as a flat contiguous view, in a fixed order (per layer:
  /// W1, b1, W2, b2, epsilon; then readout W, b pairs).
  std::vector<Eigen::Map<Eigen::VectorXd>> views();
  std::vector<Eigen::Map<const Eigen::VectorXd>> views() const;

  std::size_t num_scalars() const;
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  bool all_finite() const;
};

/// Shape check of params against cfg.
void check_shapes(const ModelParams& params, const ModelConfig& cfg);

/// One graph prepared for the model: topology plus h^(0) rows (without the
/// mark channel) and the marked nodes of its bag.
struct PreparedGraph {
  int num_nodes = 0;
  std::vector<int> offsets;
  std::vector<NodeId> neighbors;
  RowMatrix features;
  std::vector<NodeId> selected;
  bool include_original = true;

  int num_copies() const { return static_cast<int>(selected.size()) + (include_original ? 1 : 0); }
};

/// Builds h^(0) = [node features, CSE columns] for a bag. `encoding` may be
/// null (no CSE).
PreparedGraph prepare(const MarkedBag& bag, const CseMatrix* encoding, const ModelConfig& cfg);

/// Several bags packed into one block-diagonal problem. Copies of a graph are
/// stacked contiguously: the unmarked original first (when included), then
/// one copy per marked node in selection order.
struct PackedBatch {
  RowMatrix features;
  Eigen::VectorXd marks;
  std::vector<int> offsets;
  std::vector<NodeId> neighbors;
  std::vector<int> graph_rows;  // size num_graphs + 1
  std::vector<int> copies;      // per graph

  int num_graphs() const { return static_cast<int>(copies.size()); }
  int num_rows() const { return static_cast<int>(marks.size()); }
};

PackedBatch pack(std::span<const PreparedGraph* const> graphs);
PackedBatch pack(const PreparedGraph& graph);

/// Activations kept for the reverse pass.
struct ForwardCache {
  PackedBatch batch;
  std::vector<RowMatrix> layer_input;  // Z_l, mark channel included
  std::vector<RowMatrix> aggregated;   // (1 + eps) Z_l + A Z_l
  std::vector<RowMatrix> hidden_pre;   // first affine output, before relu
  RowMatrix last_hidden;               // h^(L)
  std::vector<RowMatrix> readout_input;
  std::vector<RowMatrix> readout_pre;
};

struct ForwardResult {
  RowMatrix outputs;  // num_graphs x output_dim
  ForwardCache cache;
};

/// Marking-aware GIN layer on a single graph. `marks` may be empty (no mark
/// channel); otherwise it is appended to every node representation.
RowMatrix gin_layer(const RowMatrix& h, const Graph& g, const Eigen::VectorXd& marks, const LayerParams& layer);

/// Runs the model on every graph of the batch. Throws NumericalError
/// "numerical blowup at layer l" on non-finite activations.
ForwardResult forward(PackedBatch batch, const ModelParams& params, const ModelConfig& cfg);

/// Single-bag convenience wrapper; returns the output vector of the bag.
Eigen::VectorXd forward(const MarkedBag& bag, const CseMatrix* encoding, const ModelParams& params,
                        const ModelConfig& cfg);

/// Pre-readout pooled representation per graph (num_graphs x hidden).
RowMatrix pooled_representation(const PackedBatch& batch, const ModelParams& params, const ModelConfig& cfg);

/// Reverse pass: gradient of sum(upstream .* outputs) with respect to every
/// parameter. Epsilon gradients are zero unless cfg.epsilon_learnable.
ModelParams backward(const ForwardCache& cache, const RowMatrix& upstream, const ModelParams& params,
                     const ModelConfig& cfg);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  ModelParams m;
  ModelParams v;
  long step = 0;

  static AdamState zeros_like(const ModelParams& params);
};

/// Bias-corrected Adam update of params in place.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, const AdamConfig& cfg);

/// Data-dependent initialization: each affine map of a freshly initialized
/// model is adjusted, in forward order, so that every output channel has zero
/// mean and unit variance over `batch` (batch normalization at initialization,
/// folded into the weights). Sum aggregation and sum readout otherwise inflate
/// activations with depth and bury the graph-to-graph signal under a shared
/// offset. The architecture is unchanged.
void calibrate_scale(ModelParams& params, const PackedBatch& batch, const ModelConfig& cfg);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

/// Central finite differences of L = 0.5 * ||outputs - targets||^2 against the
/// analytic gradient, over every parameter. Relative error uses
/// |a - n| / max(|a|, |n|, floor).
GradCheckResult grad_check(const PackedBatch& batch, const ModelParams& params, const ModelConfig& cfg,
                           const RowMatrix& targets, double step = 1e-5, double floor = 1e-6);

std::string to_string(MarkMode m);
std::string to_string(Pooling p);
MarkMode parse_mark_mode(std::string_view s);
Pooling parse_pooling(std::string_view s);

/// Versioned JSON checkpoint: config, seed and the flat parameter array.
std::string checkpoint_json(const ModelConfig& cfg, const ModelParams& params);
std::pair<ModelConfig, ModelParams> parse_checkpoint(const std::string& json_text);

}  // namespace hymn::nn
