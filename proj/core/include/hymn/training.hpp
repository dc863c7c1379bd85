#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hymn/analysis.hpp"
#include "hymn/graph.hpp"
#include "hymn/nn.hpp"
#include "hymn/sampling.hpp"

namespace hymn {

enum class Loss { mae, mse };

std::string to_string(Loss loss);
Loss parse_loss(std::string_view s);

struct TrainConfig {
  int batch_size = 128;
  int epochs = 50;
  nn::AdamConfig adam;
  Loss loss = Loss::mae;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Standardize the initial activations on (up to) the first 128 training graphs.
  bool calibrate = true;

  void validate() const;
};

/// Optional CSE augmentation of the node inputs.
struct EncodingOptions {
  bool enabled = false;
  int order = kDefaultScOrder;
};

struct TrainReport {
  std::vector<double> train_loss;  // per epoch, normalized units
  std::vector<double> val_mae;     // per epoch, normalized units
  std::vector<double> test_mae;    // per epoch, normalized units
  int best_epoch = 0;              // 0-based epoch with the lowest val MAE
  double best_val_mae = 0.0;
  double test_mae_at_best = 0.0;
  double target_mean = 0.0;        // training-split statistics used for z-scores
  double target_std = 1.0;
  nn::ModelConfig model;
  nn::ModelParams best_params;     // parameters after the best epoch
  std::string policy;
  int T = 0;

  std::string to_json() const;
};

/// Synthetic counting benchmark: random d-regular graphs on `nodes` vertices
/// with `nodes` edges deleted, each labelled with its substructure count.
struct CountingDataConfig {
  int num_graphs = 1000;
  int nodes = 60;
  int degree = 5;
  Substructure kind = Substructure::triangle;
  std::size_t n_train = 800;
  std::size_t n_val = 100;
  std::size_t n_test = 100;
  std::uint64_t seed = 0;
};

/// Graph i is drawn with derive_seed(seed, i); the split is shuffled with `seed`.
DatasetSplit counting_dataset(const CountingDataConfig& cfg);

/// Replaces every target with the count of `kind`.
std::vector<Graph> with_count_targets(std::vector<Graph> graphs, Substructure kind);

/// Trains the marking-aware GIN to regress the first target entry of every
/// graph. Bags and encodings are built once; targets are z-normalized with
/// training-split statistics; every random choice derives from tcfg.seed.
/// cfg.input_dim is derived from the data. The result is independent of
/// tcfg.threads.
TrainReport train_counting(const DatasetSplit& data, const Policy& policy, int T, nn::ModelConfig cfg,
                           const TrainConfig& tcfg, const EncodingOptions& encoding = {});

}  // namespace hymn
