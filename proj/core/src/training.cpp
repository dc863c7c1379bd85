#include "hymn/training.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "hymn/error.hpp"
#include "hymn/generators.hpp"
#include "hymn/parallel.hpp"
#include "hymn/rng.hpp"

namespace hymn {

namespace {

// Minibatches are processed in fixed-size chunks; gradients are summed in
// chunk order, so the result is the same for any thread count.
constexpr std::size_t kChunkGraphs = 16;
// Training graphs (in stored order) the initial calibration looks at.
constexpr std::size_t kCalibrationGraphs = 128;

struct Prepared {
  std::vector<nn::PreparedGraph> graphs;
  std::vector<double> targets;  // normalized
};

double first_target(const Graph& g) {
  if (!g.target() || g.target()->empty()) throw Error("graph '" + g.id() + "' has no target");
  return g.target()->front();
}

Prepared prepare_split(const std::vector<Graph>& graphs, const Policy& policy, int T, const nn::ModelConfig& cfg,
                       const EncodingOptions& encoding, double mean, double stddev, std::uint64_t stream) {
  Prepared out;
  Policy p = policy;
  if (p.source == Policy::Source::random) p.seed = derive_seed(policy.seed, stream);
  const auto bags = build_bags(graphs, p, T, true);
  for (const auto& bag : bags) {
    std::optional<CseMatrix> enc;
    if (encoding.enabled) enc = cse(bag.graph, encoding.order);
    out.graphs.push_back(nn::prepare(bag, enc ? &*enc : nullptr, cfg));
    out.targets.push_back((first_target(bag.graph) - mean) / stddev);
  }
  return out;
}

std::vector<std::vector<const nn::PreparedGraph*>> chunks_of(const Prepared& data, std::span<const std::size_t> order) {
  std::vector<std::vector<const nn::PreparedGraph*>> chunks;
  for (std::size_t at = 0; at < order.size(); at += kChunkGraphs) {
    std::vector<const nn::PreparedGraph*> chunk;
    for (std::size_t i = at; i < std::min(order.size(), at + kChunkGraphs); ++i) chunk.push_back(&data.graphs[order[i]]);
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

std::vector<double> predict(const Prepared& data, const nn::ModelParams& params, const nn::ModelConfig& cfg,
                            int threads) {
  std::vector<std::size_t> order(data.graphs.size());
  std::iota(order.begin(), order.end(), 0);
  const auto chunks = chunks_of(data, order);
  std::vector<std::vector<double>> outputs(chunks.size());
  parallel_for(chunks.size(), threads, [&](std::size_t c) {
    const auto result = nn::forward(nn::pack(chunks[c]), params, cfg);
    outputs[c].assign(result.outputs.col(0).data(), result.outputs.col(0).data() + result.outputs.rows());
  });
  std::vector<double> flat;
  for (const auto& o : outputs) flat.insert(flat.end(), o.begin(), o.end());
  return flat;
}

double mae(const std::vector<double>& pred, const std::vector<double>& target) {
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - target[i]);
  return s / static_cast<double>(pred.size());
}

}  // namespace

std::string to_string(Loss loss) { return loss == Loss::mae ? "mae" : "mse"; }

Loss parse_loss(std::string_view s) {
  if (s == "mae" || s == "l1") return Loss::mae;
  if (s == "mse" || s == "l2") return Loss::mse;
  throw Error("unknown loss '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw Error("TrainConfig: batch size must be >= 1");
  if (epochs < 1) throw Error("TrainConfig: epochs must be >= 1");
  if (!(adam.lr > 0.0)) throw Error("TrainConfig: learning rate must be positive");
}

std::vector<Graph> with_count_targets(std::vector<Graph> graphs, Substructure kind) {
  for (auto& g : graphs) g = g.with_target(std::vector<double>{static_cast<double>(count_substructure(g, kind))});
  return graphs;
}

DatasetSplit counting_dataset(const CountingDataConfig& cfg) {
  if (cfg.num_graphs < 1) throw Error("counting_dataset: need at least one graph");
  if (cfg.n_train + cfg.n_val + cfg.n_test != static_cast<std::size_t>(cfg.num_graphs)) {
    throw Error("counting_dataset: split sizes must add up to num_graphs");
  }
  std::vector<Graph> graphs;
  graphs.reserve(static_cast<std::size_t>(cfg.num_graphs));
  for (int i = 0; i < cfg.num_graphs; ++i) {
    graphs.push_back(gen_rg_deleted(cfg.nodes, cfg.degree, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)))
                         .with_id("count" + std::to_string(i)));
  }
  return split_dataset(with_count_targets(std::move(graphs), cfg.kind), cfg.n_train, cfg.n_val, cfg.n_test, cfg.seed);
}

TrainReport train_counting(const DatasetSplit& data, const Policy& policy, int T, nn::ModelConfig cfg,
                           const TrainConfig& tcfg, const EncodingOptions& encoding) {
  tcfg.validate();
  if (data.train.empty() || data.val.empty() || data.test.empty()) throw Error("train_counting: empty split");
  const Graph& probe = data.train.front();
  cfg.input_dim = nn::input_dim_for(probe.feat_dim(), encoding.enabled ? nn::cse_columns_used(encoding.order, cfg) : 0, cfg);
  cfg.output_dim = 1;
  cfg.validate();

  double mean = 0.0;
  for (const auto& g : data.train) mean += first_target(g);
  mean /= static_cast<double>(data.train.size());
  double var = 0.0;
  for (const auto& g : data.train) var += (first_target(g) - mean) * (first_target(g) - mean);
  double stddev = std::sqrt(var / static_cast<double>(data.train.size()));
  if (!(stddev > 0.0)) stddev = 1.0;

  const Prepared train = prepare_split(data.train, policy, T, cfg, encoding, mean, stddev, 0);
  const Prepared val = prepare_split(data.val, policy, T, cfg, encoding, mean, stddev, 1);
  const Prepared test = prepare_split(data.test, policy, T, cfg, encoding, mean, stddev, 2);

  nn::ModelParams params = nn::ModelParams::init(cfg, derive_seed(tcfg.seed, 100));
  if (tcfg.calibrate) {
    std::vector<const nn::PreparedGraph*> probe_batch;
    for (std::size_t i = 0; i < std::min(train.graphs.size(), kCalibrationGraphs); ++i) {
      probe_batch.push_back(&train.graphs[i]);
    }
    nn::calibrate_scale(params, nn::pack(probe_batch), cfg);
  }
  nn::AdamState adam = nn::AdamState::zeros_like(params);

  TrainReport report;
  report.model = cfg;
  report.policy = policy.name();
  report.T = T;
  report.target_mean = mean;
  report.target_std = stddev;
  report.best_val_mae = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> order(train.graphs.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
    Rng rng(derive_seed(tcfg.seed, 1000 + static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(tcfg.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(tcfg.batch_size));
      const auto batch_ids = std::span<const std::size_t>(order).subspan(start, stop - start);
      const auto chunks = chunks_of(train, batch_ids);
      const double inv_b = 1.0 / static_cast<double>(batch_ids.size());
      std::vector<nn::ModelParams> chunk_grads(chunks.size());
      std::vector<double> chunk_loss(chunks.size(), 0.0);
      parallel_for(chunks.size(), tcfg.threads, [&](std::size_t c) {
        const auto fwd = nn::forward(nn::pack(chunks[c]), params, cfg);
        RowMatrix upstream(fwd.outputs.rows(), 1);
        for (Eigen::Index i = 0; i < fwd.outputs.rows(); ++i) {
          const double target = train.targets[batch_ids[c * kChunkGraphs + static_cast<std::size_t>(i)]];
          const double diff = fwd.outputs(i, 0) - target;
          if (tcfg.loss == Loss::mae) {
            chunk_loss[c] += std::abs(diff);
            upstream(i, 0) = (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0)) * inv_b;
          } else {
            chunk_loss[c] += diff * diff;
            upstream(i, 0) = 2.0 * diff * inv_b;
          }
        }
        chunk_grads[c] = nn::backward(fwd.cache, upstream, params, cfg);
      });
      nn::ModelParams grads = std::move(chunk_grads.front());
      for (std::size_t c = 1; c < chunk_grads.size(); ++c) {
        auto dst = grads.views();
        const auto src = chunk_grads[c].views();
        for (std::size_t t = 0; t < dst.size(); ++t) dst[t] += src[t];
      }
      for (double l : chunk_loss) epoch_loss += l;
      nn::adam_step(params, grads, adam, tcfg.adam);
    }
    report.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    const double v = mae(predict(val, params, cfg, tcfg.threads), val.targets);
    const double t = mae(predict(test, params, cfg, tcfg.threads), test.targets);
    report.val_mae.push_back(v);
    report.test_mae.push_back(t);
    if (v < report.best_val_mae) {
      report.best_val_mae = v;
      report.best_epoch = epoch;
      report.test_mae_at_best = t;
      report.best_params = params;
    }
  }
  return report;
}

std::string TrainReport::to_json() const {
  nlohmann::ordered_json j;
  j["policy"] = policy;
  j["T"] = T;
  j["best_epoch"] = best_epoch;
  j["best_val_mae"] = best_val_mae;
  j["test_mae_at_best"] = test_mae_at_best;
  j["target_mean"] = target_mean;
  j["target_std"] = target_std;
  j["model"] = {{"layers", model.layers},         {"hidden", model.hidden},
                {"input_dim", model.input_dim},   {"readout_layers", model.readout_layers},
                {"mark_mode", nn::to_string(model.mark_mode)}, {"pooling", nn::to_string(model.pooling)},
                {"epsilon_learnable", model.epsilon_learnable}};
  j["train_loss"] = train_loss;
  j["val_mae"] = val_mae;
  j["test_mae"] = test_mae;
  return j.dump(2);
}

}  // namespace hymn
