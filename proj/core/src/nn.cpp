#include "hymn/nn.hpp"

#include <cmath>

#include <json.hpp>

#include "hymn/error.hpp"
#include "hymn/rng.hpp"

namespace hymn::nn {

void ModelConfig::validate() const {
  if (layers < 1 || hidden < 1 || input_dim < 1 || readout_layers < 1 || output_dim < 1) {
    throw Error("ModelConfig: layers, hidden, input_dim, readout_layers and output_dim must be >= 1");
  }
  if (mark_mode == MarkMode::input_only && input_dim < 2) {
    throw Error("ModelConfig: input_only mode needs input_dim to include the mark channel");
  }
}

int cse_columns_used(int K, const ModelConfig& cfg) {
  const int cols = K + 1;
  return cfg.cse_drop_first_two ? std::max(0, cols - 2) : cols;
}

int input_dim_for(int feat_dim, int cse_columns, const ModelConfig& cfg) {
  return std::max(feat_dim, 1) + cse_columns + (cfg.mark_mode == MarkMode::input_only ? 1 : 0);
}

namespace {

int feature_columns(const ModelConfig& cfg) {
  return cfg.input_dim - (cfg.mark_mode == MarkMode::input_only ? 1 : 0);
}

int layer_in_dim(const ModelConfig& cfg, int l) {
  const int base = l == 0 ? feature_columns(cfg) : cfg.hidden;
  const bool mark = l == 0 || cfg.mark_mode == MarkMode::per_layer_concat;
  return base + (mark ? 1 : 0);
}

Affine glorot(int out, int in, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(in + out));
  Affine f{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
  for (int i = 0; i < out; ++i)
    for (int j = 0; j < in; ++j) f.weight(i, j) = rng.uniform(-a, a);
  return f;
}

template <typename Self, typename MapT>
auto collect_views(Self& p) {
  std::vector<MapT> out;
  auto add = [&](auto& m) { out.emplace_back(m.data(), m.size()); };
  for (auto& layer : p.layers) {
    add(layer.first.weight);
    add(layer.first.bias);
    add(layer.second.weight);
    add(layer.second.bias);
    out.emplace_back(&layer.epsilon, 1);
  }
  for (auto& f : p.readout) {
    add(f.weight);
    add(f.bias);
  }
  return out;
}

// out.row(v) = self_weight * z.row(v) + sum over neighbors of z.row(u).
void aggregate(const PackedBatch& b, const RowMatrix& z, double self_weight, RowMatrix& out) {
  const Eigen::Index d = z.cols();
  out.resize(z.rows(), d);
  const double* src = z.data();
  double* dst = out.data();
  for (int v = 0; v < b.num_rows(); ++v) {
    double* row = dst + v * d;
    const double* self = src + v * d;
    for (Eigen::Index c = 0; c < d; ++c) row[c] = self_weight * self[c];
    for (int e = b.offsets[v]; e < b.offsets[v + 1]; ++e) {
      const double* nb = src + static_cast<Eigen::Index>(b.neighbors[e]) * d;
      for (Eigen::Index c = 0; c < d; ++c) row[c] += nb[c];
    }
  }
}

RowMatrix with_mark(const RowMatrix& h, const Eigen::VectorXd& marks) {
  RowMatrix z(h.rows(), h.cols() + 1);
  z.leftCols(h.cols()) = h;
  z.col(h.cols()) = marks;
  return z;
}

void affine_rows(const RowMatrix& x, const Affine& f, RowMatrix& out) {
  out.noalias() = x * f.weight.transpose();
  out.rowwise() += f.bias.transpose();
}

template <typename M>
void check_finite(const M& m, int layer) {
  // A sum is finite only if every term is (barring overflow, which is a blowup too).
  if (!std::isfinite(m.sum())) throw NumericalError("numerical blowup at layer " + std::to_string(layer));
}

RowMatrix pool(const PackedBatch& b, const RowMatrix& h, Pooling pooling) {
  RowMatrix pooled = RowMatrix::Zero(b.num_graphs(), h.cols());
  for (int g = 0; g < b.num_graphs(); ++g) {
    for (int r = b.graph_rows[g]; r < b.graph_rows[g + 1]; ++r) pooled.row(g) += h.row(r);
    if (pooling == Pooling::mean) pooled.row(g) /= static_cast<double>(b.copies[g]);
  }
  return pooled;
}

// Message-passing stack; fills the layer part of the cache when given.
RowMatrix run_layers(const PackedBatch& b, const ModelParams& params, const ModelConfig& cfg, ForwardCache* cache) {
  const int H = cfg.hidden;
  RowMatrix z = with_mark(b.features, b.marks);
  RowMatrix s;
  RowMatrix u;
  for (int l = 0; l < cfg.layers; ++l) {
    const auto& layer = params.layers[l];
    aggregate(b, z, 1.0 + layer.epsilon, s);
    affine_rows(s, layer.first, u);
    const RowMatrix r = u.cwiseMax(0.0);
    // The next layer input is written in place, with the mark column after the hidden block.
    const bool mark_next = l + 1 < cfg.layers && cfg.mark_mode == MarkMode::per_layer_concat;
    RowMatrix next(b.num_rows(), H + (mark_next ? 1 : 0));
    next.leftCols(H).noalias() = r * layer.second.weight.transpose();
    next.leftCols(H).rowwise() += layer.second.bias.transpose();
    check_finite(next.leftCols(H), l + 1);
    if (mark_next) next.col(H) = b.marks;
    if (cache) {
      cache->layer_input.push_back(std::move(z));
      cache->aggregated.push_back(s);
      cache->hidden_pre.push_back(u);
    }
    z = std::move(next);
  }
  return z;
}

}  // namespace

ModelParams ModelParams::init(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  ModelParams p;
  p.seed = seed;
  for (int l = 0; l < cfg.layers; ++l) {
    LayerParams layer;
    layer.first = glorot(cfg.hidden, layer_in_dim(cfg, l), rng);
    layer.second = glorot(cfg.hidden, cfg.hidden, rng);
    p.layers.push_back(std::move(layer));
  }
  for (int r = 0; r < cfg.readout_layers; ++r) {
    const int out = r + 1 == cfg.readout_layers ? cfg.output_dim : cfg.hidden;
    p.readout.push_back(glorot(out, cfg.hidden, rng));
  }
  return p;
}

ModelParams ModelParams::zeros_like(const ModelParams& other) {
  ModelParams p = other;
  for (auto& view : p.views()) view.setZero();
  return p;
}

std::vector<Eigen::Map<Eigen::VectorXd>> ModelParams::views() {
  return collect_views<ModelParams, Eigen::Map<Eigen::VectorXd>>(*this);
}

std::vector<Eigen::Map<const Eigen::VectorXd>> ModelParams::views() const {
  return collect_views<const ModelParams, Eigen::Map<const Eigen::VectorXd>>(*this);
}

std::size_t ModelParams::num_scalars() const {
  std::size_t n = 0;
  for (const auto& v : views()) n += static_cast<std::size_t>(v.size());
  return n;
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(num_scalars());
  for (const auto& v : views()) flat.insert(flat.end(), v.data(), v.data() + v.size());
  return flat;
}

void ModelParams::assign(std::span<const double> flat) {
  if (flat.size() != num_scalars()) throw Error("ModelParams::assign: size mismatch");
  std::size_t at = 0;
  for (auto& v : views()) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = flat[at++];
  }
}

bool ModelParams::all_finite() const {
  for (const auto& v : views()) {
    if (!v.allFinite()) return false;
  }
  return true;
}

void check_shapes(const ModelParams& params, const ModelConfig& cfg) {
  cfg.validate();
  auto fail = [](const std::string& what) { throw Error("model parameters do not match config: " + what); };
  if (static_cast<int>(params.layers.size()) != cfg.layers) fail("layer count");
  if (static_cast<int>(params.readout.size()) != cfg.readout_layers) fail("readout layer count");
  for (int l = 0; l < cfg.layers; ++l) {
    const auto& layer = params.layers[l];
    if (layer.first.weight.rows() != cfg.hidden || layer.first.weight.cols() != layer_in_dim(cfg, l) ||
        layer.first.bias.size() != cfg.hidden || layer.second.weight.rows() != cfg.hidden ||
        layer.second.weight.cols() != cfg.hidden || layer.second.bias.size() != cfg.hidden) {
      fail("layer " + std::to_string(l + 1) + " shape");
    }
  }
  for (int r = 0; r < cfg.readout_layers; ++r) {
    const int out = r + 1 == cfg.readout_layers ? cfg.output_dim : cfg.hidden;
    const auto& f = params.readout[r];
    if (f.weight.rows() != out || f.weight.cols() != cfg.hidden || f.bias.size() != out) {
      fail("readout layer " + std::to_string(r + 1) + " shape");
    }
  }
}

PreparedGraph prepare(const MarkedBag& bag, const CseMatrix* encoding, const ModelConfig& cfg) {
  const Graph& g = bag.graph;
  const int n = g.num_nodes();
  const int base = std::max(g.feat_dim(), 1);
  int cse_cols = 0;
  if (encoding) {
    if (encoding->values.rows() != n) throw Error("prepare: CSE row count does not match the graph");
    cse_cols = cse_columns_used(encoding->order, cfg);
  }
  if (base + cse_cols != feature_columns(cfg)) {
    throw Error("prepare: graph '" + g.id() + "' yields " + std::to_string(base + cse_cols) +
                " input columns, model expects " + std::to_string(feature_columns(cfg)));
  }
  PreparedGraph p;
  p.num_nodes = n;
  p.features.resize(n, base + cse_cols);
  if (g.feat_dim() > 0) {
    p.features.leftCols(base) = g.node_feat();
  } else {
    p.features.col(0).setOnes();
  }
  if (cse_cols > 0) p.features.rightCols(cse_cols) = encoding->values.rightCols(cse_cols);
  p.offsets.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    const auto nb = g.neighbors(v);
    p.offsets[v + 1] = p.offsets[v] + static_cast<int>(nb.size());
    p.neighbors.insert(p.neighbors.end(), nb.begin(), nb.end());
  }
  p.selected = bag.selected;
  p.include_original = bag.include_original;
  return p;
}

PackedBatch pack(std::span<const PreparedGraph* const> graphs) {
  PackedBatch b;
  if (graphs.empty()) throw Error("pack: empty batch");
  const auto cols = graphs.front()->features.cols();
  int rows = 0;
  std::size_t edges = 0;
  for (const auto* g : graphs) {
    if (g->features.cols() != cols) throw Error("pack: inconsistent feature widths");
    if (g->num_copies() < 1) throw Error("pack: bag without any copy");
    rows += g->num_nodes * g->num_copies();
    edges += g->neighbors.size() * static_cast<std::size_t>(g->num_copies());
  }
  b.features.resize(rows, cols);
  b.marks = Eigen::VectorXd::Zero(rows);
  b.offsets.reserve(rows + 1);
  b.offsets.push_back(0);
  b.neighbors.reserve(edges);
  b.graph_rows.push_back(0);
  int at = 0;
  for (const auto* g : graphs) {
    const int copies = g->num_copies();
    for (int c = 0; c < copies; ++c) {
      b.features.middleRows(at, g->num_nodes) = g->features;
      const int marked = g->include_original ? c - 1 : c;
      if (marked >= 0) b.marks[at + g->selected[marked]] = 1.0;
      for (int v = 0; v < g->num_nodes; ++v) {
        for (int e = g->offsets[v]; e < g->offsets[v + 1]; ++e) b.neighbors.push_back(at + g->neighbors[e]);
        b.offsets.push_back(static_cast<int>(b.neighbors.size()));
      }
      at += g->num_nodes;
    }
    b.graph_rows.push_back(at);
    b.copies.push_back(copies);
  }
  return b;
}

PackedBatch pack(const PreparedGraph& graph) {
  const PreparedGraph* one[] = {&graph};
  return pack(one);
}

RowMatrix gin_layer(const RowMatrix& h, const Graph& g, const Eigen::VectorXd& marks, const LayerParams& layer) {
  if (h.rows() != g.num_nodes()) throw Error("gin_layer: feature rows do not match node count");
  if (marks.size() != 0 && marks.size() != g.num_nodes()) throw Error("gin_layer: mark length mismatch");
  const RowMatrix z = marks.size() ? with_mark(h, marks) : h;
  if (layer.first.weight.cols() != z.cols()) throw Error("gin_layer: weight shape does not match input width");
  RowMatrix s(z.rows(), z.cols());
  for (int v = 0; v < g.num_nodes(); ++v) {
    s.row(v) = (1.0 + layer.epsilon) * z.row(v);
    for (NodeId u : g.neighbors(v)) s.row(v) += z.row(u);
  }
  RowMatrix u;
  affine_rows(s, layer.first, u);
  RowMatrix out;
  affine_rows(u.cwiseMax(0.0), layer.second, out);
  return out;
}

ForwardResult forward(PackedBatch batch, const ModelParams& params, const ModelConfig& cfg) {
  check_shapes(params, cfg);
  if (batch.features.cols() != feature_columns(cfg)) throw Error("forward: batch feature width does not match config");
  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.last_hidden = run_layers(batch, params, cfg, &cache);
  RowMatrix x = pool(batch, cache.last_hidden, cfg.pooling);
  for (int r = 0; r < cfg.readout_layers; ++r) {
    RowMatrix pre;
    affine_rows(x, params.readout[r], pre);
    check_finite(pre, cfg.layers + 1);
    cache.readout_input.push_back(std::move(x));
    x = r + 1 < cfg.readout_layers ? RowMatrix(pre.cwiseMax(0.0)) : pre;
    cache.readout_pre.push_back(std::move(pre));
  }
  result.outputs = std::move(x);
  cache.batch = std::move(batch);
  return result;
}

Eigen::VectorXd forward(const MarkedBag& bag, const CseMatrix* encoding, const ModelParams& params,
                        const ModelConfig& cfg) {
  const auto result = forward(pack(prepare(bag, encoding, cfg)), params, cfg);
  return result.outputs.row(0).transpose();
}

RowMatrix pooled_representation(const PackedBatch& batch, const ModelParams& params, const ModelConfig& cfg) {
  check_shapes(params, cfg);
  return pool(batch, run_layers(batch, params, cfg, nullptr), cfg.pooling);
}

ModelParams backward(const ForwardCache& cache, const RowMatrix& upstream, const ModelParams& params,
                     const ModelConfig& cfg) {
  const PackedBatch& b = cache.batch;
  if (upstream.rows() != b.num_graphs() || upstream.cols() != cfg.output_dim) {
    throw Error("backward: upstream gradient shape mismatch");
  }
  ModelParams grads = ModelParams::zeros_like(params);

  RowMatrix d_pre = upstream;
  RowMatrix d_x;
  for (int r = cfg.readout_layers - 1; r >= 0; --r) {
    auto& g = grads.readout[r];
    g.weight.noalias() = d_pre.transpose() * cache.readout_input[r];
    g.bias = d_pre.colwise().sum().transpose();
    d_x.noalias() = d_pre * params.readout[r].weight;
    if (r > 0) d_pre = d_x.cwiseProduct((cache.readout_pre[r - 1].array() > 0.0).cast<double>().matrix());
  }

  // d_x is the gradient of the pooled vector; spread it over the pooled rows.
  RowMatrix d_h(b.num_rows(), cfg.hidden);
  for (int gi = 0; gi < b.num_graphs(); ++gi) {
    const double scale = cfg.pooling == Pooling::mean ? 1.0 / b.copies[gi] : 1.0;
    for (int row = b.graph_rows[gi]; row < b.graph_rows[gi + 1]; ++row) d_h.row(row) = scale * d_x.row(gi);
  }

  RowMatrix d_u;
  RowMatrix d_s;
  RowMatrix d_z;
  for (int l = cfg.layers - 1; l >= 0; --l) {
    const auto& layer = params.layers[l];
    auto& g = grads.layers[l];
    const RowMatrix& u = cache.hidden_pre[l];
    const RowMatrix& s = cache.aggregated[l];
    const RowMatrix& z = cache.layer_input[l];

    g.second.weight.noalias() = d_h.transpose() * u.cwiseMax(0.0);
    g.second.bias = d_h.colwise().sum().transpose();
    d_u.noalias() = d_h * layer.second.weight;
    d_u.array() *= (u.array() > 0.0).cast<double>();
    g.first.weight.noalias() = d_u.transpose() * s;
    g.first.bias = d_u.colwise().sum().transpose();
    d_s.noalias() = d_u * layer.first.weight;
    g.epsilon = cfg.epsilon_learnable ? d_s.cwiseProduct(z).sum() : 0.0;
    if (l == 0) break;
    // The adjacency is symmetric, so the transpose of aggregation is itself.
    aggregate(b, d_s, 1.0 + layer.epsilon, d_z);
    const bool mark = cfg.mark_mode == MarkMode::per_layer_concat;
    d_h = mark ? RowMatrix(d_z.leftCols(cfg.hidden)) : d_z;
  }
  return grads;
}

void calibrate_scale(ModelParams& params, const PackedBatch& batch, const ModelConfig& cfg) {
  // Per output channel: subtract the batch mean and divide by the batch
  // standard deviation, folded into the affine's weights and bias.
  auto standardize = [](Affine& f, const auto& out) {
    const double rows = static_cast<double>(out.rows());
    if (out.rows() == 0) return;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const double mu = out.col(j).mean();
      const double sd = std::sqrt((out.col(j).array() - mu).square().sum() / rows);
      const double scale = sd > 1e-12 && std::isfinite(sd) ? 1.0 / sd : 1.0;
      f.weight.row(j) *= scale;
      f.bias[j] = (f.bias[j] - mu) * scale;
    }
  };
  for (int l = 0; l < cfg.layers; ++l) {
    auto fwd = forward(batch, params, cfg);
    standardize(params.layers[l].first, fwd.cache.hidden_pre[l]);
    fwd = forward(batch, params, cfg);
    const RowMatrix& h = l + 1 < cfg.layers ? fwd.cache.layer_input[l + 1] : fwd.cache.last_hidden;
    standardize(params.layers[l].second, h.leftCols(cfg.hidden));
  }
  for (int r = 0; r < cfg.readout_layers; ++r) {
    const auto fwd = forward(batch, params, cfg);
    standardize(params.readout[r], fwd.cache.readout_pre[r]);
  }
}

AdamState AdamState::zeros_like(const ModelParams& params) {
  return {ModelParams::zeros_like(params), ModelParams::zeros_like(params), 0};
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, const AdamConfig& cfg) {
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  auto p = params.views();
  const auto g = grads.views();
  auto m = state.m.views();
  auto v = state.v.views();
  if (p.size() != g.size() || p.size() != m.size()) throw Error("adam_step: parameter structure mismatch");
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (p[t].size() != g[t].size()) throw Error("adam_step: tensor size mismatch");
    for (Eigen::Index i = 0; i < p[t].size(); ++i) {
      const double gi = g[t][i];
      m[t][i] = cfg.beta1 * m[t][i] + (1.0 - cfg.beta1) * gi;
      v[t][i] = cfg.beta2 * v[t][i] + (1.0 - cfg.beta2) * gi * gi;
      const double m_hat = m[t][i] / c1;
      const double v_hat = v[t][i] / c2;
      p[t][i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

GradCheckResult grad_check(const PackedBatch& batch, const ModelParams& params, const ModelConfig& cfg,
                           const RowMatrix& targets, double step, double floor) {
  auto loss = [&](const ModelParams& p) {
    const auto out = forward(batch, p, cfg).outputs;
    return 0.5 * (out - targets).squaredNorm();
  };
  const auto fwd = forward(batch, params, cfg);
  const ModelParams analytic = backward(fwd.cache, fwd.outputs - targets, params, cfg);
  const auto a_flat = analytic.flatten();
  auto flat = params.flatten();
  ModelParams probe = params;
  GradCheckResult result;

  // Epsilon entries are only checked when they are trainable.
  std::vector<char> skip(flat.size(), 0);
  if (!cfg.epsilon_learnable) {
    std::size_t at = 0;
    for (const auto& layer : params.layers) {
      at += layer.first.weight.size() + layer.first.bias.size() + layer.second.weight.size() +
            layer.second.bias.size();
      skip[at++] = 1;
    }
  }
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (skip[i]) continue;
    const double saved = flat[i];
    flat[i] = saved + step;
    probe.assign(flat);
    const double up = loss(probe);
    flat[i] = saved - step;
    probe.assign(flat);
    const double down = loss(probe);
    flat[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom = std::max({std::abs(a_flat[i]), std::abs(numeric), floor});
    const double rel = std::abs(a_flat[i] - numeric) / denom;
    if (rel > result.max_rel_error) {
      result = {rel, i, a_flat[i], numeric};
    }
  }
  return result;
}

std::string to_string(MarkMode m) { return m == MarkMode::per_layer_concat ? "per_layer_concat" : "input_only"; }
std::string to_string(Pooling p) { return p == Pooling::sum ? "sum" : "mean"; }

MarkMode parse_mark_mode(std::string_view s) {
  if (s == "per_layer_concat") return MarkMode::per_layer_concat;
  if (s == "input_only") return MarkMode::input_only;
  throw Error("unknown mark mode '" + std::string(s) + "'");
}

Pooling parse_pooling(std::string_view s) {
  if (s == "sum") return Pooling::sum;
  if (s == "mean") return Pooling::mean;
  throw Error("unknown pooling '" + std::string(s) + "'");
}

std::string checkpoint_json(const ModelConfig& cfg, const ModelParams& params) {
  nlohmann::ordered_json j;
  j["format"] = "hymn-gin-checkpoint";
  j["version"] = 1;
  j["config"] = {{"layers", cfg.layers},
                 {"hidden", cfg.hidden},
                 {"input_dim", cfg.input_dim},
                 {"readout_layers", cfg.readout_layers},
                 {"epsilon_learnable", cfg.epsilon_learnable},
                 {"mark_mode", to_string(cfg.mark_mode)},
                 {"cse_drop_first_two", cfg.cse_drop_first_two},
                 {"output_dim", cfg.output_dim},
                 {"pooling", to_string(cfg.pooling)}};
  j["seed"] = params.seed;
  j["params"] = params.flatten();
  return j.dump();
}

std::pair<ModelConfig, ModelParams> parse_checkpoint(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("checkpoint: ") + e.what());
  }
  if (j.value("format", "") != "hymn-gin-checkpoint") throw Error("checkpoint: unrecognized format");
  if (j.value("version", 0) != 1) throw Error("checkpoint: unsupported version");
  const auto& c = j.at("config");
  ModelConfig cfg;
  cfg.layers = c.at("layers");
  cfg.hidden = c.at("hidden");
  cfg.input_dim = c.at("input_dim");
  cfg.readout_layers = c.at("readout_layers");
  cfg.epsilon_learnable = c.at("epsilon_learnable");
  cfg.mark_mode = parse_mark_mode(c.at("mark_mode").get<std::string>());
  cfg.cse_drop_first_two = c.at("cse_drop_first_two");
  cfg.output_dim = c.at("output_dim");
  cfg.pooling = parse_pooling(c.at("pooling").get<std::string>());
  ModelParams params = ModelParams::init(cfg, j.at("seed").get<std::uint64_t>());
  const auto flat = j.at("params").get<std::vector<double>>();
  params.assign(flat);
  return {cfg, params};
}

}  // namespace hymn::nn
