#include "hymn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "hymn/error.hpp"
#include "hymn/generators.hpp"
#include "hymn/parallel.hpp"
#include "hymn/rng.hpp"

namespace hymn {

std::string to_string(Substructure kind) {
  switch (kind) {
    case Substructure::triangle: return "triangle";
    case Substructure::four_cycle: return "four_cycle";
    case Substructure::tailed_triangle: return "tailed_triangle";
    case Substructure::star3: return "star3";
    case Substructure::path3: return "path3";
    case Substructure::path4: return "path4";
  }
  return "unknown";
}

Substructure parse_substructure(std::string_view name) {
  for (auto k : {Substructure::triangle, Substructure::four_cycle, Substructure::tailed_triangle, Substructure::star3,
                 Substructure::path3, Substructure::path4}) {
    if (to_string(k) == name) return k;
  }
  if (name == "tri") return Substructure::triangle;
  if (name == "4cycle" || name == "four-cycle") return Substructure::four_cycle;
  throw Error("unknown substructure '" + std::string(name) + "'");
}

long long count_substructure(const Graph& g, Substructure kind) {
  const int n = g.num_nodes();
  auto adj = [&](NodeId a, NodeId b) { return g.has_edge(a, b); };
  long long count = 0;
  switch (kind) {
    case Substructure::triangle:
      for (int u = 0; u < n; ++u)
        for (NodeId v : g.neighbors(u))
          if (v > u)
            for (NodeId w : g.neighbors(v))
              if (w > v && adj(u, w)) ++count;
      break;
    case Substructure::four_cycle:
      // a is the smallest vertex of the cycle a-b-c-d-a; b < d fixes the direction.
      for (int a = 0; a < n; ++a)
        for (NodeId b : g.neighbors(a)) {
          if (b < a) continue;
          for (NodeId c : g.neighbors(b)) {
            if (c <= a) continue;
            for (NodeId d : g.neighbors(c)) {
              if (d <= b || !adj(d, a)) continue;
              ++count;
            }
          }
        }
      break;
    case Substructure::tailed_triangle:
      for (int u = 0; u < n; ++u)
        for (NodeId v : g.neighbors(u))
          if (v > u)
            for (NodeId w : g.neighbors(v))
              if (w > v && adj(u, w))
                for (NodeId x : {u, static_cast<int>(v), static_cast<int>(w)})
                  for (NodeId y : g.neighbors(x))
                    if (y != u && y != v && y != w) ++count;
      break;
    case Substructure::star3:
      for (int v = 0; v < n; ++v) {
        const long long d = g.degree(v);
        count += d * (d - 1) * (d - 2) / 6;
      }
      break;
    case Substructure::path3:
      for (int b = 0; b < n; ++b)
        for (NodeId a : g.neighbors(b))
          for (NodeId c : g.neighbors(b))
            if (a < c) ++count;
      break;
    case Substructure::path4:
      for (int a = 0; a < n; ++a)
        for (NodeId b : g.neighbors(a))
          for (NodeId c : g.neighbors(b)) {
            if (c == a) continue;
            for (NodeId d : g.neighbors(c))
              if (d != a && d != b && a < d) ++count;
          }
      break;
  }
  return count;
}

namespace {

// Row sums of A^0 .. A^L for every node.
std::vector<Eigen::VectorXd> walk_counts(const Graph& g, int L) {
  std::vector<Eigen::VectorXd> out;
  out.push_back(Eigen::VectorXd::Ones(g.num_nodes()));
  for (int l = 1; l <= L; ++l) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(g.num_nodes());
    for (int v = 0; v < g.num_nodes(); ++v)
      for (NodeId u : g.neighbors(v)) next[v] += out.back()[u];
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace

double walk_term(const Graph& g, NodeId v, int L, std::span<const double> lambda) {
  if (v < 0 || v >= g.num_nodes()) throw Error("walk_term: node out of range");
  if (L < 0) throw Error("walk_term: L must be non-negative");
  if (static_cast<int>(lambda.size()) != L + 1) throw Error("walk_term: lambda must have L+1 entries");
  const auto counts = walk_counts(g, L);
  double total = 0.0;
  for (int l = 0; l <= L; ++l) {
    if (lambda[l] < 0.0) throw Error("walk_term: lambda entries must be non-negative");
    total += lambda[l] * counts[l][v];
  }
  return total;
}

double spectral_norm(const Eigen::MatrixXd& w, double tol, int max_iter) {
  if (w.size() == 0) return 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(w.cols()).normalized();
  double sigma2 = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = w.transpose() * (w * x);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    const double next = x.dot(y);
    x = y / norm;
    if (std::abs(next - sigma2) <= tol * std::max(1.0, next)) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
  }
  return std::sqrt(std::max(0.0, sigma2));
}

double BoundTerms::bound(NodeId v) const {
  double k = 1.0;
  for (double x : lipschitz) k *= x;
  return k * walk_term.at(static_cast<std::size_t>(v));
}

BoundTerms bound_terms(const Graph& g, const nn::ModelParams& params, const nn::ModelConfig& cfg,
                       std::span<const double> lambda) {
  nn::check_shapes(params, cfg);
  BoundTerms terms;
  terms.L = cfg.layers;
  terms.lambda.assign(lambda.begin(), lambda.end());
  for (const auto& layer : params.layers) {
    terms.lipschitz.push_back(spectral_norm(layer.first.weight) * spectral_norm(layer.second.weight));
  }
  double readout = 1.0;
  for (const auto& f : params.readout) readout *= spectral_norm(f.weight);
  terms.lipschitz.push_back(readout);
  for (int v = 0; v < g.num_nodes(); ++v) terms.walk_term.push_back(walk_term(g, v, cfg.layers, lambda));
  return terms;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson: length mismatch");
  if (x.size() < 2) throw Error("pearson: need at least two samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

nn::ModelConfig perturbation_model(const Graph& g, int layers, int hidden) {
  nn::ModelConfig cfg;
  cfg.layers = layers;
  cfg.hidden = hidden;
  cfg.output_dim = hidden;
  cfg.readout_layers = 2;
  cfg.input_dim = nn::input_dim_for(g.feat_dim(), 0, cfg);
  return cfg;
}

double perturbation_distance(const Graph& g, NodeId v, const nn::ModelParams& params, const nn::ModelConfig& cfg) {
  if (v < 0 || v >= g.num_nodes()) throw Error("perturbation_distance: node " + std::to_string(v) + " out of range");
  const auto plain = nn::forward(make_bag(g, {}, true), nullptr, params, cfg);
  const auto marked = nn::forward(make_bag(g, {v}, false), nullptr, params, cfg);
  return (marked - plain).norm();
}

NodeId policy_node(const Graph& g, const Policy& policy, std::uint64_t seed, std::size_t graph_index,
                   int model_seed_index) {
  if (policy.source == Policy::Source::random) {
    Rng rng(derive_seed(derive_seed(seed, 7'000'000 + graph_index), static_cast<std::uint64_t>(model_seed_index)));
    return static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.num_nodes())));
  }
  return select_top(policy_scores(g, policy), 1).front();
}

namespace {

std::vector<nn::ModelParams> untrained_models(const nn::ModelConfig& cfg, std::uint64_t seed, int count) {
  std::vector<nn::ModelParams> out;
  for (int s = 0; s < count; ++s) out.push_back(nn::ModelParams::init(cfg, derive_seed(seed, 5000 + static_cast<std::uint64_t>(s))));
  return out;
}

// distances[g][p][s]
std::vector<std::vector<std::vector<double>>> distances_for(std::span<const Graph> graphs,
                                                            std::span<const Policy> policies, std::uint64_t seed,
                                                            int model_seeds, int layers, int hidden, int threads,
                                                            std::vector<std::vector<std::vector<NodeId>>>* nodes) {
  if (graphs.empty()) throw Error("perturbation study: no graphs");
  if (policies.empty()) throw Error("perturbation study: no policies");
  const nn::ModelConfig cfg = perturbation_model(graphs.front(), layers, hidden);
  const auto models = untrained_models(cfg, seed, model_seeds);
  std::vector<std::vector<std::vector<double>>> out(graphs.size());
  if (nodes) nodes->assign(graphs.size(), {});
  parallel_for(graphs.size(), threads, [&](std::size_t i) {
    const Graph& g = graphs[i];
    out[i].assign(policies.size(), std::vector<double>(static_cast<std::size_t>(model_seeds)));
    std::vector<std::vector<NodeId>> chosen(policies.size(), std::vector<NodeId>(static_cast<std::size_t>(model_seeds)));
    for (std::size_t p = 0; p < policies.size(); ++p) {
      for (int s = 0; s < model_seeds; ++s) {
        const NodeId v = policy_node(g, policies[p], seed, i, s);
        chosen[p][s] = v;
        out[i][p][s] = perturbation_distance(g, v, models[s], cfg);
      }
    }
    if (nodes) (*nodes)[i] = std::move(chosen);
  });
  return out;
}

}  // namespace

PerturbationResult perturbation_experiment(std::span<const Graph> graphs, const PerturbationConfig& cfg) {
  std::vector<std::vector<std::vector<NodeId>>> nodes;
  const auto dist = distances_for(graphs, cfg.policies, cfg.seed, cfg.model_seeds, cfg.layers, cfg.hidden, cfg.threads,
                                  &nodes);
  PerturbationResult result;
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (std::size_t p = 0; p < cfg.policies.size(); ++p)
      for (int s = 0; s < cfg.model_seeds; ++s)
        result.records.push_back({graphs[i].id(), cfg.policies[p].name(), s, nodes[i][p][s], dist[i][p][s]});
  for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
    PolicySummary sum{cfg.policies[p].name()};
    double total = 0.0;
    for (const auto& per_graph : dist)
      for (double d : per_graph[p]) {
        total += d;
        ++sum.count;
      }
    sum.mean = total / static_cast<double>(sum.count);
    double var = 0.0;
    for (const auto& per_graph : dist)
      for (double d : per_graph[p]) var += (d - sum.mean) * (d - sum.mean);
    sum.stddev = std::sqrt(var / static_cast<double>(sum.count));
    result.summary.push_back(sum);
  }
  return result;
}

std::vector<Graph> correlation_graphs(const CorrelationConfig& cfg) {
  std::vector<Graph> graphs;
  for (int i = 0; i < cfg.num_graphs; ++i) {
    graphs.push_back(gen_erdos_renyi(cfg.n, cfg.p, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)))
                         .with_id("er" + std::to_string(i)));
  }
  return graphs;
}

CorrelationTable correlation_experiment(const CorrelationConfig& cfg) {
  const auto graphs = correlation_graphs(cfg);
  return correlation_experiment(graphs, cfg);
}

CorrelationTable correlation_experiment(std::span<const Graph> graphs, const CorrelationConfig& cfg) {
  if (cfg.kinds.empty()) throw Error("correlation_experiment: no substructure kinds");
  const auto dist = distances_for(graphs, cfg.policies, cfg.seed, cfg.model_seeds, cfg.layers, cfg.hidden, cfg.threads,
                                  nullptr);
  CorrelationTable table;
  table.kinds = cfg.kinds;
  std::vector<std::vector<double>> counts(cfg.kinds.size());
  for (std::size_t k = 0; k < cfg.kinds.size(); ++k)
    for (const auto& g : graphs) counts[k].push_back(static_cast<double>(count_substructure(g, cfg.kinds[k])));
  for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
    table.policies.push_back(cfg.policies[p].name());
    std::vector<double> means;
    std::vector<std::vector<double>> seeds;
    for (std::size_t k = 0; k < cfg.kinds.size(); ++k) {
      std::vector<double> per_seed;
      for (int s = 0; s < cfg.model_seeds; ++s) {
        std::vector<double> d;
        for (const auto& per_graph : dist) d.push_back(per_graph[p][s]);
        per_seed.push_back(pearson(d, counts[k]));
      }
      means.push_back(std::accumulate(per_seed.begin(), per_seed.end(), 0.0) / static_cast<double>(per_seed.size()));
      seeds.push_back(std::move(per_seed));
    }
    table.mean.push_back(std::move(means));
    table.per_seed.push_back(std::move(seeds));
  }
  return table;
}

double CorrelationTable::at(const std::string& policy, Substructure kind) const {
  const auto p = std::find(policies.begin(), policies.end(), policy);
  const auto k = std::find(kinds.begin(), kinds.end(), kind);
  if (p == policies.end() || k == kinds.end()) throw Error("CorrelationTable: no entry for " + policy);
  return mean[static_cast<std::size_t>(p - policies.begin())][static_cast<std::size_t>(k - kinds.begin())];
}

std::string CorrelationTable::to_csv() const {
  std::ostringstream out;
  out << std::setprecision(17) << "policy";
  for (auto k : kinds) out << ',' << to_string(k);
  out << '\n';
  for (std::size_t p = 0; p < policies.size(); ++p) {
    out << policies[p];
    for (double v : mean[p]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

std::string perturb_records_csv(const std::vector<PerturbRecord>& records) {
  std::ostringstream out;
  out << std::setprecision(17) << "graph_id,policy,model_seed,node,distance\n";
  for (const auto& r : records) {
    out << r.graph_id << ',' << r.policy << ',' << r.model_seed << ',' << r.node << ',' << r.distance << '\n';
  }
  return out.str();
}

}  // namespace hymn
