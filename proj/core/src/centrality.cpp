#include "hymn/centrality.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stack>

#include <json.hpp>

#include "hymn/error.hpp"

namespace hymn {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::subgraph: return "subgraph";
    case Measure::katz: return "katz";
    case Measure::degree: return "degree";
    case Measure::closeness: return "closeness";
    case Measure::betweenness: return "betweenness";
  }
  return "unknown";
}

Measure parse_measure(std::string_view name) {
  if (name == "subgraph" || name == "sc") return Measure::subgraph;
  if (name == "katz") return Measure::katz;
  if (name == "degree") return Measure::degree;
  if (name == "closeness") return Measure::closeness;
  if (name == "betweenness") return Measure::betweenness;
  throw Error("unknown centrality measure '" + std::string(name) + "'");
}

std::string_view to_string(EncodingVariant v) {
  switch (v) {
    case EncodingVariant::cse: return "cse";
    case EncodingVariant::rwse: return "rwse";
    case EncodingVariant::closed_walk_prob: return "closed_walk_prob";
  }
  return "unknown";
}

std::vector<Eigen::MatrixXd> adj_powers(const Graph& g, int K) {
  if (K < 0) throw Error("adj_powers: K must be non-negative");
  const Eigen::MatrixXd a = g.adjacency();
  std::vector<Eigen::MatrixXd> powers;
  powers.reserve(K + 1);
  powers.push_back(Eigen::MatrixXd::Identity(g.num_nodes(), g.num_nodes()));
  for (int k = 1; k <= K; ++k) {
    Eigen::MatrixXd next = powers.back() * a;
    if (next.size() > 0 && next.maxCoeff() > kExactWalkLimit) {
      throw NumericalError("power overflow; reduce K (A^" + std::to_string(k) + " exceeds 2^53)");
    }
    powers.push_back(std::move(next));
  }
  return powers;
}

namespace {

// Visits the factorially scaled powers A^k / k! for k = 0..K. The callback
// returns false to stop early. Exact integer powers are divided by an exact
// k! while they fit in 53 bits; afterwards the scaled matrix is propagated.
template <typename Visit>
void for_each_scaled_power(const Graph& g, int K, Visit&& visit) {
  const int n = g.num_nodes();
  const Eigen::MatrixXd a = g.adjacency();
  Eigen::MatrixXd exact = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd scaled;
  bool use_exact = true;
  double factorial = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      if (use_exact) {
        Eigen::MatrixXd next = exact * a;
        if (next.maxCoeff() > kExactWalkLimit) {
          use_exact = false;
          // exact holds A^{k-1}; factorial holds (k-1)!.
          scaled = (exact / factorial) * a / static_cast<double>(k);
        } else {
          exact = std::move(next);
        }
      } else {
        scaled = scaled * a / static_cast<double>(k);
      }
      factorial *= k;
    }
    const bool keep_going = use_exact ? visit(k, Eigen::MatrixXd(exact / factorial)) : visit(k, scaled);
    if (!keep_going) return;
  }
}

}  // namespace

CseMatrix cse(const Graph& g, int K) {
  if (K < 0) throw Error("cse: K must be non-negative");
  CseMatrix out;
  out.variant = EncodingVariant::cse;
  out.order = K;
  out.values.resize(g.num_nodes(), K + 1);
  for_each_scaled_power(g, K, [&](int k, const Eigen::MatrixXd& term) {
    out.values.col(k) = term.diagonal();
    return true;
  });
  return out;
}

CentralityReport sc_truncated(const Graph& g, int K) {
  const CseMatrix enc = cse(g, K);
  CentralityReport report;
  report.measure = Measure::subgraph;
  report.scores.resize(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) {
    double s = 0.0;
    for (int k = 0; k <= K; ++k) s += enc.values(v, k);
    report.scores[v] = s;
  }
  report.params = {{"beta", 1.0}, {"K", static_cast<double>(K)}};
  return report;
}

CentralityReport sc_reference(const Graph& g, int max_order, double term_cutoff) {
  CentralityReport report;
  report.measure = Measure::subgraph;
  report.scores.assign(g.num_nodes(), 0.0);
  int last = 0;
  for_each_scaled_power(g, max_order, [&](int k, const Eigen::MatrixXd& term) {
    for (int v = 0; v < g.num_nodes(); ++v) report.scores[v] += term(v, v);
    last = k;
    return k == 0 || term.cwiseAbs().maxCoeff() >= term_cutoff;
  });
  report.params = {{"beta", 1.0}, {"K", static_cast<double>(last)}};
  return report;
}

double spectral_radius(const Graph& g) {
  const int n = g.num_nodes();
  if (g.num_edges() == 0) return 0.0;
  // Shifting by I makes the Perron root strictly dominant in magnitude, which
  // avoids the +-lambda1 oscillation on bipartite graphs.
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  double estimate = 0.0;
  for (int it = 0; it < 10'000; ++it) {
    Eigen::VectorXd y = x;
    for (int v = 0; v < n; ++v) {
      for (NodeId u : g.neighbors(v)) y[v] += x[u];
    }
    const double next = x.dot(y) - 1.0;  // Rayleigh quotient of A
    x = y.normalized();
    if (std::abs(next - estimate) < 1e-10 && it > 0) return next;
    estimate = next;
  }
  return estimate;
}

CentralityReport katz(const Graph& g, double alpha, int K) {
  if (K < 0) throw Error("katz: K must be non-negative");
  const double lambda1 = spectral_radius(g);
  if (!(alpha > 0.0) || alpha * lambda1 >= 1.0) {
    throw Error("Katz series divergent: alpha=" + std::to_string(alpha) + " with lambda1=" +
                std::to_string(lambda1) + " (need 0 < alpha < 1/lambda1)");
  }
  const int n = g.num_nodes();
  Eigen::VectorXd term = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd score = term;
  int k = 0;
  while (k < K) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < n; ++v) {
      for (NodeId u : g.neighbors(v)) next[v] += term[u];
    }
    term = alpha * next;
    ++k;
    score += term;
    if (term.maxCoeff() < 1e-12) break;
  }
  CentralityReport report;
  report.measure = Measure::katz;
  report.scores.assign(score.data(), score.data() + n);
  report.params = {{"alpha", alpha}, {"lambda1", lambda1}, {"K", static_cast<double>(K)},
                   {"terms", static_cast<double>(k)}};
  return report;
}

CentralityReport katz_default(const Graph& g, int K) {
  const double lambda1 = spectral_radius(g);
  return katz(g, lambda1 > 0.0 ? 0.9 / lambda1 : 0.5, K);
}

namespace {

std::vector<double> closeness_scores(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> out(n, 0.0);
  std::vector<int> dist(n);
  std::queue<NodeId> queue;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.push(s);
    long total = 0;
    int reached = 0;
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop();
      ++reached;
      total += dist[v];
      for (NodeId u : g.neighbors(v)) {
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          queue.push(u);
        }
      }
    }
    out[s] = total > 0 ? static_cast<double>(reached - 1) / static_cast<double>(total) : 0.0;
  }
  return out;
}

std::vector<double> betweenness_scores(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> bc(n, 0.0);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<int> dist(n);
  for (int s = 0; s < n; ++s) {
    std::stack<NodeId> order;
    std::queue<NodeId> queue;
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push(s);
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop();
      order.push(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    while (!order.empty()) {
      const NodeId w = order.top();
      order.pop();
      for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  // Undirected: every unordered pair was accumulated from both endpoints.
  for (auto& x : bc) x /= 2.0;
  return bc;
}

}  // namespace

CentralityReport classical_centrality(const Graph& g, Measure measure) {
  CentralityReport report;
  report.measure = measure;
  switch (measure) {
    case Measure::degree:
      for (int d : g.degrees()) report.scores.push_back(d);
      break;
    case Measure::closeness:
      report.scores = closeness_scores(g);
      break;
    case Measure::betweenness:
      report.scores = betweenness_scores(g);
      break;
    default:
      throw Error("classical_centrality: measure must be degree, closeness or betweenness");
  }
  return report;
}

CseMatrix rwse(const Graph& g, int K) {
  if (K < 1) throw Error("rwse: K must be at least 1");
  const int n = g.num_nodes();
  Eigen::MatrixXd walk = g.adjacency();
  for (int v = 0; v < n; ++v) {
    if (g.degree(v) == 0) throw Error("RWSE undefined for degree-0 node " + std::to_string(v));
    walk.col(v) /= static_cast<double>(g.degree(v));
  }
  CseMatrix out;
  out.variant = EncodingVariant::rwse;
  out.order = K;
  out.values.resize(n, K + 1);
  out.values.col(0).setOnes();
  Eigen::MatrixXd power = walk;
  for (int k = 1; k <= K; ++k) {
    if (k > 1) power = power * walk;
    out.values.col(k) = power.diagonal();
  }
  return out;
}

CseMatrix closed_walk_prob(const Graph& g, int K) {
  if (K < 1) throw Error("closed_walk_prob: K must be at least 1");
  const int n = g.num_nodes();
  const Eigen::MatrixXd a = g.adjacency();
  CseMatrix out;
  out.variant = EncodingVariant::closed_walk_prob;
  out.order = K;
  out.values.resize(n, K + 1);
  out.values.col(0).setOnes();
  // The ratio is scale invariant, so the power is renormalized each step.
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= K; ++k) {
    power = power * a;
    const double scale = power.maxCoeff();
    if (scale > 0.0) power /= scale;
    const Eigen::VectorXd rows = power.rowwise().sum();
    for (int v = 0; v < n; ++v) {
      if (rows[v] == 0.0) {
        throw Error("closed_walk_prob: zero walk count at node " + std::to_string(v) + ", k=" + std::to_string(k));
      }
      out.values(v, k) = power(v, v) / rows[v];
    }
  }
  return out;
}

std::string centrality_to_json_line(const std::string& graph_id, const CentralityReport& report) {
  nlohmann::ordered_json j;
  j["id"] = graph_id;
  j["measure"] = to_string(report.measure);
  j["scores"] = report.scores;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.params) params[k] = v;
  j["params"] = params;
  return j.dump();
}

std::string encoding_to_json_line(const std::string& graph_id, const CseMatrix& encoding) {
  nlohmann::ordered_json j;
  j["id"] = graph_id;
  j["variant"] = to_string(encoding.variant);
  j["K"] = encoding.order;
  auto rows = nlohmann::ordered_json::array();
  for (int v = 0; v < encoding.values.rows(); ++v) {
    std::vector<double> row(encoding.values.cols());
    for (int k = 0; k < encoding.values.cols(); ++k) row[k] = encoding.values(v, k);
    rows.push_back(row);
  }
  j["values"] = rows;
  return j.dump();
}

}  // namespace hymn
