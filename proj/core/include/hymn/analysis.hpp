#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hymn/graph.hpp"
#include "hymn/nn.hpp"
#include "hymn/sampling.hpp"

namespace hymn {

enum class Substructure { triangle, four_cycle, tailed_triangle, star3, path3, path4 };

std::string to_string(Substructure kind);
Substructure parse_substructure(std::string_view name);

/// Brute-force occurrence counts:
///   triangle         3-cliques
///   four_cycle       simple 4-cycles (not necessarily induced), each once
///   tailed_triangle  (triangle, triangle vertex, outside neighbor) triples
///   star3            sum_v C(deg v, 3)
///   path3, path4     simple paths on 3 / 4 vertices, each once
long long count_substructure(const Graph& g, Substructure kind);

/// sum_{l=1..L+1} lambda[l-1] * sum_j (A^{l-1})_{v j}, the cumulative walk
/// count that bounds the marking perturbation at v. lambda has L+1 entries.
double walk_term(const Graph& g, NodeId v, int L, std::span<const double> lambda);

/// Largest singular value of W by power iteration on W^T W.
double spectral_norm(const Eigen::MatrixXd& w, double tol = 1e-8, int max_iter = 10'000);

/// Ingredients of the walk bound for a model and graph.
struct BoundTerms {
  int L = 0;
  std::vector<double> lipschitz;  // per GIN layer, then the readout
  std::vector<double> lambda;
  std::vector<double> walk_term;  // per node
  /// prod(lipschitz) * walk_term[v]
  double bound(NodeId v) const;
};

BoundTerms bound_terms(const Graph& g, const nn::ModelParams& params, const nn::ModelConfig& cfg,
                       std::span<const double> lambda);

/// Sample Pearson correlation. Throws on length < 2 or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// Untrained-model configuration used for perturbation studies: `layers` GIN
/// layers of width `hidden`, output of width `hidden`, sized for `g`.
nn::ModelConfig perturbation_model(const Graph& g, int layers = 3, int hidden = 32);

/// ||f(S_v) - f(G)||: the plain forward on g versus the forward on the
/// single copy with node v marked.
double perturbation_distance(const Graph& g, NodeId v, const nn::ModelParams& params, const nn::ModelConfig& cfg);

/// Node a policy marks on graph number `graph_index` of an experiment.
NodeId policy_node(const Graph& g, const Policy& policy, std::uint64_t seed, std::size_t graph_index,
                   int model_seed_index);

struct PerturbRecord {
  std::string graph_id;
  std::string policy;
  int model_seed = 0;
  NodeId node = 0;
  double distance = 0.0;
};

struct PerturbationConfig {
  std::uint64_t seed = 0;
  std::vector<Policy> policies;
  int model_seeds = 5;
  int layers = 3;
  int hidden = 32;
  int threads = 1;
};

struct PolicySummary {
  std::string policy;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

struct PerturbationResult {
  std::vector<PerturbRecord> records;  // graph-major, then policy, then model seed
  std::vector<PolicySummary> summary;  // in policy order
};

PerturbationResult perturbation_experiment(std::span<const Graph> graphs, const PerturbationConfig& cfg);

struct CorrelationConfig {
  std::uint64_t seed = 0;
  int num_graphs = 100;
  int n = 20;
  double p = 0.3;
  std::vector<Policy> policies;
  std::vector<Substructure> kinds;
  int model_seeds = 5;
  int layers = 3;
  int hidden = 32;
  int threads = 1;
};

struct CorrelationTable {
  std::vector<std::string> policies;
  std::vector<Substructure> kinds;
  /// mean[p][k]: Pearson coefficient averaged over model seeds.
  std::vector<std::vector<double>> mean;
  /// per_seed[p][k][s]
  std::vector<std::vector<std::vector<double>>> per_seed;

  double at(const std::string& policy, Substructure kind) const;
  std::string to_csv() const;
};

/// Seeded ER graphs used by the correlation study.
std::vector<Graph> correlation_graphs(const CorrelationConfig& cfg);

/// Pearson correlation between marking-induced perturbation and substructure
/// counts across graphs, per policy and kind.
CorrelationTable correlation_experiment(const CorrelationConfig& cfg);
CorrelationTable correlation_experiment(std::span<const Graph> graphs, const CorrelationConfig& cfg);

std::string perturb_records_csv(const std::vector<PerturbRecord>& records);

}  // namespace hymn
