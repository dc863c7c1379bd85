#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hymn/graph.hpp"

namespace hymn {

enum class Measure { subgraph, katz, degree, closeness, betweenness };

std::string_view to_string(Measure m);
Measure parse_measure(std::string_view name);

/// Per-node scores of one centrality measure.
struct CentralityReport {
  Measure measure = Measure::subgraph;
  std::vector<double> scores;
  /// Named parameters: "beta" and "K" for subgraph centrality; "alpha",
  /// "lambda1", "K" and "terms" for Katz.
  std::map<std::string, double> params;
};

enum class EncodingVariant { cse, rwse, closed_walk_prob };

std::string_view to_string(EncodingVariant v);

/// n x (K+1) table of per-node walk encodings; column k holds the k-step term.
struct CseMatrix {
  EncodingVariant variant = EncodingVariant::cse;
  int order = 0;
  Eigen::MatrixXd values;
};

/// Largest walk count adj_powers accepts; above this doubles stop being exact.
inline constexpr double kExactWalkLimit = 9007199254740992.0;  // 2^53

/// Default truncation order for subgraph-centrality encodings.
inline constexpr int kDefaultScOrder = 20;

/// [A^0, ..., A^K] with exact integer entries. Throws NumericalError
/// "power overflow; reduce K" once any entry would exceed 2^53.
std::vector<Eigen::MatrixXd> adj_powers(const Graph& g, int K);

/// Centrality-based structural encoding: values(v, k) = (A^k)_vv / k!.
///
/// Columns are computed from exact integer powers while the entries stay below
/// 2^53 and continue with the factorially scaled recurrence A^k/k! =
/// (A^{k-1}/(k-1)!) A / k afterwards, so large K never overflows.
CseMatrix cse(const Graph& g, int K);

/// Truncated subgraph centrality (beta = 1): row sums of cse(g, K).
CentralityReport sc_truncated(const Graph& g, int K = kDefaultScOrder);

/// Subgraph centrality summed until the scaled term's largest entry drops
/// below `term_cutoff` or `max_order` is reached. Used as reference values.
CentralityReport sc_reference(const Graph& g, int max_order = 60, double term_cutoff = 1e-12);

/// Spectral radius of A by power iteration on A + I (tolerance 1e-10,
/// at most 10,000 iterations).
double spectral_radius(const Graph& g);

/// Katz index sum_k alpha^k (A^k 1)_v, truncated at K or when the term's max
/// entry falls below 1e-12. Throws Error "Katz series divergent" when
/// alpha >= 1/lambda1.
CentralityReport katz(const Graph& g, double alpha, int K = 1000);

/// Katz with the default alpha = 0.9 / lambda1 (0.5 on edgeless graphs).
CentralityReport katz_default(const Graph& g, int K = 1000);

/// Degree, closeness (within-component convention) or exact Brandes
/// betweenness (unnormalized, each unordered pair counted once).
CentralityReport classical_centrality(const Graph& g, Measure measure);

/// Random-walk structural encoding: values(v, k) = ((A D^-1)^k)_vv for
/// k = 1..K, column 0 set to 1.
CseMatrix rwse(const Graph& g, int K);

/// Closed-walk probabilities: values(v, k) = (A^k)_vv / sum_j (A^k)_vj,
/// column 0 set to 1.
CseMatrix closed_walk_prob(const Graph& g, int K);

/// JSONL export records.
std::string centrality_to_json_line(const std::string& graph_id, const CentralityReport& report);
std::string encoding_to_json_line(const std::string& graph_id, const CseMatrix& encoding);

}  // namespace hymn
