#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hymn/centrality.hpp"
#include "hymn/error.hpp"
#include "hymn/generators.hpp"
#include "oracles.hpp"

using namespace hymn;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<NodeId> reversed_perm(int n) {
  std::vector<NodeId> p(n);
  for (int i = 0; i < n; ++i) p[i] = (i * 7 + 3) % n;  // a permutation when gcd(7, n) = 1
  return p;
}

}  // namespace

TEST_SUITE("centrality") {

TEST_CASE("adjacency powers") {
  const auto p2 = adj_powers(path_graph(2), 2);
  CHECK(p2[0].isIdentity());
  CHECK(p2[2].isIdentity());
  const auto c6 = adj_powers(cycle_graph(6), 4);
  for (int v = 0; v < 6; ++v) {
    CHECK(c6[2](v, v) == 2.0);
    CHECK(c6[3](v, v) == 0.0);
    CHECK(c6[4](v, v) == 6.0);
    CHECK(c6[4](v, v) == static_cast<double>(oracle::count_walks(cycle_graph(6), v, 4, v)));
  }
  const auto k4 = adj_powers(complete_graph(4), 2);
  CHECK((k4[2].diagonal().array() == 3.0).all());
  CHECK_THROWS_AS(adj_powers(path_graph(2), -1), Error);
  CHECK_THROWS_WITH_AS(adj_powers(complete_graph(20), 40), doctest::Contains("power overflow"), NumericalError);
}

TEST_CASE("cse matrix") {
  const auto c3 = cse(cycle_graph(3), 4);
  CHECK(c3.variant == EncodingVariant::cse);
  CHECK(c3.values.cols() == 5);
  for (int v = 0; v < 3; ++v) {
    CHECK(c3.values(v, 0) == 1.0);
    CHECK(c3.values(v, 1) == 0.0);
    CHECK(c3.values(v, 2) == doctest::Approx(1.0));
    CHECK(c3.values(v, 3) == doctest::Approx(1.0 / 3.0));
    CHECK(c3.values(v, 4) == doctest::Approx(1.0 / 4.0));
  }
  const auto s3 = cse(star_graph(3), 2);
  CHECK(s3.values(0, 2) == doctest::Approx(1.5));
  CHECK(s3.values(1, 2) == doctest::Approx(0.5));
  const Graph er = gen_erdos_renyi(12, 0.4, 2);
  const auto e = cse(er, 6);
  CHECK(e.values.col(1).isZero());
  for (int v = 0; v < 12; ++v)
    for (int k = 0; k <= 6; ++k) {
      const double walks = static_cast<double>(oracle::count_walks(er, v, k, v));
      CHECK(e.values(v, k) == doctest::Approx(walks / std::tgamma(k + 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("cse stays finite beyond the exact-integer range") {
  // K = 60 on a dense graph overflows 2^53 walk counts but not the scaled series.
  const Graph g = gen_erdos_renyi(20, 0.3, 1);
  const auto e = cse(g, 60);
  CHECK(e.values.allFinite());
  CHECK(e.values.col(60).maxCoeff() < 1e-12);
}

TEST_CASE("subgraph centrality") {
  const auto c3 = sc_truncated(cycle_graph(3), 30);
  const double expected = (std::exp(2.0) + 2.0 * std::exp(-1.0)) / 3.0;
  for (double s : c3.scores) CHECK(std::abs(s - expected) < 1e-9);
  CHECK(expected == doctest::Approx(2.7082717).epsilon(1e-7));
  CHECK(c3.measure == Measure::subgraph);
  CHECK(c3.params.at("beta") == 1.0);

  const auto edgeless = sc_truncated(Graph("e", 4, {}), 10);
  for (double s : edgeless.scores) CHECK(s == 1.0);
  const auto zero = sc_truncated(gen_erdos_renyi(6, 0.5, 1), 0);
  for (double s : zero.scores) CHECK(s == 1.0);

  const auto star = sc_truncated(star_graph(3), 30);
  CHECK(star.scores[0] > star.scores[1]);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = gen_erdos_renyi(15, 0.3, seed);
    const auto sc = sc_truncated(g, 40);
    const Eigen::VectorXd ref = oracle::sc_spectral(g);
    for (int v = 0; v < g.num_nodes(); ++v) {
      CHECK(sc.scores[v] >= 1.0);
      CHECK(std::abs(sc.scores[v] - ref[v]) < 1e-9 * ref[v]);
    }
  }
}

TEST_CASE("sc_truncated is the row sum of the cse matrix") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = gen_erdos_renyi(5 + static_cast<int>(seed) * 4, 0.25, seed);
    for (int K : {0, 3, 12, 30}) {
      const auto sc = sc_truncated(g, K);
      const auto e = cse(g, K);
      for (int v = 0; v < g.num_nodes(); ++v) {
        double row = 0.0;
        for (int k = 0; k <= K; ++k) row += e.values(v, k);
        CHECK(sc.scores[v] == row);
      }
    }
  }
}

TEST_CASE("series convergence on ER graphs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = gen_erdos_renyi(20, 0.3, seed);
    CHECK(max_abs_diff(sc_truncated(g, 40).scores, sc_truncated(g, 50).scores) < 1e-9);
    // Once the K-th term is negligible, ten more terms change nothing.
    for (int K = 10; K <= 50; ++K) {
      if (cse(g, K).values.col(K).maxCoeff() >= 1e-12) continue;
      CHECK(max_abs_diff(sc_truncated(g, K).scores, sc_truncated(g, K + 10).scores) < 1e-9);
      break;
    }
    // The K=30 truncation error is bounded by the tail sum_{k>30} rho^k / k!.
    const double rho = spectral_radius(g);
    double tail = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 80; ++k) {
      term *= rho / k;
      if (k > 30) tail += term;
    }
    CHECK(max_abs_diff(sc_truncated(g, 30).scores, sc_reference(g).scores) <= tail * (1 + 1e-9) + 1e-12);
  }
}

TEST_CASE("katz index") {
  for (double s : katz(Graph("e", 3, {}), 0.5).scores) CHECK(s == 1.0);
  const auto c6 = katz(cycle_graph(6), 0.1);
  for (double s : c6.scores) CHECK(s == doctest::Approx(c6.scores[0]).epsilon(1e-12));
  const auto star = katz(star_graph(3), 0.1);
  CHECK(star.scores[0] > star.scores[1]);
  const Graph g = gen_erdos_renyi(15, 0.3, 4);
  const double l1 = spectral_radius(g);
  const double l1_ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.adjacency()).eigenvalues().maxCoeff();
  CHECK(l1 == doctest::Approx(l1_ref).epsilon(1e-8));
  const auto k = katz(g, 0.5 / l1);
  const Eigen::VectorXd ref = oracle::katz_closed_form(g, 0.5 / l1);
  for (int v = 0; v < g.num_nodes(); ++v) CHECK(k.scores[v] == doctest::Approx(ref[v]).epsilon(1e-10));
  CHECK(k.params.at("alpha") == 0.5 / l1);
  CHECK_THROWS_WITH_AS(katz(g, 1.01 / l1), doctest::Contains("Katz series divergent"), Error);
  CHECK_THROWS_AS(katz(g, 0.0), Error);
  const auto d = katz_default(g);
  CHECK(d.params.at("alpha") == doctest::Approx(0.9 / l1));
}

TEST_CASE("classical centralities") {
  const auto p3 = classical_centrality(path_graph(3), Measure::betweenness);
  CHECK(p3.scores == std::vector<double>{0.0, 1.0, 0.0});
  for (double s : classical_centrality(complete_graph(4), Measure::closeness).scores) CHECK(s == 1.0);
  for (double s : classical_centrality(cycle_graph(6), Measure::degree).scores) CHECK(s == 2.0);

  const Graph g("g", 5, {{0, 1}, {1, 2}});
  const auto cl = classical_centrality(g, Measure::closeness);
  CHECK(cl.scores[1] == 1.0);
  CHECK(cl.scores[0] == doctest::Approx(2.0 / 3.0));
  CHECK(cl.scores[3] == 0.0);

  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Graph er = gen_erdos_renyi(12, 0.25, seed);
    const auto b = classical_centrality(er, Measure::betweenness).scores;
    const auto ref = oracle::betweenness_by_pairs(er);
    for (int v = 0; v < er.num_nodes(); ++v) CHECK(b[v] == doctest::Approx(ref[v]).epsilon(1e-12));
    const auto c = classical_centrality(er, Measure::closeness).scores;
    const auto dist = oracle::distances(er);
    for (int v = 0; v < er.num_nodes(); ++v) {
      double total = 0.0;
      int reach = 0;
      for (int u = 0; u < er.num_nodes(); ++u)
        if (u != v && dist[v][u] > 0) {
          total += dist[v][u];
          ++reach;
        }
      CHECK(c[v] == doctest::Approx(reach ? reach / total : 0.0));
    }
  }
}

TEST_CASE("vertex-transitive graphs give uniform scores") {
  for (const Graph& g : {cycle_graph(7), complete_graph(5)}) {
    std::vector<CentralityReport> reports{sc_truncated(g), katz_default(g), classical_centrality(g, Measure::degree),
                                          classical_centrality(g, Measure::closeness),
                                          classical_centrality(g, Measure::betweenness)};
    for (const auto& r : reports)
      for (double s : r.scores) CHECK(std::abs(s - r.scores[0]) < 1e-12);
  }
}

TEST_CASE("centrality is equivariant under relabeling") {
  const Graph g = gen_erdos_renyi(13, 0.3, 21);
  const auto perm = reversed_perm(13);
  const Graph r = relabel(g, perm);
  for (Measure m : {Measure::subgraph, Measure::katz, Measure::degree, Measure::closeness, Measure::betweenness}) {
    auto score = [&](const Graph& x) {
      if (m == Measure::subgraph) return sc_truncated(x).scores;
      if (m == Measure::katz) return katz_default(x).scores;
      return classical_centrality(x, m).scores;
    };
    const auto a = score(g);
    const auto b = score(r);
    for (int v = 0; v < 13; ++v) CHECK(a[v] == doctest::Approx(b[perm[v]]).epsilon(1e-12));
  }
}

TEST_CASE("random-walk encodings") {
  const auto c6 = rwse(cycle_graph(6), 2);
  CHECK(c6.variant == EncodingVariant::rwse);
  for (int v = 0; v < 6; ++v) {
    CHECK(c6.values(v, 0) == 1.0);
    CHECK(c6.values(v, 2) == doctest::Approx(0.5));
  }
  const auto k2 = rwse(path_graph(2), 2);
  CHECK(k2.values(0, 2) == doctest::Approx(1.0));
  CHECK_THROWS_WITH_AS(rwse(Graph("g", 3, {{0, 1}}), 2), doctest::Contains("degree-0"), Error);
  CHECK_THROWS_AS(rwse(cycle_graph(4), 0), Error);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = gen_random_regular(10, 3, seed);
    const auto r = rwse(g, 8);
    const auto c = cse(g, 8);
    for (int v = 0; v < 10; ++v)
      for (int k = 0; k <= 8; ++k)
        CHECK(std::abs(r.values(v, k) - c.values(v, k) * std::tgamma(k + 1.0) / std::pow(3.0, k)) < 1e-12);
  }
}

TEST_CASE("closed-walk probabilities") {
  const auto k2 = closed_walk_prob(path_graph(2), 2);
  CHECK(k2.values(0, 2) == 1.0);
  CHECK(k2.values(1, 2) == 1.0);
  const auto c3 = closed_walk_prob(cycle_graph(3), 2);
  CHECK(c3.values(0, 2) == doctest::Approx(0.5));
  const Graph g = gen_erdos_renyi(10, 0.5, 3);
  const auto w = closed_walk_prob(g, 6);
  CHECK((w.values.col(0).array() == 1.0).all());
  CHECK((w.values.array() >= 0.0).all());
  CHECK((w.values.array() <= 1.0).all());
  CHECK_THROWS_WITH_AS(closed_walk_prob(Graph("g", 3, {{0, 1}}), 2), doctest::Contains("node 2"), Error);
}

TEST_CASE("json export") {
  const auto line = centrality_to_json_line("p", classical_centrality(path_graph(3), Measure::degree));
  CHECK(line.find(R"("id":"p")") != std::string::npos);
  CHECK(line.find(R"("measure":"degree")") != std::string::npos);
  CHECK(line.find(R"("scores":[1.0,2.0,1.0])") != std::string::npos);
  const auto enc = encoding_to_json_line("c", cse(cycle_graph(3), 2));
  CHECK(enc.find(R"("variant":"cse")") != std::string::npos);
  CHECK(enc.find(R"("values":[[1.0,0.0,1.0])") != std::string::npos);
  CHECK(parse_measure("sc") == Measure::subgraph);
  CHECK_THROWS_AS(parse_measure("pagerank"), Error);
}

}  // TEST_SUITE
