#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "isolab/forests.hpp"
#include "isolab/rng.hpp"

using namespace isolab;

namespace {

// Brute-force spanning tree enumeration: all (|V|-1)-subsets of edges that
// connect the graph. Independent of the sampler.
std::vector<std::vector<int>> all_spanning_trees(const FiniteGraph& g) {
  int m = static_cast<int>(g.edges.size());
  std::vector<std::vector<int>> trees;
  std::vector<int> pick;
  auto connects = [&](const std::vector<int>& subset) {
    std::vector<int> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int merges = 0;
    for (int eid : subset) {
      int a = find(g.edges[eid].first), b = find(g.edges[eid].second);
      if (a != b) {
        parent[a] = b;
        ++merges;
      }
    }
    return merges == g.n - 1;
  };
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(pick.size()) == g.n - 1) {
      if (connects(pick)) trees.push_back(pick);
      return;
    }
    if (next >= m) return;
    if (m - next < g.n - 1 - static_cast<int>(pick.size())) return;
    pick.push_back(next);
    rec(next + 1);
    pick.pop_back();
    rec(next + 1);
  };
  rec(0);
  return trees;
}

double chi_square_uniform(const std::map<std::vector<int>, long long>& observed,
                          long long n_trees, long long samples) {
  double expected = static_cast<double>(samples) / static_cast<double>(n_trees);
  double stat = 0;
  long long seen_total = 0;
  for (const auto& [key, count] : observed) {
    double diff = static_cast<double>(count) - expected;
    stat += diff * diff / expected;
    seen_total += count;
  }
  long long missing = n_trees - static_cast<long long>(observed.size());
  stat += static_cast<double>(missing) * expected;  // zero-count cells
  REQUIRE(seen_total == samples);
  return stat;
}

FiniteGraph triangle() {
  FiniteGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  return g;
}

FiniteGraph random_graph(int n, double p, Rng& rng) {
  FiniteGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) g.add_edge(u, v);
  // force connectivity with a random spanning path
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(order[i], order[i + 1]);
  return g;
}

}  // namespace

TEST_CASE("torus graphs") {
  FiniteGraph c5 = torus_graph(5, 1);
  CHECK(c5.n == 5);
  CHECK(c5.edges.size() == 5);

  FiniteGraph t3 = torus_graph(3, 2);
  CHECK(t3.n == 9);
  CHECK(t3.edges.size() == 18);
  CHECK(t3.connected());

  CHECK_THROWS_AS(torus_graph(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(torus_graph(5, 3), std::invalid_argument);
}

TEST_CASE("wilson sampler basics") {
  FiniteGraph tri = triangle();
  ForestSample s = wilson_ust(tri, 0, 42);
  CHECK(s.edge_ids.size() == 2);
  // handshake: any spanning tree has degree sum 2(|V|-1)
  CHECK(std::accumulate(s.degree.begin(), s.degree.end(), 0) == 4);

  // a tree is its own unique spanning tree
  FiniteGraph path(4);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  path.add_edge(2, 3);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    ForestSample t = wilson_ust(path, 0, seed);
    CHECK(t.edge_ids == std::vector<int>{0, 1, 2});
  }

  // determinism and replica independence
  FiniteGraph t4 = torus_graph(4, 2);
  CHECK(wilson_ust(t4, 0, 7).edge_ids == wilson_ust(t4, 0, 7).edge_ids);
  CHECK(wilson_ust(t4, 0, Rng::child_seed(7, 0)).edge_ids !=
        wilson_ust(t4, 0, Rng::child_seed(7, 1)).edge_ids);

  FiniteGraph disconnected(4);
  disconnected.add_edge(0, 1);
  disconnected.add_edge(2, 3);
  CHECK_THROWS_AS(wilson_ust(disconnected, 0, 1), std::invalid_argument);
}

TEST_CASE("wilson uniformity on the triangle") {
  FiniteGraph tri = triangle();
  auto trees = all_spanning_trees(tri);
  REQUIRE(trees.size() == 3);

  const long long samples = 10'000;
  std::map<std::vector<int>, long long> counts;
  for (long long i = 0; i < samples; ++i)
    ++counts[wilson_ust(tri, 0, Rng::child_seed(271, i)).edge_ids];
  CHECK(counts.size() == 3);
  double stat = chi_square_uniform(counts, 3, samples);
  CHECK(stat < 13.8155105579643);  // chi-square 0.999 quantile, df 2
}

TEST_CASE("parallel edges are honored") {
  FiniteGraph two_gon(2);
  two_gon.add_edge(0, 1);
  two_gon.add_edge(0, 1);
  long long first = 0;
  const long long samples = 20'000;
  for (long long i = 0; i < samples; ++i)
    if (wilson_ust(two_gon, 0, Rng::child_seed(99, i)).edge_ids[0] == 0) ++first;
  // both parallel edges equally likely: 4-sigma band around 1/2
  double dev = std::abs(static_cast<double>(first) - samples / 2.0) / std::sqrt(samples * 0.25);
  CHECK(dev < 4.0);
}

TEST_CASE("cycle degree distribution") {
  // removing one uniform edge from C5: endpoint degree 1 w.p. 2/5
  FiniteGraph c5 = torus_graph(5, 1);
  const long long samples = 20'000;
  long long deg1 = 0;
  for (long long i = 0; i < samples; ++i) {
    ForestSample s = wilson_ust(c5, 0, Rng::child_seed(5150, i));
    if (s.degree[0] == 1) ++deg1;
  }
  double p = static_cast<double>(deg1) / samples;
  double sigma = std::sqrt(0.4 * 0.6 / samples);
  CHECK(std::abs(p - 0.4) < 4 * sigma);
}

TEST_CASE("ball forests") {
  GroupSpec f2 = parse_group_spec("F2");
  GeneratingSet s = default_generators(f2);
  CayleyBall ball = cayley_ball(f2, s, 3);

  ForestSample free_sample = ball_forest(ball, ForestMode::Free, 1);
  CHECK(free_sample.edge_ids.size() == ball.vertices.size() - 1);  // the tree itself
  CHECK(free_sample.degree[0] == 4);

  ForestSample wired_sample = ball_forest(ball, ForestMode::Wired, 1);
  CHECK(wired_sample.n_vertices == ball.interior_count);
  CHECK(wired_sample.degree[0] <= 4);

  GroupSpec z = parse_group_spec("Z");
  CayleyBall zball = cayley_ball(z, default_generators(z), 4);
  ForestSample zfree = ball_forest(zball, ForestMode::Free, 9);
  CHECK(zfree.degree[0] == 2);

  // saturated ball: both modes coincide
  GroupSpec zm = parse_group_spec("Zmod5");
  CayleyBall mball = cayley_ball(zm, default_generators(zm), 6);
  ForestSample a = ball_forest(mball, ForestMode::Free, 4);
  ForestSample b = ball_forest(mball, ForestMode::Wired, 4);
  CHECK(a.edge_ids == b.edge_ids);
}

TEST_CASE("beta1 estimators") {
  GroupSpec f2 = parse_group_spec("F2");
  DegreeStats f2s = estimate_beta1(f2, default_generators(f2), 4, ForestMode::Free, 50, 7);
  CHECK(f2s.beta1_estimate == 1.0);
  CHECK(f2s.variance == 0.0);
  CHECK(f2s.cost_estimate == 2.0);

  GroupSpec z = parse_group_spec("Z");
  DegreeStats zs = estimate_beta1(z, default_generators(z), 5, ForestMode::Free, 50, 7);
  CHECK(zs.beta1_estimate == 0.0);
  CHECK(zs.variance == 0.0);

  // estimator identities transform the CI consistently
  GroupSpec z2 = parse_group_spec("Z^2");
  DegreeStats zz = estimate_beta1(z2, default_generators(z2), 4, ForestMode::Free, 400, 13);
  CHECK(zz.beta1_estimate == doctest::Approx(zz.mean_degree / 2 - 1));
  CHECK(zz.cost_estimate == doctest::Approx(zz.mean_degree / 2));
  CHECK(zz.beta1_ci99_half == doctest::Approx(zz.ci99_half / 2));

  // parallel sampling is deterministic and matches sequential
  DegreeStats par = estimate_beta1(z2, default_generators(z2), 4, ForestMode::Free, 400, 13, 4);
  CHECK(par.mean_degree == zz.mean_degree);
  CHECK(par.variance == zz.variance);
}

TEST_CASE("transitive mean degree identity") {
  // every spanning tree of a finite graph has average degree 2(|V|-1)/|V|;
  // on a transitive graph uniformity makes that the per-vertex expectation
  FiniteGraph t4 = torus_graph(4, 2);
  const long long samples = 4'000;
  std::vector<int> degs(samples);
  for (long long i = 0; i < samples; ++i)
    degs[i] = wilson_ust(t4, 0, Rng::child_seed(31, i)).degree[0];
  DegreeStats stats = degree_stats(degs);
  double expected = 2.0 * (16 - 1) / 16.0;
  double se = std::sqrt(stats.variance / samples);
  CHECK(std::abs(stats.mean_degree - expected) < 4 * se);
}

TEST_CASE("per-sample forest inequality") {
  Rng rng(1234);
  for (int trial = 0; trial < 5; ++trial) {
    FiniteGraph g = random_graph(10, 0.3, rng);
    for (int rep = 0; rep < 20; ++rep) {
      ForestSample s = wilson_ust(g, 0, Rng::child_seed(trial * 100, rep));
      // all subsets of <= 4 vertices
      for (std::uint64_t mask = 1; mask < (1u << 10); ++mask) {
        if (__builtin_popcountll(mask) > 4) continue;
        std::vector<int> a;
        for (int v = 0; v < 10; ++v)
          if (mask & (1u << v)) a.push_back(v);
        CHECK(check_rsf_inequality(g, s, a));
      }
    }
  }

  // ball witness version
  GroupSpec f2 = parse_group_spec("F2");
  CayleyBall ball = cayley_ball(f2, default_generators(f2), 3);
  ForestSample s = ball_forest(ball, ForestMode::Free, 77);
  std::vector<int> b1;
  for (int v = 0; v < static_cast<int>(ball.vertices.size()); ++v)
    if (ball.sphere[v] <= 1) b1.push_back(v);
  VertexSet a = make_vertex_set(ball, b1);
  CHECK(check_rsf_inequality(s, a));
  // the unique tree on B(1): degree sum 20 <= 2*5 + 12
  long long deg_sum = 0;
  for (int v : b1) deg_sum += s.degree[v];
  CHECK(deg_sum == 20);
}

TEST_CASE("wired samples are forests") {
  GroupSpec z2 = parse_group_spec("Z^2");
  CayleyBall ball = cayley_ball(z2, default_generators(z2), 5);
  int n_int = ball.interior_count;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    ForestSample s = ball_forest(ball, ForestMode::Wired, seed);
    // rebuild the wired edge list to resolve the sampled ids
    FiniteGraph wired(n_int + 1);
    for (const auto& e : ball.edges) {
      int a = e.u < n_int ? e.u : n_int;
      int b = e.v < n_int ? e.v : n_int;
      if (a != b) wired.add_edge(a, b);
    }
    std::vector<int> parent(n_int);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int eid : s.edge_ids) {
      auto [a, b] = wired.edges[eid];
      int ra = find(a), rb = find(b);
      CHECK(ra != rb);  // acyclic
      parent[ra] = rb;
    }
  }
}
