#include "isolab/forests.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "isolab/rng.hpp"

namespace isolab {

namespace {
constexpr double kZ99 = 2.5758293035489004;  // Phi^-1(0.995)
}

bool FiniteGraph::connected() const {
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [eid, u] : adj[v]) {
      (void)eid;
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

FiniteGraph torus_graph(int side, int dim) {
  if (side < 3) throw std::invalid_argument("torus_graph: side must be >= 3");
  if (dim != 1 && dim != 2) throw std::invalid_argument("torus_graph: dim must be 1 or 2");
  if (dim == 1) {
    FiniteGraph g(side);
    for (int i = 0; i < side; ++i) g.add_edge(i, (i + 1) % side);
    return g;
  }
  FiniteGraph g(side * side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      int v = r * side + c;
      g.add_edge(v, r * side + (c + 1) % side);
      g.add_edge(v, ((r + 1) % side) * side + c);
    }
  return g;
}

FiniteGraph ball_graph(const CayleyBall& ball) {
  FiniteGraph g(static_cast<int>(ball.vertices.size()));
  for (const auto& e : ball.edges) g.add_edge(e.u, e.v);
  g.base = 0;
  return g;
}

ForestSample wilson_ust(const FiniteGraph& graph, int root, std::uint64_t seed) {
  if (root < 0 || root >= graph.n) throw std::invalid_argument("wilson_ust: invalid root");
  if (!graph.connected()) throw std::invalid_argument("wilson_ust: graph is disconnected");

  Rng rng(seed);
  std::vector<char> in_tree(graph.n, 0);
  std::vector<int> next_edge(graph.n, -1), next_vertex(graph.n, -1);
  in_tree[root] = 1;

  for (int start = 0; start < graph.n; ++start) {
    int u = start;
    while (!in_tree[u]) {
      const auto& nbrs = graph.adj[u];
      auto [eid, w] = nbrs[rng.below(nbrs.size())];
      next_edge[u] = eid;
      next_vertex[u] = w;
      u = w;
    }
    u = start;
    while (!in_tree[u]) {
      in_tree[u] = 1;
      u = next_vertex[u];
    }
  }

  ForestSample sample;
  sample.n_vertices = graph.n;
  sample.seed = seed;
  sample.degree.assign(graph.n, 0);
  for (int v = 0; v < graph.n; ++v) {
    if (v == root) continue;
    int eid = next_edge[v];
    sample.edge_ids.push_back(eid);
    ++sample.degree[graph.edges[eid].first];
    ++sample.degree[graph.edges[eid].second];
  }
  std::sort(sample.edge_ids.begin(), sample.edge_ids.end());
  return sample;
}

ForestMode parse_forest_mode(const std::string& s) {
  if (s == "free") return ForestMode::Free;
  if (s == "wired") return ForestMode::Wired;
  throw std::invalid_argument("mode must be 'free' or 'wired', got '" + s + "'");
}

ForestSample ball_forest(const CayleyBall& ball, ForestMode mode, std::uint64_t seed) {
  if (ball.radius < 1) throw std::invalid_argument("ball_forest: radius must be >= 1");
  int n = static_cast<int>(ball.vertices.size());
  int n_int = ball.interior_count;
  if (mode == ForestMode::Free || n_int == n) return wilson_ust(ball_graph(ball), 0, seed);

  // Interior vertices keep their BFS ids; the outer sphere becomes `super`.
  int super = n_int;
  FiniteGraph g(n_int + 1);
  for (const auto& e : ball.edges) {
    int a = e.u < n_int ? e.u : super;
    int b = e.v < n_int ? e.v : super;
    if (a == b) continue;  // both ends on the outer sphere
    g.add_edge(a, b);
  }
  ForestSample tree = wilson_ust(g, super, seed);

  ForestSample sample;
  sample.n_vertices = n_int;
  sample.seed = seed;
  sample.degree.assign(n_int, 0);
  for (int eid : tree.edge_ids) {
    auto [a, b] = g.edges[eid];
    if (a == super || b == super) continue;
    sample.edge_ids.push_back(eid);
    ++sample.degree[a];
    ++sample.degree[b];
  }
  return sample;
}

DegreeStats degree_stats(const std::vector<int>& degrees) {
  DegreeStats s;
  s.samples = static_cast<long long>(degrees.size());
  if (s.samples == 0) throw std::invalid_argument("degree_stats: no samples");
  long long sum = 0;
  for (int d : degrees) sum += d;
  s.mean_degree = static_cast<double>(sum) / static_cast<double>(s.samples);
  if (s.samples > 1) {
    double acc = 0;
    for (int d : degrees) {
      double diff = d - s.mean_degree;
      acc += diff * diff;
    }
    s.variance = acc / static_cast<double>(s.samples - 1);
  }
  s.ci99_half = kZ99 * std::sqrt(s.variance / static_cast<double>(s.samples));
  s.cost_estimate = s.mean_degree / 2.0;
  s.beta1_estimate = s.mean_degree / 2.0 - 1.0;
  s.cost_ci99_half = s.ci99_half / 2.0;
  s.beta1_ci99_half = s.ci99_half / 2.0;
  return s;
}

DegreeStats estimate_beta1(const GroupSpec& spec, const GeneratingSet& gens, int radius,
                           ForestMode mode, long long n_samples, std::uint64_t seed, int jobs) {
  if (n_samples < 1) throw std::invalid_argument("estimate_beta1: need at least one sample");
  CayleyBall ball = cayley_ball(spec, gens, radius);
  std::vector<int> degrees(n_samples, 0);
  jobs = std::max(1, jobs);

  auto worker = [&](long long lo, long long hi) {
    for (long long i = lo; i < hi; ++i) {
      ForestSample f = ball_forest(ball, mode, Rng::child_seed(seed, static_cast<std::uint64_t>(i)));
      degrees[i] = f.degree[0];
    }
  };
  if (jobs == 1) {
    worker(0, n_samples);
  } else {
    std::vector<std::thread> threads;
    long long chunk = (n_samples + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      long long lo = w * chunk;
      long long hi = std::min(n_samples, lo + chunk);
      if (lo >= hi) break;
      threads.emplace_back(worker, lo, hi);
    }
    for (auto& t : threads) t.join();
  }
  return degree_stats(degrees);
}

bool check_rsf_inequality(const FiniteGraph& graph, const ForestSample& sample,
                          const std::vector<int>& A) {
  if (sample.n_vertices != graph.n)
    throw std::invalid_argument("check_rsf_inequality: sample does not match graph");
  std::vector<char> in(graph.n, 0);
  for (int v : A) {
    if (v < 0 || v >= graph.n) throw std::invalid_argument("check_rsf_inequality: bad vertex");
    in[v] = 1;
  }
  long long deg_sum = 0;
  for (int v : A) deg_sum += sample.degree[v];
  long long boundary = 0;
  for (const auto& [u, v] : graph.edges)
    if (in[u] != in[v]) ++boundary;
  return deg_sum <= 2 * static_cast<long long>(A.size()) + boundary;
}

bool check_rsf_inequality(const ForestSample& sample, const VertexSet& A) {
  const CayleyBall& ball = *A.ball;
  if (sample.n_vertices != static_cast<int>(ball.vertices.size()))
    throw std::invalid_argument(
        "check_rsf_inequality: sample was not drawn on this ball (free mode required)");
  long long deg_sum = 0;
  for (int v : A.members) deg_sum += sample.degree[v];
  return deg_sum <= 2 * static_cast<long long>(A.members.size()) + edge_boundary(A);
}

}  // namespace isolab
