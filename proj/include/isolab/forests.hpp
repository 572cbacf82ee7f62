#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isolab/groups.hpp"
#include "isolab/isoperimetry.hpp"

namespace isolab {

// Undirected multigraph without loops. Parallel edges are honored by the
// walk (it picks uniformly among incident half-edges).
struct FiniteGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<std::pair<int, int>>> adj;  // vertex -> (edge id, other end)
  int base = 0;

  explicit FiniteGraph(int vertices = 0) : n(vertices), adj(vertices) {}

  int add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("FiniteGraph: loops are not allowed");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("FiniteGraph: endpoint out of range");
    int eid = static_cast<int>(edges.size());
    edges.emplace_back(u, v);
    adj[u].emplace_back(eid, v);
    adj[v].emplace_back(eid, u);
    return eid;
  }
  bool connected() const;
};

FiniteGraph torus_graph(int side, int dim);
FiniteGraph ball_graph(const CayleyBall& ball);  // same vertex and edge ids

struct ForestSample {
  int n_vertices = 0;
  std::vector<int> edge_ids;   // into the sampled graph's edge list
  std::vector<int> degree;     // per vertex
  std::uint64_t seed = 0;
};

// Uniform spanning tree by Wilson's loop-erased random walks; deterministic
// for a fixed seed.
ForestSample wilson_ust(const FiniteGraph& graph, int root, std::uint64_t seed);

enum class ForestMode { Free, Wired };
ForestMode parse_forest_mode(const std::string& s);

// Free: UST of the induced ball graph. Wired: UST of the ball with the outer
// sphere contracted to a single vertex, whose tree edges are then removed,
// leaving a forest on the interior (vertices 0..interior_count-1). A
// saturated ball has no outer sphere and both modes coincide.
ForestSample ball_forest(const CayleyBall& ball, ForestMode mode, std::uint64_t seed);

struct DegreeStats {
  long long samples = 0;
  double mean_degree = 0;
  double variance = 0;   // sample variance
  double ci99_half = 0;  // normal approximation
  double cost_estimate = 0;
  double beta1_estimate = 0;
  double cost_ci99_half = 0;
  double beta1_ci99_half = 0;
};

DegreeStats degree_stats(const std::vector<int>& degrees);

// Samples ball_forest n_samples times with derived per-replica seeds and
// aggregates the degree at the identity vertex.
DegreeStats estimate_beta1(const GroupSpec& spec, const GeneratingSet& gens, int radius,
                           ForestMode mode, long long n_samples, std::uint64_t seed, int jobs = 1);

// Per-sample consequence of acyclicity: sum of forest degrees over A is at
// most 2|A| + |boundary of A in the ambient graph|.
bool check_rsf_inequality(const FiniteGraph& graph, const ForestSample& sample,
                          const std::vector<int>& A);
bool check_rsf_inequality(const ForestSample& sample, const VertexSet& A);

}  // namespace isolab
