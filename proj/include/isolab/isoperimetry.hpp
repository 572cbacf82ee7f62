#pragma once

#include <optional>
#include <vector>

#include "isolab/groups.hpp"
#include "isolab/rational.hpp"

namespace isolab {

// A finite vertex subset of a ball, constrained to the interior so that its
// boundaries agree with those in the infinite Cayley graph.
struct VertexSet {
  const CayleyBall* ball = nullptr;
  std::vector<int> members;  // sorted, unique
};

VertexSet make_vertex_set(const CayleyBall& ball, std::vector<int> members);

long long edge_boundary(const VertexSet& A);
long long inner_boundary(const VertexSet& A);

// max over s in S of sqrt(|A delta As| / |A|).
double kazhdan_ratio(const VertexSet& A);

struct MinRatioResult {
  std::vector<int> members;
  Rational ratio;
  long long sets_visited = 0;
};

// Exact minimum of |edge boundary| / |A| over nonempty interior subsets of
// size <= max_size. A connected minimizer always exists (boundaries add over
// induced components and a mediant is >= the smaller ratio), so enumeration
// runs over connected induced subsets, each counted once via its smallest
// vertex. Ties resolve to the lexicographically smallest index set.
MinRatioResult min_ratio_exact(const CayleyBall& ball, int max_size,
                               long long node_budget = 20'000'000, int jobs = 1);

struct ProfileRow {
  int n;
  long long ball_size;
  long long boundary;
  Rational ratio;
};

// Boundary ratio of each full ball B(n), n = 1..r_max, computed inside B(r_max+1).
std::vector<ProfileRow> ratio_profile(const GroupSpec& spec, const GeneratingSet& gens, int r_max,
                                      std::size_t cap = 0);

struct GrowthEstimate {
  double nth_root = 0;  // |B(n)|^(1/n) at the largest radius
  double estimate = 1;  // last successive sphere ratio |S(i+1)|/|S(i)|; 1 if none
  std::vector<double> ball_ratios;
  std::vector<double> sphere_ratios;  // over consecutive nonzero spheres
};

// ball_sizes[i] = |B(i)| starting at i = 0; needs at least radii 0..2.
GrowthEstimate growth_rate(const std::vector<long long>& ball_sizes);

struct BoundaryReport {
  long long edge_boundary = 0;
  long long inner_boundary = 0;
  Rational ratio;         // edge boundary / |A|
  Rational folner_ratio;  // inner boundary / |A|
  double kazhdan_value = 0;
  bool has_isolated = false;  // member with no neighbor inside A
  bool sandwich_checked = false;
  bool sandwich_ok = false;
  bool kazhdan_ok = false;
  std::optional<double> growth_bound;  // (2|S|-1)(1 - 1/omega), informational
};

BoundaryReport check_comparisons(const VertexSet& A,
                                 std::optional<double> growth_estimate = std::nullopt);

}  // namespace isolab
