#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isolab/rational.hpp"
#include "isolab/rng.hpp"

namespace isolab {

// Finite surrogate of a probability space: N atoms of mass 1/N.
struct FiniteSpace {
  int n;
  explicit FiniteSpace(int points) : n(points) {
    if (n < 2) throw std::invalid_argument("FiniteSpace: need at least 2 points");
  }
};

// Measure-preserving partial injection on {0,..,n-1}. Pairs (x,x) are legal
// (they cost measure but never contribute connectivity or fiber edges).
class PartialInjection {
 public:
  explicit PartialInjection(int n) : img_(n, -1), pre_(n, -1) {}

  static PartialInjection cycle(int n);  // x -> x+1 mod n
  static PartialInjection from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);

  void add(int x, int y);
  int n() const { return static_cast<int>(img_.size()); }
  int apply(int x) const { return img_[x]; }       // -1 outside the domain
  int preimage(int y) const { return pre_[y]; }
  int domain_size() const { return dom_size_; }
  Rational cost() const { return Rational(dom_size_, n()); }
  std::vector<std::pair<int, int>> pairs() const;

 private:
  std::vector<std::int32_t> img_, pre_;
  int dom_size_ = 0;
};

struct Graphing {
  int n = 0;
  std::vector<PartialInjection> maps;

  Rational cost() const;
};

struct OrbitPartition {
  std::vector<int> root;
  int classes = 0;
  int find(int x) const { return root[x]; }
  bool same(int x, int y) const { return root[x] == root[y]; }
};

OrbitPartition orbit_partition(const Graphing& g);

struct RokhlinTower {
  std::vector<std::vector<int>> levels;  // phi(levels[i]) = levels[i+1]
  std::vector<int> residual;
};

// phi must be a single full n-cycle; requires n_points >= 4*(height-1) so the
// residual has measure at most 1/4.
RokhlinTower rokhlin_tower(const PartialInjection& phi, int height);

struct HzeroGraphing {
  Graphing graphing;  // (phi, psi)
  int psi_domain_size = 0;
  int tower_height = 0;  // n + 1
  int level_size = 0;
};

// Cost-(1 + ceil(eps*N)/N) graphing of the full relation whose extra map
// meets every (n+1)-point orbit segment {x,..,phi^n(x)} at most once in its
// domain and once in its image.
HzeroGraphing build_hzero_graphing(int N, int n, const Rational& eps);

// Exhaustive check of the segment-intersection property for windows of
// length n+1 along the cycle.
bool segment_intersection_ok(const HzeroGraphing& hz, int n);

// Full automorphism whose graph lies inside the orbit relation.
struct SymmetricVertex {
  std::vector<std::int32_t> perm;
};

using WitnessFamily = std::vector<SymmetricVertex>;

WitnessFamily cycle_power_witnesses(int N, int max_power);  // {phi^0, .., phi^max_power}
WitnessFamily cycle_power_witnesses(int N, const std::vector<int>& powers);

bool pairwise_disjoint(const WitnessFamily& w);

// nu(boundary of A) / |A| for the fiberwise sets A^x = {(x, w(x)) : w in W},
// counting undirected fiber edges deduplicated per (pair, map).
Rational witness_ratio(const Graphing& g, const WitnessFamily& w);

// Deterministic per-class spanning forest, repackaged as partial injections.
Graphing spanning_treeing(const Graphing& g);

struct MainIneqReport {
  Rational cost_full;
  Rational cost_treeing;
  Rational ratio;  // witness ratio of the full graphing
  int classes = 0;
  bool inequality_ok = false;       // 2*cost(F) <= 2 + ratio
  bool degree_identity_ok = false;  // cost(F) == sum deg_F / (2N)
};

MainIneqReport check_main_inequality(const Graphing& g, const WitnessFamily& w);

Graphing random_graphing(int N, int extra_maps, Rng& rng);  // N-cycle plus random injections

struct CompressReport {
  int N = 0, n = 0, k = 0;
  Rational mu_y, delta;
  Rational nu_boundary_lifted;    // nu(boundary of A') in the extended graphing
  Rational nu1_boundary_base;     // normalized boundary measure of A over Y
  Rational bound;                 // mu(Y)*nu1 + k*delta + 3*mu(X \ Y)
  bool witnesses_disjoint = false;
  bool witnesses_contained = false;
  bool per_point_ok = false;
  bool bound_ok = false;
  bool degenerate = false;  // X \ Y empty
};

// Witness-transfer construction: extends a graphing K of the restriction to
// Y by a cyclic map on X\Y and a bridge Z -> Y_0, lifts each base witness
// psi_j to phi^j on the complement, and checks the transfer bound exactly.
// W_S entries are permutations of Y given in Y-local indices.
CompressReport compress(const Graphing& k_on_y, const std::vector<int>& y,
                        const std::vector<std::vector<int>>& w_s, int n, const Rational& delta);

}  // namespace isolab
