#include "isolab/relsim.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace isolab {

PartialInjection PartialInjection::cycle(int n) {
  PartialInjection p(n);
  for (int x = 0; x < n; ++x) p.add(x, (x + 1) % n);
  return p;
}

PartialInjection PartialInjection::from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  PartialInjection p(n);
  for (auto [x, y] : pairs) p.add(x, y);
  return p;
}

void PartialInjection::add(int x, int y) {
  if (x < 0 || y < 0 || x >= n() || y >= n())
    throw std::invalid_argument("PartialInjection: point out of range");
  if (img_[x] != -1) throw std::invalid_argument("PartialInjection: duplicate domain point");
  if (pre_[y] != -1) throw std::invalid_argument("PartialInjection: duplicate image point");
  img_[x] = y;
  pre_[y] = x;
  ++dom_size_;
}

std::vector<std::pair<int, int>> PartialInjection::pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(dom_size_);
  for (int x = 0; x < n(); ++x)
    if (img_[x] != -1) out.emplace_back(x, img_[x]);
  return out;
}

Rational Graphing::cost() const {
  Rational total(0);
  for (const auto& m : maps) total = total + m.cost();
  return total;
}

namespace {

struct UnionFind {
  std::vector<int> parent, size;
  explicit UnionFind(int n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }
};

}  // namespace

OrbitPartition orbit_partition(const Graphing& g) {
  UnionFind uf(g.n);
  for (const auto& m : g.maps) {
    if (m.n() != g.n) throw std::invalid_argument("orbit_partition: map size mismatch");
    for (auto [x, y] : m.pairs()) uf.unite(x, y);
  }
  OrbitPartition part;
  part.root.resize(g.n);
  std::vector<char> seen(g.n, 0);
  for (int x = 0; x < g.n; ++x) {
    part.root[x] = uf.find(x);
    if (!seen[part.root[x]]) {
      seen[part.root[x]] = 1;
      ++part.classes;
    }
  }
  return part;
}

RokhlinTower rokhlin_tower(const PartialInjection& phi, int height) {
  int n = phi.n();
  if (height < 1) throw std::invalid_argument("rokhlin_tower: height must be >= 1");
  if (n < 4 * (height - 1))
    throw std::invalid_argument("rokhlin_tower: need N >= 4*(height-1) for residual <= 1/4");
  if (phi.domain_size() != n)
    throw std::invalid_argument("rokhlin_tower: phi must be a full cycle");
  // walk the orbit from 0; a full n-cycle visits everything exactly once
  std::vector<int> orbit;
  orbit.reserve(n);
  int x = 0;
  for (int i = 0; i < n; ++i) {
    orbit.push_back(x);
    x = phi.apply(x);
  }
  if (x != 0 || std::set<int>(orbit.begin(), orbit.end()).size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("rokhlin_tower: phi must be a single n-cycle");

  RokhlinTower tower;
  tower.levels.assign(height, {});
  int blocks = n / height;
  for (int b = 0; b < blocks; ++b)
    for (int i = 0; i < height; ++i) tower.levels[i].push_back(orbit[b * height + i]);
  for (int i = blocks * height; i < n; ++i) tower.residual.push_back(orbit[i]);
  return tower;
}

HzeroGraphing build_hzero_graphing(int N, int n, const Rational& eps) {
  if (N < 2 || n < 1) throw std::invalid_argument("build_hzero_graphing: need N >= 2, n >= 1");
  if (!(Rational(0) < eps)) throw std::invalid_argument("build_hzero_graphing: eps must be > 0");
  // ceil(eps * N), exactly
  long long c = (eps.num * static_cast<long long>(N) + eps.den - 1) / eps.den;
  PartialInjection phi = PartialInjection::cycle(N);
  int height = n + 1;
  RokhlinTower tower = rokhlin_tower(phi, height);
  long long level = static_cast<long long>(tower.levels[0].size());
  if (c > level)
    throw std::invalid_argument("build_hzero_graphing: ceil(eps*N)=" + std::to_string(c) +
                                " does not fit the tower level of size " + std::to_string(level));

  PartialInjection psi(N);
  const std::vector<int>& b1 = tower.levels[0];
  for (long long j = 0; j < c; ++j)
    psi.add(b1[j], b1[(j + 1) % level]);

  HzeroGraphing hz;
  hz.graphing = Graphing{N, {phi, psi}};
  hz.psi_domain_size = static_cast<int>(c);
  hz.tower_height = height;
  hz.level_size = static_cast<int>(level);
  return hz;
}

bool segment_intersection_ok(const HzeroGraphing& hz, int n) {
  const PartialInjection& psi = hz.graphing.maps[1];
  int N = hz.graphing.n;
  // sliding window of n+1 consecutive cycle points
  auto ok_for = [&](auto member) {
    int count = 0;
    for (int i = 0; i <= n; ++i) count += member((0 + i) % N);
    if (count > 1) return false;
    for (int x = 1; x < N; ++x) {
      count -= member((x - 1 + N) % N);
      count += member((x + n) % N);
      if (count > 1) return false;
    }
    return true;
  };
  return ok_for([&](int p) { return psi.apply(p) != -1 ? 1 : 0; }) &&
         ok_for([&](int p) { return psi.preimage(p) != -1 ? 1 : 0; });
}

WitnessFamily cycle_power_witnesses(int N, int max_power) {
  std::vector<int> powers(max_power + 1);
  std::iota(powers.begin(), powers.end(), 0);
  return cycle_power_witnesses(N, powers);
}

WitnessFamily cycle_power_witnesses(int N, const std::vector<int>& powers) {
  WitnessFamily w;
  for (int p : powers) {
    SymmetricVertex sv;
    sv.perm.resize(N);
    for (int x = 0; x < N; ++x) sv.perm[x] = static_cast<std::int32_t>((x + p) % N);
    w.push_back(std::move(sv));
  }
  return w;
}

bool pairwise_disjoint(const WitnessFamily& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      for (std::size_t x = 0; x < w[i].perm.size(); ++x)
        if (w[i].perm[x] == w[j].perm[x]) return false;
  return true;
}

namespace {

// Undirected fiber edges, deduplicated per (unordered pair, map index).
std::vector<std::vector<int>> fiber_adjacency(const Graphing& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (std::size_t i = 0; i < g.maps.size(); ++i) {
    std::set<std::pair<int, int>> seen;
    for (auto [x, y] : g.maps[i].pairs()) {
      if (x == y) continue;  // loop pair: no fiber edge
      auto key = std::minmax(x, y);
      if (!seen.insert(key).second) continue;
      adj[x].push_back(y);
      adj[y].push_back(x);
    }
  }
  return adj;
}

// Sum over the selected points x of |boundary of A^x|, where A^x is the
// fiber set {w(x)}. perms[j][x] < 0 marks x outside witness j's domain; a
// point is counted only when every witness is defined there.
long long fiber_boundary_sum(const Graphing& g, const std::vector<std::vector<std::int32_t>>& perms,
                             std::vector<char>* counted = nullptr) {
  std::vector<std::vector<int>> adj = fiber_adjacency(g);
  std::vector<int> stamp(g.n, -1);
  long long total = 0;
  for (int x = 0; x < g.n; ++x) {
    bool defined = true;
    for (const auto& p : perms)
      if (p[x] < 0) {
        defined = false;
        break;
      }
    if (!defined) continue;
    if (counted != nullptr) (*counted)[x] = 1;
    for (const auto& p : perms) stamp[p[x]] = x;
    for (const auto& p : perms) {
      int a = p[x];
      for (int b : adj[a])
        if (stamp[b] != x) ++total;
    }
  }
  return total;
}

void validate_witnesses(const Graphing& g, const WitnessFamily& w) {
  if (w.empty()) throw std::invalid_argument("witness family is empty");
  for (const auto& sv : w) {
    if (static_cast<int>(sv.perm.size()) != g.n)
      throw std::invalid_argument("witness size mismatch");
    std::vector<char> hit(g.n, 0);
    for (int x = 0; x < g.n; ++x) {
      int y = sv.perm[x];
      if (y < 0 || y >= g.n || hit[y]) throw std::invalid_argument("witness is not a permutation");
      hit[y] = 1;
    }
  }
  if (!pairwise_disjoint(w))
    throw std::invalid_argument("witnesses are not pairwise disjoint");
  OrbitPartition part = orbit_partition(g);
  for (const auto& sv : w)
    for (int x = 0; x < g.n; ++x)
      if (!part.same(x, sv.perm[x]))
        throw std::invalid_argument("witness graph leaves the orbit relation");
}

}  // namespace

Rational witness_ratio(const Graphing& g, const WitnessFamily& w) {
  validate_witnesses(g, w);
  std::vector<std::vector<std::int32_t>> perms;
  for (const auto& sv : w) perms.push_back(sv.perm);
  long long total = fiber_boundary_sum(g, perms);
  return Rational(total, static_cast<long long>(g.n) * static_cast<long long>(w.size()));
}

Graphing spanning_treeing(const Graphing& g) {
  UnionFind uf(g.n);
  Graphing forest;
  forest.n = g.n;
  for (const auto& m : g.maps) {
    PartialInjection kept(g.n);
    for (auto [x, y] : m.pairs())
      if (x != y && uf.unite(x, y)) kept.add(x, y);
    forest.maps.push_back(std::move(kept));
  }
  return forest;
}

MainIneqReport check_main_inequality(const Graphing& g, const WitnessFamily& w) {
  MainIneqReport rep;
  Graphing forest = spanning_treeing(g);
  OrbitPartition part = orbit_partition(g);
  rep.classes = part.classes;
  rep.cost_full = g.cost();
  rep.cost_treeing = forest.cost();
  rep.ratio = witness_ratio(g, w);
  rep.inequality_ok = Rational(2) * rep.cost_treeing <= Rational(2) + rep.ratio;

  long long degree_sum = 0;
  for (const auto& m : forest.maps)
    degree_sum += 2 * m.domain_size();  // every kept pair has two distinct ends
  rep.degree_identity_ok =
      rep.cost_treeing == Rational(degree_sum, 2LL * g.n) &&
      rep.cost_treeing == Rational(g.n - part.classes, g.n);
  return rep;
}

Graphing random_graphing(int N, int extra_maps, Rng& rng) {
  Graphing g;
  g.n = N;
  g.maps.push_back(PartialInjection::cycle(N));
  for (int m = 0; m < extra_maps; ++m) {
    int dom = static_cast<int>(rng.below(static_cast<std::uint64_t>(N) + 1));
    std::vector<int> xs(N), ys(N);
    std::iota(xs.begin(), xs.end(), 0);
    std::iota(ys.begin(), ys.end(), 0);
    // partial Fisher-Yates for both sides
    PartialInjection p(N);
    for (int i = 0; i < dom; ++i) {
      std::swap(xs[i], xs[i + rng.below(static_cast<std::uint64_t>(N - i))]);
      std::swap(ys[i], ys[i + rng.below(static_cast<std::uint64_t>(N - i))]);
      p.add(xs[i], ys[i]);
    }
    g.maps.push_back(std::move(p));
  }
  return g;
}

CompressReport compress(const Graphing& k_on_y, const std::vector<int>& y,
                        const std::vector<std::vector<int>>& w_s, int n, const Rational& delta) {
  const int N = k_on_y.n;
  CompressReport rep;
  rep.N = N;
  rep.n = n;
  rep.k = static_cast<int>(w_s.size());
  rep.delta = delta;

  std::vector<char> in_y(N, 0);
  for (int v : y) {
    if (v < 0 || v >= N) throw std::invalid_argument("compress: Y out of range");
    if (in_y[v]) throw std::invalid_argument("compress: Y has duplicates");
    in_y[v] = 1;
  }
  const long long y_size = static_cast<long long>(y.size());
  if (y_size == 0) throw std::invalid_argument("compress: Y must be non-negligible");
  rep.mu_y = Rational(y_size, N);

  for (const auto& m : k_on_y.maps)
    for (auto [a, b] : m.pairs())
      if (!in_y[a] || !in_y[b])
        throw std::invalid_argument("compress: graphing must be supported on Y");

  if (w_s.empty()) throw std::invalid_argument("compress: empty witness family");
  for (const auto& p : w_s)
    if (static_cast<long long>(p.size()) != y_size)
      throw std::invalid_argument("compress: witness must permute Y");

  std::vector<int> comp;
  for (int x = 0; x < N; ++x)
    if (!in_y[x]) comp.push_back(x);

  // base witnesses as global permutations of X, undefined off Y
  const int k = rep.k;
  std::vector<std::vector<std::int32_t>> base(k, std::vector<std::int32_t>(N, -1));
  for (int j = 0; j < k; ++j) {
    std::vector<char> hit(y_size, 0);
    for (long long i = 0; i < y_size; ++i) {
      int img = w_s[j][i];
      if (img < 0 || img >= y_size || hit[img])
        throw std::invalid_argument("compress: witness is not a permutation of Y");
      hit[img] = 1;
      base[j][y[i]] = static_cast<std::int32_t>(y[img]);
    }
  }
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      for (int v : y)
        if (base[a][v] == base[b][v])
          throw std::invalid_argument("compress: base witnesses are not pairwise disjoint");
  OrbitPartition base_orbits = orbit_partition(k_on_y);
  for (int j = 0; j < k; ++j)
    for (int v : y)
      if (!base_orbits.same(v, base[j][v]))
        throw std::invalid_argument("compress: base witness leaves the orbit relation of K");

  // nu1(boundary of A) over (Y, mu/mu(Y))
  long long base_boundary = fiber_boundary_sum(k_on_y, base);
  rep.nu1_boundary_base = Rational(base_boundary, y_size);

  if (comp.empty()) {
    rep.degenerate = true;
    rep.nu_boundary_lifted = Rational(base_boundary, N);
    rep.bound = rep.mu_y * rep.nu1_boundary_base;
    rep.witnesses_disjoint = rep.witnesses_contained = true;
    rep.per_point_ok = true;
    rep.bound_ok = rep.nu_boundary_lifted <= rep.bound;
    return rep;
  }

  if (n <= k)
    throw std::invalid_argument("compress: need n > k (witness count " + std::to_string(k) +
                                ", n = " + std::to_string(n) + ")");
  long long z_size = delta.num * static_cast<long long>(N);
  if (z_size % delta.den != 0)
    throw std::invalid_argument("compress: delta*N is not an integer");
  z_size /= delta.den;
  if (z_size < 1 || static_cast<long long>(comp.size()) != static_cast<long long>(n) * z_size)
    throw std::invalid_argument("compress: X\\Y must split into n parts of size delta*N");
  if (z_size > y_size) throw std::invalid_argument("compress: Z does not fit inside Y");

  // parts Y_0..Y_{n-1} of the complement; phi cycles them, theta bridges Z -> Y_0
  auto part_point = [&](int part, long long j) { return comp[part * z_size + j]; };
  PartialInjection phi(N);
  for (int i = 0; i < n; ++i)
    for (long long j = 0; j < z_size; ++j)
      phi.add(part_point(i, j), part_point((i + 1) % n, j));
  PartialInjection theta(N);
  for (long long j = 0; j < z_size; ++j) theta.add(y[j], part_point(0, j));

  Graphing lifted = k_on_y;
  lifted.maps.push_back(theta);
  lifted.maps.push_back(phi);

  // lifted witnesses psi'_j = phi^j on the complement, psi_j on Y (j = 1..k)
  std::vector<std::vector<std::int32_t>> primed(k, std::vector<std::int32_t>(N, -1));
  for (int j = 0; j < k; ++j) {
    for (int x = 0; x < N; ++x)
      if (in_y[x]) primed[j][x] = base[j][x];
    for (int i = 0; i < n; ++i)
      for (long long l = 0; l < z_size; ++l)
        primed[j][part_point(i, l)] = static_cast<std::int32_t>(part_point((i + j + 1) % n, l));
  }

  rep.witnesses_disjoint = true;
  for (int a = 0; a < k && rep.witnesses_disjoint; ++a)
    for (int b = a + 1; b < k && rep.witnesses_disjoint; ++b)
      for (int x = 0; x < N; ++x)
        if (primed[a][x] == primed[b][x]) {
          rep.witnesses_disjoint = false;
          break;
        }

  OrbitPartition lifted_orbits = orbit_partition(lifted);
  rep.witnesses_contained = true;
  for (int j = 0; j < k && rep.witnesses_contained; ++j)
    for (int x = 0; x < N; ++x)
      if (!lifted_orbits.same(x, primed[j][x])) {
        rep.witnesses_contained = false;
        break;
      }

  // per-point bounds from the construction
  std::vector<char> in_z(N, 0);
  for (long long j = 0; j < z_size; ++j) in_z[y[j]] = 1;
  std::vector<std::vector<int>> base_adj = fiber_adjacency(k_on_y);
  std::vector<std::vector<int>> lifted_adj = fiber_adjacency(lifted);
  std::vector<int> stamp(N, -1);
  rep.per_point_ok = true;
  long long lifted_total = 0;
  for (int x = 0; x < N; ++x) {
    for (int j = 0; j < k; ++j) stamp[primed[j][x]] = x;
    long long bnd = 0;
    for (int j = 0; j < k; ++j)
      for (int b : lifted_adj[primed[j][x]])
        if (stamp[b] != x) ++bnd;
    lifted_total += bnd;
    if (in_y[x]) {
      long long base_bnd = 0;
      for (int j = 0; j < k; ++j) stamp[base[j][x]] = N + x;  // fresh stamp value
      for (int j = 0; j < k; ++j)
        for (int b : base_adj[base[j][x]])
          if (stamp[b] != N + x) ++base_bnd;
      long long into_z = 0;
      for (int j = 0; j < k; ++j)
        if (in_z[base[j][x]]) ++into_z;
      if (bnd > base_bnd + into_z) rep.per_point_ok = false;
    } else {
      if (bnd > 3) rep.per_point_ok = false;
    }
  }

  rep.nu_boundary_lifted = Rational(lifted_total, N);
  rep.bound = rep.mu_y * rep.nu1_boundary_base + Rational(k) * delta +
              Rational(3) * Rational(static_cast<long long>(comp.size()), N);
  rep.bound_ok = rep.nu_boundary_lifted <= rep.bound;
  return rep;
}

}  // namespace isolab
