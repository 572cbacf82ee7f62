#include <doctest.h>

#include <set>

#include "isolab/relsim.hpp"

using namespace isolab;

namespace {

PartialInjection shift_mod(int n, int step) {
  PartialInjection p(n);
  for (int x = 0; x < n; ++x) p.add(x, (x + step) % n);
  return p;
}

}  // namespace

TEST_CASE("partial injections") {
  PartialInjection p(6);
  p.add(0, 3);
  p.add(1, 4);
  CHECK(p.domain_size() == 2);
  CHECK(p.apply(0) == 3);
  CHECK(p.apply(2) == -1);
  CHECK(p.preimage(4) == 1);
  CHECK(p.cost() == Rational(1, 3));
  CHECK_THROWS_AS(p.add(0, 5), std::invalid_argument);  // duplicate domain
  CHECK_THROWS_AS(p.add(5, 3), std::invalid_argument);  // duplicate image

  CHECK(PartialInjection::cycle(5).cost() == Rational(1));
}

TEST_CASE("orbit partitions") {
  Graphing one{8, {PartialInjection::cycle(8)}};
  CHECK(orbit_partition(one).classes == 1);

  // two disjoint 4-cycles
  Graphing two{8, {}};
  PartialInjection p(8);
  for (int x = 0; x < 4; ++x) p.add(x, (x + 1) % 4);
  for (int x = 4; x < 8; ++x) p.add(x, 4 + (x + 1 - 4) % 4);
  two.maps.push_back(p);
  CHECK(orbit_partition(two).classes == 2);

  // +2 mod 8 splits into parities
  Graphing evens{8, {shift_mod(8, 2)}};
  OrbitPartition part = orbit_partition(evens);
  CHECK(part.classes == 2);
  CHECK(part.same(0, 6));
  CHECK(!part.same(0, 1));
}

TEST_CASE("cost bookkeeping") {
  CHECK(Graphing{8, {PartialInjection::cycle(8)}}.cost() == Rational(1));
  CHECK(Graphing{8, {}}.cost() == Rational(0));

  HzeroGraphing hz = build_hzero_graphing(1000, 10, Rational(1, 100));
  CHECK(hz.graphing.cost() == Rational(101, 100));  // 1 + 10/1000
}

TEST_CASE("rokhlin towers") {
  RokhlinTower t12 = rokhlin_tower(PartialInjection::cycle(12), 3);
  CHECK(t12.residual.empty());
  for (const auto& level : t12.levels) CHECK(level.size() == 4);

  RokhlinTower t13 = rokhlin_tower(PartialInjection::cycle(13), 3);
  CHECK(t13.residual.size() == 1);  // 13 = 4*3 + 1

  RokhlinTower t8 = rokhlin_tower(PartialInjection::cycle(8), 1);
  CHECK(t8.levels[0].size() == 8);
  CHECK(t8.residual.empty());

  // phi(B_i) = B_{i+1}
  PartialInjection phi = PartialInjection::cycle(13);
  for (std::size_t i = 0; i + 1 < t13.levels.size(); ++i)
    for (std::size_t j = 0; j < t13.levels[i].size(); ++j)
      CHECK(phi.apply(t13.levels[i][j]) == t13.levels[i + 1][j]);

  CHECK_THROWS_AS(rokhlin_tower(PartialInjection::cycle(8), 4), std::invalid_argument);
  CHECK_THROWS_AS(rokhlin_tower(shift_mod(8, 2), 2), std::invalid_argument);  // two orbits
}

TEST_CASE("hzero construction") {
  HzeroGraphing hz = build_hzero_graphing(1000, 10, Rational(1, 100));
  CHECK(hz.psi_domain_size == 10);
  CHECK(hz.tower_height == 11);
  CHECK(orbit_partition(hz.graphing).classes == 1);
  CHECK(segment_intersection_ok(hz, 10));

  // ceil(0.01 * 100) = 1
  HzeroGraphing small = build_hzero_graphing(100, 4, Rational(1, 100));
  CHECK(small.psi_domain_size == 1);

  // eps too large for the tower level
  CHECK_THROWS_AS(build_hzero_graphing(100, 10, Rational(1, 2)), std::invalid_argument);
}

TEST_CASE("witness ratios") {
  const int n_points = 60;
  Graphing cyc{n_points, {PartialInjection::cycle(n_points)}};

  // orbit segments have 2 boundary edges each
  for (int n : {1, 4, 9}) {
    WitnessFamily w = cycle_power_witnesses(n_points, n);
    CHECK(witness_ratio(cyc, w) == Rational(2, n + 1));
  }

  // singleton fibers of the cycle have two incident edges
  WitnessFamily id_only = cycle_power_witnesses(n_points, 0);
  CHECK(witness_ratio(cyc, id_only) == Rational(2));

  // hzero stays under 4/(n+1)
  for (int n : {5, 10}) {
    HzeroGraphing hz = build_hzero_graphing(1000, n, Rational(1, 100));
    WitnessFamily w = cycle_power_witnesses(1000, n);
    CHECK(witness_ratio(hz.graphing, w) <= Rational(4, n + 1));
  }

  // disjointness violations are rejected
  WitnessFamily clash = cycle_power_witnesses(n_points, std::vector<int>{1, 1});
  CHECK_THROWS_AS(witness_ratio(cyc, clash), std::invalid_argument);

  // witnesses must stay inside the orbit relation
  Graphing halves{8, {shift_mod(8, 2)}};
  WitnessFamily odd = cycle_power_witnesses(8, std::vector<int>{1});
  CHECK_THROWS_AS(witness_ratio(halves, odd), std::invalid_argument);
}

TEST_CASE("cycle powers are pairwise disjoint") {
  // distinct powers of an N-cycle never agree pointwise below N
  for (int N : {7, 12, 30}) {
    WitnessFamily w = cycle_power_witnesses(N, N - 1);
    CHECK(pairwise_disjoint(w));
  }
  CHECK(!pairwise_disjoint(cycle_power_witnesses(8, std::vector<int>{3, 3})));
}

TEST_CASE("spanning treeings") {
  Graphing cyc{100, {PartialInjection::cycle(100)}};
  Graphing f = spanning_treeing(cyc);
  CHECK(f.cost() == Rational(99, 100));

  Graphing two{8, {}};
  PartialInjection p(8);
  for (int x = 0; x < 4; ++x) p.add(x, (x + 1) % 4);
  for (int x = 4; x < 8; ++x) p.add(x, 4 + (x + 1 - 4) % 4);
  two.maps.push_back(p);
  CHECK(spanning_treeing(two).cost() == Rational(6, 8));

  CHECK(spanning_treeing(Graphing{10, {}}).cost() == Rational(0));

  // acyclic: kept pairs never close a cycle, so cost = (N - classes)/N
  HzeroGraphing hz = build_hzero_graphing(200, 5, Rational(1, 50));
  Graphing hf = spanning_treeing(hz.graphing);
  CHECK(hf.cost() == Rational(199, 200));
}

TEST_CASE("main inequality worked example") {
  Graphing cyc{100, {PartialInjection::cycle(100)}};
  WitnessFamily w = cycle_power_witnesses(100, 9);
  MainIneqReport rep = check_main_inequality(cyc, w);
  CHECK(rep.cost_treeing == Rational(99, 100));  // 2*0.99 = 1.98
  CHECK(rep.ratio == Rational(2, 10));           // <= 2.2 total
  CHECK(rep.inequality_ok);
  CHECK(rep.degree_identity_ok);

  // trivial graphing: everything is a singleton class
  Graphing empty{10, {}};
  WitnessFamily id = cycle_power_witnesses(10, 0);
  MainIneqReport triv = check_main_inequality(empty, id);
  CHECK(triv.cost_treeing == Rational(0));
  CHECK(triv.inequality_ok);
}

TEST_CASE("main inequality on random graphings") {
  Rng rng(2024);
  for (int t = 0; t < 40; ++t) {
    Rng trial = rng.child(t);
    int N = 50 + static_cast<int>(trial.below(150));
    Graphing g = random_graphing(N, 1 + static_cast<int>(trial.below(3)), trial);
    int count = 1 + static_cast<int>(trial.below(6));
    std::set<int> powers;
    while (static_cast<int>(powers.size()) < count)
      powers.insert(static_cast<int>(trial.below(N)));
    WitnessFamily w = cycle_power_witnesses(N, {powers.begin(), powers.end()});
    MainIneqReport rep = check_main_inequality(g, w);
    CHECK(rep.inequality_ok);
    CHECK(rep.degree_identity_ok);
  }
}

TEST_CASE("hzero sweep scales like 4/(n+1) at fixed cost") {
  for (int N : {1000, 5000}) {
    for (int n : {5, 10, 50}) {
      HzeroGraphing hz = build_hzero_graphing(N, n, Rational(1, 100));
      CHECK(hz.graphing.cost() <= Rational(101, 100));
      WitnessFamily w = cycle_power_witnesses(N, n);
      CHECK(witness_ratio(hz.graphing, w) <= Rational(4, n + 1));
      CHECK(segment_intersection_ok(hz, n));
    }
  }
}

TEST_CASE("compress worked scenario") {
  // X of 200 points, Y the first half, K a cycle on Y, witnesses = powers
  const int N = 200, y_size = 100, n = 10, k = 5;
  std::vector<int> y(y_size);
  for (int i = 0; i < y_size; ++i) y[i] = i;
  Graphing k_on_y{N, {}};
  PartialInjection sigma(N);
  for (int i = 0; i < y_size; ++i) sigma.add(i, (i + 1) % y_size);
  k_on_y.maps.push_back(sigma);
  std::vector<std::vector<int>> w_s;
  for (int j = 1; j <= k; ++j) {
    std::vector<int> perm(y_size);
    for (int i = 0; i < y_size; ++i) perm[i] = (i + j) % y_size;
    w_s.push_back(perm);
  }

  Rational delta(1, 20);  // (N - y)/ (n N) = 100/2000
  CompressReport rep = compress(k_on_y, y, w_s, n, delta);
  CHECK(rep.witnesses_disjoint);
  CHECK(rep.witnesses_contained);
  CHECK(rep.per_point_ok);
  CHECK(rep.bound_ok);
  CHECK(rep.mu_y == Rational(1, 2));
  CHECK(rep.bound == rep.mu_y * rep.nu1_boundary_base + Rational(k, 20) + Rational(3, 2));

  // k >= n is rejected
  CHECK_THROWS_AS(compress(k_on_y, y, w_s, /*n=*/4, Rational(1, 8)), std::invalid_argument);
  // bad divisibility is rejected
  CHECK_THROWS_AS(compress(k_on_y, y, w_s, /*n=*/7, delta), std::invalid_argument);
}

TEST_CASE("compress degenerate case") {
  const int N = 60;
  std::vector<int> y(N);
  for (int i = 0; i < N; ++i) y[i] = i;
  Graphing k_on_y{N, {PartialInjection::cycle(N)}};
  std::vector<std::vector<int>> w_s;
  for (int j = 0; j < 3; ++j) {
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = (i + j) % N;
    w_s.push_back(perm);
  }
  CompressReport rep = compress(k_on_y, y, w_s, 10, Rational(0));
  CHECK(rep.degenerate);
  CHECK(rep.bound_ok);
  // the lifted measure equals the plain fiber boundary measure over X
  WitnessFamily w = cycle_power_witnesses(N, 2);
  Rational plain = witness_ratio(k_on_y, w) * Rational(3);  // ratio * |A| = nu(boundary)
  CHECK(rep.nu_boundary_lifted == plain);
}

TEST_CASE("random graphings respect measure preservation") {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    Rng trial = rng.child(t);
    Graphing g = random_graphing(64, 3, trial);
    for (const auto& m : g.maps) {
      std::set<int> dom, img;
      for (auto [x, yy] : m.pairs()) {
        dom.insert(x);
        img.insert(yy);
      }
      CHECK(dom.size() == img.size());  // injectivity = measure preservation
      CHECK(static_cast<int>(dom.size()) == m.domain_size());
    }
  }
}
