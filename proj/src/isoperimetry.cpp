#include "isolab/isoperimetry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace isolab {

VertexSet make_vertex_set(const CayleyBall& ball, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (int v : members) {
    if (v < 0 || v >= static_cast<int>(ball.vertices.size()))
      throw std::invalid_argument("vertex set: index out of range");
    if (!ball.interior(v))
      throw std::invalid_argument("vertex set: member on the outermost sphere");
  }
  return VertexSet{&ball, std::move(members)};
}

namespace {

std::vector<char> membership(const VertexSet& A) {
  std::vector<char> in(A.ball->vertices.size(), 0);
  for (int v : A.members) in[v] = 1;
  return in;
}

}  // namespace

long long edge_boundary(const VertexSet& A) {
  const CayleyBall& ball = *A.ball;
  std::vector<char> in = membership(A);
  long long count = 0;
  for (int v : A.members)
    for (int eid : ball.incident[v])
      if (!in[ball.other_end(eid, v)]) ++count;
  return count;
}

long long inner_boundary(const VertexSet& A) {
  const CayleyBall& ball = *A.ball;
  std::vector<char> in = membership(A);
  long long count = 0;
  for (int v : A.members) {
    for (int eid : ball.incident[v]) {
      if (!in[ball.other_end(eid, v)]) {
        ++count;
        break;
      }
    }
  }
  return count;
}

double kazhdan_ratio(const VertexSet& A) {
  if (A.members.empty()) throw std::invalid_argument("kazhdan_ratio: empty set");
  const CayleyBall& ball = *A.ball;
  std::vector<char> in = membership(A);
  long long worst = 0;  // |A delta As|
  for (std::size_t j = 0; j < ball.gens.elements.size(); ++j) {
    long long stay = 0;
    for (int v : A.members)
      if (in[ball.step(v, static_cast<int>(j))]) ++stay;
    long long sym_diff = 2 * (static_cast<long long>(A.members.size()) - stay);
    worst = std::max(worst, sym_diff);
  }
  return std::sqrt(static_cast<double>(worst) / static_cast<double>(A.members.size()));
}

namespace {

// Connected induced subsets containing `root` as their smallest vertex,
// binary include/exclude branching over a frontier of candidate neighbors.
struct ConnectedEnumerator {
  const CayleyBall& ball;
  int max_size;
  std::atomic<long long>* visited;
  long long budget;

  std::vector<char> in_set, banned;
  std::vector<int> set_members;
  long long boundary = 0;

  long long best_boundary = -1;
  long long best_size = 1;
  std::vector<int> best_members;

  ConnectedEnumerator(const CayleyBall& b, int m, std::atomic<long long>* counter, long long bud)
      : ball(b), max_size(m), visited(counter), budget(bud) {
    in_set.assign(ball.vertices.size(), 0);
    banned.assign(ball.vertices.size(), 0);
  }

  void consider() {
    long long count = visited->fetch_add(1, std::memory_order_relaxed) + 1;
    if (count > budget)
      throw ResourceError("min_ratio_exact: enumeration budget exceeded (" +
                          std::to_string(budget) + " sets)");
    long long size = static_cast<long long>(set_members.size());
    if (best_boundary < 0) {
      best_boundary = boundary;
      best_size = size;
      best_members = set_members;
      std::sort(best_members.begin(), best_members.end());
      return;
    }
    __int128 lhs = static_cast<__int128>(boundary) * best_size;
    __int128 rhs = static_cast<__int128>(best_boundary) * size;
    if (lhs > rhs) return;
    std::vector<int> sorted = set_members;
    std::sort(sorted.begin(), sorted.end());
    if (lhs == rhs && !std::lexicographical_compare(sorted.begin(), sorted.end(),
                                                    best_members.begin(), best_members.end()))
      return;
    best_boundary = boundary;
    best_size = size;
    best_members = std::move(sorted);
  }

  void include(int v) {
    long long into_set = 0;
    for (int eid : ball.incident[v])
      if (in_set[ball.other_end(eid, v)]) ++into_set;
    boundary += ball.degree(v) - 2 * into_set;
    in_set[v] = 1;
    set_members.push_back(v);
  }

  void exclude(int v) {
    in_set[v] = 0;
    set_members.pop_back();
    long long into_set = 0;
    for (int eid : ball.incident[v])
      if (in_set[ball.other_end(eid, v)]) ++into_set;
    boundary -= ball.degree(v) - 2 * into_set;
  }

  void grow(int root, std::vector<int> frontier) {
    consider();
    if (static_cast<int>(set_members.size()) == max_size) return;
    std::vector<int> banned_here;
    while (!frontier.empty()) {
      int v = frontier.back();
      frontier.pop_back();
      if (in_set[v] || banned[v]) continue;  // stale entry
      std::vector<int> child = frontier;
      include(v);
      for (int eid : ball.incident[v]) {
        int u = ball.other_end(eid, v);
        if (u > root && ball.interior(u) && !in_set[u] && !banned[u]) child.push_back(u);
      }
      grow(root, std::move(child));
      exclude(v);
      banned[v] = 1;
      banned_here.push_back(v);
    }
    for (int v : banned_here) banned[v] = 0;
  }

  void run_root(int root) {
    include(root);
    std::vector<int> frontier;
    for (int eid : ball.incident[root]) {
      int u = ball.other_end(eid, root);
      if (u > root && ball.interior(u)) frontier.push_back(u);
    }
    grow(root, std::move(frontier));
    exclude(root);
  }
};

}  // namespace

MinRatioResult min_ratio_exact(const CayleyBall& ball, int max_size, long long node_budget,
                               int jobs) {
  if (max_size < 1) throw std::invalid_argument("min_ratio_exact: max_size must be >= 1");
  if (ball.interior_count == 0)
    throw std::invalid_argument("min_ratio_exact: ball has empty interior");
  jobs = std::max(1, jobs);

  std::vector<int> roots;
  for (int v = 0; v < static_cast<int>(ball.vertices.size()); ++v)
    if (ball.interior(v)) roots.push_back(v);

  std::atomic<long long> visited{0};
  std::vector<ConnectedEnumerator> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w) workers.emplace_back(ball, max_size, &visited, node_budget);

  std::exception_ptr error;
  if (jobs == 1) {
    for (int root : roots) workers[0].run_root(root);
  } else {
    std::vector<std::thread> threads;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    for (int w = 0; w < jobs; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < roots.size(); i += jobs) {
            if (failed.load(std::memory_order_relaxed)) return;
            workers[w].run_root(roots[i]);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  const ConnectedEnumerator* best = nullptr;
  for (const auto& w : workers) {
    if (w.best_boundary < 0) continue;
    if (best == nullptr) {
      best = &w;
      continue;
    }
    __int128 lhs = static_cast<__int128>(w.best_boundary) * best->best_size;
    __int128 rhs = static_cast<__int128>(best->best_boundary) * w.best_size;
    if (lhs < rhs ||
        (lhs == rhs && std::lexicographical_compare(w.best_members.begin(), w.best_members.end(),
                                                    best->best_members.begin(),
                                                    best->best_members.end())))
      best = &w;
  }

  MinRatioResult result;
  result.members = best->best_members;
  result.ratio = Rational(best->best_boundary, best->best_size);
  result.sets_visited = visited.load();
  return result;
}

std::vector<ProfileRow> ratio_profile(const GroupSpec& spec, const GeneratingSet& gens, int r_max,
                                      std::size_t cap) {
  if (r_max < 1) throw std::invalid_argument("ratio_profile: r_max must be >= 1");
  CayleyBall ball = cayley_ball(spec, gens, r_max + 1, cap);

  std::vector<long long> ball_size(r_max + 2, 0);
  for (int s : ball.sphere)
    if (s <= r_max + 1) ++ball_size[s];
  for (int n = 1; n <= r_max + 1; ++n) ball_size[n] += ball_size[n - 1];

  // An edge crosses the sphere-n cut iff its endpoints sit on spheres n, n+1.
  std::vector<long long> boundary(r_max + 2, 0);
  for (const auto& e : ball.edges) {
    int lo = std::min(ball.sphere[e.u], ball.sphere[e.v]);
    int hi = std::max(ball.sphere[e.u], ball.sphere[e.v]);
    if (lo != hi) ++boundary[lo];
  }

  std::vector<ProfileRow> rows;
  for (int n = 1; n <= r_max; ++n)
    rows.push_back({n, ball_size[n], boundary[n], Rational(boundary[n], ball_size[n])});
  return rows;
}

GrowthEstimate growth_rate(const std::vector<long long>& ball_sizes) {
  if (ball_sizes.size() < 3)
    throw std::invalid_argument("growth_rate: need ball sizes for radii 0..2 at least");
  GrowthEstimate g;
  std::size_t n = ball_sizes.size() - 1;
  g.nth_root = std::pow(static_cast<double>(ball_sizes[n]), 1.0 / static_cast<double>(n));
  for (std::size_t i = 1; i < ball_sizes.size(); ++i)
    g.ball_ratios.push_back(static_cast<double>(ball_sizes[i]) /
                            static_cast<double>(ball_sizes[i - 1]));
  std::vector<long long> spheres;
  spheres.push_back(ball_sizes[0]);
  for (std::size_t i = 1; i < ball_sizes.size(); ++i)
    spheres.push_back(ball_sizes[i] - ball_sizes[i - 1]);
  for (std::size_t i = 1; i + 1 < spheres.size(); ++i)
    if (spheres[i] > 0 && spheres[i + 1] > 0)
      g.sphere_ratios.push_back(static_cast<double>(spheres[i + 1]) /
                                static_cast<double>(spheres[i]));
  if (!g.sphere_ratios.empty()) g.estimate = g.sphere_ratios.back();
  return g;
}

BoundaryReport check_comparisons(const VertexSet& A, std::optional<double> growth_estimate) {
  if (A.members.empty()) throw std::invalid_argument("check_comparisons: empty set");
  const CayleyBall& ball = *A.ball;
  BoundaryReport rep;
  rep.edge_boundary = edge_boundary(A);
  rep.inner_boundary = inner_boundary(A);
  long long size = static_cast<long long>(A.members.size());
  rep.ratio = Rational(rep.edge_boundary, size);
  rep.folner_ratio = Rational(rep.inner_boundary, size);
  rep.kazhdan_value = kazhdan_ratio(A);

  std::vector<char> in = membership(A);
  rep.has_isolated = false;
  for (int v : A.members) {
    bool neighbor_inside = false;
    for (int eid : ball.incident[v])
      if (in[ball.other_end(eid, v)]) {
        neighbor_inside = true;
        break;
      }
    if (!neighbor_inside) {
      rep.has_isolated = true;
      break;
    }
  }

  long long two_s_minus_1 = 2 * static_cast<long long>(ball.gens.elements.size()) - 1;
  rep.sandwich_checked = !rep.has_isolated;
  if (rep.sandwich_checked)
    rep.sandwich_ok = rep.folner_ratio <= rep.ratio &&
                      rep.ratio <= Rational(two_s_minus_1) * rep.folner_ratio;

  // The displacement bound compares against the directed boundary count: an
  // involutive generator's boundary edge moves mass in both directions, so
  // it weighs twice even though it is stored as a single undirected edge.
  long long directed_boundary = rep.edge_boundary;
  for (int v : A.members) {
    for (int eid : ball.incident[v]) {
      if (in[ball.other_end(eid, v)]) continue;
      if (is_involution(ball.spec, ball.gens.elements[ball.edges[eid].label]))
        ++directed_boundary;
    }
  }
  rep.kazhdan_ok =
      rep.kazhdan_value <=
      std::sqrt(static_cast<double>(directed_boundary) / static_cast<double>(size)) + 1e-12;

  if (growth_estimate && *growth_estimate > 1)
    rep.growth_bound = static_cast<double>(two_s_minus_1) * (1.0 - 1.0 / *growth_estimate);
  return rep;
}

}  // namespace isolab
