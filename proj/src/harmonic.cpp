#include "isolab/harmonic.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace isolab {

Eigen::SparseMatrix<double> ChainComplex::boundary_matrix() const {
  Eigen::SparseMatrix<double> b(n_vertices, n_edges);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * n_edges);
  for (int e = 0; e < n_edges; ++e) {
    trip.emplace_back(ends[e].first, e, -1.0);
    trip.emplace_back(ends[e].second, e, 1.0);
  }
  b.setFromTriplets(trip.begin(), trip.end());
  return b;
}

namespace {

std::pair<int, int> orient(int u, int v, const std::vector<int>& sphere) {
  int su = sphere[u], sv = sphere[v];
  if (su < sv || (su == sv && u < v)) return {u, v};
  return {v, u};
}

}  // namespace

ChainComplex make_chain_complex(const CayleyBall& ball) {
  if (ball.radius < 1) throw std::invalid_argument("make_chain_complex: radius must be >= 1");
  ChainComplex cc;
  cc.n_vertices = static_cast<int>(ball.vertices.size());
  cc.n_edges = static_cast<int>(ball.edges.size());
  cc.radius = ball.radius;
  cc.sphere = ball.sphere;
  cc.interior.resize(cc.n_vertices);
  for (int v = 0; v < cc.n_vertices; ++v) cc.interior[v] = ball.interior(v) ? 1 : 0;
  cc.interior_count = ball.interior_count;
  cc.ends.reserve(cc.n_edges);
  for (const auto& e : ball.edges) cc.ends.push_back(orient(e.u, e.v, ball.sphere));
  cc.identity_edges.assign(ball.gens.elements.size(), -1);
  for (int eid = 0; eid < cc.n_edges; ++eid) {
    const auto& e = ball.edges[eid];
    if (e.u == 0 && cc.identity_edges[e.label] < 0) cc.identity_edges[e.label] = eid;
  }
  for (int j = 0; j < static_cast<int>(cc.identity_edges.size()); ++j)
    if (cc.identity_edges[j] < 0)
      throw std::invalid_argument("make_chain_complex: missing identity edge for generator " +
                                  std::to_string(j));
  return cc;
}

ChainComplex make_chain_complex(const FiniteGraph& graph, std::vector<char> interior,
                                std::vector<int> sphere) {
  ChainComplex cc;
  cc.n_vertices = graph.n;
  cc.n_edges = static_cast<int>(graph.edges.size());
  cc.sphere = sphere.empty() ? std::vector<int>(graph.n, 0) : std::move(sphere);
  if (static_cast<int>(interior.size()) != graph.n)
    throw std::invalid_argument("make_chain_complex: interior mask size mismatch");
  cc.interior = std::move(interior);
  for (char m : cc.interior) cc.interior_count += m ? 1 : 0;
  cc.ends.reserve(cc.n_edges);
  for (const auto& [u, v] : graph.edges) cc.ends.push_back(orient(u, v, cc.sphere));
  return cc;
}

namespace {

// Spanning forest bookkeeping for fundamental-cycle construction on a
// quotient of the complex (interior vertices, optionally plus one merged
// node standing for the whole outer sphere).
struct QuotientGraph {
  int n_q = 0;
  std::vector<int> edge_ids;               // complex edge ids participating
  std::vector<std::pair<int, int>> q_ends; // quotient (tail, head) per entry
  int components = 0;

  std::vector<int> parent, parent_entry, depth;

  void build_forest() {
    std::vector<std::vector<std::pair<int, int>>> adj(n_q);  // (entry, other)
    for (int i = 0; i < static_cast<int>(edge_ids.size()); ++i) {
      auto [a, b] = q_ends[i];
      if (a == b) continue;  // quotient loop, never in the forest
      adj[a].emplace_back(i, b);
      adj[b].emplace_back(i, a);
    }
    parent.assign(n_q, -1);
    parent_entry.assign(n_q, -1);
    depth.assign(n_q, -1);
    components = 0;
    for (int root = 0; root < n_q; ++root) {
      if (depth[root] >= 0) continue;
      ++components;
      depth[root] = 0;
      std::queue<int> queue;
      queue.push(root);
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop();
        for (auto [entry, u] : adj[v]) {
          if (depth[u] >= 0) continue;
          depth[u] = depth[v] + 1;
          parent[u] = v;
          parent_entry[u] = entry;
          queue.push(u);
        }
      }
    }
  }

  bool in_forest(int entry) const {
    auto [a, b] = q_ends[entry];
    if (a == b) return false;
    return (parent[a] == b && parent_entry[a] == entry) ||
           (parent[b] == a && parent_entry[b] == entry);
  }

  int cycle_count() const {
    return static_cast<int>(edge_ids.size()) - (n_q - components);
  }

  // Fundamental cycle of a non-forest entry, as a vector over all complex
  // edges: +1 along the edge tail->head, closed through the forest.
  Eigen::VectorXd cycle_vector(int entry, int n_edges_total) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_edges_total);
    c[edge_ids[entry]] = 1.0;
    auto [tail, head] = q_ends[entry];
    if (tail == head) return c;  // loop through the merged node
    // walk head -> tail through the forest
    int x = head, y = tail;
    auto step_up = [&](int v, double sign_if_up) {
      int f = parent_entry[v];
      auto [ft, fh] = q_ends[f];
      // traversing v -> parent(v); +1 when that matches the edge orientation
      double s = (ft == v && fh == parent[v]) ? 1.0 : -1.0;
      c[edge_ids[f]] += sign_if_up * s;
      return parent[v];
    };
    while (depth[x] > depth[y]) x = step_up(x, 1.0);
    while (depth[y] > depth[x]) y = step_up(y, -1.0);
    while (x != y) {
      x = step_up(x, 1.0);
      y = step_up(y, -1.0);
    }
    return c;
  }
};

// Quotient with every outer vertex merged into a single node: its cycle
// space equals the kernel of the interior-row incidence matrix.
QuotientGraph merged_outer_quotient(const ChainComplex& cc) {
  QuotientGraph q;
  std::vector<int> map(cc.n_vertices, -1);
  int next = 0;
  for (int v = 0; v < cc.n_vertices; ++v)
    if (cc.interior[v]) map[v] = next++;
  bool has_outer = next < cc.n_vertices;
  int super = next;
  q.n_q = next + (has_outer ? 1 : 0);
  for (int v = 0; v < cc.n_vertices; ++v)
    if (map[v] < 0) map[v] = super;
  q.edge_ids.reserve(cc.n_edges);
  for (int e = 0; e < cc.n_edges; ++e) {
    q.edge_ids.push_back(e);
    q.q_ends.emplace_back(map[cc.ends[e].first], map[cc.ends[e].second]);
  }
  q.build_forest();
  return q;
}

QuotientGraph inner_quotient(const ChainComplex& cc) {
  QuotientGraph q;
  std::vector<int> map(cc.n_vertices, -1);
  int next = 0;
  for (int v = 0; v < cc.n_vertices; ++v)
    if (cc.interior[v]) map[v] = next++;
  q.n_q = next;
  for (int e = 0; e < cc.n_edges; ++e) {
    if (!cc.edge_is_inner(e)) continue;
    q.edge_ids.push_back(e);
    q.q_ends.emplace_back(map[cc.ends[e].first], map[cc.ends[e].second]);
  }
  q.build_forest();
  return q;
}

Eigen::MatrixXd orthonormalize(Eigen::MatrixXd m) {
  if (m.cols() == 0) return m;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

Eigen::MatrixXd cycles_matrix(const QuotientGraph& q, int n_edges) {
  Eigen::MatrixXd c(n_edges, q.cycle_count());
  int col = 0;
  for (int entry = 0; entry < static_cast<int>(q.edge_ids.size()); ++entry)
    if (!q.in_forest(entry)) c.col(col++) = q.cycle_vector(entry, n_edges);
  return c;
}

}  // namespace

HarmonicDims harmonic_dims(const ChainComplex& cc) {
  QuotientGraph rel = merged_outer_quotient(cc);
  QuotientGraph inn = inner_quotient(cc);
  HarmonicDims d;
  d.dim_relative = rel.cycle_count();
  d.dim_inner = inn.cycle_count();
  d.dim = d.dim_relative - d.dim_inner;
  return d;
}

Subspace relative_cycle_space(const ChainComplex& cc, int dense_edge_cap) {
  if (cc.n_edges > dense_edge_cap)
    throw ResourceError("relative_cycle_space: " + std::to_string(cc.n_edges) +
                        " edges exceed the dense cap " + std::to_string(dense_edge_cap));
  QuotientGraph q = merged_outer_quotient(cc);
  return Subspace{orthonormalize(cycles_matrix(q, cc.n_edges))};
}

Subspace inner_cycle_space(const ChainComplex& cc, int dense_edge_cap) {
  if (cc.n_edges > dense_edge_cap)
    throw ResourceError("inner_cycle_space: " + std::to_string(cc.n_edges) +
                        " edges exceed the dense cap " + std::to_string(dense_edge_cap));
  QuotientGraph q = inner_quotient(cc);
  return Subspace{orthonormalize(cycles_matrix(q, cc.n_edges))};
}

// Projector evaluations through two grounded Laplacian factorizations: the
// interior rows of the ball (Dirichlet data on the sphere) and the
// interior-induced subgraph. Grounding pins one vertex per component whose
// Laplacian block is singular; incidence columns are orthogonal to those
// kernels, so grounded solves realize the pseudoinverse.
class HarmonicSolver {
 public:
  explicit HarmonicSolver(const ChainComplex& cc) : cc_(&cc) {
    build_interior_system();
    build_inner_system();
  }

  double prel_diag(int e) const {
    Eigen::VectorXd x = interior_solve_column(e);
    auto [t, h] = cc_->ends[e];
    double quad = 0;
    if (row_ball_[t] >= 0) quad += -1.0 * x[row_ball_[t]];
    if (row_ball_[h] >= 0) quad += 1.0 * x[row_ball_[h]];
    return 1.0 - quad;
  }

  double pz_diag(int e) const {
    if (!cc_->edge_is_inner(e)) return 0.0;
    Eigen::VectorXd y = inner_solve_column(e);
    auto [t, h] = cc_->ends[e];
    double quad = 0;
    if (row_inner_[t] >= 0) quad += -1.0 * y[row_inner_[t]];
    if (row_inner_[h] >= 0) quad += 1.0 * y[row_inner_[h]];
    return 1.0 - quad;
  }

  // P_H[rows, e]
  Eigen::VectorXd column(int e, const std::vector<int>& rows) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(rows.size());
    Eigen::VectorXd x = interior_solve_column(e);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      int f = rows[i];
      double val = (f == e) ? 1.0 : 0.0;
      val -= potential_difference(x, row_ball_, f);
      out[i] = val;
    }
    if (cc_->edge_is_inner(e)) {
      // any inner edge forces inner_rows_ >= 1
      Eigen::VectorXd y = inner_solve_column(e);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        int f = rows[i];
        if (!cc_->edge_is_inner(f)) continue;
        double val = (f == e) ? 1.0 : 0.0;
        val -= potential_difference(y, row_inner_, f);
        out[i] -= val;
      }
    }
    return out;
  }

 private:
  void build_interior_system() {
    row_ball_.assign(cc_->n_vertices, -1);
    // components of the whole ball, to spot the fully interior ones
    std::vector<int> comp(cc_->n_vertices, -1);
    int n_comp = 0;
    {
      std::vector<std::vector<int>> adj(cc_->n_vertices);
      for (const auto& [t, h] : cc_->ends) {
        adj[t].push_back(h);
        adj[h].push_back(t);
      }
      for (int v = 0; v < cc_->n_vertices; ++v) {
        if (comp[v] >= 0) continue;
        std::vector<int> stack{v};
        comp[v] = n_comp;
        while (!stack.empty()) {
          int x = stack.back();
          stack.pop_back();
          for (int u : adj[x])
            if (comp[u] < 0) {
              comp[u] = n_comp;
              stack.push_back(u);
            }
        }
        ++n_comp;
      }
    }
    std::vector<char> fully_interior(n_comp, 1);
    for (int v = 0; v < cc_->n_vertices; ++v)
      if (!cc_->interior[v]) fully_interior[comp[v]] = 0;
    std::vector<char> grounded_comp(n_comp, 0);
    int next = 0;
    for (int v = 0; v < cc_->n_vertices; ++v) {
      if (!cc_->interior[v]) continue;
      if (fully_interior[comp[v]] && !grounded_comp[comp[v]]) {
        grounded_comp[comp[v]] = 1;  // pinned
        continue;
      }
      row_ball_[v] = next++;
    }
    ball_rows_ = next;
    factor(lii_, row_ball_, ball_rows_, /*inner_only=*/false);
  }

  void build_inner_system() {
    // one ground per component of the interior-induced subgraph
    row_inner_.assign(cc_->n_vertices, -1);
    std::vector<int> comp(cc_->n_vertices, -1);
    int n_comp = 0;
    std::vector<std::vector<int>> adj(cc_->n_vertices);
    for (int e = 0; e < cc_->n_edges; ++e) {
      if (!cc_->edge_is_inner(e)) continue;
      auto [t, h] = cc_->ends[e];
      adj[t].push_back(h);
      adj[h].push_back(t);
    }
    for (int v = 0; v < cc_->n_vertices; ++v) {
      if (!cc_->interior[v] || comp[v] >= 0) continue;
      std::vector<int> stack{v};
      comp[v] = n_comp;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int u : adj[x])
          if (comp[u] < 0) {
            comp[u] = n_comp;
            stack.push_back(u);
          }
      }
      ++n_comp;
    }
    std::vector<char> grounded(n_comp, 0);
    int next = 0;
    for (int v = 0; v < cc_->n_vertices; ++v) {
      if (!cc_->interior[v]) continue;
      if (!grounded[comp[v]]) {
        grounded[comp[v]] = 1;
        continue;
      }
      row_inner_[v] = next++;
    }
    inner_rows_ = next;
    factor(linn_, row_inner_, inner_rows_, /*inner_only=*/true);
  }

  void factor(Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& ldlt,
              const std::vector<int>& row_of, int rows, bool inner_only) {
    if (rows == 0) return;
    std::vector<Eigen::Triplet<double>> trip;
    for (int e = 0; e < cc_->n_edges; ++e) {
      if (inner_only && !cc_->edge_is_inner(e)) continue;
      auto [t, h] = cc_->ends[e];
      int rt = row_of[t], rh = row_of[h];
      if (rt >= 0) trip.emplace_back(rt, rt, 1.0);
      if (rh >= 0) trip.emplace_back(rh, rh, 1.0);
      if (rt >= 0 && rh >= 0) {
        trip.emplace_back(rt, rh, -1.0);
        trip.emplace_back(rh, rt, -1.0);
      }
    }
    Eigen::SparseMatrix<double> lap(rows, rows);
    lap.setFromTriplets(trip.begin(), trip.end());
    ldlt.compute(lap);
    if (ldlt.info() != Eigen::Success)
      throw NumericalRankError("harmonic: Laplacian factorization failed", 0.0);
  }

  Eigen::VectorXd solve(const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& ldlt, int rows,
                        int e, const std::vector<int>& row_of) const {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(rows);
    auto [t, h] = cc_->ends[e];
    if (row_of[t] >= 0) q[row_of[t]] -= 1.0;
    if (row_of[h] >= 0) q[row_of[h]] += 1.0;
    if (rows == 0) return q;
    return ldlt.solve(q);
  }

  Eigen::VectorXd interior_solve_column(int e) const {
    if (ball_rows_ == 0) return Eigen::VectorXd();
    return solve(lii_, ball_rows_, e, row_ball_);
  }
  Eigen::VectorXd inner_solve_column(int e) const { return solve(linn_, inner_rows_, e, row_inner_); }

  double potential_difference(const Eigen::VectorXd& x, const std::vector<int>& row_of,
                              int f) const {
    if (x.size() == 0) return 0.0;
    auto [t, h] = cc_->ends[f];
    double val = 0;
    if (row_of[h] >= 0) val += x[row_of[h]];
    if (row_of[t] >= 0) val -= x[row_of[t]];
    return val;
  }

  const ChainComplex* cc_;
  std::vector<int> row_ball_, row_inner_;
  int ball_rows_ = 0, inner_rows_ = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> lii_, linn_;
};

const Eigen::MatrixXd& HarmonicSpace::basis() const {
  if (!basis_)
    throw ResourceError("harmonic basis was not materialized (above the dense edge cap)");
  return *basis_;
}

double HarmonicSpace::projector_diag(int edge) const {
  return solver_->prel_diag(edge) - solver_->pz_diag(edge);
}

Eigen::MatrixXd HarmonicSpace::projector_gram(const std::vector<int>& edge_set) const {
  int k = static_cast<int>(edge_set.size());
  Eigen::MatrixXd g(k, k);
  for (int j = 0; j < k; ++j) g.col(j) = solver_->column(edge_set[j], edge_set);
  return 0.5 * (g + g.transpose());
}

double HarmonicSpace::center_trace() const {
  if (cc_->identity_edges.empty())
    throw std::invalid_argument("center_trace: complex has no identity edges");
  double total = 0;
  for (int e : cc_->identity_edges) total += projector_diag(e);
  return total;
}

double center_trace(const HarmonicSpace& h) { return h.center_trace(); }

HarmonicSpace harmonic_projector(const ChainComplex& cc, const HarmonicOptions& opts) {
  HarmonicSpace h;
  h.cc_ = std::make_shared<const ChainComplex>(cc);
  HarmonicDims dims = harmonic_dims(*h.cc_);
  h.dim_relative_ = dims.dim_relative;
  h.dim_inner_ = dims.dim_inner;
  h.dim_ = dims.dim;
  h.solver_ = std::make_shared<HarmonicSolver>(*h.cc_);

  if (opts.build_basis && cc.n_edges <= opts.dense_edge_cap) {
    Eigen::MatrixXd q_rel = relative_cycle_space(*h.cc_, opts.dense_edge_cap).basis;
    Eigen::MatrixXd q_inn = inner_cycle_space(*h.cc_, opts.dense_edge_cap).basis;
    Eigen::MatrixXd m = q_rel;
    if (q_inn.cols() > 0) m -= q_inn * (q_inn.transpose() * q_rel);
    if (m.cols() == 0 || h.dim_ == 0) {
      h.basis_ = Eigen::MatrixXd(cc.n_edges, 0);
      return h;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
    double top = diag.size() > 0 ? diag[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < diag.size(); ++i)
      if (diag[i] > opts.rank_tol * top) ++rank;
    if (rank != h.dim_) {
      double gap = (rank > 0 && rank < diag.size()) ? diag[rank - 1] / diag[rank] : 0.0;
      throw NumericalRankError("harmonic basis rank " + std::to_string(rank) +
                                   " disagrees with expected dimension " + std::to_string(h.dim_),
                               gap);
    }
    h.basis_ = qr.householderQ() * Eigen::MatrixXd::Identity(cc.n_edges, rank);
  }
  return h;
}

namespace {

struct RankCut {
  int rank;
  double gap;
};

RankCut rank_from_singulars(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0 || sv[0] <= 0) return {0, std::numeric_limits<double>::infinity()};
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * sv[0]) ++rank;
  double gap = rank < sv.size() && sv[rank] > 0
                   ? sv[rank - 1] / sv[rank]
                   : std::numeric_limits<double>::infinity();
  if (rank == 0) gap = std::numeric_limits<double>::infinity();
  return {rank, gap};
}

RankCut restricted_rank(const HarmonicSpace& h, const std::vector<int>& edge_set, double tol) {
  if (edge_set.empty() || h.dim() == 0)
    return {0, std::numeric_limits<double>::infinity()};
  if (h.has_basis()) {
    Eigen::MatrixXd rows(edge_set.size(), h.basis().cols());
    for (std::size_t i = 0; i < edge_set.size(); ++i) rows.row(i) = h.basis().row(edge_set[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    return rank_from_singulars(svd.singularValues(), tol);
  }
  // Gram fallback for complexes without a dense basis. Squaring halves the
  // usable precision, so the eigenvalue floor is 1e-12 relative (a 1e-6
  // singular-value tolerance), not tol^2; eigensolver noise sits near
  // 1e-14 * lambda_max.
  Eigen::MatrixXd gram = h.projector_gram(edge_set);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  Eigen::VectorXd vals = eig.eigenvalues().reverse();
  double lambda_tol = std::max(tol * tol, 1e-12);
  Eigen::VectorXd sv(vals.size());
  for (int i = 0; i < vals.size(); ++i)
    sv[i] = vals[i] > lambda_tol * std::max(vals[0], 0.0) ? std::sqrt(vals[i]) : 0.0;
  return rank_from_singulars(sv, 0.0);
}

}  // namespace

RestrRankResult restriction_rank_check(const HarmonicSpace& h, const VertexSet& A, double tol) {
  const ChainComplex& cc = h.complex();
  const CayleyBall& ball = *A.ball;
  if (static_cast<int>(ball.vertices.size()) != cc.n_vertices ||
      static_cast<int>(ball.edges.size()) != cc.n_edges)
    throw std::invalid_argument("restriction_rank_check: vertex set is not on this complex");

  std::vector<char> in(cc.n_vertices, 0);
  for (int v : A.members) in[v] = 1;

  RestrRankResult result;
  for (int e = 0; e < cc.n_edges; ++e) {
    auto [t, hd] = cc.ends[e];
    int touching = (in[t] ? 1 : 0) + (in[hd] ? 1 : 0);
    if (touching == 0) continue;
    if (!cc.interior[t] || !cc.interior[hd])
      throw std::invalid_argument(
          "restriction_rank_check: A has a neighbor outside the ball interior");
    result.edges_AS.push_back(e);
    if (touching == 1) result.edges_boundary.push_back(e);
  }

  RankCut as = restricted_rank(h, result.edges_AS, tol);
  RankCut bd = restricted_rank(h, result.edges_boundary, tol);
  result.rank_AS = as.rank;
  result.rank_boundary = bd.rank;
  result.gap_AS = as.gap;
  result.gap_boundary = bd.gap;
  result.equal = as.rank == bd.rank;
  return result;
}

CgReport cg_inequality_report(const HarmonicSpace& h, const VertexSet& A) {
  if (A.members.empty()) throw std::invalid_argument("cg_inequality_report: empty set");
  CgReport rep;
  RestrRankResult restr = restriction_rank_check(h, A);
  rep.center_trace = h.center_trace();
  rep.rank_AS = restr.rank_AS;
  rep.rank_boundary = restr.rank_boundary;
  rep.edge_boundary = edge_boundary(A);
  rep.set_size = static_cast<long long>(A.members.size());
  rep.rank_ratio = static_cast<double>(rep.rank_AS) / static_cast<double>(rep.set_size);
  rep.boundary_ratio = Rational(rep.edge_boundary, rep.set_size);
  rep.rank_equal = restr.equal;
  rep.rank_le_boundary = rep.rank_boundary <= rep.edge_boundary;
  rep.trace_le_rank_ratio = rep.center_trace <= rep.rank_ratio + 1e-9;
  return rep;
}

}  // namespace isolab
