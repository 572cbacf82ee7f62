#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>
#include <optional>
#include <vector>

#include "isolab/forests.hpp"
#include "isolab/groups.hpp"
#include "isolab/isoperimetry.hpp"

namespace isolab {

struct NumericalRankError : std::runtime_error {
  double gap;
  NumericalRankError(const std::string& what, double g) : std::runtime_error(what), gap(g) {}
};

// Signed incidence structure of a ball (or a marked finite graph). Edge
// orientation is deterministic: tail = endpoint with the smaller sphere
// index, ties broken by vertex index. Boundary columns carry -1 at the tail
// and +1 at the head.
struct ChainComplex {
  int n_vertices = 0;
  int n_edges = 0;
  int radius = -1;
  std::vector<int> sphere;
  std::vector<char> interior;
  int interior_count = 0;
  std::vector<std::pair<int, int>> ends;  // (tail, head)
  std::vector<int> identity_edges;        // ball: the edge (e, e*s) per generator label

  Eigen::SparseMatrix<double> boundary_matrix() const;
  bool edge_is_inner(int e) const { return interior[ends[e].first] && interior[ends[e].second]; }
};

ChainComplex make_chain_complex(const CayleyBall& ball);
ChainComplex make_chain_complex(const FiniteGraph& graph, std::vector<char> interior,
                                std::vector<int> sphere = {});

struct Subspace {
  Eigen::MatrixXd basis;  // orthonormal columns, edge coordinates
  int dim() const { return static_cast<int>(basis.cols()); }
};

struct HarmonicOptions {
  bool build_basis = true;
  int dense_edge_cap = 2000;
  double rank_tol = 1e-8;
};

class HarmonicSolver;

// Relative cycles (zero flux at interior vertices) modulo inner cycles
// (cycles of the interior-induced subgraph). Dimensions come from exact
// component counts; the dense basis is only materialized below the edge cap,
// everything else runs through factorized projector solves.
class HarmonicSpace {
 public:
  int dim_relative() const { return dim_relative_; }
  int dim_inner() const { return dim_inner_; }
  int dim() const { return dim_; }
  const ChainComplex& complex() const { return *cc_; }

  bool has_basis() const { return basis_.has_value(); }
  const Eigen::MatrixXd& basis() const;

  double projector_diag(int edge) const;
  // P_H restricted to a set of edge coordinates (rows = cols = edge_set).
  Eigen::MatrixXd projector_gram(const std::vector<int>& edge_set) const;
  double center_trace() const;

 private:
  friend HarmonicSpace harmonic_projector(const ChainComplex& cc, const HarmonicOptions& opts);
  std::shared_ptr<const ChainComplex> cc_;
  std::shared_ptr<HarmonicSolver> solver_;
  std::optional<Eigen::MatrixXd> basis_;
  int dim_relative_ = 0, dim_inner_ = 0, dim_ = 0;
};

Subspace relative_cycle_space(const ChainComplex& cc, int dense_edge_cap = 2000);
Subspace inner_cycle_space(const ChainComplex& cc, int dense_edge_cap = 2000);
HarmonicSpace harmonic_projector(const ChainComplex& cc, const HarmonicOptions& opts = {});
double center_trace(const HarmonicSpace& h);

// Exact dimension bookkeeping without any numerics.
struct HarmonicDims {
  int dim_relative, dim_inner, dim;
};
HarmonicDims harmonic_dims(const ChainComplex& cc);

struct RestrRankResult {
  int rank_AS = 0;
  int rank_boundary = 0;
  bool equal = false;
  double gap_AS = 0;        // smallest kept / largest dropped singular value
  double gap_boundary = 0;
  std::vector<int> edges_AS;
  std::vector<int> edges_boundary;
};

// Ranks of the harmonic space restricted to the edges touching A and to the
// boundary edges of A; they must agree whenever every edge touching A is
// interior.
RestrRankResult restriction_rank_check(const HarmonicSpace& h, const VertexSet& A,
                                       double tol = 1e-8);

struct CgReport {
  double center_trace = 0;
  int rank_AS = 0;
  int rank_boundary = 0;
  long long edge_boundary = 0;
  long long set_size = 0;
  double rank_ratio = 0;  // rank_AS / |A|
  Rational boundary_ratio;
  bool rank_equal = false;
  bool rank_le_boundary = false;
  bool trace_le_rank_ratio = false;  // informational; finite-radius artifact
};

CgReport cg_inequality_report(const HarmonicSpace& h, const VertexSet& A);

}  // namespace isolab
