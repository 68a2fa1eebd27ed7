#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrkhs/measures.hpp"

namespace qrkhs {

struct OverlappingCells : std::invalid_argument {
  explicit OverlappingCells(const std::string& what) : std::invalid_argument(what) {}
};
struct UncoveredNodes : std::invalid_argument {
  explicit UncoveredNodes(const std::string& what) : std::invalid_argument(what) {}
};
struct IllConditionedBasis : std::runtime_error {
  explicit IllConditionedBasis(double cond)
      : std::runtime_error("sampled-basis Gram condition number above 1e8"), condition(cond) {}
  double condition;
};
struct BadEpsilon : std::invalid_argument {
  BadEpsilon() : std::invalid_argument("epsilon must lie in (0,1)") {}
};
struct PartitionParseError : std::invalid_argument {
  explicit PartitionParseError(const std::string& what) : std::invalid_argument(what) {}
};

/// One measurable cell: a predicate over quadrature-node coordinates plus a
/// descriptor. Cell boundaries never split a node.
struct PartitionCell {
  std::string name;
  std::function<bool(const QuadNode&)> contains;
};

struct Partition {
  std::vector<PartitionCell> cells;
  bool covers_domain = true;

  /// Per-cell node index lists on a rule. Throws OverlappingCells if a node
  /// matches two cells, UncoveredNodes if covers_domain and a node matches
  /// none.
  std::vector<std::vector<std::size_t>> assign(const MeasureRule& rule) const;

  static Partition whole();
  /// Two cells split by a coordinate threshold; var is one of
  /// r, theta1, theta2, phi, x, y.
  static Partition split(const std::string& var, double threshold);
  /// Text format, one cell per line: `name: cmp & cmp & ...` with cmp like
  /// `r < 1.5` or `x >= 0`; the predicate `all` matches everything.
  static Partition parse(const std::string& text);
};

/// Median of the radial coordinate under the rule's weights; natural split
/// point for half-line partitions.
double weighted_median_r(const MeasureRule& rule);

/// Discretized L^2(X, dnu): node-sampled functions with quadrature-weighted
/// inner product. C = sqrt(W) B G^{-1/2} has (nearly) orthonormal columns
/// spanning the sampled kernel space, and P_K = C C^dagger.
struct DiscreteL2 {
  std::size_t n_nodes = 0;
  int dim = 0;  // N + 1
  QMatrix basis;  // B(k,i) = f_i(x_k), nodes x dim
  QMatrix C;      // sqrt(W) B G^{-1/2}
  double gram_condition = 0.0;

  /// ||P_K^2 - P_K||_max and ||P_K - P_K^dagger||_max, computed through the
  /// factor C without materializing the node-space projector.
  double idempotency_defect() const;
  double hermiticity_defect() const;
};

DiscreteL2 build_discrete_l2(const Kernel& ker, const MeasureRule& rule);

/// (F_K(x))_ij = conj(f_i(x)) f_j(x) in coefficient coordinates; positive,
/// rank one, trace K(x,x).
QMatrix localization_operator(const Kernel& ker, const Quaternion& x);

/// a(cell) = sum over the cell's nodes of w_k F_K(x_k), per cell, in
/// coefficient coordinates. Node-level additivity over disjoint cells is
/// exact under the fixed node order.
std::vector<QMatrix> pov_measure(const Kernel& ker, const MeasureRule& rule, const Partition& part);

struct SigmaAdditivityResult {
  /// |sum of per-cell mu_phi - mu_phi(X as grouped union)|; zero by
  /// construction of the grouped summation.
  double exact_defect = 0.0;
  /// worst mismatch between a coarse cell and the sum over its refinement.
  double refinement_defect = 0.0;
  double min_cell_value = 0.0;  // negative would falsify positivity
  double total = 0.0;           // mu_phi(X), should equal ||phi||_K^2
};

/// mu_phi(cell) = <phi| a(cell) phi> for a random unit coefficient vector phi
/// drawn from the seed, over a refining sequence of partitions (coarsest
/// first).
SigmaAdditivityResult sigma_additivity_check(const Kernel& ker, const MeasureRule& rule,
                                             const std::vector<Partition>& nested, std::uint64_t seed);

/// max over cells of || P_K P(cell) P_K  -  C a(cell) C^dagger ||_max, the
/// PV-compression against the POV matrix transported through the
/// orthonormalized frame. Shrinks with the quadrature orthogonality error.
double naimark_residual(const Kernel& ker, const MeasureRule& rule, const Partition& part);
double naimark_residual(const DiscreteL2& l2, const MeasureRule& rule, const Partition& part);

struct MinimalityReport {
  double sigma_min = 0.0;
  int rank = 0;
  int column_count = 0;
  int node_dim = 0;
};

/// Smallest singular value and rank of the matrix with columns
/// {P(cell) c_i} over cells and orthonormalized basis members; a node-level
/// density proxy, not the continuum statement.
MinimalityReport minimality_witness(const Kernel& ker, const MeasureRule& rule, const Partition& part);

struct DiagOperatorA {
  double epsilon = 0.5;
  int N = 0;
  std::vector<double> diag;   // eps^{-n}
  double trace_inverse = 0.0; // sum_{n<=N} eps^n -> 1/(1-eps)

  /// <f|g> in the A-scaled space: sum eps^{-n} conj(c_n) d_n over Hermite
  /// coefficients.
  Quaternion scaled_inner(const QVector& c, const QVector& d) const;
  /// Coefficient-domain membership proxy: sum eps^{-2n} |c_n|^2 below budget.
  bool in_domain(const QVector& c, double budget = 1e12) const;
};

DiagOperatorA diag_operator_A(double epsilon, int N);

}  // namespace qrkhs
