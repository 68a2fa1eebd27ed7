#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qrkhs/kernels.hpp"
#include "qrkhs/poly_families.hpp"

namespace qrkhs {

struct BudgetExceeded : std::invalid_argument {
  explicit BudgetExceeded(const char* what) : std::invalid_argument(what) {}
};
struct EmptyRule : std::invalid_argument {
  EmptyRule() : std::invalid_argument("quadrature rule has no nodes") {}
};

enum class MeasureKind {
  CanonicalGaussQ,
  HermiteComplex,
  HermiteQuat,
  LaguerreComplex,
  LaguerreQuat,
  RealHermite,
  RealLaguerre,
  TwoIndexGauss,
};

/// Quadrature construction parameters. `radial` is the total Gauss-Legendre
/// node count along the radial (or x, y) direction, `angular` the periodic
/// trapezoid order for theta2 and phi, `theta1` the Gauss-Legendre order on
/// [0, pi/2] against sin(theta1).
struct QuadOrders {
  int radial = 160;
  int angular = 64;
  int theta1 = 24;
  double tail = 1e-15;
  /// Scales the safety margin added to the weight-tail truncation radius.
  /// 1.0 is generous (covers high polynomial moments); iterated-kernel
  /// integrands use a smaller reach so nodes stay where the series converges.
  double reach = 1.0;

  QuadOrders doubled() const { return {2 * radial, 2 * angular, 2 * theta1, tail, reach}; }
};

/// One quadrature node: the quaternion point, the weight (measure density
/// times the coordinate volume element), and all coordinates a partition
/// predicate may reference. On the slice, q = x + J y with x = r cos(theta2),
/// y = r sin(theta2).
struct QuadNode {
  Quaternion q;
  double w = 0.0;
  double r = 0.0, theta1 = 0.0, theta2 = 0.0, phi = 0.0;
  double x = 0.0, y = 0.0;
};

/// A measure on H (or C, R, R+) realized as a concrete rule. `reduced` rules
/// integrate over the representative slice J = i with the angular mass folded
/// into the weights; full rules tensor in (theta1, phi).
struct MeasureRule {
  MeasureKind kind = MeasureKind::CanonicalGaussQ;
  double epsilon = 0.5;
  double alpha = 0.0;
  bool reduced = true;
  QuadOrders orders;
  double truncation_radius = 0.0;
  std::vector<QuadNode> nodes;
};

struct MeasureParams {
  double epsilon = 0.5;
  double alpha = 0.0;
};

MeasureRule build_rule(MeasureKind kind, const MeasureParams& params, const QuadOrders& orders,
                       bool reduced = true);

/// Weighted sum with deterministic pairwise summation over the fixed node
/// ordering; bit-for-bit reproducible given a rule.
Quaternion integrate(const MeasureRule& rule, const std::function<Quaternion(const QuadNode&)>& F);

Quaternion pairwise_sum(std::vector<Quaternion>& terms);

/// Residual matrix R_mn = | int conj(f_m(q)) f_n(q) dnu - delta_mn | for the
/// normalized family, conjugate factor on the left.
struct OrthogonalityResult {
  std::vector<std::vector<double>> residuals;
  double max_residual = 0.0;
};
OrthogonalityResult orthogonality_matrix(const BasisFamily& fam, const MeasureRule& rule, int maxN);

/// Two-index Hermite orthogonality over all four indices:
/// max over n,m,l,k <= maxIdx of the normalized residual of
/// int conj(H_{n,m}) H_{l,k} dmu = n! m! delta_nl delta_mk.
double hermite2_orthogonality(const MeasureRule& rule, int max_index);

/// | int K(x,z) K(z,y) dnu(z) - K(x,y) | / |K(x,y)|.
double kernel_square_integrability(const Kernel& ker, const MeasureRule& rule, const Quaternion& x,
                                   const Quaternion& y);

const char* to_string(MeasureKind kind);

}  // namespace qrkhs
