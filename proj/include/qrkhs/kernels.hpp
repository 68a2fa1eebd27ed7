#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qrkhs/poly_families.hpp"
#include "qrkhs/qlinalg.hpp"

namespace qrkhs {

struct NoClosedForm : std::logic_error {
  NoClosedForm() : std::logic_error("kernel has no closed form for these arguments") {}
};
struct SliceMismatch : std::domain_error {
  SliceMismatch() : std::domain_error("arguments do not lie in a common complex slice") {}
};
struct TruncationNotConverged : std::runtime_error {
  explicit TruncationNotConverged(double tail)
      : std::runtime_error("kernel series tail estimate above tolerance"), tail_estimate(tail) {}
  double tail_estimate;
};
struct KernelDegenerate : std::domain_error {
  KernelDegenerate() : std::domain_error("K(x,x) below representable positive range") {}
};

enum class ClosedFormTag { None, CanonicalSlice, HermiteReal, HermiteComplex, LaguerreReal, LaguerreComplex };

/// Series value together with its truncation certificate (absolute sum of the
/// trailing window of terms).
struct KernelValue {
  Quaternion value;
  double tail = 0.0;
};

/// Reproducing kernel K(x,y) = sum_n conj(f_n(x)) f_n(y), the x-factor
/// entering conjugated on the left. Backends: truncated series (always) and
/// closed form (where one exists).
struct Kernel {
  BasisFamily family;
  ClosedFormTag closed_form = ClosedFormTag::None;
  double tail_tol = 1e-9;

  static Kernel canonical(int N = 60);
  static Kernel hermite(double epsilon, int N = 120);
  static Kernel laguerre(double alpha, double epsilon, int N = 150);
  static Kernel hermite2(int fixed_n, int N = 60);
};

/// All family members f_0..f_N at one point, shared by series and Gram code.
std::vector<Quaternion> family_values(const BasisFamily& fam, const Quaternion& q);

KernelValue kernel_series(const Kernel& ker, const Quaternion& x, const Quaternion& y);

/// Closed-form backend. Canonical/Hermite forms need same-slice arguments,
/// Laguerre forms nonnegative reals (LaguerreComplex: same slice).
Quaternion kernel_closed(const Kernel& ker, const Quaternion& x, const Quaternion& y);

/// G_ij = K(x_i,x_j), or conj(v_i) K(x_i,x_j) v_j when weights are given.
/// Hermitian by construction.
QMatrix gram_matrix(const Kernel& ker, const std::vector<Quaternion>& points,
                    const std::vector<Quaternion>* vectors = nullptr);

/// Coefficient vector of the coherent state xi_x^v: c_i = conj(f_i(x)) v.
using CoefficientVector = QVector;
CoefficientVector cs_vector(const Kernel& ker, const Quaternion& x, const Quaternion& v);

/// phi(x) = sum_i f_i(x) c_i.
Quaternion evaluate_member(const CoefficientVector& coeffs, const Kernel& ker, const Quaternion& x);

/// True when x and y lie in a common complex slice (parallel or vanishing
/// imaginary parts).
bool same_slice(const Quaternion& x, const Quaternion& y, double tol = 1e-12);

/// Vector-valued machinery for K = H^n: a synthetic family of K-valued
/// functions, the operator kernel and coherent-state coefficient vectors.
struct VectorFamily {
  int dim_K = 1;
  int truncation = 0;
  std::function<QVector(int, const Quaternion&)> eval;
};

/// K(x,y) as an n x n quaternionic matrix, sum_i |f_i(x)><f_i(y)|.
QMatrix op_kernel(const VectorFamily& fam, const Quaternion& x, const Quaternion& y);

/// Coefficients of xi_x^v: c_i = <f_i(x)|v>.
QVector vcs_vector(const VectorFamily& fam, const Quaternion& x, const QVector& v);

}  // namespace qrkhs
