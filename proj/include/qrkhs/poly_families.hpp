#pragma once

#include <string>
#include <vector>

#include "qrkhs/quaternion.hpp"

namespace qrkhs {

struct IndexTooLarge : std::invalid_argument {
  explicit IndexTooLarge(const char* what) : std::invalid_argument(what) {}
};
struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const char* what) : std::out_of_range(what) {}
};
struct BadParams : std::invalid_argument {
  explicit BadParams(const char* what) : std::invalid_argument(what) {}
};
struct InsufficientSamples : std::invalid_argument {
  InsufficientSamples() : std::invalid_argument("admissibility needs at least N+1 sample points") {}
};

/// Hermite polynomial H_n at a quaternionic argument, by the three-term
/// recurrence H_{n+1} = 2 q H_n - 2 n H_{n-1}. Powers of a single q commute,
/// so the evaluation is unambiguous.
Quaternion hermite(int n, const Quaternion& q);

/// Generalized Laguerre polynomial L^alpha_n at a quaternionic argument, by
/// the three-term recurrence (n+1) L_{n+1} = (2n+1+a-q) L_n - (n+a) L_{n-1}.
Quaternion laguerre(double alpha, int n, const Quaternion& q);

/// Two-index Hermite polynomial (Ito's complex Hermite family at a
/// quaternionic argument),
/// H_{n,m}(q, qbar) = n! m! sum_j (-1)^j qbar^{n-j} q^{m-j} / (j! (n-j)! (m-j)!),
/// conjugate powers kept on the left of plain powers in each term. The
/// (-1)^j / j! factor is what makes the family orthogonal with norm n! m!
/// under the Gaussian measure; without it the n=m=1 member already has
/// norm 5.
Quaternion hermite2(int n, int m, const Quaternion& q);

enum class FamilyKind { Monomial, Hermite, Laguerre, Hermite2 };
enum class Domain { RealLine, ComplexPlane, QuaternionSpace, PositiveHalfLine };

/// Indexed orthonormal-generating family {f_i}, i = 0..N, with weight
/// epsilon and (for Laguerre) order alpha. Hermite2 fixes the first index
/// and runs over the second.
struct BasisFamily {
  FamilyKind kind = FamilyKind::Monomial;
  double epsilon = 1.0;   // in (0,1]; 1 only for Monomial / Hermite2
  double alpha = 0.0;     // Laguerre order, > -1
  int fixed_index = 0;    // Hermite2 first index
  int truncation = 60;    // highest retained index N
  Domain domain = Domain::QuaternionSpace;

  static BasisFamily monomial(int N);
  static BasisFamily hermite(double epsilon, int N);
  static BasisFamily laguerre(double alpha, double epsilon, int N);
  static BasisFamily hermite2(int fixed_n, int N);
};

/// Weighted, normalized family member f_n evaluated at q.
Quaternion family_eval(const BasisFamily& fam, int n, const Quaternion& q);

/// N(q) = sum_{n<=N} |f_n(q)|^2 together with the absolute sum of the last
/// `tail_window` terms, the truncation certificate.
struct NormSum {
  double value = 0.0;
  double tail = 0.0;
};
NormSum norm_sum(const BasisFamily& fam, const Quaternion& q, int tail_window = 10);

struct AdmissibilityCheck {
  std::string name;
  bool pass = false;
  double witness = 0.0;
};
struct AdmissibilityReport {
  std::vector<AdmissibilityCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Checks the kernel-admissibility conditions on a finite sample:
/// (a) N(x) finite with a converging tail at each sample,
/// (b) numerical linear independence of [f_i(x_j)] via the smallest singular
///     value of its complex embedding,
/// (c) some f_i(x) nonzero at every sample.
AdmissibilityReport admissibility_report(const BasisFamily& fam, const std::vector<Quaternion>& samples,
                                         double tol);

}  // namespace qrkhs
