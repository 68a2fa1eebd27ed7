#include "qrkhs/poly_families.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "qrkhs/kernels.hpp"
#include "qrkhs/qlinalg.hpp"
#include "qrkhs/special_functions.hpp"

namespace qrkhs {

Quaternion hermite(int n, const Quaternion& q) {
  if (n < 0) throw IndexOutOfRange("hermite: negative index");
  if (n > 300) throw IndexTooLarge("hermite: index above 300");
  Quaternion hm1{1.0};  // H_0
  if (n == 0) return hm1;
  Quaternion h = 2.0 * q;  // H_1
  for (int k = 1; k < n; ++k) {
    const Quaternion hp1 = 2.0 * (q * h) - (2.0 * k) * hm1;
    hm1 = h;
    h = hp1;
  }
  return h;
}

Quaternion laguerre(double alpha, int n, const Quaternion& q) {
  if (alpha <= -1.0) throw special::DomainError("laguerre: order must exceed -1");
  if (n < 0) throw IndexOutOfRange("laguerre: negative index");
  if (n > 300) throw IndexTooLarge("laguerre: index above 300");
  // three-term recurrence; the explicit Gamma sum is an alternating series
  // whose terms dwarf the result for moderate |q| and loses all digits there
  Quaternion lm1{1.0};  // L_0
  if (n == 0) return lm1;
  Quaternion l = Quaternion{1.0 + alpha} - q;  // L_1
  for (int k = 1; k < n; ++k) {
    const Quaternion lp1 =
        (1.0 / (k + 1.0)) * ((Quaternion{2.0 * k + 1.0 + alpha} - q) * l - (k + alpha) * lm1);
    lm1 = l;
    l = lp1;
  }
  return l;
}

Quaternion hermite2(int n, int m, const Quaternion& q) {
  if (n < 0 || m < 0) throw IndexOutOfRange("hermite2: negative index");
  if (n > 100 || m > 100) throw IndexTooLarge("hermite2: index above 100");
  const Quaternion qc = conj(q);
  const double lg_nm = std::lgamma(n + 1.0) + std::lgamma(m + 1.0);
  Quaternion sum{};
  for (int j = 0; j <= std::min(n, m); ++j) {
    const double coef = std::exp(lg_nm - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) -
                                 std::lgamma(m - j + 1.0));
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += (sign * coef) * (pow(qc, n - j) * pow(q, m - j));
  }
  return sum;
}

BasisFamily BasisFamily::monomial(int N) {
  BasisFamily f;
  f.kind = FamilyKind::Monomial;
  f.truncation = N;
  return f;
}

BasisFamily BasisFamily::hermite(double epsilon, int N) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw BadParams("Hermite family needs epsilon in (0,1)");
  BasisFamily f;
  f.kind = FamilyKind::Hermite;
  f.epsilon = epsilon;
  f.truncation = N;
  return f;
}

BasisFamily BasisFamily::laguerre(double alpha, double epsilon, int N) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw BadParams("Laguerre family needs epsilon in (0,1)");
  if (alpha <= -1.0) throw BadParams("Laguerre family needs alpha > -1");
  BasisFamily f;
  f.kind = FamilyKind::Laguerre;
  f.epsilon = epsilon;
  f.alpha = alpha;
  f.truncation = N;
  return f;
}

BasisFamily BasisFamily::hermite2(int fixed_n, int N) {
  if (fixed_n < 0) throw BadParams("Hermite2 family needs a nonnegative fixed index");
  BasisFamily f;
  f.kind = FamilyKind::Hermite2;
  f.fixed_index = fixed_n;
  f.truncation = N;
  return f;
}

Quaternion family_eval(const BasisFamily& fam, int n, const Quaternion& q) {
  if (n < 0 || n > fam.truncation) throw IndexOutOfRange("family_eval: index outside 0..N");
  switch (fam.kind) {
    case FamilyKind::Monomial:
      return std::exp(-0.5 * std::lgamma(n + 1.0)) * pow(q, n);
    case FamilyKind::Hermite: {
      // sqrt(eps^n / (sqrt(pi) 2^n n!)) H_n(q)
      const double lw = 0.5 * (n * std::log(fam.epsilon) - 0.5 * std::log(M_PI) -
                               n * std::log(2.0) - std::lgamma(n + 1.0));
      return std::exp(lw) * hermite(n, q);
    }
    case FamilyKind::Laguerre: {
      // sqrt(eps^n n! / Gamma(n+alpha+1)) L^alpha_n(q)
      const double lw =
          0.5 * (n * std::log(fam.epsilon) + std::lgamma(n + 1.0) - std::lgamma(n + fam.alpha + 1.0));
      return std::exp(lw) * laguerre(fam.alpha, n, q);
    }
    case FamilyKind::Hermite2: {
      // H_{n0,m}(q,qbar) / sqrt(n0! m!)
      const double lw = -0.5 * (std::lgamma(fam.fixed_index + 1.0) + std::lgamma(n + 1.0));
      return std::exp(lw) * hermite2(fam.fixed_index, n, q);
    }
  }
  throw BadParams("family_eval: unknown kind");
}

NormSum norm_sum(const BasisFamily& fam, const Quaternion& q, int tail_window) {
  NormSum s;
  // the weighted recurrences stay in range where the raw polynomial values
  // would overflow (Hermite values near index 300 exceed double range)
  const std::vector<Quaternion> f = family_values(fam, q);
  for (int n = 0; n <= fam.truncation; ++n) {
    const double t = norm2(f[n]);
    s.value += t;
    if (n > fam.truncation - tail_window) s.tail += t;
  }
  return s;
}

AdmissibilityReport admissibility_report(const BasisFamily& fam, const std::vector<Quaternion>& samples,
                                         double tol) {
  const int N = fam.truncation;
  if (static_cast<int>(samples.size()) < N + 1) throw InsufficientSamples();
  AdmissibilityReport rep;

  // (a) finite partial sums with a converging tail at each sample; probe past
  // the working truncation so a deliberately short family still reveals
  // whether its underlying series converges
  BasisFamily probe = fam;
  // quaternionic Hermite terms decay slowly (eps^n against e^{2|Im q| sqrt(2n)}),
  // so the probe has to run well past the working truncation
  probe.truncation = N + 80;
  double worst_tail = 0.0;
  bool a_pass = true;
  for (const auto& x : samples) {
    const NormSum s = norm_sum(probe, x);
    if (!std::isfinite(s.value)) a_pass = false;
    const double ratio = s.tail / (s.value + 1e-300);
    worst_tail = std::max(worst_tail, ratio);
  }
  rep.checks.push_back({"(a) finite norm sum, tail ratio", a_pass && worst_tail < 1e-3, worst_tail});

  // (b) numerical linear independence of the sample matrix [f_i(x_j)]
  QMatrix F(samples.size(), N + 1);
  for (std::size_t j = 0; j < samples.size(); ++j)
    for (int i = 0; i <= N; ++i) F(j, i) = family_eval(fam, i, samples[j]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(embed_complex(F));
  const double smin = svd.singularValues().tail<1>()(0);
  rep.checks.push_back({"(b) smallest singular value of sample matrix", smin > tol, smin});

  // (c) some f_i(x) != 0 at every sample
  double worst_n = std::numeric_limits<double>::infinity();
  for (const auto& x : samples) worst_n = std::min(worst_n, norm_sum(fam, x).value);
  rep.checks.push_back({"(c) family nonvanishing at each sample", worst_n > 0.0, worst_n});

  return rep;
}

}  // namespace qrkhs
