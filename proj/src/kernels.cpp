#include "qrkhs/kernels.hpp"

#include <cmath>

#include "qrkhs/special_functions.hpp"

namespace qrkhs {

Kernel Kernel::canonical(int N) { return {BasisFamily::monomial(N), ClosedFormTag::CanonicalSlice}; }
Kernel Kernel::hermite(double epsilon, int N) {
  return {BasisFamily::hermite(epsilon, N), ClosedFormTag::HermiteComplex};
}
Kernel Kernel::laguerre(double alpha, double epsilon, int N) {
  return {BasisFamily::laguerre(alpha, epsilon, N), ClosedFormTag::LaguerreComplex};
}
Kernel Kernel::hermite2(int fixed_n, int N) { return {BasisFamily::hermite2(fixed_n, N), ClosedFormTag::None}; }

// Weighted recurrences keep the normalized members at tame magnitudes even at
// high index; the explicit definitions in poly_families are the oracle.
std::vector<Quaternion> family_values(const BasisFamily& fam, const Quaternion& q) {
  const int N = fam.truncation;
  std::vector<Quaternion> f(N + 1);
  switch (fam.kind) {
    case FamilyKind::Monomial: {
      f[0] = Quaternion{1.0};
      for (int n = 0; n < N; ++n) f[n + 1] = f[n] * q / std::sqrt(n + 1.0);
      return f;
    }
    case FamilyKind::Hermite: {
      const double eps = fam.epsilon;
      f[0] = Quaternion{std::pow(M_PI, -0.25)};
      if (N == 0) return f;
      f[1] = std::sqrt(2.0 * eps) * (q * f[0]);
      for (int n = 1; n < N; ++n) {
        const double a = std::sqrt(2.0 * eps / (n + 1.0));
        const double b = eps * std::sqrt(n / (n + 1.0));
        f[n + 1] = a * (q * f[n]) - b * f[n - 1];
      }
      return f;
    }
    case FamilyKind::Laguerre: {
      const double eps = fam.epsilon, al = fam.alpha;
      f[0] = Quaternion{std::exp(-0.5 * std::lgamma(al + 1.0))};
      if (N == 0) return f;
      f[1] = std::sqrt(eps / (al + 1.0)) * ((Quaternion{al + 1.0} - q) * f[0]);
      for (int n = 1; n < N; ++n) {
        const double ra = std::sqrt(eps * (n + 1.0) / (n + 1.0 + al));
        const double rb = eps * std::sqrt(n * (n + 1.0) / ((n + al) * (n + 1.0 + al)));
        f[n + 1] = (ra / (n + 1.0)) * ((Quaternion{2.0 * n + 1.0 + al} - q) * f[n]) -
                   (rb * (n + al) / (n + 1.0)) * f[n - 1];
      }
      return f;
    }
    case FamilyKind::Hermite2: {
      const int n0 = fam.fixed_index;
      std::vector<Quaternion> qp(std::max(n0, N) + 1), qcp(n0 + 1);
      qp[0] = qcp[0] = Quaternion{1.0};
      for (std::size_t t = 1; t < qp.size(); ++t) qp[t] = qp[t - 1] * q;
      for (int t = 1; t <= n0; ++t) qcp[t] = qcp[t - 1] * conj(q);
      const double lg0 = std::lgamma(n0 + 1.0);
      for (int m = 0; m <= N; ++m) {
        Quaternion s{};
        for (int j = 0; j <= std::min(n0, m); ++j) {
          const double c = std::exp(0.5 * (lg0 + std::lgamma(m + 1.0)) - std::lgamma(j + 1.0) -
                                    std::lgamma(n0 - j + 1.0) - std::lgamma(m - j + 1.0));
          s += ((j % 2 == 0) ? c : -c) * (qcp[n0 - j] * qp[m - j]);
        }
        f[m] = s;
      }
      return f;
    }
  }
  throw BadParams("family_values: unknown kind");
}

KernelValue kernel_series(const Kernel& ker, const Quaternion& x, const Quaternion& y) {
  const std::vector<Quaternion> fx = family_values(ker.family, x);
  const std::vector<Quaternion> fy = (x == y) ? fx : family_values(ker.family, y);
  const int N = ker.family.truncation;
  KernelValue out;
  double tail = 0.0;
  const int window = std::min(10, (N + 1) / 2);  // never count more than half the series as tail
  for (int n = 0; n <= N; ++n) {
    const Quaternion term = conj(fx[n]) * fy[n];
    out.value += term;
    if (n > N - window) tail += abs(term);
  }
  out.tail = tail;
  if (x == y && out.value.w < 1e-300) throw KernelDegenerate();
  if (tail > ker.tail_tol * std::max(1.0, abs(out.value))) throw TruncationNotConverged(tail);
  return out;
}

bool same_slice(const Quaternion& x, const Quaternion& y, double tol) {
  const double nx = std::sqrt(x.x * x.x + x.y * x.y + x.z * x.z);
  const double ny = std::sqrt(y.x * y.x + y.y * y.y + y.z * y.z);
  const double scale = std::max({abs(x), abs(y), 1.0});
  if (nx <= tol * scale || ny <= tol * scale) return true;
  const double cx = x.y * y.z - x.z * y.y;
  const double cy = x.z * y.x - x.x * y.z;
  const double cz = x.x * y.y - x.y * y.x;
  return std::sqrt(cx * cx + cy * cy + cz * cz) <= tol * nx * ny;
}

static void require_same_slice(const Quaternion& x, const Quaternion& y) {
  if (!same_slice(x, y)) throw SliceMismatch();
}

static void require_real_nonneg(const Quaternion& q) {
  if (!is_real(q, 1e-14 * std::max(1.0, abs(q))) || q.w < 0.0)
    throw special::DomainError("Laguerre real closed form needs nonnegative real arguments");
}

Quaternion kernel_closed(const Kernel& ker, const Quaternion& x, const Quaternion& y) {
  const double eps = ker.family.epsilon, al = ker.family.alpha;
  switch (ker.closed_form) {
    case ClosedFormTag::None:
      throw NoClosedForm();
    case ClosedFormTag::CanonicalSlice:
      require_same_slice(x, y);
      return exp(conj(x) * y);
    case ClosedFormTag::HermiteReal: {
      if (!is_real(x) || !is_real(y)) throw special::DomainError("Hermite real closed form needs real arguments");
      const double c = eps * eps / (1.0 - eps * eps);
      const double e = -c * (x.w * x.w + y.w * y.w - (2.0 / eps) * x.w * y.w);
      return Quaternion{std::exp(e) / std::sqrt(M_PI * (1.0 - eps * eps))};
    }
    case ClosedFormTag::HermiteComplex: {
      require_same_slice(x, y);
      const Quaternion xc = conj(x);
      const double c = eps * eps / (1.0 - eps * eps);
      const Quaternion e = (-c) * (xc * xc + y * y - (2.0 / eps) * (xc * y));
      return exp(e) / std::sqrt(M_PI * (1.0 - eps * eps));
    }
    case ClosedFormTag::LaguerreReal: {
      require_real_nonneg(x);
      require_real_nonneg(y);
      const Quaternion w = (eps * x.w * y.w) * Quaternion{1.0};
      const double pre = std::exp(-eps * (x.w + y.w) / (1.0 - eps)) / (1.0 - eps);
      return pre * special::bessel_I_ratio(al, w, 1.0 - eps);
    }
    case ClosedFormTag::LaguerreComplex: {
      require_same_slice(x, y);
      const Quaternion w = eps * (conj(x) * y);
      const Quaternion pre = exp((-eps / (1.0 - eps)) * (conj(x) + y)) / (1.0 - eps);
      return pre * special::bessel_I_ratio(al, w, 1.0 - eps);
    }
  }
  throw NoClosedForm();
}

QMatrix gram_matrix(const Kernel& ker, const std::vector<Quaternion>& points,
                    const std::vector<Quaternion>* vectors) {
  const std::size_t m = points.size();
  if (m > 200) throw BadParams("gram_matrix: more than 200 points");
  if (vectors && vectors->size() != m) throw DimensionMismatch("gram_matrix: vectors/points mismatch");
  std::vector<std::vector<Quaternion>> fv(m);
  for (std::size_t i = 0; i < m; ++i) fv[i] = family_values(ker.family, points[i]);
  QMatrix G(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      Quaternion k{};
      for (int n = 0; n <= ker.family.truncation; ++n) k += conj(fv[i][n]) * fv[j][n];
      if (vectors) k = conj((*vectors)[i]) * k * (*vectors)[j];
      G(i, j) = k;
      G(j, i) = conj(k);
    }
  return G;
}

CoefficientVector cs_vector(const Kernel& ker, const Quaternion& x, const Quaternion& v) {
  const std::vector<Quaternion> fx = family_values(ker.family, x);
  CoefficientVector c(fx.size());
  for (std::size_t i = 0; i < fx.size(); ++i) c[i] = conj(fx[i]) * v;
  return c;
}

Quaternion evaluate_member(const CoefficientVector& coeffs, const Kernel& ker, const Quaternion& x) {
  if (static_cast<int>(coeffs.size()) != ker.family.truncation + 1)
    throw DimensionMismatch("evaluate_member: coefficient length does not match truncation");
  const std::vector<Quaternion> fx = family_values(ker.family, x);
  Quaternion s{};
  for (std::size_t i = 0; i < fx.size(); ++i) s += fx[i] * coeffs[i];
  return s;
}

QMatrix op_kernel(const VectorFamily& fam, const Quaternion& x, const Quaternion& y) {
  QMatrix K(fam.dim_K, fam.dim_K);
  for (int i = 0; i <= fam.truncation; ++i) {
    const QVector fx = fam.eval(i, x), fy = fam.eval(i, y);
    K = K + QMatrix::outer(fx, fy);
  }
  return K;
}

QVector vcs_vector(const VectorFamily& fam, const Quaternion& x, const QVector& v) {
  QVector c(fam.truncation + 1);
  for (int i = 0; i <= fam.truncation; ++i) c[i] = inner(fam.eval(i, x), v);
  return c;
}

}  // namespace qrkhs
