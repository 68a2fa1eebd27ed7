#include "qrkhs/special_functions.hpp"

#include <cmath>

namespace qrkhs::special {

double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw PoleError();
  if (x > 171.7) throw OverflowError("gamma overflow for x > ~171.6");
  return std::tgamma(x);
}

double lgamma(double x) {
  if (x <= 0.0) throw PoleError();
  return std::lgamma(x);
}

double bessel_I(double alpha, double x, const SpecialFnConfig& cfg) {
  if (alpha <= -1.0) throw DomainError("bessel_I: order must exceed -1");
  if (x < 0.0) throw DomainError("bessel_I: negative argument");
  if (x > 700.0) throw OverflowError("bessel_I overflow");
  if (x == 0.0) return alpha == 0.0 ? 1.0 : 0.0;
  // All terms positive; no cancellation. Leading term via lgamma to dodge
  // overflow in Gamma(m+alpha+1) at large order.
  const double h = x / 2.0;
  double term = std::exp(alpha * std::log(h) - std::lgamma(alpha + 1.0));
  double sum = term;
  for (int m = 1; m <= cfg.max_terms; ++m) {
    term *= h * h / (m * (m + alpha));
    sum += term;
    if (term < cfg.series_tol * sum) return sum;
  }
  throw DomainError("bessel_I: series did not converge");
}

double bessel_K(double alpha, double x) {
  if (x <= 0.0) throw DomainError("bessel_K: argument must be positive");
  alpha = std::abs(alpha);  // K is even in its order
  return std::cyl_bessel_k(alpha, x);
}

Quaternion bessel_I_ratio(double alpha, const Quaternion& w, double s, const SpecialFnConfig& cfg) {
  if (alpha <= -1.0) throw DomainError("bessel_I_ratio: order must exceed -1");
  // term_0 = s^{-alpha} / Gamma(alpha+1); term_{m+1} = term_m * w / (s^2 (m+1)(m+1+alpha))
  double c = std::exp(-alpha * std::log(s) - std::lgamma(alpha + 1.0));
  Quaternion term{c};
  Quaternion sum = term;
  const double s2 = s * s;
  for (int m = 1; m <= cfg.max_terms; ++m) {
    term = term * w / (s2 * m * (m + alpha));
    sum += term;
    if (abs(term) < cfg.series_tol * (abs(sum) + 1e-300)) return sum;
  }
  throw DomainError("bessel_I_ratio: series did not converge");
}

}  // namespace qrkhs::special
