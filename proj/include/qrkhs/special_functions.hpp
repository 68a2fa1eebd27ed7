#pragma once

#include <stdexcept>

#include "qrkhs/quaternion.hpp"

namespace qrkhs::special {

struct PoleError : std::domain_error {
  PoleError() : std::domain_error("gamma pole at nonpositive integer") {}
};
struct DomainError : std::domain_error {
  explicit DomainError(const char* what) : std::domain_error(what) {}
};
struct OverflowError : std::overflow_error {
  explicit OverflowError(const char* what) : std::overflow_error(what) {}
};

struct SpecialFnConfig {
  double series_tol = 1e-15;
  int max_terms = 500;
  double asymptotic_switch = 60.0;
};

/// Gamma function; poles at nonpositive integers are errors.
double gamma(double x);

/// log Gamma(x) for x > 0.
double lgamma(double x);

/// Modified Bessel I_alpha(x), alpha > -1, x >= 0, by the ascending series
/// sum_m (x/2)^{2m+alpha} / (m! Gamma(m+alpha+1)).
double bessel_I(double alpha, double x, const SpecialFnConfig& cfg = {});

/// Modified Bessel K_alpha(x), x > 0. Even in alpha.
double bessel_K(double alpha, double x);

/// (w)^{-alpha/2} I_alpha(2 sqrt(w) / s) as an entire power series in w,
/// valid for quaternionic slice arguments: sum_m w^m / (s^{2m+alpha} m! Gamma(m+alpha+1)).
Quaternion bessel_I_ratio(double alpha, const Quaternion& w, double s, const SpecialFnConfig& cfg = {});

}  // namespace qrkhs::special
