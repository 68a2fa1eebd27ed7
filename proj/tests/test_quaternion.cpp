#include <random>

#include "doctest.h"
#include "qrkhs/quaternion.hpp"

using namespace qrkhs;

namespace {

Quaternion random_q(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("Hamilton product follows the multiplication table") {
  const Quaternion i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * j == -i);
  CHECK(k * i == j);
  CHECK(i * i == Quaternion{-1.0});
  CHECK(j * j == Quaternion{-1.0});
  CHECK(k * k == Quaternion{-1.0});

  const Quaternion q{1, 2, 3, 4};
  CHECK(q * Quaternion{1.0} == q);
  CHECK((Quaternion{1, 1, 0, 0} * Quaternion{1, 0, 1, 0}) == Quaternion{1, 1, 1, 1});
}

TEST_CASE("multiplication is associative and distributive on integer quaternions") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const Quaternion a{double(d(rng)), double(d(rng)), double(d(rng)), double(d(rng))};
    const Quaternion b{double(d(rng)), double(d(rng)), double(d(rng)), double(d(rng))};
    const Quaternion c{double(d(rng)), double(d(rng)), double(d(rng)), double(d(rng))};
    CHECK((a * b) * c == a * (b * c));  // exact: integer components stay integral
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("conjugation examples and anti-homomorphism") {
  CHECK(conj(Quaternion{1, 1, 1, 1}) == Quaternion{1, -1, -1, -1});
  CHECK(conj(Quaternion{5.0}) == Quaternion{5.0});

  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int t = 0; t < 500; ++t) {
    const Quaternion p{double(d(rng)), double(d(rng)), double(d(rng)), double(d(rng))};
    const Quaternion q{double(d(rng)), double(d(rng)), double(d(rng)), double(d(rng))};
    CHECK(conj(conj(p)) == p);
    CHECK(conj(p * q) == conj(q) * conj(p));  // exact on integers
  }
}

TEST_CASE("norm2 examples and multiplicativity") {
  CHECK(norm2(Quaternion{1, 1, 1, 1}) == 4.0);
  CHECK(norm2(Quaternion{}) == 0.0);

  std::mt19937_64 rng(13);
  for (int t = 0; t < 10000; ++t) {
    const Quaternion p = random_q(rng, 2.0), q = random_q(rng, 2.0);
    const double lhs = norm2(p * q), rhs = norm2(p) * norm2(q);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs + 1e-300);
    // q qbar = qbar q = |q|^2, imaginary part at rounding level
    const Quaternion pp = p * conj(p);
    CHECK(std::abs(pp.w - norm2(p)) <= 1e-15 * norm2(p));
    CHECK(qrkhs::abs(pp - Quaternion{norm2(p)}) <= 1e-15 * norm2(p));
  }
}

TEST_CASE("integer powers") {
  CHECK(pow(Quaternion::j(), 2) == Quaternion{-1.0});
  CHECK(pow(Quaternion{1, 1, 0, 0}, 4) == Quaternion{-4.0});

  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    const Quaternion q = random_q(rng, 2.0);
    CHECK(pow(q, 0) == Quaternion{1.0});
    Quaternion p{1.0};
    for (unsigned n = 1; n <= 30; ++n) {
      p = p * q;
      CHECK(qrkhs::abs(pow(q, n) - p) <= 1e-12 * qrkhs::abs(p) + 1e-280);
    }
  }
}

TEST_CASE("qpow agrees with the polar form r^n e^{J n theta2}") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 500; ++t) {
    const Quaternion q = random_q(rng, 1.5);
    if (qrkhs::abs(q) < 1e-6) continue;
    const PolarForm p = to_polar(q);
    for (unsigned n = 1; n <= 8; ++n) {
      const double rn = std::pow(p.r, n);
      const Quaternion expect =
          rn * (Quaternion{std::cos(n * p.theta2)} + axis(p) * std::sin(n * p.theta2));
      CHECK(qrkhs::abs(pow(q, n) - expect) <= 1e-11 * rn + 1e-13);
    }
  }
}

TEST_CASE("exponential") {
  CHECK(qrkhs::exp(Quaternion{}) == Quaternion{1.0});
  const Quaternion e1 = qrkhs::exp(Quaternion{1.0});
  CHECK(e1.w == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  // e^{J t} = cos t + J sin t for any unit imaginary J
  const Quaternion J = axis(0.7, 1.3);
  const double t = 0.9;
  const Quaternion e = qrkhs::exp(J * t);
  CHECK(qrkhs::abs(e - (Quaternion{std::cos(t)} + J * std::sin(t))) <= 1e-15);
}

TEST_CASE("polar form examples") {
  const PolarForm pi_ = to_polar(Quaternion::i());
  CHECK(pi_.r == doctest::Approx(1.0));
  CHECK(pi_.theta2 == doctest::Approx(M_PI / 2));
  CHECK(qrkhs::abs(axis(pi_) - Quaternion::i()) <= 1e-15);
  CHECK(pi_.theta1 == doctest::Approx(M_PI / 2));
  CHECK(pi_.phi == doctest::Approx(0.0));

  const PolarForm pk = to_polar(Quaternion::k());
  CHECK(pk.theta1 == doctest::Approx(0.0));
  CHECK(qrkhs::abs(axis(pk) - Quaternion::k()) <= 1e-15);

  PolarForm real2;
  real2.r = 2.0;
  real2.theta2 = 0.0;
  real2.theta1 = 0.4;
  real2.phi = 1.0;
  CHECK(qrkhs::abs(from_polar(real2) - Quaternion{2.0}) <= 1e-15);

  CHECK_THROWS_AS(to_polar(Quaternion{}), DegenerateModulus);

  const PolarForm pr = to_polar(Quaternion{-3.0});
  CHECK(pr.degenerate_axis);
  CHECK(qrkhs::abs(from_polar(pr) - Quaternion{-3.0}) <= 1e-14);
}

TEST_CASE("polar round trip on random quaternions") {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 10000; ++t) {
    const Quaternion q = random_q(rng, 3.0);
    if (norm2(q) == 0.0) continue;
    const PolarForm p = to_polar(q);
    CHECK(p.theta1 >= 0.0);
    CHECK(p.theta1 <= M_PI / 2 + 1e-15);
    CHECK(p.theta2 >= 0.0);
    CHECK(p.theta2 < 2 * M_PI + 1e-15);
    const Quaternion J = axis(p);
    CHECK(qrkhs::abs(J * J + Quaternion{1.0}) <= 1e-15);  // J^2 = -1
    const Quaternion back = from_polar(p);
    CHECK(std::abs(back.w - q.w) <= 1e-13 * (1 + p.r));
    CHECK(std::abs(back.x - q.x) <= 1e-13 * (1 + p.r));
    CHECK(std::abs(back.y - q.y) <= 1e-13 * (1 + p.r));
    CHECK(std::abs(back.z - q.z) <= 1e-13 * (1 + p.r));
  }
}
