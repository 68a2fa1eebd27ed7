#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "qrkhs/kernels.hpp"
#include "qrkhs/special_functions.hpp"

using namespace qrkhs;

namespace {

Quaternion random_q(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

// Overlap kernel of the coherent states: <xi_x^u|xi_y^v> = conj(u) B(x,y) v
// with B(x,y) = sum_i f_i(x) conj(f_i(y)). Because the factors do not commute,
// this is a genuinely different quaternion from K(x,y) = sum conj(f_i(x)) f_i(y)
// off a common slice; the two coincide whenever x, y share a slice.
Quaternion overlap_kernel(const Kernel& k, const Quaternion& x, const Quaternion& y) {
  const auto fx = family_values(k.family, x), fy = family_values(k.family, y);
  Quaternion s{};
  for (std::size_t i = 0; i < fx.size(); ++i) s += fx[i] * conj(fy[i]);
  return s;
}

}  // namespace

TEST_CASE("kernel series examples") {
  const Kernel k = Kernel::canonical();
  std::mt19937_64 rng(51);
  for (int t = 0; t < 10; ++t)
    CHECK(abs(kernel_series(k, Quaternion{}, random_q(rng, 1.5)).value - Quaternion{1.0}) <= 1e-14);
  // K(q,q) = e^{|q|^2}; q = j gives e
  CHECK(abs(kernel_series(k, Quaternion::j(), Quaternion::j()).value - Quaternion{std::exp(1.0)}) <= 1e-13);

  const Kernel kh = Kernel::hermite(0.5);
  CHECK(kernel_series(kh, Quaternion{}, Quaternion{}).value.w ==
        doctest::Approx(1.0 / std::sqrt(M_PI * 0.75)).epsilon(1e-12));
}

TEST_CASE("kernel series carries a small tail certificate on the validated box") {
  const Kernel k = Kernel::hermite(0.5);
  const KernelValue v = kernel_series(k, Quaternion{1.5, 0.5, 0, 0}, Quaternion{-1.0, 0.2, 0, 0});
  CHECK(v.tail <= 1e-9 * std::max(1.0, abs(v.value)));
  // deep in the divergence region the certificate must refuse
  Kernel tight = Kernel::hermite(0.7, 60);
  const Quaternion far{0.0, 2.5, 0, 0};
  CHECK_THROWS_AS(kernel_series(tight, far, far), TruncationNotConverged);
}

TEST_CASE("closed form examples") {
  // canonical slice e^{xbar y}
  Kernel kc = Kernel::canonical();
  CHECK(abs(kernel_closed(kc, Quaternion{1.0}, Quaternion{1.0}) - Quaternion{std::exp(1.0)}) <= 1e-14);

  // Hermite real at x = y = 1: e^{2e/(1+e)} / sqrt(pi(1-e^2))
  Kernel khr{BasisFamily::hermite(0.5, 120), ClosedFormTag::HermiteReal};
  CHECK(kernel_closed(khr, Quaternion{1.0}, Quaternion{1.0}).w ==
        doctest::Approx(std::exp(2.0 / 3.0) / std::sqrt(M_PI * 0.75)).epsilon(1e-13));

  // Laguerre at x = y = 0: 1/(1 - eps)
  Kernel kl = Kernel::laguerre(0.0, 0.5);
  CHECK(kernel_closed(kl, Quaternion{}, Quaternion{}).w == doctest::Approx(2.0).epsilon(1e-13));

  // slice mismatch rejected for the complex forms
  CHECK_THROWS_AS(kernel_closed(kc, Quaternion{0, 1, 0, 0}, Quaternion{0, 0, 1, 0}), SliceMismatch);
  Kernel k2 = Kernel::hermite2(1);
  CHECK_THROWS_AS(kernel_closed(k2, Quaternion{1.0}, Quaternion{1.0}), NoClosedForm);
}

TEST_CASE("closed form vs series on real grids") {
  for (double eps : {0.3, 0.5, 0.7}) {
    Kernel k{BasisFamily::hermite(eps, 120), ClosedFormTag::HermiteReal};
    for (double x = -2.0; x <= 2.0; x += 1.0)
      for (double y = -2.0; y <= 2.0; y += 1.0) {
        const Quaternion s = kernel_series(k, Quaternion{x}, Quaternion{y}).value;
        const Quaternion c = kernel_closed(k, Quaternion{x}, Quaternion{y});
        // additive floor: when |K| is far below 1 the series value is a
        // cancellation of O(1) terms and carries an absolute error near eps
        CHECK(abs(s - c) <= 1e-9 * abs(c) + 1e-13);
      }
  }
  for (double al : {0.0, 0.5, 2.0}) {
    Kernel k{BasisFamily::laguerre(al, 0.5, 150), ClosedFormTag::LaguerreReal};
    for (double x = 0.0; x <= 8.0; x += 2.0)
      for (double y = 0.0; y <= 8.0; y += 2.0) {
        const Quaternion s = kernel_series(k, Quaternion{x}, Quaternion{y}).value;
        const Quaternion c = kernel_closed(k, Quaternion{x}, Quaternion{y});
        CHECK(abs(s - c) <= 1e-9 * abs(c) + 1e-13);
      }
  }
}

TEST_CASE("closed form vs series on a slice") {
  const Quaternion J = axis(0.5, 1.1);
  Kernel kh = Kernel::hermite(0.5, 300);
  Kernel kl = Kernel::laguerre(0.5, 0.4, 200);
  Kernel kc = Kernel::canonical(80);
  for (double a : {-1.0, 0.5})
    for (double b : {-1.0, 0.8}) {
      const Quaternion x = Quaternion{a} + J * b;
      const Quaternion y = Quaternion{0.3} + J * (-0.6);
      for (const Kernel* k : {&kh, &kl, &kc}) {
        const Quaternion s = kernel_series(*k, x, y).value;
        const Quaternion c = kernel_closed(*k, x, y);
        CHECK(abs(s - c) <= 1e-9 * abs(c));
      }
    }
}

TEST_CASE("Hermitian symmetry of the kernels") {
  std::mt19937_64 rng(52);
  Kernel ks[] = {Kernel::canonical(), Kernel::hermite(0.5), Kernel::laguerre(0.5, 0.4),
                 Kernel::hermite2(1)};
  for (const Kernel& k : ks)
    for (int t = 0; t < 1000; ++t) {
      const Quaternion x = random_q(rng), y = random_q(rng);
      const Quaternion kxy = kernel_series(k, x, y).value;
      const Quaternion kyx = kernel_series(k, y, x).value;
      CHECK(abs(kxy - conj(kyx)) <= 1e-11 * (1.0 + abs(kxy)));
    }
}

TEST_CASE("gram matrix examples") {
  Kernel k = Kernel::canonical();
  const Quaternion x{0.4, 0.3, -0.2, 0.1};
  const QMatrix G1 = gram_matrix(k, {x});
  CHECK(G1(0, 0).w > 0.0);
  CHECK(is_real(G1(0, 0), 1e-14 * G1(0, 0).w));

  const QMatrix G2 = gram_matrix(k, {x, x});
  const Eigen::VectorXd ev = hermitian_eigenvalues(G2, default_tol(G2));
  CHECK(std::abs(ev(0)) <= 1e-10);
  CHECK(ev(ev.size() - 1) > 0.0);

  std::mt19937_64 rng(53);
  std::vector<Quaternion> pts;
  for (int t = 0; t < 20; ++t) pts.push_back(random_q(rng, 1.5));
  const QMatrix G = gram_matrix(k, pts);
  CHECK(hermitian_eigenvalues(G, default_tol(G))(0) >= -1e-9);
  CHECK(is_positive(G, 1e-9));

  CHECK_THROWS_AS(gram_matrix(k, std::vector<Quaternion>(201)), BadParams);
}

TEST_CASE("kernel invariance under unitary basis mixing") {
  // a quaternionic unitary from the polar decomposition U = M (M^dag M)^{-1/2}
  std::mt19937_64 rng(54);
  Kernel k = Kernel::canonical(12);
  k.tail_tol = 1e300;  // N = 12 is a deliberately truncated object here
  const int d = 13;
  QMatrix M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = random_q(rng);
  const QMatrix G = adjoint(M) * M;
  const QMatrix S = hermitian_function(G, default_tol(G), [](double t) { return 1.0 / std::sqrt(t); });
  const QMatrix U = M * S;
  CHECK(max_abs(adjoint(U) * U - QMatrix::identity(d)) <= 1e-10);

  for (int t = 0; t < 20; ++t) {
    const Quaternion x = random_q(rng), y = random_q(rng);
    QVector fx(d), fy(d);
    const auto vx = family_values(k.family, x), vy = family_values(k.family, y);
    for (int i = 0; i < d; ++i) {
      fx[i] = vx[i];
      fy[i] = vy[i];
    }
    const Quaternion direct = inner(fx, fy);
    const Quaternion mixed = inner(mat_apply(adjoint(U), fx), mat_apply(adjoint(U), fy));
    CHECK(abs(direct - mixed) <= 1e-10 * (1.0 + abs(direct)));
    CHECK(abs(direct - kernel_series(k, x, y).value) <= 1e-12 * (1.0 + abs(direct)));
  }
}

TEST_CASE("coherent state coefficient vectors") {
  Kernel k = Kernel::canonical(20);
  k.tail_tol = 1e300;  // identities of the truncated object, any truncation
  // x = 0, v = 1 -> e_0
  const CoefficientVector c0 = cs_vector(k, Quaternion{}, Quaternion{1.0});
  CHECK(c0[0] == Quaternion{1.0});
  for (std::size_t i = 1; i < c0.size(); ++i) CHECK(c0[i] == Quaternion{});
  // v = 0 -> zero vector
  const CoefficientVector cz = cs_vector(k, Quaternion{0.5, 0.1, 0, 0}, Quaternion{});
  CHECK(norm(cz) == 0.0);

  std::mt19937_64 rng(55);
  for (int t = 0; t < 200; ++t) {
    const Quaternion x = random_q(rng), y = random_q(rng);
    const Quaternion u = random_q(rng), v = random_q(rng), q = random_q(rng);
    // xi_x^v q = xi_x^{vq}
    CHECK(norm(cs_vector(k, x, v) * q - cs_vector(k, x, v * q)) <= 1e-12);
    // <xi_x^u | xi_y^v> = conj(u) B(x,y) v with the overlap kernel B
    const Quaternion lhs = inner(cs_vector(k, x, u), cs_vector(k, y, v));
    const Quaternion rhs = conj(u) * overlap_kernel(k, x, y) * v;
    CHECK(abs(lhs - rhs) <= 1e-11 * (1.0 + abs(rhs)));
    // ||xi||^2 = conj(v) K(x,x) v
    const CoefficientVector cx = cs_vector(k, x, v);
    const Quaternion n2v = conj(v) * kernel_series(k, x, x).value * v;
    CHECK(std::abs(inner(cx, cx).w - n2v.w) <= 1e-11 * (1.0 + n2v.w));
  }

  // on a common slice the factors commute and B(x,y) = conj(K(x,y)) = K(y,x)
  const Quaternion J = axis(0.4, 2.0);
  const Quaternion xs = Quaternion{0.3} + J * 0.7, ys = Quaternion{-0.5} + J * 0.2;
  CHECK(abs(overlap_kernel(k, xs, ys) - kernel_series(k, ys, xs).value) <= 1e-13);
}

TEST_CASE("evaluation map and reproducing property") {
  Kernel k = Kernel::canonical(20);
  k.tail_tol = 1e300;  // identities of the truncated object, any truncation
  std::mt19937_64 rng(56);

  // coeffs = e_0 evaluates to f_0 = 1
  CoefficientVector e0(21);
  e0[0] = Quaternion{1.0};
  CHECK(abs(evaluate_member(e0, k, random_q(rng)) - Quaternion{1.0}) <= 1e-14);

  for (int t = 0; t < 200; ++t) {
    const Quaternion x = random_q(rng), y = random_q(rng), u = random_q(rng), v = random_q(rng);
    // xi_y^v evaluated at x equals B(x,y) v; on a common slice B = K
    const Quaternion lhs = evaluate_member(cs_vector(k, y, v), k, x);
    const Quaternion rhs = overlap_kernel(k, x, y) * v;
    CHECK(abs(lhs - rhs) <= 1e-12 * (1.0 + abs(rhs)));

    // reproducing identity <xi_x^u | phi>_K = conj(u) phi(x) for random phi
    CoefficientVector c(21);
    for (int i = 0; i <= 20; ++i) c[i] = random_q(rng);
    const Quaternion phix = evaluate_member(c, k, x);
    const Quaternion rep = inner(cs_vector(k, x, u), c);
    CHECK(abs(rep - conj(u) * phix) <= 1e-10 * (1.0 + abs(phix)));

    // norm bound ||phi(x)|| <= sqrt(K(x,x)) ||phi||_K
    const double bound = std::sqrt(kernel_series(k, x, x).value.w) * norm(c);
    CHECK(abs(phix) <= bound * (1.0 + 1e-12));
  }

  CHECK_THROWS_AS(evaluate_member(CoefficientVector(5), k, Quaternion{1.0}), DimensionMismatch);
}

TEST_CASE("same_slice") {
  const Quaternion J = axis(0.7, 0.9);
  CHECK(same_slice(Quaternion{1.0} + J * 0.5, Quaternion{-0.3} + J * 2.0));
  CHECK(same_slice(Quaternion{1.0} + J * 0.5, Quaternion{-0.3} - J * 2.0));  // -J, same plane
  CHECK(same_slice(Quaternion{2.0}, Quaternion{0, 1, 0, 0}));                // real is in every slice
  CHECK_FALSE(same_slice(Quaternion{0, 1, 0, 0}, Quaternion{0, 0, 1, 0}));
}

TEST_CASE("vector-valued kernels on K = H^2") {
  // synthetic family: f_i(q) = monomial_i(q) v_i with fixed H^2 directions
  std::mt19937_64 rng(57);
  const int N = 6;
  std::vector<QVector> dirs;
  for (int i = 0; i <= N; ++i) dirs.push_back(QVector{random_q(rng), random_q(rng)});
  const BasisFamily mono = BasisFamily::monomial(N);
  VectorFamily fam;
  fam.dim_K = 2;
  fam.truncation = N;
  fam.eval = [&](int i, const Quaternion& q) { return dirs[i] * family_eval(mono, i, q); };

  for (int t = 0; t < 50; ++t) {
    const Quaternion x = random_q(rng), y = random_q(rng);
    const QMatrix Kxy = op_kernel(fam, x, y);
    const QMatrix Kyx = op_kernel(fam, y, x);
    CHECK(max_abs(Kxy - adjoint(Kyx)) <= 1e-12 * (1.0 + max_abs(Kxy)));
    CHECK(is_positive(op_kernel(fam, x, x), 1e-10));

    const QVector u{random_q(rng), random_q(rng)}, v{random_q(rng), random_q(rng)};
    const Quaternion lhs = inner(vcs_vector(fam, x, u), vcs_vector(fam, y, v));
    const Quaternion rhs = inner(u, mat_apply(Kxy, v));
    CHECK(abs(lhs - rhs) <= 1e-11 * (1.0 + abs(rhs)));
  }

  // linear independence of the CS slice basis at a fixed point
  const Quaternion x0{0.6, 0.2, -0.4, 0.3};
  QVector e1{Quaternion{1.0}, Quaternion{}}, e2{Quaternion{}, Quaternion{1.0}};
  QMatrix G(2, 2);
  const QVector c1 = vcs_vector(fam, x0, e1), c2 = vcs_vector(fam, x0, e2);
  G(0, 0) = inner(c1, c1);
  G(0, 1) = inner(c1, c2);
  G(1, 0) = inner(c2, c1);
  G(1, 1) = inner(c2, c2);
  CHECK(hermitian_eigenvalues(G, default_tol(G))(0) > 1e-8);
}
