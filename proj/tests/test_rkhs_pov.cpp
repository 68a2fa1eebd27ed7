#include <cmath>
#include <random>

#include "doctest.h"
#include "qrkhs/rkhs_pov.hpp"

using namespace qrkhs;

namespace {

Quaternion random_q(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("partition text format") {
  const Partition p = Partition::parse(
      "# radial split with an angular wedge\n"
      "inner: r < 1\n"
      "wedge: r >= 1 & theta2 < 3.141592653589793\n"
      "rest: r >= 1 & theta2 >= 3.141592653589793\n");
  CHECK(p.cells.size() == 3);
  CHECK(p.cells[0].name == "inner");
  QuadNode n;
  n.r = 0.5;
  CHECK(p.cells[0].contains(n));
  n.r = 2.0;
  n.theta2 = 1.0;
  CHECK(p.cells[1].contains(n));
  CHECK_FALSE(p.cells[2].contains(n));

  CHECK(Partition::parse("everything: all\n").cells[0].contains(n));
  CHECK_THROWS_AS(Partition::parse("cell without predicate\n"), PartitionParseError);
  CHECK_THROWS_AS(Partition::parse("c: q < 1\n"), PartitionParseError);
  CHECK_THROWS_AS(Partition::parse("c: r ~ 1\n"), PartitionParseError);
  CHECK_THROWS_AS(Partition::parse(""), PartitionParseError);
}

TEST_CASE("partition assignment catches overlap and gaps") {
  const MeasureRule rule = build_rule(MeasureKind::CanonicalGaussQ, {}, {16, 4, 2});
  const Partition ok = Partition::split("x", 0.0);
  const auto idx = ok.assign(rule);
  CHECK(idx.size() == 2);
  CHECK(idx[0].size() + idx[1].size() == rule.nodes.size());

  Partition overlap = Partition::parse("a: r >= 0\nb: x >= 0\n");
  CHECK_THROWS_AS(overlap.assign(rule), OverlappingCells);

  Partition gap = Partition::parse("a: r < 0.5\n");
  CHECK_THROWS_AS(gap.assign(rule), UncoveredNodes);
  gap.covers_domain = false;
  CHECK_NOTHROW(gap.assign(rule));
}

TEST_CASE("weighted median splits the mass in half") {
  const MeasureRule rule = build_rule(MeasureKind::CanonicalGaussQ, {}, {64, 16, 8});
  const double med = weighted_median_r(rule);
  double below = 0.0, at = 0.0, total = 0.0;
  for (const auto& n : rule.nodes) {
    total += n.w;
    if (n.r < med) below += n.w;
    if (n.r == med) at += n.w;
  }
  // defining property of a weighted median: mass strictly below is at most
  // half, mass up to and including the median is at least half
  CHECK(below <= 0.5 * total);
  CHECK(below + at >= 0.5 * total);
}

TEST_CASE("localization operator") {
  const Kernel k = Kernel::canonical(6);
  const QMatrix F0 = localization_operator(k, Quaternion{});
  CHECK(F0(0, 0) == Quaternion{1.0});
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (i || j) CHECK(F0(i, j) == Quaternion{});

  const Quaternion x{0.7, 0.3, -0.2, 0.1};
  const QMatrix F = localization_operator(k, x);
  CHECK(is_positive(F, 1e-10));
  // trace equals the truncated K(x,x) = sum |f_i(x)|^2
  Quaternion tr{};
  for (int i = 0; i < 7; ++i) tr += F(i, i);
  const NormSum ns = norm_sum(k.family, x);
  CHECK(std::abs(tr.w - ns.value) <= 1e-13 * ns.value);
  CHECK(is_real(tr, 1e-14 * ns.value));
  // rank one: a single nonzero eigenvalue pair of the embedding
  const Eigen::VectorXd ev = hermitian_eigenvalues(F, default_tol(F));
  CHECK(ev(ev.size() - 1) > 1e-3);
  CHECK(std::abs(ev(ev.size() - 3)) <= 1e-10 * ev(ev.size() - 1));

  // <phi | F_K(x) psi>_K = conj(phi(x)) psi(x)
  std::mt19937_64 rng(61);
  for (int t = 0; t < 100; ++t) {
    QVector c(7), d(7);
    for (int i = 0; i < 7; ++i) {
      c[i] = random_q(rng);
      d[i] = random_q(rng);
    }
    const Quaternion lhs = inner(c, mat_apply(F, d));
    Quaternion phix{}, psix{};
    for (int i = 0; i < 7; ++i) {
      phix += family_eval(k.family, i, x) * c[i];
      psix += family_eval(k.family, i, x) * d[i];
    }
    const Quaternion rhs = conj(phix) * psix;
    CHECK(abs(lhs - rhs) <= 1e-10 * (1.0 + abs(rhs)));
  }
}

TEST_CASE("pov measure normalization and additivity") {
  const Kernel k = Kernel::canonical(6);
  const MeasureRule rule = build_rule(MeasureKind::CanonicalGaussQ, {}, {});

  // a(X) = I
  const auto whole = pov_measure(k, rule, Partition::whole());
  CHECK(max_abs(whole[0] - QMatrix::identity(7)) <= 1e-9);
  CHECK(is_positive(whole[0], 1e-9));

  // a(empty) = 0
  Partition none = Partition::parse("nothing: r < -1\n");
  none.covers_domain = false;
  const auto empty = pov_measure(k, rule, none);
  CHECK(max_abs(empty[0]) == 0.0);

  // half spaces sum to a(X) at node level
  const auto halves = pov_measure(k, rule, Partition::split("x", 0.0));
  CHECK(is_positive(halves[0], 1e-9));
  CHECK(is_positive(halves[1], 1e-9));
  CHECK(max_abs(halves[0] + halves[1] - whole[0]) <= 1e-13);
}

TEST_CASE("sigma additivity over a refining sequence") {
  const Kernel k = Kernel::canonical(6);
  const MeasureRule rule = build_rule(MeasureKind::CanonicalGaussQ, {}, {64, 16, 8});
  const double med = weighted_median_r(rule);
  Partition two = Partition::split("r", med);
  Partition four;  // exact same threshold as `two`, further split in x
  four.cells.push_back({"a", [med](const QuadNode& n) { return n.r < med && n.x < 0; }});
  four.cells.push_back({"b", [med](const QuadNode& n) { return n.r < med && n.x >= 0; }});
  four.cells.push_back({"c", [med](const QuadNode& n) { return n.r >= med && n.x < 0; }});
  four.cells.push_back({"d", [med](const QuadNode& n) { return n.r >= med && n.x >= 0; }});
  const SigmaAdditivityResult res = sigma_additivity_check(k, rule, {Partition::whole(), two, four}, 7);
  CHECK(res.exact_defect == 0.0);
  CHECK(res.refinement_defect <= 1e-13);
  CHECK(res.min_cell_value >= 0.0);
  // mu_phi(X) = ||phi||^2 = 1 for the unit vector drawn inside
  CHECK(std::abs(res.total - 1.0) <= 1e-9);
}

TEST_CASE("discrete L2 projector") {
  const Kernel k = Kernel::canonical(6);
  const MeasureRule rule = build_rule(MeasureKind::CanonicalGaussQ, {}, {48, 16, 8});
  const DiscreteL2 l2 = build_discrete_l2(k, rule);
  CHECK(l2.dim == 7);
  CHECK(l2.n_nodes == rule.nodes.size());
  CHECK(l2.gram_condition < 1.0 + 1e-6);
  CHECK(l2.idempotency_defect() <= 1e-10);
  CHECK(l2.hermiticity_defect() <= 1e-10);

  // a coarse rule cannot resolve 51 monomials: the sampled Gram goes past
  // the 1e8 condition cap
  CHECK_THROWS_AS(build_discrete_l2(Kernel::canonical(50), build_rule(MeasureKind::CanonicalGaussQ, {}, {16, 4, 2})),
                  IllConditionedBasis);
}

TEST_CASE("naimark residual trivial cells") {
  const Kernel k = Kernel::laguerre(0.0, 0.4, 5);
  const MeasureRule rule = build_rule(MeasureKind::LaguerreQuat, {0.4, 0.0}, {48, 12, 8});
  // whole space: P(X) = identity compresses to P_K, residual at quadrature level
  CHECK(naimark_residual(k, rule, Partition::whole()) <= 1e-2);
  // empty cell: exactly zero
  Partition none = Partition::parse("nothing: r < -1\n");
  none.covers_domain = false;
  CHECK(naimark_residual(k, rule, none) == 0.0);
}

TEST_CASE("naimark residual decreases under refinement") {
  const Kernel k = Kernel::laguerre(0.0, 0.4, 5);
  QuadOrders o{48, 12, 8, 1e-15};
  const MeasureRule r1 = build_rule(MeasureKind::LaguerreQuat, {0.4, 0.0}, o);
  const Partition part = Partition::split("r", weighted_median_r(r1));
  const double res1 = naimark_residual(k, r1, part);
  const MeasureRule r2 = build_rule(MeasureKind::LaguerreQuat, {0.4, 0.0}, o.doubled());
  const double res2 = naimark_residual(k, r2, part);
  CHECK(res2 < res1);
  CHECK(res2 <= 1e-5);
}

TEST_CASE("minimality witness") {
  const Kernel k3 = Kernel::canonical(3);
  const MeasureRule rule = build_rule(MeasureKind::CanonicalGaussQ, {}, {16, 8, 4});

  // single cell, full basis: rank = N + 1
  const MinimalityReport whole = minimality_witness(k3, rule, Partition::whole());
  CHECK(whole.rank == 4);
  CHECK(whole.column_count == 4);
  CHECK(whole.sigma_min > 0.9);  // orthonormalized columns

  // per-node singleton cells: indicator columns span the full node space
  Partition singles;
  for (const auto& n : rule.nodes) {
    const double xv = n.x, yv = n.y;
    singles.cells.push_back({"node", [xv, yv](const QuadNode& m) { return m.x == xv && m.y == yv; }});
  }
  const MinimalityReport fine = minimality_witness(k3, rule, singles);
  CHECK(fine.node_dim == static_cast<int>(rule.nodes.size()));
  CHECK(fine.rank == fine.node_dim);

  // a coarse 2-cell partition cannot span the node space at fixed N
  const MinimalityReport coarse = minimality_witness(k3, rule, Partition::split("x", 0.0));
  CHECK(coarse.rank <= 8);
  CHECK(coarse.rank < coarse.node_dim);
}

TEST_CASE("diagonal operator A") {
  const DiagOperatorA A = diag_operator_A(0.5, 50);
  CHECK(std::abs(A.trace_inverse - (2.0 - std::pow(2.0, -50.0))) <= 1e-15);
  CHECK(A.diag[0] == 1.0);  // A h_0 = h_0
  CHECK(A.diag[3] == doctest::Approx(8.0));

  // scaled inner product makes the eps-weighted members orthonormal:
  // f_n = eps^{n/2} h_n has coefficient vector e_n eps^{n/2}
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 5; ++m) {
      QVector c(51), d(51);
      c[n] = Quaternion{std::pow(0.5, n / 2.0)};
      d[m] = Quaternion{std::pow(0.5, m / 2.0)};
      const Quaternion ip = A.scaled_inner(c, d);
      CHECK(abs(ip - (n == m ? Quaternion{1.0} : Quaternion{})) <= 1e-14);
    }

  QVector ok(51), big(51);
  ok[2] = Quaternion{1.0};
  big[50] = Quaternion{1.0};
  CHECK(A.in_domain(ok));
  CHECK_FALSE(A.in_domain(big));  // eps^{-100} blows the budget

  CHECK_THROWS_AS(diag_operator_A(1.0, 10), BadEpsilon);
  CHECK_THROWS_AS(diag_operator_A(0.0, 10), BadEpsilon);
}
