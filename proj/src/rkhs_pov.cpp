#include "qrkhs/rkhs_pov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/SVD>

namespace qrkhs {

namespace {

double coord(const QuadNode& n, int field) {
  switch (field) {
    case 0: return n.r;
    case 1: return n.theta1;
    case 2: return n.theta2;
    case 3: return n.phi;
    case 4: return n.x;
    case 5: return n.y;
  }
  return 0.0;
}

int field_index(const std::string& var) {
  if (var == "r") return 0;
  if (var == "theta1") return 1;
  if (var == "theta2") return 2;
  if (var == "phi") return 3;
  if (var == "x") return 4;
  if (var == "y") return 5;
  throw PartitionParseError("unknown coordinate '" + var + "'");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Partition Partition::whole() {
  Partition p;
  p.cells.push_back({"all", [](const QuadNode&) { return true; }});
  return p;
}

Partition Partition::split(const std::string& var, double threshold) {
  const int f = field_index(var);
  Partition p;
  p.cells.push_back({var + " < " + std::to_string(threshold),
                     [f, threshold](const QuadNode& n) { return coord(n, f) < threshold; }});
  p.cells.push_back({var + " >= " + std::to_string(threshold),
                     [f, threshold](const QuadNode& n) { return coord(n, f) >= threshold; }});
  return p;
}

Partition Partition::parse(const std::string& text) {
  Partition part;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw PartitionParseError("cell line needs 'name: predicate'");
    PartitionCell cell;
    cell.name = trim(line.substr(0, colon));
    const std::string pred = trim(line.substr(colon + 1));

    struct Cmp {
      int field;
      int op;  // 0 '<', 1 '<=', 2 '>', 3 '>='
      double value;
    };
    std::vector<Cmp> cmps;
    bool always = false;
    std::istringstream terms(pred);
    std::string term;
    while (std::getline(terms, term, '&')) {
      term = trim(term);
      if (term == "all") {
        always = true;
        continue;
      }
      std::istringstream t(term);
      std::string var, op;
      double value;
      if (!(t >> var >> op >> value)) throw PartitionParseError("bad comparison '" + term + "'");
      Cmp c;
      c.field = field_index(var);
      c.value = value;
      if (op == "<") c.op = 0;
      else if (op == "<=") c.op = 1;
      else if (op == ">") c.op = 2;
      else if (op == ">=") c.op = 3;
      else throw PartitionParseError("bad operator '" + op + "'");
      cmps.push_back(c);
    }
    if (cmps.empty() && !always) throw PartitionParseError("empty predicate for cell " + cell.name);
    cell.contains = [cmps](const QuadNode& n) {
      for (const auto& c : cmps) {
        const double v = coord(n, c.field);
        const bool ok = c.op == 0 ? v < c.value : c.op == 1 ? v <= c.value : c.op == 2 ? v > c.value : v >= c.value;
        if (!ok) return false;
      }
      return true;
    };
    part.cells.push_back(std::move(cell));
  }
  if (part.cells.empty()) throw PartitionParseError("partition has no cells");
  return part;
}

std::vector<std::vector<std::size_t>> Partition::assign(const MeasureRule& rule) const {
  std::vector<std::vector<std::size_t>> idx(cells.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    int hit = -1;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!cells[c].contains(rule.nodes[k])) continue;
      if (hit >= 0)
        throw OverlappingCells("node in both '" + cells[hit].name + "' and '" + cells[c].name + "'");
      hit = static_cast<int>(c);
    }
    if (hit >= 0)
      idx[hit].push_back(k);
    else if (covers_domain)
      throw UncoveredNodes("node outside every cell of a covering partition");
  }
  return idx;
}

double weighted_median_r(const MeasureRule& rule) {
  std::vector<std::size_t> order(rule.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rule.nodes[a].r < rule.nodes[b].r; });
  double total = 0.0;
  for (const auto& n : rule.nodes) total += n.w;
  double acc = 0.0;
  for (const std::size_t k : order) {
    acc += rule.nodes[k].w;
    if (acc >= 0.5 * total) return rule.nodes[k].r;
  }
  return rule.nodes.empty() ? 0.0 : rule.nodes.back().r;
}

DiscreteL2 build_discrete_l2(const Kernel& ker, const MeasureRule& rule) {
  if (rule.nodes.empty()) throw EmptyRule();
  DiscreteL2 l2;
  l2.n_nodes = rule.nodes.size();
  l2.dim = ker.family.truncation + 1;
  l2.basis = QMatrix(l2.n_nodes, l2.dim);
  for (std::size_t k = 0; k < l2.n_nodes; ++k) {
    const std::vector<Quaternion> f = family_values(ker.family, rule.nodes[k].q);
    for (int i = 0; i < l2.dim; ++i) l2.basis(k, i) = f[i];
  }

  QMatrix G(l2.dim, l2.dim);
  for (int i = 0; i < l2.dim; ++i)
    for (int j = i; j < l2.dim; ++j) {
      Quaternion s{};
      for (std::size_t k = 0; k < l2.n_nodes; ++k)
        s += conj(l2.basis(k, i)) * l2.basis(k, j) * rule.nodes[k].w;
      G(i, j) = s;
      G(j, i) = conj(s);
    }

  const Eigen::VectorXd ev = hermitian_eigenvalues(G, default_tol(G));
  const double lmin = ev(0), lmax = ev(ev.size() - 1);
  if (lmin <= 0.0) throw IllConditionedBasis(std::numeric_limits<double>::infinity());
  l2.gram_condition = lmax / lmin;
  if (l2.gram_condition > 1e8) throw IllConditionedBasis(l2.gram_condition);

  const QMatrix S = hermitian_function(G, default_tol(G), [](double x) { return 1.0 / std::sqrt(x); });
  l2.C = QMatrix(l2.n_nodes, l2.dim);
  for (std::size_t k = 0; k < l2.n_nodes; ++k) {
    const double sw = std::sqrt(rule.nodes[k].w);
    for (int i = 0; i < l2.dim; ++i) {
      Quaternion s{};
      for (int j = 0; j < l2.dim; ++j) s += l2.basis(k, j) * S(j, i);
      l2.C(k, i) = s * sw;
    }
  }
  return l2;
}

double DiscreteL2::idempotency_defect() const {
  // P^2 - P = C (C^dagger C - I) C^dagger; only the small middle factor and
  // two thin products are formed.
  QMatrix D(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Quaternion s{};
      for (std::size_t k = 0; k < n_nodes; ++k) s += conj(C(k, i)) * C(k, j);
      D(i, j) = s - (i == j ? Quaternion{1.0} : Quaternion{});
    }
  // Entry (k,l) = <T_k, C_l> with T = C D; exact max with the same
  // norm-ordered Cauchy-Schwarz pruning used in naimark_residual.
  QMatrix T(n_nodes, dim);
  std::vector<double> nt(n_nodes), nc(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    double st = 0.0, sc = 0.0;
    for (int j = 0; j < dim; ++j) {
      Quaternion s{};
      for (int i = 0; i < dim; ++i) s += C(k, i) * D(i, j);
      T(k, j) = s;
      st += norm2(s);
      sc += norm2(C(k, j));
    }
    nt[k] = std::sqrt(st);
    nc[k] = std::sqrt(sc);
  }
  std::vector<std::size_t> kt(n_nodes), kc(n_nodes);
  std::iota(kt.begin(), kt.end(), 0);
  kc = kt;
  std::sort(kt.begin(), kt.end(), [&](std::size_t a, std::size_t b) { return nt[a] > nt[b]; });
  std::sort(kc.begin(), kc.end(), [&](std::size_t a, std::size_t b) { return nc[a] > nc[b]; });
  double worst = 0.0;
  for (const std::size_t k : kt) {
    if (nt[k] * nc[kc[0]] <= worst) break;
    for (const std::size_t l : kc) {
      if (nt[k] * nc[l] <= worst) break;
      Quaternion s{};
      for (int i = 0; i < dim; ++i) s += T(k, i) * conj(C(l, i));
      worst = std::max(worst, abs(s));
    }
  }
  return worst;
}

double DiscreteL2::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < n_nodes; ++k)
    for (std::size_t l = k; l < n_nodes; ++l) {
      Quaternion pkl{}, plk{};
      for (int i = 0; i < dim; ++i) {
        pkl += C(k, i) * conj(C(l, i));
        plk += C(l, i) * conj(C(k, i));
      }
      worst = std::max(worst, abs(pkl - conj(plk)));
    }
  return worst;
}

QMatrix localization_operator(const Kernel& ker, const Quaternion& x) {
  const std::vector<Quaternion> f = family_values(ker.family, x);
  const int d = static_cast<int>(f.size());
  QMatrix F(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) F(i, j) = conj(f[i]) * f[j];
  return F;
}

std::vector<QMatrix> pov_measure(const Kernel& ker, const MeasureRule& rule, const Partition& part) {
  if (rule.nodes.empty()) throw EmptyRule();
  const auto idx = part.assign(rule);
  const int d = ker.family.truncation + 1;
  std::vector<QMatrix> out;
  out.reserve(idx.size());
  for (const auto& cell : idx) {
    QMatrix A(d, d);
    for (const std::size_t k : cell) {
      const std::vector<Quaternion> f = family_values(ker.family, rule.nodes[k].q);
      const double w = rule.nodes[k].w;
      for (int i = 0; i < d; ++i) {
        const Quaternion ci = conj(f[i]) * w;
        for (int j = 0; j < d; ++j) A(i, j) += ci * f[j];
      }
    }
    out.push_back(std::move(A));
  }
  return out;
}

SigmaAdditivityResult sigma_additivity_check(const Kernel& ker, const MeasureRule& rule,
                                             const std::vector<Partition>& nested, std::uint64_t seed) {
  if (rule.nodes.empty()) throw EmptyRule();
  const int d = ker.family.truncation + 1;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  QVector phi(d);
  for (int i = 0; i < d; ++i) phi[i] = Quaternion{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
  const double nrm = norm(phi);
  for (int i = 0; i < d; ++i) phi[i] = phi[i] / nrm;

  // mu_phi is supported on node values: s_k = w_k |phi(x_k)|^2.
  std::vector<double> s(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    Quaternion v{};
    const std::vector<Quaternion> f = family_values(ker.family, rule.nodes[k].q);
    for (int i = 0; i < d; ++i) v += f[i] * phi[i];
    s[k] = rule.nodes[k].w * norm2(v);
  }
  const auto cell_value = [&](const std::vector<std::size_t>& cell) {
    double acc = 0.0;
    for (const std::size_t k : cell) acc += s[k];
    return acc;
  };

  SigmaAdditivityResult res;
  res.min_cell_value = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::size_t>> prev_idx;
  std::vector<double> prev_mu;
  for (const Partition& part : nested) {
    const auto idx = part.assign(rule);
    std::vector<double> mu(idx.size());
    double sum_of_cells = 0.0;
    for (std::size_t c = 0; c < idx.size(); ++c) {
      mu[c] = cell_value(idx[c]);
      res.min_cell_value = std::min(res.min_cell_value, mu[c]);
      sum_of_cells += mu[c];
    }
    // Grouped union convention: mu(X) is evaluated cell-by-cell in the same
    // order, so additivity holds bit-for-bit at the node level.
    double union_value = 0.0;
    for (std::size_t c = 0; c < idx.size(); ++c) union_value += cell_value(idx[c]);
    res.exact_defect = std::max(res.exact_defect, std::abs(sum_of_cells - union_value));
    if (&part == &nested.front()) res.total = sum_of_cells;

    if (!prev_idx.empty()) {
      // Each coarse cell should be exactly the union of the fine cells whose
      // nodes it contains.
      for (std::size_t pc = 0; pc < prev_idx.size(); ++pc) {
        std::vector<char> member(rule.nodes.size(), 0);
        for (const std::size_t k : prev_idx[pc]) member[k] = 1;
        double refined = 0.0;
        for (std::size_t c = 0; c < idx.size(); ++c) {
          if (idx[c].empty()) continue;
          bool inside = true;
          for (const std::size_t k : idx[c])
            if (!member[k]) { inside = false; break; }
          if (inside) refined += mu[c];
        }
        res.refinement_defect = std::max(res.refinement_defect, std::abs(refined - prev_mu[pc]));
      }
    }
    prev_idx = idx;
    prev_mu = mu;
  }
  return res;
}

double naimark_residual(const DiscreteL2& l2, const MeasureRule& rule, const Partition& part) {
  const auto idx = part.assign(rule);
  const int d = l2.dim;
  double worst = 0.0;
  for (const auto& cell : idx) {
    // X = C^dagger P(cell) C  -  a_raw(cell); both d x d.
    QMatrix X(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Quaternion y{}, a{};
        for (const std::size_t k : cell) {
          y += conj(l2.C(k, i)) * l2.C(k, j);
          a += conj(l2.basis(k, i)) * l2.basis(k, j) * rule.nodes[k].w;
        }
        X(i, j) = y - a;
      }
    // residual for this cell: || C X C^dagger ||_max, entry (k,l) = <T_k, C_l>
    // with T = C X. Scanned exactly, but rows are visited in decreasing norm
    // order and pairs with ||T_k|| ||C_l|| below the current max are skipped
    // (Cauchy-Schwarz), which prunes almost all of the M^2 pairs.
    QMatrix T(l2.n_nodes, d);
    std::vector<double> nt(l2.n_nodes), nc(l2.n_nodes);
    for (std::size_t k = 0; k < l2.n_nodes; ++k) {
      double st = 0.0, sc = 0.0;
      for (int j = 0; j < d; ++j) {
        Quaternion s{};
        for (int i = 0; i < d; ++i) s += l2.C(k, i) * X(i, j);
        T(k, j) = s;
        st += norm2(s);
        sc += norm2(l2.C(k, j));
      }
      nt[k] = std::sqrt(st);
      nc[k] = std::sqrt(sc);
    }
    std::vector<std::size_t> kt(l2.n_nodes), kc(l2.n_nodes);
    std::iota(kt.begin(), kt.end(), 0);
    kc = kt;
    std::sort(kt.begin(), kt.end(), [&](std::size_t a, std::size_t b) { return nt[a] > nt[b]; });
    std::sort(kc.begin(), kc.end(), [&](std::size_t a, std::size_t b) { return nc[a] > nc[b]; });
    for (const std::size_t k : kt) {
      if (nt[k] * nc[kc[0]] <= worst) break;
      for (const std::size_t l : kc) {
        if (nt[k] * nc[l] <= worst) break;
        Quaternion s{};
        for (int i = 0; i < d; ++i) s += T(k, i) * conj(l2.C(l, i));
        worst = std::max(worst, abs(s));
      }
    }
  }
  return worst;
}

double naimark_residual(const Kernel& ker, const MeasureRule& rule, const Partition& part) {
  return naimark_residual(build_discrete_l2(ker, rule), rule, part);
}

MinimalityReport minimality_witness(const Kernel& ker, const MeasureRule& rule, const Partition& part) {
  const DiscreteL2 l2 = build_discrete_l2(ker, rule);
  const auto idx = part.assign(rule);
  const int cols = static_cast<int>(idx.size()) * l2.dim;
  QMatrix M(l2.n_nodes, cols);
  int col = 0;
  for (const auto& cell : idx)
    for (int i = 0; i < l2.dim; ++i, ++col)
      for (const std::size_t k : cell) M(k, col) = l2.C(k, i);
  // normalize nonzero columns so the rank count is a geometry question, not a
  // question of how much quadrature weight a cell happens to carry
  for (int c = 0; c < cols; ++c) {
    double n2 = 0.0;
    for (std::size_t k = 0; k < l2.n_nodes; ++k) n2 += norm2(M(k, c));
    if (n2 > 0.0) {
      const double inv = 1.0 / std::sqrt(n2);
      for (std::size_t k = 0; k < l2.n_nodes; ++k) M(k, c) = M(k, c) * inv;
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(embed_complex(M));
  const Eigen::VectorXd sv = svd.singularValues();
  MinimalityReport rep;
  rep.column_count = cols;
  rep.node_dim = static_cast<int>(l2.n_nodes);
  rep.sigma_min = sv(sv.size() - 1);
  const double thresh = sv(0) * std::max<std::size_t>(2 * l2.n_nodes, 2 * cols) * 1e-13;
  int complex_rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++complex_rank;
  rep.rank = complex_rank / 2;  // embedding doubles every quaternionic direction
  return rep;
}

DiagOperatorA diag_operator_A(double epsilon, int N) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw BadEpsilon();
  if (N < 0) throw IndexOutOfRange("diag_operator_A: negative truncation");
  DiagOperatorA A;
  A.epsilon = epsilon;
  A.N = N;
  A.diag.resize(N + 1);
  double p = 1.0;
  for (int n = 0; n <= N; ++n) {
    A.diag[n] = 1.0 / p;
    A.trace_inverse += p;
    p *= epsilon;
  }
  return A;
}

Quaternion DiagOperatorA::scaled_inner(const QVector& c, const QVector& d) const {
  if (c.size() != diag.size() || d.size() != diag.size())
    throw DimensionMismatch("scaled_inner: coefficient length != N+1");
  Quaternion s{};
  for (std::size_t n = 0; n < diag.size(); ++n) s += diag[n] * (conj(c[n]) * d[n]);
  return s;
}

bool DiagOperatorA::in_domain(const QVector& c, double budget) const {
  if (c.size() != diag.size()) throw DimensionMismatch("in_domain: coefficient length != N+1");
  double s = 0.0;
  for (std::size_t n = 0; n < diag.size(); ++n) s += diag[n] * diag[n] * norm2(c[n]);
  return s < budget;
}

}  // namespace qrkhs
