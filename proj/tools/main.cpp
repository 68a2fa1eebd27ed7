// Batch verification driver. Every subcommand runs one family of checks,
// emits a JSON or CSV report with each residual, its tolerance and the rule
// provenance, and exits 0 only if everything is inside tolerance.
// Exit codes: 0 pass, 1 tolerance exceeded, 2 config error, 3 computation error.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrkhs/rkhs_pov.hpp"

using namespace qrkhs;
using nlohmann::json;

namespace {

struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Options {
  std::string command;
  std::string family = "canonical";
  double epsilon = 0.5;
  double alpha = 0.0;
  int max_n = 6;
  int trunc = -1;  // kernel truncation; -1 = family default
  int points = 20;
  std::uint64_t seed = 0;
  std::string grid = "-2:2:0.5";
  std::string partition_file;
  std::string format = "json";
  std::string out;
  int radial = 0, angular = 0, theta1 = 0;  // 0 = library defaults
  double tail = 1e-15;
};

int env_threads() {
  const char* s = std::getenv("QRKHS_THREADS");
  if (!s) return 1;
  const long v = std::strtol(s, nullptr, 10);
  return v >= 1 ? static_cast<int>(v) : 1;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Quaternion random_q(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

// ---------------------------------------------------------------------------
// Report assembly

json provenance(const Options& opt, const MeasureRule* rule) {
  json p;
  p["family"] = opt.family;
  p["epsilon"] = opt.epsilon;
  p["alpha"] = opt.alpha;
  p["seed"] = opt.seed;
  p["threads"] = env_threads();
  if (rule) {
    p["measure"] = to_string(rule->kind);
    p["orders"] = {{"radial", rule->orders.radial},
                   {"angular", rule->orders.angular},
                   {"theta1", rule->orders.theta1},
                   {"tail", rule->orders.tail},
                   {"reach", rule->orders.reach}};
    p["nodes"] = rule->nodes.size();
    p["truncation_radius"] = rule->truncation_radius;
    p["reduced"] = rule->reduced;
  }
  return p;
}

void emit(const Options& opt, const json& prov, const std::vector<Check>& checks) {
  std::ostringstream os;
  if (opt.format == "csv") {
    os << "check,value,tolerance,pass\n";
    for (const auto& c : checks)
      os << c.name << ',' << fmt_double(c.value) << ',' << fmt_double(c.tol) << ','
         << (c.pass ? "true" : "false") << '\n';
  } else {
    json doc;
    doc["schema"] = 1;
    doc["command"] = opt.command;
    doc["provenance"] = prov;
    doc["checks"] = json::array();
    bool all = true;
    for (const auto& c : checks) {
      doc["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tol}, {"pass", c.pass}});
      all = all && c.pass;
    }
    doc["pass"] = all;
    os << doc.dump(2) << '\n';
  }
  if (opt.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + opt.out);
    f << os.str();
  }
}

int finish(const Options& opt, const json& prov, const std::vector<Check>& checks) {
  emit(opt, prov, checks);
  for (const auto& c : checks)
    if (!c.pass) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Shared configuration helpers

struct FamilySetup {
  BasisFamily fam;
  MeasureKind measure;
  MeasureParams params;
  double ortho_tol;
};

FamilySetup make_family(const Options& opt, int N) {
  if (opt.family == "monomial" || opt.family == "canonical")
    return {BasisFamily::monomial(N), MeasureKind::CanonicalGaussQ, {}, 1e-10};
  if (opt.family == "hermite")
    return {BasisFamily::hermite(opt.epsilon, N), MeasureKind::HermiteQuat, {opt.epsilon, 0.0}, 1e-8};
  if (opt.family == "laguerre")
    return {BasisFamily::laguerre(opt.alpha, opt.epsilon, N), MeasureKind::LaguerreQuat,
            {opt.epsilon, opt.alpha}, 1e-7};
  if (opt.family == "hermite2")
    return {BasisFamily::hermite2(0, N), MeasureKind::TwoIndexGauss, {}, 1e-8};
  throw std::invalid_argument("unknown family: " + opt.family);
}

QuadOrders make_orders(const Options& opt) {
  QuadOrders o;
  if (opt.radial > 0) o.radial = opt.radial;
  if (opt.angular > 0) o.angular = opt.angular;
  if (opt.theta1 > 0) o.theta1 = opt.theta1;
  o.tail = opt.tail;
  return o;
}

Kernel make_kernel(const Options& opt) {
  if (opt.family == "canonical" || opt.family == "monomial")
    return opt.trunc > 0 ? Kernel::canonical(opt.trunc) : Kernel::canonical();
  if (opt.family == "hermite")
    return opt.trunc > 0 ? Kernel::hermite(opt.epsilon, opt.trunc) : Kernel::hermite(opt.epsilon);
  if (opt.family == "laguerre")
    return opt.trunc > 0 ? Kernel::laguerre(opt.alpha, opt.epsilon, opt.trunc)
                         : Kernel::laguerre(opt.alpha, opt.epsilon);
  if (opt.family == "hermite2")
    return opt.trunc > 0 ? Kernel::hermite2(0, opt.trunc) : Kernel::hermite2(0);
  throw std::invalid_argument("unknown family: " + opt.family);
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_quat_selftest(const Options& opt) {
  std::mt19937_64 rng(opt.seed);
  std::vector<Check> checks;

  double w = 0.0;
  for (int t = 0; t < 5000; ++t) {
    const Quaternion p = random_q(rng, 2.0), q = random_q(rng, 2.0);
    w = std::max(w, abs(conj(p * q) - conj(q) * conj(p)));
  }
  checks.push_back({"conj_anti_homomorphism", w, 1e-12, w <= 1e-12});

  w = 0.0;
  for (int t = 0; t < 5000; ++t) {
    const Quaternion p = random_q(rng, 2.0), q = random_q(rng, 2.0);
    w = std::max(w, std::abs(norm2(p * q) - norm2(p) * norm2(q)) / (norm2(p) * norm2(q) + 1e-300));
  }
  checks.push_back({"norm_multiplicativity", w, 1e-12, w <= 1e-12});

  w = 0.0;
  for (int t = 0; t < 2000; ++t) {
    Quaternion q = random_q(rng, 2.0);
    if (norm2(q) < 1e-12) q.w += 1.0;
    w = std::max(w, abs(from_polar(to_polar(q)) - q) / abs(q));
  }
  checks.push_back({"polar_round_trip", w, 1e-12, w <= 1e-12});

  const Quaternion units[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
  w = 0.0;
  for (int t = 0; t < 1000; ++t) {
    QVector phi(5), psi(5);
    for (int i = 0; i < 5; ++i) {
      phi[i] = random_q(rng);
      psi[i] = random_q(rng);
    }
    const auto n2 = [](const QVector& v) { return inner(v, v).w; };
    Quaternion sum{n2(phi + psi) - n2(phi - psi)};
    for (const auto& e : units) sum += (n2(phi * e + psi) - n2(phi * e - psi)) * e;
    const Quaternion target = 4.0 * inner(phi, psi);
    w = std::max(w, abs(sum - target) / (1.0 + abs(target)));
  }
  checks.push_back({"polarization_identity", w, 1e-11, w <= 1e-11});

  w = -1.0;
  for (int t = 0; t < 5000; ++t) {
    QVector u(6), v(6);
    for (int i = 0; i < 6; ++i) {
      u[i] = random_q(rng);
      v[i] = random_q(rng);
    }
    const double excess = norm2(inner(u, v)) - inner(u, u).w * inner(v, v).w * (1.0 + 1e-12);
    w = std::max(w, excess);
  }
  checks.push_back({"cauchy_schwarz_excess", w, 0.0, w <= 0.0});

  return finish(opt, provenance(opt, nullptr), checks);
}

int cmd_orthogonality(const Options& opt) {
  const FamilySetup fs = make_family(opt, opt.max_n);
  const MeasureRule rule =
      build_rule(fs.measure, fs.params, opt.family == "hermite2" ? QuadOrders{120, 48, 24} : make_orders(opt));
  std::vector<Check> checks;
  if (opt.family == "hermite2") {
    const double r = hermite2_orthogonality(rule, opt.max_n);
    checks.push_back({"max_orthogonality_residual", r, fs.ortho_tol, r <= fs.ortho_tol});
  } else {
    const OrthogonalityResult res = orthogonality_matrix(fs.fam, rule, opt.max_n);
    checks.push_back(
        {"max_orthogonality_residual", res.max_residual, fs.ortho_tol, res.max_residual <= fs.ortho_tol});
  }
  return finish(opt, provenance(opt, &rule), checks);
}

int cmd_kernel_compare(const Options& opt) {
  double a = 0.0, b = 0.0, step = 0.0;
  if (std::sscanf(opt.grid.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0.0 || b < a)
    throw std::invalid_argument("grid must be a:b:step with step > 0");

  Kernel ker = [&] {
    if (opt.family == "canonical") return Kernel::canonical(opt.trunc > 0 ? opt.trunc : 60);
    if (opt.family == "hermite")
      return Kernel{BasisFamily::hermite(opt.epsilon, opt.trunc > 0 ? opt.trunc : 120),
                    ClosedFormTag::HermiteReal};
    if (opt.family == "laguerre")
      return Kernel{BasisFamily::laguerre(opt.alpha, opt.epsilon, opt.trunc > 0 ? opt.trunc : 150),
                    ClosedFormTag::LaguerreReal};
    throw std::invalid_argument("kernel-compare supports canonical, hermite, laguerre");
  }();
  const double lo = (opt.family == "laguerre") ? std::max(a, 0.0) : a;

  double worst = 0.0;
  double worst_tail = 0.0;
  for (double x = lo; x <= b + 1e-12; x += step)
    for (double y = lo; y <= b + 1e-12; y += step) {
      const KernelValue s = kernel_series(ker, Quaternion{x}, Quaternion{y});
      const Quaternion c = kernel_closed(ker, Quaternion{x}, Quaternion{y});
      worst = std::max(worst, abs(s.value - c) / abs(c));
      worst_tail = std::max(worst_tail, s.tail);
    }
  std::vector<Check> checks;
  checks.push_back({"max_relative_deviation", worst, 1e-9, worst <= 1e-9});
  checks.push_back({"max_series_tail", worst_tail, ker.tail_tol, worst_tail <= ker.tail_tol});
  return finish(opt, provenance(opt, nullptr), checks);
}

int cmd_gram_check(const Options& opt) {
  const Kernel ker = make_kernel(opt);
  std::mt19937_64 rng(opt.seed);
  std::vector<Quaternion> pts;
  for (int t = 0; t < opt.points; ++t) pts.push_back(random_q(rng, 1.2));
  const QMatrix G = gram_matrix(ker, pts);
  const double herm = max_abs(G - adjoint(G));
  const Eigen::VectorXd ev = hermitian_eigenvalues(G, default_tol(G));
  std::vector<Check> checks;
  checks.push_back({"hermiticity_defect", herm, 1e-12 * (1.0 + max_abs(G)), herm <= 1e-12 * (1.0 + max_abs(G))});
  checks.push_back({"min_embedding_eigenvalue", ev(0), -1e-9, ev(0) >= -1e-9});
  return finish(opt, provenance(opt, nullptr), checks);
}

int cmd_square_integrability(const Options& opt) {
  Options o = opt;
  if (o.family == "laguerre" && o.trunc < 0) o.trunc = 400;
  if (o.family == "hermite" && o.trunc < 0) o.trunc = 500;
  const Kernel ker = make_kernel(o);
  const FamilySetup fs = make_family(o, 6);

  QuadOrders base{24, 8, 4, 1e-9};
  base.reach = 0.15;
  if (o.family == "hermite") {
    base = {16, 4, 2, 1e-9};
    base.reach = 0.25;
  }
  const MeasureRule coarse = build_rule(fs.measure, fs.params, base);
  const MeasureRule fine = build_rule(fs.measure, fs.params, base.doubled());

  const double off = (o.family == "laguerre") ? 1.2 : 0.0;
  std::mt19937_64 rng(o.seed);
  std::vector<Check> checks;
  for (int t = 0; t < 5; ++t) {
    const Quaternion x = random_q(rng, 0.4) + Quaternion{off};
    const Quaternion y = random_q(rng, 0.4) + Quaternion{off};
    const double rc = kernel_square_integrability(ker, coarse, x, y);
    const double rf = kernel_square_integrability(ker, fine, x, y);
    checks.push_back({"pair_" + std::to_string(t) + "_fine_residual", rf, 1e-6, rf <= 1e-6});
    checks.push_back({"pair_" + std::to_string(t) + "_refinement_drop", rc - rf, 0.0, rf < rc});
  }
  return finish(o, provenance(o, &fine), checks);
}

int cmd_pov(const Options& opt) {
  Options o = opt;
  if (o.trunc < 0) o.trunc = 6;
  const Kernel ker = make_kernel(o);
  const FamilySetup fs = make_family(o, o.trunc);
  const MeasureRule rule = build_rule(fs.measure, fs.params, make_orders(o));
  const std::size_t d = ker.family.truncation + 1;

  const auto whole = pov_measure(ker, rule, Partition::whole());
  const double norm_defect = max_abs(whole[0] - QMatrix::identity(d));

  Partition part = o.partition_file.empty() ? Partition::split("r", weighted_median_r(rule)) : [&] {
    std::ifstream f(o.partition_file);
    if (!f) throw std::invalid_argument("cannot read partition file: " + o.partition_file);
    std::stringstream ss;
    ss << f.rdbuf();
    return Partition::parse(ss.str());
  }();
  const SigmaAdditivityResult sig = sigma_additivity_check(ker, rule, {Partition::whole(), part}, o.seed);

  std::vector<Check> checks;
  checks.push_back({"normalization_defect", norm_defect, 1e-9, norm_defect <= 1e-9});
  checks.push_back({"sigma_additivity_defect", sig.exact_defect, 0.0, sig.exact_defect == 0.0});
  checks.push_back({"refinement_defect", sig.refinement_defect, 1e-13, sig.refinement_defect <= 1e-13});
  checks.push_back({"min_cell_value", sig.min_cell_value, 0.0, sig.min_cell_value >= 0.0});
  const double total_err = std::abs(sig.total - 1.0);
  checks.push_back({"unit_vector_total_error", total_err, 1e-9, total_err <= 1e-9});
  return finish(o, provenance(o, &rule), checks);
}

int cmd_naimark(const Options& opt) {
  Options o = opt;
  if (o.trunc < 0) o.trunc = 5;
  if (o.family != "laguerre") throw std::invalid_argument("naimark supports the laguerre family");
  const Kernel ker = Kernel::laguerre(o.alpha, o.epsilon, o.trunc);

  QuadOrders orders{48, 12, 8, 1e-15};
  if (o.radial > 0) orders.radial = o.radial;
  if (o.angular > 0) orders.angular = o.angular;
  if (o.theta1 > 0) orders.theta1 = o.theta1;

  Partition part;
  const bool from_file = !o.partition_file.empty();
  if (from_file) {
    std::ifstream f(o.partition_file);
    if (!f) throw std::invalid_argument("cannot read partition file: " + o.partition_file);
    std::stringstream ss;
    ss << f.rdbuf();
    part = Partition::parse(ss.str());
  }

  double res[3];
  MeasureRule finest;
  for (int i = 0; i < 3; ++i) {
    const MeasureRule rule = build_rule(MeasureKind::LaguerreQuat, {o.epsilon, o.alpha}, orders);
    if (i == 0 && !from_file) part = Partition::split("r", weighted_median_r(rule));
    res[i] = naimark_residual(ker, rule, part);
    if (i == 2) finest = rule;
    orders = orders.doubled();
  }
  std::vector<Check> checks;
  checks.push_back({"residual_rung_0", res[0], 1e-1, res[0] <= 1e-1});
  checks.push_back({"residual_rung_1", res[1], res[0], res[1] < res[0]});
  checks.push_back({"residual_rung_2", res[2], 1e-7, res[2] <= 1e-7 && res[2] < res[1]});
  return finish(o, provenance(o, &finest), checks);
}

int cmd_trace_a(const Options& opt) {
  Options o = opt;
  if (o.trunc < 0) o.trunc = 100;
  const DiagOperatorA A = diag_operator_A(o.epsilon, o.trunc);
  const double expect = 1.0 / (1.0 - o.epsilon);
  // partial sum misses eps^{N+1}/(1-eps); fold that into the tolerance
  const double tol = 1e-12 + 2.0 * std::pow(o.epsilon, o.trunc + 1.0) / (1.0 - o.epsilon);
  const double err = std::abs(A.trace_inverse - expect);
  std::vector<Check> checks;
  checks.push_back({"trace_inverse_error", err, tol, err <= tol});
  return finish(o, provenance(o, nullptr), checks);
}

// ---------------------------------------------------------------------------

void load_config(Options& opt, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file: " + path);
  json cfg = json::parse(f);
  if (cfg.contains("command")) opt.command = cfg["command"].get<std::string>();
  if (cfg.contains("family")) opt.family = cfg["family"].get<std::string>();
  if (cfg.contains("epsilon")) opt.epsilon = cfg["epsilon"].get<double>();
  if (cfg.contains("alpha")) opt.alpha = cfg["alpha"].get<double>();
  if (cfg.contains("max_n")) opt.max_n = cfg["max_n"].get<int>();
  if (cfg.contains("trunc")) opt.trunc = cfg["trunc"].get<int>();
  if (cfg.contains("points")) opt.points = cfg["points"].get<int>();
  if (cfg.contains("seed")) opt.seed = cfg["seed"].get<std::uint64_t>();
  if (cfg.contains("grid")) opt.grid = cfg["grid"].get<std::string>();
  if (cfg.contains("partition")) opt.partition_file = cfg["partition"].get<std::string>();
  if (cfg.contains("format")) opt.format = cfg["format"].get<std::string>();
  if (cfg.contains("out")) opt.out = cfg["out"].get<std::string>();
  if (cfg.contains("radial")) opt.radial = cfg["radial"].get<int>();
  if (cfg.contains("angular")) opt.angular = cfg["angular"].get<int>();
  if (cfg.contains("theta1")) opt.theta1 = cfg["theta1"].get<int>();
  if (cfg.contains("tail")) opt.tail = cfg["tail"].get<double>();
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  opt.trunc = -1;

  // --config is applied first so explicit flags override it
  try {
    for (int i = 1; i < argc - 1; ++i)
      if (std::string(argv[i]) == "--config") load_config(opt, argv[i + 1]);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  CLI::App app{"quaternionic RKHS verification driver"};
  app.require_subcommand(opt.command.empty() ? 1 : 0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (same fields as flags)");

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--family", opt.family, "family: canonical|monomial|hermite|laguerre|hermite2");
    sub->add_option("--epsilon", opt.epsilon, "weight parameter in (0,1)");
    sub->add_option("--alpha", opt.alpha, "Laguerre order, > -1");
    sub->add_option("--trunc", opt.trunc, "kernel truncation N");
    sub->add_option("--seed", opt.seed, "RNG seed for randomized suites");
    sub->add_option("--format", opt.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", opt.out, "write the report to a file instead of stdout");
    sub->add_option("--radial", opt.radial, "radial quadrature order");
    sub->add_option("--angular", opt.angular, "angular quadrature order");
    sub->add_option("--theta1", opt.theta1, "theta1 quadrature order");
    sub->add_option("--tail", opt.tail, "weight-tail truncation tolerance");
    sub->add_option("--config", config_path, "JSON config file (applied before flags)");
  };

  CLI::App* selftest = app.add_subcommand("quat-selftest", "algebraic property suites over H");
  CLI::App* ortho = app.add_subcommand("orthogonality", "basis family orthogonality residuals");
  ortho->add_option("--max-n", opt.max_n, "highest index checked");
  CLI::App* kcomp = app.add_subcommand("kernel-compare", "closed form vs truncated series");
  kcomp->add_option("--grid", opt.grid, "real evaluation grid a:b:step");
  CLI::App* gram = app.add_subcommand("gram-check", "random Gram matrix positivity");
  gram->add_option("--points", opt.points, "number of random points");
  CLI::App* sqint = app.add_subcommand("square-integrability", "iterated-kernel identity residuals");
  CLI::App* pov = app.add_subcommand("pov", "POV normalization and sigma additivity");
  pov->add_option("--partition", opt.partition_file, "partition description file");
  CLI::App* naimark = app.add_subcommand("naimark", "Naimark compression residual ladder");
  naimark->add_option("--partition", opt.partition_file, "partition description file");
  CLI::App* tracea = app.add_subcommand("trace-a", "diagonal operator partial trace");
  for (CLI::App* sub : {selftest, ortho, kcomp, gram, sqint, pov, naimark, tracea}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (selftest->parsed()) opt.command = "quat-selftest";
  else if (ortho->parsed()) opt.command = "orthogonality";
  else if (kcomp->parsed()) opt.command = "kernel-compare";
  else if (gram->parsed()) opt.command = "gram-check";
  else if (sqint->parsed()) opt.command = "square-integrability";
  else if (pov->parsed()) opt.command = "pov";
  else if (naimark->parsed()) opt.command = "naimark";
  else if (tracea->parsed()) opt.command = "trace-a";
  if (opt.command.empty()) {
    std::cerr << "config error: no command given\n";
    return 2;
  }

  try {
    if (opt.command == "quat-selftest") return cmd_quat_selftest(opt);
    if (opt.command == "orthogonality") return cmd_orthogonality(opt);
    if (opt.command == "kernel-compare") return cmd_kernel_compare(opt);
    if (opt.command == "gram-check") return cmd_gram_check(opt);
    if (opt.command == "square-integrability") return cmd_square_integrability(opt);
    if (opt.command == "pov") return cmd_pov(opt);
    if (opt.command == "naimark") return cmd_naimark(opt);
    if (opt.command == "trace-a") return cmd_trace_a(opt);
    std::cerr << "config error: unknown command " << opt.command << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << '\n';
    return 3;
  }
}
