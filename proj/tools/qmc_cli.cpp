// qmc: analyses of finite quantum Markov chains from JSON model files.
//
// Exit codes: 0 all checks passed, 1 check failure or numerical breakdown,
// 2 usage or parse error.

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmc/corpus.hpp"
#include "qmc/expr.hpp"
#include "qmc/formulas.hpp"
#include "qmc/ginverse.hpp"
#include "qmc/hitting.hpp"
#include "qmc/model.hpp"
#include "qmc/model_io.hpp"
#include "qmc/rng.hpp"
#include "qmc/stationary.hpp"
#include "qmc/tolerances.hpp"
#include "qmc/trajectory.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qmc;

constexpr const char* kToolVersion = "1.0.0";
constexpr const char* kReportSchema = "qmc-report/1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_cx(Cx z) {
  if (std::abs(z.imag()) < 5e-13) return fmt(z.real());
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

void print_matrix(const ComplexMatrix& M, const std::string& indent = "  ") {
  std::vector<std::vector<std::string>> cells(M.rows());
  std::vector<size_t> width(M.cols(), 0);
  for (int r = 0; r < M.rows(); ++r) {
    cells[r].resize(M.cols());
    for (int c = 0; c < M.cols(); ++c) {
      cells[r][c] = fmt_cx(M(r, c));
      width[c] = std::max(width[c], cells[r][c].size());
    }
  }
  for (int r = 0; r < M.rows(); ++r) {
    std::cout << indent;
    for (int c = 0; c < M.cols(); ++c) {
      std::cout << std::string(width[c] - cells[r][c].size(), ' ') << cells[r][c];
      if (c + 1 < M.cols()) std::cout << "  ";
    }
    std::cout << "\n";
  }
}

ordered_json matrix_json(const ComplexMatrix& M) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < M.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < M.cols(); ++c)
      row.push_back(ordered_json::array({M(r, c).real(), M(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CommonOpts {
  std::string model_path;
  std::vector<std::string> params;
  bool machine = false;
  double tol_fix = tol::fix;
  double tol_formula = tol::formula;
  double tol_hit = tol::hit;
  double tol_ginverse = tol::ginverse;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_model = true) {
  auto* m = cmd->add_option("-m,--model", o.model_path, "model file (qmc-model/1 JSON)");
  if (needs_model) m->required()->check(CLI::ExistingFile);
  cmd->add_option("-P,--param", o.params, "parameter override name=value (repeatable)");
  cmd->add_flag("--machine", o.machine, "emit a JSON report instead of tables");
  cmd->add_option("--tol-fix", o.tol_fix, "fixed-point residual tolerance");
  cmd->add_option("--tol-formula", o.tol_formula, "cross-route agreement tolerance");
  cmd->add_option("--tol-hit", o.tol_hit, "hitting-probability-one tolerance");
  cmd->add_option("--tol-ginverse", o.tol_ginverse, "g-inverse residual tolerance");
}

std::map<std::string, double> parse_overrides(const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ModelIoError("--param expects name=value, got \"" + kv + "\"");
    const std::string name = kv.substr(0, eq);
    try {
      size_t used = 0;
      const double value = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing text");
      out[name] = value;
    } catch (const std::exception&) {
      throw ModelIoError("--param " + name + ": value must be a number");
    }
  }
  return out;
}

void emit(const CommonOpts& o, const std::string& command, const std::string& digest,
          const ordered_json& results, const ordered_json& residuals,
          const std::function<void()>& human) {
  if (o.machine) {
    ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["tool_version"] = kToolVersion;
    doc["model_digest"] = digest;
    doc["command"] = command;
    doc["results"] = results;
    doc["residuals"] = residuals;
    std::cout << doc.dump(2) << "\n";
  } else {
    human();
  }
}

// Everything the analytic subcommands share, computed once per invocation.
struct Analysis {
  LoadedModel loaded;
  BlockSuperoperator T;
  StationaryResult pi;
  ComplexMatrix Omega;
  ComplexMatrix Z;
};

Analysis analyze(const CommonOpts& o) {
  Analysis a;
  a.loaded = parse_model(o.model_path, parse_overrides(o.params));
  a.T = block_matrix(a.loaded.model);
  a.pi = fixed_point(a.T);
  a.Omega = limit_operator(a.pi.pi_vec, a.loaded.model.n, a.loaded.model.k);
  a.Z = fundamental_matrix(a.T, a.Omega);
  return a;
}

ComplexMatrix density_from(const std::string& spec_text, const Analysis& a) {
  const DensitySpec spec = parse_density_spec(spec_text);
  return resolve_density(spec, a.loaded.model, &a.pi);
}

int cmd_validate(const CommonOpts& o) {
  std::string digest;
  ValidationReport report;
  std::string name;
  int n = 0, k = 0;
  bool ok = true;
  try {
    const LoadedModel loaded = parse_model(o.model_path, parse_overrides(o.params));
    digest = loaded.digest;
    name = loaded.name;
    n = loaded.model.n;
    k = loaded.model.k;
    report = validate(loaded.model);
  } catch (const ModelValidationError& ex) {
    report = ex.report();
    ok = false;
    // reparse metadata without validation is not possible; derive from report
    n = static_cast<int>(report.column_residuals.size());
    name = "(invalid)";
    digest = "-";
  }
  ordered_json results;
  results["name"] = name;
  results["vertices"] = n;
  results["internal_dim"] = k;
  results["trace_preserving"] = ok && report.ok;
  ordered_json residuals;
  residuals["columns"] = report.column_residuals;
  residuals["max"] = report.max_residual;
  residuals["tolerance"] = report.tolerance;
  emit(o, "validate", digest, results, residuals, [&] {
    std::cout << "model: " << name << " (digest " << digest << ")\n";
    std::cout << "vertices: " << n << "  internal dimension: " << k << "\n";
    std::cout << "column  residual\n";
    for (size_t j = 0; j < report.column_residuals.size(); ++j)
      std::cout << j << "       " << fmt(report.column_residuals[j]) << "\n";
    std::cout << "trace preserving: " << (report.ok ? "yes" : "NO") << " (tolerance "
              << fmt(report.tolerance) << ")\n";
  });
  return report.ok ? 0 : 1;
}

int cmd_stationary(const CommonOpts& o) {
  const Analysis a = analyze(o);
  const Classification cls = classify(a.T);
  const char* aperiodic = cls.aperiodic == Tristate::yes  ? "yes"
                          : cls.aperiodic == Tristate::no ? "no"
                                                          : "unknown";
  ordered_json results;
  ordered_json blocks = ordered_json::array();
  for (const ComplexMatrix& b : a.pi.pi.blocks) blocks.push_back(matrix_json(b));
  results["pi_blocks"] = std::move(blocks);
  results["faithful"] = a.pi.faithful;
  results["min_block_eigenvalue"] = a.pi.min_block_eigenvalue;
  results["irreducible"] = cls.irreducible;
  results["aperiodic"] = aperiodic;
  results["ergodic"] = cls.ergodic;
  results["evidence"] = cls.evidence;
  ordered_json residuals;
  residuals["fixed_point"] = a.pi.residual;
  residuals["tolerance"] = o.tol_fix;
  emit(o, "stationary", a.loaded.digest, results, residuals, [&] {
    for (int i = 0; i < a.loaded.model.n; ++i) {
      std::cout << "pi block " << i << ":\n";
      print_matrix(a.pi.pi.blocks[static_cast<size_t>(i)]);
    }
    std::cout << "residual ||T pi - pi||: " << fmt(a.pi.residual) << "\n";
    std::cout << "faithful: " << (a.pi.faithful ? "yes" : "no")
              << " (min block eigenvalue " << fmt(a.pi.min_block_eigenvalue) << ")\n";
    std::cout << "irreducible: " << (cls.irreducible ? "yes" : "no")
              << "  aperiodic: " << aperiodic
              << "  ergodic: " << (cls.ergodic ? "yes" : "no") << "\n";
    std::cout << "evidence: " << cls.evidence << "\n";
  });
  return a.pi.residual <= o.tol_fix ? 0 : 1;
}

int cmd_fundamental(const CommonOpts& o, bool full) {
  const Analysis a = analyze(o);
  const int n = a.loaded.model.n;
  const int d = a.T.order();
  const ComplexMatrix A = ComplexMatrix::identity(d) - a.T.mat;
  const auto [g_ok, g_res] = is_ginverse(A, a.Z, o.tol_ginverse);
  const double pi_res = max_abs_diff(a.Z * a.pi.pi_vec, a.pi.pi_vec);
  const ComplexVector eI = e_identity(n, a.loaded.model.k);
  ComplexVector eIZ(d);
  for (int c = 0; c < d; ++c) {
    Cx s = 0.0;
    for (int r = 0; r < d; ++r) s += std::conj(eI[r]) * a.Z(r, c);
    eIZ[c] = std::conj(s);
  }
  const double ei_res = max_abs_diff(eIZ, eI);
  ordered_json results;
  if (full) {
    results["Z"] = matrix_json(a.Z);
  } else {
    ordered_json blocks = ordered_json::array();
    for (int i = 0; i < n; ++i) {
      ordered_json row = ordered_json::array();
      for (int j = 0; j < n; ++j) {
        const ComplexMatrix B = a.Z.block(i * a.loaded.model.k * a.loaded.model.k,
                                          j * a.loaded.model.k * a.loaded.model.k,
                                          a.loaded.model.k * a.loaded.model.k,
                                          a.loaded.model.k * a.loaded.model.k);
        row.push_back(matrix_json(B));
      }
      blocks.push_back(std::move(row));
    }
    results["Z_blocks"] = std::move(blocks);
  }
  ordered_json residuals;
  residuals["ginverse"] = g_res;
  residuals["Z_pi_minus_pi"] = pi_res;
  residuals["eI_Z_minus_eI"] = ei_res;
  residuals["tolerance"] = o.tol_ginverse;
  emit(o, "fundamental", a.loaded.digest, results, residuals, [&] {
    const int kk = a.loaded.model.k * a.loaded.model.k;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::cout << "Z block (" << i << "," << j << "):\n";
        print_matrix(a.Z.block(i * kk, j * kk, kk, kk));
      }
    std::cout << "g-inverse residual: " << fmt(g_res) << "\n";
    std::cout << "||Z pi - pi||: " << fmt(pi_res)
              << "   ||eI Z - eI||: " << fmt(ei_res) << "\n";
  });
  return g_ok && pi_res <= o.tol_ginverse && ei_res <= o.tol_ginverse ? 0 : 1;
}

int cmd_hitting(const CommonOpts& o, int from, int to, const std::string& rho_spec) {
  const Analysis a = analyze(o);
  const ComplexMatrix rho = density_from(rho_spec, a);
  const HittingOperators ops = hitting_operators(a.T);
  const TauResult r = tau_and_pi(ops, rho, from, to, o.tol_hit);
  ordered_json results;
  results["from"] = from;
  results["to"] = to;
  results["rho"] = rho_spec;
  results["pi_hit"] = r.pi_hit;
  results["finite"] = r.finite;
  results["tau"] = r.finite ? ordered_json(r.tau) : ordered_json("inf");
  ordered_json residuals;
  residuals["one_minus_pi_hit"] = 1.0 - r.pi_hit;
  residuals["tolerance"] = o.tol_hit;
  emit(o, "hitting", a.loaded.digest, results, residuals, [&] {
    std::cout << "hitting " << from << " -> " << to << " with rho = " << rho_spec
              << "\n";
    std::cout << "pi_hit = " << fmt(r.pi_hit) << "\n";
    std::cout << "tau    = " << (r.finite ? fmt(r.tau) : "inf") << "\n";
  });
  return 0;
}

int cmd_hunter(const CommonOpts& o, int from, int to, const std::string& rho_spec,
               const std::string& form_spec, uint64_t seed) {
  const Analysis a = analyze(o);
  const ComplexMatrix rho = density_from(rho_spec, a);
  const HittingOperators ops = hitting_operators(a.T);
  const double direct = tau_and_pi(ops, rho, from, to, o.tol_hit).tau;
  const int d = a.T.order();
  const ComplexMatrix A = ComplexMatrix::identity(d) - a.T.mat;
  const ComplexMatrix D = ops.Dmat();

  SplitMix64 rng(seed);
  auto random_vec = [&rng, d] {
    ComplexVector v(d);
    for (int i = 0; i < d; ++i) v[i] = Cx(rng.gaussian(), rng.gaussian());
    return v;
  };
  auto random_mat = [&rng, d] {
    ComplexMatrix M(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) M(r, c) = Cx(rng.gaussian(), rng.gaussian());
    return M;
  };

  ComplexMatrix G;
  double tau = 0.0;
  bool special = false;
  if (form_spec == "fundamental") {
    G = a.Z;
  } else if (form_spec == "perturbation") {
    G = perturbation_inverse(a.T, ComplexVector::basis(d, 0), ComplexVector::basis(d, 0));
  } else if (form_spec == "special") {
    G = make_special_ginverse(a.T, ComplexVector::basis(d, 0), ComplexVector(d));
    special = true;
  } else if (form_spec == "family_a" || form_spec == "family_b" ||
             form_spec == "family_c") {
    GInverseForm form;
    form.t = random_vec();
    form.u = random_vec();
    if (form_spec == "family_a") {
      form.variant = GInverseVariant::family_a;
      form.H = random_mat();
    } else if (form_spec == "family_b") {
      form.variant = GInverseVariant::family_b;
      form.F = random_mat();
      form.G = random_mat();
    } else {
      form.variant = GInverseVariant::family_c;
      form.f = random_vec();
      form.g = random_vec();
    }
    G = ginverse_from_form(a.T, a.pi.pi_vec, form);
  } else {
    throw ModelIoError("unknown g-inverse form \"" + form_spec +
                       "\" (use fundamental | perturbation | special | family_a | "
                       "family_b | family_c)");
  }
  const auto [g_ok, g_res] = is_ginverse(A, G, o.tol_ginverse);
  tau = special ? hunter_special(a.T, D, G, rho, from, to)
                : hunter_general(a.T, a.Omega, D, G, rho, from, to);
  const double diff = std::abs(tau - direct);

  ordered_json results;
  results["from"] = from;
  results["to"] = to;
  results["rho"] = rho_spec;
  results["ginverse"] = form_spec;
  results["tau_hunter"] = tau;
  results["tau_direct"] = direct;
  ordered_json residuals;
  residuals["ginverse"] = g_res;
  residuals["vs_direct"] = diff;
  residuals["tolerance"] = o.tol_formula;
  emit(o, "hunter", a.loaded.digest, results, residuals, [&] {
    std::cout << "g-inverse: " << form_spec;
    if (form_spec.rfind("family", 0) == 0) std::cout << " (seed " << seed << ")";
    std::cout << "\n";
    std::cout << "g-inverse residual: " << fmt(g_res) << "\n";
    std::cout << "tau (hunter) = " << fmt(tau) << "\n";
    std::cout << "tau (direct) = " << fmt(direct) << "\n";
    std::cout << "|difference| = " << fmt(diff) << "\n";
  });
  return g_ok && diff <= o.tol_formula ? 0 : 1;
}

int cmd_target(const CommonOpts& o, int from, const std::string& rho_spec) {
  const Analysis a = analyze(o);
  const ComplexMatrix rho = density_from(rho_spec, a);
  const HittingOperators ops = hitting_operators(a.T);
  const RandomTargetResult r = random_target(a.Z, ops, rho, from);
  const double diff = std::abs(r.t_target - r.t_direct);
  ordered_json results;
  results["from"] = from;
  results["rho"] = rho_spec;
  results["applicable"] = r.applicable;
  if (r.c) results["c"] = *r.c;
  results["t_target"] = r.t_target;
  results["t_direct"] = r.t_direct;
  ordered_json residuals;
  residuals["c_deviation"] = r.c_deviation;
  residuals["routes"] = diff;
  residuals["tolerance"] = o.tol_formula;
  emit(o, "target", a.loaded.digest, results, residuals, [&] {
    std::cout << "applicable: " << (r.applicable ? "yes" : "no");
    if (r.c) std::cout << " (c = " << fmt(*r.c) << ")";
    std::cout << "  row deviation " << fmt(r.c_deviation) << "\n";
    std::cout << "t_circ (Z route)          = " << fmt(r.t_target) << "\n";
    std::cout << "t_circ (direct, j=" << from << ")     = " << fmt(r.t_direct) << "\n";
    std::cout << "|difference| = " << fmt(diff) << "\n";
    if (!r.applicable)
      std::cout << "note: operator condition fails; the two routes still agree on "
                   "densities within the restricted (e.g. diagonal) family\n";
  });
  return diff <= o.tol_formula ? 0 : 1;
}

int cmd_mhtf2(const CommonOpts& o) {
  const Analysis a = analyze(o);
  const HittingOperators ops = hitting_operators(a.T);
  const Mhtf2Result r = mhtf2(a.Z, ops, a.pi.pi, o.tol_formula);
  ordered_json results;
  results["lhs"] = r.lhs;
  results["rhs"] = r.rhs;
  results["ok"] = r.ok;
  ordered_json residuals;
  residuals["max"] = r.max_residual;
  residuals["tolerance"] = o.tol_formula;
  emit(o, "mhtf2", a.loaded.digest, results, residuals, [&] {
    std::cout << "vertex  Tr(K_j pi)        Tr((DZ)_jj F_j pi)  |diff|\n";
    for (size_t j = 0; j < r.lhs.size(); ++j) {
      char line[160];
      std::snprintf(line, sizeof line, "%-7zu %-17s %-19s %s", j, fmt(r.lhs[j]).c_str(),
                    fmt(r.rhs[j]).c_str(), fmt(std::abs(r.lhs[j] - r.rhs[j])).c_str());
      std::cout << line << "\n";
    }
    std::cout << "max residual: " << fmt(r.max_residual) << " (tolerance "
              << fmt(o.tol_formula) << ")\n";
  });
  return r.ok ? 0 : 1;
}

int cmd_simulate(const CommonOpts& o, int from, int to, const std::string& rho_spec,
                 const TrajectoryConfig& cfg) {
  const Analysis a = analyze(o);
  const ComplexMatrix rho = density_from(rho_spec, a);
  const HittingOperators ops = hitting_operators(a.T);
  const TauResult analytic = tau_and_pi(ops, rho, from, to, o.tol_hit);
  const HittingEstimate est = estimate_hitting(a.loaded.model, from, rho, to, cfg);
  const double z = analytic.finite && est.stderr_ > 0.0
                       ? (est.mean - analytic.tau) / est.stderr_
                       : 0.0;
  ordered_json results;
  results["from"] = from;
  results["to"] = to;
  results["rho"] = rho_spec;
  results["samples"] = est.samples;
  results["mean"] = est.mean;
  results["stderr"] = est.stderr_;
  results["hit_fraction"] = est.hit_fraction;
  results["censored"] = est.censored;
  results["analytic"] = analytic.finite ? ordered_json(analytic.tau) : ordered_json("inf");
  results["z"] = z;
  ordered_json residuals;
  residuals["abs_error"] = analytic.finite ? std::abs(est.mean - analytic.tau) : 0.0;
  residuals["four_stderr"] = 4.0 * est.stderr_;
  emit(o, "simulate", a.loaded.digest, results, residuals, [&] {
    std::cout << "samples: " << est.samples << " (censored " << est.censored
              << ", hit fraction " << fmt(est.hit_fraction) << ")\n";
    std::cout << "mean     = " << fmt(est.mean) << "\n";
    std::cout << "stderr   = " << fmt(est.stderr_) << "\n";
    std::cout << "analytic = " << (analytic.finite ? fmt(analytic.tau) : "inf") << "\n";
    if (analytic.finite) std::cout << "z        = " << fmt(z) << "\n";
  });
  if (!analytic.finite) return 0;
  return std::abs(z) <= 4.0 ? 0 : 1;
}

int cmd_reproduce(const CommonOpts& o, bool with_mc) {
  const std::vector<corpus::GoldenCase> table = corpus::golden_table();
  ordered_json cases = ordered_json::array();
  int passed = 0, failed = 0;
  struct Row {
    std::string fixture, quantity, density, expected, computed, diff, tolerance;
    bool pass;
  };
  std::vector<Row> rows;
  for (const corpus::GoldenCase& gc : table) {
    const double got = gc.compute();
    const double want = gc.expected();
    const double diff = std::abs(got - want);
    const bool pass = diff <= gc.tol;
    (pass ? passed : failed) += 1;
    rows.push_back({gc.fixture, gc.quantity, gc.density,
                    gc.den == 1 ? std::to_string(gc.num)
                                : std::to_string(gc.num) + "/" + std::to_string(gc.den),
                    fmt(got), fmt(diff), fmt(gc.tol), pass});
    ordered_json c;
    c["fixture"] = gc.fixture;
    c["quantity"] = gc.quantity;
    c["density"] = gc.density;
    c["expected"] = want;
    c["computed"] = got;
    c["diff"] = diff;
    c["tol"] = gc.tol;
    c["note"] = gc.note;
    c["pass"] = pass;
    cases.push_back(std::move(c));
  }
  if (with_mc) {
    TrajectoryConfig cfg;
    cfg.samples = 100000;
    cfg.seed = 1;
    cfg.workers = 0;  // hardware
    ComplexMatrix rho(2, 2);
    rho(0, 0) = 1.0;
    const HittingEstimate est = estimate_hitting(corpus::ex1(0.6), 1, rho, 0, cfg);
    const double want = 25.0 / 16.0;
    const double diff = std::abs(est.mean - want);
    const double tol_mc = 4.0 * est.stderr_;
    const bool pass = diff <= tol_mc && est.censored == 0;
    (pass ? passed : failed) += 1;
    rows.push_back({"ex1 a=3/5", "tau 1->0 (monte carlo)", "basis:0", "25/16",
                    fmt(est.mean), fmt(diff), fmt(tol_mc) + " (4 stderr)", pass});
    ordered_json c;
    c["fixture"] = "ex1 a=3/5";
    c["quantity"] = "tau 1->0 (monte carlo)";
    c["density"] = "basis:0";
    c["expected"] = want;
    c["computed"] = est.mean;
    c["diff"] = diff;
    c["tol"] = tol_mc;
    c["note"] = "100000 trajectories, seed 1, 4 stderr band";
    c["pass"] = pass;
    cases.push_back(std::move(c));
  }
  ordered_json results;
  results["cases"] = std::move(cases);
  results["passed"] = passed;
  results["failed"] = failed;
  emit(o, "reproduce-paper", "-", results, ordered_json::object(), [&] {
    size_t wf = 8, wq = 8, wd = 7, we = 8, wc = 8, wdf = 6, wt = 6;
    for (const Row& r : rows) {
      wf = std::max(wf, r.fixture.size());
      wq = std::max(wq, r.quantity.size());
      wd = std::max(wd, r.density.size());
      we = std::max(we, r.expected.size());
      wc = std::max(wc, r.computed.size());
      wdf = std::max(wdf, r.diff.size());
      wt = std::max(wt, r.tolerance.size());
    }
    auto pad = [](const std::string& s, size_t w) {
      return s + std::string(w - s.size() + 2, ' ');
    };
    std::cout << pad("fixture", wf) << pad("quantity", wq) << pad("density", wd)
              << pad("expected", we) << pad("computed", wc) << pad("|diff|", wdf)
              << pad("tol", wt) << "status\n";
    for (const Row& r : rows)
      std::cout << pad(r.fixture, wf) << pad(r.quantity, wq) << pad(r.density, wd)
                << pad(r.expected, we) << pad(r.computed, wc) << pad(r.diff, wdf)
                << pad(r.tolerance, wt) << (r.pass ? "PASS" : "FAIL") << "\n";
    std::cout << passed << " passed, " << failed << " failed\n";
  });
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite quantum Markov chains: stationary densities, fundamental "
               "matrices, and mean hitting times"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonOpts common;
  int from = 0, to = 0;
  std::string rho_spec = "mixed";
  std::string form_spec = "fundamental";
  uint64_t hunter_seed = 2024;
  bool z_full = false;
  bool skip_mc = false;
  TrajectoryConfig cfg;

  auto* validate_cmd = app.add_subcommand("validate", "check trace preservation");
  add_common(validate_cmd, common);

  auto* stationary_cmd =
      app.add_subcommand("stationary", "fixed point, faithfulness, classification");
  add_common(stationary_cmd, common);

  auto* fundamental_cmd =
      app.add_subcommand("fundamental", "fundamental matrix Z = (I - T + Omega)^-1");
  add_common(fundamental_cmd, common);
  fundamental_cmd->add_flag("--full", z_full, "machine report: one flat matrix");

  auto* hitting_cmd = app.add_subcommand("hitting", "mean hitting time, direct route");
  add_common(hitting_cmd, common);
  hitting_cmd->add_option("--from", from, "start vertex (0-based)")->required();
  hitting_cmd->add_option("--to", to, "target vertex (0-based)")->required();
  hitting_cmd->add_option("--rho", rho_spec,
                          "density: mixed | basis:a | file:<path> | stationary:i");

  auto* hunter_cmd =
      app.add_subcommand("hunter", "mean hitting time through a g-inverse");
  add_common(hunter_cmd, common);
  hunter_cmd->add_option("--from", from, "start vertex (0-based)")->required();
  hunter_cmd->add_option("--to", to, "target vertex (0-based)")->required();
  hunter_cmd->add_option("--rho", rho_spec, "density spec");
  hunter_cmd->add_option("--ginverse", form_spec,
                         "fundamental | perturbation | special | family_a | family_b "
                         "| family_c");
  hunter_cmd->add_option("--seed", hunter_seed, "seed for the random families");

  auto* target_cmd = app.add_subcommand("target", "random-target (stationary mix) time");
  add_common(target_cmd, common);
  target_cmd->add_option("--from", from, "start vertex for the direct route");
  target_cmd->add_option("--rho", rho_spec, "density spec");

  auto* mhtf2_cmd =
      app.add_subcommand("mhtf2", "stationary mean-hitting identity, both sides");
  add_common(mhtf2_cmd, common);

  auto* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo trajectories vs the analytic value");
  add_common(simulate_cmd, common);
  simulate_cmd->add_option("--from", from, "start vertex (0-based)")->required();
  simulate_cmd->add_option("--to", to, "target vertex (0-based)")->required();
  simulate_cmd->add_option("--rho", rho_spec, "density spec");
  simulate_cmd->add_option("--samples", cfg.samples, "trajectory count");
  simulate_cmd->add_option("--seed", cfg.seed, "RNG seed");
  simulate_cmd->add_option("--workers", cfg.workers,
                           "worker threads (0 = hardware concurrency)");
  simulate_cmd->add_option("--max-steps", cfg.max_steps, "censoring horizon");

  auto* reproduce_cmd = app.add_subcommand(
      "reproduce-paper", "run every built-in example against its golden values");
  add_common(reproduce_cmd, common, /*needs_model=*/false);
  reproduce_cmd->add_flag("--skip-monte-carlo", skip_mc,
                          "omit the trajectory check (fast table only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(common);
    if (stationary_cmd->parsed()) return cmd_stationary(common);
    if (fundamental_cmd->parsed()) return cmd_fundamental(common, z_full);
    if (hitting_cmd->parsed()) return cmd_hitting(common, from, to, rho_spec);
    if (hunter_cmd->parsed())
      return cmd_hunter(common, from, to, rho_spec, form_spec, hunter_seed);
    if (target_cmd->parsed()) return cmd_target(common, from, rho_spec);
    if (mhtf2_cmd->parsed()) return cmd_mhtf2(common);
    if (simulate_cmd->parsed()) return cmd_simulate(common, from, to, rho_spec, cfg);
    if (reproduce_cmd->parsed()) return cmd_reproduce(common, !skip_mc);
  } catch (const ModelIoError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const ExprParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const ModelValidationError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const NumericalError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
