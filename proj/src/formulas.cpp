#include "qmc/formulas.hpp"

#include <cmath>

#include "qmc/ginverse.hpp"
#include "qmc/stationary.hpp"

namespace qmc {

namespace {

ComplexMatrix block_diagonal_of(const ComplexMatrix& M, int n, int k2) {
  ComplexMatrix D(n * k2, n * k2);
  for (int i = 0; i < n; ++i)
    D.set_block(i * k2, i * k2, M.block(i * k2, i * k2, k2, k2));
  return D;
}

}  // namespace

ComplexMatrix identity_block_grid(int n, int k) {
  const int k2 = k * k;
  ComplexMatrix E(n * k2, n * k2);
  const ComplexMatrix I = ComplexMatrix::identity(k2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) E.set_block(i * k2, j * k2, I);
  return E;
}

ComplexMatrix hunter_matrix(const BlockSuperoperator& T, const ComplexMatrix& Omega,
                            const ComplexMatrix& D, const ComplexMatrix& G) {
  const int k2 = T.k * T.k;
  const ComplexMatrix E = identity_block_grid(T.n, T.k);
  const ComplexMatrix I = ComplexMatrix::identity(T.order());
  const ComplexMatrix OG = Omega * G;
  return D * (OG - block_diagonal_of(OG, T.n, k2) * E + I - G +
              block_diagonal_of(G, T.n, k2) * E);
}

double hunter_general(const BlockSuperoperator& T, const ComplexMatrix& Omega,
                      const ComplexMatrix& D, const ComplexMatrix& G,
                      const ComplexMatrix& rho_j, int j, int i) {
  const ComplexMatrix ImT = ComplexMatrix::identity(T.order()) - T.mat;
  const auto [ok, residual] = is_ginverse(ImT, G);
  if (!ok)
    throw NumericalError("not a g-inverse of I - T (residual " +
                         std::to_string(residual) + ")");
  const ComplexMatrix M = hunter_matrix(T, Omega, D, G);
  const int k2 = T.k * T.k;
  return trace_of_action(M.block(i * k2, j * k2, k2, k2), rho_j).real();
}

ComplexMatrix hunter_special_matrix(const BlockSuperoperator& T,
                                    const ComplexMatrix& D,
                                    const ComplexMatrix& G_special) {
  const int k2 = T.k * T.k;
  const ComplexMatrix E = identity_block_grid(T.n, T.k);
  const ComplexMatrix I = ComplexMatrix::identity(T.order());
  return D * (I - G_special + block_diagonal_of(G_special, T.n, k2) * E);
}

double hunter_special(const BlockSuperoperator& T, const ComplexMatrix& D,
                      const ComplexMatrix& G_special, const ComplexMatrix& rho_j,
                      int j, int i) {
  const ComplexMatrix M = hunter_special_matrix(T, D, G_special);
  const int k2 = T.k * T.k;
  return trace_of_action(M.block(i * k2, j * k2, k2, k2), rho_j).real();
}

ComplexMatrix make_special_ginverse(const BlockSuperoperator& T,
                                    const ComplexVector& u,
                                    const ComplexVector& f) {
  const ComplexVector eI = e_identity(T.n, T.k);
  return perturbation_inverse(T, u, eI) + outer(f, eI);
}

double mhtf1(const ComplexMatrix& Z, const HittingOperators& ops,
             const ComplexMatrix& rho_j, int j, int i) {
  const int k2 = ops.k * ops.k;
  const ComplexMatrix Zii = Z.block(i * k2, i * k2, k2, k2);
  const ComplexMatrix Zij = Z.block(i * k2, j * k2, k2, k2);
  const ComplexMatrix op = ops.R[static_cast<size_t>(i)] * (Zii - Zij);
  return trace_of_action(op, rho_j).real();
}

RandomTargetResult random_target(const ComplexMatrix& Z,
                                 const HittingOperators& ops,
                                 const ComplexMatrix& rho, int j) {
  const int n = ops.n;
  const int k = ops.k;
  const int k2 = k * k;
  RandomTargetResult out;

  // Row-proportionality condition <e_{I,1}| r_i = c <e_{I,1}|.
  const ComplexVector e1 = vec_identity(k);
  double worst = 0.0;
  std::vector<Cx> scalars;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix& R = ops.R[static_cast<size_t>(i)];
    ComplexVector row(k2);
    for (int c = 0; c < k2; ++c) {
      Cx s{0.0, 0.0};
      for (int a = 0; a < k2; ++a) s += e1[a] * R(a, c);
      row[c] = s;
    }
    const Cx ci = inner(e1, row) * (1.0 / static_cast<double>(k));
    scalars.push_back(ci);
    worst = std::max(worst, max_abs_diff(row, ci * e1));
  }
  for (const Cx& ci : scalars)
    worst = std::max(worst, std::abs(ci - scalars.front()));
  out.c_deviation = worst;
  out.applicable = worst <= 1e-9;
  if (out.applicable) out.c = scalars.front().real();

  // Z route: independent of j by construction.
  double via_z = 0.0;
  for (int i = 0; i < n; ++i)
    via_z += trace_of_action(Z.block(i * k2, i * k2, k2, k2), rho).real();
  out.t_target = via_z - 1.0;

  // Direct route at the given start vertex (diagonal excluded).
  double direct = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == j) continue;
    double cond = 0.0;
    const ComplexMatrix Rinv = invert(ops.R[static_cast<size_t>(i)], &cond);
    if (cond > tol::condition_cap)
      throw NumericalError("return operator r_i is not invertible (condition " +
                           std::to_string(cond) + ")");
    direct += trace_of_action(
                  Rinv * ops.K[static_cast<size_t>(i)][static_cast<size_t>(j)], rho)
                  .real();
  }
  out.t_direct = direct;
  return out;
}

Mhtf2Result mhtf2(const ComplexMatrix& Z, const HittingOperators& ops,
                  const QmcDensity& pi, double tolerance) {
  const int n = ops.n;
  const int k = ops.k;
  const int k2 = k * k;
  if (pi.n != n || pi.k != k)
    throw std::invalid_argument("density does not match operator shape");
  Mhtf2Result out;
  for (int j = 0; j < n; ++j) {
    ComplexVector Kj(k2), Fj(k2);
    for (int i = 0; i < n; ++i) {
      const ComplexVector pv = vec(pi.blocks[static_cast<size_t>(i)]);
      const ComplexVector kterm =
          ops.K[static_cast<size_t>(j)][static_cast<size_t>(i)] * pv;
      const ComplexVector hterm =
          ops.H[static_cast<size_t>(j)][static_cast<size_t>(i)] * pv;
      Kj = Kj + kterm;
      Fj = Fj + hterm;
    }
    const ComplexMatrix Kj_mat = unvec(Kj, k);
    const ComplexMatrix Fj_mat = unvec(Fj, k);
    double lhs = 0.0;
    for (int a = 0; a < k; ++a) lhs += Kj_mat(a, a).real();
    const ComplexMatrix Zjj = Z.block(j * k2, j * k2, k2, k2);
    const double rhs =
        trace_of_action(ops.R[static_cast<size_t>(j)] * Zjj, Fj_mat).real();
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs));
  }
  out.ok = out.max_residual <= tolerance;
  return out;
}

FormulaReport classical_check(const ComplexMatrix& P, double tolerance) {
  if (!P.is_square()) throw std::invalid_argument("P must be square");
  const int n = P.rows();
  QmcModel model(n, 1, "classical");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Cx entry = P(i, j);
      if (std::abs(entry.imag()) > 0.0 || entry.real() < 0.0)
        throw std::invalid_argument("P must have nonnegative real entries");
      if (entry.real() == 0.0) continue;
      model.kraus(i, j) = {ComplexMatrix{{std::sqrt(entry.real())}}};
    }
  const ValidationReport vr = validate(model);
  if (!vr.ok)
    throw std::invalid_argument("P is not column-stochastic to tolerance");

  const BlockSuperoperator T = block_matrix(model);
  const Classification cls = classify(T);
  if (!cls.ergodic)
    throw NumericalError("classical chain rejected: not ergodic (" +
                         cls.evidence + ")");

  const StationaryResult st = fixed_point(T);
  const ComplexMatrix Omega = limit_operator(st.pi_vec, n, 1);
  const ComplexMatrix Z = fundamental_matrix(T, Omega);
  const HittingOperators ops = hitting_operators(T);
  const ComplexMatrix D = ops.Dmat();
  const ComplexMatrix rho1{{Cx{1.0, 0.0}}};

  // First-step linear systems, one per target.
  std::vector<std::vector<double>> first_step(
      static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int target = 0; target < n; ++target) {
    const int m = n - 1;
    ComplexMatrix A(m, m);
    std::vector<int> idx;
    for (int v = 0; v < n; ++v)
      if (v != target) idx.push_back(v);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        const Cx pli = P(idx[static_cast<size_t>(c)], idx[static_cast<size_t>(r)]);
        A(r, c) = ((r == c) ? Cx{1.0, 0.0} : Cx{0.0, 0.0}) - pli;
      }
    ComplexVector ones(m);
    for (int r = 0; r < m; ++r) ones[r] = 1.0;
    const ComplexVector sol = solve(A, ones);
    for (int r = 0; r < m; ++r)
      first_step[static_cast<size_t>(target)][static_cast<size_t>(idx[static_cast<size_t>(r)])] =
          sol[r].real();
  }

  FormulaReport report;
  report.method = "classical k=1 cross-check";
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double direct = tau_and_pi(ops, rho1, j, i).tau;
      const double pi_i = st.pi.blocks[static_cast<size_t>(i)](0, 0).real();
      const double classical =
          (Z(i, i).real() - Z(i, j).real()) / pi_i;
      const double hunter = hunter_general(T, Omega, D, Z, rho1, j, i);
      const double mh1 = mhtf1(Z, ops, rho1, j, i);
      const double fs = first_step[static_cast<size_t>(i)][static_cast<size_t>(j)];
      report.values.push_back(direct);
      worst = std::max({worst, std::abs(direct - classical),
                        std::abs(hunter - direct), std::abs(mh1 - direct),
                        std::abs(fs - direct)});
    }
  report.max_disagreement_vs_direct = worst;
  report.ok = worst <= tolerance;
  report.detail = "routes: direct, classical fundamental-matrix formula, "
                  "Hunter, first formula, first-step solve";
  return report;
}

}  // namespace qmc
