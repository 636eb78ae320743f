#include "qmc/hitting.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qmc {

namespace {

ComplexMatrix grid_to_matrix(const std::vector<std::vector<ComplexMatrix>>& grid,
                             int n, int k) {
  ComplexMatrix M(n * k * k, n * k * k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M.set_block(i * k * k, j * k * k, grid[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return M;
}

void check_vertex(const BlockSuperoperator& T, int i) {
  if (i < 0 || i >= T.n) throw std::invalid_argument("vertex index out of range");
}

}  // namespace

ComplexMatrix HittingOperators::Hmat() const { return grid_to_matrix(H, n, k); }

ComplexMatrix HittingOperators::Kmat() const { return grid_to_matrix(K, n, k); }

ComplexMatrix HittingOperators::Dmat() const {
  ComplexMatrix D(n * k * k, n * k * k);
  for (int i = 0; i < n; ++i)
    D.set_block(i * k * k, i * k * k, R[static_cast<size_t>(i)]);
  return D;
}

MonitorProjectors monitor_projectors(int n, int k, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("vertex index out of range");
  MonitorProjectors mp;
  mp.P = ComplexMatrix(n * k * k, n * k * k);
  for (int a = 0; a < k * k; ++a) mp.P(i * k * k + a, i * k * k + a) = 1.0;
  mp.Q = ComplexMatrix::identity(n * k * k) - mp.P;
  return mp;
}

namespace {

// (I - x Q_i T)^-1, with the strict-contraction check when x = 1.
ComplexMatrix monitored_resolvent(const BlockSuperoperator& T, int i, double x) {
  const MonitorProjectors mp = monitor_projectors(T.n, T.k, i);
  const ComplexMatrix QT = mp.Q * T.mat;
  if (x == 1.0) {
    const double sr = spectral_radius(QT);
    if (sr >= 1.0 - 1e-8)
      throw NumericalError("monitored spectral radius >= 1 at target vertex " +
                           std::to_string(i) + " (sr ~ " + std::to_string(sr) +
                           ")");
  }
  return invert(ComplexMatrix::identity(T.order()) - x * QT);
}

}  // namespace

ComplexMatrix generating_function(const BlockSuperoperator& T, int i, int j,
                                  double x) {
  check_vertex(T, i);
  check_vertex(T, j);
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("generating function requires x in [0,1]");
  const ComplexMatrix M = T.mat * monitored_resolvent(T, i, x);
  const int k2 = T.k * T.k;
  return M.block(i * k2, j * k2, k2, k2);
}

ComplexMatrix generating_function_series(const BlockSuperoperator& T, int i,
                                         int j, double x, int terms) {
  check_vertex(T, i);
  check_vertex(T, j);
  if (terms < 1) throw std::invalid_argument("series needs at least one term");
  const MonitorProjectors mp = monitor_projectors(T.n, T.k, i);
  const ComplexMatrix QT = mp.Q * T.mat;
  const int k2 = T.k * T.k;
  // cur = T (Q T)^(m-1), accumulated with weight x^(m-1).
  ComplexMatrix cur = T.mat;
  ComplexMatrix acc(T.order(), T.order());
  double weight = 1.0;
  for (int m = 1; m <= terms; ++m) {
    acc = acc + weight * cur;
    if (m < terms) {
      cur = cur * QT;
      weight *= x;
    }
  }
  return acc.block(i * k2, j * k2, k2, k2);
}

ComplexMatrix generating_function_derivative(const BlockSuperoperator& T, int i,
                                             int j, double x) {
  check_vertex(T, i);
  check_vertex(T, j);
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("generating function requires x in [0,1]");
  const MonitorProjectors mp = monitor_projectors(T.n, T.k, i);
  const ComplexMatrix QT = mp.Q * T.mat;
  if (x == 1.0) {
    const double sr = spectral_radius(QT);
    if (sr >= 1.0 - 1e-8)
      throw NumericalError("monitored spectral radius >= 1 at target vertex " +
                           std::to_string(i));
  }
  const ComplexMatrix W =
      invert(ComplexMatrix::identity(T.order()) - x * QT);
  const ComplexMatrix TW = T.mat * W;
  const ComplexMatrix M = TW + x * (TW * QT * W);
  const int k2 = T.k * T.k;
  return M.block(i * k2, j * k2, k2, k2);
}

HittingOperators hitting_operators(const BlockSuperoperator& T) {
  HittingOperators ops;
  ops.n = T.n;
  ops.k = T.k;
  const int k2 = T.k * T.k;
  ops.H.assign(static_cast<size_t>(T.n),
               std::vector<ComplexMatrix>(static_cast<size_t>(T.n)));
  ops.K = ops.H;
  ops.R.resize(static_cast<size_t>(T.n));
  for (int i = 0; i < T.n; ++i) {
    const ComplexMatrix W = monitored_resolvent(T, i, 1.0);
    const MonitorProjectors mp = monitor_projectors(T.n, T.k, i);
    const ComplexMatrix TW = T.mat * W;
    const ComplexMatrix deriv = TW + TW * (mp.Q * T.mat) * W;
    for (int j = 0; j < T.n; ++j) {
      const ComplexMatrix h = TW.block(i * k2, j * k2, k2, k2);
      const ComplexMatrix kk = deriv.block(i * k2, j * k2, k2, k2);
      ops.H[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          (i == j) ? ComplexMatrix::identity(k2) : h;
      ops.K[static_cast<size_t>(i)][static_cast<size_t>(j)] = kk;
      if (i == j) ops.R[static_cast<size_t>(i)] = kk;
    }
  }
  return ops;
}

TauResult tau_and_pi(const HittingOperators& ops, const ComplexMatrix& rho_j,
                     int j, int i, double tol_hit) {
  if (i < 0 || i >= ops.n || j < 0 || j >= ops.n)
    throw std::invalid_argument("vertex index out of range");
  TauResult r;
  r.pi_hit =
      trace_of_action(ops.H[static_cast<size_t>(i)][static_cast<size_t>(j)], rho_j)
          .real();
  const double t =
      trace_of_action(ops.K[static_cast<size_t>(i)][static_cast<size_t>(j)], rho_j)
          .real();
  if (i == j) {
    r.tau = t;  // mean return time via r_i
    return r;
  }
  if (r.pi_hit >= 1.0 - tol_hit) {
    r.tau = t;
  } else {
    r.tau = std::numeric_limits<double>::infinity();
    r.finite = false;
  }
  return r;
}

double first_step_residual(const BlockSuperoperator& T,
                           const HittingOperators& ops) {
  const ComplexMatrix K = ops.Kmat();
  const ComplexMatrix D = ops.Dmat();
  const ComplexMatrix L = K - (K - D) * T.mat;
  const int k2 = T.k * T.k;
  double worst = 0.0;
  const auto probes = probe_densities(T.k);
  for (int i = 0; i < T.n; ++i)
    for (int j = 0; j < T.n; ++j) {
      const ComplexMatrix Lij = L.block(i * k2, j * k2, k2, k2);
      for (const ComplexMatrix& rho : probes)
        worst = std::max(worst,
                         std::abs(trace_of_action(Lij, rho) - Cx{1.0, 0.0}));
    }
  return worst;
}

}  // namespace qmc
