#include "qmc/stationary.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qmc/rng.hpp"

namespace qmc {

namespace {

StationaryResult package(const BlockSuperoperator& T, ComplexVector x) {
  const ComplexVector eI = e_identity(T.n, T.k);
  const Cx norm = inner(eI, x);
  if (std::abs(norm) < tol::admissible)
    throw NumericalError("candidate fixed point has zero trace weight");
  x = (Cx{1.0, 0.0} / norm) * x;

  StationaryResult r;
  r.pi = QmcDensity::from_vec(x, T.n, T.k);
  for (ComplexMatrix& b : r.pi.blocks) b = hermitize(b);
  r.pi_vec = r.pi.vec_form();
  r.residual = (T.mat * r.pi_vec - r.pi_vec).norm();
  r.min_block_eigenvalue = std::numeric_limits<double>::infinity();
  for (const ComplexMatrix& b : r.pi.blocks) {
    const auto eigs = hermitian_eigenvalues_small(b);
    if (!eigs.empty())
      r.min_block_eigenvalue = std::min(r.min_block_eigenvalue, eigs.front());
  }
  r.faithful = r.min_block_eigenvalue > tol::positivity;
  return r;
}

}  // namespace

StationaryResult fixed_point(const BlockSuperoperator& T, const ComplexVector& t,
                             const ComplexVector& u) {
  const int d = T.order();
  if (t.dim() != d || u.dim() != d)
    throw std::invalid_argument("probe vectors must have dimension n*k*k");
  const ComplexVector eI = e_identity(T.n, T.k);
  if (std::abs(inner(eI, t)) < tol::admissible)
    throw std::invalid_argument("<e_I|t> = 0: inadmissible probe vector t");
  const ComplexMatrix A =
      ComplexMatrix::identity(d) - T.mat + outer(t, u);
  ComplexVector x;
  try {
    x = solve(A, t);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError(
        "I - T + |t><u| is singular: invalid (t,u) pair or reducible chain");
  }
  return package(T, x);
}

StationaryResult fixed_point(const BlockSuperoperator& T) {
  const int d = T.order();
  {
    const ComplexVector e1 = ComplexVector::basis(d, 0);
    try {
      return fixed_point(T, e1, e1);
    } catch (const NumericalError&) {
      // fall through to random probes
    }
  }
  SplitMix64 rng(0x7a1e5eedull);
  for (int attempt = 0; attempt < 8; ++attempt) {
    ComplexVector t(d), u(d);
    for (int i = 0; i < d; ++i) {
      t[i] = Cx{rng.gaussian(), rng.gaussian()};
      u[i] = Cx{rng.gaussian(), rng.gaussian()};
    }
    try {
      return fixed_point(T, t, u);
    } catch (const NumericalError&) {
      continue;
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  throw NumericalError(
      "no admissible (t,u) pair found: chain appears reducible");
}

StationaryResult fixed_point_via_ginverse(const BlockSuperoperator& T,
                                          const ComplexMatrix& G,
                                          const ComplexVector& v) {
  const int d = T.order();
  if (G.rows() != d || G.cols() != d || v.dim() != d)
    throw std::invalid_argument("shape mismatch in fixed_point_via_ginverse");
  const ComplexMatrix ImT = ComplexMatrix::identity(d) - T.mat;
  const ComplexMatrix A = ComplexMatrix::identity(d) - G * ImT;
  const ComplexVector w = A * v;
  const Cx s = inner(e_identity(T.n, T.k), w);
  if (std::abs(s) < tol::admissible)
    throw NumericalError("<e_I|A v> = 0: choose another v");
  return package(T, w);
}

ComplexMatrix limit_operator(const ComplexVector& pi_vec, int n, int k) {
  if (pi_vec.dim() != n * k * k)
    throw std::invalid_argument("pi vector must have dimension n*k*k");
  return outer(pi_vec, e_identity(n, k));
}

namespace {

// Dimension of the kernel of M by column-pivoted elimination.
int kernel_dimension(ComplexMatrix M) {
  const int n = M.rows();
  const double tol_rank = 1e-9 * std::max(M.frobenius_norm(), 1.0);
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int best = -1;
    double best_abs = tol_rank;
    for (int r = rank; r < n; ++r) {
      const double v = std::abs(M(r, col));
      if (v > best_abs) {
        best = r;
        best_abs = v;
      }
    }
    if (best < 0) continue;
    if (best != rank)
      for (int c = 0; c < n; ++c) std::swap(M(rank, c), M(best, c));
    const Cx piv = M(rank, col);
    for (int r = rank + 1; r < n; ++r) {
      const Cx f = M(r, col) / piv;
      if (f == Cx{0.0, 0.0}) continue;
      for (int c = col; c < n; ++c) M(r, c) -= f * M(rank, c);
    }
    ++rank;
  }
  return n - rank;
}

}  // namespace

Classification classify(const BlockSuperoperator& T) {
  Classification cls;
  std::ostringstream evidence;
  const int d = T.order();
  const ComplexMatrix ImT = ComplexMatrix::identity(d) - T.mat;
  const int nullity = kernel_dimension(ImT);
  evidence << "kernel dim of I-T: " << nullity;

  bool unique_fixed = (nullity == 1);
  StationaryResult st;
  bool have_pi = false;
  if (unique_fixed) {
    try {
      st = fixed_point(T);
      have_pi = true;
      evidence << "; min block eigenvalue of pi: " << st.min_block_eigenvalue;
    } catch (const NumericalError& e) {
      evidence << "; fixed point computation failed: " << e.what();
    }
  }
  cls.irreducible = unique_fixed && have_pi && st.faithful;

  if (!have_pi) {
    cls.aperiodic = Tristate::unknown;
    evidence << "; aperiodicity not tested (no fixed point available)";
  } else {
    const ComplexMatrix Omega = limit_operator(st.pi_vec, T.n, T.k);
    ComplexMatrix M = T.mat;
    double dist = max_abs_diff(M, Omega);
    double first_dist = dist;
    bool converged = dist <= 1e-8;
    int m = 0;
    std::vector<double> history{dist};
    for (; m < 60 && !converged; ++m) {
      M = M * M;
      dist = max_abs_diff(M, Omega);
      history.push_back(dist);
      if (!std::isfinite(dist)) break;
      converged = dist <= 1e-8;
    }
    evidence << "; doubling distances: first " << first_dist << ", last " << dist
             << " after " << m << " doublings";
    if (converged) {
      cls.aperiodic = Tristate::yes;
    } else {
      // Stalled well away from the limit reads as periodic behaviour; a slow
      // but still-shrinking tail stays inconclusive.
      const size_t hn = history.size();
      const double tail = history[hn - 1];
      const double before = history[hn > 10 ? hn - 11 : 0];
      const bool stalled = std::isfinite(tail) && tail > 1e-4 &&
                           tail >= 0.5 * before;
      cls.aperiodic = stalled ? Tristate::no : Tristate::unknown;
    }
  }

  cls.ergodic = cls.irreducible && cls.aperiodic == Tristate::yes;
  cls.evidence = evidence.str();
  return cls;
}

}  // namespace qmc
