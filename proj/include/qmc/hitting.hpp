#pragma once

#include <utility>
#include <vector>

#include "qmc/model.hpp"

namespace qmc {

struct MonitorProjectors {
  ComplexMatrix P;  // identity on block (i,i), zero elsewhere
  ComplexMatrix Q;  // I - P
};

// H[i][j] is the hitting-probability operator for target i from start j, with
// the identity on the diagonal. K[i][j] is the mean-hitting-time operator; its
// diagonal stores the mean-return operators r_i (also exposed as R and, in
// block-diagonal form, D). All blocks are k^2 x k^2.
struct HittingOperators {
  int n = 0;
  int k = 0;
  std::vector<std::vector<ComplexMatrix>> H;
  std::vector<std::vector<ComplexMatrix>> K;
  std::vector<ComplexMatrix> R;

  ComplexMatrix Hmat() const;  // diagonal blocks = identity
  ComplexMatrix Kmat() const;  // diagonal blocks = r_i
  ComplexMatrix Dmat() const;  // block diagonal of r_i
};

MonitorProjectors monitor_projectors(int n, int k, int i);

// Block (i,j) of P_i T (I - x Q_i T)^-1 P_j for x in [0,1]. At x = 1 the
// monitored operator Q_i T must be strictly contractive.
ComplexMatrix generating_function(const BlockSuperoperator& T, int i, int j,
                                  double x);

// Truncated series sum_{m=1..terms} P_i T (Q_i T)^(m-1) P_j x^(m-1), block (i,j).
ComplexMatrix generating_function_series(const BlockSuperoperator& T, int i,
                                         int j, double x, int terms);

// Derivative d/dx [x G_ij(x)] = G_ij(x) + x * block of P T W Q T W with
// W = (I - x Q T)^-1.
ComplexMatrix generating_function_derivative(const BlockSuperoperator& T, int i,
                                             int j, double x);

// Evaluates every G_ij(1) and derivative at x = 1 after checking the
// monitored spectral radii; requires an ergodic chain.
HittingOperators hitting_operators(const BlockSuperoperator& T);

struct TauResult {
  double pi_hit = 0.0;
  double tau = 0.0;
  bool finite = true;
};

// pi_hit = Tr(h_ij rho); tau = Tr(k_ij rho) when pi_hit >= 1 - tol_hit, else
// infinite. For i = j this is the mean return time via r_i.
TauResult tau_and_pi(const HittingOperators& ops, const ComplexMatrix& rho_j,
                     int j, int i, double tol_hit = tol::hit);

// Assembles L = K - (K - D) T and returns the maximum of
// |Tr(L_ij rho) - 1| over all blocks and all probe densities.
double first_step_residual(const BlockSuperoperator& T,
                           const HittingOperators& ops);

}  // namespace qmc
