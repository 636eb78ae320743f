#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmc/hitting.hpp"
#include "qmc/model.hpp"

namespace qmc {

struct FormulaReport {
  std::string method;
  std::vector<double> values;
  double max_disagreement_vs_direct = 0.0;
  bool ok = false;
  std::string detail;
};

// Block grid E with every k^2 x k^2 block equal to the identity (the k = 1
// special case is the classical all-ones matrix).
ComplexMatrix identity_block_grid(int n, int k);

// M = D(Omega G - (Omega G)_d E + I - G + G_d E) for any g-inverse G, where
// X_d extracts the block diagonal.
ComplexMatrix hunter_matrix(const BlockSuperoperator& T, const ComplexMatrix& Omega,
                            const ComplexMatrix& D, const ComplexMatrix& G);

double hunter_general(const BlockSuperoperator& T, const ComplexMatrix& Omega,
                      const ComplexMatrix& D, const ComplexMatrix& G,
                      const ComplexMatrix& rho_j, int j, int i);

// Special form for g-inverses G = (I - T + |u><e_I|)^-1 + |f><e_I|:
// M = D(I - G + G_d E); the f freedom cancels.
ComplexMatrix hunter_special_matrix(const BlockSuperoperator& T,
                                    const ComplexMatrix& D,
                                    const ComplexMatrix& G_special);

double hunter_special(const BlockSuperoperator& T, const ComplexMatrix& D,
                      const ComplexMatrix& G_special, const ComplexMatrix& rho_j,
                      int j, int i);

// Builds (I - T + |u><e_I|)^-1 + |f><e_I| for hunter_special.
ComplexMatrix make_special_ginverse(const BlockSuperoperator& T,
                                    const ComplexVector& u,
                                    const ComplexVector& f);

// First mean hitting time formula: tau = Tr(r_i (Z_ii - Z_ij) rho).
double mhtf1(const ComplexMatrix& Z, const HittingOperators& ops,
             const ComplexMatrix& rho_j, int j, int i);

struct RandomTargetResult {
  bool applicable = false;
  std::optional<double> c;   // common return-row scalar when applicable
  double c_deviation = 0.0;  // worst row-proportionality defect across i
  double t_target = 0.0;     // sum_i Tr(Z_ii rho) - 1
  double t_direct = 0.0;     // sum_{i != j} Tr(r_i^-1 k_ij rho) for the given j
};

// Random target lemma. Applicability is the operator condition
// <e_{I,1}| r_i = c <e_{I,1}| with one scalar c for every i (tolerance 1e-9).
// Callers restricting rho to a family where the identity holds anyway (e.g.
// diagonal densities) may use t_target/t_direct with applicable == false.
RandomTargetResult random_target(const ComplexMatrix& Z,
                                 const HittingOperators& ops,
                                 const ComplexMatrix& rho, int j);

struct Mhtf2Result {
  std::vector<double> lhs;  // Tr(K_j pi)
  std::vector<double> rhs;  // Tr((D Z)_jj F_j pi)
  double max_residual = 0.0;
  bool ok = false;
};

// Second mean hitting time formula, both sides per start vertex j.
Mhtf2Result mhtf2(const ComplexMatrix& Z, const HittingOperators& ops,
                  const QmcDensity& pi, double tolerance = tol::formula);

// k = 1 reduction: all routes against the classical mean-hitting-time formula
// E_i(T_j) = (Z_jj - Z_ij)/pi_j and a first-step linear solve. P is column
// stochastic.
FormulaReport classical_check(const ComplexMatrix& P,
                              double tolerance = 1e-9);

}  // namespace qmc
