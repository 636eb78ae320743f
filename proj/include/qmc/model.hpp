#pragma once

#include <string>
#include <vector>

#include "qmc/linalg.hpp"
#include "qmc/tolerances.hpp"

namespace qmc {

using KrausList = std::vector<ComplexMatrix>;

// Quantum Markov chain on n vertices with internal dimension k. maps[i][j]
// holds the Kraus operators of the CP map for the transition FROM vertex j
// TO vertex i (indices read right-to-left). An empty list is the zero map.
struct QmcModel {
  int n = 0;
  int k = 0;
  std::string name;
  std::vector<std::vector<KrausList>> maps;

  QmcModel() = default;
  QmcModel(int n_, int k_, std::string name_ = "");

  const KrausList& kraus(int i, int j) const {
    return maps[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  KrausList& kraus(int i, int j) {
    return maps[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
};

struct ValidationReport {
  bool ok = false;
  double tolerance = tol::model;
  // Frobenius norm of sum_i sum_l V^dagger V - I_k, one entry per column j.
  std::vector<double> column_residuals;
  double max_residual = 0.0;
};

// n positive k x k blocks with total trace 1.
struct QmcDensity {
  int n = 0;
  int k = 0;
  std::vector<ComplexMatrix> blocks;

  QmcDensity() = default;
  QmcDensity(int n_, int k_);

  // All mass on vertex j with internal state rho (trace-1 k x k density).
  static QmcDensity point(int n, int k, int j, const ComplexMatrix& rho);
  // Uniform over vertices, maximally mixed internally: blocks I_k/(n k).
  static QmcDensity uniform(int n, int k);

  ComplexVector vec_form() const;  // stacked vec(blocks)
  static QmcDensity from_vec(const ComplexVector& v, int n, int k);
};

struct DensityCheck {
  bool ok = false;
  double hermiticity = 0.0;   // max ||rho_i - rho_i^dagger||
  double min_eigenvalue = 0.0;
  double trace_deviation = 0.0;  // |sum Tr rho_i - 1|
};
DensityCheck check_density(const QmcDensity& rho);

// The nk^2 x nk^2 block matrix T with block (i,j) = superop_of_kraus(maps[i][j]).
struct BlockSuperoperator {
  int n = 0;
  int k = 0;
  ComplexMatrix mat;

  int order() const { return n * k * k; }
  ComplexMatrix block(int i, int j) const {
    return mat.block(i * k * k, j * k * k, k * k, k * k);
  }
  void set_block(int i, int j, const ComplexMatrix& B) {
    mat.set_block(i * k * k, j * k * k, B);
  }
};

ValidationReport validate(const QmcModel& model, double tolerance = tol::model);

BlockSuperoperator block_matrix(const QmcModel& model);

// One iteration: blocks of the result are unvec slices of T|rho>, re-Hermitized.
QmcDensity apply(const BlockSuperoperator& T, const QmcDensity& rho);

// Entry i = Tr(rho_i).
std::vector<double> vertex_distribution(const QmcDensity& rho);

// Tr(unvec(op vec(gamma), k)) for a k^2 x k^2 operator block.
Cx trace_of_action(const ComplexMatrix& op, const ComplexMatrix& gamma);

// Hermitian probe basis of k x k densities: |a><a|, then for a < b the states
// (|a>+|b>)/sqrt(2) and (|a>+i|b>)/sqrt(2). A linear trace identity verified
// on all of them holds for every density.
std::vector<ComplexMatrix> probe_densities(int k);

// (A + A^dagger)/2.
ComplexMatrix hermitize(const ComplexMatrix& A);

// I_k / k.
ComplexMatrix maximally_mixed(int k);

}  // namespace qmc
