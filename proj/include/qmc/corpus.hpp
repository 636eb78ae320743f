#pragma once

// Built-in example chains and their golden-value table. The builders mirror
// the JSON fixtures under fixtures/v1 exactly; tests use whichever is closer
// to hand and the CLI `reproduce-paper` command runs the full table.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmc/model.hpp"

namespace qmc::corpus {

// Two vertices, k = 2, one conjugation per edge, parameter a in (0, 1):
// B = [[a, b], [0, 0]], C = [[0, 0], [-b, a]] with b = sqrt(1 - a^2);
// maps: (0<-0) B, (0<-1) C, (1<-0) C, (1<-1) B.
QmcModel ex1(double a);

// Two vertices, k = 2, parameter p in (0, 1): a depolarizing-style column at
// vertex 0 (Kraus sqrt(1-3p/4) I and (sqrt(p)/2) sigma_x|y|z split across the
// two rows) and triangular L/R hops from vertex 1.
QmcModel ex2(double p);

// Three-vertex cyclic chains, k = 2, one conjugation per edge.
QmcModel ex3a();
QmcModel ex3b();
QmcModel ex3c();

// k = 1 chain from a column-stochastic matrix P (P[i][j] = prob j -> i).
QmcModel classical(const std::vector<std::vector<double>>& P);
QmcModel classical_two_state(double q, double r);  // P = [[1-q, r], [q, 1-r]]

// Column-stochastic matrix with entries uniform on [0.05, 1) before column
// normalization; deterministic in the seed.
std::vector<std::vector<double>> random_stochastic(int n, uint64_t seed);

// Random ergodic chain: one Gaussian Kraus operator per edge, columns made
// trace preserving by the S^{-1/2} normalization of each column sum.
QmcModel random_ergodic(int n, int k, uint64_t seed);

struct GoldenCase {
  std::string fixture;   // e.g. "ex2 p=1/2"
  std::string quantity;  // e.g. "Tr(khat_21 rho)"
  std::string density;   // density label or "-"
  long long num = 0;     // exact expected value num/den
  long long den = 1;
  double tol = 1e-8;
  std::string note;                // derivation note
  std::function<double()> compute; // recomputes the quantity from scratch

  double expected() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Golden checks for the three example families plus classical controls.
std::vector<GoldenCase> golden_table();

}  // namespace qmc::corpus
