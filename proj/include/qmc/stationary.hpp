#pragma once

#include <string>

#include "qmc/model.hpp"

namespace qmc {

struct StationaryResult {
  QmcDensity pi;
  ComplexVector pi_vec;  // normalized so <e_I|pi> = 1
  double residual = 0.0; // ||T|pi> - |pi>||
  bool faithful = false; // every block strictly positive
  double min_block_eigenvalue = 0.0;
};

enum class Tristate { no, yes, unknown };

struct Classification {
  bool irreducible = false;
  Tristate aperiodic = Tristate::unknown;
  bool ergodic = false;  // irreducible AND aperiodic == yes
  std::string evidence;
};

// |pi> = (I - T + |t><u|)^-1 |t>, normalized by <e_I|.>. Requires <e_I|t> != 0.
StationaryResult fixed_point(const BlockSuperoperator& T, const ComplexVector& t,
                             const ComplexVector& u);

// Default probe (t,u) = (e_1,e_1); on singularity retries with up to 8 seeded
// random complex pairs before giving up.
StationaryResult fixed_point(const BlockSuperoperator& T);

// A = I - G(I - T); |pi> = A|v> / <e_I|A|v>. G must be a g-inverse of I - T.
StationaryResult fixed_point_via_ginverse(const BlockSuperoperator& T,
                                          const ComplexMatrix& G,
                                          const ComplexVector& v);

// Rank-1 limit |pi><e_I|.
ComplexMatrix limit_operator(const ComplexVector& pi_vec, int n, int k);

// Irreducible: kernel of I - T is one-dimensional and the fixed density is
// faithful. Aperiodic: the doubling iterates T^(2^m) converge to the limit
// operator below 1e-8 within m <= 60.
Classification classify(const BlockSuperoperator& T);

}  // namespace qmc
