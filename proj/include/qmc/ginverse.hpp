#pragma once

#include <optional>
#include <utility>

#include "qmc/model.hpp"

namespace qmc {

enum class GInverseVariant { perturbation, family_a, family_b, family_c, fundamental };

// One member of the g-inverse families of I - T. The admissibility conditions
// <e_I|t> != 0 and <u|pi> != 0 are enforced where the variant needs them.
struct GInverseForm {
  GInverseVariant variant = GInverseVariant::perturbation;
  ComplexVector t;
  ComplexVector u;
  std::optional<ComplexMatrix> H;  // family_a
  std::optional<ComplexMatrix> F;  // family_b
  std::optional<ComplexMatrix> G;  // family_b
  std::optional<ComplexVector> f;  // family_c
  std::optional<ComplexVector> g;  // family_c
};

// (I - T + |t><u|)^-1.
ComplexMatrix perturbation_inverse(const BlockSuperoperator& T,
                                   const ComplexVector& t,
                                   const ComplexVector& u);

// Assembles the family member selected by the form. pi_vec is the stationary
// vector (normalized <e_I|pi> = 1), needed by every parametric family.
ComplexMatrix ginverse_from_form(const BlockSuperoperator& T,
                                 const ComplexVector& pi_vec,
                                 const GInverseForm& form);

// Z = (I - T + Omega)^-1.
ComplexMatrix fundamental_matrix(const BlockSuperoperator& T,
                                 const ComplexMatrix& Omega);

// residual = ||A X A - A||_inf / max(1, ||A||_inf); true iff <= tolerance.
std::pair<bool, double> is_ginverse(const ComplexMatrix& A, const ComplexMatrix& X,
                                    double tolerance = tol::ginverse);

}  // namespace qmc
