#include "qmc/ginverse.hpp"

#include <cmath>

namespace qmc {

namespace {

Cx checked_denominator(Cx value, const char* what) {
  if (std::abs(value) < tol::admissible)
    throw NumericalError(std::string("inadmissible parameters: ") + what +
                         " vanishes");
  return value;
}

}  // namespace

ComplexMatrix perturbation_inverse(const BlockSuperoperator& T,
                                   const ComplexVector& t,
                                   const ComplexVector& u) {
  const int d = T.order();
  if (t.dim() != d || u.dim() != d)
    throw std::invalid_argument("probe vectors must have dimension n*k*k");
  checked_denominator(inner(e_identity(T.n, T.k), t), "<e_I|t>");
  const ComplexMatrix A = ComplexMatrix::identity(d) - T.mat + outer(t, u);
  try {
    return invert(A);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError(
        "I - T + |t><u| is singular: <u|pi> = 0 or reducible chain");
  }
}

ComplexMatrix ginverse_from_form(const BlockSuperoperator& T,
                                 const ComplexVector& pi_vec,
                                 const GInverseForm& form) {
  const int d = T.order();
  const ComplexVector eI = e_identity(T.n, T.k);

  if (form.variant == GInverseVariant::fundamental) {
    return fundamental_matrix(T, outer(pi_vec, eI));
  }

  const ComplexMatrix P = perturbation_inverse(T, form.t, form.u);
  switch (form.variant) {
    case GInverseVariant::perturbation:
      return P;
    case GInverseVariant::family_a: {
      const ComplexMatrix H = form.H.value_or(ComplexMatrix(d, d));
      if (H.rows() != d || H.cols() != d)
        throw std::invalid_argument("H must be n*k*k square");
      const Cx eIt = checked_denominator(inner(eI, form.t), "<e_I|t>");
      const Cx upi = checked_denominator(inner(form.u, pi_vec), "<u|pi>");
      const ComplexMatrix t_eI = outer(form.t, eI);
      const ComplexMatrix pi_u = outer(pi_vec, form.u);
      return P + (Cx{1.0, 0.0} / eIt) * (H * t_eI) +
             (Cx{1.0, 0.0} / upi) * (pi_u * H) -
             (Cx{1.0, 0.0} / (upi * eIt)) * (pi_u * H * t_eI);
    }
    case GInverseVariant::family_b: {
      const ComplexMatrix F = form.F.value_or(ComplexMatrix(d, d));
      const ComplexMatrix G = form.G.value_or(ComplexMatrix(d, d));
      if (F.rows() != d || F.cols() != d || G.rows() != d || G.cols() != d)
        throw std::invalid_argument("F and G must be n*k*k square");
      const Cx eIt = checked_denominator(inner(eI, form.t), "<e_I|t>");
      const Cx upi = checked_denominator(inner(form.u, pi_vec), "<u|pi>");
      return P + (Cx{1.0, 0.0} / upi) * (outer(pi_vec, form.u) * F) +
             (Cx{1.0, 0.0} / eIt) * (G * outer(form.t, eI));
    }
    case GInverseVariant::family_c: {
      const ComplexVector f = form.f.value_or(ComplexVector(d));
      const ComplexVector g = form.g.value_or(ComplexVector(d));
      if (f.dim() != d || g.dim() != d)
        throw std::invalid_argument("f and g must have dimension n*k*k");
      return P + outer(pi_vec, f) + outer(g, eI);
    }
    default:
      throw std::invalid_argument("unknown g-inverse variant");
  }
}

ComplexMatrix fundamental_matrix(const BlockSuperoperator& T,
                                 const ComplexMatrix& Omega) {
  const int d = T.order();
  if (Omega.rows() != d || Omega.cols() != d)
    throw std::invalid_argument("Omega must be n*k*k square");
  try {
    return invert(ComplexMatrix::identity(d) - T.mat + Omega);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError(
        "I - T + Omega is singular: chain is not ergodic");
  }
}

std::pair<bool, double> is_ginverse(const ComplexMatrix& A, const ComplexMatrix& X,
                                    double tolerance) {
  if (A.rows() != X.rows() || A.cols() != X.cols() || !A.is_square())
    throw std::invalid_argument("shape mismatch in is_ginverse");
  const double residual =
      (A * X * A - A).inf_norm() / std::max(1.0, A.inf_norm());
  return {residual <= tolerance, residual};
}

}  // namespace qmc
