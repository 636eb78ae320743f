#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmc/tolerances.hpp"

namespace qmc {

using Cx = std::complex<double>;

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class SingularMatrixError : public NumericalError {
 public:
  explicit SingularMatrixError(const std::string& what) : NumericalError(what) {}
};

// Dense complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);  // zero-filled
  ComplexMatrix(int rows, int cols, std::vector<Cx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Cx>> rows);

  static ComplexMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Cx& operator()(int r, int c) {
    return e_[static_cast<size_t>(r) * cols_ + c];
  }
  const Cx& operator()(int r, int c) const {
    return e_[static_cast<size_t>(r) * cols_ + c];
  }

  const std::vector<Cx>& entries() const { return e_; }

  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix adjoint() const;

  ComplexMatrix block(int r0, int c0, int h, int w) const;
  void set_block(int r0, int c0, const ComplexMatrix& B);

  double frobenius_norm() const;
  double inf_norm() const;  // max absolute row sum
  double max_abs() const;
  bool all_finite() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Cx> e_;
};

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(int dim);  // zero-filled
  explicit ComplexVector(std::vector<Cx> entries);
  ComplexVector(std::initializer_list<Cx> entries);

  static ComplexVector basis(int dim, int index);

  int dim() const { return static_cast<int>(e_.size()); }
  Cx& operator[](int i) { return e_[static_cast<size_t>(i)]; }
  const Cx& operator[](int i) const { return e_[static_cast<size_t>(i)]; }
  const std::vector<Cx>& entries() const { return e_; }

  double norm() const;
  bool all_finite() const;

 private:
  std::vector<Cx> e_;
};

ComplexMatrix operator+(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix operator-(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix operator*(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix operator*(Cx s, const ComplexMatrix& A);
ComplexMatrix operator*(double s, const ComplexMatrix& A);
ComplexMatrix operator-(const ComplexMatrix& A);
ComplexVector operator*(const ComplexMatrix& A, const ComplexVector& v);
ComplexVector operator+(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator*(Cx s, const ComplexVector& a);
ComplexVector operator*(double s, const ComplexVector& a);

// <bra|ket>; conjugates the first argument.
Cx inner(const ComplexVector& bra, const ComplexVector& ket);
// |ket><bra|; conjugates the second argument.
ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra);

double max_abs_diff(const ComplexMatrix& A, const ComplexMatrix& B);
double max_abs_diff(const ComplexVector& a, const ComplexVector& b);

// Row-major stacking: vec([[a,b],[c,d]]) = [a,b,c,d]. With this convention
// vec(A X B^T) = (A (x) B) vec(X) and a Kraus map X -> V X V^dagger has the
// matrix V (x) conj(V).
ComplexVector vec(const ComplexMatrix& A);
ComplexMatrix unvec(const ComplexVector& v, int k);
ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix superop_of_kraus(const std::vector<ComplexMatrix>& kraus);
ComplexVector vec_identity(int k);       // vec(I_k)
ComplexVector e_identity(int n, int k);  // n stacked copies of vec(I_k)

// LU with partial pivoting. A pivot below pivot_rel * ||A||_inf marks the
// factorization singular-to-tolerance; solves then refuse to run.
class LuDecomposition {
 public:
  explicit LuDecomposition(const ComplexMatrix& A,
                           double pivot_rel = tol::pivot_rel);

  bool singular() const { return singular_; }
  Cx determinant() const;
  double min_pivot() const { return min_pivot_; }
  double max_pivot() const { return max_pivot_; }

  ComplexVector solve(const ComplexVector& b) const;
  ComplexMatrix solve(const ComplexMatrix& B) const;
  ComplexMatrix inverse() const;

 private:
  ComplexMatrix lu_;
  std::vector<int> perm_;
  int sign_ = 1;
  bool singular_ = false;
  double min_pivot_ = 0.0;
  double max_pivot_ = 0.0;
};

// condition_estimate (optional out) receives ||A||_inf * ||A^-1||_inf.
ComplexMatrix invert(const ComplexMatrix& A,
                     double* condition_estimate = nullptr);
ComplexVector solve(const ComplexMatrix& A, const ComplexVector& b);
ComplexMatrix solve(const ComplexMatrix& A, const ComplexMatrix& B);

// adj(A) with A adj(A) = det(A) I. Uses det * A^-1 away from singularity and
// falls back to cofactor expansion (order <= 12) near it, where the inverse
// route loses all precision.
std::pair<Cx, ComplexMatrix> det_and_adjugate(const ComplexMatrix& A);

struct SpectralRadiusInfo {
  double value = 0.0;
  bool converged = false;
  int doublings = 0;
};

// Power iteration seeds the estimate; Gelfand doubling ||A^(2^m)||^(1/2^m)
// refines it. Accuracy target: tol::spectral relative.
SpectralRadiusInfo spectral_radius_info(const ComplexMatrix& A);
double spectral_radius(const ComplexMatrix& A);

// Cyclic Jacobi for Hermitian matrices of order <= 16. Sorted ascending.
std::vector<double> hermitian_eigenvalues_small(const ComplexMatrix& A);

struct HermitianEigensystem {
  ComplexMatrix vectors;       // unitary, columns are eigenvectors
  std::vector<double> values;  // ascending; A = V diag(values) V^dagger
};
HermitianEigensystem hermitian_eigensystem_small(const ComplexMatrix& A);

}  // namespace qmc
