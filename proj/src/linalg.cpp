#include "qmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qmc/rng.hpp"

namespace qmc {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool finite(Cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Cx{0.0, 0.0}) {
  require(rows >= 0 && cols >= 0, "matrix dimensions must be nonnegative");
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<Cx> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
  require(rows >= 0 && cols >= 0, "matrix dimensions must be nonnegative");
  require(e_.size() == static_cast<size_t>(rows) * cols,
          "entry count does not match rows*cols");
  require(all_finite(), "matrix entries must be finite");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Cx>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  e_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    require(static_cast<int>(r.size()) == cols_, "ragged initializer rows");
    e_.insert(e_.end(), r.begin(), r.end());
  }
  require(all_finite(), "matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix T(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) T(c, r) = (*this)(r, c);
  return T;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix C(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) C(r, c) = std::conj((*this)(r, c));
  return C;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix A(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) A(c, r) = std::conj((*this)(r, c));
  return A;
}

ComplexMatrix ComplexMatrix::block(int r0, int c0, int h, int w) const {
  require(r0 >= 0 && c0 >= 0 && h >= 0 && w >= 0 && r0 + h <= rows_ &&
              c0 + w <= cols_,
          "block out of range");
  ComplexMatrix B(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) B(r, c) = (*this)(r0 + r, c0 + c);
  return B;
}

void ComplexMatrix::set_block(int r0, int c0, const ComplexMatrix& B) {
  require(r0 >= 0 && c0 >= 0 && r0 + B.rows() <= rows_ && c0 + B.cols() <= cols_,
          "block out of range");
  for (int r = 0; r < B.rows(); ++r)
    for (int c = 0; c < B.cols(); ++c) (*this)(r0 + r, c0 + c) = B(r, c);
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Cx& z : e_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::inf_norm() const {
  double best = 0.0;
  for (int r = 0; r < rows_; ++r) {
    double row = 0.0;
    for (int c = 0; c < cols_; ++c) row += std::abs((*this)(r, c));
    best = std::max(best, row);
  }
  return best;
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const Cx& z : e_) best = std::max(best, std::abs(z));
  return best;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(e_.begin(), e_.end(), finite);
}

ComplexVector::ComplexVector(int dim) : e_(static_cast<size_t>(dim), Cx{0.0, 0.0}) {
  require(dim >= 0, "vector dimension must be nonnegative");
}

ComplexVector::ComplexVector(std::vector<Cx> entries) : e_(std::move(entries)) {
  require(all_finite(), "vector entries must be finite");
}

ComplexVector::ComplexVector(std::initializer_list<Cx> entries) : e_(entries) {
  require(all_finite(), "vector entries must be finite");
}

ComplexVector ComplexVector::basis(int dim, int index) {
  require(index >= 0 && index < dim, "basis index out of range");
  ComplexVector v(dim);
  v[index] = 1.0;
  return v;
}

double ComplexVector::norm() const {
  double s = 0.0;
  for (const Cx& z : e_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexVector::all_finite() const {
  return std::all_of(e_.begin(), e_.end(), finite);
}

ComplexMatrix operator+(const ComplexMatrix& A, const ComplexMatrix& B) {
  require(A.rows() == B.rows() && A.cols() == B.cols(), "shape mismatch in +");
  ComplexMatrix C(A.rows(), A.cols());
  for (int r = 0; r < A.rows(); ++r)
    for (int c = 0; c < A.cols(); ++c) C(r, c) = A(r, c) + B(r, c);
  return C;
}

ComplexMatrix operator-(const ComplexMatrix& A, const ComplexMatrix& B) {
  require(A.rows() == B.rows() && A.cols() == B.cols(), "shape mismatch in -");
  ComplexMatrix C(A.rows(), A.cols());
  for (int r = 0; r < A.rows(); ++r)
    for (int c = 0; c < A.cols(); ++c) C(r, c) = A(r, c) - B(r, c);
  return C;
}

ComplexMatrix operator*(const ComplexMatrix& A, const ComplexMatrix& B) {
  require(A.cols() == B.rows(), "shape mismatch in *");
  ComplexMatrix C(A.rows(), B.cols());
  for (int r = 0; r < A.rows(); ++r) {
    for (int m = 0; m < A.cols(); ++m) {
      const Cx arm = A(r, m);
      if (arm == Cx{0.0, 0.0}) continue;
      for (int c = 0; c < B.cols(); ++c) C(r, c) += arm * B(m, c);
    }
  }
  return C;
}

ComplexMatrix operator*(Cx s, const ComplexMatrix& A) {
  ComplexMatrix C(A.rows(), A.cols());
  for (int r = 0; r < A.rows(); ++r)
    for (int c = 0; c < A.cols(); ++c) C(r, c) = s * A(r, c);
  return C;
}

ComplexMatrix operator*(double s, const ComplexMatrix& A) {
  return Cx{s, 0.0} * A;
}

ComplexMatrix operator-(const ComplexMatrix& A) { return Cx{-1.0, 0.0} * A; }

ComplexVector operator*(const ComplexMatrix& A, const ComplexVector& v) {
  require(A.cols() == v.dim(), "shape mismatch in matrix-vector product");
  ComplexVector y(A.rows());
  for (int r = 0; r < A.rows(); ++r) {
    Cx s{0.0, 0.0};
    for (int c = 0; c < A.cols(); ++c) s += A(r, c) * v[c];
    y[r] = s;
  }
  return y;
}

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
  require(a.dim() == b.dim(), "shape mismatch in +");
  ComplexVector c(a.dim());
  for (int i = 0; i < a.dim(); ++i) c[i] = a[i] + b[i];
  return c;
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
  require(a.dim() == b.dim(), "shape mismatch in -");
  ComplexVector c(a.dim());
  for (int i = 0; i < a.dim(); ++i) c[i] = a[i] - b[i];
  return c;
}

ComplexVector operator*(Cx s, const ComplexVector& a) {
  ComplexVector c(a.dim());
  for (int i = 0; i < a.dim(); ++i) c[i] = s * a[i];
  return c;
}

ComplexVector operator*(double s, const ComplexVector& a) {
  return Cx{s, 0.0} * a;
}

Cx inner(const ComplexVector& bra, const ComplexVector& ket) {
  require(bra.dim() == ket.dim(), "shape mismatch in inner product");
  Cx s{0.0, 0.0};
  for (int i = 0; i < bra.dim(); ++i) s += std::conj(bra[i]) * ket[i];
  return s;
}

ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra) {
  ComplexMatrix M(ket.dim(), bra.dim());
  for (int r = 0; r < ket.dim(); ++r)
    for (int c = 0; c < bra.dim(); ++c) M(r, c) = ket[r] * std::conj(bra[c]);
  return M;
}

double max_abs_diff(const ComplexMatrix& A, const ComplexMatrix& B) {
  require(A.rows() == B.rows() && A.cols() == B.cols(), "shape mismatch");
  double best = 0.0;
  for (int r = 0; r < A.rows(); ++r)
    for (int c = 0; c < A.cols(); ++c)
      best = std::max(best, std::abs(A(r, c) - B(r, c)));
  return best;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  require(a.dim() == b.dim(), "shape mismatch");
  double best = 0.0;
  for (int i = 0; i < a.dim(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

ComplexVector vec(const ComplexMatrix& A) {
  return ComplexVector(A.entries());
}

ComplexMatrix unvec(const ComplexVector& v, int k) {
  require(v.dim() == k * k, "unvec requires dim == k*k");
  return ComplexMatrix(k, k, v.entries());
}

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
  ComplexMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int ar = 0; ar < A.rows(); ++ar)
    for (int ac = 0; ac < A.cols(); ++ac) {
      const Cx a = A(ar, ac);
      if (a == Cx{0.0, 0.0}) continue;
      for (int br = 0; br < B.rows(); ++br)
        for (int bc = 0; bc < B.cols(); ++bc)
          K(ar * B.rows() + br, ac * B.cols() + bc) = a * B(br, bc);
    }
  return K;
}

ComplexMatrix superop_of_kraus(const std::vector<ComplexMatrix>& kraus) {
  require(!kraus.empty(), "empty Kraus list");
  const int k = kraus.front().rows();
  require(kraus.front().cols() == k, "Kraus operators must be square");
  ComplexMatrix M(k * k, k * k);
  for (const ComplexMatrix& V : kraus) {
    require(V.rows() == k && V.cols() == k, "mixed Kraus dimensions");
    M = M + kron(V, V.conjugate());
  }
  return M;
}

ComplexVector vec_identity(int k) { return vec(ComplexMatrix::identity(k)); }

ComplexVector e_identity(int n, int k) {
  ComplexVector e(n * k * k);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a) e[i * k * k + a * k + a] = 1.0;
  return e;
}

LuDecomposition::LuDecomposition(const ComplexMatrix& A, double pivot_rel)
    : lu_(A), perm_(static_cast<size_t>(A.rows())) {
  require(A.is_square(), "LU requires a square matrix");
  const int n = A.rows();
  std::iota(perm_.begin(), perm_.end(), 0);
  const double floor = pivot_rel * A.inf_norm();
  min_pivot_ = std::numeric_limits<double>::infinity();
  for (int c = 0; c < n; ++c) {
    int best = c;
    double best_abs = std::abs(lu_(c, c));
    for (int r = c + 1; r < n; ++r) {
      const double v = std::abs(lu_(r, c));
      if (v > best_abs) {
        best = r;
        best_abs = v;
      }
    }
    min_pivot_ = std::min(min_pivot_, best_abs);
    max_pivot_ = std::max(max_pivot_, best_abs);
    if (best_abs <= floor) {
      // Singular to tolerance: leave the column uneliminated; solves refuse
      // to run and the determinant reports 0.
      singular_ = true;
      continue;
    }
    if (best != c) {
      for (int j = 0; j < n; ++j) std::swap(lu_(c, j), lu_(best, j));
      std::swap(perm_[c], perm_[best]);
      sign_ = -sign_;
    }
    const Cx piv = lu_(c, c);
    for (int r = c + 1; r < n; ++r) {
      const Cx f = lu_(r, c) / piv;
      lu_(r, c) = f;
      if (f == Cx{0.0, 0.0}) continue;
      for (int j = c + 1; j < n; ++j) lu_(r, j) -= f * lu_(c, j);
    }
  }
  if (n == 0) min_pivot_ = 0.0;
}

Cx LuDecomposition::determinant() const {
  if (singular_) return Cx{0.0, 0.0};
  Cx d{static_cast<double>(sign_), 0.0};
  for (int i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

ComplexVector LuDecomposition::solve(const ComplexVector& b) const {
  if (singular_) throw SingularMatrixError("matrix is singular to tolerance");
  const int n = lu_.rows();
  require(b.dim() == n, "rhs dimension mismatch");
  ComplexVector y(n);
  for (int i = 0; i < n; ++i) {
    Cx s = b[perm_[static_cast<size_t>(i)]];
    for (int j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    Cx s = y[i];
    for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * y[j];
    y[i] = s / lu_(i, i);
  }
  return y;
}

ComplexMatrix LuDecomposition::solve(const ComplexMatrix& B) const {
  const int n = lu_.rows();
  require(B.rows() == n, "rhs dimension mismatch");
  ComplexMatrix X(n, B.cols());
  for (int c = 0; c < B.cols(); ++c) {
    ComplexVector b(n);
    for (int r = 0; r < n; ++r) b[r] = B(r, c);
    const ComplexVector x = solve(b);
    for (int r = 0; r < n; ++r) X(r, c) = x[r];
  }
  return X;
}

ComplexMatrix LuDecomposition::inverse() const {
  return solve(ComplexMatrix::identity(lu_.rows()));
}

ComplexMatrix invert(const ComplexMatrix& A, double* condition_estimate) {
  LuDecomposition lu(A);
  ComplexMatrix X = lu.inverse();
  if (condition_estimate != nullptr)
    *condition_estimate = A.inf_norm() * X.inf_norm();
  return X;
}

ComplexVector solve(const ComplexMatrix& A, const ComplexVector& b) {
  return LuDecomposition(A).solve(b);
}

ComplexMatrix solve(const ComplexMatrix& A, const ComplexMatrix& B) {
  return LuDecomposition(A).solve(B);
}

namespace {

constexpr int kCofactorCap = 12;

Cx minor_det(const ComplexMatrix& A, int skip_row, int skip_col) {
  const int n = A.rows();
  ComplexMatrix M(n - 1, n - 1);
  int rr = 0;
  for (int r = 0; r < n; ++r) {
    if (r == skip_row) continue;
    int cc = 0;
    for (int c = 0; c < n; ++c) {
      if (c == skip_col) continue;
      M(rr, cc) = A(r, c);
      ++cc;
    }
    ++rr;
  }
  return LuDecomposition(M).determinant();
}

ComplexMatrix adjugate_by_cofactors(const ComplexMatrix& A) {
  const int n = A.rows();
  ComplexMatrix adj(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      adj(i, j) = sgn * minor_det(A, j, i);
    }
  return adj;
}

}  // namespace

std::pair<Cx, ComplexMatrix> det_and_adjugate(const ComplexMatrix& A) {
  require(A.is_square(), "adjugate requires a square matrix");
  const int n = A.rows();
  if (n == 0) return {Cx{1.0, 0.0}, ComplexMatrix(0, 0)};
  if (n == 1) return {A(0, 0), ComplexMatrix{{Cx{1.0, 0.0}}}};
  LuDecomposition lu(A);
  // Near singularity det * A^-1 cancels catastrophically; cofactors stay exact.
  const bool near_singular =
      lu.singular() || lu.min_pivot() <= 1e-8 * std::max(lu.max_pivot(), 1.0);
  if (!near_singular) {
    const Cx det = lu.determinant();
    return {det, det * lu.inverse()};
  }
  if (n > kCofactorCap)
    throw NumericalError(
        "adjugate of a near-singular matrix needs cofactor expansion, "
        "supported only up to order 12");
  return {lu.determinant(), adjugate_by_cofactors(A)};
}

SpectralRadiusInfo spectral_radius_info(const ComplexMatrix& A) {
  require(A.is_square(), "spectral radius requires a square matrix");
  const int n = A.rows();
  if (n == 0 || A.max_abs() == 0.0) return {0.0, true, 0};
  if (n == 1) return {std::abs(A(0, 0)), true, 0};

  // Power iteration gives a cheap starting estimate (a lower anchor for
  // generic spectra); three seeded restarts guard against unlucky starts.
  double power_est = 0.0;
  SplitMix64 rng(0x51ab5eed2024ull);
  for (int restart = 0; restart < 3; ++restart) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v[i] = Cx{rng.gaussian(), rng.gaussian()};
    double nv = v.norm();
    if (nv == 0.0) continue;
    v = (1.0 / nv) * v;
    double ratio = 0.0;
    for (int it = 0; it < 100; ++it) {
      ComplexVector w = A * v;
      const double nw = w.norm();
      if (nw == 0.0) {
        ratio = 0.0;
        break;
      }
      ratio = nw;
      v = (1.0 / nw) * w;
    }
    power_est = std::max(power_est, ratio);
  }

  // Gelfand doubling: represent A^(2^m) = exp(e) * M with ||M||_F = 1.
  ComplexMatrix M = A;
  double e = 0.0;
  double est = A.frobenius_norm();
  int stable = 0;
  const int max_doublings = 48;
  int m = 0;
  for (; m < max_doublings; ++m) {
    const double f = M.frobenius_norm();
    if (f == 0.0 || !std::isfinite(f)) {
      est = 0.0;
      break;
    }
    M = (1.0 / f) * M;
    M = M * M;
    e = 2.0 * (e + std::log(f));
    const double next =
        std::exp((e + std::log(std::max(M.frobenius_norm(), 1e-300))) /
                 std::pow(2.0, m + 1));
    const double delta = std::abs(next - est);
    est = next;
    if (delta <= 1e-7 * std::max(est, 1e-300)) {
      if (++stable >= 2) {
        ++m;
        break;
      }
    } else {
      stable = 0;
    }
  }
  const bool converged = stable >= 2 || est == 0.0;
  if (!converged && power_est > est) est = power_est;
  return {est, converged, m};
}

double spectral_radius(const ComplexMatrix& A) {
  return spectral_radius_info(A).value;
}

namespace {

constexpr int kJacobiCap = 16;

HermitianEigensystem jacobi_eigensystem(const ComplexMatrix& input) {
  require(input.is_square(), "eigensystem requires a square matrix");
  const int n = input.rows();
  require(n <= kJacobiCap, "Jacobi eigensolver capped at order 16");
  const double scale = std::max(1.0, input.max_abs());
  require(max_abs_diff(input, input.adjoint()) <= 1e-8 * scale,
          "matrix is not Hermitian to tolerance");

  // Work on the exact Hermitian part so accumulated round-off cannot feed
  // asymmetry back into the sweeps.
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (p != q) s += std::norm(a(p, q));
    return std::sqrt(s);
  };

  const double target = 1e-12 * std::max(1.0, a.frobenius_norm());
  for (int sweep = 0; sweep < 60 && off_norm() > target; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Cx beta = a(p, q);
        const double ab = std::abs(beta);
        if (ab <= 1e-300) continue;
        // Phase e^{i psi} makes the (p,q) entry real; then a standard real
        // Jacobi rotation annihilates it. Combined rotation R:
        //   R[p][p]=c, R[p][q]=s, R[q][p]=-s e^{i psi}, R[q][q]=c e^{i psi},
        // with e^{i psi} = conj(beta)/|beta|.
        const Cx phase = std::conj(beta) / ab;
        const double alpha = a(p, p).real();
        const double gamma = a(q, q).real();
        const double tau = (gamma - alpha) / (2.0 * ab);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Columns: A <- A R.
        for (int r = 0; r < n; ++r) {
          const Cx arp = a(r, p);
          const Cx arq = a(r, q);
          a(r, p) = c * arp - s * phase * arq;
          a(r, q) = s * arp + c * phase * arq;
        }
        // Rows: A <- R^dagger A.
        for (int r = 0; r < n; ++r) {
          const Cx apr = a(p, r);
          const Cx aqr = a(q, r);
          a(p, r) = c * apr - s * std::conj(phase) * aqr;
          a(q, r) = s * apr + c * std::conj(phase) * aqr;
        }
        // Accumulate V <- V R.
        for (int r = 0; r < n; ++r) {
          const Cx vrp = v(r, p);
          const Cx vrq = v(r, q);
          v(r, p) = c * vrp - s * phase * vrq;
          v(r, q) = s * vrp + c * phase * vrq;
        }
        a(p, q) = Cx{0.0, 0.0};
        a(q, p) = Cx{0.0, 0.0};
      }
    }
  }

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigensystem out;
  out.values.resize(static_cast<size_t>(n));
  out.vectors = ComplexMatrix(n, n);
  for (int c = 0; c < n; ++c) {
    const int src = order[static_cast<size_t>(c)];
    out.values[static_cast<size_t>(c)] = a(src, src).real();
    for (int r = 0; r < n; ++r) out.vectors(r, c) = v(r, src);
  }
  return out;
}

}  // namespace

std::vector<double> hermitian_eigenvalues_small(const ComplexMatrix& A) {
  return jacobi_eigensystem(A).values;
}

HermitianEigensystem hermitian_eigensystem_small(const ComplexMatrix& A) {
  return jacobi_eigensystem(A);
}

}  // namespace qmc
