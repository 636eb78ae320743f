#include "qmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmc {

QmcModel::QmcModel(int n_, int k_, std::string name_)
    : n(n_), k(k_), name(std::move(name_)) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("model needs n >= 1 vertices and k >= 1");
  maps.assign(static_cast<size_t>(n), std::vector<KrausList>(static_cast<size_t>(n)));
}

QmcDensity::QmcDensity(int n_, int k_) : n(n_), k(k_) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("density needs n >= 1 vertices and k >= 1");
  blocks.assign(static_cast<size_t>(n), ComplexMatrix(k, k));
}

QmcDensity QmcDensity::point(int n, int k, int j, const ComplexMatrix& rho) {
  if (j < 0 || j >= n) throw std::invalid_argument("vertex index out of range");
  if (rho.rows() != k || rho.cols() != k)
    throw std::invalid_argument("internal state must be k x k");
  QmcDensity d(n, k);
  d.blocks[static_cast<size_t>(j)] = rho;
  return d;
}

QmcDensity QmcDensity::uniform(int n, int k) {
  QmcDensity d(n, k);
  for (int i = 0; i < n; ++i)
    d.blocks[static_cast<size_t>(i)] = (1.0 / (n * k)) * ComplexMatrix::identity(k);
  return d;
}

ComplexVector QmcDensity::vec_form() const {
  ComplexVector v(n * k * k);
  for (int i = 0; i < n; ++i) {
    const ComplexVector b = vec(blocks[static_cast<size_t>(i)]);
    for (int a = 0; a < k * k; ++a) v[i * k * k + a] = b[a];
  }
  return v;
}

QmcDensity QmcDensity::from_vec(const ComplexVector& v, int n, int k) {
  if (v.dim() != n * k * k)
    throw std::invalid_argument("vector length does not match n*k*k");
  QmcDensity d(n, k);
  for (int i = 0; i < n; ++i) {
    ComplexVector b(k * k);
    for (int a = 0; a < k * k; ++a) b[a] = v[i * k * k + a];
    d.blocks[static_cast<size_t>(i)] = unvec(b, k);
  }
  return d;
}

DensityCheck check_density(const QmcDensity& rho) {
  DensityCheck c;
  c.min_eigenvalue = std::numeric_limits<double>::infinity();
  double trace = 0.0;
  for (const ComplexMatrix& b : rho.blocks) {
    c.hermiticity = std::max(c.hermiticity, max_abs_diff(b, b.adjoint()));
    const auto eigs = hermitian_eigenvalues_small(hermitize(b));
    if (!eigs.empty()) c.min_eigenvalue = std::min(c.min_eigenvalue, eigs.front());
    for (int a = 0; a < b.rows(); ++a) trace += b(a, a).real();
  }
  c.trace_deviation = std::abs(trace - 1.0);
  c.ok = c.hermiticity <= 1e-10 && c.min_eigenvalue >= -1e-10 &&
         c.trace_deviation <= 1e-10;
  return c;
}

ValidationReport validate(const QmcModel& model, double tolerance) {
  ValidationReport report;
  report.tolerance = tolerance;
  const ComplexMatrix I = ComplexMatrix::identity(model.k);
  for (int j = 0; j < model.n; ++j) {
    ComplexMatrix sum(model.k, model.k);
    for (int i = 0; i < model.n; ++i)
      for (const ComplexMatrix& V : model.kraus(i, j)) {
        if (V.rows() != model.k || V.cols() != model.k)
          throw std::invalid_argument("Kraus operator is not k x k");
        sum = sum + V.adjoint() * V;
      }
    report.column_residuals.push_back((sum - I).frobenius_norm());
  }
  report.max_residual = *std::max_element(report.column_residuals.begin(),
                                          report.column_residuals.end());
  report.ok = report.max_residual <= tolerance;
  return report;
}

BlockSuperoperator block_matrix(const QmcModel& model) {
  BlockSuperoperator T;
  T.n = model.n;
  T.k = model.k;
  T.mat = ComplexMatrix(T.order(), T.order());
  for (int i = 0; i < model.n; ++i)
    for (int j = 0; j < model.n; ++j) {
      if (model.kraus(i, j).empty()) continue;  // zero map
      T.set_block(i, j, superop_of_kraus(model.kraus(i, j)));
    }
  return T;
}

QmcDensity apply(const BlockSuperoperator& T, const QmcDensity& rho) {
  if (rho.n != T.n || rho.k != T.k)
    throw std::invalid_argument("density does not match superoperator shape");
  QmcDensity out = QmcDensity::from_vec(T.mat * rho.vec_form(), T.n, T.k);
  for (ComplexMatrix& b : out.blocks) b = hermitize(b);
  return out;
}

std::vector<double> vertex_distribution(const QmcDensity& rho) {
  std::vector<double> p;
  p.reserve(rho.blocks.size());
  for (const ComplexMatrix& b : rho.blocks) {
    double t = 0.0;
    for (int a = 0; a < b.rows(); ++a) t += b(a, a).real();
    p.push_back(t);
  }
  return p;
}

Cx trace_of_action(const ComplexMatrix& op, const ComplexMatrix& gamma) {
  if (!gamma.is_square() || op.rows() != op.cols() ||
      op.rows() != gamma.rows() * gamma.cols())
    throw std::invalid_argument("trace_of_action needs k^2 x k^2 op and k x k gamma");
  const ComplexVector y = op * vec(gamma);
  const int k = gamma.rows();
  Cx t{0.0, 0.0};
  for (int a = 0; a < k; ++a) t += y[a * k + a];
  return t;
}

std::vector<ComplexMatrix> probe_densities(int k) {
  std::vector<ComplexMatrix> out;
  for (int a = 0; a < k; ++a) {
    ComplexMatrix m(k, k);
    m(a, a) = 1.0;
    out.push_back(m);
  }
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      ComplexMatrix plus(k, k);
      plus(a, a) = 0.5;
      plus(a, b) = 0.5;
      plus(b, a) = 0.5;
      plus(b, b) = 0.5;
      out.push_back(plus);
      ComplexMatrix phase(k, k);
      phase(a, a) = 0.5;
      phase(a, b) = Cx{0.0, -0.5};
      phase(b, a) = Cx{0.0, 0.5};
      phase(b, b) = 0.5;
      out.push_back(phase);
    }
  return out;
}

ComplexMatrix hermitize(const ComplexMatrix& A) {
  return 0.5 * (A + A.adjoint());
}

ComplexMatrix maximally_mixed(int k) {
  return (1.0 / k) * ComplexMatrix::identity(k);
}

}  // namespace qmc
