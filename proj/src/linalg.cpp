#include "schurdil/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "schurdil/errors.hpp"

namespace schurdil {

namespace {

Eigen::Index checked_product(Eigen::Index a, Eigen::Index b) {
  if (a != 0 && b > std::numeric_limits<Eigen::Index>::max() / a) {
    throw DimensionError("dimension product overflows the index type");
  }
  return a * b;
}

}  // namespace

void require_finite(const CMatrix& a, const char* what) {
  if (!a.allFinite()) {
    throw ValidationError(std::string(what) + ": matrix contains NaN or Inf entries");
  }
}

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + ": expected a square matrix, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index rows = checked_product(a.rows(), b.rows());
  const Eigen::Index cols = checked_product(a.cols(), b.cols());
  // Guard the total element count as well.
  (void)checked_product(rows, cols);
  CMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix dagger(const CMatrix& a) { return a.adjoint(); }

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw ValidationError("matrix_unit: index out of range");
  }
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

double unitarity_residual(const CMatrix& a) {
  require_square(a, "is_unitary");
  const CMatrix id = CMatrix::Identity(a.rows(), a.cols());
  const double left = (a.adjoint() * a - id).norm();
  const double right = (a * a.adjoint() - id).norm();
  return std::max(left, right);
}

bool is_unitary(const CMatrix& a, double tol) {
  const double r = unitarity_residual(a);
  return std::isfinite(r) && r <= tol;
}

double hermitian_residual(const CMatrix& a) {
  require_square(a, "hermitian_residual");
  return (a - a.adjoint()).norm();
}

RVector hermitian_eigenvalues(const CMatrix& a) {
  require_square(a, "hermitian_eigenvalues");
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool psd_check(const CMatrix& a, double tol) {
  require_square(a, "psd_check");
  const double herm = hermitian_residual(a);
  if (!(herm <= tol)) {
    throw ValidationError("psd_check: matrix is not Hermitian (||a - a*||_F = " +
                          std::to_string(herm) + ")");
  }
  if (a.size() == 0) return true;
  return hermitian_eigenvalues(a).minCoeff() >= -tol;
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("frobenius_distance: shape mismatch");
  }
  return (a - b).norm();
}

Eigen::Index checked_power(Eigen::Index base, int exp) {
  if (exp < 0) throw ValidationError("checked_power: negative exponent");
  Eigen::Index out = 1;
  for (int i = 0; i < exp; ++i) out = checked_product(out, base);
  return out;
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace schurdil
