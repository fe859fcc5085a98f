#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace schurdil {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kDefaultPsdTol = 1e-10;

/// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const CMatrix& a, const char* what);

/// Throws ValidationError unless `a` is square.
void require_square(const CMatrix& a, const char* what);

/// Kronecker product with block structure a(i,j) * b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Conjugate transpose.
CMatrix dagger(const CMatrix& a);

CMatrix identity(Eigen::Index n);

/// Matrix unit E_ij of size n x n, (E_ij)_{st} = delta_is delta_jt.
CMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

/// max(||a*a - I||_F, ||aa* - I||_F).
double unitarity_residual(const CMatrix& a);

/// True iff both ||a*a - I||_F and ||aa* - I||_F are at most tol.
bool is_unitary(const CMatrix& a, double tol);

/// ||a - a*||_F.
double hermitian_residual(const CMatrix& a);

/// Eigenvalues (ascending) of the Hermitian part (a + a*)/2.
RVector hermitian_eigenvalues(const CMatrix& a);

/// True iff the smallest eigenvalue of (a + a*)/2 is >= -tol. Requires
/// ||a - a*||_F <= tol, otherwise throws ValidationError.
bool psd_check(const CMatrix& a, double tol = kDefaultPsdTol);

/// Frobenius distance ||a - b||_F (shapes must agree).
double frobenius_distance(const CMatrix& a, const CMatrix& b);

/// base^exp, throwing DimensionError on overflow of the index type.
Eigen::Index checked_power(Eigen::Index base, int exp);

/// Spectral norm (largest singular value).
double operator_norm(const CMatrix& a);

}  // namespace schurdil
