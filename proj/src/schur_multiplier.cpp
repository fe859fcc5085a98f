#include "schurdil/schur_multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "schurdil/errors.hpp"
#include "schurdil/random.hpp"

namespace schurdil {

SchurMultiplier::SchurMultiplier(CMatrix table)
    : table_(std::move(table)), cache_(std::make_shared<FlagCache>()) {
  require_square(table_, "SchurMultiplier");
  if (table_.rows() == 0) throw ValidationError("SchurMultiplier: empty table");
  require_finite(table_, "SchurMultiplier");
}

const MultiplierFlags& SchurMultiplier::flags() const {
  std::call_once(cache_->once, [this] {
    const double tol = kDefaultPsdTol;
    MultiplierFlags f;
    f.unital_diag = true;
    for (Eigen::Index i = 0; i < table_.rows(); ++i) {
      if (std::abs(table_(i, i) - 1.0) > tol) f.unital_diag = false;
    }
    f.psd = hermitian_residual(table_) <= tol && hermitian_eigenvalues(table_).minCoeff() >= -tol;
    f.real = table_.imag().norm() <= tol;
    cache_->flags = f;
  });
  return cache_->flags;
}

CMatrix rank1(const CVector& u, const CVector& v) {
  if (u.size() != v.size()) throw ValidationError("rank1: length mismatch");
  return v * u.transpose();
}

CMatrix schur_apply(const SchurMultiplier& phi, const CMatrix& a) {
  if (a.rows() != phi.n() || a.cols() != phi.n()) {
    throw ValidationError("schur_apply: expected a " + std::to_string(phi.n()) + "x" +
                          std::to_string(phi.n()) + " matrix");
  }
  return phi.table().cwiseProduct(a);
}

SchurMultiplier schur_power(const SchurMultiplier& phi, int k) {
  if (k < 0) throw ValidationError("schur_power: negative exponent");
  CMatrix out = CMatrix::Ones(phi.n(), phi.n());
  for (int i = 0; i < k; ++i) out = out.cwiseProduct(phi.table());
  return SchurMultiplier(std::move(out));
}

Complex pairing(const SchurMultiplier& phi, const CVector& u, const CVector& v, const CVector& a,
                const CVector& b) {
  const Eigen::Index n = phi.n();
  if (u.size() != n || v.size() != n || a.size() != n || b.size() != n) {
    throw ValidationError("pairing: vectors must have length " + std::to_string(n));
  }
  Complex acc = 0.0;
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index t = 0; t < n; ++t) acc += phi.table()(s, t) * u(t) * v(s) * a(s) * b(t);
  }
  return acc;
}

CpCheckResult cp_check(const SchurMultiplier& phi, double tol) {
  CpCheckResult out;
  const CMatrix& m = phi.table();
  out.hermitian_residual = hermitian_residual(m);
  if (!(out.hermitian_residual <= tol)) {
    out.diagnostic = "table is not Hermitian: ||m - m*||_F = " +
                     std::to_string(out.hermitian_residual);
    out.min_eigenvalue = hermitian_eigenvalues(m).minCoeff();
    return out;
  }
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector& evals = es.eigenvalues();
  out.min_eigenvalue = evals.minCoeff();
  if (out.min_eigenvalue < -tol) {
    out.diagnostic = "table is not positive semidefinite: min eigenvalue " +
                     std::to_string(out.min_eigenvalue);
    return out;
  }
  out.positive = true;
  // m = Q diag(l) Q^*, alpha = diag(sqrt(l)) Q^* keeps the numerically
  // nonzero l, so the witness has the numerical rank of m.
  const double cutoff = tol * std::max(1.0, evals.maxCoeff());
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = evals.size() - 1; i >= 0; --i) {
    if (evals(i) > cutoff) kept.push_back(i);
  }
  out.witness = CMatrix::Zero(static_cast<Eigen::Index>(kept.size()), m.cols());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const Eigen::Index i = kept[r];
    out.witness.row(static_cast<Eigen::Index>(r)) =
        std::sqrt(evals(i)) * es.eigenvectors().col(i).adjoint();
  }
  return out;
}

namespace {

double max_column_norm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return a.colwise().norm().maxCoeff();
}

CMatrix stack_rows(const CMatrix& top, const CMatrix& bottom) {
  CMatrix out(top.rows() + bottom.rows(), top.cols());
  if (top.rows() > 0) out.topRows(top.rows()) = top;
  if (bottom.rows() > 0) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace

GramFactorization certify_factorization(const CMatrix& m, const CMatrix& alpha,
                                        const CMatrix& beta) {
  const Eigen::Index n = m.rows();
  if (alpha.cols() != n || beta.cols() != n || alpha.rows() != beta.rows()) {
    throw ValidationError("certify_factorization: shape mismatch");
  }
  CMatrix a = alpha;
  CMatrix b = beta;
  const double an = max_column_norm(a);
  const double bn = max_column_norm(b);
  if (an > 0.0 && bn > 0.0) {
    a *= std::sqrt(bn / an);
    b *= std::sqrt(an / bn);
  }
  const CMatrix delta = m - b.adjoint() * a;
  const double col = max_column_norm(delta);
  const double row = max_column_norm(delta.transpose());
  if (col > 0.0 || row > 0.0) {
    CMatrix ca;
    CMatrix cb;
    if (col <= row) {
      // delta(s,t) = e_s^* delta(:,t)
      ca = delta / std::sqrt(col);
      cb = std::sqrt(col) * CMatrix::Identity(n, n);
    } else {
      // delta(s,t) = conj(delta(s,:))^* e_t
      ca = std::sqrt(row) * CMatrix::Identity(n, n);
      cb = delta.adjoint() / std::sqrt(row);
    }
    a = stack_rows(a, ca);
    b = stack_rows(b, cb);
  }
  GramFactorization out;
  out.bound = max_column_norm(a) * max_column_norm(b);
  out.alpha = std::move(a);
  out.beta = std::move(b);
  return out;
}

namespace {

CMatrix project_psd(const CMatrix& z) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (z + z.adjoint()));
  const RVector clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

// Hermitian matrices with off-diagonal block m and real diagonal <= level.
CMatrix project_constraints(const CMatrix& z, const CMatrix& m, double level) {
  const Eigen::Index n = m.rows();
  CMatrix out = 0.5 * (z + z.adjoint());
  out.topRightCorner(n, n) = m;
  out.bottomLeftCorner(n, n) = m.adjoint();
  for (Eigen::Index i = 0; i < 2 * n; ++i) out(i, i) = std::min(out(i, i).real(), level);
  return out;
}

}  // namespace

CompletionResult psd_completion(const CMatrix& m, double level, int max_iters, double tol) {
  require_square(m, "psd_completion");
  const Eigen::Index n = m.rows();
  CMatrix x = CMatrix::Zero(2 * n, 2 * n);
  x.topLeftCorner(n, n) = level * CMatrix::Identity(n, n);
  x.bottomRightCorner(n, n) = level * CMatrix::Identity(n, n);
  x.topRightCorner(n, n) = m;
  x.bottomLeftCorner(n, n) = m.adjoint();
  CMatrix p = CMatrix::Zero(2 * n, 2 * n);
  CMatrix q = CMatrix::Zero(2 * n, 2 * n);
  CompletionResult out;
  for (int it = 0; it < max_iters; ++it) {
    const CMatrix y = project_psd(x + p);
    p = x + p - y;
    const CMatrix x_next = project_constraints(y + q, m, level);
    q = y + q - x_next;
    x = x_next;
    out.psd_point = y;
    out.residual = (x - y).norm();
    out.iterations = it + 1;
    if (out.residual <= tol) break;
  }
  return out;
}

namespace {

GramFactorization factor_completion(const CMatrix& m, const CMatrix& z) {
  const Eigen::Index n = m.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (z + z.adjoint()));
  const RVector evals = es.eigenvalues().cwiseMax(0.0);
  // z = G^* G with G = diag(sqrt(l)) Q^*; columns 0..n-1 are beta, n..2n-1 alpha.
  const CMatrix g = evals.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  return certify_factorization(m, g.rightCols(n), g.leftCols(n));
}

double probe_ratio(const SchurMultiplier& phi, const CMatrix& a) {
  const double denom = operator_norm(a);
  if (denom == 0.0) return 0.0;
  return operator_norm(schur_apply(phi, a)) / denom;
}

}  // namespace

NormBounds norm_bounds(const SchurMultiplier& phi, const NormBoundsOptions& opts) {
  const CMatrix& m = phi.table();
  const Eigen::Index n = m.rows();
  NormBounds out;

  // Lower bound: matrix units give |m_ij| directly.
  double lower = m.cwiseAbs().maxCoeff();
  lower = std::max(lower, probe_ratio(phi, CMatrix::Ones(n, n)));
  lower = std::max(lower, probe_ratio(phi, CMatrix::Identity(n, n)));
  CMatrix aligned(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index t = 0; t < n; ++t) {
      const double mag = std::abs(m(s, t));
      aligned(s, t) = mag > 0.0 ? std::conj(m(s, t)) / mag : Complex(1.0);
    }
  }
  lower = std::max(lower, probe_ratio(phi, aligned));
  Rng rng(opts.seed);
  for (int i = 0; i < opts.random_probes; ++i) {
    lower = std::max(lower, probe_ratio(phi, random_gaussian(n, n, rng)));
  }
  out.lower = lower;

  // Upper bound candidates: trivial column/row factorization, then the Gram
  // witness for PSD tables.
  out.witness = certify_factorization(m, CMatrix::Zero(0, n), CMatrix::Zero(0, n));
  const CpCheckResult cp = cp_check(phi);
  if (cp.positive) {
    GramFactorization g = certify_factorization(m, cp.witness, cp.witness);
    if (g.bound < out.witness.bound) out.witness = std::move(g);
  }

  double lo = lower;
  double hi = out.witness.bound;
  for (int step = 0; step < opts.max_bisection; ++step) {
    if (hi - lo <= opts.bisection_tol * std::max(1.0, hi)) break;
    const double mid = 0.5 * (lo + hi);
    const CompletionResult res = psd_completion(m, mid, opts.dykstra_max_iters, opts.dykstra_tol);
    GramFactorization g = factor_completion(m, res.psd_point);
    if (g.bound < out.witness.bound) out.witness = std::move(g);
    if (res.residual <= opts.dykstra_tol) {
      hi = mid;
    } else {
      lo = mid;
    }
    out.bisection_steps = step + 1;
  }
  out.upper = out.witness.bound;
  return out;
}

}  // namespace schurdil
