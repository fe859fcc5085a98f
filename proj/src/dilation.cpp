#include "schurdil/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "parallel.hpp"
#include "schurdil/errors.hpp"
#include "schurdil/random.hpp"

namespace schurdil {

namespace {

// (A (x) I_r) x
CMatrix left_slot_multiply(const CMatrix& a, const CMatrix& x, Eigen::Index r) {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) out.middleRows(i * r, r) += a(i, j) * x.middleRows(j * r, r);
    }
  }
  return out;
}

// x (B (x) I_r)
CMatrix right_slot_multiply(const CMatrix& x, const CMatrix& b, Eigen::Index r) {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (b(i, j) != 0.0) out.middleCols(j * r, r) += x.middleCols(i * r, r) * b(i, j);
    }
  }
  return out;
}

}  // namespace

DilationSystem::DilationSystem(TraceRepresentation rep, int window)
    : rep_(std::move(rep)), multiplier_(build_multiplier(rep_)), n_(rep_.n()), window_(window) {}

DilationSystem DilationSystem::build(const TraceRepresentation& rep, int window,
                                     Eigen::Index dim_cap) {
  if (window < 1) throw ValidationError("dilation: window K must be at least 1");
  require_valid(rep);
  const int m = rep.algebra().embedding_dim();
  Eigen::Index inner = 0;
  try {
    inner = checked_power(m, window);
    if (inner > dim_cap / rep.n()) throw DimensionError("");
  } catch (const DimensionError&) {
    throw DimensionError("dilation: ambient dimension n*M^K = " + std::to_string(rep.n()) + "*" +
                         std::to_string(m) + "^" + std::to_string(window) +
                         " exceeds the cap " + std::to_string(dim_cap));
  }

  DilationSystem sys(rep, window);
  sys.slot_dim_ = m;
  sys.inner_dim_ = inner;
  for (const auto& d : rep.unitaries()) sys.embedded_d_.push_back(embed(d));

  const Eigen::Index r = inner / m;
  sys.shift_perm_.resize(static_cast<std::size_t>(inner));
  for (Eigen::Index b = 0; b < inner; ++b) {
    sys.shift_perm_[static_cast<std::size_t>(b)] = (b % m) * r + b / m;
  }

  // V[(s,a),(s,b)] = (d_s^* (x) I)[a, P(b)] = conj(d_s(b_K, a_1)) when the
  // trailing slots of a equal the leading slots of b.
  sys.v_ = CMatrix::Zero(sys.dim(), sys.dim());
  for (int s = 0; s < sys.n_; ++s) {
    const CMatrix& ds = sys.embedded_d_[static_cast<std::size_t>(s)];
    const Eigen::Index off = s * inner;
    for (Eigen::Index a = 0; a < inner; ++a) {
      for (Eigen::Index b = 0; b < inner; ++b) {
        if (a % r == b / m) sys.v_(off + a, off + b) = std::conj(ds(b % m, a / r));
      }
    }
  }
  return sys;
}

CMatrix DilationSystem::embed_J(const CMatrix& z) const {
  if (z.rows() != n_ || z.cols() != n_) {
    throw ValidationError("embed_J: expected a " + std::to_string(n_) + "x" + std::to_string(n_) +
                          " matrix");
  }
  return kron(z, CMatrix::Identity(inner_dim_, inner_dim_));
}

CMatrix DilationSystem::shift(const CMatrix& y) const {
  CMatrix out(y.rows(), y.cols());
  const Eigen::Index inner = inner_dim_;
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    const Eigen::Index pc = (c / inner) * inner + shift_perm_[static_cast<std::size_t>(c % inner)];
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      const Eigen::Index pr =
          (r / inner) * inner + shift_perm_[static_cast<std::size_t>(r % inner)];
      out(pr, pc) = y(r, c);
    }
  }
  return out;
}

CMatrix DilationSystem::apply_once(const CMatrix& y) const {
  const CMatrix shifted = shift(y);
  const Eigen::Index inner = inner_dim_;
  const Eigen::Index r = inner / slot_dim_;
  CMatrix out(y.rows(), y.cols());
  for (int s = 0; s < n_; ++s) {
    const CMatrix ds_adj = embedded_d_[static_cast<std::size_t>(s)].adjoint();
    for (int t = 0; t < n_; ++t) {
      const CMatrix block = shifted.block(s * inner, t * inner, inner, inner);
      out.block(s * inner, t * inner, inner, inner) = right_slot_multiply(
          left_slot_multiply(ds_adj, block, r), embedded_d_[static_cast<std::size_t>(t)], r);
    }
  }
  return out;
}

CMatrix DilationSystem::step(const CMatrix& y, int k) const {
  if (y.rows() != dim() || y.cols() != dim()) {
    throw ValidationError("step: expected a square matrix of size " + std::to_string(dim()));
  }
  if (k < 0) throw ValidationError("step: k must be non-negative");
  CMatrix out = y;
  for (int i = 0; i < k; ++i) out = apply_once(out);
  return out;
}

CMatrix DilationSystem::step_dense(const CMatrix& y, int k) const {
  if (y.rows() != dim() || y.cols() != dim()) {
    throw ValidationError("step_dense: expected a square matrix of size " + std::to_string(dim()));
  }
  if (k < 0) throw ValidationError("step_dense: k must be non-negative");
  CMatrix vk = CMatrix::Identity(dim(), dim());
  for (int i = 0; i < k; ++i) vk = v_ * vk;
  return vk * y * vk.adjoint();
}

CMatrix DilationSystem::expectation(const CMatrix& y, double tol) const {
  return cond_expectation(y, n_, algebra(), window_, tol);
}

Complex DilationSystem::ambient_trace(const CMatrix& y) const {
  return schurdil::ambient_trace(y, n_, algebra(), window_);
}

CMatrix DilationSystem::random_member(std::uint64_t seed) const {
  Rng rng(seed);
  const CMatrix g = random_gaussian(dim(), dim(), rng) / std::sqrt(static_cast<double>(dim()));
  return project_to_subalgebra(g, n_, algebra(), window_);
}

DilationReport verify_dilation(const DilationSystem& sys, int k_max, double tol,
                               const VerifyOptions& opts) {
  if (k_max < 0) throw ValidationError("verify_dilation: k_max must be non-negative");
  if (k_max > sys.window() && !opts.allow_beyond_window) {
    throw ValidationError("window exceeded: k_max = " + std::to_string(k_max) +
                          " > K = " + std::to_string(sys.window()) +
                          "; the dilation identity is only exact for k <= K");
  }
  const int n = sys.n();
  std::vector<CMatrix> observables;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) observables.push_back(matrix_unit(n, i, j));
  }
  Rng rng(opts.seed);
  for (int i = 0; i < opts.random_samples; ++i) observables.push_back(random_gaussian(n, n, rng));

  std::vector<std::vector<double>> residuals(observables.size(),
                                             std::vector<double>(static_cast<std::size_t>(k_max) + 1));
  const CMatrix& m = sys.multiplier().table();
  detail::parallel_for(observables.size(), [&](std::size_t idx) {
    const CMatrix& z = observables[idx];
    CMatrix y = sys.embed_J(z);
    CMatrix tz = z;  // T^k(z)
    for (int k = 0; k <= k_max; ++k) {
      if (k > 0) {
        y = sys.step(y, 1);
        tz = m.cwiseProduct(tz);
      }
      residuals[idx][static_cast<std::size_t>(k)] = (sys.expectation(y) - tz).norm();
    }
  });

  DilationReport report;
  report.observables = static_cast<int>(observables.size());
  report.pass = true;
  for (int k = 0; k <= k_max; ++k) {
    KResidual kr;
    kr.k = k;
    for (const auto& r : residuals) kr.max_residual = std::max(kr.max_residual, r[static_cast<std::size_t>(k)]);
    kr.pass = kr.max_residual <= tol;
    kr.within_window = k <= sys.window();
    report.max_residual = std::max(report.max_residual, kr.max_residual);
    report.pass = report.pass && kr.pass;
    report.per_k.push_back(kr);
  }
  return report;
}

namespace {

void require_length(const CVector& x, int n, const char* what) {
  if (x.size() != n) {
    throw ValidationError(std::string(what) + ": vectors must have length " + std::to_string(n));
  }
}

}  // namespace

Complex pairing_closed_form(const TraceRepresentation& rep, int k, const CVector& u,
                            const CVector& v, const CVector& a, const CVector& b) {
  const int n = rep.n();
  for (const CVector* x : {&u, &v, &a, &b}) require_length(*x, n, "pairing_closed_form");
  if (k < 0) throw ValidationError("pairing_closed_form: k must be non-negative");
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const AlgebraElement di_adj = rep.unitary(static_cast<std::size_t>(i)).adjoint();
    for (int j = 0; j < n; ++j) {
      const Complex phi = trace(di_adj * rep.unitary(static_cast<std::size_t>(j)));
      acc += a(i) * b(j) * u(j) * v(i) * std::pow(phi, k);
    }
  }
  return acc;
}

Complex ambient_pairing(const DilationSystem& sys, int k, const CVector& u, const CVector& v,
                        const CVector& a, const CVector& b) {
  for (const CVector* x : {&u, &v, &a, &b}) require_length(*x, sys.n(), "ambient_pairing");
  const CMatrix lifted = sys.step(sys.embed_J(rank1(u, v)), k);
  return sys.ambient_trace(lifted * sys.embed_J(rank1(a, b)));
}

InvariantReport check_invariants(const DilationSystem& sys, int samples, std::uint64_t seed) {
  InvariantReport rep;
  rep.samples = samples;
  rep.unitarity = unitarity_residual(sys.implementing_unitary());

  const int n = sys.n();
  const auto& alg = sys.algebra();
  const Eigen::Index dim = sys.dim();
  auto membership = [&](const CMatrix& y) {
    return membership_residual(sys.step(y, 1), n, alg, sys.window());
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rep.membership = std::max(rep.membership, membership(sys.embed_J(matrix_unit(n, i, j))));
    }
  }
  // 1 (x) ... (x) e_pq (x) ... (x) 1 for block-internal units e_pq of N.
  const int m = sys.slot_dim();
  for (int slot = 0; slot < sys.window(); ++slot) {
    for (std::size_t blk = 0; blk < alg.block_count(); ++blk) {
      const int off = alg.block_offset(blk);
      for (int p = 0; p < alg.blocks()[blk]; ++p) {
        for (int q = 0; q < alg.blocks()[blk]; ++q) {
          CMatrix y = CMatrix::Identity(n, n);
          for (int s = 0; s < sys.window(); ++s) {
            y = kron(y, s == slot ? matrix_unit(m, off + p, off + q) : CMatrix::Identity(m, m));
          }
          rep.membership = std::max(rep.membership, membership(y));
        }
      }
    }
  }

  const CMatrix id = CMatrix::Identity(dim, dim);
  rep.unitality = (sys.step(id, 1) - id).norm();

  std::vector<InvariantReport> partial(static_cast<std::size_t>(samples));
  detail::parallel_for(partial.size(), [&](std::size_t i) {
    const CMatrix x = sys.random_member(derive_seed(seed, 2 * i));
    const CMatrix y = sys.random_member(derive_seed(seed, 2 * i + 1));
    const CMatrix ux = sys.step(x, 1);
    const CMatrix uy = sys.step(y, 1);
    auto& p = partial[i];
    p.multiplicativity = (sys.step(x * y, 1) - ux * uy).norm();
    p.star = (sys.step(x.adjoint(), 1) - ux.adjoint()).norm();
    p.trace = std::abs(sys.ambient_trace(ux) - sys.ambient_trace(x));
  });
  for (const auto& p : partial) {
    rep.multiplicativity = std::max(rep.multiplicativity, p.multiplicativity);
    rep.star = std::max(rep.star, p.star);
    rep.trace = std::max(rep.trace, p.trace);
  }
  return rep;
}

namespace {

double off_block_norm(const CMatrix& x, int n, Eigen::Index h_rows, Eigen::Index h_cols) {
  double total = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s != t) total += x.block(s * h_rows, t * h_cols, h_rows, h_cols).squaredNorm();
    }
  }
  return std::sqrt(total);
}

}  // namespace

SliceResult slice_identity_check(int n, const CMatrix& c, const CMatrix& d, const CVector& u,
                                 const CVector& v, const CVector& a, const CVector& b) {
  if (n <= 0) throw ValidationError("slice_identity_check: n must be positive");
  for (const CVector* x : {&u, &v, &a, &b}) require_length(*x, n, "slice_identity_check");
  if (c.rows() % n != 0 || c.cols() % n != 0) {
    throw ValidationError("slice_identity_check: C is not n h1 x n h2");
  }
  const Eigen::Index h1 = c.rows() / n;
  const Eigen::Index h2 = c.cols() / n;
  if (d.rows() != n * h2 || d.cols() != n * h1) {
    throw ValidationError("slice_identity_check: D must be n h2 x n h1 to compose with C");
  }
  const double tol = 1e-12 * std::max(1.0, std::max(c.norm(), d.norm()));
  if (off_block_norm(c, n, h1, h2) > tol || off_block_norm(d, n, h2, h1) > tol) {
    throw ValidationError("slice_identity_check: C and D must be block-diagonal over the n index");
  }

  SliceResult out;
  // Left side on l2_n (x) H1: slice by (a (x) b) (x) I, i.e. sum_{s,t}
  // rank1(a,b)(t,s) X_(s,t).
  const CMatrix x = c * kron(rank1(u, v), CMatrix::Identity(h2, h2)) * d;
  const CMatrix ab = rank1(a, b);
  out.lhs = CMatrix::Zero(h1, h1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) out.lhs += ab(t, s) * x.block(s * h1, t * h1, h1, h1);
  }

  // Right side on l_inf_s (x) l_inf_t (x) H1: (1_t (x) C_s)(1_s (x) D_t) is the
  // function (s,t) -> C_s D_t, realized as block-diagonal operators over the
  // n^2 pairs and then paired against (a v)(s) (b u)(t).
  const Eigen::Index pairs = static_cast<Eigen::Index>(n) * n;
  CMatrix c_lift = CMatrix::Zero(pairs * h1, pairs * h2);
  CMatrix d_lift = CMatrix::Zero(pairs * h2, pairs * h1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      const Eigen::Index p = static_cast<Eigen::Index>(s) * n + t;
      c_lift.block(p * h1, p * h2, h1, h2) = c.block(s * h1, s * h2, h1, h2);
      d_lift.block(p * h2, p * h1, h2, h1) = d.block(t * h2, t * h1, h2, h1);
    }
  }
  const CMatrix w = c_lift * d_lift;
  out.rhs = CMatrix::Zero(h1, h1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      const Eigen::Index p = static_cast<Eigen::Index>(s) * n + t;
      out.rhs += (a(s) * v(s)) * (b(t) * u(t)) * w.block(p * h1, p * h1, h1, h1);
    }
  }
  out.residual = (out.lhs - out.rhs).norm();
  return out;
}

}  // namespace schurdil
