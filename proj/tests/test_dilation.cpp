#include "doctest.h"
#include "schurdil/dilation.hpp"
#include "schurdil/errors.hpp"
#include "schurdil/examples.hpp"
#include "test_support.hpp"

using namespace schurdil;
using schurdil::testing::block_shapes;
using schurdil::testing::pauli_x;
using schurdil::testing::random_rep;

namespace {

// E_ij (x) w^(x)k (x) 1^(x)(K-k) assembled with kron.
CMatrix structure_oracle(int n, int i, int j, const CMatrix& w, int k, int window) {
  CMatrix out = matrix_unit(n, i, j);
  for (int slot = 0; slot < window; ++slot) {
    out = kron(out, slot < k ? w : CMatrix(CMatrix::Identity(w.rows(), w.cols())));
  }
  return out;
}

// sum_{s,t} a_s b_t v_s u_t C_s D_t from the diagonal blocks.
CMatrix slice_oracle(int n, const CMatrix& c, const CMatrix& d, const CVector& u,
                     const CVector& v, const CVector& a, const CVector& b) {
  const Eigen::Index h1 = c.rows() / n;
  const Eigen::Index h2 = c.cols() / n;
  CMatrix out = CMatrix::Zero(h1, h1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      out += a(s) * b(t) * v(s) * u(t) * c.block(s * h1, s * h2, h1, h2) *
             d.block(t * h2, t * h1, h2, h1);
    }
  }
  return out;
}

CMatrix block_diag(int n, Eigen::Index h1, Eigen::Index h2, Rng& rng) {
  CMatrix out = CMatrix::Zero(n * h1, n * h2);
  for (int s = 0; s < n; ++s) out.block(s * h1, s * h2, h1, h2) = random_gaussian(h1, h2, rng);
  return out;
}

}  // namespace

TEST_CASE("scalar examples") {
  const auto ones = DilationSystem::build(allones_representation(3), 2);
  CHECK(ones.dim() == 3);
  CHECK(is_unitary(ones.implementing_unitary(), 1e-12));
  Rng rng(20);
  const CMatrix z = random_gaussian(3, 3, rng);
  CHECK((ones.step(ones.embed_J(z), 2) - z).norm() <= 1e-13);

  const Complex omega = std::polar(1.0, 0.7);
  const auto sys = DilationSystem::build(omega_representation(omega), 3);
  for (int k = 1; k <= 3; ++k) {
    const CMatrix y = sys.step(sys.embed_J(matrix_unit(2, 0, 1)), k);
    CHECK((y - std::pow(omega, k) * matrix_unit(2, 0, 1)).norm() <= 1e-13);
  }
}

TEST_CASE("Pauli example moves X into the first slot") {
  const auto sys = DilationSystem::build(pauli_representation(), 2);
  CHECK(sys.dim() == 8);
  const CMatrix y = sys.step(sys.embed_J(matrix_unit(2, 0, 1)), 1);
  CHECK((y - kron(kron(matrix_unit(2, 0, 1), pauli_x()), CMatrix::Identity(2, 2))).norm() <=
        1e-13);
  // E U J = T_m = identity table: off-diagonal units are killed.
  CHECK(sys.expectation(y).norm() <= 1e-13);
}

TEST_CASE("step agrees with dense powers of V") {
  Rng rng(21);
  for (const auto& shape : block_shapes()) {
    const auto rep = random_rep(3, shape, rng, true);
    const auto sys = DilationSystem::build(rep, 2);
    const CMatrix y = sys.random_member(5);
    for (int k = 0; k <= 3; ++k) {
      CHECK((sys.step(y, k) - sys.step_dense(y, k)).norm() <= 1e-12 * (1 + y.norm()));
    }
  }
}

TEST_CASE("U^k(E_ij (x) 1) has the tensor power structure") {
  Rng rng(22);
  for (const auto& shape : block_shapes()) {
    const auto rep = random_rep(3, shape, rng);
    const int window = 3;
    const auto sys = DilationSystem::build(rep, window);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const CMatrix w = embed(rep.unitary(i).adjoint() * rep.unitary(j));
        for (int k = 0; k <= window; ++k) {
          const CMatrix got = sys.step(sys.embed_J(matrix_unit(3, i, j)), k);
          CHECK((got - structure_oracle(3, i, j, w, k, window)).norm() <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("verify_dilation within the window") {
  Rng rng(23);
  for (const auto& shape : block_shapes()) {
    for (int window : {1, 2, 3}) {
      const auto rep = random_rep(3, shape, rng, true);
      const auto sys = DilationSystem::build(rep, window);
      const auto report = verify_dilation(sys, window, 1e-10);
      CHECK(report.pass);
      CHECK(report.max_residual <= 1e-10);
      CHECK(static_cast<int>(report.per_k.size()) == window + 1);
      CHECK(report.observables == 9 + 10);
    }
  }
}

TEST_CASE("window is enforced and fails beyond it for noncommuting unitaries") {
  const auto alg = TracialAlgebra::with_uniform_trace({2});
  const auto rep = planted_representation(3, alg, 4);
  const auto sys = DilationSystem::build(rep, 1);
  CHECK_THROWS_AS(verify_dilation(sys, 2, 1e-10), ValidationError);
  VerifyOptions opts;
  opts.allow_beyond_window = true;
  const auto report = verify_dilation(sys, 2, 1e-10, opts);
  REQUIRE(report.per_k.size() == 3);
  CHECK(report.per_k[1].pass);
  CHECK_FALSE(report.per_k[2].within_window);
  CHECK(report.per_k[2].max_residual > 1e-2);
  CHECK_FALSE(report.pass);
}

TEST_CASE("expectation and trace of the ambient algebra") {
  Rng rng(24);
  const auto rep = random_rep(3, {2, 1}, rng, true);
  const auto sys = DilationSystem::build(rep, 2);
  const CMatrix z = random_gaussian(3, 3, rng);
  CHECK((sys.expectation(sys.embed_J(z)) - z).norm() <= 1e-13);
  CHECK(std::abs(sys.ambient_trace(sys.embed_J(z)) - z.trace()) <= 1e-12);
  const CMatrix y = sys.random_member(3);
  CHECK(std::abs(sys.ambient_trace(y) - sys.expectation(y).trace()) <= 1e-12);
  CHECK(std::abs(sys.ambient_trace(sys.step(y, 1)) - sys.ambient_trace(y)) <= 1e-12);
}

TEST_CASE("pairing through the dilation") {
  const CVector h = CVector::Constant(2, 1.0 / std::sqrt(2.0));
  const auto rep = omega_representation(Complex(0, 1));
  CHECK(std::abs(pairing_closed_form(rep, 1, h, h, h, h) - 0.5) <= 1e-14);
  const auto sys = DilationSystem::build(rep, 1);
  CHECK(std::abs(ambient_pairing(sys, 1, h, h, h, h) - 0.5) <= 1e-14);

  Rng rng(25);
  for (const auto& shape : block_shapes()) {
    const auto r = random_rep(3, shape, rng, true);
    const auto s = DilationSystem::build(r, 2);
    const CVector u = random_gaussian_vector(3, rng);
    const CVector v = random_gaussian_vector(3, rng);
    const CVector a = random_gaussian_vector(3, rng);
    const CVector b = random_gaussian_vector(3, rng);
    for (int k = 0; k <= 2; ++k) {
      // Trace of T^k(rank1(u,v)) rank1(a,b), with T^k from repeated application.
      CMatrix tk = rank1(u, v);
      for (int step = 0; step < k; ++step) tk = schur_apply(s.multiplier(), tk);
      const Complex oracle = (tk * rank1(a, b)).trace();
      CHECK(std::abs(pairing_closed_form(r, k, u, v, a, b) - oracle) <= 1e-11);
      CHECK(std::abs(ambient_pairing(s, k, u, v, a, b) - oracle) <= 1e-11);
    }
  }
}

TEST_CASE("U is a trace preserving *-automorphism") {
  Rng rng(26);
  for (const auto& shape : block_shapes()) {
    const auto rep = random_rep(2, shape, rng, true);
    const auto sys = DilationSystem::build(rep, 2);
    const auto inv = check_invariants(sys, 10, 7);
    CHECK(inv.unitarity <= 1e-10);
    CHECK(inv.membership <= 1e-10);
    CHECK(inv.multiplicativity <= 1e-10);
    CHECK(inv.star <= 1e-10);
    CHECK(inv.unitality <= 1e-10);
    CHECK(inv.trace <= 1e-10);
    CHECK(inv.samples == 10);
  }
}

TEST_CASE("dimension cap") {
  const auto alg = TracialAlgebra::with_uniform_trace({2, 1});
  const auto rep = planted_representation(4, alg, 1);
  CHECK_THROWS_AS(DilationSystem::build(rep, 7), DimensionError);
  CHECK_THROWS_AS(DilationSystem::build(rep, 2, 20), DimensionError);
  CHECK(DilationSystem::build(rep, 2, 36).dim() == 36);
  CHECK_THROWS_AS(DilationSystem::build(rep, 0), ValidationError);
}

TEST_CASE("slice identity") {
  Rng rng(27);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 4;
    const Eigen::Index h1 = 1 + t % 3;
    const Eigen::Index h2 = 1 + (t / 3) % 3;
    const CMatrix c = block_diag(n, h1, h2, rng);
    const CMatrix d = block_diag(n, h2, h1, rng);
    const CVector u = random_gaussian_vector(n, rng);
    const CVector v = random_gaussian_vector(n, rng);
    const CVector a = random_gaussian_vector(n, rng);
    const CVector b = random_gaussian_vector(n, rng);
    const auto res = slice_identity_check(n, c, d, u, v, a, b);
    const CMatrix oracle = slice_oracle(n, c, d, u, v, a, b);
    const double scale = 1.0 + oracle.norm();
    CHECK(res.residual <= 1e-12 * scale);
    CHECK((res.lhs - oracle).norm() <= 1e-12 * scale);
    CHECK((res.rhs - oracle).norm() <= 1e-12 * scale);
  }
  const CMatrix full = CMatrix::Ones(4, 4);
  const CVector one = CVector::Ones(2);
  CHECK_THROWS_AS(slice_identity_check(2, full, full, one, one, one, one), ValidationError);
}
