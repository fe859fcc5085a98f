#include "doctest.h"
#include "schurdil/errors.hpp"
#include "schurdil/linalg.hpp"
#include "test_support.hpp"

using namespace schurdil;
using schurdil::testing::from_rows;
using schurdil::testing::pauli_x;

TEST_CASE("kron examples") {
  CHECK(kron(identity(2), identity(3)) == identity(6));

  const CMatrix nil = from_rows({{0, 1}, {0, 0}});
  const CMatrix two = from_rows({{2}});
  CHECK(kron(nil, two) == from_rows({{0, 2}, {0, 0}}));

  // X (x) X expanded by hand: block (0,1) and (1,0) are X.
  const CMatrix expected = from_rows({{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}});
  CHECK(kron(pauli_x(), pauli_x()) == expected);
}

TEST_CASE("kron is associative and satisfies the mixed-product law") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_gaussian(2, 3, rng);
    const CMatrix b = random_gaussian(3, 2, rng);
    const CMatrix c = random_gaussian(3, 2, rng);
    const CMatrix d = random_gaussian(2, 3, rng);
    CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm() <= 1e-12 * (1 + kron(a * c, b * d).norm()));
    CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).norm() <= 1e-13 * (1 + kron(a, kron(b, c)).norm()));
    // bilinearity
    const CMatrix a2 = random_gaussian(2, 3, rng);
    const Complex s(0.3, -1.1);
    CHECK((kron(s * a + a2, b) - (s * kron(a, b) + kron(a2, b))).norm() <= 1e-12);
  }
}

TEST_CASE("dagger") {
  CHECK(dagger(identity(4)) == identity(4));
  CHECK(dagger(from_rows({{0, 1}, {0, 0}})) == from_rows({{0, 0}, {1, 0}}));
  CHECK(dagger(from_rows({{Complex(0, 1)}})) == from_rows({{Complex(0, -1)}}));

  // Exact on small-integer entries.
  const CMatrix a = from_rows({{Complex(1, 2), 3}, {Complex(0, -1), 4}});
  const CMatrix b = from_rows({{2, Complex(1, 1)}, {Complex(-3, 0), Complex(0, 5)}});
  CHECK(dagger(a * b) == dagger(b) * dagger(a));
  CHECK(dagger(dagger(a)) == a);

  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const CMatrix x = random_gaussian(3, 4, rng);
    const CMatrix y = random_gaussian(4, 2, rng);
    CHECK((dagger(x * y) - dagger(y) * dagger(x)).norm() <= 1e-12);
    CHECK(dagger(dagger(x)) == x);
  }
}

TEST_CASE("is_unitary") {
  CHECK(is_unitary(identity(5), 1e-12));
  const Complex omega = std::polar(1.0, 0.7);
  CHECK(is_unitary(from_rows({{1, 0}, {0, omega}}), 1e-12));
  CHECK_FALSE(is_unitary(from_rows({{1, 1}, {0, 1}}), 1e-6));
  CHECK_THROWS_AS(is_unitary(CMatrix::Zero(2, 3), 1e-6), ValidationError);

  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const CMatrix u = random_unitary(3, rng);
    const CMatrix v = random_unitary(2, rng);
    const CMatrix w = random_unitary(3, rng);
    CHECK(is_unitary(u, 1e-12));
    CHECK(is_unitary(kron(u, v), 1e-12));
    CHECK(is_unitary(u * w, 1e-12));
  }
}

TEST_CASE("psd_check") {
  CHECK(psd_check(CMatrix::Ones(4, 4), 1e-10));
  const Complex omega = std::polar(1.0, 1.3);
  const CMatrix m = from_rows({{1, omega}, {std::conj(omega), 1}});
  CHECK(psd_check(m, 1e-10));
  const RVector ev = hermitian_eigenvalues(m);
  CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(2.0));
  CHECK_FALSE(psd_check(from_rows({{1, 2}, {2, 1}}), 1e-10));
  CHECK_THROWS_AS(psd_check(from_rows({{1, 2}, {0, 1}}), 1e-10), ValidationError);
  CHECK_THROWS_AS(psd_check(CMatrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("matrix units and finiteness") {
  const CMatrix e = matrix_unit(3, 0, 2);
  CHECK(e(0, 2) == Complex(1.0));
  CHECK(e.cwiseAbs().sum() == 1.0);
  CHECK((matrix_unit(3, 0, 1) * matrix_unit(3, 1, 2) - e).norm() == 0.0);
  CHECK_THROWS_AS(matrix_unit(2, 2, 0), ValidationError);
  CMatrix bad = identity(2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(require_finite(bad, "test"), ValidationError);
  CHECK_THROWS_AS(checked_power(1 << 20, 8), DimensionError);
}
