#include "schurdil/examples.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "schurdil/errors.hpp"
#include "schurdil/random.hpp"

namespace schurdil {

namespace {

AlgebraElement scalar(const TracialAlgebra& alg, Complex z) {
  return AlgebraElement::unit(alg) * z;
}

}  // namespace

TraceRepresentation omega_representation(Complex omega) {
  if (std::abs(std::abs(omega) - 1.0) > 1e-12) {
    throw ValidationError("omega must lie on the unit circle (|omega| = " +
                          std::to_string(std::abs(omega)) + ")");
  }
  const TracialAlgebra alg({1}, {1.0});
  return TraceRepresentation(alg, {scalar(alg, 1.0), scalar(alg, omega)});
}

TraceRepresentation allones_representation(int n) {
  if (n < 1) throw ValidationError("allones: n must be positive");
  const TracialAlgebra alg({1}, {1.0});
  return TraceRepresentation(alg, std::vector<AlgebraElement>(static_cast<std::size_t>(n),
                                                              AlgebraElement::unit(alg)));
}

TraceRepresentation identity_fourier_representation(int n) {
  if (n < 1) throw ValidationError("identity-fourier: n must be positive");
  const TracialAlgebra alg =
      TracialAlgebra::with_uniform_trace(std::vector<int>(static_cast<std::size_t>(n), 1));
  std::vector<AlgebraElement> d;
  for (int i = 0; i < n; ++i) {
    std::vector<CMatrix> blocks;
    for (int k = 0; k < n; ++k) {
      // exponent reduced mod n keeps the phases exact for i*k >= n
      const int e = (i * k) % n;
      blocks.push_back(CMatrix::Constant(1, 1, std::polar(1.0, 2.0 * std::numbers::pi * e / n)));
    }
    d.emplace_back(alg, std::move(blocks));
  }
  return TraceRepresentation(alg, std::move(d));
}

TraceRepresentation pauli_representation() {
  const TracialAlgebra alg({2}, {0.5});
  CMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return TraceRepresentation(alg, {AlgebraElement::unit(alg), AlgebraElement(alg, {x})});
}

TraceRepresentation planted_representation(int n, const TracialAlgebra& algebra,
                                           std::uint64_t seed) {
  if (n < 1) throw ValidationError("planted: n must be positive");
  Rng rng(seed);
  std::vector<AlgebraElement> d;
  d.push_back(AlgebraElement::unit(algebra));
  for (int i = 1; i < n; ++i) {
    std::vector<CMatrix> blocks;
    for (int b : algebra.blocks()) blocks.push_back(random_unitary(b, rng));
    d.emplace_back(algebra, std::move(blocks));
  }
  return TraceRepresentation(algebra, std::move(d));
}

namespace {

double parse_real(std::string_view s, std::string_view whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  std::size_t skip = s.front() == '+' ? 1 : 0;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data() + skip, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("cannot parse complex number '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  if (s.empty()) throw ValidationError("cannot parse an empty complex number");
  if (s.back() != 'i' && s.back() != 'j') {
    if (s == "+" || s == "-") throw ValidationError("cannot parse complex number '" + s + "'");
    return {parse_real(s, text), 0.0};
  }
  s.pop_back();
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_real(s, text)};
  const std::string_view view(s);
  const std::string_view re = view.substr(0, split);
  if (re.empty() || re == "+" || re == "-") {
    throw ValidationError("cannot parse complex number '" + std::string(text) + "'");
  }
  return {parse_real(re, text), parse_real(view.substr(split), text)};
}

}  // namespace schurdil
