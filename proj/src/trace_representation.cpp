#include "schurdil/trace_representation.hpp"

#include <complex>
#include <string>
#include <utility>

#include "schurdil/errors.hpp"

namespace schurdil {

TraceRepresentation::TraceRepresentation(TracialAlgebra algebra, std::vector<AlgebraElement> d)
    : algebra_(std::move(algebra)), d_(std::move(d)) {
  if (d_.empty()) throw ValidationError("TraceRepresentation: at least one unitary required");
  for (std::size_t i = 0; i < d_.size(); ++i) {
    if (!(d_[i].algebra().blocks() == algebra_.blocks())) {
      throw ValidationError("TraceRepresentation: d_" + std::to_string(i + 1) +
                            " lives in a different algebra");
    }
  }
}

void require_valid(const TraceRepresentation& rep, double tol) {
  const double norm = rep.algebra().normalization_residual();
  if (!(norm <= kNormalizationTol)) {
    throw ValidationError("representation: algebra trace is not normalized (|tau(1) - 1| = " +
                          std::to_string(norm) + ")");
  }
  for (int i = 0; i < rep.n(); ++i) {
    const double r = unitarity_residual(rep.unitary(static_cast<std::size_t>(i)));
    if (!(r <= tol)) {
      throw ValidationError("representation: d_" + std::to_string(i + 1) +
                            " is not unitary (residual " + std::to_string(r) + ")");
    }
  }
}

SchurMultiplier build_multiplier(const TraceRepresentation& rep) {
  const int n = rep.n();
  const auto& alg = rep.algebra();
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < alg.block_count(); ++k) {
        const CMatrix& di = rep.unitary(static_cast<std::size_t>(i)).block(k);
        const CMatrix& dj = rep.unitary(static_cast<std::size_t>(j)).block(k);
        // Tr(di^* dj) = sum conj(di) .* dj
        acc += alg.weights()[k] * di.conjugate().cwiseProduct(dj).sum();
      }
      m(i, j) = acc;
      m(j, i) = std::conj(acc);
    }
    m(i, i) = m(i, i).real();
  }
  return SchurMultiplier(std::move(m));
}

TraceRepresentation gauge_normalize(const TraceRepresentation& rep) {
  const AlgebraElement first_inv = rep.unitary(0).adjoint();
  std::vector<AlgebraElement> d;
  d.reserve(rep.unitaries().size());
  d.push_back(AlgebraElement::unit(rep.algebra()));
  for (std::size_t i = 1; i < rep.unitaries().size(); ++i) d.push_back(first_inv * rep.unitary(i));
  return TraceRepresentation(rep.algebra(), std::move(d));
}

ValidationReport validate(const TraceRepresentation& rep, double tol) {
  ValidationReport report;
  report.normalization_residual = rep.algebra().normalization_residual();
  report.normalization_ok = report.normalization_residual <= kNormalizationTol;
  for (int i = 0; i < rep.n(); ++i) {
    const double r = unitarity_residual(rep.unitary(static_cast<std::size_t>(i)));
    report.unitarity_residuals.push_back(r);
    if (!(r <= tol)) report.failing_indices.push_back(i);
  }
  report.flags = build_multiplier(rep).flags();
  report.valid = report.normalization_ok && report.failing_indices.empty();
  return report;
}

}  // namespace schurdil
