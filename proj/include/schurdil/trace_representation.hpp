#pragma once

#include <string>
#include <vector>

#include "schurdil/schur_multiplier.hpp"
#include "schurdil/tracial_algebra.hpp"

namespace schurdil {

inline constexpr double kUnitarityTol = 1e-10;

/// Unitaries d_1..d_n of a tracial algebra; induces m_ij = tau(d_i^* d_j).
class TraceRepresentation {
 public:
  /// Checks shapes only (n >= 1, all d_i in `algebra`). Unitarity is checked by
  /// validate() / require_valid() so that reports can describe broken inputs.
  TraceRepresentation(TracialAlgebra algebra, std::vector<AlgebraElement> d);

  const TracialAlgebra& algebra() const { return algebra_; }
  const std::vector<AlgebraElement>& unitaries() const { return d_; }
  const AlgebraElement& unitary(std::size_t i) const { return d_[i]; }
  int n() const { return static_cast<int>(d_.size()); }

 private:
  TracialAlgebra algebra_;
  std::vector<AlgebraElement> d_;
};

/// Throws ValidationError naming the first index whose unitarity residual
/// exceeds tol, or if the algebra's trace is not normalized.
void require_valid(const TraceRepresentation& rep, double tol = kUnitarityTol);

/// m_ij = tau(d_i^* d_j). Does not re-validate the representation. The lower
/// triangle is filled by conjugation, so the table is exactly Hermitian.
SchurMultiplier build_multiplier(const TraceRepresentation& rep);

/// d'_k = d_1^* d_k. Leaves build_multiplier unchanged.
TraceRepresentation gauge_normalize(const TraceRepresentation& rep);

struct ValidationReport {
  std::vector<double> unitarity_residuals;
  std::vector<int> failing_indices;
  double normalization_residual = 0.0;
  bool normalization_ok = false;
  MultiplierFlags flags;
  bool valid = false;
};

ValidationReport validate(const TraceRepresentation& rep, double tol = kUnitarityTol);

}  // namespace schurdil
