#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schurdil/schur_multiplier.hpp"
#include "schurdil/trace_representation.hpp"

namespace schurdil {

/// Parses an algebra shape such as "2", "1,1" or "2,1" into blocks with the
/// uniform normalized trace (weight 1/M per diagonal position).
TracialAlgebra parse_algebra_spec(std::string_view spec);

/// Inverse of parse_algebra_spec for the block list.
std::string format_algebra_spec(const TracialAlgebra& algebra);

struct SearchConfig {
  TracialAlgebra algebra = TracialAlgebra({1}, {1.0});
  int restarts = 8;
  int max_iters = 500;
  double step_size = 1.0;
  std::uint64_t seed = 42;
  double target_residual = 1e-8;
  /// Restart 0 starts from the scalar phases of the first row of m.
  bool warm_start = true;
};

struct SearchResult {
  TraceRepresentation best_rep;
  double residual = 0.0;
  bool converged = false;
  int best_restart = 0;
  /// Final residual of every restart, in restart order.
  std::vector<double> restart_residuals;
  /// Residual after each accepted iteration, per restart.
  std::vector<std::vector<double>> restart_traces;
  /// Largest unitarity residual of any iterate visited.
  double max_unitarity_residual = 0.0;
};

/// Outcome of the necessary-condition screen applied before searching.
struct ScreenResult {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Unit diagonal (1e-8), Hermitian and PSD, entries in the closed unit disk.
/// Every table produced by build_multiplier passes.
ScreenResult screen_multiplier(const SchurMultiplier& m, double tol = 1e-8);

/// ||m - build_multiplier(rep)||_F^2.
double loss(const SchurMultiplier& m, const TraceRepresentation& rep);

/// Gradient of loss() with respect to left perturbations d_i -> (1 + A_i) d_i,
/// A_i skew-Hermitian, under the Frobenius inner product on each block. One
/// skew-Hermitian element per d_i.
std::vector<AlgebraElement> riemannian_gradient(const SchurMultiplier& m,
                                                const TraceRepresentation& rep);

/// Cayley transform (I - A/2)^{-1} (I + A/2) of a skew-Hermitian A.
CMatrix cayley(const CMatrix& skew);

/// d_i <- cayley(-step * direction_i) d_i, block by block. Halves the step
/// (at most 30 times) if a Cayley denominator is numerically singular.
TraceRepresentation riemannian_step(const TraceRepresentation& rep,
                                    const std::vector<AlgebraElement>& direction,
                                    double step_size);

/// Searches for unitaries d_1..d_n of cfg.algebra with tau(d_i^* d_j) = m_ij.
/// d_1 is pinned to the unit. Throws ValidationError listing the failed
/// necessary conditions when the screen rejects m.
SearchResult search(const SchurMultiplier& m, const SearchConfig& cfg);

/// Tries each algebra in order and stops at the first that converges; returns
/// the result for the last algebra tried.
struct LadderResult {
  SearchResult result;
  std::size_t rung = 0;
};
LadderResult search_ladder(const SchurMultiplier& m, const std::vector<TracialAlgebra>& ladder,
                           SearchConfig cfg);

/// Default escalation C -> C^2 -> M_2 -> M_2 (+) C -> M_3.
std::vector<TracialAlgebra> default_ladder();

struct BruteResult {
  double residual = 0.0;
  TraceRepresentation best_rep;
  std::uint64_t evaluated = 0;
};

/// Exhaustive minimum of ||m - build_multiplier(rep)||_F over representations
/// in C^r (uniform weights) whose phases lie on the grid exp(2 pi i k / grid),
/// with d_1 = 1. Requires n <= 3, r <= 3 and at most `max_evaluations` phase
/// assignments.
BruteResult brute_oracle(const SchurMultiplier& m, int r, int grid,
                         std::uint64_t max_evaluations = 200'000'000ULL);

}  // namespace schurdil
