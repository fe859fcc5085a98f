#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

#include "schurdil/linalg.hpp"

namespace schurdil {

/// Structural flags of a multiplier table, evaluated at tolerance kDefaultPsdTol.
struct MultiplierFlags {
  bool unital_diag = false;  // |m_ii - 1| <= tol for all i
  bool psd = false;          // Hermitian and min eigenvalue >= -tol
  bool real = false;         // ||Im m||_F <= tol
};

/// Schur (Hadamard) multiplier T_m on M_n.
///
/// Index convention: m(s, t) multiplies the entry in row s, column t, so that
/// T_m(A)(s, t) = m(s, t) * A(s, t). With rank1(u, v)(s, t) = v_s u_t this
/// gives tr(T_m(rank1(u, v)) rank1(a, b)) = sum_{s,t} m(s,t) u_t v_s a_s b_t.
class SchurMultiplier {
 public:
  explicit SchurMultiplier(CMatrix table);

  int n() const { return static_cast<int>(table_.rows()); }
  const CMatrix& table() const { return table_; }

  /// Flags are computed on first use and cached; concurrent first calls are
  /// serialized by std::call_once.
  const MultiplierFlags& flags() const;

 private:
  struct FlagCache {
    std::once_flag once;
    MultiplierFlags flags;
  };

  CMatrix table_;
  std::shared_ptr<FlagCache> cache_;
};

/// rank1(u, v)(s, t) = v_s u_t, the operator h -> (sum_t u_t h_t) v.
CMatrix rank1(const CVector& u, const CVector& v);

/// Entrywise product m(s,t) * a(s,t).
CMatrix schur_apply(const SchurMultiplier& phi, const CMatrix& a);

/// T_m^k as a multiplier: the entrywise k-th power of the table.
SchurMultiplier schur_power(const SchurMultiplier& phi, int k);

/// sum_{s,t} m(s,t) u_t v_s a_s b_t.
Complex pairing(const SchurMultiplier& phi, const CVector& u, const CVector& v, const CVector& a,
                const CVector& b);

struct CpCheckResult {
  bool positive = false;
  /// r x n; column t is the Gram vector alpha_t with m(s,t) = <alpha_t, alpha_s>
  /// = alpha_s^* alpha_t. Empty when positive is false.
  CMatrix witness;
  double min_eigenvalue = 0.0;
  double hermitian_residual = 0.0;
  std::string diagnostic;
};

/// Complete positivity test for T_m: holds iff the table is PSD. The witness
/// is built from an eigendecomposition; eigenvalues at or below tol (relative to
/// max(1, largest eigenvalue)) are dropped, so it has the numerical rank of m.
CpCheckResult cp_check(const SchurMultiplier& phi, double tol = kDefaultPsdTol);

/// Factorization m(s,t) = <alpha_t, beta_s> = beta_s^* alpha_t.
struct GramFactorization {
  CMatrix alpha;  // r x n, column t is alpha_t
  CMatrix beta;   // r x n, column s is beta_s
  /// max_t ||alpha_t|| * max_s ||beta_s||
  double bound = 0.0;
};

/// Turns an approximate factorization (alpha, beta) of m into an exact one by
/// appending a correction for m - beta^* alpha, after balancing the column
/// norms. The returned bound is an upper bound for the cb-norm of T_m.
GramFactorization certify_factorization(const CMatrix& m, const CMatrix& alpha,
                                        const CMatrix& beta);

struct NormBoundsOptions {
  int max_bisection = 40;
  double bisection_tol = 1e-9;
  int dykstra_max_iters = 2000;
  double dykstra_tol = 1e-10;
  int random_probes = 8;
  std::uint64_t seed = 0x5eed;
};

struct NormBounds {
  double lower = 0.0;
  double upper = 0.0;
  GramFactorization witness;
  int bisection_steps = 0;
};

/// Bracket for the (completely bounded) norm of T_m. The lower bound is the
/// best ratio ||T_m(a)|| / ||a|| over a fixed set of probes; the upper bound is
/// the bound of an explicit Gram factorization found by bisection over the
/// PSD-completion feasibility problem
///   exists PSD [[X, m], [m^*, Y]] with diag X <= C, diag Y <= C,
/// solved with Dykstra's alternating projections.
NormBounds norm_bounds(const SchurMultiplier& phi, const NormBoundsOptions& opts = {});

/// One feasibility solve at level C. Returns the final PSD iterate and the
/// distance between the two alternating sequences.
struct CompletionResult {
  CMatrix psd_point;
  double residual = 0.0;
  int iterations = 0;
};
CompletionResult psd_completion(const CMatrix& m, double level, int max_iters, double tol);

}  // namespace schurdil
