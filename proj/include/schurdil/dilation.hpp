#pragma once

#include <cstdint>
#include <vector>

#include "schurdil/schur_multiplier.hpp"
#include "schurdil/trace_representation.hpp"

namespace schurdil {

inline constexpr Eigen::Index kDefaultDimCap = 4096;

/// Absolute dilation of T_m, m = build_multiplier(rep), on a K-slot window.
///
/// The ambient algebra is M_n (x) N^(x)K inside M_{n M^K}; basis index of the
/// ambient space is s * M^K + (a_1 M^(K-1) + ... + a_K), slot 1 most
/// significant. U = Ad(V), U(y) = V y V^*, with V = D^* (I_n (x) P), where
/// D = sum_i E_ii (x) d_i (x) I and P rotates slots 1 -> 2 -> ... -> K -> 1.
/// For k <= K,
///   U^k(E_ij (x) 1) = E_ij (x) (d_i^* d_j)^(x)k (x) 1^(x)(K-k).
class DilationSystem {
 public:
  static DilationSystem build(const TraceRepresentation& rep, int window,
                              Eigen::Index dim_cap = kDefaultDimCap);

  int n() const { return n_; }
  int window() const { return window_; }
  /// Embedding dimension M of N.
  int slot_dim() const { return slot_dim_; }
  /// M^K.
  Eigen::Index inner_dim() const { return inner_dim_; }
  /// n M^K.
  Eigen::Index dim() const { return n_ * inner_dim_; }

  const TraceRepresentation& rep() const { return rep_; }
  const SchurMultiplier& multiplier() const { return multiplier_; }
  const TracialAlgebra& algebra() const { return rep_.algebra(); }

  /// The implementing unitary V.
  const CMatrix& implementing_unitary() const { return v_; }

  /// J(z) = z (x) 1.
  CMatrix embed_J(const CMatrix& z) const;

  /// U^k(y) = V^k y V^(*k), applied slot-wise without forming V^k.
  CMatrix step(const CMatrix& y, int k) const;

  /// Same as step() but through dense products with V.
  CMatrix step_dense(const CMatrix& y, int k) const;

  /// E: M_n (x) N^(x)K -> M_n.
  CMatrix expectation(const CMatrix& y, double tol = kDefaultMembershipTol) const;

  /// tr (x) tau^(x)K.
  Complex ambient_trace(const CMatrix& y) const;

  /// Random element of M_n (x) N^(x)K (Gaussian entries, off-block zeroed).
  CMatrix random_member(std::uint64_t seed) const;

 private:
  DilationSystem(TraceRepresentation rep, int window);

  CMatrix apply_once(const CMatrix& y) const;
  CMatrix shift(const CMatrix& y) const;

  TraceRepresentation rep_;
  SchurMultiplier multiplier_;
  int n_ = 0;
  int window_ = 0;
  int slot_dim_ = 0;
  Eigen::Index inner_dim_ = 0;
  std::vector<CMatrix> embedded_d_;
  std::vector<Eigen::Index> shift_perm_;  // P|b> = |shift_perm_[b]>
  CMatrix v_;
};

struct VerifyOptions {
  int random_samples = 10;
  std::uint64_t seed = 1;
  /// Permit k_max > K (anti-tests). Otherwise exceeding the window throws.
  bool allow_beyond_window = false;
};

struct KResidual {
  int k = 0;
  double max_residual = 0.0;
  bool pass = false;
  bool within_window = true;
};

struct DilationReport {
  std::vector<KResidual> per_k;
  double max_residual = 0.0;
  bool pass = false;
  int observables = 0;
};

/// For each k <= k_max and each z among all matrix units and `random_samples`
/// Gaussian matrices, r_k(z) = ||E U^k J(z) - T_m^k(z)||_F.
DilationReport verify_dilation(const DilationSystem& sys, int k_max, double tol,
                               const VerifyOptions& opts = {});

/// sum_{i,j} a_i b_j u_j v_i tau(d_i^* d_j)^k, straight from the representation.
Complex pairing_closed_form(const TraceRepresentation& rep, int k, const CVector& u,
                            const CVector& v, const CVector& a, const CVector& b);

/// (tr (x) tau^(x)K)(U^k(J(rank1(u,v))) J(rank1(a,b))).
Complex ambient_pairing(const DilationSystem& sys, int k, const CVector& u, const CVector& v,
                        const CVector& a, const CVector& b);

struct InvariantReport {
  double unitarity = 0.0;        // ||V^*V - I|| style residual
  double membership = 0.0;       // max off-block norm of U(generator)
  double multiplicativity = 0.0; // max ||U(xy) - U(x)U(y)||_F
  double star = 0.0;             // max ||U(x^*) - U(x)^*||_F
  double unitality = 0.0;        // ||U(1) - 1||_F
  double trace = 0.0;            // max |tr(U(x)) - tr(x)|
  int samples = 0;
};

/// Checks that Ad(V) is a trace preserving *-automorphism of the ambient
/// algebra on `samples` random members and on generators.
InvariantReport check_invariants(const DilationSystem& sys, int samples, std::uint64_t seed);

struct SliceResult {
  CMatrix lhs;
  CMatrix rhs;
  double residual = 0.0;
};

/// Both sides of the slice identity
///   [(a (x) b) (x) I](C (rank1(u,v) (x) I_H2) D)
///     = [(av (x) bu) (x) I]((1_t (x) C_s)(1_s (x) D_t))
/// for C = diag(C_s) (n h1 x n h2) and D = diag(D_s) (n h2 x n h1). The left
/// side is evaluated on l2_n (x) H, the right side on l_inf_n (x) l_inf_n (x) H.
SliceResult slice_identity_check(int n, const CMatrix& c, const CMatrix& d, const CVector& u,
                                 const CVector& v, const CVector& a, const CVector& b);

}  // namespace schurdil
