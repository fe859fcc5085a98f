#pragma once

#include <cstddef>
#include <vector>

#include "schurdil/linalg.hpp"

namespace schurdil {

inline constexpr double kNormalizationTol = 1e-12;
inline constexpr double kDefaultMembershipTol = 1e-10;

/// Finite-dimensional tracial algebra N = M_{m_1} (+) ... (+) M_{m_r} with the
/// normalized trace tau(x) = sum_k weight_k * Tr(x_k).
///
/// The algebra is embedded block-diagonally in M_M with M = sum_k m_k.
class TracialAlgebra {
 public:
  /// Validating constructor: sizes positive, weights strictly positive,
  /// sum_k weight_k * m_k = 1 to kNormalizationTol.
  TracialAlgebra(std::vector<int> blocks, std::vector<double> weights);

  /// Blocks with weights proportional to nothing but the normalization,
  /// i.e. weight_k = 1 / sum_j m_j (the normalized trace of M_M restricted).
  static TracialAlgebra with_uniform_trace(std::vector<int> blocks);

  /// Skips the normalization check only, so that validation reports can
  /// inspect a badly weighted algebra. Sizes and positivity are still checked.
  static TracialAlgebra unnormalized(std::vector<int> blocks, std::vector<double> weights);

  const std::vector<int>& blocks() const { return blocks_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t block_count() const { return blocks_.size(); }

  /// Total embedding dimension M = sum_k m_k.
  int embedding_dim() const { return embedding_dim_; }

  /// Offset of block k on the diagonal of M_M.
  int block_offset(std::size_t k) const { return offsets_[k]; }

  /// Block label of each diagonal position 0..M-1.
  const std::vector<int>& position_block() const { return position_block_; }

  /// Weight vector of length M: weight_k repeated m_k times.
  const RVector& slot_weights() const { return slot_weights_; }

  /// |sum_k weight_k m_k - 1|.
  double normalization_residual() const;

  /// True when the algebra is a single full matrix factor.
  bool is_factor() const { return blocks_.size() == 1; }

  friend bool operator==(const TracialAlgebra& a, const TracialAlgebra& b) {
    return a.blocks_ == b.blocks_ && a.weights_ == b.weights_;
  }

 private:
  struct Unchecked {};
  TracialAlgebra(Unchecked, std::vector<int> blocks, std::vector<double> weights);

  std::vector<int> blocks_;
  std::vector<double> weights_;
  std::vector<int> offsets_;
  std::vector<int> position_block_;
  RVector slot_weights_;
  int embedding_dim_ = 0;
};

/// An element of a TracialAlgebra, stored block by block.
class AlgebraElement {
 public:
  AlgebraElement(TracialAlgebra algebra, std::vector<CMatrix> blocks);

  static AlgebraElement unit(const TracialAlgebra& algebra);
  static AlgebraElement zero(const TracialAlgebra& algebra);
  /// Inverse of embed(): reads the diagonal blocks of a block-diagonal M x M
  /// matrix. Off-block entries are ignored.
  static AlgebraElement from_embedded(const TracialAlgebra& algebra, const CMatrix& x);

  const TracialAlgebra& algebra() const { return algebra_; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }
  const CMatrix& block(std::size_t k) const { return blocks_[k]; }

  AlgebraElement adjoint() const;
  AlgebraElement operator*(const AlgebraElement& other) const;
  AlgebraElement operator+(const AlgebraElement& other) const;
  AlgebraElement operator*(Complex scalar) const;

 private:
  TracialAlgebra algebra_;
  std::vector<CMatrix> blocks_;
};

/// tau(x) = sum_k weight_k Tr(x_k).
Complex trace(const AlgebraElement& x);

/// Block-diagonal M x M matrix of x; a unital *-homomorphism.
CMatrix embed(const AlgebraElement& x);

/// Residual max_k ||x_k^* x_k - I|| style unitarity of the embedded element.
double unitarity_residual(const AlgebraElement& x);

/// Distance ||y - P(y)||_F where P zeroes every entry of y (size n * M^window)
/// whose row and column indices fall into different blocks of N in some slot.
double membership_residual(const CMatrix& y, int n, const TracialAlgebra& algebra,
                           int window);

/// P(y) from membership_residual.
CMatrix project_to_subalgebra(const CMatrix& y, int n, const TracialAlgebra& algebra,
                              int window);

/// Weight of a multi-index over `window` slots, i.e. prod_j w(i_j) with w the
/// slot weight vector; indices are ordered slot 1 most significant.
RVector tensor_power_weights(const TracialAlgebra& algebra, int window);

/// Conditional expectation E: M_n (x) N^{(x)window} -> M_n,
/// E(x (x) w_1 (x) ... (x) w_K) = (prod_j tau(w_j)) x, computed as a weighted
/// partial trace. Throws ValidationError on shape mismatch or if y is farther
/// than `tol` from the subalgebra.
CMatrix cond_expectation(const CMatrix& y, int n, const TracialAlgebra& algebra, int window,
                         double tol = kDefaultMembershipTol);

/// The trace tr (x) tau^{(x)window} on M_n (x) N^{(x)window}; equals tr(E(y)).
Complex ambient_trace(const CMatrix& y, int n, const TracialAlgebra& algebra, int window);

}  // namespace schurdil
