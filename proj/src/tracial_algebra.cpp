#include "schurdil/tracial_algebra.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "schurdil/errors.hpp"

namespace schurdil {

namespace {

void check_shape(const std::vector<int>& blocks, const std::vector<double>& weights) {
  if (blocks.empty()) throw ValidationError("TracialAlgebra: at least one block required");
  if (blocks.size() != weights.size()) {
    throw ValidationError("TracialAlgebra: blocks and weights differ in length");
  }
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k] <= 0) {
      throw ValidationError("TracialAlgebra: block " + std::to_string(k) +
                            " has non-positive size");
    }
    if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
      throw ValidationError("TracialAlgebra: weight " + std::to_string(k) +
                            " is not strictly positive (trace would not be faithful)");
    }
  }
}

}  // namespace

TracialAlgebra::TracialAlgebra(Unchecked, std::vector<int> blocks, std::vector<double> weights)
    : blocks_(std::move(blocks)), weights_(std::move(weights)) {
  check_shape(blocks_, weights_);
  offsets_.reserve(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    offsets_.push_back(embedding_dim_);
    embedding_dim_ += blocks_[k];
  }
  position_block_.resize(static_cast<std::size_t>(embedding_dim_));
  slot_weights_.resize(embedding_dim_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    for (int p = 0; p < blocks_[k]; ++p) {
      position_block_[static_cast<std::size_t>(offsets_[k] + p)] = static_cast<int>(k);
      slot_weights_(offsets_[k] + p) = weights_[k];
    }
  }
}

TracialAlgebra::TracialAlgebra(std::vector<int> blocks, std::vector<double> weights)
    : TracialAlgebra(Unchecked{}, std::move(blocks), std::move(weights)) {
  const double r = normalization_residual();
  if (!(r <= kNormalizationTol)) {
    throw ValidationError("TracialAlgebra: weights do not normalize the trace (|tau(1) - 1| = " +
                          std::to_string(r) + ")");
  }
}

TracialAlgebra TracialAlgebra::with_uniform_trace(std::vector<int> blocks) {
  int total = 0;
  for (int b : blocks) total += b;
  if (total <= 0) throw ValidationError("TracialAlgebra: at least one block required");
  std::vector<double> weights(blocks.size(), 1.0 / total);
  return TracialAlgebra(std::move(blocks), std::move(weights));
}

TracialAlgebra TracialAlgebra::unnormalized(std::vector<int> blocks, std::vector<double> weights) {
  return TracialAlgebra(Unchecked{}, std::move(blocks), std::move(weights));
}

double TracialAlgebra::normalization_residual() const {
  double total = 0.0;
  for (std::size_t k = 0; k < blocks_.size(); ++k) total += weights_[k] * blocks_[k];
  return std::abs(total - 1.0);
}

AlgebraElement::AlgebraElement(TracialAlgebra algebra, std::vector<CMatrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (blocks_.size() != algebra_.block_count()) {
    throw ValidationError("AlgebraElement: expected " + std::to_string(algebra_.block_count()) +
                          " blocks, got " + std::to_string(blocks_.size()));
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int m = algebra_.blocks()[k];
    if (blocks_[k].rows() != m || blocks_[k].cols() != m) {
      throw ValidationError("AlgebraElement: block " + std::to_string(k) + " must be " +
                            std::to_string(m) + "x" + std::to_string(m));
    }
    require_finite(blocks_[k], "AlgebraElement");
  }
}

AlgebraElement AlgebraElement::unit(const TracialAlgebra& algebra) {
  std::vector<CMatrix> blocks;
  for (int m : algebra.blocks()) blocks.push_back(CMatrix::Identity(m, m));
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::zero(const TracialAlgebra& algebra) {
  std::vector<CMatrix> blocks;
  for (int m : algebra.blocks()) blocks.push_back(CMatrix::Zero(m, m));
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::from_embedded(const TracialAlgebra& algebra, const CMatrix& x) {
  const int dim = algebra.embedding_dim();
  if (x.rows() != dim || x.cols() != dim) {
    throw ValidationError("AlgebraElement::from_embedded: shape mismatch");
  }
  std::vector<CMatrix> blocks;
  for (std::size_t k = 0; k < algebra.block_count(); ++k) {
    const int off = algebra.block_offset(k);
    const int m = algebra.blocks()[k];
    blocks.push_back(x.block(off, off, m, m));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.adjoint());
  return AlgebraElement(algebra_, std::move(out));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& other) const {
  if (!(algebra_.blocks() == other.algebra_.blocks())) {
    throw ValidationError("AlgebraElement: product of elements from different algebras");
  }
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.push_back(blocks_[k] * other.blocks_[k]);
  return AlgebraElement(algebra_, std::move(out));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
  if (!(algebra_.blocks() == other.algebra_.blocks())) {
    throw ValidationError("AlgebraElement: sum of elements from different algebras");
  }
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.push_back(blocks_[k] + other.blocks_[k]);
  return AlgebraElement(algebra_, std::move(out));
}

AlgebraElement AlgebraElement::operator*(Complex scalar) const {
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(scalar * b);
  return AlgebraElement(algebra_, std::move(out));
}

Complex trace(const AlgebraElement& x) {
  Complex total = 0.0;
  const auto& w = x.algebra().weights();
  for (std::size_t k = 0; k < x.blocks().size(); ++k) total += w[k] * x.block(k).trace();
  return total;
}

CMatrix embed(const AlgebraElement& x) {
  const auto& alg = x.algebra();
  CMatrix out = CMatrix::Zero(alg.embedding_dim(), alg.embedding_dim());
  for (std::size_t k = 0; k < alg.block_count(); ++k) {
    const int off = alg.block_offset(k);
    const int m = alg.blocks()[k];
    out.block(off, off, m, m) = x.block(k);
  }
  return out;
}

double unitarity_residual(const AlgebraElement& x) { return unitarity_residual(embed(x)); }

namespace {

Eigen::Index ambient_dim(int n, const TracialAlgebra& algebra, int window) {
  if (n <= 0 || window < 0) throw ValidationError("ambient dimension: n and window must be positive");
  return n * checked_power(algebra.embedding_dim(), window);
}

void require_ambient(const CMatrix& y, int n, const TracialAlgebra& algebra, int window,
                     const char* what) {
  const Eigen::Index dim = ambient_dim(n, algebra, window);
  if (y.rows() != dim || y.cols() != dim) {
    throw ValidationError(std::string(what) + ": expected a square matrix of size " +
                          std::to_string(dim) + ", got " + std::to_string(y.rows()) + "x" +
                          std::to_string(y.cols()));
  }
}

// Block label tuple of each multi-index, packed so that two indices lie in the
// same block in every slot iff their keys agree.
std::vector<Eigen::Index> block_keys(const TracialAlgebra& algebra, int window) {
  const Eigen::Index dim = checked_power(algebra.embedding_dim(), window);
  const auto& pos = algebra.position_block();
  const Eigen::Index nb = static_cast<Eigen::Index>(algebra.block_count());
  const int m = algebra.embedding_dim();
  std::vector<Eigen::Index> keys(static_cast<std::size_t>(dim));
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index rest = idx;
    Eigen::Index key = 0;
    Eigen::Index scale = 1;
    for (int s = 0; s < window; ++s) {
      key += scale * pos[static_cast<std::size_t>(rest % m)];
      rest /= m;
      scale *= nb;
    }
    keys[static_cast<std::size_t>(idx)] = key;
  }
  return keys;
}

}  // namespace

CMatrix project_to_subalgebra(const CMatrix& y, int n, const TracialAlgebra& algebra, int window) {
  require_ambient(y, n, algebra, window, "project_to_subalgebra");
  if (algebra.is_factor()) return y;
  const auto keys = block_keys(algebra, window);
  const Eigen::Index inner = static_cast<Eigen::Index>(keys.size());
  CMatrix out = y;
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    const Eigen::Index kc = keys[static_cast<std::size_t>(c % inner)];
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      if (keys[static_cast<std::size_t>(r % inner)] != kc) out(r, c) = 0.0;
    }
  }
  return out;
}

double membership_residual(const CMatrix& y, int n, const TracialAlgebra& algebra, int window) {
  return (y - project_to_subalgebra(y, n, algebra, window)).norm();
}

RVector tensor_power_weights(const TracialAlgebra& algebra, int window) {
  const Eigen::Index dim = checked_power(algebra.embedding_dim(), window);
  const RVector& w = algebra.slot_weights();
  RVector out = RVector::Ones(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index rest = idx;
    double prod = 1.0;
    for (int s = 0; s < window; ++s) {
      prod *= w(rest % algebra.embedding_dim());
      rest /= algebra.embedding_dim();
    }
    out(idx) = prod;
  }
  return out;
}

CMatrix cond_expectation(const CMatrix& y, int n, const TracialAlgebra& algebra, int window,
                         double tol) {
  require_ambient(y, n, algebra, window, "cond_expectation");
  if (!algebra.is_factor()) {
    const double r = membership_residual(y, n, algebra, window);
    if (!(r <= tol)) {
      throw ValidationError("cond_expectation: input is not in M_n (x) N^(x)" +
                            std::to_string(window) + " (off-block norm " + std::to_string(r) +
                            " > tol " + std::to_string(tol) + ")");
    }
  }
  const RVector w = tensor_power_weights(algebra, window);
  const Eigen::Index inner = w.size();
  CMatrix out = CMatrix::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      Complex acc = 0.0;
      for (Eigen::Index i = 0; i < inner; ++i) acc += w(i) * y(s * inner + i, t * inner + i);
      out(s, t) = acc;
    }
  }
  return out;
}

Complex ambient_trace(const CMatrix& y, int n, const TracialAlgebra& algebra, int window) {
  require_ambient(y, n, algebra, window, "ambient_trace");
  const RVector w = tensor_power_weights(algebra, window);
  const Eigen::Index inner = w.size();
  Complex acc = 0.0;
  for (int s = 0; s < n; ++s) {
    for (Eigen::Index i = 0; i < inner; ++i) acc += w(i) * y(s * inner + i, s * inner + i);
  }
  return acc;
}

}  // namespace schurdil
