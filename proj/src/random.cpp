#include "schurdil/random.hpp"

#include <cmath>

namespace schurdil {

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  std::uint64_t z = parent + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix out(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

CVector random_gaussian_vector(Eigen::Index n, Rng& rng) { return random_gaussian(n, 1, rng); }

CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

CMatrix random_psd(Eigen::Index n, Rng& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  return g * g.adjoint();
}

}  // namespace schurdil
