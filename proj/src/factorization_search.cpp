#include "schurdil/factorization_search.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "parallel.hpp"
#include "schurdil/errors.hpp"
#include "schurdil/random.hpp"

namespace schurdil {

TracialAlgebra parse_algebra_spec(std::string_view spec) {
  std::vector<int> blocks;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    std::string_view tok = spec.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || value <= 0) {
      throw ValidationError("algebra spec '" + std::string(spec) +
                            "': expected comma-separated positive block sizes such as \"2,1\"");
    }
    blocks.push_back(value);
    pos = comma + 1;
  }
  return TracialAlgebra::with_uniform_trace(std::move(blocks));
}

std::string format_algebra_spec(const TracialAlgebra& algebra) {
  std::ostringstream out;
  for (std::size_t k = 0; k < algebra.block_count(); ++k) {
    if (k) out << ',';
    out << algebra.blocks()[k];
  }
  return out.str();
}

ScreenResult screen_multiplier(const SchurMultiplier& m, double tol) {
  ScreenResult out;
  const CMatrix& t = m.table();
  double diag_dev = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) diag_dev = std::max(diag_dev, std::abs(t(i, i) - 1.0));
  if (diag_dev > tol) {
    out.failures.push_back("non-unit diagonal: max |m_ii - 1| = " + std::to_string(diag_dev));
  }
  const double herm = hermitian_residual(t);
  if (herm > tol) {
    out.failures.push_back("not Hermitian: ||m - m*||_F = " + std::to_string(herm));
  } else {
    const double min_eig = hermitian_eigenvalues(t).minCoeff();
    if (min_eig < -tol) {
      out.failures.push_back("not positive semidefinite: min eigenvalue = " +
                             std::to_string(min_eig));
    }
  }
  const double max_abs = t.cwiseAbs().maxCoeff();
  if (max_abs > 1.0 + tol) {
    out.failures.push_back("entry outside the unit disk: max |m_ij| = " + std::to_string(max_abs));
  }
  out.ok = out.failures.empty();
  return out;
}

double loss(const SchurMultiplier& m, const TraceRepresentation& rep) {
  if (m.n() != rep.n()) throw ValidationError("loss: multiplier and representation sizes differ");
  return (m.table() - build_multiplier(rep).table()).squaredNorm();
}

std::vector<AlgebraElement> riemannian_gradient(const SchurMultiplier& m,
                                                const TraceRepresentation& rep) {
  if (m.n() != rep.n()) {
    throw ValidationError("riemannian_gradient: multiplier and representation sizes differ");
  }
  const CMatrix r = build_multiplier(rep).table() - m.table();
  const auto& alg = rep.algebra();
  std::vector<AlgebraElement> grad;
  grad.reserve(static_cast<std::size_t>(rep.n()));
  for (int p = 0; p < rep.n(); ++p) {
    std::vector<CMatrix> blocks;
    for (std::size_t k = 0; k < alg.block_count(); ++k) {
      const CMatrix& dp = rep.unitary(static_cast<std::size_t>(p)).block(k);
      CMatrix y = CMatrix::Zero(dp.rows(), dp.cols());
      for (int j = 0; j < rep.n(); ++j) {
        y += r(p, j) * dp * rep.unitary(static_cast<std::size_t>(j)).block(k).adjoint();
      }
      blocks.push_back(-2.0 * alg.weights()[k] * (y - y.adjoint()));
    }
    grad.emplace_back(alg, std::move(blocks));
  }
  return grad;
}

CMatrix cayley(const CMatrix& skew) {
  require_square(skew, "cayley");
  const CMatrix id = CMatrix::Identity(skew.rows(), skew.cols());
  Eigen::PartialPivLU<CMatrix> lu(id - 0.5 * skew);
  return lu.solve(id + 0.5 * skew);
}

namespace {

bool cayley_denominator_ok(const CMatrix& skew) {
  const CMatrix id = CMatrix::Identity(skew.rows(), skew.cols());
  Eigen::JacobiSVD<CMatrix> svd(id - 0.5 * skew);
  const auto& sv = svd.singularValues();
  return sv.size() == 0 || sv(sv.size() - 1) > 1e-12 * sv(0);
}

}  // namespace

TraceRepresentation riemannian_step(const TraceRepresentation& rep,
                                    const std::vector<AlgebraElement>& direction,
                                    double step_size) {
  if (direction.size() != rep.unitaries().size()) {
    throw ValidationError("riemannian_step: one direction per unitary required");
  }
  const auto& alg = rep.algebra();
  double eta = step_size;
  for (int attempt = 0; attempt <= 30; ++attempt, eta *= 0.5) {
    bool ok = true;
    std::vector<AlgebraElement> next;
    next.reserve(direction.size());
    for (std::size_t i = 0; i < direction.size() && ok; ++i) {
      std::vector<CMatrix> blocks;
      for (std::size_t k = 0; k < alg.block_count(); ++k) {
        const CMatrix a = -eta * direction[i].block(k);
        if (!cayley_denominator_ok(a)) {
          ok = false;
          break;
        }
        blocks.push_back(cayley(a) * rep.unitary(i).block(k));
      }
      if (ok) next.emplace_back(alg, std::move(blocks));
    }
    if (ok) return TraceRepresentation(alg, std::move(next));
  }
  throw ConvergenceError("riemannian_step: Cayley denominator singular after 30 step halvings");
}

namespace {

// Real basis of the skew-Hermitian m x m matrices.
struct SkewBasisElement {
  int a = 0;
  int b = 0;
  enum Kind { kRealAntisym, kImagSym, kImagDiag } kind = kImagDiag;
};

std::vector<SkewBasisElement> skew_basis(int m) {
  std::vector<SkewBasisElement> out;
  for (int a = 0; a < m; ++a) {
    out.push_back({a, a, SkewBasisElement::kImagDiag});
    for (int b = a + 1; b < m; ++b) {
      out.push_back({a, b, SkewBasisElement::kRealAntisym});
      out.push_back({a, b, SkewBasisElement::kImagSym});
    }
  }
  return out;
}

CMatrix basis_matrix(const SkewBasisElement& e, int m) {
  CMatrix out = CMatrix::Zero(m, m);
  const Complex i(0.0, 1.0);
  switch (e.kind) {
    case SkewBasisElement::kImagDiag:
      out(e.a, e.a) = i;
      break;
    case SkewBasisElement::kRealAntisym:
      out(e.a, e.b) = 1.0;
      out(e.b, e.a) = -1.0;
      break;
    case SkewBasisElement::kImagSym:
      out(e.a, e.b) = i;
      out(e.b, e.a) = i;
      break;
  }
  return out;
}

// Tr(B z) for a basis element B.
Complex basis_trace(const SkewBasisElement& e, const CMatrix& z) {
  const Complex i(0.0, 1.0);
  switch (e.kind) {
    case SkewBasisElement::kImagDiag:
      return i * z(e.a, e.a);
    case SkewBasisElement::kRealAntisym:
      return z(e.b, e.a) - z(e.a, e.b);
    case SkewBasisElement::kImagSym:
      return i * (z(e.b, e.a) + z(e.a, e.b));
  }
  return 0.0;
}

struct Parameter {
  int p = 0;          // unitary index (>= 1; d_1 is pinned)
  std::size_t k = 0;  // block
  SkewBasisElement e;
};

class GaussNewtonModel {
 public:
  GaussNewtonModel(const SchurMultiplier& m, const TracialAlgebra& alg)
      : m_(m), alg_(alg), n_(m.n()) {
    for (int p = 1; p < n_; ++p) {
      for (std::size_t k = 0; k < alg.block_count(); ++k) {
        for (const auto& e : skew_basis(alg.blocks()[k])) params_.push_back({p, k, e});
      }
    }
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) pairs_.emplace_back(i, j);
    }
  }

  std::size_t parameter_count() const { return params_.size(); }

  // Residual vector sqrt(2) [Re, Im](G - m)_ij over i < j.
  Eigen::VectorXd residual(const CMatrix& g) const {
    Eigen::VectorXd r(2 * static_cast<Eigen::Index>(pairs_.size()));
    for (std::size_t q = 0; q < pairs_.size(); ++q) {
      const auto [i, j] = pairs_[q];
      const Complex d = g(i, j) - m_.table()(i, j);
      r(2 * static_cast<Eigen::Index>(q)) = std::numbers::sqrt2 * d.real();
      r(2 * static_cast<Eigen::Index>(q) + 1) = std::numbers::sqrt2 * d.imag();
    }
    return r;
  }

  Eigen::MatrixXd jacobian(const TraceRepresentation& rep) const {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * static_cast<Eigen::Index>(pairs_.size()),
                                                static_cast<Eigen::Index>(params_.size()));
    // z_{k}(x, y) = d_y d_x^* in block k, so that Tr(d_x^* B d_y) = Tr(B z).
    for (std::size_t c = 0; c < params_.size(); ++c) {
      const Parameter& prm = params_[c];
      const double w = alg_.weights()[prm.k];
      const CMatrix& dp = rep.unitary(static_cast<std::size_t>(prm.p)).block(prm.k);
      for (std::size_t q = 0; q < pairs_.size(); ++q) {
        const auto [i, j] = pairs_[q];
        Complex dg = 0.0;
        if (i == prm.p) {
          const CMatrix& dj = rep.unitary(static_cast<std::size_t>(j)).block(prm.k);
          dg = -w * basis_trace(prm.e, dj * dp.adjoint());
        } else if (j == prm.p) {
          const CMatrix& di = rep.unitary(static_cast<std::size_t>(i)).block(prm.k);
          dg = w * basis_trace(prm.e, dp * di.adjoint());
        } else {
          continue;
        }
        jac(2 * static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(c)) =
            std::numbers::sqrt2 * dg.real();
        jac(2 * static_cast<Eigen::Index>(q) + 1, static_cast<Eigen::Index>(c)) =
            std::numbers::sqrt2 * dg.imag();
      }
    }
    return jac;
  }

  // Packs a parameter step into per-unitary directions for riemannian_step,
  // which moves along cayley(-eta * direction).
  std::vector<AlgebraElement> direction(const Eigen::VectorXd& delta) const {
    std::vector<AlgebraElement> dir;
    for (int p = 0; p < n_; ++p) dir.push_back(AlgebraElement::zero(alg_));
    std::vector<std::vector<CMatrix>> blocks(static_cast<std::size_t>(n_));
    for (int p = 0; p < n_; ++p) blocks[static_cast<std::size_t>(p)] = dir[static_cast<std::size_t>(p)].blocks();
    for (std::size_t c = 0; c < params_.size(); ++c) {
      const Parameter& prm = params_[c];
      blocks[static_cast<std::size_t>(prm.p)][prm.k] -=
          delta(static_cast<Eigen::Index>(c)) * basis_matrix(prm.e, alg_.blocks()[prm.k]);
    }
    for (int p = 0; p < n_; ++p) {
      dir[static_cast<std::size_t>(p)] = AlgebraElement(alg_, std::move(blocks[static_cast<std::size_t>(p)]));
    }
    return dir;
  }

 private:
  const SchurMultiplier& m_;
  const TracialAlgebra& alg_;
  int n_;
  std::vector<Parameter> params_;
  std::vector<std::pair<int, int>> pairs_;
};

double max_unitarity(const TraceRepresentation& rep) {
  double worst = 0.0;
  for (const auto& d : rep.unitaries()) worst = std::max(worst, unitarity_residual(d));
  return worst;
}

TraceRepresentation initial_point(const SchurMultiplier& m, const TracialAlgebra& alg,
                                  bool warm, std::uint64_t seed) {
  std::vector<AlgebraElement> d;
  d.push_back(AlgebraElement::unit(alg));
  Rng rng(seed);
  for (int j = 1; j < m.n(); ++j) {
    if (warm) {
      const Complex z = m.table()(0, j);
      const Complex phase = std::abs(z) > 0.0 ? z / std::abs(z) : Complex(1.0);
      d.push_back(AlgebraElement::unit(alg) * phase);
    } else {
      std::vector<CMatrix> blocks;
      for (int b : alg.blocks()) blocks.push_back(random_unitary(b, rng));
      d.emplace_back(alg, std::move(blocks));
    }
  }
  return TraceRepresentation(alg, std::move(d));
}

struct RestartOutcome {
  std::optional<TraceRepresentation> rep;
  double residual = 0.0;
  std::vector<double> trace;
  double max_unitarity = 0.0;
};

RestartOutcome run_restart(const SchurMultiplier& m, const SearchConfig& cfg,
                           TraceRepresentation rep) {
  const GaussNewtonModel model(m, cfg.algebra);
  RestartOutcome out;
  double current = loss(m, rep);
  out.trace.push_back(std::sqrt(current));
  out.max_unitarity = max_unitarity(rep);
  const double stop = cfg.target_residual * 1e-3;
  double damping = 1e-2;
  const auto np = static_cast<Eigen::Index>(model.parameter_count());
  for (int iter = 0; iter < cfg.max_iters && np > 0; ++iter) {
    if (std::sqrt(current) <= stop) break;
    const CMatrix g = build_multiplier(rep).table();
    const Eigen::VectorXd r = model.residual(g);
    const Eigen::MatrixXd jac = model.jacobian(rep);
    const Eigen::VectorXd grad = 2.0 * jac.transpose() * r;
    if (grad.norm() < 1e-300) break;
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    Eigen::MatrixXd lhs = normal;
    lhs.diagonal().array() += damping;
    const Eigen::VectorXd delta = lhs.ldlt().solve(-jac.transpose() * r);
    const double slope = grad.dot(delta);
    if (!(slope < 0.0)) {
      damping *= 10.0;
      if (damping > 1e12) break;
      continue;
    }
    const auto dir = model.direction(delta);
    double eta = cfg.step_size;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, eta *= 0.5) {
      TraceRepresentation cand = riemannian_step(rep, dir, eta);
      const double cand_loss = loss(m, cand);
      if (cand_loss <= current + 1e-4 * eta * slope) {
        rep = std::move(cand);
        current = cand_loss;
        accepted = true;
        break;
      }
    }
    if (accepted) {
      damping = eta == cfg.step_size ? std::max(damping / 3.0, 1e-15) : damping * 2.0;
      out.trace.push_back(std::sqrt(current));
      out.max_unitarity = std::max(out.max_unitarity, max_unitarity(rep));
    } else {
      damping *= 10.0;
      if (damping > 1e12) break;
    }
  }
  out.residual = std::sqrt(current);
  out.rep = std::move(rep);
  return out;
}

}  // namespace

SearchResult search(const SchurMultiplier& m, const SearchConfig& cfg) {
  if (cfg.restarts < 1) throw ValidationError("search: restarts must be at least 1");
  if (!(cfg.target_residual > 0.0)) throw ValidationError("search: target residual must be positive");
  if (cfg.max_iters < 1) throw ValidationError("search: max_iters must be at least 1");
  if (!(cfg.step_size > 0.0)) throw ValidationError("search: step size must be positive");
  const ScreenResult screen = screen_multiplier(m);
  if (!screen.ok) {
    std::string msg = "search: multiplier fails necessary conditions for a trace representation:";
    for (const auto& f : screen.failures) msg += " [" + f + "]";
    throw ValidationError(msg);
  }

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  detail::parallel_for(outcomes.size(), [&](std::size_t r) {
    const bool warm = cfg.warm_start && r == 0;
    outcomes[r] = run_restart(m, cfg, initial_point(m, cfg.algebra, warm, derive_seed(cfg.seed, r)));
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].residual < outcomes[best].residual) best = r;
  }
  SearchResult result{*outcomes[best].rep, 0.0, false, 0, {}, {}, 0.0};
  result.best_restart = static_cast<int>(best);
  for (auto& o : outcomes) {
    result.restart_residuals.push_back(o.residual);
    result.restart_traces.push_back(std::move(o.trace));
    result.max_unitarity_residual = std::max(result.max_unitarity_residual, o.max_unitarity);
  }
  result.residual = frobenius_distance(m.table(), build_multiplier(result.best_rep).table());
  result.converged = result.residual <= cfg.target_residual;
  return result;
}

std::vector<TracialAlgebra> default_ladder() {
  return {TracialAlgebra::with_uniform_trace({1}), TracialAlgebra::with_uniform_trace({1, 1}),
          TracialAlgebra::with_uniform_trace({2}), TracialAlgebra::with_uniform_trace({2, 1}),
          TracialAlgebra::with_uniform_trace({3})};
}

LadderResult search_ladder(const SchurMultiplier& m, const std::vector<TracialAlgebra>& ladder,
                           SearchConfig cfg) {
  if (ladder.empty()) throw ValidationError("search_ladder: empty ladder");
  for (std::size_t rung = 0; rung < ladder.size(); ++rung) {
    cfg.algebra = ladder[rung];
    SearchResult res = search(m, cfg);
    if (res.converged || rung + 1 == ladder.size()) return {std::move(res), rung};
  }
  throw ValidationError("search_ladder: unreachable");
}

BruteResult brute_oracle(const SchurMultiplier& m, int r, int grid,
                         std::uint64_t max_evaluations) {
  const int n = m.n();
  if (n > 3) throw DimensionError("brute_oracle: n must be at most 3");
  if (r < 1 || r > 3) throw DimensionError("brute_oracle: r must be between 1 and 3");
  if (grid < 1) throw ValidationError("brute_oracle: grid must be positive");
  const ScreenResult screen = screen_multiplier(m);
  if (!screen.ok) {
    std::string msg = "brute_oracle: multiplier fails necessary conditions:";
    for (const auto& f : screen.failures) msg += " [" + f + "]";
    throw ValidationError(msg);
  }
  const int slots = r * (n - 1);
  std::uint64_t total = 1;
  for (int s = 0; s < slots; ++s) {
    if (total > max_evaluations / static_cast<std::uint64_t>(grid)) {
      throw DimensionError("brute_oracle: grid^(r(n-1)) exceeds the evaluation cap");
    }
    total *= static_cast<std::uint64_t>(grid);
  }

  std::vector<Complex> roots(static_cast<std::size_t>(grid));
  for (int g = 0; g < grid; ++g) roots[static_cast<std::size_t>(g)] = std::polar(1.0, 2.0 * std::numbers::pi * g / grid);

  const CMatrix& t = m.table();
  double diag_loss = 0.0;
  for (int i = 0; i < n; ++i) diag_loss += std::norm(t(i, i) - 1.0);
  const double inv_r = 1.0 / r;

  std::vector<int> idx(static_cast<std::size_t>(slots), 0);
  std::vector<int> best_idx = idx;
  double best = std::numeric_limits<double>::infinity();
  // phase of d_{i+1} in coordinate k is roots[idx[(i)*r + k]].
  auto phase = [&](int unitary, int k) -> Complex {
    if (unitary == 0) return 1.0;
    return roots[static_cast<std::size_t>(idx[static_cast<std::size_t>((unitary - 1) * r + k)])];
  };
  for (std::uint64_t eval = 0; eval < total; ++eval) {
    double l = diag_loss;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Complex g = 0.0;
        for (int k = 0; k < r; ++k) g += std::conj(phase(i, k)) * phase(j, k);
        g *= inv_r;
        l += std::norm(g - t(i, j)) + std::norm(std::conj(g) - t(j, i));
      }
    }
    if (l < best) {
      best = l;
      best_idx = idx;
    }
    for (int s = slots - 1; s >= 0; --s) {
      if (++idx[static_cast<std::size_t>(s)] < grid) break;
      idx[static_cast<std::size_t>(s)] = 0;
    }
  }

  const TracialAlgebra alg = TracialAlgebra::with_uniform_trace(std::vector<int>(static_cast<std::size_t>(r), 1));
  std::vector<AlgebraElement> d;
  idx = best_idx;
  for (int i = 0; i < n; ++i) {
    std::vector<CMatrix> blocks;
    for (int k = 0; k < r; ++k) blocks.push_back(CMatrix::Constant(1, 1, phase(i, k)));
    d.emplace_back(alg, std::move(blocks));
  }
  BruteResult out{std::sqrt(best), TraceRepresentation(alg, std::move(d)), total};
  return out;
}

}  // namespace schurdil
