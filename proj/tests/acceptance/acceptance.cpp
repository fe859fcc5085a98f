// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "schurdil/cli.hpp"
#include "schurdil/dilation.hpp"
#include "schurdil/examples.hpp"
#include "schurdil/factorization_search.hpp"
#include "schurdil/json_io.hpp"
#include "schurdil/random.hpp"
#include "schurdil/schur_multiplier.hpp"

using namespace schurdil;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const std::vector<std::vector<int>> kShapes{{1}, {1, 1}, {2}, {2, 1}};

TracialAlgebra random_weighted(const std::vector<int>& blocks, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<double> w(blocks.size());
  double total = 0.0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    w[k] = unif(rng);
    total += w[k] * blocks[k];
  }
  for (auto& x : w) x /= total;
  double check = 0.0;
  for (std::size_t k = 0; k < blocks.size(); ++k) check += w[k] * blocks[k];
  w[0] += (1.0 - check) / blocks[0];
  return TracialAlgebra(blocks, w);
}

TraceRepresentation random_rep(int n, const TracialAlgebra& alg, Rng& rng) {
  std::vector<AlgebraElement> d;
  for (int i = 0; i < n; ++i) {
    std::vector<CMatrix> bl;
    for (int b : alg.blocks()) bl.push_back(random_unitary(b, rng));
    d.emplace_back(alg, std::move(bl));
  }
  return TraceRepresentation(alg, std::move(d));
}

CVector unit_vector(int n, Rng& rng) {
  const CVector v = random_gaussian_vector(n, rng);
  return v / v.norm();
}

// The planted corpus shared by criteria 1 and 9.
struct Planted {
  TraceRepresentation rep;
  int window;
};

std::vector<Planted> planted_corpus() {
  std::vector<Planted> out;
  for (int i = 0; i < 20; ++i) {
    const auto& shape = kShapes[i % 4];
    const int n = 2 + i % 3;
    const int window = 2 + (i / 4) % 3;
    const auto alg = TracialAlgebra::with_uniform_trace(shape);
    out.push_back({planted_representation(n, alg, derive_seed(1001, i)), window});
  }
  return out;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool all = true;
  for (const auto& p : planted_corpus()) {
    const auto sys = DilationSystem::build(p.rep, p.window);
    VerifyOptions opts;
    opts.random_samples = 10;
    const auto report = verify_dilation(sys, p.window, 1e-10, opts);
    worst = std::max(worst, report.max_residual);
    all = all && report.pass && static_cast<int>(report.per_k.size()) == p.window + 1;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {all && worst <= 1e-10 && secs <= 60.0,
          "20 systems, max residual " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome criterion2() {
  Rng rng(2002);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 3;
    const auto alg = random_weighted(kShapes[t % 4], rng);
    const auto rep = random_rep(n, alg, rng);
    const int window = 1 + t % 3;
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(window + 1));
    const auto sys = DilationSystem::build(rep, window);
    const CVector u = unit_vector(n, rng), v = unit_vector(n, rng);
    const CVector a = unit_vector(n, rng), b = unit_vector(n, rng);
    const Complex big = ambient_pairing(sys, k, u, v, a, b);
    const Complex closed = pairing_closed_form(rep, k, u, v, a, b);
    worst = std::max(worst, std::abs(big - closed));
  }
  return {worst <= 1e-10, "100 tuples, max |difference| " + fmt("%.3g", worst)};
}

Outcome criterion3() {
  const auto rep = planted_representation(3, TracialAlgebra::with_uniform_trace({2}), 3003);
  const int window = 2;
  const auto sys = DilationSystem::build(rep, window);
  VerifyOptions opts;
  opts.allow_beyond_window = true;
  const auto report = verify_dilation(sys, window + 1, 1e-10, opts);
  const double inside = std::max({report.per_k[0].max_residual, report.per_k[1].max_residual,
                                  report.per_k[2].max_residual});
  const double beyond = report.per_k[3].max_residual;
  return {inside <= 1e-10 && beyond > 1e-2,
          "M_2, K = 2: residual " + fmt("%.3g", inside) + " for k <= K, " + fmt("%.3g", beyond) +
              " at k = K+1"};
}

Outcome criterion4() {
  bool all = true;
  double worst_search = 0.0;
  double worst_dil = 0.0;
  for (int k = 0; k < 8; ++k) {
    std::ostringstream out, err;
    const int code =
        cli::run({"gen", "omega", "--root", std::to_string(k) + "/8"}, out, err);
    if (code != 0) return {false, "gen omega failed for root " + std::to_string(k) + "/8"};
    const auto phi = io::multiplier_from_json(io::json::parse(out.str()));
    const Complex omega = phi.table()(0, 1);
    const double expected_angle = 2.0 * std::numbers::pi * k / 8;
    all = all && std::abs(omega - std::polar(1.0, expected_angle)) <= 1e-15;
    CMatrix expected(2, 2);
    expected << 1.0, omega, std::conj(omega), 1.0;
    all = all && build_multiplier(omega_representation(omega)).table() == expected;
    all = all && phi.table() == expected;

    SearchConfig cfg;
    cfg.algebra = TracialAlgebra({1}, {1.0});
    cfg.warm_start = false;
    cfg.seed = derive_seed(4004, k);
    const auto res = search(phi, cfg);
    worst_search = std::max(worst_search, res.residual);
    all = all && res.converged && res.residual <= 1e-8;
    const auto sys = DilationSystem::build(res.best_rep, 3);
    const auto report = verify_dilation(sys, 3, 1e-10);
    worst_dil = std::max(worst_dil, report.max_residual);
    all = all && report.pass;
  }
  return {all, "8 roots of unity, tables exact, search residual " + fmt("%.3g", worst_search) +
                   ", dilation residual " + fmt("%.3g", worst_dil)};
}

Outcome criterion5() {
  Rng rng(5005);
  double min_eig = 0.0, diag = 0.0, disk = 0.0;
  bool hermitian = true;
  for (int t = 0; t < 10000; ++t) {
    const int n = 2 + t % 4;
    const auto alg = random_weighted(kShapes[t % 4], rng);
    const CMatrix m = build_multiplier(random_rep(n, alg, rng)).table();
    min_eig = std::min(min_eig, hermitian_eigenvalues(m).minCoeff());
    diag = std::max(diag, (m.diagonal().array() - 1.0).abs().maxCoeff());
    disk = std::max(disk, m.cwiseAbs().maxCoeff());
    hermitian = hermitian && m == m.adjoint();
  }
  return {min_eig >= -1e-10 && diag <= 1e-12 && hermitian && disk <= 1.0 + 1e-12,
          "10^4 reps, min eigenvalue " + fmt("%.3g", min_eig) + ", diagonal error " +
              fmt("%.3g", diag) + ", max |m_ij| " + fmt("%.17g", disk) +
              (hermitian ? ", exactly Hermitian" : ", NOT Hermitian")};
}

Outcome criterion6() {
  std::vector<SchurMultiplier> corpus;
  for (int k = 0; k < 8; ++k) {
    corpus.push_back(build_multiplier(omega_representation(std::polar(1.0, std::numbers::pi * k / 4))));
  }
  corpus.push_back(build_multiplier(allones_representation(3)));
  corpus.push_back(build_multiplier(identity_fourier_representation(3)));
  corpus.push_back(build_multiplier(pauli_representation()));
  for (int i = 0; i < 12; ++i) {
    const auto alg = TracialAlgebra::with_uniform_trace(kShapes[i % 4]);
    corpus.push_back(build_multiplier(planted_representation(2 + i % 3, alg, derive_seed(6006, i))));
  }
  double lo = 1.0, hi = 1.0;
  for (const auto& phi : corpus) {
    const auto nb = norm_bounds(phi);
    lo = std::min(lo, nb.lower);
    hi = std::max(hi, nb.upper);
  }
  bool ok = lo >= 1.0 - 1e-6 && hi <= 1.0 + 1e-6;

  CMatrix flip(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  const auto fb = norm_bounds(SchurMultiplier(flip));
  const double exact = (fb.witness.beta.adjoint() * fb.witness.alpha - flip).norm();
  ok = ok && fb.lower >= 1.0 - 1e-6 && fb.upper <= 1.0 + 1e-6 && exact <= 1e-12;

  Rng rng(6007);
  int agree = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 4;
    CMatrix h = random_hermitian(n, rng);
    if (t % 2 == 0) h = h * h;
    if (t % 5 == 0) {
      // Rank-deficient PSD, close to the boundary.
      const CMatrix g = random_gaussian(n - 1, n, rng);
      h = g.adjoint() * g;
      h = 0.5 * (h + h.adjoint());
    }
    if (cp_check(SchurMultiplier(h)).positive == psd_check(h)) ++agree;
  }
  ok = ok && agree == 1000;
  return {ok, std::to_string(corpus.size()) + " PSD unital tables in [" + fmt("%.9f", lo) + ", " +
                  fmt("%.9f", hi) + "], zero-diagonal table in [" + fmt("%.9f", fb.lower) +
                  ", " + fmt("%.9f", fb.upper) + "], cp/psd agreement " + std::to_string(agree) +
                  "/1000"};
}

Outcome criterion7() {
  Rng rng(7007);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4;
    const Eigen::Index h1 = 1 + static_cast<Eigen::Index>(rng() % 3);
    const Eigen::Index h2 = 1 + static_cast<Eigen::Index>(rng() % 3);
    CMatrix c = CMatrix::Zero(n * h1, n * h2);
    CMatrix d = CMatrix::Zero(n * h2, n * h1);
    for (int s = 0; s < n; ++s) {
      c.block(s * h1, s * h2, h1, h2) = random_gaussian(h1, h2, rng);
      d.block(s * h2, s * h1, h2, h1) = random_gaussian(h2, h1, rng);
    }
    const CVector u = random_gaussian_vector(n, rng), v = random_gaussian_vector(n, rng);
    const CVector a = random_gaussian_vector(n, rng), b = random_gaussian_vector(n, rng);
    worst = std::max(worst, slice_identity_check(n, c, d, u, v, a, b).residual);
  }
  return {worst <= 1e-12, "100 instances, max residual " + fmt("%.3g", worst)};
}

Outcome criterion8() {
  const auto m2 = TracialAlgebra::with_uniform_trace({2});
  int recovered = 0;
  for (int i = 0; i < 50; ++i) {
    const auto rep = planted_representation(3, m2, derive_seed(8008, i));
    SearchConfig cfg;
    cfg.algebra = m2;
    cfg.restarts = 8;
    cfg.seed = derive_seed(8009, i);
    if (search(build_multiplier(rep), cfg).residual <= 1e-6) ++recovered;
  }
  const double rate = recovered / 50.0;

  // n = 2 commutative instances: d_1 = 1 and d_2 with phases on the 360-grid.
  Rng rng(8010);
  double worst = 0.0;
  int instances = 0;
  for (int r = 1; r <= 3; ++r) {
    std::string spec = "1";
    for (int i = 1; i < r; ++i) spec += ",1";
    const auto alg = parse_algebra_spec(spec);
    for (int t = 0; t < 10; ++t) {
      std::vector<CMatrix> blocks;
      for (int k = 0; k < r; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(rng() % 360) / 360.0;
        blocks.push_back(CMatrix::Constant(1, 1, std::polar(1.0, angle)));
      }
      const auto m = build_multiplier(
          TraceRepresentation(alg, {AlgebraElement::unit(alg), AlgebraElement(alg, blocks)}));
      SearchConfig cfg;
      cfg.algebra = alg;
      cfg.seed = derive_seed(8011, instances);
      const double s = search(m, cfg).residual;
      const double b = brute_oracle(m, r, 360).residual;
      worst = std::max(worst, std::abs(s - b));
      ++instances;
    }
  }
  return {rate >= 0.95 && worst <= 1e-6,
          "planted recovery " + std::to_string(recovered) + "/50, brute vs search on " +
              std::to_string(instances) + " instances max gap " + fmt("%.3g", worst)};
}

Outcome criterion9() {
  double worst = 0.0;
  int systems = 0;
  for (const auto& p : planted_corpus()) {
    const auto sys = DilationSystem::build(p.rep, p.window);
    const auto inv = check_invariants(sys, 100, derive_seed(9009, systems));
    worst = std::max({worst, inv.multiplicativity, inv.star, inv.unitality, inv.trace});
    ++systems;
  }
  return {worst <= 1e-10, std::to_string(systems) + " systems x 100 members, max residual " +
                              fmt("%.3g", worst)};
}

Outcome criterion10() {
  const std::vector<std::string> args{"roundtrip", "--n", "3", "--spec", "2,1", "--K", "3",
                                      "--seed", "10010"};
  std::ostringstream a, b, ea, eb;
  const int ca = cli::run(args, a, ea);
  const int cb = cli::run(args, b, eb);
  const bool same = a.str() == b.str();
  return {ca == 0 && cb == 0 && same && !a.str().empty(),
          "two roundtrip runs, " + std::to_string(a.str().size()) + " bytes, " +
              (same ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
