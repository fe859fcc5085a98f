#include "schurdil/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "schurdil/dilation.hpp"
#include "schurdil/errors.hpp"
#include "schurdil/examples.hpp"
#include "schurdil/factorization_search.hpp"
#include "schurdil/json_io.hpp"
#include "schurdil/random.hpp"

namespace schurdil::cli {

namespace {

using io::json;

// Raised after an artifact has been written when the run itself failed to
// converge; maps to kNonConvergence.
struct NotConverged {
  std::string message;
};

void emit(const json& j, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << io::dump(j);
  } else {
    io::write_file(output, j);
  }
}

Eigen::Index dim_cap(std::optional<long long> flag) {
  if (flag) {
    if (*flag <= 0) throw ValidationError("--dim-cap must be positive");
    return *flag;
  }
  if (const char* env = std::getenv(kDimCapEnv)) {
    try {
      const long long v = std::stoll(env);
      if (v <= 0) throw ValidationError("");
      return v;
    } catch (...) {
      throw ValidationError(std::string(kDimCapEnv) + " must be a positive integer");
    }
  }
  return kDefaultDimCap;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw ValidationError(std::string(name) + " must be positive");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

// Loads a representation and checks it (the library's hot paths do not).
TraceRepresentation load_rep(const std::string& path) {
  TraceRepresentation rep = io::representation_from_any(io::read_file(path));
  require_valid(rep);
  return rep;
}

void print_summary(const DilationReport& report, int window, std::ostream& err) {
  err << "# dilation check, window K = " << window << ", " << report.observables
      << " observables\n";
  for (const auto& k : report.per_k) {
    err << "#   k = " << k.k << "  max residual " << std::scientific << std::setprecision(3)
        << k.max_residual << std::defaultfloat << (k.pass ? "  PASS" : "  FAIL")
        << (k.within_window ? "" : "  (beyond window)") << "\n";
  }
  err << "# overall: " << (report.pass ? "PASS" : "FAIL") << "\n";
}

struct Options {
  std::string output;
  // gen
  std::string gen_kind;
  std::string omega = "i";
  std::optional<std::string> root;
  int n = 3;
  std::string spec = "2";
  std::uint64_t seed = 42;
  bool emit_rep = false;
  // files
  std::string input;
  std::string input2;
  // search
  int restarts = 8;
  int max_iters = 500;
  double step_size = 1.0;
  double target = 1e-8;
  bool ladder = false;
  // dilation
  std::optional<int> window;
  std::optional<int> kmax;
  int k = 1;
  double tol = 1e-10;
  int samples = 10;
  bool with_unitary = false;
  bool beyond_window = false;
  std::optional<long long> dim_cap;
  std::string vectors;
  // schur norm
  int max_bisection = 40;
  int dykstra_iters = 2000;
  // roundtrip
  std::string roundtrip_input;
};

int cmd_gen(const Options& o, std::ostream& out) {
  TraceRepresentation rep = [&] {
    if (o.gen_kind == "omega") {
      Complex omega;
      if (o.root) {
        const auto slash = o.root->find('/');
        if (slash == std::string::npos) throw ValidationError("--root expects k/N");
        const int k = std::stoi(o.root->substr(0, slash));
        const int nn = std::stoi(o.root->substr(slash + 1));
        if (nn <= 0) throw ValidationError("--root: N must be positive");
        omega = std::polar(1.0, 2.0 * std::numbers::pi * (k % nn) / nn);
      } else {
        omega = parse_complex(o.omega);
      }
      return omega_representation(omega);
    }
    if (o.gen_kind == "allones") return allones_representation(o.n);
    if (o.gen_kind == "identity-fourier") return identity_fourier_representation(o.n);
    if (o.gen_kind == "pauli") return pauli_representation();
    if (o.gen_kind == "planted") {
      return planted_representation(o.n, parse_algebra_spec(o.spec), o.seed);
    }
    throw ValidationError("gen: unknown example '" + o.gen_kind + "'");
  }();
  emit(o.emit_rep ? io::to_json(rep) : io::to_json(build_multiplier(rep)), o.output, out);
  return kOk;
}

SearchConfig search_config(const Options& o) {
  SearchConfig cfg;
  cfg.algebra = parse_algebra_spec(o.spec);
  cfg.restarts = o.restarts;
  cfg.max_iters = o.max_iters;
  cfg.step_size = o.step_size;
  cfg.seed = o.seed;
  cfg.target_residual = o.target;
  require_positive(cfg.target_residual, "--target");
  return cfg;
}

int cmd_search(const Options& o, std::ostream& out, std::ostream& err) {
  const SchurMultiplier m = io::multiplier_from_json(io::read_file(o.input));
  const SearchConfig cfg = search_config(o);
  SearchResult res = o.ladder ? search_ladder(m, default_ladder(), cfg).result : search(m, cfg);
  emit(io::to_json(res), o.output, out);
  err << "# search over spec " << format_algebra_spec(res.best_rep.algebra()) << ": residual "
      << std::scientific << res.residual << std::defaultfloat
      << (res.converged ? " (converged)" : " (no witness found at this spec)") << "\n";
  if (!res.converged) throw NotConverged{"search did not reach the target residual"};
  return kOk;
}

// Accepts a `dilate build` artifact (rep + K) or a bare representation plus --K.
std::pair<TraceRepresentation, int> load_dilation_input(const Options& o) {
  const json j = io::read_file(o.input);
  TraceRepresentation rep = io::representation_from_any(j);
  require_valid(rep);
  int window = 0;
  if (o.window) {
    window = *o.window;
  } else if (j.is_object() && j.contains("K")) {
    window = j.at("K").get<int>();
  } else {
    throw ValidationError("window size missing: pass --K or a `dilate build` artifact");
  }
  return {std::move(rep), window};
}

int cmd_dilate_build(const Options& o, std::ostream& out, std::ostream& err) {
  auto [rep, window] = load_dilation_input(o);
  const DilationSystem sys = DilationSystem::build(rep, window, dim_cap(o.dim_cap));
  const InvariantReport inv = check_invariants(sys, o.samples, o.seed);
  json j{{"n", sys.n()},
         {"K", sys.window()},
         {"dim", sys.dim()},
         {"spec", format_algebra_spec(sys.algebra())},
         {"rep", io::to_json(sys.rep())},
         {"multiplier", io::to_json(sys.multiplier())},
         {"invariants", io::to_json(inv)}};
  if (o.with_unitary) j["V"] = io::to_json(sys.implementing_unitary());
  emit(j, o.output, out);
  err << "# built dilation: dim " << sys.dim() << ", unitarity residual " << std::scientific
      << inv.unitarity << std::defaultfloat << "\n";
  const double worst = std::max({inv.unitarity, inv.membership, inv.multiplicativity, inv.star,
                                 inv.unitality, inv.trace});
  if (!(worst <= o.tol)) {
    throw ValidationError("dilation invariants exceed tolerance (worst " + std::to_string(worst) +
                          ")");
  }
  return kOk;
}

json verify_json(const DilationSystem& sys, const DilationReport& report) {
  json reports = json::array();
  for (const auto& k : report.per_k) {
    reports.push_back(json{{"k", k.k}, {"max_residual", k.max_residual}, {"pass", k.pass}});
  }
  return json{{"K", sys.window()},
              {"n", sys.n()},
              {"dim", sys.dim()},
              {"reports", std::move(reports)},
              {"max_residual", report.max_residual},
              {"pass", report.pass}};
}

int cmd_dilate_verify(const Options& o, std::ostream& out, std::ostream& err) {
  auto [rep, window] = load_dilation_input(o);
  require_positive(o.tol, "--tol");
  const int kmax = o.kmax.value_or(window);
  if (kmax > window && !o.beyond_window) {
    throw ValidationError("window exceeded: --kmax " + std::to_string(kmax) + " > K " +
                          std::to_string(window) +
                          "; the dilation identity is only certified for k <= K");
  }
  const DilationSystem sys = DilationSystem::build(rep, window, dim_cap(o.dim_cap));
  VerifyOptions vo;
  vo.random_samples = o.samples;
  vo.seed = o.seed;
  vo.allow_beyond_window = o.beyond_window;
  const DilationReport report = verify_dilation(sys, kmax, o.tol, vo);
  emit(verify_json(sys, report), o.output, out);
  print_summary(report, window, err);
  return report.pass ? kOk : kValidation;
}

int cmd_dilate_pair(const Options& o, std::ostream& out, std::ostream&) {
  auto [rep, window] = load_dilation_input(o);
  if (o.k < 0) throw ValidationError("--k must be non-negative");
  const DilationSystem sys = DilationSystem::build(rep, window, dim_cap(o.dim_cap));
  CVector u, v, a, b;
  if (!o.vectors.empty()) {
    const json j = io::read_file(o.vectors);
    for (auto [name, dst] : {std::pair{"u", &u}, {"v", &v}, {"a", &a}, {"b", &b}}) {
      if (!j.contains(name)) throw ValidationError(std::string("vectors file lacks \"") + name + "\"");
      *dst = io::vector_from_json(j.at(name));
    }
  } else {
    Rng rng(o.seed);
    u = random_gaussian_vector(sys.n(), rng);
    v = random_gaussian_vector(sys.n(), rng);
    a = random_gaussian_vector(sys.n(), rng);
    b = random_gaussian_vector(sys.n(), rng);
  }
  const Complex ambient = ambient_pairing(sys, o.k, u, v, a, b);
  const Complex closed = pairing_closed_form(sys.rep(), o.k, u, v, a, b);
  emit(json{{"k", o.k},
            {"K", window},
            {"within_window", o.k <= window},
            {"ambient", complex_to_json(ambient)},
            {"closed_form", complex_to_json(closed)},
            {"difference", std::abs(ambient - closed)}},
       o.output, out);
  return kOk;
}

int cmd_schur_apply(const Options& o, std::ostream& out) {
  const SchurMultiplier m = io::multiplier_from_json(io::read_file(o.input));
  const CMatrix a = io::matrix_from_json(io::read_file(o.input2));
  emit(io::to_json(schur_apply(m, a)), o.output, out);
  return kOk;
}

int cmd_schur_norm(const Options& o, std::ostream& out) {
  const SchurMultiplier m = io::multiplier_from_json(io::read_file(o.input));
  NormBoundsOptions opts;
  opts.seed = o.seed;
  opts.max_bisection = o.max_bisection;
  opts.dykstra_max_iters = o.dykstra_iters;
  emit(io::to_json(norm_bounds(m, opts)), o.output, out);
  return kOk;
}

int cmd_schur_cp_check(const Options& o, std::ostream& out) {
  const SchurMultiplier m = io::multiplier_from_json(io::read_file(o.input));
  require_positive(o.tol, "--tol");
  emit(io::to_json(cp_check(m, o.tol)), o.output, out);
  return kOk;
}

int cmd_rep_build(const Options& o, std::ostream& out) {
  emit(io::to_json(build_multiplier(load_rep(o.input))), o.output, out);
  return kOk;
}

int cmd_rep_validate(const Options& o, std::ostream& out) {
  const TraceRepresentation rep =
      io::representation_from_json(io::read_file(o.input), /*check_normalization=*/false);
  require_positive(o.tol, "--tol");
  const ValidationReport report = validate(rep, o.tol);
  emit(io::to_json(report), o.output, out);
  return report.valid ? kOk : kValidation;
}

int cmd_rep_gauge(const Options& o, std::ostream& out) {
  emit(io::to_json(gauge_normalize(load_rep(o.input))), o.output, out);
  return kOk;
}

int cmd_roundtrip(const Options& o, std::ostream& out, std::ostream& err) {
  if (!o.window || *o.window < 1) throw ValidationError("roundtrip: --K must be at least 1");
  require_positive(o.tol, "--tol");
  const int window = *o.window;
  SearchConfig cfg = search_config(o);
  json report;
  SchurMultiplier m = [&] {
    if (!o.roundtrip_input.empty()) {
      report["source"] = "file";
      return io::multiplier_from_json(io::read_file(o.roundtrip_input));
    }
    const TraceRepresentation planted = planted_representation(o.n, cfg.algebra, o.seed);
    report["source"] = "planted";
    report["planted_rep"] = io::to_json(planted);
    return build_multiplier(planted);
  }();
  report["n"] = m.n();
  report["spec"] = format_algebra_spec(cfg.algebra);
  report["K"] = window;
  report["seed"] = o.seed;
  report["multiplier"] = io::to_json(m);

  const SearchResult res = search(m, cfg);
  report["search"] = io::to_json(res);
  if (!res.converged) {
    report["pass"] = false;
    emit(report, o.output, out);
    throw NotConverged{"roundtrip: search did not converge (residual " +
                       std::to_string(res.residual) + ")"};
  }

  const DilationSystem sys = DilationSystem::build(res.best_rep, window, dim_cap(o.dim_cap));
  VerifyOptions vo;
  vo.random_samples = o.samples;
  vo.seed = o.seed;
  const DilationReport dil = verify_dilation(sys, window, o.tol, vo);
  report["dilation"] = verify_json(sys, dil);
  report["pass"] = dil.pass;
  emit(report, o.output, out);
  print_summary(dil, window, err);
  if (!dil.pass) throw ValidationError("roundtrip: dilation residuals exceed --tol");
  return kOk;
}

void write_error(std::ostream& err, int code, const char* kind, const std::string& message) {
  err << json{{"schema", kErrorSchema}, {"exit_code", code}, {"kind", kind}, {"message", message}}
             .dump()
      << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schur multipliers, trace-form representations and their absolute dilations",
               "schurdil"};
  app.require_subcommand(1);
  Options o;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", o.output, "Write the JSON artifact to this file");
  };

  auto* gen = app.add_subcommand("gen", "Emit a named example multiplier (or its representation)");
  gen->add_option("kind", o.gen_kind, "omega | allones | identity-fourier | pauli | planted")
      ->required()
      ->check(CLI::IsMember({"omega", "allones", "identity-fourier", "pauli", "planted"}));
  gen->add_option("--omega", o.omega, "Unit complex number, e.g. i or 0.6+0.8i");
  gen->add_option("--root", o.root, "Root of unity exp(2 pi i k/N) given as k/N");
  gen->add_option("--n", o.n, "Size n");
  gen->add_option("--spec", o.spec, "Algebra shape for planted, e.g. 2 or 2,1");
  gen->add_option("--seed", o.seed, "Seed for planted");
  gen->add_flag("--rep", o.emit_rep, "Emit the generating representation instead");
  add_output(gen);

  auto* rep = app.add_subcommand("rep", "Trace representations");
  rep->require_subcommand(1);
  auto* rep_build = rep->add_subcommand("build-multiplier", "m_ij = tau(d_i^* d_j)");
  auto* rep_validate = rep->add_subcommand("validate", "Unitarity and normalization report");
  auto* rep_gauge = rep->add_subcommand("gauge", "Replace d_k by d_1^* d_k");
  for (auto* c : {rep_build, rep_validate, rep_gauge}) {
    c->add_option("input", o.input, "Representation JSON")->required();
    add_output(c);
  }
  rep_validate->add_option("--tol", o.tol, "Unitarity tolerance");

  auto* srch = app.add_subcommand("search", "Search for a trace representation of a multiplier");
  srch->add_option("input", o.input, "Multiplier JSON")->required();
  srch->add_option("--spec", o.spec, "Algebra shape, e.g. 1 | 1,1 | 2 | 2,1");
  srch->add_option("--restarts", o.restarts, "Number of restarts")->check(CLI::PositiveNumber);
  srch->add_option("--seed", o.seed, "Seed");
  srch->add_option("--target", o.target, "Target Frobenius residual");
  srch->add_option("--max-iters", o.max_iters, "Iterations per restart")->check(CLI::PositiveNumber);
  srch->add_option("--step-size", o.step_size, "Initial step along the retraction");
  srch->add_flag("--ladder", o.ladder, "Escalate C -> C^2 -> M_2 -> M_2+C -> M_3 until success");
  add_output(srch);

  auto* dil = app.add_subcommand("dilate", "Finite-window absolute dilation");
  dil->require_subcommand(1);
  auto* dil_build = dil->add_subcommand("build", "Build the dilation and check its invariants");
  auto* dil_verify = dil->add_subcommand("verify", "Check T^k = E U^k J for k <= kmax");
  auto* dil_pair = dil->add_subcommand("pair", "Ambient pairing versus the closed form");
  for (auto* c : {dil_build, dil_verify, dil_pair}) {
    c->add_option("input", o.input, "Representation, search result or dilation artifact")
        ->required();
    c->add_option("--K", o.window, "Window size");
    c->add_option("--dim-cap", o.dim_cap, "Cap on n*M^K (default 4096 or $SCHURDIL_DIM_CAP)");
    c->add_option("--seed", o.seed, "Seed for random samples");
    add_output(c);
  }
  dil_build->add_option("--samples", o.samples, "Random members for invariant checks");
  dil_build->add_option("--tol", o.tol, "Tolerance on invariant residuals");
  dil_build->add_flag("--with-unitary", o.with_unitary, "Include the implementing unitary V");
  dil_verify->add_option("--kmax", o.kmax, "Largest power checked (default K)");
  dil_verify->add_option("--tol", o.tol, "Residual tolerance");
  dil_verify->add_option("--samples", o.samples, "Random observables besides matrix units");
  dil_verify->add_flag("--beyond-window", o.beyond_window,
                       "Allow kmax > K (residuals past the window are not certified)");
  dil_pair->add_option("--k", o.k, "Power k");
  dil_pair->add_option("--vectors", o.vectors, "JSON with u, v, a, b (random if omitted)");

  auto* schur = app.add_subcommand("schur", "Schur multiplier operations");
  schur->require_subcommand(1);
  auto* s_apply = schur->add_subcommand("apply", "Entrywise product with a matrix");
  auto* s_norm = schur->add_subcommand("norm", "Lower/upper bounds on the multiplier norm");
  auto* s_cp = schur->add_subcommand("cp-check", "Complete positivity with Gram witness");
  for (auto* c : {s_apply, s_norm, s_cp}) {
    c->add_option("multiplier", o.input, "Multiplier JSON")->required();
    add_output(c);
  }
  s_apply->add_option("matrix", o.input2, "Matrix JSON")->required();
  s_norm->add_option("--seed", o.seed, "Seed for random probes");
  s_norm->add_option("--max-bisection", o.max_bisection, "Bisection steps");
  s_norm->add_option("--dykstra-iters", o.dykstra_iters, "Alternating projection iterations");
  s_cp->add_option("--tol", o.tol, "Eigenvalue tolerance");

  auto* rt = app.add_subcommand("roundtrip",
                                "planted rep -> multiplier -> search -> dilation -> verify");
  rt->add_option("--n", o.n, "Size n");
  rt->add_option("--spec", o.spec, "Algebra shape for planting and searching");
  rt->add_option("--K", o.window, "Window size")->required();
  rt->add_option("--seed", o.seed, "Seed");
  rt->add_option("--restarts", o.restarts, "Search restarts")->check(CLI::PositiveNumber);
  rt->add_option("--target", o.target, "Search target residual");
  rt->add_option("--tol", o.tol, "Dilation residual tolerance");
  rt->add_option("--samples", o.samples, "Random observables besides matrix units");
  rt->add_option("--input", o.roundtrip_input, "Start from this multiplier instead of planting");
  rt->add_option("--dim-cap", o.dim_cap, "Cap on n*M^K");
  add_output(rt);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, kValidation, "usage", e.what());
    return kValidation;
  }

  try {
    if (*gen) return cmd_gen(o, out);
    if (*rep_build) return cmd_rep_build(o, out);
    if (*rep_validate) return cmd_rep_validate(o, out);
    if (*rep_gauge) return cmd_rep_gauge(o, out);
    if (*srch) return cmd_search(o, out, err);
    if (*dil_build) return cmd_dilate_build(o, out, err);
    if (*dil_verify) return cmd_dilate_verify(o, out, err);
    if (*dil_pair) return cmd_dilate_pair(o, out, err);
    if (*s_apply) return cmd_schur_apply(o, out);
    if (*s_norm) return cmd_schur_norm(o, out);
    if (*s_cp) return cmd_schur_cp_check(o, out);
    if (*rt) return cmd_roundtrip(o, out, err);
  } catch (const NotConverged& e) {
    write_error(err, kNonConvergence, "non-convergence", e.message);
    return kNonConvergence;
  } catch (const ConvergenceError& e) {
    write_error(err, kNonConvergence, "non-convergence", e.what());
    return kNonConvergence;
  } catch (const IoError& e) {
    write_error(err, kIo, "io", e.what());
    return kIo;
  } catch (const ValidationError& e) {
    write_error(err, kValidation, "validation", e.what());
    return kValidation;
  } catch (const std::invalid_argument& e) {
    write_error(err, kValidation, "validation", e.what());
    return kValidation;
  } catch (const std::out_of_range& e) {
    write_error(err, kValidation, "validation", e.what());
    return kValidation;
  }
  write_error(err, kValidation, "usage", "no command given");
  return kValidation;
}

}  // namespace schurdil::cli
