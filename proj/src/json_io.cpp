#include "schurdil/json_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "schurdil/errors.hpp"

namespace schurdil::io {

namespace {

template <typename F>
auto schema_guard(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string(what) + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

}  // namespace

json to_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re.push_back(m(i, k).real());
      im.push_back(m(i, k).imag());
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const json& j) {
  return schema_guard("CMatrix", [&] {
    const auto rows = field(j, "rows", "CMatrix").get<long long>();
    const auto cols = field(j, "cols", "CMatrix").get<long long>();
    const auto& re = field(j, "re", "CMatrix");
    const auto& im = field(j, "im", "CMatrix");
    if (rows <= 0 || cols <= 0) throw ValidationError("CMatrix: rows and cols must be positive");
    if (!re.is_array() || !im.is_array() || static_cast<long long>(re.size()) != rows * cols ||
        static_cast<long long>(im.size()) != rows * cols) {
      throw ValidationError("CMatrix: re/im must hold rows*cols entries");
    }
    CMatrix m(rows, cols);
    for (long long i = 0; i < rows; ++i) {
      for (long long k = 0; k < cols; ++k) {
        const auto idx = static_cast<std::size_t>(i * cols + k);
        m(i, k) = Complex(re[idx].get<double>(), im[idx].get<double>());
      }
    }
    require_finite(m, "CMatrix");
    return m;
  });
}

json vector_to_json(const CVector& v) { return to_json(CMatrix(v)); }

CVector vector_from_json(const json& j) {
  const CMatrix m = matrix_from_json(j);
  if (m.cols() != 1) throw ValidationError("vector: expected a column (cols = 1)");
  return m.col(0);
}

json to_json(const TracialAlgebra& a) {
  return json{{"blocks", a.blocks()}, {"weights", a.weights()}};
}

TracialAlgebra algebra_from_json(const json& j, bool check_normalization) {
  return schema_guard("TracialAlgebra", [&] {
    auto blocks = field(j, "blocks", "TracialAlgebra").get<std::vector<int>>();
    auto weights = field(j, "weights", "TracialAlgebra").get<std::vector<double>>();
    return check_normalization ? TracialAlgebra(std::move(blocks), std::move(weights))
                               : TracialAlgebra::unnormalized(std::move(blocks), std::move(weights));
  });
}

json to_json(const AlgebraElement& x) {
  json blocks = json::array();
  for (const auto& b : x.blocks()) blocks.push_back(to_json(b));
  return json{{"algebra", to_json(x.algebra())}, {"blocks", std::move(blocks)}};
}

AlgebraElement element_from_json(const json& j, bool check_normalization) {
  return schema_guard("AlgebraElement", [&] {
    TracialAlgebra alg = algebra_from_json(field(j, "algebra", "AlgebraElement"), check_normalization);
    std::vector<CMatrix> blocks;
    const auto& arr = field(j, "blocks", "AlgebraElement");
    if (!arr.is_array()) throw ValidationError("AlgebraElement: blocks must be an array");
    for (const auto& b : arr) blocks.push_back(matrix_from_json(b));
    return AlgebraElement(std::move(alg), std::move(blocks));
  });
}

json to_json(const SchurMultiplier& phi) {
  return json{{"n", phi.n()}, {"m", to_json(phi.table())}};
}

SchurMultiplier multiplier_from_json(const json& j) {
  return schema_guard("SchurMultiplier", [&] {
    const int n = field(j, "n", "SchurMultiplier").get<int>();
    CMatrix m = matrix_from_json(field(j, "m", "SchurMultiplier"));
    if (m.rows() != n || m.cols() != n) {
      throw ValidationError("SchurMultiplier: table shape does not match n");
    }
    return SchurMultiplier(std::move(m));
  });
}

json to_json(const TraceRepresentation& rep) {
  json d = json::array();
  for (const auto& x : rep.unitaries()) d.push_back(to_json(x));
  return json{{"algebra", to_json(rep.algebra())}, {"d", std::move(d)}};
}

TraceRepresentation representation_from_json(const json& j, bool check_normalization) {
  return schema_guard("TraceRepresentation", [&] {
    TracialAlgebra alg =
        algebra_from_json(field(j, "algebra", "TraceRepresentation"), check_normalization);
    const auto& arr = field(j, "d", "TraceRepresentation");
    if (!arr.is_array()) throw ValidationError("TraceRepresentation: d must be an array");
    std::vector<AlgebraElement> d;
    for (const auto& x : arr) d.push_back(element_from_json(x, check_normalization));
    return TraceRepresentation(std::move(alg), std::move(d));
  });
}

json to_json(const SearchResult& r) {
  return json{{"best_rep", to_json(r.best_rep)},
              {"spec", format_algebra_spec(r.best_rep.algebra())},
              {"residual", r.residual},
              {"converged", r.converged},
              {"best_restart", r.best_restart},
              {"restart_residuals", r.restart_residuals},
              {"restart_traces", r.restart_traces},
              {"max_unitarity_residual", r.max_unitarity_residual}};
}

TraceRepresentation representation_from_any(const json& j) {
  if (j.is_object() && j.contains("best_rep")) return representation_from_json(j.at("best_rep"));
  if (j.is_object() && j.contains("rep")) return representation_from_json(j.at("rep"));
  // roundtrip report: the recovered representation
  if (j.is_object() && j.contains("search")) return representation_from_any(j.at("search"));
  return representation_from_json(j);
}

json to_json(const DilationReport& r) {
  json per_k = json::array();
  for (const auto& k : r.per_k) {
    per_k.push_back(json{{"k", k.k},
                         {"max_residual", k.max_residual},
                         {"pass", k.pass},
                         {"within_window", k.within_window}});
  }
  return json{{"per_k", std::move(per_k)},
              {"max_residual", r.max_residual},
              {"pass", r.pass},
              {"observables", r.observables}};
}

json to_json(const InvariantReport& r) {
  return json{{"unitarity", r.unitarity},   {"membership", r.membership},
              {"multiplicativity", r.multiplicativity}, {"star", r.star},
              {"unitality", r.unitality},   {"trace", r.trace},
              {"samples", r.samples}};
}

json to_json(const MultiplierFlags& f) {
  return json{{"unital_diag", f.unital_diag}, {"psd", f.psd}, {"real", f.real}};
}

json to_json(const ValidationReport& r) {
  return json{{"unitarity_residuals", r.unitarity_residuals},
              {"failing_indices", r.failing_indices},
              {"normalization_residual", r.normalization_residual},
              {"normalization_ok", r.normalization_ok},
              {"flags", to_json(r.flags)},
              {"valid", r.valid}};
}

json to_json(const CpCheckResult& r) {
  json out{{"positive", r.positive},
           {"min_eigenvalue", r.min_eigenvalue},
           {"hermitian_residual", r.hermitian_residual}};
  if (r.positive) out["witness"] = to_json(r.witness);
  if (!r.diagnostic.empty()) out["diagnostic"] = r.diagnostic;
  return out;
}

json to_json(const NormBounds& r) {
  return json{{"lower", r.lower},
              {"upper", r.upper},
              {"bisection_steps", r.bisection_steps},
              {"witness",
               json{{"alpha", to_json(r.witness.alpha)},
                    {"beta", to_json(r.witness.beta)},
                    {"bound", r.witness.bound}}}};
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

void write_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << dump(j);
  if (!out) throw IoError("failed writing " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace schurdil::io
