#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "schurdil/dilation.hpp"
#include "schurdil/factorization_search.hpp"
#include "schurdil/schur_multiplier.hpp"
#include "schurdil/trace_representation.hpp"
#include "schurdil/tracial_algebra.hpp"

namespace schurdil::io {

using nlohmann::json;

// CMatrix: {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.
json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

// Complex vector stored as an n x 1 CMatrix.
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

// {"blocks": [...], "weights": [...]}
json to_json(const TracialAlgebra& a);
/// With `check_normalization` false the trace normalization is not enforced
/// (used by `rep validate`, which reports it instead).
TracialAlgebra algebra_from_json(const json& j, bool check_normalization = true);

// {"algebra": ..., "blocks": [CMatrix, ...]}
json to_json(const AlgebraElement& x);
AlgebraElement element_from_json(const json& j, bool check_normalization = true);

// {"n": n, "m": CMatrix}
json to_json(const SchurMultiplier& phi);
SchurMultiplier multiplier_from_json(const json& j);

// {"algebra": ..., "d": [AlgebraElement, ...]}
json to_json(const TraceRepresentation& rep);
TraceRepresentation representation_from_json(const json& j, bool check_normalization = true);

json to_json(const SearchResult& r);
/// Reads the best representation out of a serialized SearchResult or roundtrip
/// report, or accepts a bare representation.
TraceRepresentation representation_from_any(const json& j);

json to_json(const DilationReport& r);
json to_json(const InvariantReport& r);
json to_json(const ValidationReport& r);
json to_json(const CpCheckResult& r);
json to_json(const NormBounds& r);
json to_json(const MultiplierFlags& f);

/// Reads and parses a JSON file; IoError on read failure, ValidationError on
/// malformed JSON.
json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const json& j);

/// Canonical text form: 2-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace schurdil::io
