#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "dce/symplectic.hpp"
#include "dce/types.hpp"

namespace dce {

using Json = nlohmann::json;

// Deterministic, locale-independent number formatting: scientific notation
// with 17 significant digits, enough to round-trip any double exactly.
std::string format_double(Real v);

// Complex matrix <-> JSON as {"rows": R, "cols": C, "re": [...], "im": [...]}
// in row-major order.  Round-trips exactly (JSON carries shortest-exact
// decimal forms).
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// Transform <-> JSON: {"alpha": ..., "beta": ...}.
Json transform_to_json(const BogoliubovTransform& t);
BogoliubovTransform transform_from_json(const Json& j);

// Whole-file helpers; throw io_error on filesystem problems and
// validation_error on malformed content.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

// Per-mode mean particle numbers as CSV with header "mode,mean_particles".
std::string spectrum_csv(const BogoliubovTransform& t);

}  // namespace dce
