#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cvf/fields.hpp"
#include "cvf/pairings.hpp"
#include "cvf/solvers.hpp"
#include "cvf/sphere.hpp"

namespace cvf::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Readers. All schemas are strict: unknown keys raise ParseError.
// ---------------------------------------------------------------------------

/// {"rows": n, "cols": n, "data": [row-major numbers]}
Matrix matrix_from_json(const json& j);

/// Flat array of numbers.
Vector vector_from_json(const json& j);

/// {"p": "1"|"2"|"inf", "weight": matrix?, "metric": matrix? (p = 2 only)}
NormSpec norm_from_json(const json& j);

/// {"kind": "affine", "A": matrix, "b": vector}
/// {"kind": "expr", "dim": n, "source": text}
/// {"kind": "builtin", "name": "tanhnet", "D": vector, "W": matrix, "b": vector}
VectorField field_from_json(const json& j);

/// {"method", "alpha" (number or "auto"), "tol", "max_iter", "inner_tol",
///  "inner_max_iter", "x0"} — all optional.
SolverConfig solver_config_from_json(const json& j);

struct Problem {
    VectorField field;
    NormSpec norm;
    Box box;
    SolverConfig solver;
};

/// {"field": ..., "norm": ..., "box": {"lo", "hi"}?, "solver": ...?}
Problem problem_from_json(const json& j);

json parse_json_text(const std::string& text);
json load_json_file(const std::string& path);

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

json matrix_to_json(const Matrix& a);
json norm_to_json(const NormSpec& ns);
json certificate_to_json(const ContractionCertificate& cert);
json axiom_report_to_json(const AxiomReport& report);
json trace_summary_to_json(const SolveTrace& trace, const NormSpec& ns);

/// Rows  k, x..., residual, rho  (rho empty on the first row).
void write_trace_csv(std::ostream& os, const SolveTrace& trace);

/// Rows  k, x, y, z, dist  (dist present when the trace tracked a target).
void write_sphere_trace_csv(std::ostream& os, const SphereTrace& trace);

/// Fixed shortest-round-trip formatting used by every CSV writer.
std::string format_double(double v);

} // namespace cvf::io
