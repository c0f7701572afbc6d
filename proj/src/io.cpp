#include "cvf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cvf::io {

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw ParseError(msg, 0, 1, 1); }

void require_object(const json& j, const char* ctx) {
    if (!j.is_object()) schema_error(std::string(ctx) + " must be a JSON object");
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* ctx) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) schema_error("unknown key '" + key + "' in " + ctx);
    }
}

double number_at(const json& j, const char* key, const char* ctx) {
    if (!j.contains(key) || !j.at(key).is_number())
        schema_error(std::string(ctx) + " requires numeric '" + key + "'");
    return j.at(key).get<double>();
}

} // namespace

json parse_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) schema_error("invalid JSON");
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) schema_error("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

Matrix matrix_from_json(const json& j) {
    require_object(j, "matrix");
    reject_unknown_keys(j, {"rows", "cols", "data"}, "matrix");
    auto rows = static_cast<std::size_t>(number_at(j, "rows", "matrix"));
    auto cols = static_cast<std::size_t>(number_at(j, "cols", "matrix"));
    if (rows == 0 || cols == 0) schema_error("matrix dimensions must be positive");
    if (!j.contains("data") || !j.at("data").is_array())
        schema_error("matrix requires 'data' array");
    const auto& data = j.at("data");
    if (data.size() != rows * cols) schema_error("matrix data length does not match rows*cols");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!data[i].is_number()) schema_error("matrix data must be numeric");
        m.data[i] = data[i].get<double>();
    }
    if (!all_finite(m)) schema_error("matrix entries must be finite");
    return m;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array()) schema_error("vector must be a JSON array");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) schema_error("vector entries must be numeric");
        v[i] = j[i].get<double>();
    }
    if (!all_finite(v)) schema_error("vector entries must be finite");
    return v;
}

NormSpec norm_from_json(const json& j) {
    require_object(j, "norm");
    reject_unknown_keys(j, {"p", "weight", "metric"}, "norm");
    if (!j.contains("p") || !j.at("p").is_string()) schema_error("norm requires string 'p'");
    std::string p = j.at("p").get<std::string>();
    NormOrder order;
    if (p == "1")
        order = NormOrder::One;
    else if (p == "2")
        order = NormOrder::Two;
    else if (p == "inf")
        order = NormOrder::Inf;
    else
        schema_error("norm 'p' must be \"1\", \"2\", or \"inf\"");

    if (j.contains("metric")) {
        if (order != NormOrder::Two) schema_error("norm 'metric' is only valid with p = \"2\"");
        if (j.contains("weight")) schema_error("norm takes 'weight' or 'metric', not both");
        return NormSpec::with_metric(matrix_from_json(j.at("metric")));
    }
    if (j.contains("weight")) return NormSpec::with_weight(order, matrix_from_json(j.at("weight")));
    return NormSpec(order);
}

VectorField field_from_json(const json& j) {
    require_object(j, "field");
    if (!j.contains("kind") || !j.at("kind").is_string())
        schema_error("field requires string 'kind'");
    std::string kind = j.at("kind").get<std::string>();

    if (kind == "affine") {
        reject_unknown_keys(j, {"kind", "A", "b"}, "affine field");
        if (!j.contains("A") || !j.contains("b")) schema_error("affine field requires 'A' and 'b'");
        return VectorField::affine(matrix_from_json(j.at("A")), vector_from_json(j.at("b")));
    }
    if (kind == "expr") {
        reject_unknown_keys(j, {"kind", "dim", "source"}, "expr field");
        if (!j.contains("source") || !j.at("source").is_string())
            schema_error("expr field requires string 'source'");
        auto dim = static_cast<std::size_t>(number_at(j, "dim", "expr field"));
        return VectorField::parsed(j.at("source").get<std::string>(), dim);
    }
    if (kind == "builtin") {
        reject_unknown_keys(j, {"kind", "name", "D", "W", "b"}, "builtin field");
        if (!j.contains("name") || j.at("name").get<std::string>() != "tanhnet")
            schema_error("unknown builtin field name");
        if (!j.contains("D") || !j.contains("W") || !j.contains("b"))
            schema_error("tanhnet requires 'D', 'W', and 'b'");
        return VectorField::tanh_network(vector_from_json(j.at("D")),
                                         matrix_from_json(j.at("W")),
                                         vector_from_json(j.at("b")));
    }
    schema_error("field 'kind' must be \"affine\", \"expr\", or \"builtin\"");
}

SolverConfig solver_config_from_json(const json& j) {
    require_object(j, "solver");
    reject_unknown_keys(
        j, {"method", "alpha", "tol", "max_iter", "inner_tol", "inner_max_iter", "x0"}, "solver");
    SolverConfig cfg;
    if (j.contains("method")) {
        std::string m = j.at("method").get<std::string>();
        if (m == "forward")
            cfg.method = SolveMethod::Forward;
        else if (m == "implicit-fixed-point")
            cfg.method = SolveMethod::ImplicitFixedPoint;
        else if (m == "implicit-newton")
            cfg.method = SolveMethod::ImplicitNewton;
        else if (m == "extragradient")
            cfg.method = SolveMethod::ExtraGradient;
        else
            schema_error("unknown solver method '" + m + "'");
    }
    if (j.contains("alpha")) {
        if (j.at("alpha").is_string()) {
            if (j.at("alpha").get<std::string>() != "auto")
                schema_error("solver 'alpha' must be a number or \"auto\"");
        } else if (j.at("alpha").is_number()) {
            cfg.alpha = j.at("alpha").get<double>();
        } else {
            schema_error("solver 'alpha' must be a number or \"auto\"");
        }
    }
    if (j.contains("tol")) cfg.tol = number_at(j, "tol", "solver");
    if (j.contains("max_iter")) cfg.max_iter = static_cast<int>(number_at(j, "max_iter", "solver"));
    if (j.contains("inner_tol")) cfg.inner_tol = number_at(j, "inner_tol", "solver");
    if (j.contains("inner_max_iter"))
        cfg.inner_max_iter = static_cast<int>(number_at(j, "inner_max_iter", "solver"));
    if (j.contains("x0")) cfg.x0 = vector_from_json(j.at("x0"));
    return cfg;
}

Problem problem_from_json(const json& j) {
    require_object(j, "problem");
    reject_unknown_keys(j, {"field", "norm", "box", "solver"}, "problem");
    if (!j.contains("field")) schema_error("problem requires 'field'");
    if (!j.contains("norm")) schema_error("problem requires 'norm'");

    Problem p{field_from_json(j.at("field")), norm_from_json(j.at("norm")), Box{}, SolverConfig{}};
    if (j.contains("box")) {
        const json& b = j.at("box");
        require_object(b, "box");
        reject_unknown_keys(b, {"lo", "hi"}, "box");
        p.box.lo = number_at(b, "lo", "box");
        p.box.hi = number_at(b, "hi", "box");
        if (!(p.box.lo < p.box.hi)) schema_error("box requires lo < hi");
    }
    if (j.contains("solver")) p.solver = solver_config_from_json(j.at("solver"));
    p.norm.check_dim(p.field.dim());
    return p;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

json matrix_to_json(const Matrix& a) {
    return json{{"rows", a.rows}, {"cols", a.cols}, {"data", a.data}};
}

json norm_to_json(const NormSpec& ns) {
    json j{{"p", to_string(ns.order())}};
    if (ns.has_metric())
        j["metric"] = matrix_to_json(ns.metric());
    else if (ns.is_weighted())
        j["weight"] = matrix_to_json(ns.weight());
    return j;
}

json certificate_to_json(const ContractionCertificate& cert) {
    json j{
        {"norm", norm_to_json(cert.ns)},
        {"rate", cert.rate},
        {"lipschitz", cert.lipschitz},
        {"kappa", cert.kappa},
        {"mode", to_string(cert.mode)},
        {"box", {{"lo", cert.box.lo}, {"hi", cert.box.hi}}},
        {"samples", cert.samples},
        {"seed", cert.seed},
    };
    if (!cert.witness_rate.empty()) j["witness_rate"] = cert.witness_rate;
    if (!cert.witness_lipschitz.empty()) j["witness_lipschitz"] = cert.witness_lipschitz;
    return j;
}

json axiom_report_to_json(const AxiomReport& report) {
    json axioms{
        {"subadditivity",
         {{"worst", report.worst_subadditivity},
          {"x1", report.witness_subadd_x1},
          {"x2", report.witness_subadd_x2},
          {"y", report.witness_subadd_y}}},
        {"homogeneity", {{"worst", report.worst_homogeneity}}},
        {"positive_definiteness", {{"min_quadratic", report.min_quadratic}}},
        {"norm_compatibility", {{"worst", report.worst_norm_compat}}},
        {"cauchy_schwarz",
         {{"worst", report.worst_cauchy_schwarz},
          {"x", report.witness_cs_x},
          {"y", report.witness_cs_y}}},
        {"deimling",
         {{"min_margin", report.min_deimling},
          {"x", report.witness_deimling_x},
          {"y", report.witness_deimling_y}}},
    };
    return json{{"p", to_string(report.p)},    {"weighted", report.weighted},
                {"dim", report.dim},           {"samples", report.samples},
                {"seed", report.seed},         {"axioms", axioms}};
}

json trace_summary_to_json(const SolveTrace& trace, const NormSpec& ns) {
    (void)ns;
    json j{
        {"status", to_string(trace.status)},
        {"iterations", trace.iterations()},
        {"alpha", trace.alpha},
        {"guarantee", trace.guarantee},
        {"final_residual", trace.final_residual()},
        {"x_final", trace.final_point()},
    };
    if (std::isfinite(trace.predicted_factor)) j["predicted_factor"] = trace.predicted_factor;
    double emp = trace.empirical_factor();
    if (std::isfinite(emp)) j["empirical_factor"] = emp;
    if (trace.equilibrium) j["x_star"] = *trace.equilibrium;
    if (!trace.inner_iterations.empty()) {
        int total = 0, worst = 0;
        for (int n : trace.inner_iterations) {
            total += n;
            worst = std::max(worst, n);
        }
        j["inner_iterations_total"] = total;
        j["inner_iterations_max"] = worst;
    }
    if (!trace.warnings.empty()) j["warnings"] = trace.warnings;
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& os, const SolveTrace& trace) {
    std::size_t n = trace.iterates.empty() ? 0 : trace.iterates.front().size();
    os << "k";
    for (std::size_t i = 0; i < n; ++i) os << ",x" << (i + 1);
    os << ",residual,rho\n";
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        os << k;
        for (double v : trace.iterates[k]) os << ',' << format_double(v);
        os << ',' << format_double(trace.residuals[k]) << ',';
        if (k >= 1 && k - 1 < trace.step_factors.size() &&
            std::isfinite(trace.step_factors[k - 1]))
            os << format_double(trace.step_factors[k - 1]);
        os << '\n';
    }
}

void write_sphere_trace_csv(std::ostream& os, const SphereTrace& trace) {
    bool with_dist = !trace.distances.empty();
    os << "k,x,y,z,field_norm" << (with_dist ? ",dist\n" : "\n");
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        const Vec3& v = trace.iterates[k].ambient();
        os << k << ',' << format_double(v[0]) << ',' << format_double(v[1]) << ','
           << format_double(v[2]) << ',' << format_double(trace.field_norms[k]);
        if (with_dist) os << ',' << format_double(trace.distances[k]);
        os << '\n';
    }
}

} // namespace cvf::io
