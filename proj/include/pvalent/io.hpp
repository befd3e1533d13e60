#pragma once

// JSON (and CSV) representations of the library's value types.
//
// Complex numbers are [re, im] pairs. Output numbers use 17 significant
// digits so reruns are byte-identical; non-finite values are written as the
// strings "inf", "-inf" and "nan" and accepted back on input.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "classify.hpp"
#include "errors.hpp"
#include "operator.hpp"
#include "series.hpp"
#include "special.hpp"

namespace pvalent::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Output

inline std::string format_number(double x) {
    if (std::isnan(x)) return "\"nan\"";
    if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void write(std::ostream& os, const json& j, int indent, int depth) {
    const auto pad = [&](int d) { os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' '); };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',';
                first = false;
                pad(depth + 1);
                os << json(it.key()).dump() << ": ";
                write(os, it.value(), indent, depth + 1);
            }
            pad(depth);
            os << '}';
            return;
        }
        case json::value_t::array: {
            // numeric leaves stay on one line: [re, im] pairs, [re, im, slack] triples
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
            os << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << (flat ? ", " : ",");
                if (!flat) pad(depth + 1);
                write(os, j[i], indent, depth + 1);
            }
            if (!flat && !j.empty()) pad(depth);
            os << ']';
            return;
        }
        case json::value_t::number_float:
            os << format_number(j.get<double>());
            return;
        default:
            os << j.dump();
    }
}

}  // namespace detail

inline void write_json(std::ostream& os, const json& j) {
    detail::write(os, j, 2, 0);
    os << '\n';
}

inline std::string to_string(const json& j) {
    std::ostringstream os;
    write_json(os, j);
    return os.str();
}

// ---------------------------------------------------------------------------
// Input helpers

inline double get_number(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
    }
    throw invariant_error("expected a number for '" + what + "'");
}

inline const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw invariant_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline cplx get_complex(const json& j, const std::string& what) {
    if (j.is_array() && j.size() == 2) return {get_number(j[0], what), get_number(j[1], what)};
    if (j.is_number()) return {j.get<double>(), 0};
    throw invariant_error("expected [re, im] for '" + what + "'");
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(std::span<const cplx> zs) {
    json arr = json::array();
    for (const auto& z : zs) arr.push_back(to_json(z));
    return arr;
}

inline std::vector<cplx> complex_list(const json& j, const std::string& what) {
    if (!j.is_array()) throw invariant_error("expected a list of [re, im] for '" + what + "'");
    std::vector<cplx> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(get_complex(x, what));
    return out;
}

inline int get_int(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw invariant_error("expected an integer for '" + what + "'");
    return j.get<int>();
}

// ---------------------------------------------------------------------------
// Series and decay models

inline json to_json(const power_series& s) {
    return json{{"lead", s.lead()}, {"order", s.order()}, {"coeffs", to_json(s.coeffs())}};
}

inline power_series series_from_json(const json& j) {
    const int lead = get_int(require(j, "lead"), "lead");
    const int order = get_int(require(j, "order"), "order");
    auto coeffs = complex_list(require(j, "coeffs"), "coeffs");
    if (order < lead) throw invariant_error("series: order below lead");
    if (coeffs.size() != static_cast<std::size_t>(order - lead + 1))
        throw invariant_error("series: coeffs must have order - lead + 1 entries");
    return {lead, std::move(coeffs)};
}

inline json to_json(const tail_model& m) {
    if (const auto* g = std::get_if<geometric_decay>(&m)) return json{{"model", "geometric"}, {"rho", g->rho}, {"C", g->scale}};
    if (const auto* p = std::get_if<power_decay>(&m)) return json{{"model", "power"}, {"q", p->q}, {"C", p->scale}};
    return json{{"model", "none"}};
}

inline tail_model tail_from_json(const json& j) {
    const auto kind = require(j, "model").get<std::string>();
    tail_model m = no_decay_model{};
    if (kind == "geometric") m = geometric_decay{get_number(require(j, "rho"), "rho"), get_number(require(j, "C"), "C")};
    else if (kind == "power") m = power_decay{get_number(require(j, "q"), "q"), get_number(require(j, "C"), "C")};
    else if (kind != "none") throw invariant_error("unknown tail model '" + kind + "'");
    validate(m);
    return m;
}

inline json to_json(const eval_result& r) {
    return json{{"value", to_json(r.value)}, {"tail_bound", r.tail_bound}, {"tail_quality", to_string(r.quality)}};
}

// ---------------------------------------------------------------------------
// Parameters

inline json to_json(const class_params& cp) {
    json j{{"p", cp.p}, {"alpha", cp.alpha}, {"beta", cp.beta}};
    if (cp.mu) j["mu"] = *cp.mu;
    return j;
}

inline class_params class_params_from_json(const json& j) {
    class_params cp;
    cp.p = get_int(require(j, "p"), "p");
    cp.alpha = get_number(require(j, "alpha"), "alpha");
    cp.beta = get_number(require(j, "beta"), "beta");
    if (j.contains("mu") && !j.at("mu").is_null()) cp.mu = get_number(j.at("mu"), "mu");
    cp.validate();
    return cp;
}

inline json to_json(const operator_params& op) {
    return json{{"a", to_json(op.a)},   {"b", to_json(op.b)},         {"c", op.c},  {"d", to_json(op.d)},
                {"e", to_json(op.e)},   {"delta", op.delta},          {"p", op.p}};
}

inline operator_params operator_params_from_json(const json& j) {
    operator_params op;
    op.a = get_complex(require(j, "a"), "a");
    op.b = get_complex(require(j, "b"), "b");
    op.c = get_number(require(j, "c"), "c");
    op.d = get_complex(require(j, "d"), "d");
    op.e = get_complex(require(j, "e"), "e");
    op.delta = get_number(require(j, "delta"), "delta");
    op.p = get_int(require(j, "p"), "p");
    op.validate();
    return op;
}

inline json to_json(const hypergeometric_params& h) {
    return json{{"a", to_json(h.a)}, {"b", to_json(h.b)}, {"c", to_json(h.c)}};
}

inline json to_json(const bessel_params& bp) {
    return json{{"d", to_json(bp.d)}, {"e", to_json(bp.e)}, {"delta", to_json(bp.delta)}};
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const certificate& c) {
    return json{{"theorem", to_string(c.theorem)},   {"lhs_sum", c.lhs_sum},
                {"threshold", c.threshold},           {"margin", c.margin},
                {"tail_bound", c.tail_bound},         {"verdict", to_string(c.outcome)},
                {"truncation", to_string(c.tail_handling)}, {"last_index", c.last_index}};
}

inline json to_json(const conic_shape& s) {
    return json{{"tag", to_string(s.kind)}, {"eccentricity", s.eccentricity}};
}

inline json to_json(const sampling_grid& g) {
    return json{{"n_radii", g.n_radii}, {"n_angles", g.n_angles}, {"r_max", g.r_max}};
}

inline json to_json(const sample_report& r) {
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back(json::array({v.z.real(), v.z.imag(), v.slack}));
    return json{{"grid", to_json(r.grid)},
                {"worst_slack", r.worst_slack},
                {"violations", violations},
                {"skipped", to_json(r.skipped)},
                {"evaluated", r.evaluated},
                {"tail_bound", r.tail_bound},
                {"tail_quality", to_string(r.quality)}};
}

inline void write_boundary_csv(std::ostream& os, std::span<const boundary_point> pts) {
    os << "u,v\n";
    for (const auto& pt : pts) os << format_number(pt.u) << ',' << format_number(pt.v) << '\n';
}

}  // namespace pvalent::io
