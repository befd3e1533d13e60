#pragma once

// Batch front-end. Every subcommand reads JSON, writes one JSON report (or a
// CSV point cloud for `conic`) to --out or stdout, and reports failures as a
// JSON object on the error stream:
//
//   exit 0  success
//   exit 1  parse errors and invariant violations
//   exit 2  precondition rejections (divergent series, form violations, ...)

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pvalent/pvalent.hpp"

namespace pvalent::cli {

using io::json;

struct job_spec {
    std::string command;
    std::string params_path;
    std::string coeffs_path;
    std::string op_params_path;
    std::string out_path;
    int thm = 23;
    std::optional<int> order;
    bool assume_finite = false;
    double tol_form = default_form_tolerance;
    std::string grid = "64x64";
    double r_max = 0.99;
    double vmin = -2, vmax = 2, step = 0.5;
    int p = 1;
    double alpha = 2, beta = 0, theta = 0;
    std::optional<double> mu;
};

namespace detail {

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invariant_error("cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw invariant_error("'" + path + "': " + e.what());
    }
}

inline sampling_grid parse_grid(const std::string& spec, double r_max) {
    sampling_grid g;
    char x = 0;
    std::istringstream is(spec);
    if (!(is >> g.n_radii >> x >> g.n_angles) || (x != 'x' && x != 'X') || !is.eof())
        throw invariant_error("grid must look like NxM, got '" + spec + "'");
    g.r_max = r_max;
    g.validate();
    return g;
}

// Coefficient files hold a series (bare, or under "series"), optionally
// "b" (mu-form coefficients b_1, b_2, ...), "tail" and "params".
struct coeff_input {
    std::optional<power_series> series;
    std::optional<std::vector<cplx>> b;
    tail_model tail = no_decay_model{};
    std::optional<class_params> params;
};

inline coeff_input read_coeffs(const std::string& path) {
    const json j = read_json_file(path);
    coeff_input in;
    if (j.contains("lead")) in.series = io::series_from_json(j);
    else if (j.contains("series")) in.series = io::series_from_json(j.at("series"));
    if (j.contains("b")) in.b = io::complex_list(j.at("b"), "b");
    if (j.contains("tail")) in.tail = io::tail_from_json(j.at("tail"));
    if (j.contains("params")) in.params = io::class_params_from_json(j.at("params"));
    if (!in.series && !in.b) throw invariant_error("'" + path + "' holds neither a series nor b coefficients");
    return in;
}

inline class_params resolve_params(const job_spec& job, const coeff_input* in) {
    class_params cp;
    if (!job.params_path.empty()) cp = io::class_params_from_json(read_json_file(job.params_path));
    else if (in && in->params) cp = *in->params;
    else throw invariant_error("class parameters required (--params)");
    if (job.mu) cp.mu = *job.mu;
    cp.validate();
    return cp;
}

inline power_series require_series(const coeff_input& in, const job_spec& job) {
    if (!in.series) throw invariant_error("a series f is required in --coeffs");
    if (job.order && *job.order < in.series->order()) return in.series->truncated(*job.order);
    return *in.series;
}

inline json run_certify(const job_spec& job) {
    json report{{"command", "certify"}};
    if (job.thm == 31) {
        if (job.op_params_path.empty()) throw invariant_error("--thm 31 needs --op-params");
        const auto op = io::operator_params_from_json(read_json_file(job.op_params_path));
        const auto cp = resolve_params(job, nullptr);
        const int K = job.order.value_or(default_operator_terms);
        report["params"] = io::to_json(cp);
        report["op_params"] = io::to_json(op);
        report["K"] = K;
        report["certificate"] = io::to_json(certify_operator(op, cp, K));
        return report;
    }
    if (job.coeffs_path.empty()) throw invariant_error("certify needs --coeffs");
    const auto in = read_coeffs(job.coeffs_path);
    const auto cp = resolve_params(job, &in);
    report["params"] = io::to_json(cp);
    report["tail"] = io::to_json(in.tail);
    report["assume_finite"] = job.assume_finite;
    const certify_options opts{job.assume_finite};

    if (job.thm == 23) {
        const auto f = require_series(in, job);
        report["K"] = f.order();
        report["certificate"] = io::to_json(certify_taylor(f, cp, in.tail, opts));
        return report;
    }
    if (job.thm != 21 && job.thm != 22) throw invariant_error("--thm must be one of 21, 22, 23, 31");

    std::vector<cplx> b;
    if (in.b) {
        b = *in.b;
    } else {
        const auto form = to_mu_form(require_series(in, job), cp.require_mu(), job.tol_form);
        b = form.b;
        report["starts_at_p"] = form.starts_at_p;
    }
    if (job.order && static_cast<std::size_t>(*job.order) < b.size()) b.resize(static_cast<std::size_t>(*job.order));
    report["K"] = b.size();
    report["b"] = io::to_json(std::span<const cplx>(b));
    const auto cert = job.thm == 22 ? certify_mu_form(b, cp, in.tail, opts, job.tol_form)
                                    : check_mu_form_necessary(b, cp, in.tail, job.tol_form);
    report["certificate"] = io::to_json(cert);
    return report;
}

inline json run_sample(const job_spec& job) {
    if (job.coeffs_path.empty()) throw invariant_error("sample needs --coeffs");
    const auto in = read_coeffs(job.coeffs_path);
    const auto cp = resolve_params(job, &in);
    power_series f = in.b ? from_mu_form<double>(*in.b, cp.p, cp.require_mu()) : require_series(in, job);
    if (job.order && *job.order < f.order()) f = f.truncated(*job.order);
    const auto grid = parse_grid(job.grid, job.r_max);
    return json{{"command", "sample"},
                {"params", io::to_json(cp)},
                {"tail", io::to_json(in.tail)},
                {"K", f.order()},
                {"shape", io::to_json(classify_conic(cp))},
                {"report", io::to_json(sample_membership(f, cp, grid, in.tail))}};
}

inline std::vector<double> v_sweep(double vmin, double vmax, double step) {
    if (!(step > 0) || !(vmax >= vmin)) throw invariant_error("conic: need step > 0 and vmax >= vmin");
    const auto n = static_cast<long>(std::floor((vmax - vmin) / step + 1e-9)) + 1;
    if (n > 10'000'000) throw invariant_error("conic: too many sample points");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = vmin + static_cast<double>(i) * step;
    return v;
}

inline json run_operator(const job_spec& job) {
    if (job.op_params_path.empty()) throw invariant_error("operator needs --op-params");
    const auto op = io::operator_params_from_json(read_json_file(job.op_params_path));
    const auto cp = resolve_params(job, nullptr);
    const int K = job.order.value_or(default_operator_terms);
    const auto closed = operator_coefficients(op, K);
    const auto built = hadamard_build(op, K);
    double diff = 0;
    for (int k = op.p; k <= K; ++k) diff = std::max(diff, std::abs(closed[k] - built[k]));
    return json{{"command", "operator"},
                {"op_params", io::to_json(op)},
                {"params", io::to_json(cp)},
                {"K", K},
                {"series", io::to_json(closed)},
                {"construction_max_diff", diff},
                {"certificate", io::to_json(certify_operator(op, cp, K))}};
}

inline json run_example(const job_spec& job) {
    class_params cp{job.p, job.alpha, job.beta, job.mu};
    cp.validate();
    const int K = job.order.value_or(256);
    return json{{"command", "example"},
                {"params", io::to_json(cp)},
                {"theta", job.theta},
                {"K", K},
                {"series", io::to_json(telescoping_example(cp, job.theta, K))},
                {"tail", io::to_json(telescoping_example_tail(cp))}};
}

inline json run_invert(const job_spec& job) {
    if (job.coeffs_path.empty()) throw invariant_error("invert needs --coeffs");
    if (!job.mu) throw invariant_error("invert needs --mu");
    const auto in = read_coeffs(job.coeffs_path);
    const auto f = require_series(in, job);
    const auto form = to_mu_form(f, *job.mu, job.tol_form);
    return json{{"command", "invert"},
                {"mu", *job.mu},
                {"p", f.lead()},
                {"K", f.order()},
                {"b", io::to_json(std::span<const cplx>(form.b))},
                {"starts_at_p", form.starts_at_p}};
}

inline void emit(const job_spec& job, std::ostream& out, const std::string& text) {
    if (job.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(job.out_path, std::ios::binary);
    if (!f) throw invariant_error("cannot write '" + job.out_path + "'");
    f << text;
}

inline int fail(std::ostream& err, const char* kind, const std::string& msg, int code) {
    io::write_json(err, json{{"error", {{"kind", kind}, {"message", msg}}}});
    return code;
}

}  // namespace detail

inline int execute(const job_spec& job, std::ostream& out) {
    using namespace detail;
    if (job.order && *job.order < 1) throw invariant_error("--K must be >= 1");
    if (job.command == "conic") {
        const auto cp = resolve_params(job, nullptr);
        const auto v = v_sweep(job.vmin, job.vmax, job.step);
        std::ostringstream csv;
        io::write_boundary_csv(csv, conic_boundary(cp, v));
        emit(job, out, csv.str());
        return 0;
    }
    json report;
    if (job.command == "certify") report = run_certify(job);
    else if (job.command == "sample") report = run_sample(job);
    else if (job.command == "operator") report = run_operator(job);
    else if (job.command == "example") report = run_example(job);
    else if (job.command == "invert") report = run_invert(job);
    else throw invariant_error("unknown command '" + job.command + "'");
    emit(job, out, io::to_string(report));
    return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coefficient certificates, sampling falsifier and convolution operator for M_p(alpha, beta)",
                 "pvalent"};
    app.require_subcommand(1);
    job_spec job;
    app.add_option("--out", job.out_path, "Report destination (default stdout)");

    auto* certify = app.add_subcommand("certify", "Run a coefficient certificate");
    certify->add_option("--thm", job.thm, "Criterion: 21, 22, 23 or 31")->check(CLI::IsMember({21, 22, 23, 31}));
    certify->add_option("--params,--class-params", job.params_path, "Class parameters JSON");
    certify->add_option("--coeffs", job.coeffs_path, "Series / b-coefficient JSON");
    certify->add_option("--op-params", job.op_params_path, "Operator parameters JSON (--thm 31)");
    certify->add_option("--K", job.order, "Truncation order / number of terms");
    certify->add_option("--mu", job.mu, "Override mu");
    certify->add_option("--tol-form", job.tol_form, "Tolerance for b_k = 0 below k = p");
    certify->add_flag("--assume-finite", job.assume_finite, "Treat the stored coefficients as the whole function");

    auto* sample = app.add_subcommand("sample", "Falsify membership by grid sampling");
    sample->add_option("--params,--class-params", job.params_path, "Class parameters JSON");
    sample->add_option("--coeffs", job.coeffs_path, "Series JSON")->required();
    sample->add_option("--grid", job.grid, "Radii x angles, e.g. 64x64");
    sample->add_option("--rmax", job.r_max, "Outer sampling radius (< 1)");
    sample->add_option("--K", job.order, "Truncation order");
    sample->add_option("--mu", job.mu, "mu (needed when the input holds b coefficients)");

    auto* conic = app.add_subcommand("conic", "Boundary of the conic domain as CSV");
    conic->add_option("--params,--class-params", job.params_path, "Class parameters JSON")->required();
    conic->add_option("--vmin", job.vmin);
    conic->add_option("--vmax", job.vmax);
    conic->add_option("--step", job.step);

    auto* op = app.add_subcommand("operator", "Build the convolution operator and certify it");
    op->add_option("--op-params", job.op_params_path, "Operator parameters JSON")->required();
    op->add_option("--class-params,--params", job.params_path, "Class parameters JSON")->required();
    op->add_option("--K", job.order, "Number of terms");

    auto* example = app.add_subcommand("example", "Emit the telescoping example series");
    example->add_option("--p", job.p)->required();
    example->add_option("--alpha", job.alpha)->required();
    example->add_option("--beta", job.beta)->required();
    example->add_option("--theta", job.theta);
    example->add_option("--K", job.order, "Truncation order (default 256)");

    auto* invert = app.add_subcommand("invert", "Expand (z^p/f)^mu = 1 - sum b_k z^k");
    invert->add_option("--coeffs", job.coeffs_path, "Series JSON")->required();
    invert->add_option("--mu", job.mu)->required();
    invert->add_option("--K", job.order, "Truncation order");
    invert->add_option("--tol-form", job.tol_form);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        return detail::fail(err, "parse", e.what(), 1);
    }
    job.command = app.get_subcommands().front()->get_name();

    try {
        return execute(job, out);
    } catch (const precondition_error& e) {
        return detail::fail(err, "precondition", e.what(), 2);
    } catch (const invariant_error& e) {
        return detail::fail(err, "invariant", e.what(), 1);
    } catch (const json::exception& e) {
        return detail::fail(err, "parse", e.what(), 1);
    }
}

}  // namespace pvalent::cli
