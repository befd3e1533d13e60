#pragma once

// Membership in M_p(alpha, beta): functions f = z^p + ... with
//
//     Re F(z) < beta |F(z) - p| + p alpha,   F = z f'/f,   beta <= 0 < alpha - 1,
//
// on the unit disk. Coefficient inequalities give one-sided certificates;
// sampling the inequality on a grid can only falsify.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "series.hpp"

namespace pvalent {

using cplx = std::complex<double>;

struct class_params {
    int p = 1;
    double alpha = 2;
    double beta = 0;
    std::optional<double> mu;

    void validate() const {
        if (p < 1) throw invariant_error("class params: p must be a positive integer");
        if (!(alpha > 1)) throw invariant_error("class params: alpha must be > 1");
        if (!(beta <= 0)) throw invariant_error("class params: beta must be <= 0");
        if (mu && !(*mu > 0)) throw invariant_error("class params: mu must be > 0");
    }

    double require_mu() const {
        if (!mu) throw invariant_error("class params: mu is required for the mu-form criteria");
        return *mu;
    }
};

// ---------------------------------------------------------------------------
// Geometry of the image domain of F

enum class conic_kind { elliptic, parabolic, hyperbolic, halfplane };

inline const char* to_string(conic_kind k) {
    switch (k) {
        case conic_kind::elliptic: return "elliptic";
        case conic_kind::parabolic: return "parabolic";
        case conic_kind::hyperbolic: return "hyperbolic";
        case conic_kind::halfplane: return "halfplane";
    }
    return "halfplane";
}

struct conic_shape {
    conic_kind kind;
    double eccentricity;  // -1/beta; +inf for the half-plane
};

inline conic_shape classify_conic(const class_params& cp) {
    cp.validate();
    if (cp.beta == 0) return {conic_kind::halfplane, std::numeric_limits<double>::infinity()};
    const double ecc = -1 / cp.beta;
    if (cp.beta < -1) return {conic_kind::elliptic, ecc};
    if (cp.beta == -1) return {conic_kind::parabolic, ecc};
    return {conic_kind::hyperbolic, ecc};
}

// pα + β|F - p| - Re F; positive exactly when the defining inequality holds.
inline double slack(cplx F, const class_params& cp) {
    const double p = cp.p;
    return p * cp.alpha + cp.beta * std::abs(F - p) - F.real();
}

struct boundary_point {
    double u;
    double v;
};

// Points w = u + iv with u - pα = β |w - p|: focus p, directrix Re w = pα.
// The ellipse yields two points per admissible v (sorted by u); v outside
// the ellipse yields none.
inline std::vector<boundary_point> conic_boundary(const class_params& cp, std::span<const double> v_values) {
    cp.validate();
    const double p = cp.p;
    const double directrix = p * cp.alpha;
    const double b2 = cp.beta * cp.beta;
    std::vector<boundary_point> out;
    out.reserve(v_values.size());
    for (double v : v_values) {
        if (cp.beta == 0) {
            out.push_back({directrix, v});
            continue;
        }
        if (cp.beta == -1) {
            out.push_back({(directrix * directrix - p * p - v * v) / (2 * p * (cp.alpha - 1)), v});
            continue;
        }
        // (1-β²)u² - 2(pα - β²p)u + (p²α² - β²p² - β²v²) = 0
        const double qa = 1 - b2;
        const double qb = directrix - b2 * p;
        const double qc = directrix * directrix - b2 * p * p - b2 * v * v;
        const double disc = qb * qb - qa * qc;
        if (disc < 0) continue;
        const double sq = std::sqrt(disc);
        // stable pair of roots of qa u² - 2 qb u + qc
        const double big = qb + std::copysign(sq, qb);
        std::vector<double> roots;
        if (big != 0) roots = {big / qa, qc / big};
        else roots = {qb / qa};
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        const double tol = 1e-12 * std::max(1.0, std::abs(directrix));
        for (double u : roots) {
            if (u <= directrix + tol) out.push_back({std::min(u, directrix), v});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coefficient certificates

enum class criterion { mu_form_necessary, mu_form_sufficient, taylor_sufficient, operator_sufficient };

// External names used in reports and on the command line.
inline const char* to_string(criterion c) {
    switch (c) {
        case criterion::mu_form_necessary: return "T21_necessary";
        case criterion::mu_form_sufficient: return "T22_sufficient";
        case criterion::taylor_sufficient: return "T23_sufficient";
        case criterion::operator_sufficient: return "T31_operator";
    }
    return "";
}

enum class verdict { proven_member, inconclusive, necessary_violated };

inline const char* to_string(verdict v) {
    switch (v) {
        case verdict::proven_member: return "proven_member";
        case verdict::inconclusive: return "inconclusive";
        case verdict::necessary_violated: return "necessary_violated";
    }
    return "";
}

// How the dropped coefficients were accounted for.
enum class truncation { bounded, assumed_finite, heuristic };

inline const char* to_string(truncation t) {
    switch (t) {
        case truncation::bounded: return "bounded";
        case truncation::assumed_finite: return "assumed_finite";
        case truncation::heuristic: return "heuristic";
    }
    return "";
}

struct certificate {
    criterion theorem;
    double lhs_sum = 0;
    double threshold = 0;
    double margin = 0;  // threshold - lhs_sum
    double tail_bound = 0;
    verdict outcome = verdict::inconclusive;
    truncation tail_handling = truncation::bounded;
    int last_index = 0;  // largest k included in lhs_sum
};

struct certify_options {
    bool assume_finite = false;
};

// Weight of |a_k| in the Taylor-coefficient criterion. Strictly increasing in k.
inline double taylor_weight(const class_params& cp, int k) {
    return cp.p * cp.alpha + cp.beta + k * (1 - cp.beta);
}

// Weight of |b_k| in the mu-form criteria.
inline double mu_form_weight(const class_params& cp, double mu, int k) {
    return cp.p * mu * (cp.alpha - 1) + k * (1 - cp.beta);
}

// Bound on sum_{k > last} (A + B k) |c_k| under a coefficient decay model.
inline double weighted_tail(const tail_model& model, double A, double B, int last) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    A = std::max(A, 0.0);
    if (const auto* g = std::get_if<geometric_decay>(&model)) {
        if (g->scale == 0) return 0;
        const double r = g->rho;
        if (r >= 1) return inf;
        if (r == 0) return 0;
        const int n = last + 1;
        const double rn = std::pow(r, n);
        const double s0 = rn / (1 - r);                               // sum_{k>=n} r^k
        const double s1 = rn * (n * (1 - r) + r) / ((1 - r) * (1 - r));  // sum_{k>=n} k r^k
        return g->scale * (A * s0 + B * s1);
    }
    if (const auto* pw = std::get_if<power_decay>(&model)) {
        if (pw->scale == 0) return 0;
        const double q = pw->q;
        const double K = std::max(last, 1);
        // sum_{k>K} k^-s <= K^(1-s)/(s-1) for s > 1
        double bound = 0;
        if (A > 0) bound += q > 1 ? A * std::pow(K, 1 - q) / (q - 1) : inf;
        if (B > 0) bound += q > 2 ? B * std::pow(K, 2 - q) / (q - 2) : inf;
        return pw->scale * bound;
    }
    return 0;
}

namespace detail {

inline certificate finish_sufficient(certificate c, const tail_model& tail, double A, double B,
                                     const certify_options& opts) {
    validate(tail);
    c.margin = c.threshold - c.lhs_sum;
    if (std::holds_alternative<no_decay_model>(tail)) {
        c.tail_bound = 0;
        c.tail_handling = opts.assume_finite ? truncation::assumed_finite : truncation::heuristic;
    } else {
        c.tail_bound = weighted_tail(tail, A, B, c.last_index);
        c.tail_handling = truncation::bounded;
    }
    const bool trusted = c.tail_handling != truncation::heuristic;
    c.outcome = trusted && c.lhs_sum + c.tail_bound < c.threshold ? verdict::proven_member : verdict::inconclusive;
    return c;
}

inline void require_form(std::span<const cplx> b, int p, double tol) {
    for (int k = 1; k < p && k <= static_cast<int>(b.size()); ++k) {
        if (std::abs(b[k - 1]) > tol)
            throw precondition_error("form violation: b_" + std::to_string(k) + " != 0 below k = p");
    }
}

}  // namespace detail

// Sufficient condition from Taylor coefficients:
//   sum_{k>=p+1} [pα + β + k(1-β)] |a_k| < p(α - 1).
// `a[i]` is a_{p+1+i}.
inline certificate certify_taylor(std::span<const cplx> a, const class_params& cp, const tail_model& tail = no_decay_model{},
                                  const certify_options& opts = {}) {
    cp.validate();
    certificate c{criterion::taylor_sufficient};
    c.threshold = cp.p * (cp.alpha - 1);
    double prev_weight = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int k = cp.p + 1 + static_cast<int>(i);
        const double w = taylor_weight(cp, k);
        if (!(w > prev_weight)) throw invariant_error("taylor weights must increase with k");
        prev_weight = w;
        c.lhs_sum += w * std::abs(a[i]);
    }
    c.last_index = cp.p + static_cast<int>(a.size());
    return detail::finish_sufficient(c, tail, cp.p * cp.alpha + cp.beta, 1 - cp.beta, opts);
}

inline certificate certify_taylor(const power_series& f, const class_params& cp, const tail_model& tail = no_decay_model{},
                                  const certify_options& opts = {}) {
    cp.validate();
    require_normalized(f, cp.p);
    return certify_taylor(f.coeffs().subspan(1), cp, tail, opts);
}

// Sufficient condition from the mu-form coefficients (b[i] is b_{i+1}):
//   sum_{k>=p} [pμ(α-1) + k(1-β)] |b_k| < pμ(α-1).
inline certificate certify_mu_form(std::span<const cplx> b, const class_params& cp, const tail_model& tail = no_decay_model{},
                                   const certify_options& opts = {}, double tol_form = default_form_tolerance) {
    cp.validate();
    const double mu = cp.require_mu();
    detail::require_form(b, cp.p, tol_form);
    certificate c{criterion::mu_form_sufficient};
    c.threshold = cp.p * mu * (cp.alpha - 1);
    for (int k = cp.p; k <= static_cast<int>(b.size()); ++k) c.lhs_sum += mu_form_weight(cp, mu, k) * std::abs(b[k - 1]);
    c.last_index = std::max(static_cast<int>(b.size()), cp.p - 1);
    return detail::finish_sufficient(c, tail, cp.p * mu * (cp.alpha - 1), 1 - cp.beta, opts);
}

// Necessary condition for members whose mu-form has b_k >= 0 and sum b_k < 1:
//   sum_{k>=p} [pμ(α-1) + k(1-β)] b_k <= pμ(α-1).
// A violation (beyond the tail bound) proves f is not in the class.
inline certificate check_mu_form_necessary(std::span<const cplx> b, const class_params& cp,
                                           const tail_model& tail = no_decay_model{},
                                           double tol_form = default_form_tolerance) {
    cp.validate();
    validate(tail);
    const double mu = cp.require_mu();
    detail::require_form(b, cp.p, tol_form);
    double total = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (std::abs(b[i].imag()) > tol_form || b[i].real() < -tol_form)
            throw precondition_error("necessary check: b_k must be real and nonnegative");
        total += b[i].real();
    }
    if (!(total < 1)) throw precondition_error("necessary check: sum of b_k must be < 1");

    certificate c{criterion::mu_form_necessary};
    c.threshold = cp.p * mu * (cp.alpha - 1);
    for (int k = cp.p; k <= static_cast<int>(b.size()); ++k)
        c.lhs_sum += mu_form_weight(cp, mu, k) * std::max(b[k - 1].real(), 0.0);
    c.last_index = std::max(static_cast<int>(b.size()), cp.p - 1);
    c.margin = c.threshold - c.lhs_sum;
    if (std::holds_alternative<no_decay_model>(tail)) {
        c.tail_bound = 0;
        c.tail_handling = truncation::heuristic;
    } else {
        c.tail_bound = weighted_tail(tail, c.threshold, 1 - cp.beta, c.last_index);
    }
    c.outcome = c.lhs_sum - c.tail_bound > c.threshold ? verdict::necessary_violated : verdict::inconclusive;
    // dropped b_k are nonnegative, so a partial sum above the threshold stays above it
    if (c.outcome == verdict::necessary_violated) c.tail_handling = truncation::bounded;
    return c;
}

// ---------------------------------------------------------------------------
// A family on which the Taylor criterion telescopes:
//   a_k = p(p-1)(α-1) e^{iθ} / ([pα + β + k(1-β)] k(k-1)),  k >= p+1.

inline power_series telescoping_example(const class_params& cp, double theta, int order) {
    cp.validate();
    if (order < cp.p + 1) throw invariant_error("example: order must be at least p + 1");
    const double p = cp.p;
    const cplx phase = std::polar(1.0, theta);
    std::vector<cplx> c(static_cast<std::size_t>(order - cp.p + 1));
    c[0] = 1;
    for (int k = cp.p + 1; k <= order; ++k)
        c[k - cp.p] = p * (p - 1) * (cp.alpha - 1) * phase / (taylor_weight(cp, k) * double(k) * double(k - 1));
    return {cp.p, std::move(c)};
}

// |a_k| <= 2p(p-1)(α-1)/k^3, since the weight exceeds k and k(k-1) >= k^2/2.
inline tail_model telescoping_example_tail(const class_params& cp) {
    return power_decay{3, 2.0 * cp.p * (cp.p - 1) * (cp.alpha - 1)};
}

// ---------------------------------------------------------------------------
// Sampling falsifier

struct sampling_grid {
    int n_radii = 64;
    int n_angles = 64;
    double r_max = 0.99;

    void validate() const {
        if (n_radii < 1 || n_angles < 1) throw invariant_error("grid: sizes must be positive");
        if (!(r_max > 0 && r_max < 1)) throw invariant_error("grid: r_max must lie in (0, 1)");
    }
};

struct violation {
    cplx z;
    double slack;
};

struct sample_report {
    sampling_grid grid;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::vector<violation> violations;  // slack <= 0, ordered by (r, θ)
    std::vector<cplx> skipped;          // f(z) numerically zero
    std::size_t evaluated = 0;
    double tail_bound = 0;  // evaluation tail of f at r_max
    tail_quality quality = tail_quality::unbounded;
};

// Radii cluster toward r_max: r_i = r_max sin(π (i+1) / (2n)).
inline std::vector<double> sample_radii(const sampling_grid& g) {
    std::vector<double> r(static_cast<std::size_t>(g.n_radii));
    for (int i = 0; i < g.n_radii; ++i)
        r[i] = g.r_max * std::sin(std::numbers::pi * (i + 1) / (2.0 * g.n_radii));
    r.back() = g.r_max;
    return r;
}

inline sample_report sample_membership(const power_series& f, const class_params& cp, const sampling_grid& grid = {},
                                       const tail_model& tail = no_decay_model{}) {
    cp.validate();
    grid.validate();
    validate(tail);
    require_normalized(f, cp.p);

    struct ring {
        double worst = std::numeric_limits<double>::infinity();
        std::vector<violation> bad;
        std::vector<cplx> skipped;
        std::size_t evaluated = 0;
    };
    const auto radii = sample_radii(grid);
    std::vector<ring> rings(radii.size());

    auto work = [&](std::size_t i) {
        ring& out = rings[i];
        for (int j = 0; j < grid.n_angles; ++j) {
            const cplx z = std::polar(radii[i], 2 * std::numbers::pi * j / grid.n_angles);
            cplx F;
            try {
                F = log_derivative(f, z);
            } catch (const near_zero_error&) {
                out.skipped.push_back(z);
                continue;
            }
            const double s = slack(F, cp);
            ++out.evaluated;
            out.worst = std::min(out.worst, s);
            if (s <= 0) out.bad.push_back({z, s});
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, radii.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < radii.size(); ++i) work(i);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < radii.size(); i += workers) work(i);
            });
    }

    sample_report rep;
    rep.grid = grid;
    for (auto& r : rings) {
        rep.worst_slack = std::min(rep.worst_slack, r.worst);
        rep.evaluated += r.evaluated;
        rep.violations.insert(rep.violations.end(), r.bad.begin(), r.bad.end());
        rep.skipped.insert(rep.skipped.end(), r.skipped.begin(), r.skipped.end());
    }
    if (!std::holds_alternative<no_decay_model>(tail)) {
        rep.tail_bound = evaluation_tail(tail, f.order(), grid.r_max);
        rep.quality = std::isfinite(rep.tail_bound) ? tail_quality::rigorous : tail_quality::unbounded;
    }
    return rep;
}

}  // namespace pvalent
