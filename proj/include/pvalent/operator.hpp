#pragma once

// The convolution operator
//
//     I(z) = z^p (F(a,b;c;z) * U(z)),   * = Hadamard product,
//
// whose coefficient of z^k, n = k - p, is
//
//     (-1)^n (a)_n (b)_n (δ/4)^n / ((c)_n (ν)_n (n!)^2),   ν = d + (e+1)/2.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "classify.hpp"
#include "errors.hpp"
#include "series.hpp"
#include "special.hpp"

namespace pvalent {

inline constexpr int default_operator_terms = 40;

// Whether to enforce the membership-theorem hypotheses on the parameters.
// `bypass` exists for purely algebraic checks; certificates always enforce.
enum class hypotheses { enforce, bypass };

struct operator_params {
    cplx a{1};
    cplx b{1};
    double c = 4;
    cplx d{1};
    cplx e{1};
    double delta = 1;
    int p = 1;

    cplx nu() const { return d + (e + 1.0) / 2.0; }

    hypergeometric_params gauss() const { return {a, b, cplx{c}}; }
    bessel_params bessel() const { return {d, e, cplx{delta}}; }

    void validate(hypotheses mode = hypotheses::enforce) const {
        if (p < 1) throw invariant_error("operator: p must be a positive integer");
        if (detail::near_nonpositive_integer(cplx{c})) throw invariant_error("operator: c must not be 0, -1, -2, ...");
        if (detail::near_nonpositive_integer(nu()))
            throw invariant_error("operator: d + (e+1)/2 must not be 0, -1, -2, ...");
        if (mode == hypotheses::bypass) return;
        if (a == cplx{0} || b == cplx{0}) throw invariant_error("operator: a and b must be nonzero");
        if (!(c > std::abs(a) + std::abs(b) + 1)) throw invariant_error("operator: c must exceed |a| + |b| + 1");
        if (!(delta > 0)) throw invariant_error("operator: delta must be > 0");
        const cplx n = nu();
        if (std::abs(n.imag()) > 1e-12 * std::max(1.0, std::abs(n)) || !(n.real() > 0))
            throw invariant_error("operator: d + (e+1)/2 must be real and > 0");
    }
};

// Closed-form coefficients through z^order, built by the term ratio
// -(a+n)(b+n)(δ/4) / ((c+n)(ν+n)(n+1)^2).
inline power_series operator_coefficients(const operator_params& op, int order,
                                          hypotheses mode = hypotheses::enforce) {
    op.validate(mode);
    if (order < op.p) throw invariant_error("operator: order must be >= p");
    const cplx nu = op.nu();
    const double q = op.delta / 4;
    std::vector<cplx> c(static_cast<std::size_t>(order - op.p + 1));
    c[0] = 1;
    for (int n = 0; n + 1 < static_cast<int>(c.size()); ++n) {
        const double dn = n;
        c[n + 1] = -c[n] * (op.a + dn) * (op.b + dn) * q / ((op.c + dn) * (nu + dn) * ((dn + 1) * (dn + 1)));
    }
    return {op.p, std::move(c)};
}

// The same series assembled as z^p times the Hadamard product of the
// 2F1 and U coefficient sequences.
inline power_series hadamard_build(const operator_params& op, int order, hypotheses mode = hypotheses::enforce) {
    op.validate(mode);
    if (order < op.p) throw invariant_error("operator: order must be >= p");
    const int n = order - op.p;
    return shift(hadamard(gauss_2f1_series(op.gauss(), n), bessel_U_series(op.bessel(), n)), op.p);
}

// Sufficient condition for I in M_p(α, β): the Taylor criterion evaluated on
// the closed-form moduli
//   [pα + β + k(1-β)] |(a)_n (b)_n| (δ/4)^n / ((c)_n (ν)_n (n!)^2),  k = p + n.
//
// Tail: for m >= n the modulus ratio is at most
//   r = (1 + 1/(k-1)) max(1, |b|/ν) (δ/4) / (n+1)^2,
// using |a+m| < c+m and w_{k+1}/w_k <= 1 + 1/(k-1); so tail <= t_{K+1}/(1-r).
inline certificate certify_operator(const operator_params& op, const class_params& cp,
                                    int order = default_operator_terms) {
    op.validate();
    cp.validate();
    if (cp.p != op.p) throw invariant_error("operator certificate: class p differs from operator p");
    if (order < op.p + 1) throw invariant_error("operator certificate: order must be >= p + 1");

    const double nu = op.nu().real();
    const double q = op.delta / 4;
    auto ratio = [&](int n) {  // |coeff_{n+1}| / |coeff_n|
        const double dn = n;
        return std::abs(op.a + dn) * std::abs(op.b + dn) * q / ((op.c + dn) * (nu + dn) * (dn + 1) * (dn + 1));
    };

    certificate cert{criterion::operator_sufficient};
    cert.threshold = cp.p * (cp.alpha - 1);
    double modulus = 1;
    for (int k = op.p + 1; k <= order; ++k) {
        modulus *= ratio(k - op.p - 1);
        cert.lhs_sum += taylor_weight(cp, k) * modulus;
    }
    cert.last_index = order;
    cert.margin = cert.threshold - cert.lhs_sum;

    const int next_k = order + 1;
    const int next_n = next_k - op.p;
    const double next_term = taylor_weight(cp, next_k) * modulus * ratio(next_n - 1);
    const double r = (1 + 1.0 / (next_k - 1)) * std::max(1.0, std::abs(op.b) / nu) * q /
                     ((next_n + 1.0) * (next_n + 1.0));
    cert.tail_bound = next_term == 0 ? 0
                      : r < 1        ? next_term / (1 - r)
                                     : std::numeric_limits<double>::infinity();
    cert.tail_handling = truncation::bounded;
    cert.outcome = cert.lhs_sum + cert.tail_bound < cert.threshold ? verdict::proven_member : verdict::inconclusive;
    return cert;
}

}  // namespace pvalent
