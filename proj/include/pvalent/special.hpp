#pragma once

// Scalar special functions used to build the convolution operator:
// rising factorials, Gamma on the positive axis, Gauss 2F1 and the
// generalized Bessel function together with its normalized form U.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "series.hpp"

namespace pvalent {

using cplx = std::complex<double>;

inline constexpr int default_special_terms = 64;

// Rising factorial (x)_n = x (x+1) ... (x+n-1), (x)_0 = 1.
template <class T>
T pochhammer(T x, int n) {
    if (n < 0) throw invariant_error("pochhammer: negative index");
    T r{1};
    for (int i = 0; i < n; ++i) r *= x + T(i);
    return r;
}

namespace detail {

// Godfrey's coefficients for g = 607/128.
inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr std::array<double, 15> lanczos_coeffs{
    0.99999999999999709182,      57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,       -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,    -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,   .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,    -.26190838401581408670e-4,  .36899182659531622704e-5};

inline double lanczos_gamma(double x) {
    const double xm = x - 1;
    double series = lanczos_coeffs[0];
    for (std::size_t k = 1; k < lanczos_coeffs.size(); ++k) series += lanczos_coeffs[k] / (xm + double(k));
    const double t = xm + lanczos_g + 0.5;
    // split the power so large x does not overflow before exp(-t) kicks in
    const double half = std::pow(t, 0.5 * (xm + 0.5));
    return std::sqrt(2 * std::numbers::pi) * half * (half * std::exp(-t)) * series;
}

inline bool near_nonpositive_integer(cplx x, double tol = 1e-12) {
    const double n = std::round(x.real());
    return n <= 0 && std::abs(x - cplx{n, 0}) <= tol;
}

inline bool is_nonnegative_integer(cplx x) {
    return x.imag() == 0 && x.real() >= 0 && x.real() == std::floor(x.real());
}

}  // namespace detail

// Gamma function for x > 0.
inline double gamma_real(double x) {
    if (!(x > 0)) throw precondition_error("gamma_real: argument must be positive");
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * detail::lanczos_gamma(1 - x));
    return detail::lanczos_gamma(x);
}

// ---------------------------------------------------------------------------
// Gauss hypergeometric function

struct hypergeometric_params {
    cplx a;
    cplx b;
    cplx c;

    void validate() const {
        if (detail::near_nonpositive_integer(c))
            throw invariant_error("2F1: c must not be zero or a negative integer");
    }
};

// Coefficients (a)_k (b)_k / ((c)_k k!) for k = 0..K.
inline power_series gauss_2f1_series(const hypergeometric_params& h, int order) {
    h.validate();
    if (order < 0) throw invariant_error("2F1 series: negative order");
    std::vector<cplx> c(static_cast<std::size_t>(order + 1));
    c[0] = 1;
    for (int k = 0; k < order; ++k)
        c[k + 1] = c[k] * (h.a + double(k)) * (h.b + double(k)) / ((h.c + double(k)) * double(k + 1));
    return {0, std::move(c)};
}

// Partial sum through z^K with a tail estimate.
//
// For j > |c| the term ratio is at most |z| (1+|a|/j)(1+|b|/j)/(1-|c|/j), which
// decreases in j; when that bound R at j = K+1 is below 1 the tail is at most
// |t_{K+1}|/(1-R). Otherwise the dropped terms are estimated as a power law
// with exponent Re(c-a-b)+1 (heuristic).
inline eval_result gauss_2f1(const hypergeometric_params& h, cplx z, int order = default_special_terms) {
    h.validate();
    if (!(std::abs(z) < 1)) throw precondition_error("2F1: |z| must be < 1");
    if (order < 0) throw invariant_error("2F1: negative order");
    cplx term{1};
    cplx sum{1};
    for (int k = 0; k < order; ++k) {
        term *= (h.a + double(k)) * (h.b + double(k)) / ((h.c + double(k)) * double(k + 1)) * z;
        sum += term;
    }
    const cplx next = term * (h.a + double(order)) * (h.b + double(order)) /
                      ((h.c + double(order)) * double(order + 1)) * z;

    eval_result out{sum, 0, tail_quality::rigorous};
    const double t = std::abs(next);
    if (t == 0) return out;

    const double j = order + 1;
    const double A = std::abs(h.a), B = std::abs(h.b), C = std::abs(h.c);
    if (j > C) {
        const double R = std::abs(z) * (1 + A / j) * (1 + B / j) / (1 - C / j);
        if (R < 1) {
            out.tail_bound = t / (1 - R);
            return out;
        }
    }
    const double sigma = (h.c - h.a - h.b).real() + 1;
    double estimate = t / (1 - std::abs(z));
    if (sigma > 1) estimate = std::min(estimate, t * (1 + j / (sigma - 1)));
    out.tail_bound = estimate;
    out.quality = tail_quality::heuristic;
    return out;
}

// F(a,b;c;1) = Gamma(c-a-b) Gamma(c) / (Gamma(c-a) Gamma(c-b)), real parameters.
inline cplx gauss_2f1_at_one(const hypergeometric_params& h) {
    h.validate();
    if (h.a.imag() != 0 || h.b.imag() != 0 || h.c.imag() != 0)
        throw precondition_error("2F1 at 1: unsupported: complex Gamma");
    const double a = h.a.real(), b = h.b.real(), c = h.c.real();

    // Terminating series: sum it exactly (no convergence condition needed).
    for (double n : {a, b}) {
        if (n <= 0 && n == std::floor(n)) {
            const int terms = static_cast<int>(-n);
            cplx sum{1}, term{1};
            for (int k = 0; k < terms; ++k) {
                term *= (a + k) * (b + k) / ((c + k) * (k + 1));
                sum += term;
            }
            return sum;
        }
    }
    if (!(c - a - b > 0)) throw precondition_error("2F1 at 1: divergent at z=1 (needs Re(c-a-b) > 0)");
    for (double g : {c, c - a - b, c - a, c - b}) {
        if (!(g > 0)) throw precondition_error("2F1 at 1: unsupported: Gamma at a non-positive argument");
    }
    return gamma_real(c - a - b) * gamma_real(c) / (gamma_real(c - a) * gamma_real(c - b));
}

// ---------------------------------------------------------------------------
// Generalized Bessel function of the first kind and its normalization.

struct bessel_params {
    cplx d;
    cplx e;
    cplx delta;

    cplx nu() const { return d + (e + 1.0) / 2.0; }

    void validate() const {
        if (detail::near_nonpositive_integer(nu()))
            throw invariant_error("Bessel: d + (e+1)/2 must not be zero or a negative integer");
    }
};

// w(z) = sum_k (-delta)^k / (k! Gamma(nu+k)) (z/2)^(2k+d), principal powers.
inline eval_result bessel_w(const bessel_params& bp, cplx z, int order = default_special_terms) {
    bp.validate();
    if (order < 0) throw invariant_error("bessel_w: negative order");
    const cplx nu = bp.nu();
    if (nu.imag() != 0 || !(nu.real() > 0))
        throw precondition_error("bessel_w: unsupported: complex Gamma (needs real d + (e+1)/2 > 0)");

    const bool integer_d = bp.d.imag() == 0 && bp.d.real() == std::floor(bp.d.real());
    cplx lead_power{1};
    if (z == cplx{0}) {
        if (!detail::is_nonnegative_integer(bp.d))
            throw precondition_error("bessel_w: z = 0 needs d a nonnegative integer");
        lead_power = bp.d == cplx{0} ? cplx{1} : cplx{0};
    } else {
        if (z.imag() == 0 && z.real() < 0 && !integer_d)
            throw precondition_error("bessel_w: branch ambiguity on the negative real axis");
        if (integer_d) {
            const int n = static_cast<int>(bp.d.real());
            lead_power = n >= 0 ? int_power(z / 2.0, n) : 1.0 / int_power(z / 2.0, -n);
        } else {
            lead_power = std::exp(bp.d * std::log(z / 2.0));
        }
    }

    const cplx q = -bp.delta * (z / 2.0) * (z / 2.0);
    cplx term = 1.0 / gamma_real(nu.real());
    cplx sum = term;
    for (int k = 0; k < order; ++k) {
        term *= q / (double(k + 1) * (nu + double(k)));
        sum += term;
    }
    const cplx next = term * q / (double(order + 1) * (nu + double(order)));

    eval_result out{lead_power * sum, 0, tail_quality::rigorous};
    const double t = std::abs(next * lead_power);
    if (t == 0) return out;
    const double R = std::abs(q) / (double(order + 2) * (nu.real() + order + 1));
    if (R < 1) {
        out.tail_bound = t / (1 - R);
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
        out.quality = tail_quality::unbounded;
    }
    return out;
}

// Coefficients (-delta/4)^k / ((nu)_k k!) of the entire function U.
inline power_series bessel_U_series(const bessel_params& bp, int order) {
    bp.validate();
    if (order < 0) throw invariant_error("U series: negative order");
    const cplx nu = bp.nu();
    std::vector<cplx> c(static_cast<std::size_t>(order + 1));
    c[0] = 1;
    for (int k = 0; k < order; ++k) c[k + 1] = c[k] * (-bp.delta / 4.0) / ((nu + double(k)) * double(k + 1));
    return {0, std::move(c)};
}

inline eval_result bessel_U(const bessel_params& bp, cplx z, int order = default_special_terms) {
    const auto s = bessel_U_series(bp, order + 1);
    const auto c = s.coeffs();
    eval_result out{horner(c.first(static_cast<std::size_t>(order + 1)), z), 0, tail_quality::rigorous};

    const double t = std::abs(c.back() * int_power(z, order + 1));
    if (t == 0) return out;
    const double floor_nu = bp.nu().real() + order + 1;
    const double R = floor_nu > 0 ? std::abs(bp.delta / 4.0) * std::abs(z) / (double(order + 2) * floor_nu)
                                  : std::numeric_limits<double>::infinity();
    if (R < 1) {
        out.tail_bound = t / (1 - R);
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
        out.quality = tail_quality::unbounded;
    }
    return out;
}

}  // namespace pvalent
