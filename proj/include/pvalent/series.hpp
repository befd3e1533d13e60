#pragma once

// Truncated complex power series.
//
// A series stores the coefficients of z^lead, z^(lead+1), ..., z^order.
// Everything above `order` is unknown, so every operation reports the
// largest order it can actually vouch for.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace pvalent {

template <class Real>
class basic_power_series {
public:
    using real_type = Real;
    using value_type = std::complex<Real>;

    basic_power_series() : basic_power_series(0, {value_type{0}}) {}

    basic_power_series(int lead, std::vector<value_type> coeffs)
        : lead_(lead), coeffs_(std::move(coeffs)) {
        if (lead_ < 0) throw invariant_error("power series: negative leading exponent");
        if (coeffs_.empty()) throw invariant_error("power series: order below leading exponent");
    }

    static basic_power_series zero(int lead, int order) {
        check_span(lead, order);
        return {lead, std::vector<value_type>(static_cast<std::size_t>(order - lead + 1))};
    }

    // c * z^n, known exactly up to `order`.
    static basic_power_series monomial(int n, int order, value_type c = value_type{1}) {
        auto s = zero(n, order);
        s.coeffs_.front() = c;
        return s;
    }

    // 1 + z + z^2 + ... + z^order: the identity of the Hadamard product.
    static basic_power_series all_ones(int order) {
        check_span(0, order);
        return {0, std::vector<value_type>(static_cast<std::size_t>(order + 1), value_type{1})};
    }

    int lead() const noexcept { return lead_; }
    int order() const noexcept { return lead_ + static_cast<int>(coeffs_.size()) - 1; }
    std::span<const value_type> coeffs() const noexcept { return coeffs_; }

    // Coefficient of z^exponent. Zero below lead; unknown (error) above order.
    value_type operator[](int exponent) const {
        if (exponent > order())
            throw invariant_error("power series: coefficient of z^" + std::to_string(exponent) +
                                  " beyond truncation order " + std::to_string(order()));
        if (exponent < lead_) return value_type{0};
        return coeffs_[static_cast<std::size_t>(exponent - lead_)];
    }

    basic_power_series truncated(int new_order) const {
        if (new_order > order()) throw invariant_error("power series: cannot extend truncation order");
        check_span(lead_, new_order);
        return {lead_, {coeffs_.begin(), coeffs_.begin() + (new_order - lead_ + 1)}};
    }

    friend bool operator==(const basic_power_series&, const basic_power_series&) = default;

private:
    static void check_span(int lead, int order) {
        if (lead < 0) throw invariant_error("power series: negative leading exponent");
        if (order < lead) throw invariant_error("power series: order below leading exponent");
    }

    int lead_;
    std::vector<value_type> coeffs_;
};

using power_series = basic_power_series<double>;

// ---------------------------------------------------------------------------
// Coefficient decay models. They turn a truncated series into an honest
// statement about what was dropped.

struct no_decay_model {};

// |c_m| <= scale * rho^m
struct geometric_decay {
    double rho;
    double scale;
};

// |c_m| <= scale / m^q   (m >= 1)
struct power_decay {
    double q;
    double scale;
};

using tail_model = std::variant<no_decay_model, geometric_decay, power_decay>;

enum class tail_quality { rigorous, heuristic, unbounded };

inline const char* to_string(tail_quality q) {
    switch (q) {
        case tail_quality::rigorous: return "rigorous";
        case tail_quality::heuristic: return "heuristic";
        case tail_quality::unbounded: return "unbounded";
    }
    return "unbounded";
}

template <class Real>
struct basic_eval_result {
    std::complex<Real> value;
    Real tail_bound = 0;
    tail_quality quality = tail_quality::rigorous;
};

using eval_result = basic_eval_result<double>;

inline void validate(const tail_model& model) {
    if (const auto* g = std::get_if<geometric_decay>(&model)) {
        if (!(g->rho >= 0) || !(g->scale >= 0))
            throw invariant_error("geometric decay model needs rho >= 0 and scale >= 0");
    } else if (const auto* p = std::get_if<power_decay>(&model)) {
        if (!(p->q >= 0) || !(p->scale >= 0))
            throw invariant_error("power decay model needs q >= 0 and scale >= 0");
    }
}

// Bound on sum_{m > order} |c_m| |z|^m under `model`. Nonincreasing in order.
inline double evaluation_tail(const tail_model& model, int order, double abs_z) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (const auto* g = std::get_if<geometric_decay>(&model)) {
        const double x = g->rho * abs_z;
        if (g->scale == 0) return 0;
        if (x >= 1) return inf;
        return g->scale * std::pow(x, order + 1) / (1 - x);
    }
    if (const auto* p = std::get_if<power_decay>(&model)) {
        if (p->scale == 0) return 0;
        if (abs_z >= 1) return inf;
        // m^-q <= (order+1)^-q for every dropped m.
        return p->scale * std::pow(static_cast<double>(order + 1), -p->q) *
               std::pow(abs_z, order + 1) / (1 - abs_z);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Arithmetic

template <class Real>
basic_power_series<Real> operator+(const basic_power_series<Real>& s,
                                   const basic_power_series<Real>& t) {
    const int lead = std::min(s.lead(), t.lead());
    const int order = std::min(s.order(), t.order());
    std::vector<std::complex<Real>> c(static_cast<std::size_t>(order - lead + 1));
    for (int m = lead; m <= order; ++m) c[m - lead] = s[m] + t[m];
    return {lead, std::move(c)};
}

template <class Real>
basic_power_series<Real> operator*(std::complex<Real> k, const basic_power_series<Real>& s) {
    std::vector<std::complex<Real>> c(s.coeffs().begin(), s.coeffs().end());
    for (auto& x : c) x *= k;
    return {s.lead(), std::move(c)};
}

template <class Real>
basic_power_series<Real> operator*(Real k, const basic_power_series<Real>& s) {
    return std::complex<Real>{k} * s;
}

template <class Real>
basic_power_series<Real> operator-(const basic_power_series<Real>& s,
                                   const basic_power_series<Real>& t) {
    return s + Real{-1} * t;
}

// Exact multiplication by z^n (n may be negative when the division is exact).
template <class Real>
basic_power_series<Real> shift(const basic_power_series<Real>& s, int n) {
    if (s.lead() + n < 0) throw invariant_error("shift: series does not vanish to the required order");
    return {s.lead() + n, {s.coeffs().begin(), s.coeffs().end()}};
}

// Cauchy product. The result is valid up to min(K_s + lead_t, K_t + lead_s).
template <class Real>
basic_power_series<Real> multiply(const basic_power_series<Real>& s,
                                  const basic_power_series<Real>& t) {
    const int lead = s.lead() + t.lead();
    const int order = std::min(s.order() + t.lead(), t.order() + s.lead());
    std::vector<std::complex<Real>> c(static_cast<std::size_t>(order - lead + 1));
    const auto sc = s.coeffs();
    const auto tc = t.coeffs();
    for (std::size_t m = 0; m < c.size(); ++m) {
        const std::size_t i_max = std::min(m, sc.size() - 1);
        std::complex<Real> acc{0};
        for (std::size_t i = 0; i <= i_max; ++i) {
            if (m - i < tc.size()) acc += sc[i] * tc[m - i];
        }
        c[m] = acc;
    }
    return {lead, std::move(c)};
}

template <class Real>
basic_power_series<Real> differentiate(const basic_power_series<Real>& s) {
    if (s.order() < 1) throw invariant_error("differentiate: order-0 series has no known derivative");
    const int lead = std::max(s.lead() - 1, 0);
    const int order = s.order() - 1;
    std::vector<std::complex<Real>> c(static_cast<std::size_t>(order - lead + 1));
    for (int m = lead + 1; m <= s.order(); ++m) c[m - 1 - lead] = Real(m) * s[m];
    return {lead, std::move(c)};
}

// Coefficient-wise product, valid to min(K_s, K_t).
template <class Real>
basic_power_series<Real> hadamard(const basic_power_series<Real>& s,
                                  const basic_power_series<Real>& t) {
    const int order = std::min(s.order(), t.order());
    const int lead = std::min(std::max(s.lead(), t.lead()), order);
    std::vector<std::complex<Real>> c(static_cast<std::size_t>(order - lead + 1));
    for (int m = lead; m <= order; ++m) c[m - lead] = s[m] * t[m];
    return {lead, std::move(c)};
}

// u(z)^t for u = 1 + u_1 z + ..., principal branch, to the order of u.
//
// From g' u = t u' g:  m g_m = sum_{j=1..m} (t j - (m - j)) u_j g_{m-j}.
template <class Real>
basic_power_series<Real> real_power(const basic_power_series<Real>& u, Real t) {
    if (u.lead() != 0 || u.coeffs().front() != std::complex<Real>{1})
        throw invariant_error("real_power: series must start with constant term exactly 1");
    const int order = u.order();
    std::vector<std::complex<Real>> g(static_cast<std::size_t>(order + 1));
    g[0] = 1;
    if (t == Real{0}) return {0, std::move(g)};
    const auto uc = u.coeffs();
    for (int m = 1; m <= order; ++m) {
        std::complex<Real> acc{0};
        for (int j = 1; j <= m; ++j) {
            if (uc[j] == std::complex<Real>{0}) continue;
            acc += (t * Real(j) - Real(m - j)) * uc[j] * g[m - j];
        }
        g[m] = acc / Real(m);
    }
    return {0, std::move(g)};
}

// ---------------------------------------------------------------------------
// The mu-form  (z^p / f(z))^mu = 1 - sum_{k>=1} b_k z^k.

template <class Real>
struct basic_mu_form {
    std::vector<std::complex<Real>> b;  // b[k-1] holds b_k
    bool starts_at_p = true;
};

using mu_form = basic_mu_form<double>;

inline constexpr double default_form_tolerance = 1e-12;

template <class Real>
void require_normalized(const basic_power_series<Real>& f, int p) {
    if (p < 1) throw invariant_error("p must be a positive integer");
    if (f.lead() != p) throw invariant_error("f must start at z^p (lead = p)");
    if (f.coeffs().front() != std::complex<Real>{1})
        throw invariant_error("f must have leading coefficient exactly 1");
}

template <class Real>
basic_mu_form<Real> to_mu_form(const basic_power_series<Real>& f, Real mu,
                               Real tol_form = Real(default_form_tolerance)) {
    if (!(mu > 0)) throw invariant_error("to_mu_form: mu must be positive");
    const int p = f.lead();
    require_normalized(f, p);
    const auto g = real_power(shift(f, -p), -mu);
    basic_mu_form<Real> out;
    out.b.reserve(g.coeffs().size() - 1);
    for (std::size_t k = 1; k < g.coeffs().size(); ++k) {
        out.b.push_back(-g.coeffs()[k]);
        if (static_cast<int>(k) < p && std::abs(out.b.back()) > tol_form) out.starts_at_p = false;
    }
    return out;
}

// Inverse of to_mu_form: f = z^p (1 - sum b_k z^k)^(-1/mu), to order p + len(b).
template <class Real>
basic_power_series<Real> from_mu_form(std::span<const std::complex<Real>> b, int p, Real mu) {
    if (p < 1) throw invariant_error("p must be a positive integer");
    if (!(mu > 0)) throw invariant_error("from_mu_form: mu must be positive");
    std::vector<std::complex<Real>> g(b.size() + 1);
    g[0] = 1;
    for (std::size_t k = 0; k < b.size(); ++k) g[k + 1] = -b[k];
    return shift(real_power(basic_power_series<Real>{0, std::move(g)}, Real(-1) / mu), p);
}

// ---------------------------------------------------------------------------
// Evaluation

template <class Real>
std::complex<Real> horner(std::span<const std::complex<Real>> c, std::complex<Real> z) {
    std::complex<Real> acc{0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

template <class Real>
std::complex<Real> int_power(std::complex<Real> z, int n) {
    std::complex<Real> r{1};
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

template <class Real>
basic_eval_result<Real> evaluate(const basic_power_series<Real>& s, std::complex<Real> z,
                                 const tail_model& decay = no_decay_model{}) {
    const Real r = std::abs(z);
    if (!(r < 1)) throw precondition_error("evaluate: |z| must be < 1");
    validate(decay);
    basic_eval_result<Real> out;
    out.value = int_power(z, s.lead()) * horner(s.coeffs(), z);
    if (std::holds_alternative<no_decay_model>(decay)) {
        out.tail_bound = 0;
        out.quality = tail_quality::unbounded;
    } else {
        out.tail_bound = static_cast<Real>(evaluation_tail(decay, s.order(), static_cast<double>(r)));
        out.quality = std::isfinite(static_cast<double>(out.tail_bound)) ? tail_quality::rigorous
                                                                         : tail_quality::unbounded;
    }
    return out;
}

inline double near_zero_threshold(double abs_z, int p) {
    return 1e-12 * std::max(1.0, std::pow(abs_z, p));
}

// F(z) = z f'(z) / f(z).
//
// With f = z^L u(z) the common factor z^L cancels: z f'(z) = z^L sum (L+j) c_j z^j,
// so F is the ratio of two Horner sums (the stored part of z f' over that of f).
template <class Real>
std::complex<Real> log_derivative(const basic_power_series<Real>& f, std::complex<Real> z) {
    const Real r = std::abs(z);
    if (!(r < 1)) throw precondition_error("log_derivative: |z| must be < 1");
    const auto u = horner(f.coeffs(), z);
    const auto f_val = int_power(z, f.lead()) * u;
    if (std::abs(f_val) <= near_zero_threshold(static_cast<double>(r), f.lead()))
        throw near_zero_error("log_derivative: near-zero denominator f(z)");
    const auto c = f.coeffs();
    std::complex<Real> num{0};
    for (std::size_t j = c.size(); j-- > 0;) num = num * z + Real(f.lead() + static_cast<int>(j)) * c[j];
    return num / u;
}

}  // namespace pvalent
