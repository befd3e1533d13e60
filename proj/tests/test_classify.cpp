#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pvalent/classify.hpp"

using namespace pvalent;

namespace {

const certify_options assume_finite_opts{true};

// F for the mu-form f: p + (1/mu) sum k b_k z^k / (1 - sum b_k z^k), b[i] = b_{i+1}.
cplx mu_form_F(const std::vector<cplx>& b, int p, double mu, cplx z) {
    cplx num{0}, den{1}, zk{1};
    for (std::size_t i = 0; i < b.size(); ++i) {
        zk *= z;
        num += double(i + 1) * b[i] * zk;
        den -= b[i] * zk;
    }
    return double(p) + num / (mu * den);
}

}  // namespace

TEST(ClassParams, Validation) {
    EXPECT_NO_THROW((class_params{1, 1.5, 0, std::nullopt}.validate()));
    EXPECT_THROW((class_params{0, 2, 0, std::nullopt}.validate()), invariant_error);
    EXPECT_THROW((class_params{1, 1, 0, std::nullopt}.validate()), invariant_error);
    EXPECT_THROW((class_params{1, 2, 0.1, std::nullopt}.validate()), invariant_error);
    EXPECT_THROW((class_params{1, 2, 0, 0.0}.validate()), invariant_error);
    EXPECT_THROW((class_params{1, 2, 0, std::nullopt}.require_mu()), invariant_error);
}

TEST(Conic, ShapeFollowsBeta) {
    auto shape = [](double beta) { return classify_conic({1, 2, beta, std::nullopt}); };
    EXPECT_EQ(shape(-2).kind, conic_kind::elliptic);
    EXPECT_DOUBLE_EQ(shape(-2).eccentricity, 0.5);
    EXPECT_EQ(shape(-1).kind, conic_kind::parabolic);
    EXPECT_DOUBLE_EQ(shape(-1).eccentricity, 1);
    EXPECT_EQ(shape(-0.25).kind, conic_kind::hyperbolic);
    EXPECT_DOUBLE_EQ(shape(-0.25).eccentricity, 4);
    EXPECT_EQ(shape(0).kind, conic_kind::halfplane);
    EXPECT_TRUE(std::isinf(shape(0).eccentricity));
}

TEST(Slack, Examples) {
    for (int p = 1; p <= 3; ++p) EXPECT_DOUBLE_EQ(slack(double(p), {p, 1.7, -0.3, std::nullopt}), p * 0.7);
    EXPECT_DOUBLE_EQ(slack(1.5, {1, 2, -1, std::nullopt}), 0);
    EXPECT_NEAR(slack(19.63, {1, 1.1, 0, std::nullopt}), 1.1 - 19.63, 1e-14);
}

TEST(Conic, ParabolaVertexAndDirectrix) {
    const std::vector<double> v0{0.0};
    const auto vertex = conic_boundary({1, 2, -1, std::nullopt}, v0);
    ASSERT_EQ(vertex.size(), 1u);
    EXPECT_DOUBLE_EQ(vertex[0].u, 1.5);

    const std::vector<double> v1{0.7};
    const auto line = conic_boundary({1, 2, 0, std::nullopt}, v1);
    ASSERT_EQ(line.size(), 1u);
    EXPECT_DOUBLE_EQ(line[0].u, 2);
    EXPECT_DOUBLE_EQ(line[0].v, 0.7);
}

TEST(Conic, BoundarySatisfiesFocusDirectrixEquation) {
    std::vector<double> v;
    for (double x = -6; x <= 6; x += 0.05) v.push_back(x);
    for (const class_params cp : {class_params{2, 1.5, -2, std::nullopt}, class_params{1, 3, -0.4, std::nullopt},
                                  class_params{3, 1.2, -1, std::nullopt}, class_params{1, 2, -7, std::nullopt}}) {
        const auto pts = conic_boundary(cp, v);
        EXPECT_FALSE(pts.empty());
        for (const auto& pt : pts) {
            const double residual = (pt.u - cp.p * cp.alpha) - cp.beta * std::hypot(pt.u - cp.p, pt.v);
            EXPECT_LE(std::abs(residual), 1e-10);
            EXPECT_LE(pt.u, cp.p * cp.alpha);
            EXPECT_LE(std::abs(slack({pt.u, pt.v}, cp)), 1e-10);
        }
    }
}

TEST(Conic, EllipseOmitsPointsOutsideAndHasTwoPerLevel) {
    // focus 2, directrix 3, eccentricity 1/2
    const class_params cp{2, 1.5, -2, std::nullopt};
    const std::vector<double> v{0.0, 100.0};
    const auto pts = conic_boundary(cp, v);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_LT(pts[0].u, pts[1].u);
    // vertices: (u - 3) = -2|u - 2| -> u = 7/3 and u = 1
    EXPECT_NEAR(pts[0].u, 1.0, 1e-14);
    EXPECT_NEAR(pts[1].u, 7.0 / 3.0, 1e-14);
}

TEST(TaylorCertificate, MonomialIsMember) {
    const class_params cp{2, 1.5, -0.5, std::nullopt};
    const std::vector<cplx> zeros(10);
    const auto cert = certify_taylor(zeros, cp, no_decay_model{}, assume_finite_opts);
    EXPECT_EQ(cert.lhs_sum, 0);
    EXPECT_EQ(cert.outcome, verdict::proven_member);
    EXPECT_EQ(cert.tail_handling, truncation::assumed_finite);
    // without a tail model or the finite assumption the verdict is not upgraded
    const auto unsure = certify_taylor(zeros, cp);
    EXPECT_EQ(unsure.outcome, verdict::inconclusive);
    EXPECT_EQ(unsure.tail_handling, truncation::heuristic);
    EXPECT_EQ(certify_taylor(zeros, cp, geometric_decay{0.5, 0}).outcome, verdict::proven_member);
}

TEST(TaylorCertificate, SingleCoefficient) {
    const class_params cp{1, 2, 0, std::nullopt};
    const std::vector<cplx> ok{0.2};
    const auto yes = certify_taylor(ok, cp, no_decay_model{}, assume_finite_opts);
    EXPECT_NEAR(yes.lhs_sum, 0.8, 1e-15);
    EXPECT_EQ(yes.threshold, 1);
    EXPECT_EQ(yes.margin, yes.threshold - yes.lhs_sum);
    EXPECT_EQ(yes.outcome, verdict::proven_member);

    const auto rep = sample_membership(power_series{1, {1, 0.2}}, cp, {64, 64, 0.99});
    EXPECT_TRUE(rep.violations.empty());

    const std::vector<cplx> too_big{0.3};
    const auto no = certify_taylor(too_big, cp, no_decay_model{}, assume_finite_opts);
    EXPECT_NEAR(no.lhs_sum, 1.2, 1e-15);
    EXPECT_EQ(no.outcome, verdict::inconclusive);
}

TEST(TaylorCertificate, BoundaryIsInconclusive) {
    const class_params cp{1, 2, 0, std::nullopt};
    const std::vector<cplx> exact{0.25};  // (2 + 2) * 0.25 = 1 = threshold
    EXPECT_EQ(certify_taylor(exact, cp, no_decay_model{}, assume_finite_opts).outcome, verdict::inconclusive);
}

TEST(TaylorCertificate, WeightsIncrease) {
    for (const class_params cp : {class_params{1, 1.01, 0, std::nullopt}, class_params{4, 3, -9, std::nullopt}}) {
        for (int k = cp.p + 1; k < 200; ++k) {
            EXPECT_LT(taylor_weight(cp, k), taylor_weight(cp, k + 1));
            EXPECT_GT(taylor_weight(cp, k), k);
        }
    }
}

TEST(TaylorCertificate, RejectsWrongShape) {
    const class_params cp{2, 2, 0, std::nullopt};
    EXPECT_THROW(certify_taylor(power_series{1, {1, 0.1}}, cp), invariant_error);
    EXPECT_THROW(certify_taylor(power_series{2, {0.5, 0.1}}, cp), invariant_error);
}

TEST(WeightedTail, MatchesBruteForceSums) {
    const double A = 3.5, B = 1.25;
    const int K = 20;
    {
        const geometric_decay g{0.7, 2};
        long double brute = 0;
        for (int k = K + 1; k < 4000; ++k) brute += (A + B * k) * g.scale * std::pow(g.rho, k);
        EXPECT_NEAR(weighted_tail(g, A, B, K), static_cast<double>(brute), 1e-12 * static_cast<double>(brute));
    }
    {
        const power_decay pw{3.5, 2};
        long double brute = 0;
        for (long k = K + 1; k < 2'000'000; ++k) brute += (A + B * k) * pw.scale * std::pow(double(k), -pw.q);
        EXPECT_GE(weighted_tail(pw, A, B, K), static_cast<double>(brute));
        EXPECT_LE(weighted_tail(pw, A, B, K), 1.2 * static_cast<double>(brute));
    }
    EXPECT_TRUE(std::isinf(weighted_tail(power_decay{2, 1}, A, B, K)));
    EXPECT_TRUE(std::isinf(weighted_tail(geometric_decay{1, 1}, A, B, K)));
    EXPECT_EQ(weighted_tail(no_decay_model{}, A, B, K), 0);
}

TEST(TaylorCertificate, TailCanBlockProof) {
    const class_params cp{1, 2, 0, std::nullopt};
    const std::vector<cplx> a{0.2};  // lhs 0.8
    EXPECT_EQ(certify_taylor(a, cp, geometric_decay{0.1, 0.01}).outcome, verdict::proven_member);
    const auto blocked = certify_taylor(a, cp, geometric_decay{0.9, 0.05});
    EXPECT_GT(blocked.tail_bound, 0.2);
    EXPECT_EQ(blocked.outcome, verdict::inconclusive);
    EXPECT_EQ(blocked.tail_handling, truncation::bounded);
}

TEST(MuFormCertificate, Examples) {
    const class_params cp{1, 2, -1, 1.0};
    const std::vector<cplx> zero(5);
    EXPECT_EQ(certify_mu_form(zero, cp, no_decay_model{}, assume_finite_opts).outcome, verdict::proven_member);

    const std::vector<cplx> b{0.2};
    const auto cert = certify_mu_form(b, cp, no_decay_model{}, assume_finite_opts);
    EXPECT_NEAR(cert.lhs_sum, 0.6, 1e-15);
    EXPECT_EQ(cert.threshold, 1);
    EXPECT_EQ(cert.outcome, verdict::proven_member);

    // f = z / (1 - 0.2 z): sampling agrees
    const auto f = from_mu_form<double>(b, 1, 1.0).truncated(1);
    std::vector<cplx> c(65);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::pow(0.2, double(k));
    EXPECT_TRUE(sample_membership(power_series{1, c}, cp, {32, 32, 0.99}).violations.empty());
    (void)f;
}

TEST(MuFormCertificate, FormViolation) {
    const class_params cp{2, 2, -1, 1.0};
    const std::vector<cplx> b{0.1, 0.05};
    EXPECT_THROW(certify_mu_form(b, cp), precondition_error);
    EXPECT_THROW(check_mu_form_necessary(b, cp), precondition_error);
    EXPECT_THROW(certify_mu_form(b, class_params{2, 2, -1, std::nullopt}), invariant_error);
}

TEST(NecessaryCheck, Examples) {
    const class_params cp{1, 1.1, 0, 1.0};
    const std::vector<cplx> zero(3);
    const auto none = check_mu_form_necessary(zero, cp);
    EXPECT_EQ(none.outcome, verdict::inconclusive);
    EXPECT_EQ(none.tail_handling, truncation::heuristic);
    EXPECT_NEAR(none.margin, 0.1, 1e-15);

    const std::vector<cplx> b{0.95};
    const auto bad = check_mu_form_necessary(b, cp);
    EXPECT_NEAR(bad.lhs_sum, 1.045, 1e-14);
    EXPECT_NEAR(bad.threshold, 0.1, 1e-15);
    EXPECT_EQ(bad.outcome, verdict::necessary_violated);
    EXPECT_EQ(bad.tail_handling, truncation::bounded);

    const class_params edge{1, 2, 0, 1.0};
    const std::vector<cplx> half{0.5};  // (1 + 1) * 0.5 = 1 = threshold
    EXPECT_EQ(check_mu_form_necessary(half, edge).outcome, verdict::inconclusive);
}

TEST(NecessaryCheck, Hypotheses) {
    const class_params cp{1, 2, 0, 1.0};
    const std::vector<cplx> negative{0.3, -0.1};
    const std::vector<cplx> complex_b{{0.3, 0.1}};
    const std::vector<cplx> too_much{0.6, 0.4};
    EXPECT_THROW(check_mu_form_necessary(negative, cp), precondition_error);
    EXPECT_THROW(check_mu_form_necessary(complex_b, cp), precondition_error);
    EXPECT_THROW(check_mu_form_necessary(too_much, cp), precondition_error);
}

// Instances that violate the necessary inequality by at least 0.5 fail the
// defining inequality along the real axis as z -> 1-.
TEST(NecessaryCheck, ContrapositiveAlongRealAxis) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u01(0, 1);
    int found = 0;
    while (found < 60) {
        const int p = 1 + static_cast<int>(u01(rng) * 3);
        const double mu = std::vector<double>{0.5, 1, 2}[static_cast<std::size_t>(u01(rng) * 3)];
        const class_params cp{p, 1 + 0.5 * u01(rng), -2 * u01(rng), mu};
        std::vector<cplx> b(static_cast<std::size_t>(p + 5));
        double total = 0;
        for (int k = p; k <= p + 5; ++k) total += (b[k - 1] = u01(rng)).real();
        const double target = 0.3 + 0.65 * u01(rng);
        for (auto& x : b) x *= target / total;

        const auto cert = check_mu_form_necessary(b, cp);
        if (cert.lhs_sum - cert.threshold < 0.5) continue;
        ++found;
        EXPECT_EQ(cert.outcome, verdict::necessary_violated);
        double best = INFINITY;
        for (double x : {0.9, 0.99, 0.999, 0.9999}) best = std::min(best, slack(mu_form_F(b, p, mu, x), cp));
        EXPECT_LE(best, 0);

        // the closed form agrees with the series route where truncation is harmless
        const auto f = from_mu_form<double>(b, p, mu);
        std::vector<cplx> long_b(b);
        long_b.resize(400);
        const auto f_long = from_mu_form<double>(long_b, p, mu);
        EXPECT_LE(std::abs(log_derivative(f_long, cplx{0.5}) - mu_form_F(b, p, mu, 0.5)), 1e-9);
        (void)f;
    }
}

TEST(TelescopingExample, PEqualsOneIsTrivial) {
    const auto f = telescoping_example({1, 2, -1, std::nullopt}, 0.3, 20);
    for (int k = 2; k <= 20; ++k) EXPECT_EQ(f[k], cplx(0));
    EXPECT_EQ(f[1], cplx(1));
}

TEST(TelescopingExample, CertificateTelescopes) {
    const class_params cp{3, 2, -1, std::nullopt};
    const int K = 10'000;
    const auto cert = certify_taylor(telescoping_example(cp, 0, K), cp, telescoping_example_tail(cp));
    EXPECT_NEAR(cert.lhs_sum, 2 - 6.0 / K, 1e-12);
    EXPECT_EQ(cert.threshold, 3);
    EXPECT_EQ(cert.outcome, verdict::proven_member);
    EXPECT_EQ(cert.tail_handling, truncation::bounded);
    EXPECT_GE(cert.tail_bound, 6.0 / K);  // the exact remainder is 6/K
}

TEST(TelescopingExample, TailModelDominatesCoefficients) {
    for (const class_params cp : {class_params{2, 1.3, 0, std::nullopt}, class_params{5, 4, -3, std::nullopt}}) {
        const auto f = telescoping_example(cp, 1.0, 500);
        const auto model = std::get<power_decay>(telescoping_example_tail(cp));
        for (int k = cp.p + 1; k <= 500; ++k) EXPECT_LE(std::abs(f[k]), model.scale / std::pow(k, model.q));
    }
}

TEST(TelescopingExample, LhsApproachesLimitAndIgnoresPhase) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u01(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const class_params cp{1 + trial % 4, 1 + 3 * u01(rng), -3 * u01(rng), std::nullopt};
        const int K = 50 + static_cast<int>(500 * u01(rng));
        const auto c0 = certify_taylor(telescoping_example(cp, 0, K), cp, telescoping_example_tail(cp));
        const auto c1 = certify_taylor(telescoping_example(cp, std::numbers::pi / 2, K), cp, telescoping_example_tail(cp));
        const auto c2 = certify_taylor(telescoping_example(cp, 2 * std::numbers::pi * u01(rng), K), cp, telescoping_example_tail(cp));
        const double p = cp.p;
        EXPECT_LE(std::abs(c0.lhs_sum - (p - 1) * (cp.alpha - 1)), p * (p - 1) * (cp.alpha - 1) / K + 1e-12);
        EXPECT_NEAR(c1.lhs_sum, c0.lhs_sum, 1e-14);
        EXPECT_NEAR(c2.lhs_sum, c0.lhs_sum, 1e-14);
        EXPECT_EQ(c0.outcome, verdict::proven_member);
        EXPECT_EQ(c1.outcome, c0.outcome);
    }
}

TEST(Sampling, MonomialNeverViolates) {
    for (int p = 1; p <= 3; ++p) {
        const class_params cp{p, 1.4, -0.6, std::nullopt};
        const auto rep = sample_membership(power_series::monomial(p, p + 10), cp);
        EXPECT_TRUE(rep.violations.empty());
        EXPECT_TRUE(rep.skipped.empty());
        EXPECT_EQ(rep.evaluated, 64u * 64u);
        EXPECT_NEAR(rep.worst_slack, p * 0.4, 1e-12);
    }
}

TEST(Sampling, FindsTheNecessaryCounterexample) {
    const class_params cp{1, 1.1, 0, 1.0};
    std::vector<cplx> c(1025);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::pow(0.95, double(k));
    const auto rep = sample_membership(power_series{1, c}, cp, {64, 64, 0.999}, geometric_decay{0.95, 1});
    ASSERT_FALSE(rep.violations.empty());
    EXPECT_LT(rep.worst_slack, -18);
    EXPECT_EQ(rep.quality, tail_quality::rigorous);
    // the point z = 0.999 is on the grid (last radius, angle 0)
    const auto hit = std::find_if(rep.violations.begin(), rep.violations.end(),
                                  [](const violation& v) { return v.z == cplx{0.999}; });
    ASSERT_NE(hit, rep.violations.end());
    EXPECT_NEAR(hit->slack, 1.1 - 19.62708537782137, 1e-8);
}

TEST(Sampling, ViolationsAreOrderedAndDeterministic) {
    const class_params cp{1, 1.2, -0.5, std::nullopt};
    const power_series f{1, {1, 0.6, 0.3, -0.2}};
    const auto a = sample_membership(f, cp, {40, 24, 0.98});
    const auto b = sample_membership(f, cp, {40, 24, 0.98});
    ASSERT_FALSE(a.violations.empty());
    ASSERT_EQ(a.violations.size(), b.violations.size());
    double worst = INFINITY;
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
        EXPECT_EQ(a.violations[i].z, b.violations[i].z);
        EXPECT_EQ(a.violations[i].slack, b.violations[i].slack);
        EXPECT_LE(a.violations[i].slack, 0);
        worst = std::min(worst, a.violations[i].slack);
        if (i) {
            const auto& prev = a.violations[i - 1].z;
            const auto& cur = a.violations[i].z;
            const double ap = std::fmod(std::arg(prev) + 2 * std::numbers::pi, 2 * std::numbers::pi);
            const double ac = std::fmod(std::arg(cur) + 2 * std::numbers::pi, 2 * std::numbers::pi);
            EXPECT_TRUE(std::abs(prev) < std::abs(cur) - 1e-15 ||
                        (std::abs(std::abs(prev) - std::abs(cur)) < 1e-15 && ap < ac));
        }
    }
    EXPECT_EQ(worst, a.worst_slack);
}

TEST(Sampling, SkipsZerosOfF) {
    const class_params cp{1, 2, 0, std::nullopt};
    const auto rep = sample_membership(power_series{1, {1, 2}}, cp, {1, 2, 0.5});
    ASSERT_EQ(rep.skipped.size(), 1u);
    EXPECT_NEAR(rep.skipped[0].real(), -0.5, 1e-15);
    EXPECT_EQ(rep.evaluated, 1u);
}

TEST(Sampling, GridValidation) {
    const class_params cp{1, 2, 0, std::nullopt};
    const auto f = power_series::monomial(1, 3);
    EXPECT_THROW(sample_membership(f, cp, {0, 4, 0.5}), invariant_error);
    EXPECT_THROW(sample_membership(f, cp, {4, 4, 1.0}), invariant_error);
    EXPECT_THROW(sample_membership(power_series::monomial(2, 3), cp), invariant_error);
}
