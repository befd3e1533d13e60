// Certify the telescoping example with the Taylor criterion, then try to
// falsify it by sampling the defining inequality.

#include <cstdio>

#include "pvalent/pvalent.hpp"

int main() {
    using namespace pvalent;
    const class_params cp{3, 2.0, -1.0, std::nullopt};
    const int K = 10'000;

    const auto f = telescoping_example(cp, 0.0, K);
    const auto cert = certify_taylor(f, cp, telescoping_example_tail(cp));
    std::printf("lhs = %.12f  threshold = %.1f  tail <= %.3e  -> %s\n", cert.lhs_sum, cert.threshold,
                cert.tail_bound, to_string(cert.outcome));

    const auto rep = sample_membership(f, cp, {64, 64, 0.95});
    std::printf("sampled %zu points, worst slack %.6f, %zu violations\n", rep.evaluated, rep.worst_slack,
                rep.violations.size());
}
