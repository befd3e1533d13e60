// How large may delta grow before the operator certificate stops holding?

#include <cstdio>

#include "pvalent/pvalent.hpp"

int main() {
    using namespace pvalent;
    const class_params cp{1, 2.0, 0.0, std::nullopt};
    operator_params op;  // a = b = 1, c = 4, d = e = 1, p = 1
    for (double delta : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        op.delta = delta;
        const auto cert = certify_operator(op, cp);
        std::printf("delta = %5.1f  lhs = %.10f  margin = %+.6f  %s\n", delta, cert.lhs_sum, cert.margin,
                    to_string(cert.outcome));
    }
}
