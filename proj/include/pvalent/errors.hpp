#pragma once

#include <stdexcept>
#include <string>

namespace pvalent {

// Broken type invariant or malformed input (bad parameters, parse errors).
class invariant_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input is well-formed but outside an operation's domain (divergent series,
// |z| >= 1, unsupported branch, ...).
class precondition_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// f(z) vanishes (numerically) at the requested point.
class near_zero_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

}  // namespace pvalent
