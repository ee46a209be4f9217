#pragma once

#include <stdexcept>
#include <string>

namespace nnph {

// Malformed or out-of-contract input. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Degenerate numerics or internal invariant failure. Exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nnph
