#pragma once

#include <functional>
#include <string>

#include "doilab/linalg.hpp"

namespace doilab {

/// A scalar function together with the value its divided difference takes on
/// the diagonal λ1 = λ2.
struct ScalarFunction {
    std::string name;
    std::function<Complex(Complex)> eval;
    std::function<Complex(Complex)> diagonal;
};

/// f(t) = |t| with divided difference 1 on the diagonal.
ScalarFunction abs_value();

/// f(t) = |t| with divided difference 0 on the diagonal (Lipschitz convention).
ScalarFunction abs_value_lipschitz();

/// f(t) = t; divided difference identically 1.
ScalarFunction identity_function();

}  // namespace doilab
