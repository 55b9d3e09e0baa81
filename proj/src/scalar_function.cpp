#include "doilab/scalar_function.hpp"

namespace doilab {

ScalarFunction abs_value() {
    return {"abs", [](Complex z) { return Complex(std::abs(z)); }, [](Complex) { return Complex(1.0); }};
}

ScalarFunction abs_value_lipschitz() {
    return {"abs_lip", [](Complex z) { return Complex(std::abs(z)); },
            [](Complex) { return Complex(0.0); }};
}

ScalarFunction identity_function() {
    return {"identity", [](Complex z) { return z; }, [](Complex) { return Complex(1.0); }};
}

}  // namespace doilab
