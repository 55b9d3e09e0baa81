#include "doilab/exponent.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "doilab/errors.hpp"

namespace doilab {

Exponent::Exponent(double value) : value_(value), infinite_(false) {
    if (std::isnan(value) || value < 1.0) {
        throw DomainError("exponent must lie in [1, inf], got " + std::to_string(value));
    }
    if (std::isinf(value)) {
        value_ = 0.0;
        infinite_ = true;
    }
}

Exponent Exponent::parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "\xE2\x88\x9E") {
        return infinity();
    }
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw DomainError("cannot parse exponent '" + text + "'");
    }
    return Exponent(v);
}

double Exponent::value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

Exponent Exponent::conjugate() const noexcept {
    if (infinite_) return Exponent(1.0);
    if (value_ == 1.0) return infinity();
    return Exponent(value_ / (value_ - 1.0));
}

std::string Exponent::to_string() const {
    if (infinite_) return "inf";
    char buf[32];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, value_);
        if (std::strtod(buf, nullptr) == value_) break;
    }
    return buf;
}

}  // namespace doilab
