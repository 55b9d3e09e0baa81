#pragma once

#include <string>

namespace doilab {

/// An exponent p in [1, ∞] with an explicit infinity.
class Exponent {
public:
    /// Throws DomainError unless value >= 1 (NaN rejected; +inf maps to infinity()).
    explicit Exponent(double value);

    static Exponent infinity() noexcept { return Exponent(Infinite{}); }

    /// Accepts a decimal number or one of "inf", "infinity", "∞".
    static Exponent parse(const std::string& text);

    bool is_infinite() const noexcept { return infinite_; }
    bool is_finite() const noexcept { return !infinite_; }
    bool is_one() const noexcept { return !infinite_ && value_ == 1.0; }
    bool equals(double v) const noexcept { return !infinite_ && value_ == v; }

    /// Finite value; +inf for the infinite exponent.
    double value() const noexcept;

    /// Reciprocal 1/p (0 for p = ∞).
    double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

    /// Hölder conjugate: 1 <-> ∞, otherwise p/(p-1).
    Exponent conjugate() const noexcept;

    /// "inf" or the shortest round-tripping decimal.
    std::string to_string() const;

    friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    /// Orders finite exponents by value with ∞ last.
    friend bool operator<(const Exponent& a, const Exponent& b) noexcept {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const Exponent& a, const Exponent& b) noexcept {
        return a < b || a == b;
    }

private:
    struct Infinite {};
    explicit Exponent(Infinite) noexcept : value_(0.0), infinite_(true) {}

    double value_;
    bool infinite_;
};

}  // namespace doilab
