#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace confract {

/// Exact rational number with reduced int64 numerator/denominator.
/// Denominator is always positive.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    explicit Rational(std::int64_t n) : num(n), den(1) {}

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return {a.num * b.den - b.num * a.den, a.den * b.den};
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return {a.num * b.num, a.den * b.den};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace confract
