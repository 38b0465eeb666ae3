// rational.hpp — Exact reduced fractions for frequency bookkeeping
//
// Resonance selection compares sums of signed frequencies against zero, so
// frequencies are carried as exact rationals and converted to double only
// where a scalar coefficient is finally formed.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace effham {

class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t numerator, std::int64_t denominator = 1);

    // Accepts "p", "p/q", or a decimal such as "-2.5" or "1.25e-3". A decimal
    // whose reduced denominator exceeds `max_denominator` is rejected.
    static Rational parse(std::string_view text, std::int64_t max_denominator = 1'000'000);

    // Closest fraction with denominator <= max_denominator (continued fractions).
    static Rational approximate(double value, std::int64_t max_denominator = 1'000'000);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const;

    bool is_zero() const noexcept { return num_ == 0; }
    int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& b) { return *this = *this + b; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    std::int64_t num_{0};
    std::int64_t den_{1};
};

// Largest rational g such that every input is an integer multiple of g.
Rational rational_gcd(const Rational& a, const Rational& b);

} // namespace effham
