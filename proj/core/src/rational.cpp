#include "effham/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "effham/errors.hpp"

namespace effham {

namespace {

__extension__ typedef __int128 Wide;

std::int64_t narrow(Wide v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < -std::numeric_limits<std::int64_t>::max()) {
        throw InvalidArgument(std::string("Rational overflow in ") + what);
    }
    return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational reduce(Wide num, Wide den, const char* what) {
    if (den == 0) throw InvalidArgument(std::string("Rational: zero denominator in ") + what);
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const Wide g = wide_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational(narrow(num, what), narrow(den, what));
}

} // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw InvalidArgument("Rational: zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const auto g = std::gcd(numerator, denominator);
    num_ = g > 1 ? numerator / g : numerator;
    den_ = g > 1 ? denominator / g : denominator;
}

Rational Rational::parse(std::string_view text, std::int64_t max_denominator) {
    const std::string original(text);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw InvalidArgument("Rational: empty string");

    const auto slash = text.find('/');
    const auto parse_int = [&](std::string_view s) -> std::int64_t {
        bool neg = false;
        if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
            neg = s.front() == '-';
            s.remove_prefix(1);
        }
        if (s.empty() || s.size() > 18) throw InvalidArgument("Rational: bad integer in '" + original + "'");
        std::int64_t v = 0;
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw InvalidArgument("Rational: bad integer in '" + original + "'");
            }
            v = v * 10 + (c - '0');
        }
        return neg ? -v : v;
    };
    if (slash != std::string_view::npos) {
        const auto n = parse_int(text.substr(0, slash));
        const auto d = parse_int(text.substr(slash + 1));
        if (d <= 0) throw InvalidArgument("Rational: denominator must be positive in '" + original + "'");
        return Rational(n, d);
    }

    // Decimal: [sign] digits [. digits] [e|E [sign] digits]
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    Wide mantissa = 0;
    int scale = 0;
    int digits = 0;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            if (++digits > 30) throw InvalidArgument("Rational: too many digits in '" + original + "'");
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point) ++scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digits == 0) throw InvalidArgument("Rational: no digits in '" + original + "'");
    int exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            eneg = text[i] == '-';
            ++i;
        }
        if (i >= text.size()) throw InvalidArgument("Rational: bad exponent in '" + original + "'");
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 30) throw InvalidArgument("Rational: exponent too large in '" + original + "'");
        }
        if (eneg) exponent = -exponent;
    }
    if (i != text.size()) throw InvalidArgument("Rational: trailing characters in '" + original + "'");

    const int power = scale - exponent;
    Wide num = neg ? -mantissa : mantissa;
    Wide den = 1;
    const Wide limit = static_cast<Wide>(1) << 100;
    for (int p = 0; p < std::abs(power); ++p) {
        if (power > 0) {
            den *= 10;
        } else {
            num *= 10;
        }
        if (den > limit || num > limit || num < -limit) {
            throw InvalidArgument("Rational: magnitude out of range in '" + original + "'");
        }
    }
    const Wide g = wide_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (den > max_denominator) {
        throw InvalidArgument("Rational: '" + original + "' needs denominator " + std::to_string(static_cast<long long>(den)) +
                              " > " + std::to_string(max_denominator));
    }
    return reduce(num, den, "parse");
}

Rational Rational::approximate(double value, std::int64_t max_denominator) {
    if (!std::isfinite(value)) throw InvalidArgument("Rational::approximate: non-finite value");
    if (std::abs(value) > 1e15) throw InvalidArgument("Rational::approximate: value out of range");
    const bool neg = value < 0;
    double x = std::abs(value);
    // Convergents h/k of the continued fraction of x.
    Wide h_prev = 1, h = static_cast<Wide>(std::floor(x));
    Wide k_prev = 0, k = 1;
    double frac = x - std::floor(x);
    Wide best_h = h, best_k = k;
    for (int iter = 0; iter < 64 && frac > 1e-18; ++iter) {
        const double inv = 1.0 / frac;
        const auto a = static_cast<Wide>(std::floor(inv));
        frac = inv - std::floor(inv);
        const Wide h_next = a * h + h_prev;
        const Wide k_next = a * k + k_prev;
        if (k_next > max_denominator) {
            // Best semiconvergent within the bound.
            const Wide m = (max_denominator - k_prev) / k;
            const Wide hs = m * h + h_prev;
            const Wide ks = m * k + k_prev;
            const double err_conv = std::abs(x - static_cast<double>(best_h) / static_cast<double>(best_k));
            const double err_semi = std::abs(x - static_cast<double>(hs) / static_cast<double>(ks));
            if (ks > 0 && err_semi < err_conv) {
                best_h = hs;
                best_k = ks;
            }
            break;
        }
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        best_h = h;
        best_k = k;
        if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= 1e-15 * std::max(1.0, x)) break;
    }
    return reduce(neg ? -best_h : best_h, best_k, "approximate");
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return Rational(-num_, den_); }

Rational operator+(const Rational& a, const Rational& b) {
    return reduce(static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
                  static_cast<Wide>(a.den_) * b.den_, "add");
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return reduce(static_cast<Wide>(a.num_) * b.num_, static_cast<Wide>(a.den_) * b.den_, "mul");
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InvalidArgument("Rational: division by zero");
    return reduce(static_cast<Wide>(a.num_) * b.den_, static_cast<Wide>(a.den_) * b.num_, "div");
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<Wide>(a.num_) * b.den_ < static_cast<Wide>(b.num_) * a.den_;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
    // gcd(p/q, r/s) = gcd(p*s, r*q) / (q*s), then reduced.
    const Wide n = wide_gcd(static_cast<Wide>(a.num()) * b.den(), static_cast<Wide>(b.num()) * a.den());
    return reduce(n, static_cast<Wide>(a.den()) * b.den(), "gcd");
}

} // namespace effham
