#include "dlas/exact.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace dlas {

Rational rational_from_decimal(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw ConfigError("empty decimal literal");
    bool negative = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        negative = (s[0] == '-');
        i = 1;
    }
    BigInt num = 0;
    BigInt den = 1;
    bool seen_digit = false;
    bool seen_dot = false;
    bool seen_slash = false;
    BigInt slash_den = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            if (seen_slash) {
                slash_den = slash_den * 10 + (c - '0');
            } else {
                num = num * 10 + (c - '0');
                if (seen_dot) den *= 10;
            }
            seen_digit = true;
        } else if (c == '.' && !seen_dot && !seen_slash) {
            seen_dot = true;
        } else if (c == '/' && !seen_slash && !seen_dot && seen_digit) {
            seen_slash = true;
        } else {
            throw ConfigError("malformed decimal literal: '" + text + "'");
        }
    }
    if (!seen_digit) throw ConfigError("malformed decimal literal: '" + text + "'");
    if (seen_slash) {
        if (slash_den == 0) throw ConfigError("zero denominator in '" + text + "'");
        den = slash_den;
    }
    Rational r(num, den);
    return negative ? -r : r;
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ConfigError("non-finite value in exact context");
    int exp = 0;
    double mant = std::frexp(x, &exp); // x = mant * 2^exp, |mant| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    BigInt m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(m, 1);
    if (exp >= 0) {
        r *= Rational(BigInt(1) << exp, 1);
    } else {
        r /= Rational(BigInt(1) << (-exp), 1);
    }
    return r;
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

} // namespace dlas
