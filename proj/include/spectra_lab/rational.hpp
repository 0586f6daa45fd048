#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace spectra_lab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline int sign(const Rational& q) { return q.sign(); }

// "3", "-7/2", " 1/10 "
inline Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    auto parse_int = [&](std::string_view s) {
        s = trim(s);
        std::size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
            neg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) throw parse_error("expected integer in rational literal '" + std::string(text) + "'");
        Integer v = 0;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw parse_error("invalid character in rational literal '" + std::string(text) + "'");
            v = v * 10 + (s[i] - '0');
        }
        return neg ? Integer(-v) : v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0) throw parse_error("zero denominator in rational literal '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
}

inline std::string to_string(const Rational& q) {
    if (is_integer(q)) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational floor_of(const Rational& q) {
    Integer n = numerator(q), d = denominator(q);
    Integer f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return Rational(f);
}

inline Rational ceil_of(const Rational& q) {
    Rational f = floor_of(q);
    return f == q ? f : f + 1;
}

} // namespace spectra_lab
