#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace inls {

using BigInt = boost::multiprecision::cpp_int;
// Expression templates disabled so arithmetic results are plain values
// (std::min/std::max over mixed expressions then work without casts).
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// Parses "p", "-p" or "p/q" into an exact rational. Throws std::invalid_argument.
inline Rat parse_rational(std::string_view text) {
    auto bad = [&] { throw std::invalid_argument("malformed rational: '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    auto slash = text.find('/');
    auto parse_int = [&](std::string_view part) -> BigInt {
        if (part.empty()) bad();
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) bad();
        for (std::size_t j = i; j < part.size(); ++j)
            if (part[j] < '0' || part[j] > '9') bad();
        return BigInt(std::string(part));
    };
    if (slash == std::string_view::npos) return Rat(parse_int(text));
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) bad();
    return Rat(num, den);
}

inline std::string rat_to_string(const Rat& x) {
    const BigInt num = numerator(x), den = denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline double rat_to_double(const Rat& x) { return static_cast<double>(x); }

/// Floor of a rational as a big integer.
inline BigInt rat_floor(const Rat& x) {
    BigInt q = numerator(x) / denominator(x);
    if (numerator(x) < 0 && q * denominator(x) != numerator(x)) --q;
    return q;
}

inline BigInt rat_ceil(const Rat& x) { return -rat_floor(-x); }

}  // namespace inls
