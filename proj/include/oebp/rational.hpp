#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <stdexcept>
#include <string>

namespace oebp {

using Int = boost::multiprecision::cpp_int;

// Exact rational. All size arithmetic in this library happens on Rat;
// the predicates rely on strict comparisons at exact boundaries, so no
// floating-point value ever enters a decision.
using Rat = boost::rational<Int>;

inline Rat rat(long long num, long long den = 1) {
    return Rat(Int(num), Int(den));
}

// Floor of a nonnegative-or-negative rational.
inline Int rat_floor(const Rat& r) {
    Int q = r.numerator() / r.denominator();
    if (q * r.denominator() > r.numerator()) --q;
    return q;
}

inline Int rat_ceil(const Rat& r) {
    Int q = r.numerator() / r.denominator();
    if (q * r.denominator() < r.numerator()) ++q;
    return q;
}

inline long long to_ll(const Int& v) {
    return v.convert_to<long long>();
}

// Parses "p" or "p/q" with nonnegative p and positive q. Anything else,
// decimal notation included, is rejected so exactness stays explicit.
inline Rat parse_rat(const std::string& text) {
    auto fail = [&](const char* why) {
        throw std::invalid_argument("bad rational '" + text + "': " + why);
    };
    if (text.empty()) fail("empty");
    auto slash = text.find('/');
    auto digits_only = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? text : text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den))
        fail("expected digits and at most one '/' (decimals are not accepted)");
    Int d(den);
    if (d == 0) fail("zero denominator");
    return Rat(Int(num), d);
}

// Canonical form: lowest terms, "p" when the denominator is 1, else "p/q".
inline std::string rat_str(const Rat& r) {
    std::string s = r.numerator().str();
    if (r.denominator() != 1) s += "/" + r.denominator().str();
    return s;
}

}  // namespace oebp
