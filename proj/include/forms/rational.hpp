#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace forms {

// exact arithmetic everywhere; a value is always stored in lowest terms
// with a positive denominator (cpp_rational maintains both invariants)
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

// (-1)^k for possibly negative k
inline int sign_pow(long long k) { return (k & 1) ? -1 : 1; }

inline Int factorial(int n) {
    Int r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (int i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
}

// "n" or "n/d"; never decimal
inline Int ipow(Int base, int e) {
    Int out = 1;
    for (; e > 0; --e) out *= base;
    return out;
}

inline std::string rat_str(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

} // namespace forms
