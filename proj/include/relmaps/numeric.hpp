// Exact arbitrary-precision integers and rationals used throughout the
// library.  All intersection numbers, Hurwitz counts and recipe exponents are
// computed exactly; nothing in this project is allowed to round.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <string>

namespace relmaps {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int numerator(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denominator(const Rat& q) { return boost::multiprecision::denominator(q); }

// Factorial as an exact integer.
inline Int factorial(long long n) {
    Int f = 1;
    for (long long i = 2; i <= n; ++i) f *= i;
    return f;
}

// Binomial coefficient as an exact integer (0 outside the triangle).
inline Int binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int b = 1;
    for (long long i = 0; i < k; ++i) {
        b *= (n - i);
        b /= (i + 1);
    }
    return b;
}

}  // namespace relmaps
