#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"

namespace hbc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::int64_t pmod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t euler_phi(std::int64_t m) {
    std::int64_t result = m;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> lo, hi;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            lo.push_back(d);
            if (d * d != n) hi.push_back(n / d);
        }
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// inverse of a modulo m, for gcd(a, m) = 1
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, a1 = pmod(a, m);
    while (a1 != 0) {
        std::int64_t q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) fail("InvalidArgument", "no inverse of " + std::to_string(a) + " mod " + std::to_string(m));
    return pmod(x, m);
}

inline BigInt binomial(const BigInt& n, std::int64_t k) {
    if (k < 0 || n < k) return 0;
    BigInt r = 1;
    for (std::int64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

inline BigInt ipow(const BigInt& b, std::uint64_t e) {
    BigInt r = 1, x = b;
    while (e) {
        if (e & 1) r *= x;
        e >>= 1;
        if (e) x *= x;
    }
    return r;
}

inline Rational rpow(const Rational& b, std::uint64_t e) {
    Rational r = 1, x = b;
    while (e) {
        if (e & 1) r *= x;
        e >>= 1;
        if (e) x *= x;
    }
    return r;
}

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

inline BigInt parse_bigint(const std::string& s) {
    std::size_t i = 0;
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = s.size();
    while (j > i && s[j - 1] == ' ') --j;
    std::string t = s.substr(i, j - i);
    std::size_t k = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (k == t.size()) fail("ParseError", "not an integer: '" + s + "'");
    for (std::size_t p = k; p < t.size(); ++p)
        if (t[p] < '0' || t[p] > '9') fail("ParseError", "not an integer: '" + s + "'");
    if (t[0] == '+') t.erase(0, 1);
    return BigInt(t);
}

// accepts "p", "p/q", "-p/q"
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_bigint(s));
    BigInt den = parse_bigint(s.substr(slash + 1));
    if (den == 0) fail("ParseError", "zero denominator: '" + s + "'");
    return Rational(parse_bigint(s.substr(0, slash)), den);
}

// Neumaier compensated summation; fixed order, deterministic.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        T t = sum_ + x;
        if (magnitude(sum_) >= magnitude(x))
            c_ += (sum_ - t) + x;
        else
            c_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(T x) {
        add(x);
        return *this;
    }
    T value() const { return sum_ + c_; }

private:
    static double magnitude(const T& v) { return std::abs(v); }
    T sum_{};
    T c_{};
};

} // namespace hbc
