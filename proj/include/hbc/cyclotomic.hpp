#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "poly.hpp"

namespace hbc {

// e(a/b) as a reduced fraction in [0, 1); doubles as a Q/Z label.
class RootOfUnity {
public:
    RootOfUnity() = default;
    RootOfUnity(std::int64_t a, std::int64_t b) {
        if (b <= 0) fail("InvalidArgument", "root of unity needs a positive denominator");
        a = pmod(a, b);
        std::int64_t g = std::gcd(a, b);
        if (g == 0) g = b;
        num_ = a / g;
        den_ = b / g;
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    std::int64_t order() const { return den_; }

    RootOfUnity pow(std::int64_t n) const {
        return RootOfUnity(static_cast<std::int64_t>((static_cast<__int128>(num_) * pmod(n, den_)) % den_), den_);
    }
    friend RootOfUnity operator*(const RootOfUnity& x, const RootOfUnity& y) {
        std::int64_t l = std::lcm(x.den_, y.den_);
        return RootOfUnity(x.num_ * (l / x.den_) + y.num_ * (l / y.den_), l);
    }
    RootOfUnity inverse() const { return RootOfUnity(-num_, den_); }

    friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
    friend auto operator<=>(const RootOfUnity& x, const RootOfUnity& y) {
        if (auto c = x.den_ <=> y.den_; c != 0) return c;
        return x.num_ <=> y.num_;
    }

    std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }
    static RootOfUnity parse(const std::string& s) {
        Rational q = parse_rational(s);
        BigInt d = denominator(q);
        if (d > BigInt(1) << 40) fail("ParseError", "denominator too large: " + s);
        BigInt n = numerator(q) % d;
        return RootOfUnity(n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>());
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

using QZLabel = RootOfUnity;

namespace detail {

inline const IntPoly& cyclotomic_cached(std::int64_t m);

inline IntPoly cyclotomic_compute(std::int64_t m) {
    std::vector<BigInt> c(m + 1);
    c[0] = -1;
    c[m] = 1;
    IntPoly p(std::move(c));
    for (std::int64_t d : divisors(m))
        if (d < m) p = exact_div(p, cyclotomic_cached(d));
    return p;
}

inline const IntPoly& cyclotomic_cached(std::int64_t m) {
    static std::mutex mu;
    static std::map<std::int64_t, std::unique_ptr<IntPoly>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return *it->second;
    }
    auto p = std::make_unique<IntPoly>(cyclotomic_compute(m));
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(m, std::move(p));
    return *it->second;
}

} // namespace detail

inline IntPoly cyclotomic_poly(std::int64_t m) {
    if (m < 1) fail("InvalidArgument", "cyclotomic_poly needs m >= 1");
    return detail::cyclotomic_cached(m);
}

// Element of Z[x]/(Phi_m) (T = BigInt) or Q[x]/(Phi_m) (T = Rational),
// stored as phi(m) coefficients.
template <class T>
class Cyclotomic {
public:
    Cyclotomic() : Cyclotomic(1) {}
    explicit Cyclotomic(std::int64_t m) : m_(m), c_(euler_phi(m)) {
        if (m < 1) fail("InvalidArgument", "cyclotomic order must be positive");
    }

    static Cyclotomic constant(std::int64_t m, const T& a) {
        Cyclotomic z(m);
        z.c_[0] = a;
        return z;
    }
    static Cyclotomic one(std::int64_t m) { return constant(m, T(1)); }

    // x^e for any integer e
    static Cyclotomic x_pow(std::int64_t m, std::int64_t e) {
        std::vector<T> acc(m);
        acc[pmod(e, m)] = 1;
        return from_cyclic(m, std::move(acc));
    }

    // v is read in Z[x]/(x^m - 1); Phi_m divides x^m - 1 so reduction is well defined
    static Cyclotomic from_cyclic(std::int64_t m, std::vector<T> v) {
        return from_coeffs(m, std::move(v));
    }

    static Cyclotomic from_coeffs(std::int64_t m, std::vector<T> v) {
        Cyclotomic z(m);
        const auto& phi = modulus(m);
        if (v.size() < phi.size() - 1) v.resize(phi.size() - 1);
        reduce_monic(v, phi);
        z.c_ = std::move(v);
        return z;
    }

    std::int64_t order() const { return m_; }
    const std::vector<T>& coeffs() const { return c_; }
    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    // Image in Z[zeta_M] for m | M via x -> x^{M/m}.
    Cyclotomic embed(std::int64_t M) const {
        if (M % m_ != 0) fail("InvalidArgument", "embedding order must be a multiple");
        if (M == m_) return *this;
        const std::int64_t s = M / m_;
        std::vector<T> v((c_.size() - 1) * s + 1);
        for (std::size_t i = 0; i < c_.size(); ++i) v[i * s] = c_[i];
        return from_coeffs(M, std::move(v));
    }

    Cyclotomic& operator+=(const Cyclotomic& o) { return combine(o, +1); }
    Cyclotomic& operator-=(const Cyclotomic& o) { return combine(o, -1); }
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator-(Cyclotomic a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.m_ != b.m_) {
            std::int64_t l = std::lcm(a.m_, b.m_);
            return a.embed(l) * b.embed(l);
        }
        std::vector<T> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return from_coeffs(a.m_, std::move(r));
    }
    friend Cyclotomic operator*(const T& s, Cyclotomic a) {
        for (auto& x : a.c_) x *= s;
        return a;
    }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    // Equality in the common cyclotomic field, so orders may differ.
    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.m_ == b.m_) return a.c_ == b.c_;
        std::int64_t l = std::lcm(a.m_, b.m_);
        return a.embed(l).c_ == b.embed(l).c_;
    }

    static const std::vector<T>& modulus(std::int64_t m) {
        static std::mutex mu;
        static std::map<std::int64_t, std::unique_ptr<std::vector<T>>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return *it->second;
        const IntPoly& p = detail::cyclotomic_cached(m);
        auto v = std::make_unique<std::vector<T>>();
        for (const auto& c : p.coeffs()) v->push_back(T(c));
        return *cache.emplace(m, std::move(v)).first->second;
    }

private:
    Cyclotomic& combine(const Cyclotomic& o, int sign) {
        if (o.m_ != m_) {
            std::int64_t l = std::lcm(m_, o.m_);
            *this = embed(l);
            return combine(o.embed(l), sign);
        }
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (sign > 0)
                c_[i] += o.c_[i];
            else
                c_[i] -= o.c_[i];
        }
        return *this;
    }

    std::int64_t m_;
    std::vector<T> c_;
};

using CycInt = Cyclotomic<BigInt>;
using CycRat = Cyclotomic<Rational>;

inline CycRat to_rational(const CycInt& z) {
    std::vector<Rational> v(z.coeffs().begin(), z.coeffs().end());
    return CycRat::from_coeffs(z.order(), std::move(v));
}

inline CycInt root_value(const RootOfUnity& z) { return CycInt::x_pow(z.order(), z.num()); }

// P(x^a) reduced mod Phi_b for zeta = a/b
inline CycInt eval_poly(const IntPoly& p, const RootOfUnity& z) {
    const std::int64_t m = z.order();
    std::vector<BigInt> acc(m);
    const auto& c = p.coeffs();
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        acc[static_cast<std::size_t>((static_cast<__int128>(j) * z.num()) % m)] += c[j];
    }
    return CycInt::from_cyclic(m, std::move(acc));
}

template <class T>
Cyclotomic<T> galois_act(std::int64_t a, const Cyclotomic<T>& z) {
    const std::int64_t m = z.order();
    if (std::gcd(pmod(a, m), m) != 1) fail("InvalidArgument", "galois_act needs gcd(a, m) = 1");
    std::vector<T> acc(m);
    const std::int64_t ar = pmod(a, m);
    for (std::size_t i = 0; i < z.coeffs().size(); ++i)
        acc[(static_cast<std::int64_t>(i) * ar) % m] += z.coeffs()[i];
    return Cyclotomic<T>::from_cyclic(m, std::move(acc));
}

template <class T>
std::complex<double> complex_embed(const Cyclotomic<T>& z, std::int64_t k = 1) {
    const std::int64_t m = z.order();
    if (std::gcd(pmod(k, m), m) != 1) fail("InvalidArgument", "complex_embed needs gcd(k, m) = 1");
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < z.coeffs().size(); ++i) {
        if (z.coeffs()[i] == 0) continue;
        double ang = 2.0 * std::numbers::pi * static_cast<double>(pmod(k * static_cast<std::int64_t>(i), m)) / static_cast<double>(m);
        s += to_double(z.coeffs()[i]) * std::polar(1.0, ang);
    }
    return s;
}

} // namespace hbc
