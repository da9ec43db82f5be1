#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace hbc {

// Dense univariate polynomial, coefficient i belongs to x^i. Trailing zeros
// are always trimmed so the zero polynomial has no coefficients.
template <class T>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }
    Poly(std::initializer_list<T> c) : c_(c) { trim(); }

    static Poly constant(const T& a) { return Poly(std::vector<T>{a}); }
    static Poly monomial(const T& a, std::size_t k) {
        std::vector<T> c(k + 1);
        c[k] = a;
        return Poly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }
    const std::vector<T>& coeffs() const { return c_; }
    T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
    const T& lead() const { return c_.back(); }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }
    friend Poly operator*(const T& s, Poly a) {
        for (auto& x : a.c_) x *= s;
        a.trim();
        return a;
    }

    // P(x^n)
    Poly compose_power(std::size_t n) const {
        if (is_zero()) return {};
        std::vector<T> r((c_.size() - 1) * n + 1);
        for (std::size_t i = 0; i < c_.size(); ++i) r[i * n] = c_[i];
        return Poly(std::move(r));
    }

    template <class U>
    U eval(const U& x) const {
        U acc = U(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + U(c_[i]);
        return acc;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<T> c_;
};

using IntPoly = Poly<BigInt>;

// Long division. Every quotient coefficient must divide exactly, which always
// holds when b has leading coefficient +-1.
template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& a, const Poly<T>& b) {
    if (b.is_zero()) fail("DivisionByZero", "polynomial division by zero");
    std::vector<T> r = a.coeffs();
    const auto& bc = b.coeffs();
    const std::size_t db = bc.size() - 1;
    if (r.size() <= db) return {Poly<T>{}, a};
    std::vector<T> q(r.size() - db);
    for (std::size_t i = r.size(); i-- > db;) {
        if (r[i] == 0) continue;
        T c = r[i] / b.lead();
        if (c * b.lead() != r[i]) fail("InexactDivision", "leading coefficient does not divide");
        q[i - db] = c;
        for (std::size_t j = 0; j <= db; ++j) r[i - db + j] -= c * bc[j];
    }
    r.resize(db);
    return {Poly<T>(std::move(q)), Poly<T>(std::move(r))};
}

template <class T>
Poly<T> exact_div(const Poly<T>& a, const Poly<T>& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) fail("InexactDivision", "nonzero remainder");
    return q;
}

// In-place reduction of a coefficient vector modulo a monic polynomial m
// (leading coefficient 1 or -1). Leaves the vector with deg(m) entries.
template <class T>
void reduce_monic(std::vector<T>& v, const std::vector<T>& m) {
    const std::size_t d = m.size() - 1;
    const bool neg = m.back() < 0;
    for (std::size_t i = v.size(); i-- > d;) {
        if (v[i] == 0) continue;
        T c = neg ? T(-v[i]) : v[i];
        for (std::size_t j = 0; j < d; ++j)
            if (m[j] != 0) v[i - d + j] -= c * m[j];
        v[i] = 0;
    }
    v.resize(d);
}

inline std::string to_string(const IntPoly& p, char var = 'q') {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const BigInt& c = p.coeffs()[i];
        if (c == 0) continue;
        BigInt a = abs(c);
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (i == 0 || a != 1) out += a.str();
        if (i > 0) {
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

// Parses sums of terms like "3", "-q", "2q^3", "2*q^3". Whitespace is ignored.
inline IntPoly parse_poly(const std::string& text, char var = 'q') {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) fail("ParseError", "empty polynomial");
    std::vector<BigInt> c;
    std::size_t i = 0;
    auto bad = [&](const std::string& why) {
        fail("ParseError", "polynomial '" + text + "': " + why + " at offset " + std::to_string(i));
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            bad("expected + or -");
        }
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        BigInt coef = start == i ? BigInt(1) : BigInt(s.substr(start, i - start));
        bool has_digits = start != i;
        std::size_t power = 0;
        if (i < s.size() && s[i] == '*') {
            if (!has_digits) bad("dangling *");
            ++i;
            if (i >= s.size() || s[i] != var) bad("expected variable after *");
        }
        if (i < s.size() && s[i] == var) {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ps = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (ps == i) bad("expected exponent");
                power = std::stoull(s.substr(ps, i - ps));
            }
        } else if (!has_digits) {
            bad("expected term");
        }
        if (c.size() <= power) c.resize(power + 1);
        c[power] += sign * coef;
    }
    return IntPoly(std::move(c));
}

} // namespace hbc
