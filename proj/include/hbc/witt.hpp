#pragma once

#include <vector>

#include "bc.hpp"

namespace hbc {

// Big Witt vector truncated to {1..N}; components over Q.
class WittVector {
public:
    WittVector() = default;
    explicit WittVector(std::size_t N) : u_(N, Rational(0)) {}
    explicit WittVector(std::vector<Rational> u) : u_(std::move(u)) {}

    static WittVector one(std::size_t N) {
        WittVector w(N);
        if (N) w.u_[0] = 1;
        return w;
    }

    std::size_t trunc() const { return u_.size(); }
    // 1-based
    const Rational& operator[](std::size_t n) const { return u_.at(n - 1); }
    Rational& operator[](std::size_t n) { return u_.at(n - 1); }
    const std::vector<Rational>& components() const { return u_; }

    bool is_integral() const {
        for (const auto& c : u_)
            if (!is_integer(c)) return false;
        return true;
    }

    friend bool operator==(const WittVector&, const WittVector&) = default;

private:
    std::vector<Rational> u_;
};

inline std::vector<Rational> ghost(const WittVector& w) {
    const std::size_t N = w.trunc();
    std::vector<Rational> psi(N, Rational(0));
    for (std::size_t d = 1; d <= N; ++d) {
        if (w[d] == 0) continue;
        for (std::size_t n = d; n <= N; n += d) psi[n - 1] += Rational(static_cast<long long>(d)) * rpow(w[d], static_cast<unsigned>(n / d));
    }
    return psi;
}

inline WittVector unghost(const std::vector<Rational>& psi, bool integral = false) {
    const std::size_t N = psi.size();
    WittVector w(N);
    for (std::size_t n = 1; n <= N; ++n) {
        Rational s = psi[n - 1];
        for (std::size_t d = 1; d < n; ++d)
            if (n % d == 0 && w[d] != 0) s -= Rational(static_cast<long long>(d)) * rpow(w[d], static_cast<unsigned>(n / d));
        w[n] = s / static_cast<long long>(n);
        if (integral && !is_integer(w[n])) fail("NonIntegral", "unghost: component " + std::to_string(n) + " is " + to_string(w[n]));
    }
    return w;
}

namespace detail {
template <class Op>
WittVector ghost_combine(const WittVector& a, const WittVector& b, Op op) {
    if (a.trunc() != b.trunc()) fail("InvalidArgument", "Witt vectors need equal truncation");
    auto x = ghost(a), y = ghost(b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = op(x[i], y[i]);
    return unghost(x);
}
} // namespace detail

inline WittVector witt_add(const WittVector& a, const WittVector& b) {
    return detail::ghost_combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}
inline WittVector witt_mul(const WittVector& a, const WittVector& b) {
    return detail::ghost_combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x * y); });
}
inline WittVector witt_neg(const WittVector& a) {
    auto x = ghost(a);
    for (auto& c : x) c = -c;
    return unghost(x);
}

// F_n: psi_m <- psi_{nm}, truncation floor(N/n)
inline WittVector adams_frobenius(const WittVector& w, std::size_t n) {
    if (n < 1) fail("InvalidArgument", "adams_frobenius needs n >= 1");
    auto psi = ghost(w);
    std::vector<Rational> out(w.trunc() / n);
    for (std::size_t m = 1; m <= out.size(); ++m) out[m - 1] = psi[n * m - 1];
    return unghost(out);
}

// Z[t]/(t^k - 1) with s_p: t -> t^p
struct GroupRingModP {
    std::int64_t k = 1;
    std::int64_t p = 2;

    using Elt = std::vector<BigInt>;

    Elt zero() const { return Elt(static_cast<std::size_t>(k), BigInt(0)); }
    Elt one() const {
        auto x = zero();
        x[0] = 1;
        return x;
    }
    Elt t_pow(std::int64_t e) const {
        auto x = zero();
        x[static_cast<std::size_t>(pmod(e, k))] = 1;
        return x;
    }
    Elt reduce(const IntPoly& f) const {
        auto x = zero();
        const auto& c = f.coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) x[i % static_cast<std::size_t>(k)] += c[i];
        return x;
    }
    Elt add(const Elt& a, const Elt& b) const {
        Elt c = a;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
        return c;
    }
    Elt sub(const Elt& a, const Elt& b) const {
        Elt c = a;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
        return c;
    }
    Elt mul(const Elt& a, const Elt& b) const {
        auto c = zero();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j) c[(i + j) % a.size()] += a[i] * b[j];
        }
        return c;
    }
    Elt pow(Elt a, std::uint64_t e) const {
        Elt r = one();
        for (; e; e >>= 1) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
        }
        return r;
    }
    Elt s(const Elt& a, std::int64_t n) const {
        auto c = zero();
        for (std::size_t i = 0; i < a.size(); ++i) c[static_cast<std::size_t>(pmod(static_cast<std::int64_t>(i) * n, k))] += a[i];
        return c;
    }
    // coefficients in [0, p)
    Elt mod_p(const Elt& a) const {
        Elt c = a;
        for (auto& x : c) {
            x %= p;
            if (x < 0) x += p;
        }
        return c;
    }
};

struct FrobeniusCheck {
    bool ok = false;
    // s_p(x) - x^p = p * quotient when ok
    GroupRingModP::Elt quotient;
    GroupRingModP::Elt difference;
};

inline FrobeniusCheck frobenius_lift_check(const GroupRingModP& R, const GroupRingModP::Elt& x) {
    if (R.k < 1) fail("InvalidArgument", "group ring needs k >= 1");
    if (!is_prime(R.p)) fail("InvalidArgument", "frobenius_lift_check needs p prime");
    if (static_cast<std::int64_t>(x.size()) != R.k) fail("InvalidArgument", "element length differs from k");
    FrobeniusCheck out;
    out.difference = R.sub(R.s(x, R.p), R.pow(x, static_cast<std::uint64_t>(R.p)));
    out.ok = true;
    out.quotient = R.zero();
    for (std::size_t i = 0; i < out.difference.size(); ++i) {
        if (out.difference[i] % R.p != 0) {
            out.ok = false;
            out.quotient.clear();
            break;
        }
        out.quotient[i] = out.difference[i] / R.p;
    }
    return out;
}

// e(r) -> e(a r) at level b
inline QZElt zhat_act(const QZElt& x, std::int64_t a, std::int64_t b) {
    if (b < 1) fail("InvalidArgument", "zhat_act needs b >= 1");
    QZElt y;
    for (const auto& [r, c] : x.terms()) {
        if (b % r.den() != 0) fail("DenominatorMismatch", "label " + r.str() + " not of level " + std::to_string(b));
        y.add(r.pow(pmod(a, b)), c);
    }
    return y;
}

} // namespace hbc
