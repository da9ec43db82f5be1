#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "habiro.hpp"

namespace hbc {

// Element of Q[Q/Z]: finite sum of c_r e(r).
class QZElt {
public:
    QZElt() = default;

    static QZElt e(const QZLabel& r, const Rational& c = 1) {
        QZElt x;
        x.add(r, c);
        return x;
    }
    static QZElt unit() { return e(QZLabel()); }

    const std::map<QZLabel, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add(const QZLabel& r, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = t_.try_emplace(r, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    Rational coeff(const QZLabel& r) const {
        auto it = t_.find(r);
        return it == t_.end() ? Rational(0) : it->second;
    }

    // lcm of the denominators in the support
    std::int64_t level() const {
        std::int64_t l = 1;
        for (const auto& [r, c] : t_) l = std::lcm(l, r.den());
        return l;
    }

    bool is_integral() const {
        for (const auto& [r, c] : t_)
            if (!is_integer(c)) return false;
        return true;
    }

    QZElt& operator+=(const QZElt& o) {
        for (const auto& [r, c] : o.t_) add(r, c);
        return *this;
    }
    QZElt& operator-=(const QZElt& o) {
        for (const auto& [r, c] : o.t_) add(r, -c);
        return *this;
    }
    friend QZElt operator+(QZElt a, const QZElt& b) { return a += b; }
    friend QZElt operator-(QZElt a, const QZElt& b) { return a -= b; }
    friend QZElt operator*(const Rational& s, const QZElt& x) {
        QZElt y;
        for (const auto& [r, c] : x.t_) y.add(r, s * c);
        return y;
    }
    friend QZElt operator*(const QZElt& a, const QZElt& b) {
        QZElt y;
        for (const auto& [r, c] : a.t_)
            for (const auto& [s, d] : b.t_) y.add(r * s, c * d);
        return y;
    }
    friend bool operator==(const QZElt&, const QZElt&) = default;

private:
    std::map<QZLabel, Rational> t_;
};

inline QZElt qz_sigma(const QZElt& x, std::int64_t n) {
    if (n < 1) fail("InvalidArgument", "qz_sigma needs n >= 1");
    QZElt y;
    for (const auto& [r, c] : x.terms()) y.add(r.pow(n), c);
    return y;
}

// (1/n) sum over the n solutions s of n s = r
inline QZElt qz_rho(const QZElt& x, std::int64_t n) {
    if (n < 1) fail("InvalidArgument", "qz_rho needs n >= 1");
    QZElt y;
    for (const auto& [r, c] : x.terms()) {
        Rational w = c / n;
        for (std::int64_t j = 0; j < n; ++j) y.add(QZLabel(r.num() + j * r.den(), n * r.den()), w);
    }
    return y;
}

inline QZElt idempotent_e(std::int64_t n) { return qz_rho(QZElt::unit(), n); }

inline QZElt integral_rho_tilde(const QZElt& x, std::int64_t n) {
    if (!x.is_integral()) fail("NonIntegralInput", "integral_rho_tilde needs integer coefficients");
    return Rational(n) * qz_rho(x, n);
}

// Finite sum of monomials mu_a x mu_b^*, kept with gcd(a, b) = 1 and one mid
// per (a, b); scalar coefficients are absorbed into the mid.
class BCElement {
public:
    using Key = std::pair<std::int64_t, std::int64_t>;

    BCElement() = default;

    static BCElement monomial(std::int64_t a, const QZElt& x, std::int64_t b) {
        BCElement u;
        u.add_monomial(a, x, b);
        return u;
    }
    static BCElement unit() { return monomial(1, QZElt::unit(), 1); }

    // mu_{ga} x mu_{gb}^* = mu_a rho_g(x) mu_b^*
    void add_monomial(std::int64_t a, const QZElt& x, std::int64_t b) {
        if (a < 1 || b < 1) fail("InvalidArgument", "monomial indices must be positive");
        std::int64_t g = std::gcd(a, b);
        QZElt mid = g == 1 ? x : qz_rho(x, g);
        if (mid.is_zero()) return;
        Key k{a / g, b / g};
        auto [it, inserted] = m_.try_emplace(k, mid);
        if (!inserted) {
            it->second += mid;
            if (it->second.is_zero()) m_.erase(it);
        }
    }

    const std::map<Key, QZElt>& terms() const { return m_; }
    bool is_zero() const { return m_.empty(); }

    std::int64_t level() const {
        std::int64_t l = 1;
        for (const auto& [k, x] : m_) l = std::lcm(l, x.level());
        return l;
    }

    BCElement& operator+=(const BCElement& o) {
        for (const auto& [k, x] : o.m_) add_monomial(k.first, x, k.second);
        return *this;
    }
    friend BCElement operator+(BCElement a, const BCElement& b) { return a += b; }
    friend BCElement operator*(const Rational& s, const BCElement& u) {
        BCElement v;
        for (const auto& [k, x] : u.m_) v.add_monomial(k.first, s * x, k.second);
        return v;
    }
    friend bool operator==(const BCElement&, const BCElement&) = default;

private:
    std::map<Key, QZElt> m_;
};

// (mu_a x mu_b^*)(mu_c y mu_d^*) = mu_{a c'} sigma_{c'}(x) sigma_{b'}(y) mu_{b' d}^*
// with g = gcd(b, c), b = g b', c = g c'.
inline BCElement bc_mul(const BCElement& u, const BCElement& v) {
    BCElement w;
    for (const auto& [k1, x] : u.terms())
        for (const auto& [k2, y] : v.terms()) {
            auto [a, b] = k1;
            auto [c, d] = k2;
            std::int64_t g = std::gcd(b, c), bp = b / g, cp = c / g;
            w.add_monomial(a * cp, qz_sigma(x, cp) * qz_sigma(y, bp), bp * d);
        }
    return w;
}

inline BCElement operator*(const BCElement& u, const BCElement& v) { return bc_mul(u, v); }

// Truncated operator on span(eps_1..eps_K), column-sparse, entries in Q(zeta_b).
// targets[k] lists every basis index the column reaches before dropping zero
// values; valid[k] is false when some target lies beyond K.
struct BCMatrix {
    std::int64_t K = 0;
    std::int64_t order = 1;
    std::vector<std::map<std::int64_t, CycRat>> cols;
    std::vector<std::set<std::int64_t>> targets;
    std::vector<bool> valid;

    const std::map<std::int64_t, CycRat>& column(std::int64_t k) const { return cols[k - 1]; }
    bool is_valid(std::int64_t k) const { return valid[k - 1]; }
    CycRat entry(std::int64_t i, std::int64_t k) const {
        auto it = cols[k - 1].find(i);
        return it == cols[k - 1].end() ? CycRat(order) : it->second;
    }
    std::vector<std::int64_t> validity_basis() const {
        std::vector<std::int64_t> out;
        for (std::int64_t k = 1; k <= K; ++k)
            if (valid[k - 1]) out.push_back(k);
        return out;
    }
};

// pi_rho(x) eps_j = (sum_r c_r zeta_r^j) eps_j with zeta_r = exp(2 pi i a r)
inline CycRat qz_diagonal(const QZElt& x, std::int64_t a, std::int64_t b, std::int64_t j) {
    std::vector<Rational> acc(b);
    for (const auto& [r, c] : x.terms()) {
        std::int64_t e = static_cast<std::int64_t>(
            (static_cast<__int128>(a) * r.num() % b * (b / r.den()) % b * (j % b)) % b);
        acc[e] += c;
    }
    return CycRat::from_cyclic(b, std::move(acc));
}

inline BCMatrix pi_rho(const BCElement& u, std::int64_t unit, std::int64_t b, std::int64_t K) {
    if (b < 1 || std::gcd(pmod(unit, b), b) != 1) fail("InvalidArgument", "unit must be invertible mod b");
    for (const auto& [k, x] : u.terms())
        if (b % x.level() != 0)
            fail("DenominatorMismatch", "support denominator " + std::to_string(x.level()) + " does not divide " + std::to_string(b));
    BCMatrix M;
    M.K = K;
    M.order = b;
    M.cols.resize(K);
    M.targets.resize(K);
    M.valid.assign(K, true);
    const std::int64_t a = pmod(unit, b);
    for (std::int64_t k = 1; k <= K; ++k) {
        for (const auto& [key, x] : u.terms()) {
            auto [left, right] = key;
            if (k % right != 0) continue;
            std::int64_t j = k / right, t = left * j;
            M.targets[k - 1].insert(t);
            if (t > K) {
                M.valid[k - 1] = false;
                continue;
            }
            CycRat v = qz_diagonal(x, a, b, j);
            if (v.is_zero()) continue;
            auto [it, inserted] = M.cols[k - 1].try_emplace(t, v);
            if (!inserted) it->second += v;
        }
        for (auto it = M.cols[k - 1].begin(); it != M.cols[k - 1].end();)
            it = it->second.is_zero() ? M.cols[k - 1].erase(it) : std::next(it);
    }
    return M;
}

// Product of truncated operators. A column of the product is valid when the
// right factor's column is valid and all of its targets are valid in the left factor.
inline BCMatrix operator*(const BCMatrix& A, const BCMatrix& B) {
    if (A.K != B.K || A.order != B.order) fail("InvalidArgument", "operator shapes differ");
    BCMatrix C;
    C.K = A.K;
    C.order = A.order;
    C.cols.resize(C.K);
    C.targets.resize(C.K);
    C.valid.assign(C.K, true);
    for (std::int64_t k = 1; k <= C.K; ++k) {
        bool ok = B.is_valid(k);
        for (std::int64_t t : B.targets[k - 1]) {
            if (t > C.K || !A.is_valid(t)) {
                ok = false;
                continue;
            }
            for (std::int64_t s : A.targets[t - 1]) C.targets[k - 1].insert(s);
        }
        C.valid[k - 1] = ok;
        auto& col = C.cols[k - 1];
        for (const auto& [i, v] : B.column(k))
            for (const auto& [r, w] : A.column(i)) {
                auto [it, inserted] = col.try_emplace(r, w * v);
                if (!inserted) it->second += w * v;
            }
        for (auto it = col.begin(); it != col.end();) it = it->second.is_zero() ? col.erase(it) : std::next(it);
    }
    return C;
}

// Diagonal of E_{zeta,f}: entry n is ev(f, zeta^n).
inline std::vector<CycInt> e_operator(const RootOfUnity& z, const HabiroElt& f, std::int64_t K) {
    if (z.order() > f.level())
        fail("OrderExceedsLevel", "order " + std::to_string(z.order()) + " exceeds level " + std::to_string(f.level()));
    std::vector<CycInt> d;
    d.reserve(K);
    for (std::int64_t n = 1; n <= K; ++n) d.push_back(ev(f, z.pow(n)));
    return d;
}

} // namespace hbc
