#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "bc.hpp"
#include "qsm.hpp"
#include "intmatrix.hpp"

namespace hbc {

using Exponent = std::vector<std::int64_t>;

// Element of Z[q_1..q_n]/I_{n,N}; every variable reduced modulo (q_i)_N.
class MultiHabiroElt {
public:
    MultiHabiroElt(int nvars, int level, std::map<Exponent, BigInt> terms = {}) : n_(nvars), level_(level) {
        if (nvars < 1) fail("InvalidArgument", "need at least one variable");
        if (level < 1) fail("InvalidArgument", "Habiro level must be >= 1");
        for (auto& [e, c] : terms) {
            if (e.size() != std::size_t(n_)) fail("InvalidArgument", "exponent length differs from variable count");
            for (auto x : e)
                if (x < 0) fail("InvalidArgument", "negative exponent in representative");
            if (c != 0) t_[e] += c;
        }
        reduce();
    }

    static MultiHabiroElt monomial(int nvars, int level, const Exponent& e, const BigInt& c = 1) {
        return MultiHabiroElt(nvars, level, {{e, c}});
    }

    int nvars() const { return n_; }
    int level() const { return level_; }
    const std::map<Exponent, BigInt>& terms() const { return t_; }

    MultiHabiroElt project(int K) const {
        if (K > level_) fail("InvalidArgument", "cannot project to a higher level");
        return MultiHabiroElt(n_, K, t_);
    }

    friend MultiHabiroElt operator+(const MultiHabiroElt& a, const MultiHabiroElt& b) {
        check(a, b);
        auto t = a.t_;
        for (const auto& [e, c] : b.t_) t[e] += c;
        return MultiHabiroElt(a.n_, std::min(a.level_, b.level_), std::move(t));
    }
    friend MultiHabiroElt operator-(const MultiHabiroElt& a, const MultiHabiroElt& b) {
        check(a, b);
        auto t = a.t_;
        for (const auto& [e, c] : b.t_) t[e] -= c;
        return MultiHabiroElt(a.n_, std::min(a.level_, b.level_), std::move(t));
    }
    friend MultiHabiroElt operator*(const MultiHabiroElt& a, const MultiHabiroElt& b) {
        check(a, b);
        std::map<Exponent, BigInt> t;
        for (const auto& [e, c] : a.t_)
            for (const auto& [f, d] : b.t_) {
                Exponent g(e.size());
                for (std::size_t i = 0; i < g.size(); ++i) g[i] = e[i] + f[i];
                t[g] += c * d;
            }
        return MultiHabiroElt(a.n_, std::min(a.level_, b.level_), std::move(t));
    }
    friend bool operator==(const MultiHabiroElt& a, const MultiHabiroElt& b) {
        check(a, b);
        if (a.level_ == b.level_) return a.t_ == b.t_;
        int L = std::min(a.level_, b.level_);
        return MultiHabiroElt(a.n_, L, a.t_).t_ == MultiHabiroElt(b.n_, L, b.t_).t_;
    }

private:
    static void check(const MultiHabiroElt& a, const MultiHabiroElt& b) {
        if (a.n_ != b.n_) fail("InvalidArgument", "variable counts differ");
    }

    void reduce() {
        const auto& P = detail::pochhammer_cached(level_).coeffs();
        const std::size_t D = P.size() - 1;
        for (int i = 0; i < n_; ++i) {
            std::map<Exponent, std::vector<BigInt>> slices;
            bool any = false;
            for (const auto& [e, c] : t_) {
                Exponent rest = e;
                rest[i] = 0;
                auto& v = slices[rest];
                if (std::size_t(e[i]) >= v.size()) v.resize(e[i] + 1);
                v[e[i]] += c;
                any = any || std::size_t(e[i]) >= D;
            }
            if (!any) continue;
            t_.clear();
            for (auto& [rest, v] : slices) {
                if (v.size() > D) reduce_monic(v, P);
                for (std::size_t k = 0; k < v.size(); ++k)
                    if (v[k] != 0) {
                        Exponent e = rest;
                        e[i] = std::int64_t(k);
                        t_[e] = v[k];
                    }
            }
        }
        for (auto it = t_.begin(); it != t_.end();) it = it->second == 0 ? t_.erase(it) : std::next(it);
    }

    int n_, level_;
    std::map<Exponent, BigInt> t_;
};

// terms like "3q1^2*q2 - q2 + 1"; with one variable plain "q" is accepted
inline MultiHabiroElt parse_multi(const std::string& text, int nvars, int level) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) fail("ParseError", "empty polynomial");
    std::map<Exponent, BigInt> t;
    std::size_t p = 0;
    auto err = [&](const std::string& what) { fail("ParseError", what + " at offset " + std::to_string(p)); };
    auto digits = [&]() {
        std::size_t b = p;
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
        return s.substr(b, p - b);
    };
    while (p < s.size()) {
        int sign = 1;
        if (s[p] == '+' || s[p] == '-') {
            sign = s[p] == '-' ? -1 : 1;
            ++p;
        } else if (p != 0) {
            err("expected + or -");
        }
        BigInt c = 1;
        std::string num = digits();
        bool have = !num.empty();
        if (have) c = BigInt(num);
        Exponent e(nvars, 0);
        while (p < s.size() && (s[p] == 'q' || s[p] == '*')) {
            if (s[p] == '*') {
                ++p;
                if (p >= s.size() || s[p] != 'q') err("expected variable after *");
            }
            ++p;
            std::string idx = digits();
            int i = idx.empty() ? 1 : std::stoi(idx);
            if (idx.empty() && nvars != 1) err("variable index required");
            if (i < 1 || i > nvars) err("variable index out of range");
            std::int64_t k = 1;
            if (p < s.size() && s[p] == '^') {
                ++p;
                std::string ex = digits();
                if (ex.empty()) err("missing exponent");
                k = std::stoll(ex);
            }
            e[i - 1] += k;
            have = true;
        }
        if (!have) err("expected term");
        t[e] += sign * c;
    }
    return MultiHabiroElt(nvars, level, std::move(t));
}

inline std::string to_string(const MultiHabiroElt& f) {
    if (f.terms().empty()) return "0";
    std::string out;
    for (const auto& [e, c] : f.terms()) {
        BigInt a = abs(c);
        out += out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += f.nvars() == 1 ? "q" : "q" + std::to_string(i + 1);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) out += a.str();
        else out += (a == 1 ? "" : a.str() + "*") + mono;
    }
    return out;
}

namespace detail {

// q^e modulo (q)_N for any integer e; q^{-1} = (1 - (q)_N)/q
inline std::vector<BigInt> power_mod_pochhammer(std::int64_t e, int N) {
    const auto& P = pochhammer_cached(N).coeffs();
    const std::size_t D = P.size() - 1;
    std::vector<BigInt> base;
    if (e >= 0) {
        base.assign(2, 0);
        base[1] = 1;
    } else {
        base.assign(P.size() - 1, 0);
        for (std::size_t k = 1; k < P.size(); ++k) base[k - 1] = -P[k];
        e = -e;
    }
    if (base.size() > D) reduce_monic(base, P);
    std::vector<BigInt> acc{1};
    auto mul = [&](const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
        std::vector<BigInt> r(a.size() + b.size() - 1);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != 0)
                for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        if (r.size() > D) reduce_monic(r, P);
        return r;
    };
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    if (acc.size() > D) reduce_monic(acc, P);
    return acc;
}

inline CycInt multi_eval_rep(const MultiHabiroElt& f, const std::vector<RootOfUnity>& Z) {
    std::int64_t M = 1;
    for (const auto& z : Z) M = std::lcm(M, z.order());
    std::vector<BigInt> acc(M);
    for (const auto& [e, c] : f.terms()) {
        __int128 idx = 0;
        for (std::size_t i = 0; i < e.size(); ++i) idx += __int128(e[i] % Z[i].order()) * Z[i].num() * (M / Z[i].order());
        acc[std::size_t(idx % M)] += c;
    }
    return CycInt::from_cyclic(M, std::move(acc));
}

} // namespace detail

inline std::int64_t to_i64(const BigInt& x) { return x.convert_to<std::int64_t>(); }

// q_i -> prod_j q_j^{alpha_ij}; the monomial q^e goes to q^{alpha^T e}
inline MultiHabiroElt multi_sigma(const MultiHabiroElt& f, const IntMatrix& alpha) {
    const int n = f.nvars();
    if (alpha.rows() != std::size_t(n) || alpha.cols() != std::size_t(n)) fail("InvalidArgument", "matrix size differs from variable count");
    if (det(alpha) <= 0) fail("InvalidArgument", "sigma needs positive determinant");
    std::map<std::int64_t, std::vector<BigInt>> cache;
    auto power = [&](std::int64_t e) -> const std::vector<BigInt>& {
        auto it = cache.find(e);
        if (it == cache.end()) it = cache.emplace(e, detail::power_mod_pochhammer(e, f.level())).first;
        return it->second;
    };
    std::map<Exponent, BigInt> out;
    for (const auto& [e, c] : f.terms()) {
        std::map<Exponent, BigInt> prod{{Exponent(n, 0), c}};
        for (int j = 0; j < n; ++j) {
            std::int64_t E = 0;
            for (int i = 0; i < n; ++i) E += e[i] * to_i64(alpha(i, j));
            const auto& u = power(E);
            std::map<Exponent, BigInt> next;
            for (const auto& [g, d] : prod)
                for (std::size_t k = 0; k < u.size(); ++k)
                    if (u[k] != 0) {
                        Exponent h = g;
                        h[j] = std::int64_t(k);
                        next[h] += d * u[k];
                    }
            prod = std::move(next);
        }
        for (const auto& [g, d] : prod) out[g] += d;
    }
    return MultiHabiroElt(n, f.level(), std::move(out));
}

// Smallest L computed by a local argument with sigma_alpha(I_{n,L}) inside I_{n,N} for every alpha.
// At a point with orders d_i the ideal I_{n,N} is ((q_i - zeta_i)^{N/d_i}); each factor
// 1 - m^k is a smooth hypersurface there, and L/lcm(d) of them vanish at the point.
inline int multi_sigma_lift_level(int n, int N) {
    int best = N;
    std::vector<int> d(n, 1);
    for (;;) {
        std::int64_t e = 1, a = 0;
        for (int x : d) {
            e = std::lcm(e, std::int64_t(x));
            a += N / x;
        }
        best = std::max<std::int64_t>(best, e * (a - n + 1));
        int k = 0;
        while (k < n && ++d[k] > N) d[k++] = 1;
        if (k == n) break;
    }
    return best;
}

inline CycInt multi_ev(const MultiHabiroElt& f, const std::vector<RootOfUnity>& Z) {
    if (Z.size() != std::size_t(f.nvars())) fail("InvalidArgument", "need one root per variable");
    for (const auto& z : Z)
        if (z.order() > f.level())
            fail("OrderExceedsLevel", "order " + std::to_string(z.order()) + " exceeds level " + std::to_string(f.level()));
    return detail::multi_eval_rep(f, Z);
}

// (Z^alpha)_i = prod_j zeta_j^{alpha_ij}
inline std::vector<RootOfUnity> root_power(const std::vector<RootOfUnity>& Z, const IntMatrix& alpha) {
    std::vector<RootOfUnity> out;
    for (std::size_t i = 0; i < Z.size(); ++i) {
        RootOfUnity z;
        for (std::size_t j = 0; j < Z.size(); ++j) z = z * Z[j].pow(to_i64(alpha(i, j)));
        out.push_back(z);
    }
    return out;
}

using QZVec = std::vector<RootOfUnity>;

// Element of Q[(Q/Z)^n]
class MultiQZElt {
public:
    explicit MultiQZElt(int n) : n_(n) {}

    static MultiQZElt e(const QZVec& r, const Rational& c = 1) {
        MultiQZElt x(int(r.size()));
        x.add(r, c);
        return x;
    }
    static MultiQZElt unit(int n) { return e(QZVec(n)); }

    int n() const { return n_; }
    const std::map<QZVec, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add(const QZVec& r, const Rational& c) {
        if (r.size() != std::size_t(n_)) fail("InvalidArgument", "label length differs");
        if (c == 0) return;
        auto [it, inserted] = t_.try_emplace(r, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    std::int64_t level() const {
        std::int64_t l = 1;
        for (const auto& [r, c] : t_)
            for (const auto& x : r) l = std::lcm(l, x.den());
        return l;
    }

    friend MultiQZElt operator+(MultiQZElt a, const MultiQZElt& b) {
        for (const auto& [r, c] : b.t_) a.add(r, c);
        return a;
    }
    friend MultiQZElt operator*(const Rational& s, const MultiQZElt& x) {
        MultiQZElt y(x.n_);
        for (const auto& [r, c] : x.t_) y.add(r, s * c);
        return y;
    }
    friend MultiQZElt operator*(const MultiQZElt& a, const MultiQZElt& b) {
        MultiQZElt y(a.n_);
        for (const auto& [r, c] : a.t_)
            for (const auto& [s, d] : b.t_) {
                QZVec u(r.size());
                for (std::size_t i = 0; i < u.size(); ++i) u[i] = r[i] * s[i];
                y.add(u, c * d);
            }
        return y;
    }
    friend bool operator==(const MultiQZElt&, const MultiQZElt&) = default;

private:
    int n_;
    std::map<QZVec, Rational> t_;
};

// alpha applied to a label: (alpha r)_i = sum_j alpha_ij r_j mod 1
inline QZVec apply_label(const IntMatrix& alpha, const QZVec& r) {
    QZVec out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) out[i] = out[i] * r[j].pow(to_i64(alpha(i, j)));
    return out;
}

inline IntMatrix integral_inverse(const IntMatrix& U) {
    RatMatrix inv = inverse(U);
    IntMatrix out(U.rows(), U.cols());
    for (std::size_t i = 0; i < U.rows(); ++i)
        for (std::size_t j = 0; j < U.cols(); ++j) {
            if (!is_integer(inv(i, j))) fail("InvalidArgument", "matrix is not unimodular");
            out(i, j) = numerator(inv(i, j));
        }
    return out;
}

// all s in (Q/Z)^n with alpha s = r; there are det(alpha) of them
inline std::vector<QZVec> preimage_solutions(const IntMatrix& alpha, const QZVec& r) {
    const std::size_t n = alpha.rows();
    if (r.size() != n) fail("InvalidArgument", "label length differs from matrix size");
    if (det(alpha) <= 0) fail("InvalidArgument", "preimages need positive determinant");
    auto [U, D, V] = snf(alpha);
    QZVec w = apply_label(integral_inverse(U), r);
    IntMatrix Vi = integral_inverse(V);
    std::vector<std::int64_t> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = to_i64(D(i, i));
    std::vector<QZVec> out;
    std::vector<std::int64_t> j(n, 0);
    for (;;) {
        QZVec t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = RootOfUnity(w[i].num() + j[i] * w[i].den(), d[i] * w[i].den());
        out.push_back(apply_label(Vi, t));
        std::size_t k = 0;
        while (k < n && ++j[k] == d[k]) j[k++] = 0;
        if (k == n) break;
    }
    return out;
}

// e(r) -> e(alpha^T r)
inline MultiQZElt multi_sigma_qz(const MultiQZElt& x, const IntMatrix& alpha) {
    IntMatrix at = alpha.transpose();
    MultiQZElt y(x.n());
    for (const auto& [r, c] : x.terms()) y.add(apply_label(at, r), c);
    return y;
}

// (1/det) sum over alpha^T s = r of e(s); right inverse of multi_sigma_qz
inline MultiQZElt multi_rho(const MultiQZElt& x, const IntMatrix& alpha) {
    IntMatrix at = alpha.transpose();
    Rational w = Rational(1) / Rational(det(alpha));
    MultiQZElt y(x.n());
    for (const auto& [r, c] : x.terms())
        for (const auto& s : preimage_solutions(at, r)) y.add(s, c * w);
    return y;
}

// mu_left x mu_right^*
struct MultiBCMonomial {
    IntMatrix left;
    MultiQZElt mid;
    IntMatrix right;
};
using MultiBCElement = std::vector<MultiBCMonomial>;

// beta^{-1} gamma when integral
inline std::optional<IntMatrix> left_quotient(const IntMatrix& beta, const IntMatrix& gamma) {
    RatMatrix q = inverse(beta) * to_rational(gamma);
    IntMatrix out(q.rows(), q.cols());
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < q.cols(); ++j) {
            if (!is_integer(q(i, j))) return std::nullopt;
            out(i, j) = numerator(q(i, j));
        }
    return out;
}

// e(r) eps_beta = exp(2 pi i sum_j a_j r_j (beta 1)_j) eps_beta, as an element of Q(zeta_b)
inline CycRat multi_diagonal(const MultiQZElt& x, const std::vector<std::int64_t>& units, std::int64_t b, const IntMatrix& beta) {
    const std::size_t n = beta.rows();
    std::vector<std::int64_t> v(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[i] += to_i64(beta(i, j));
    std::vector<Rational> acc(b);
    for (const auto& [r, c] : x.terms()) {
        __int128 e = 0;
        for (std::size_t j = 0; j < n; ++j)
            e += __int128(units[j]) * r[j].num() % b * (b / r[j].den()) % b * pmod(v[j], b) % b;
        acc[std::size_t(e % b)] += c;
    }
    return CycRat::from_cyclic(b, std::move(acc));
}

// Truncated representation on span{eps_beta : beta in S}; column k is S[k-1].
inline BCMatrix pi_rep(const MultiBCElement& u, const std::vector<std::int64_t>& units, std::int64_t b, const std::vector<IntMatrix>& S) {
    std::map<IntMatrix, std::int64_t> pos;
    for (std::size_t k = 0; k < S.size(); ++k) pos.emplace(S[k], std::int64_t(k + 1));
    for (auto a : units)
        if (std::gcd(pmod(a, b), b) != 1) fail("InvalidArgument", "units must be invertible mod b");
    for (const auto& m : u) {
        if (b % m.mid.level() != 0)
            fail("DenominatorMismatch", "support denominator " + std::to_string(m.mid.level()) + " does not divide " + std::to_string(b));
        if (units.size() != std::size_t(m.mid.n())) fail("InvalidArgument", "need one unit per coordinate");
    }
    BCMatrix M;
    M.K = std::int64_t(S.size());
    M.order = b;
    M.cols.resize(S.size());
    M.targets.resize(S.size());
    M.valid.assign(S.size(), true);
    for (std::size_t k = 0; k < S.size(); ++k) {
        auto& col = M.cols[k];
        for (const auto& m : u) {
            auto delta = left_quotient(m.right, S[k]);
            if (!delta) continue;
            IntMatrix target = m.left * *delta;
            auto it = pos.find(target);
            if (it == pos.end() || !pos.count(*delta)) {
                M.valid[k] = false;
                continue;
            }
            M.targets[k].insert(it->second);
            CycRat v = multi_diagonal(m.mid, units, b, *delta);
            if (v.is_zero()) continue;
            auto [jt, inserted] = col.try_emplace(it->second, v);
            if (!inserted) jt->second += v;
        }
        for (auto it = col.begin(); it != col.end();) it = it->second.is_zero() ? col.erase(it) : std::next(it);
    }
    return M;
}

// upper triangular, positive diagonal, entries right of the diagonal in [0, d_i)
inline std::vector<IntMatrix> hnf_enumerate(int n, std::int64_t d) {
    if (n < 1 || d < 1) fail("InvalidArgument", "hnf_enumerate needs n >= 1 and d >= 1");
    std::vector<IntMatrix> out;
    std::vector<std::int64_t> diag(n);
    std::function<void(int, std::int64_t)> pick = [&](int i, std::int64_t rest) {
        if (i == n - 1) {
            diag[i] = rest;
            std::vector<std::pair<int, int>> slots;
            for (int r = 0; r < n; ++r)
                for (int c = r + 1; c < n; ++c) slots.push_back({r, c});
            IntMatrix H(n, n);
            for (int r = 0; r < n; ++r) H(r, r) = diag[r];
            std::function<void(std::size_t)> fill = [&](std::size_t s) {
                if (s == slots.size()) {
                    out.push_back(H);
                    return;
                }
                auto [r, c] = slots[s];
                for (std::int64_t x = 0; x < diag[r]; ++x) {
                    H(r, c) = x;
                    fill(s + 1);
                }
            };
            fill(0);
            return;
        }
        for (auto e : divisors(rest)) {
            diag[i] = e;
            pick(i + 1, rest / e);
        }
    };
    pick(0, d);
    return out;
}

// number of HNF matrices of size n and determinant d: sum over d_1...d_n = d of prod d_i^{n-i}
inline BigInt hnf_count(int n, std::int64_t d) {
    if (n == 1) return 1;
    BigInt total = 0;
    for (auto e : divisors(d)) total += ipow(BigInt(e), n - 1) * hnf_count(n - 1, d / e);
    return total;
}

// sum_{d <= D} #HNF(n, d) d^{-beta}, with a bound on the omitted part
inline NumericResult partition_II1(int n, double beta, std::int64_t D) {
    if (n < 1 || D < 1) fail("InvalidArgument", "partition_II1 needs n >= 1 and D >= 1");
    if (!(beta > n)) fail("BetaOutOfRange", "beta must exceed n");
    CompensatedSum<double> s;
    for (std::int64_t d = 1; d <= D; ++d) s += to_double(hnf_count(n, d)) * std::pow(double(d), -beta);
    NumericResult r;
    r.value = s.value();
    const double Dd = double(D);
    if (n == 1) {
        r.tail_bound = std::pow(Dd, 1 - beta) / (beta - 1);
    } else if (n == 2) {
        // sigma_1(d) <= d (1 + ln d); integrate d^{-s}(1 + ln d), s = beta - 1
        double sx = beta - 1;
        r.tail_bound = std::pow(Dd, 1 - sx) / (sx - 1) * (1 + std::log(Dd) + 1 / (sx - 1));
    } else {
        // some d_i exceeds X = floor(D^{1/n}); bound that factor's tail, the rest by full zeta values
        double X = std::floor(std::pow(Dd, 1.0 / n) + 1e-9);
        while (std::pow(X + 1, n) <= Dd) X += 1;
        std::vector<double> full(n), tail(n);
        for (int i = 1; i <= n; ++i) {
            double s_i = beta - (n - i);
            tail[i - 1] = std::pow(X, 1 - s_i) / (s_i - 1);
            full[i - 1] = zeta_partial(s_i, 1000) + std::pow(1000.0, 1 - s_i) / (s_i - 1);
        }
        double t = 0;
        for (int i = 0; i < n; ++i) {
            double p = tail[i];
            for (int j = 0; j < n; ++j)
                if (j != i) p *= full[j];
            t += p;
        }
        r.tail_bound = t;
    }
    r.tail_bound += 4 * std::numeric_limits<double>::epsilon() * r.value;
    return r;
}

// prod_{k<n} sum_{m<=N} m^{-(beta-k)}, with the gap to the infinite product bounded
inline NumericResult zeta_product_truncated(int n, double beta, std::int64_t N) {
    if (!(beta > n)) fail("BetaOutOfRange", "beta must exceed n");
    double lo = 1, hi = 1;
    for (int k = 0; k < n; ++k) {
        double s = beta - k, A = zeta_partial(s, N);
        lo *= A;
        hi *= A + std::pow(double(N), 1 - s) / (s - 1);
    }
    return {lo, hi - lo + 4 * std::numeric_limits<double>::epsilon() * hi};
}

// Functions on the finite-level groupoid {(alpha, rho)}: alpha in M_n(Z)^+,
// rho an n x n matrix mod level; composition (g, b rho) o (b, rho) = (g b, rho).
class GroupoidFunction {
public:
    using Key = std::pair<IntMatrix, IntMatrix>;

    GroupoidFunction(int n, std::int64_t level) : n_(n), level_(level) {
        if (level < 1) fail("InvalidArgument", "groupoid level must be >= 1");
    }

    int n() const { return n_; }
    std::int64_t level() const { return level_; }
    const std::map<Key, cplx>& values() const { return v_; }

    IntMatrix reduce(const IntMatrix& rho) const {
        IntMatrix r = rho;
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = floor_mod(r(i, j), level_);
        return r;
    }

    void set(const IntMatrix& alpha, const IntMatrix& rho, cplx v) {
        if (det(alpha) <= 0) fail("InvalidArgument", "groupoid arrows need positive determinant");
        v_[{alpha, reduce(rho)}] += v;
    }

    cplx operator()(const IntMatrix& alpha, const IntMatrix& rho) const {
        auto it = v_.find({alpha, reduce(rho)});
        return it == v_.end() ? cplx(0) : it->second;
    }

    // (f1 * f2)(alpha, rho) = sum_{g b = alpha} f1(g, b rho) f2(b, rho)
    friend GroupoidFunction convolve(const GroupoidFunction& f1, const GroupoidFunction& f2) {
        if (f1.n_ != f2.n_ || f1.level_ != f2.level_) fail("InvalidArgument", "groupoid functions differ in shape");
        GroupoidFunction out(f1.n_, f1.level_);
        for (const auto& [k2, v2] : f2.v_) {
            IntMatrix moved = f1.reduce(k2.first * k2.second);
            for (const auto& [k1, v1] : f1.v_)
                if (k1.second == moved) out.v_[{k1.first * k2.first, k2.second}] += v1 * v2;
        }
        return out;
    }

    // sigma_t(f)(alpha, rho) = det(alpha)^{it} f(alpha, rho)
    GroupoidFunction evolve(double t) const {
        GroupoidFunction out(n_, level_);
        for (const auto& [k, v] : v_) out.v_[k] = v * std::polar(1.0, t * std::log(to_double(det(k.first))));
        return out;
    }

private:
    int n_;
    std::int64_t level_;
    std::map<Key, cplx> v_;
};

struct GibbsValue {
    cplx value;
    double tail_bound = 0;
};

// Z^{-1} sum over HNF m with det(m) <= D of g(m rho mod N) det(m)^{-beta};
// the bound assumes |g| <= sup_norm
inline GibbsValue groupoid_gibbs(const std::function<cplx(const IntMatrix&)>& g, const IntMatrix& rho, std::int64_t level,
                                 double beta, std::int64_t D, double sup_norm = 1) {
    const int n = int(rho.rows());
    if (!(beta > n)) fail("BetaOutOfRange", "beta must exceed n");
    CompensatedSum<cplx> num;
    CompensatedSum<double> Z;
    for (std::int64_t d = 1; d <= D; ++d) {
        double w = std::pow(double(d), -beta);
        for (const auto& m : hnf_enumerate(n, d)) {
            IntMatrix x = m * rho;
            for (std::size_t i = 0; i < x.rows(); ++i)
                for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = floor_mod(x(i, j), level);
            num += g(x) * w;
            Z += w;
        }
    }
    return {num.value() / Z.value(), 2 * sup_norm * partition_II1(n, beta, D).tail_bound / Z.value()};
}

inline GibbsValue groupoid_gibbs(const GroupoidFunction& f, const IntMatrix& rho, double beta, std::int64_t D) {
    IntMatrix I = IntMatrix::identity(f.n());
    double sup = 0;
    for (const auto& [k, v] : f.values()) sup = std::max(sup, std::abs(v));
    return groupoid_gibbs([&](const IntMatrix& x) { return f(I, x); }, rho, f.level(), beta, D, sup);
}

} // namespace hbc
