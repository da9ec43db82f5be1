#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "cyclotomic.hpp"
#include "intmatrix.hpp"

namespace hbc {

inline std::size_t pochhammer_degree(int N) { return static_cast<std::size_t>(N) * (N + 1) / 2; }

namespace detail {
inline const IntPoly& pochhammer_cached(int N) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<IntPoly>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return *it->second;
    IntPoly p = IntPoly::constant(1);
    for (int k = 1; k <= N; ++k) {
        std::vector<BigInt> f(k + 1);
        f[0] = 1;
        f[k] = -1;
        p = p * IntPoly(std::move(f));
    }
    return *cache.emplace(N, std::make_unique<IntPoly>(std::move(p))).first->second;
}
} // namespace detail

// (1-q)(1-q^2)...(1-q^N)
inline IntPoly pochhammer(int N) {
    if (N < 1) fail("InvalidArgument", "pochhammer needs N >= 1");
    return detail::pochhammer_cached(N);
}

// Element of Z[q]/((q)_N), kept as the remainder of division by (q)_N.
class HabiroElt {
public:
    HabiroElt() : HabiroElt(1, IntPoly{}) {}
    HabiroElt(int level, const IntPoly& p) : level_(level) {
        if (level < 1) fail("InvalidArgument", "Habiro level must be >= 1");
        std::vector<BigInt> v = p.coeffs();
        const auto& m = detail::pochhammer_cached(level).coeffs();
        if (v.size() >= m.size()) reduce_monic(v, m);
        rep_ = IntPoly(std::move(v));
    }

    int level() const { return level_; }
    const IntPoly& rep() const { return rep_; }

    HabiroElt project(int K) const {
        if (K > level_) fail("InvalidArgument", "cannot project to a higher level");
        return HabiroElt(K, rep_);
    }

    friend HabiroElt operator+(const HabiroElt& a, const HabiroElt& b) {
        int L = std::min(a.level_, b.level_);
        return HabiroElt(L, a.rep_ + b.rep_);
    }
    friend HabiroElt operator-(const HabiroElt& a, const HabiroElt& b) {
        int L = std::min(a.level_, b.level_);
        return HabiroElt(L, a.rep_ - b.rep_);
    }
    friend HabiroElt operator*(const HabiroElt& a, const HabiroElt& b) {
        int L = std::min(a.level_, b.level_);
        return HabiroElt(L, a.project(L).rep_ * b.project(L).rep_);
    }
    // equal at the common (minimum) level
    friend bool operator==(const HabiroElt& a, const HabiroElt& b) {
        int L = std::min(a.level_, b.level_);
        return a.project(L).rep_ == b.project(L).rep_;
    }

private:
    int level_;
    IntPoly rep_;
};

inline HabiroElt reduce(const IntPoly& p, int N) { return HabiroElt(N, p); }

inline HabiroElt sigma_n(const HabiroElt& f, std::int64_t n) {
    if (n < 1) fail("InvalidArgument", "sigma_n needs n >= 1");
    return HabiroElt(f.level(), f.rep().compose_power(static_cast<std::size_t>(n)));
}

namespace detail {

// Columns are q^{nj} mod (q)_N for j < deg (q)_N.
inline IntMatrix sigma_matrix(int N, std::int64_t n) {
    const std::size_t D = pochhammer_degree(N);
    IntMatrix A(D, D);
    const auto& m = pochhammer_cached(N).coeffs();
    std::vector<BigInt> t(static_cast<std::size_t>(n) + 1);
    t[static_cast<std::size_t>(n)] = 1;
    if (t.size() > m.size() - 1) reduce_monic(t, m);
    IntPoly step(t);
    IntPoly cur = IntPoly::constant(1);
    for (std::size_t j = 0; j < D; ++j) {
        for (std::size_t i = 0; i < D; ++i) A(i, j) = cur.coeff(i);
        std::vector<BigInt> next = (cur * step).coeffs();
        if (next.size() > D) reduce_monic(next, m);
        cur = IntPoly(std::move(next));
    }
    return A;
}

inline std::optional<IntPoly> solve_sigma(const HabiroElt& f, std::int64_t n, int M) {
    const std::size_t D = pochhammer_degree(M);
    IntMatrix A = sigma_matrix(M, n);
    HabiroElt g = f.project(M);
    std::vector<BigInt> b(D);
    for (std::size_t i = 0; i < D; ++i) b[i] = g.rep().coeff(i);
    auto sol = solve_integer(A, b);
    if (!sol) return std::nullopt;
    return IntPoly(sol->x);
}

} // namespace detail

// h at level K with sigma_n(h) = f mod (q)_K. The map sigma_n has a kernel at
// every finite level, so h is the canonical representative of its coset.
inline std::optional<HabiroElt> eta_n(const HabiroElt& f, std::int64_t n, int K) {
    if (K < 1 || K > f.level()) fail("InvalidArgument", "eta_n needs 1 <= K <= level");
    if (n < 1) fail("InvalidArgument", "eta_n needs n >= 1");
    auto h = detail::solve_sigma(f, n, K);
    if (!h) return std::nullopt;
    return HabiroElt(K, *h);
}

// Uses all of f's data: solves at level N = level(f) and projects to K.
// When N >= n*K the answer is unique, so eta_n_lifted(sigma_n(h), n, K)
// equals h projected to K.
inline std::optional<HabiroElt> eta_n_lifted(const HabiroElt& f, std::int64_t n, int K) {
    if (K < 1 || K > f.level()) fail("InvalidArgument", "eta_n_lifted needs 1 <= K <= level");
    if (n < 1) fail("InvalidArgument", "eta_n_lifted needs n >= 1");
    auto h = detail::solve_sigma(f, n, f.level());
    if (!h) return std::nullopt;
    return HabiroElt(K, *h);
}

inline CycInt ev(const HabiroElt& f, const RootOfUnity& z) {
    if (z.order() > f.level())
        fail("OrderExceedsLevel", "order " + std::to_string(z.order()) + " exceeds level " + std::to_string(f.level()));
    return eval_poly(f.rep(), z);
}

namespace detail {

// coefficient k of P(q^n) around zeta: sum_j a_j C(jn, k) zeta^{jn-k}
inline std::vector<CycInt> taylor_coeffs(const IntPoly& p, std::int64_t n, const RootOfUnity& z, int depth) {
    const std::int64_t m = z.order();
    std::vector<CycInt> out;
    out.reserve(depth);
    for (int k = 0; k < depth; ++k) {
        std::vector<BigInt> acc(m);
        for (std::size_t j = 0; j < p.size(); ++j) {
            const BigInt& a = p.coeffs()[j];
            if (a == 0) continue;
            std::int64_t e = static_cast<std::int64_t>(j) * n;
            if (e < k) continue;
            BigInt c = binomial(BigInt(e), k);
            std::int64_t ex = static_cast<std::int64_t>((static_cast<__int128>(e - k) * z.num()) % m);
            acc[ex] += a * c;
        }
        out.push_back(CycInt::from_cyclic(m, std::move(acc)));
    }
    return out;
}

inline void check_taylor_depth(int level, const RootOfUnity& z, int depth) {
    if (depth < 1) fail("InvalidArgument", "taylor depth must be >= 1");
    if (static_cast<std::int64_t>(depth) * z.order() >= level)
        fail("OrderTimesDepthExceedsLevel", "depth " + std::to_string(depth) + " times order " + std::to_string(z.order()) +
                                                " must be below level " + std::to_string(level));
}

} // namespace detail

// i coefficients (k = 0..i-1) of the expansion of f in powers of (q - zeta)
inline std::vector<CycInt> taylor(const HabiroElt& f, const RootOfUnity& z, int i) {
    detail::check_taylor_depth(f.level(), z, i);
    return detail::taylor_coeffs(f.rep(), 1, z, i);
}

inline std::vector<CycInt> taylor_of_sigma(const HabiroElt& f, const RootOfUnity& z, std::int64_t n, int i) {
    if (n < 1) fail("InvalidArgument", "taylor_of_sigma needs n >= 1");
    detail::check_taylor_depth(f.level(), z, i);
    return detail::taylor_coeffs(f.rep(), n, z, i);
}

// (base, scale) stands for base(q^{1/scale}); (sigma_k(f), k*r) ~ (f, r).
struct FracHabiroElt {
    HabiroElt base;
    Rational scale{1};
};

inline FracHabiroElt frac_act(const FracHabiroElt& x, const Rational& r) {
    if (r <= 0) fail("InvalidArgument", "frac_act needs a positive rational");
    return {x.base, x.scale * r};
}

inline bool frac_eq(const FracHabiroElt& x, const FracHabiroElt& y, int K) {
    if (K < 1) fail("InvalidArgument", "frac_eq needs K >= 1");
    if (K > x.base.level() || K > y.base.level()) fail("InvalidArgument", "comparison level exceeds element level");
    const BigInt a = numerator(x.scale), b = denominator(x.scale);
    const BigInt c = numerator(y.scale), d = denominator(y.scale);
    // least common multiple T of the two scales; T/x.scale and T/y.scale are integers
    const BigInt L = lcm(a, c);
    const BigInt G = gcd(b, d);
    const BigInt kx = (L / a) * (b / G);
    const BigInt ky = (L / c) * (d / G);
    HabiroElt fx = sigma_n(x.base.project(K), kx.convert_to<std::int64_t>());
    HabiroElt fy = sigma_n(y.base.project(K), ky.convert_to<std::int64_t>());
    return fx.rep() == fy.rep();
}

} // namespace hbc
