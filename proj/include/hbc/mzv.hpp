#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>
#include <set>
#include <utility>
#include <optional>
#include <vector>

#include "cyclotomic.hpp"
#include "intmatrix.hpp"

namespace hbc {

using RatVec = std::vector<Rational>;
using LatticePoint = std::vector<std::int64_t>;

namespace detail {

inline std::size_t rank(std::vector<RatVec> rows) {
    std::size_t r = 0;
    const std::size_t n = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            Rational f = rows[i][c] / rows[r][c];
            for (std::size_t j = c; j < n; ++j) rows[i][j] -= f * rows[r][j];
        }
        ++r;
    }
    return r;
}

// primitive integer vector on the same ray
inline std::vector<BigInt> primitive(const RatVec& v) {
    BigInt l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, denominator(x));
    std::vector<BigInt> w;
    BigInt g = 0;
    for (const auto& x : v) {
        w.push_back(numerator(x) * (l / denominator(x)));
        g = boost::multiprecision::gcd(g, w.back());
    }
    if (g > 1)
        for (auto& x : w) x /= g;
    return w;
}

inline Rational dot(const RatVec& l, const LatticePoint& v) {
    Rational s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += l[i] * v[i];
    return s;
}
inline Rational dot(const RatVec& l, const RatVec& v) {
    Rational s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += l[i] * v[i];
    return s;
}

} // namespace detail

// Full-dimensional cone R_+ v_1 + ... + R_+ v_r in R^n.
class RationalCone {
public:
    RationalCone() = default;
    RationalCone(std::size_t n, std::vector<RatVec> gens) : n_(n), gens_(std::move(gens)) {
        if (n_ == 0) fail("InvalidArgument", "cone needs dimension >= 1");
        for (const auto& g : gens_) {
            if (g.size() != n_) fail("InvalidArgument", "generator has wrong dimension");
            if (std::all_of(g.begin(), g.end(), [](const Rational& x) { return x == 0; })) fail("InvalidArgument", "zero generator");
        }
        if (detail::rank(gens_) != n_) fail("InvalidArgument", "cone is not full-dimensional");
        simplicial_ = gens_.size() == n_;
        compute_facets();
        if (simplicial_) {
            RatMatrix V(n_, n_);
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j < n_; ++j) V(i, j) = gens_[j][i];
            vinv_ = inverse(V);
        }
    }

    std::size_t dim() const { return n_; }
    const std::vector<RatVec>& generators() const { return gens_; }
    bool simplicial() const { return simplicial_; }
    // inward integer normals, one per facet
    const std::vector<std::vector<std::int64_t>>& facets() const { return facets_; }

    bool interior(const LatticePoint& v) const {
        for (const auto& f : facets_) {
            __int128 s = 0;
            for (std::size_t i = 0; i < n_; ++i) s += static_cast<__int128>(f[i]) * v[i];
            if (s <= 0) return false;
        }
        return true;
    }
    bool contains(const RatVec& v) const {
        for (const auto& f : facets_) {
            Rational s = 0;
            for (std::size_t i = 0; i < n_; ++i) s += v[i] * f[i];
            if (s < 0) return false;
        }
        return true;
    }

    // simplicial cones: all coordinates in the generator basis positive
    bool interior_by_coordinates(const LatticePoint& v) const {
        if (!simplicial_) fail("InvalidArgument", "coordinates need a simplicial cone");
        for (std::size_t i = 0; i < n_; ++i) {
            Rational c = 0;
            for (std::size_t j = 0; j < n_; ++j) c += vinv_(i, j) * v[j];
            if (c <= 0) return false;
        }
        return true;
    }

    // sum over facets of the normal scaled to max 1 on the generators
    RatVec default_height() const {
        RatVec h(n_, Rational(0));
        for (const auto& f : facets_) {
            Rational mx = 0;
            for (const auto& g : gens_) {
                Rational s = 0;
                for (std::size_t i = 0; i < n_; ++i) s += g[i] * f[i];
                mx = std::max(mx, s);
            }
            if (mx == 0) continue;
            for (std::size_t i = 0; i < n_; ++i) h[i] += Rational(f[i]) / mx;
        }
        return h;
    }

private:
    void compute_facets() {
        std::vector<std::vector<BigInt>> P;
        for (const auto& g : gens_) P.push_back(detail::primitive(g));
        const std::size_t r = P.size();
        std::set<std::vector<std::int64_t>> seen;
        // iterate (n-1)-subsets
        std::vector<bool> mask(r, false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n_ - 1), true);
        std::sort(mask.begin(), mask.end());
        do {
            std::vector<std::size_t> sub;
            for (std::size_t i = 0; i < r; ++i)
                if (mask[i]) sub.push_back(i);
            // cofactor normal of the (n-1) x n block
            std::vector<BigInt> nrm(n_);
            for (std::size_t j = 0; j < n_; ++j) {
                IntMatrix M(n_ - 1, n_ - 1);
                for (std::size_t a = 0; a < n_ - 1; ++a)
                    for (std::size_t c = 0, cc = 0; c < n_; ++c) {
                        if (c == j) continue;
                        M(a, cc++) = P[sub[a]][c];
                    }
                nrm[j] = det(M) * (j % 2 ? -1 : 1);
            }
            if (std::all_of(nrm.begin(), nrm.end(), [](const BigInt& x) { return x == 0; })) continue;
            bool pos = true, neg = true;
            for (const auto& g : P) {
                BigInt s = 0;
                for (std::size_t i = 0; i < n_; ++i) s += nrm[i] * g[i];
                if (s < 0) pos = false;
                if (s > 0) neg = false;
            }
            if (!pos && !neg) continue;
            if (!pos)
                for (auto& x : nrm) x = -x;
            BigInt g = 0;
            for (const auto& x : nrm) g = boost::multiprecision::gcd(g, x);
            std::vector<std::int64_t> f;
            for (const auto& x : nrm) f.push_back(static_cast<std::int64_t>(x / g));
            if (seen.insert(f).second) facets_.push_back(f);
        } while (std::next_permutation(mask.begin(), mask.end()));
    }

    std::size_t n_ = 0;
    std::vector<RatVec> gens_;
    bool simplicial_ = false;
    std::vector<std::vector<std::int64_t>> facets_;
    RatMatrix vinv_;
};

// chi(v) = exp(2 pi i <theta, v>)
inline RootOfUnity character(const std::vector<RootOfUnity>& theta, const LatticePoint& v) {
    RootOfUnity r;
    for (std::size_t i = 0; i < theta.size(); ++i) r = r * theta[i].pow(v[i]);
    return r;
}

struct ConeState {
    RationalCone cone;
    std::vector<RatVec> forms;
    std::vector<RootOfUnity> theta;

    ConeState() = default;
    ConeState(RationalCone c, std::vector<RatVec> f, std::vector<RootOfUnity> t = {})
        : cone(std::move(c)), forms(std::move(f)), theta(std::move(t)) {
        if (theta.empty()) theta.assign(cone.dim(), RootOfUnity());
        validate();
    }

    std::size_t depth() const { return forms.size(); }

    void validate() const {
        if (theta.size() != cone.dim()) fail("InvalidArgument", "character has wrong dimension");
        for (const auto& l : forms) {
            if (l.size() != cone.dim()) fail("InvalidArgument", "form has wrong dimension");
            bool nonzero = false;
            for (const auto& g : cone.generators()) {
                Rational s = detail::dot(l, g);
                if (s < 0) fail("InvalidArgument", "form negative on a generator");
                nonzero = nonzero || s > 0;
            }
            if (!nonzero) fail("InvalidArgument", "form vanishes on the cone");
        }
    }
};

inline void check_height(const RationalCone& C, const RatVec& h) {
    if (h.size() != C.dim()) fail("InvalidArgument", "height form has wrong dimension");
    for (const auto& g : C.generators())
        if (detail::dot(h, g) <= 0) fail("NonPositiveHeightForm", "height form not positive on every generator");
}

// visit v in C^0 ∩ Z^n with h(v) <= hmax, lexicographic order
template <class F>
void for_each_cone_point(const RationalCone& C, double hmax, const RatVec& h, F&& visit) {
    check_height(C, h);
    const std::size_t n = C.dim();
    // {v in C : h(v) <= hmax} = conv(0, hmax g / h(g))
    std::vector<double> lo(n, 0.0), hi(n, 0.0);
    for (const auto& g : C.generators()) {
        double s = hmax / to_double(detail::dot(h, g));
        for (std::size_t i = 0; i < n; ++i) {
            double x = to_double(g[i]) * s;
            lo[i] = std::min(lo[i], x);
            hi[i] = std::max(hi[i], x);
        }
    }
    LatticePoint blo(n), bhi(n);
    for (std::size_t i = 0; i < n; ++i) {
        blo[i] = static_cast<std::int64_t>(std::floor(lo[i])) - 1;
        bhi[i] = static_cast<std::int64_t>(std::ceil(hi[i])) + 1;
    }
    // integer height test: H . v <= hmax * D
    auto hp = detail::primitive(h);
    Rational scale = h[0] != 0 ? h[0] / Rational(hp[0]) : Rational(0);
    for (std::size_t i = 0; scale == 0 && i < n; ++i)
        if (h[i] != 0) scale = h[i] / Rational(hp[i]);
    std::vector<std::int64_t> H;
    for (const auto& x : hp) H.push_back(static_cast<std::int64_t>(x));
    // h(v) = scale * H.v with H.v an integer
    const Rational bound = Rational(hmax) / scale;
    const auto hb = static_cast<__int128>(static_cast<long long>(numerator(bound) / denominator(bound)));
    LatticePoint v = blo;
    for (;;) {
        if (C.interior(v)) {
            __int128 s = 0;
            for (std::size_t i = 0; i < n; ++i) s += static_cast<__int128>(H[i]) * v[i];
            if (s <= hb) visit(std::as_const(v));
        }
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++v[i] <= bhi[i]) break;
            v[i] = blo[i];
            if (i == 0) return;
        }
    }
}

inline std::vector<LatticePoint> cone_points(const RationalCone& C, double hmax, std::optional<RatVec> height = std::nullopt) {
    std::vector<LatticePoint> out;
    for_each_cone_point(C, hmax, height ? *height : C.default_height(), [&](const LatticePoint& v) { out.push_back(v); });
    return out;
}

struct MZVResult {
    std::complex<double> value;
    double tail = 0;
    std::size_t points = 0;
};

inline MZVResult mzv_cone(const ConeState& s, double hmax, bool allow_divergent = false, std::optional<RatVec> height = std::nullopt) {
    s.validate();
    const std::size_t n = s.cone.dim(), k = s.depth();
    if (k <= n && !allow_divergent)
        fail("ConvergenceWarning", "depth " + std::to_string(k) + " <= dimension " + std::to_string(n) + "; pass an override to sum anyway");
    const RatVec h = height ? *height : s.cone.default_height();

    std::vector<std::vector<double>> L;
    for (const auto& l : s.forms) {
        std::vector<double> d;
        for (const auto& x : l) d.push_back(to_double(x));
        L.push_back(std::move(d));
    }
    std::vector<double> hd;
    for (const auto& x : h) hd.push_back(to_double(x));

    CompensatedSum<double> re, im, shell;
    MZVResult out;
    double hmax_seen = 0;
    for_each_cone_point(s.cone, hmax, h, [&](const LatticePoint& v) {
        double den = 1;
        for (const auto& l : L) {
            double x = 0;
            for (std::size_t i = 0; i < n; ++i) x += l[i] * static_cast<double>(v[i]);
            den *= x;
        }
        auto r = character(s.theta, v);
        auto chi = r.num() == 0 ? std::complex<double>(1, 0)
                                : std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(r.num()) / static_cast<double>(r.den()));
        re += chi.real() / den;
        im += chi.imag() / den;
        double hv = 0;
        for (std::size_t i = 0; i < n; ++i) hv += hd[i] * static_cast<double>(v[i]);
        hmax_seen = std::max(hmax_seen, hv);
        if (hv > hmax / 2) shell += 1.0 / std::abs(den);
        ++out.points;
    });
    out.value = {re.value(), im.value()};

    if (k <= n) {
        out.tail = std::numeric_limits<double>::infinity();
    } else if (n == 1) {
        // integers on a ray: sum_{x > X} prod 1/l_i(x) <= prod 1/|l_i(g)| X^{1-k}/(k-1)
        const auto g = detail::primitive(s.cone.generators()[0]);
        const double hg = to_double(detail::dot(h, RatVec{Rational(g[0])}));
        const double X = std::floor(hmax / hg);
        double c = 1;
        for (const auto& l : L) c /= std::abs(l[0] * to_double(g[0]));
        out.tail = X < 1 ? std::numeric_limits<double>::infinity() : c * std::pow(X, 1.0 - static_cast<double>(k)) / static_cast<double>(k - 1);
    } else {
        // shell (hmax/2, hmax] extrapolated geometrically with decay h^{n-k}, doubled
        const double p = static_cast<double>(k - n);
        out.tail = 2 * shell.value() / (std::pow(2.0, p) - 1);
    }
    return out;
}

// forms l -> l o m
inline ConeState channel_transform(const ConeState& s, const IntMatrix& m) {
    const std::size_t n = s.cone.dim();
    if (m.rows() != n || m.cols() != n) fail("InvalidArgument", "channel matrix has wrong shape");
    // m(C) ⊂ C and no facet normal vanishes on m(C)
    for (const auto& g : s.cone.generators()) {
        RatVec mg(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) mg[i] += Rational(m(i, j)) * g[j];
        if (!s.cone.contains(mg)) fail("ConeNotPreserved", "image of a generator leaves the cone");
    }
    for (const auto& f : s.cone.facets()) {
        bool positive = false;
        for (const auto& g : s.cone.generators()) {
            Rational x = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) x += Rational(f[i]) * Rational(m(i, j)) * g[j];
            positive = positive || x > 0;
        }
        if (!positive) fail("ConeNotPreserved", "interior maps into a facet");
    }
    ConeState t = s;
    for (auto& l : t.forms) {
        RatVec nl(n, Rational(0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) nl[j] += l[i] * Rational(m(i, j));
        l = std::move(nl);
    }
    return t;
}

// phi(chi_a) = zeta_C(l, chi_a chi) / zeta_C(l, chi)
inline std::complex<double> state_expectation(const ConeState& s, const std::vector<RootOfUnity>& a, double hmax) {
    ConeState sa = s;
    for (std::size_t i = 0; i < a.size(); ++i) sa.theta[i] = sa.theta[i] * a[i];
    return mzv_cone(sa, hmax).value / mzv_cone(s, hmax).value;
}

struct RelationTerm {
    Rational coeff;
    std::vector<ConeState> factors;
};

struct RelationResult {
    double residual = 0;
    double tail = 0;
    double residual_transformed = 0;
    double tail_transformed = 0;
    bool passed = false;
};

namespace detail {
inline std::pair<std::complex<double>, double> evaluate_relation(const std::vector<RelationTerm>& terms, double hmax) {
    std::complex<double> total = 0;
    double tail = 0;
    for (const auto& t : terms) {
        std::complex<double> p = 1;
        double mag = 1, bound = 1;
        for (const auto& f : t.factors) {
            auto r = mzv_cone(f, hmax);
            p *= r.value;
            mag *= std::abs(r.value);
            bound *= std::abs(r.value) + r.tail;
        }
        double c = to_double(t.coeff);
        total += c * p;
        tail += std::abs(c) * (bound - mag);
    }
    return {total, tail};
}
} // namespace detail

inline RelationResult relation_check(const std::vector<RelationTerm>& terms, const IntMatrix& m, double hmax, double tol = 1e-9) {
    RelationResult out;
    auto [v, t] = detail::evaluate_relation(terms, hmax);
    std::vector<RelationTerm> moved = terms;
    for (auto& term : moved)
        for (auto& f : term.factors) f = channel_transform(f, m);
    auto [vt, tt] = detail::evaluate_relation(moved, hmax);
    out.residual = std::abs(v);
    out.tail = t;
    out.residual_transformed = std::abs(vt);
    out.tail_transformed = tt;
    out.passed = out.residual <= tol + t && out.residual_transformed <= tol + tt;
    return out;
}

} // namespace hbc
