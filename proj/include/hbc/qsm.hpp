#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "habiro.hpp"

namespace hbc {

using cplx = std::complex<double>;

struct QSMConfig {
    double hbar = std::exp(-1.0);
    double beta = 2.0;
    int nmax = 200;
    int mmax = 40;
    std::int64_t embedding = 1;

    void validate() const {
        if (!(hbar > 0 && hbar < 1)) fail("InvalidArgument", "hbar must lie in (0,1)");
        if (!(beta > 1)) fail("BetaOutOfRange", "beta must exceed 1");
        if (nmax < 1 || mmax < 0) fail("InvalidArgument", "cutoffs must be nmax >= 1, mmax >= 0");
    }
};

// Sparse operator on eps_{n,m}, 1 <= n <= nmax, 0 <= m <= mmax, stored by column.
class TwoIndexOperator {
public:
    using Column = std::map<std::size_t, cplx>;

    TwoIndexOperator() = default;
    TwoIndexOperator(int nmax, int mmax) : nmax_(nmax), mmax_(mmax), cols_(std::size_t(nmax) * (mmax + 1)) {}

    static TwoIndexOperator identity(int nmax, int mmax) {
        TwoIndexOperator A(nmax, mmax);
        for (std::size_t c = 0; c < A.dim(); ++c) A.cols_[c][c] = 1.0;
        return A;
    }

    int nmax() const { return nmax_; }
    int mmax() const { return mmax_; }
    std::size_t dim() const { return cols_.size(); }

    std::size_t index(int n, int m) const { return std::size_t(n - 1) * (mmax_ + 1) + m; }
    std::pair<int, int> label(std::size_t i) const { return {int(i / (mmax_ + 1)) + 1, int(i % (mmax_ + 1))}; }
    bool in_range(long long n, long long m) const { return n >= 1 && n <= nmax_ && m >= 0 && m <= mmax_; }

    const Column& column(std::size_t c) const { return cols_[c]; }

    // <eps_{n,m}, A eps_{n2,m2}>
    cplx operator()(int n, int m, int n2, int m2) const {
        const auto& col = cols_[index(n2, m2)];
        auto it = col.find(index(n, m));
        return it == col.end() ? cplx(0) : it->second;
    }

    void add(int n, int m, int n2, int m2, cplx v) {
        if (v == cplx(0)) return;
        cols_[index(n2, m2)][index(n, m)] += v;
    }

    TwoIndexOperator adjoint() const {
        TwoIndexOperator B(nmax_, mmax_);
        for (std::size_t c = 0; c < dim(); ++c)
            for (const auto& [r, v] : cols_[c]) B.cols_[r][c] += std::conj(v);
        return B;
    }

    template <class F>
    TwoIndexOperator map_entries(F f) const {
        TwoIndexOperator B(nmax_, mmax_);
        for (std::size_t c = 0; c < dim(); ++c)
            for (const auto& [r, v] : cols_[c]) B.cols_[c][r] = f(r, c, v);
        return B;
    }

    friend TwoIndexOperator operator*(const TwoIndexOperator& A, const TwoIndexOperator& B) {
        check_shape(A, B);
        TwoIndexOperator C(A.nmax_, A.mmax_);
        for (std::size_t c = 0; c < B.dim(); ++c)
            for (const auto& [k, v] : B.cols_[c])
                for (const auto& [r, w] : A.cols_[k]) C.cols_[c][r] += w * v;
        return C;
    }
    friend TwoIndexOperator operator+(const TwoIndexOperator& A, const TwoIndexOperator& B) {
        check_shape(A, B);
        TwoIndexOperator C = A;
        for (std::size_t c = 0; c < B.dim(); ++c)
            for (const auto& [r, v] : B.cols_[c]) C.cols_[c][r] += v;
        return C;
    }
    friend TwoIndexOperator operator-(const TwoIndexOperator& A, const TwoIndexOperator& B) {
        return A + B.map_entries([](std::size_t, std::size_t, cplx v) { return -v; });
    }

private:
    static void check_shape(const TwoIndexOperator& A, const TwoIndexOperator& B) {
        if (A.nmax_ != B.nmax_ || A.mmax_ != B.mmax_) fail("InvalidArgument", "operator cutoffs differ");
    }

    int nmax_ = 0, mmax_ = 0;
    std::vector<Column> cols_;
};

// largest entry difference over columns accepted by keep(col) and rows accepted by keep_row(row)
template <class ColPred, class RowPred>
double max_abs_diff(const TwoIndexOperator& A, const TwoIndexOperator& B, ColPred keep, RowPred keep_row) {
    double d = 0;
    for (std::size_t c = 0; c < A.dim(); ++c) {
        if (!keep(c)) continue;
        std::map<std::size_t, cplx> diff = A.column(c);
        for (const auto& [r, v] : B.column(c)) diff[r] -= v;
        for (const auto& [r, v] : diff)
            if (keep_row(r)) d = std::max(d, std::abs(v));
    }
    return d;
}

inline double max_abs_diff(const TwoIndexOperator& A, const TwoIndexOperator& B) {
    auto all = [](std::size_t) { return true; };
    return max_abs_diff(A, B, all, all);
}

// Taylor coefficients of f o sigma_n at zeta, embedded, for every row n <= nmax
inline std::vector<std::vector<cplx>> taylor_table(const RootOfUnity& z, const HabiroElt& f, int depth, const QSMConfig& cfg) {
    std::vector<std::vector<cplx>> t(cfg.nmax + 1);
    for (int n = 1; n <= cfg.nmax; ++n)
        for (const auto& c : taylor_of_sigma(f, z, n, depth)) t[n].push_back(complex_embed(c, cfg.embedding));
    return t;
}

// T eps_{n,m} = sum_{k<depth} t_k(f o sigma_n) eps_{n,m+k}
inline TwoIndexOperator build_T(const RootOfUnity& z, const HabiroElt& f, int depth, const QSMConfig& cfg) {
    auto t = taylor_table(z, f, depth, cfg);
    TwoIndexOperator T(cfg.nmax, cfg.mmax);
    for (int n = 1; n <= cfg.nmax; ++n)
        for (int m = 0; m <= cfg.mmax; ++m)
            for (int k = 0; k < depth && m + k <= cfg.mmax; ++k) T.add(n, m + k, n, m, t[n][k]);
    return T;
}

// delta_l eps_{n,m} = eps_{n,m+l}
inline TwoIndexOperator delta_operator(int l, const QSMConfig& cfg) {
    if (l < 0) fail("InvalidArgument", "shift must be >= 0");
    TwoIndexOperator D(cfg.nmax, cfg.mmax);
    for (int n = 1; n <= cfg.nmax; ++n)
        for (int m = 0; m + l <= cfg.mmax; ++m) D.add(n, m + l, n, m, 1.0);
    return D;
}

// mu_k eps_{n,m} = eps_{kn,m}
inline TwoIndexOperator mu_operator(int k, const QSMConfig& cfg) {
    if (k < 1) fail("InvalidArgument", "mu index must be >= 1");
    TwoIndexOperator U(cfg.nmax, cfg.mmax);
    for (int n = 1; n * k <= cfg.nmax; ++n)
        for (int m = 0; m <= cfg.mmax; ++m) U.add(n * k, m, n, m, 1.0);
    return U;
}

// Y eps_{n,m} = sum_{j>=0} t_{j+l-m}(f o sigma_n) eps_{n,j} for m < l, zero for m >= l;
// equals [delta_l^*, T] away from the m-cutoff.
inline TwoIndexOperator y_operator(const RootOfUnity& z, const HabiroElt& f, int l, int depth, const QSMConfig& cfg) {
    auto t = taylor_table(z, f, depth, cfg);
    TwoIndexOperator Y(cfg.nmax, cfg.mmax);
    for (int n = 1; n <= cfg.nmax; ++n)
        for (int m = 0; m < l && m <= cfg.mmax; ++m)
            for (int k = l - m; k < depth && m + k - l <= cfg.mmax; ++k) Y.add(n, m + k - l, n, m, t[n][k]);
    return Y;
}

inline double energy(int n, int m, double hbar) { return std::log(double(n)) - m * std::log(hbar); }

inline TwoIndexOperator hamiltonian(const QSMConfig& cfg) {
    if (!(cfg.hbar > 0 && cfg.hbar < 1)) fail("InvalidArgument", "hbar must lie in (0,1)");
    TwoIndexOperator H(cfg.nmax, cfg.mmax);
    for (int n = 1; n <= cfg.nmax; ++n)
        for (int m = 0; m <= cfg.mmax; ++m) H.add(n, m, n, m, energy(n, m, cfg.hbar));
    return H;
}

// e^{itH} a e^{-itH}
inline TwoIndexOperator time_evolve(const TwoIndexOperator& a, double t, const QSMConfig& cfg) {
    return a.map_entries([&](std::size_t r, std::size_t c, cplx v) {
        auto [n1, m1] = a.label(r);
        auto [n2, m2] = a.label(c);
        return v * std::polar(1.0, t * (energy(n1, m1, cfg.hbar) - energy(n2, m2, cfg.hbar)));
    });
}

struct NumericResult {
    double value = 0;
    double tail_bound = 0;
};

// sum_{n<=N} n^{-beta}, ascending
inline double zeta_partial(double beta, long long N) {
    CompensatedSum<double> s;
    for (long long n = 1; n <= N; ++n) s += std::pow(double(n), -beta);
    return s.value();
}

// sum_{m<=M} h^m
inline double geometric_partial(double h, int M) {
    CompensatedSum<double> s;
    double p = 1;
    for (int m = 0; m <= M; ++m, p *= h) s += p;
    return s.value();
}

inline NumericResult partition_function(const QSMConfig& cfg) {
    cfg.validate();
    const double h = std::pow(cfg.hbar, cfg.beta);
    const double A = zeta_partial(cfg.beta, cfg.nmax), G = geometric_partial(h, cfg.mmax);
    NumericResult r;
    r.value = A * G;
    double n_tail = std::pow(double(cfg.nmax), 1 - cfg.beta) / (cfg.beta - 1);
    r.tail_bound = n_tail / (1 - h) + A * std::pow(h, cfg.mmax + 1) / (1 - h);
    r.tail_bound += 4 * std::numeric_limits<double>::epsilon() * r.value;
    return r;
}

// Tr(a e^{-beta H}) / Tr(e^{-beta H}) on the truncated space
inline cplx gibbs_state(const TwoIndexOperator& a, const QSMConfig& cfg) {
    cfg.validate();
    if (a.nmax() != cfg.nmax || a.mmax() != cfg.mmax) fail("InvalidArgument", "operator cutoffs differ from config");
    const double h = std::pow(cfg.hbar, cfg.beta);
    CompensatedSum<cplx> num;
    for (int n = 1; n <= cfg.nmax; ++n) {
        double w = std::pow(double(n), -cfg.beta), hm = 1;
        for (int m = 0; m <= cfg.mmax; ++m, hm *= h) {
            const auto& col = a.column(a.index(n, m));
            auto it = col.find(a.index(n, m));
            if (it != col.end()) num += it->second * (w * hm);
        }
    }
    return num.value() / (zeta_partial(cfg.beta, cfg.nmax) * geometric_partial(h, cfg.mmax));
}

enum class ShiftSide { Left, Right };

// phi_beta(delta_l^* T) (Left) or phi_beta(T delta_l^*) (Right) from the series
// sum_n t_l(f o sigma_n) n^{-beta}, without forming operators
inline cplx gibbs_analytic(const RootOfUnity& z, const HabiroElt& f, int l, const QSMConfig& cfg, ShiftSide side = ShiftSide::Left) {
    cfg.validate();
    if (l < 0) fail("InvalidArgument", "shift must be >= 0");
    if (l > cfg.mmax) return 0;
    const double h = std::pow(cfg.hbar, cfg.beta);
    CompensatedSum<cplx> s;
    for (int n = 1; n <= cfg.nmax; ++n) {
        auto t = taylor_of_sigma(f, z, n, l + 1);
        s += complex_embed(t[l], cfg.embedding) * std::pow(double(n), -cfg.beta);
    }
    double w = geometric_partial(h, cfg.mmax - l) / geometric_partial(h, cfg.mmax);
    if (side == ShiftSide::Right) w *= std::pow(h, l);
    return s.value() * w / zeta_partial(cfg.beta, cfg.nmax);
}

// vacuum matrix element <eps_{1,0}, a eps_{1,0}>
inline cplx kms_infinity(const TwoIndexOperator& a) { return a(1, 0, 1, 0); }

inline bool galois_intertwine_check(const RootOfUnity& z, const HabiroElt& f, std::int64_t a) {
    if (std::gcd(pmod(a, z.order()), z.order()) != 1) fail("InvalidArgument", "Galois element must be a unit");
    return ev(f, z.pow(a)) == galois_act(pmod(a, z.order()), ev(f, z));
}

} // namespace hbc
