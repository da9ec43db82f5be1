#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace hbc {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        r_ = rows.size();
        c_ = r_ ? rows.begin()->size() : 0;
        for (const auto& row : rows) {
            if (row.size() != c_) fail("InvalidArgument", "ragged matrix");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
    friend bool operator<(const Matrix& x, const Matrix& y) {
        if (x.r_ != y.r_) return x.r_ < y.r_;
        if (x.c_ != y.c_) return x.c_ < y.c_;
        return x.a_ < y.a_;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.c_ != y.r_) fail("InvalidArgument", "matrix shape mismatch");
        Matrix z(x.r_, y.c_);
        for (std::size_t i = 0; i < x.r_; ++i)
            for (std::size_t k = 0; k < x.c_; ++k) {
                if (x(i, k) == 0) continue;
                for (std::size_t j = 0; j < y.c_; ++j) z(i, j) += x(i, k) * y(k, j);
            }
        return z;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != c_) fail("InvalidArgument", "vector length mismatch");
        std::vector<T> out(r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    Matrix transpose() const {
        Matrix t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    void swap_cols(std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < r_; ++r) std::swap((*this)(r, i), (*this)(r, j));
    }
    void swap_rows(std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < c_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }
    // col_j += k * col_i
    void add_col(std::size_t j, std::size_t i, const T& k) {
        if (k == 0) return;
        for (std::size_t r = 0; r < r_; ++r) (*this)(r, j) += k * (*this)(r, i);
    }
    // row_j += k * row_i
    void add_row(std::size_t j, std::size_t i, const T& k) {
        if (k == 0) return;
        for (std::size_t c = 0; c < c_; ++c) (*this)(j, c) += k * (*this)(i, c);
    }
    // (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
    void mix_cols(std::size_t i, std::size_t j, const T& p, const T& q, const T& r, const T& s) {
        for (std::size_t row = 0; row < r_; ++row) {
            T a = (*this)(row, i), b = (*this)(row, j);
            (*this)(row, i) = p * a + q * b;
            (*this)(row, j) = r * a + s * b;
        }
    }
    void mix_rows(std::size_t i, std::size_t j, const T& p, const T& q, const T& r, const T& s) {
        for (std::size_t col = 0; col < c_; ++col) {
            T a = (*this)(i, col), b = (*this)(j, col);
            (*this)(i, col) = p * a + q * b;
            (*this)(j, col) = r * a + s * b;
        }
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Matrix<BigInt>;
using RatMatrix = Matrix<Rational>;

inline std::string to_string(const IntMatrix& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ",[" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? "," : "") + m(i, j).str();
        s += "]";
    }
    return s + "]";
}

// floor division for BigInt
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline BigInt floor_mod(const BigInt& a, const BigInt& b) { return a - b * floor_div(a, b); }

// x*a + y*b = g = gcd(a,b) >= 0
inline void ext_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& x, BigInt& y) {
    BigInt r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt t;
        t = r0 - q * r1; r0 = r1; r1 = t;
        t = s0 - q * s1; s0 = s1; s1 = t;
        t = t0 - q * t1; t0 = t1; t1 = t;
    }
    if (r0 < 0) {
        r0 = -r0; s0 = -s0; t0 = -t0;
    }
    g = r0; x = s0; y = t0;
}

inline BigInt det(const IntMatrix& m) {
    if (m.rows() != m.cols()) fail("InvalidArgument", "det of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

inline RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

inline RatMatrix inverse(const RatMatrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) fail("InvalidArgument", "inverse of non-square matrix");
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) fail("SingularMatrix", "matrix is singular");
        a.swap_rows(k, p);
        inv.swap_rows(k, p);
        Rational piv = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            Rational f = -a(i, k);
            a.add_row(i, k, f);
            inv.add_row(i, k, f);
        }
    }
    return inv;
}

inline RatMatrix inverse(const IntMatrix& m) { return inverse(to_rational(m)); }

// Column echelon form A*U = H: the pivot of column k sits in row pivots[k],
// strictly increasing, positive; columns rank..cols-1 of H are zero and the
// matching columns of U span the integer kernel.
struct ColumnEchelon {
    IntMatrix H, U;
    std::vector<std::size_t> pivots;
};

inline ColumnEchelon column_echelon(const IntMatrix& A) {
    ColumnEchelon e{A, IntMatrix::identity(A.cols()), {}};
    IntMatrix& H = e.H;
    IntMatrix& U = e.U;
    std::size_t p = 0;
    for (std::size_t i = 0; i < A.rows() && p < A.cols(); ++i) {
        for (std::size_t j = p + 1; j < A.cols(); ++j) {
            if (H(i, j) == 0) continue;
            if (H(i, p) == 0) {
                H.swap_cols(p, j);
                U.swap_cols(p, j);
                continue;
            }
            BigInt a = H(i, p), b = H(i, j), g, x, y;
            ext_gcd(a, b, g, x, y);
            BigInt ag = a / g, bg = b / g;
            // (col_p, col_j) <- (x col_p + y col_j, -b/g col_p + a/g col_j), determinant 1
            H.mix_cols(p, j, x, y, -bg, ag);
            U.mix_cols(p, j, x, y, -bg, ag);
        }
        if (H(i, p) == 0) continue;
        if (H(i, p) < 0) {
            for (std::size_t r = 0; r < H.rows(); ++r) H(r, p) = -H(r, p);
            for (std::size_t r = 0; r < U.rows(); ++r) U(r, p) = -U(r, p);
        }
        e.pivots.push_back(i);
        ++p;
    }
    return e;
}

struct IntegerSolution {
    std::vector<BigInt> x;               // canonical representative of the coset x + ker
    std::vector<std::vector<BigInt>> kernel;  // echelon basis of the integer kernel
};

// Solves A x = b over Z. The particular solution is reduced against an
// echelon kernel basis, so equal cosets give identical output.
inline std::optional<IntegerSolution> solve_integer(const IntMatrix& A, const std::vector<BigInt>& b) {
    if (b.size() != A.rows()) fail("InvalidArgument", "right-hand side length mismatch");
    ColumnEchelon e = column_echelon(A);
    const std::size_t rank = e.pivots.size();
    std::vector<BigInt> y(A.cols());
    for (std::size_t k = 0; k < rank; ++k) {
        std::size_t i = e.pivots[k];
        BigInt s = b[i];
        for (std::size_t j = 0; j < k; ++j) s -= e.H(i, j) * y[j];
        if (s % e.H(i, k) != 0) return std::nullopt;
        y[k] = s / e.H(i, k);
    }
    for (std::size_t i = 0; i < A.rows(); ++i) {
        BigInt s = 0;
        for (std::size_t j = 0; j < rank; ++j) s += e.H(i, j) * y[j];
        if (s != b[i]) return std::nullopt;
    }
    IntegerSolution sol;
    sol.x = e.U.apply(y);

    const std::size_t nk = A.cols() - rank;
    if (nk > 0) {
        IntMatrix K(A.cols(), nk);
        for (std::size_t r = 0; r < A.cols(); ++r)
            for (std::size_t c = 0; c < nk; ++c) K(r, c) = e.U(r, rank + c);
        ColumnEchelon ke = column_echelon(K);
        for (std::size_t c = 0; c < ke.pivots.size(); ++c) {
            std::size_t i = ke.pivots[c];
            BigInt q = floor_div(sol.x[i], ke.H(i, c));
            for (std::size_t r = 0; r < A.cols(); ++r) sol.x[r] -= q * ke.H(r, c);
        }
        for (std::size_t c = 0; c < ke.pivots.size(); ++c) {
            std::vector<BigInt> v(A.cols());
            for (std::size_t r = 0; r < A.cols(); ++r) v[r] = ke.H(r, c);
            sol.kernel.push_back(std::move(v));
        }
    }
    return sol;
}

// Upper triangular Hermite form of the right coset alpha*SL_n(Z): positive
// diagonal, entries right of the diagonal reduced into [0, diagonal).
inline IntMatrix hnf(const IntMatrix& alpha, IntMatrix* transform = nullptr) {
    const std::size_t n = alpha.rows();
    if (n != alpha.cols()) fail("InvalidArgument", "hnf needs a square matrix");
    if (det(alpha) <= 0) fail("SingularMatrix", "hnf needs positive determinant");
    IntMatrix H = alpha, U = IntMatrix::identity(n);
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = 0; j < i; ++j) {
            if (H(i, j) == 0) continue;
            if (H(i, i) == 0) {
                // swap with a sign flip keeps determinant +1
                H.swap_cols(i, j);
                U.swap_cols(i, j);
                for (std::size_t r = 0; r < n; ++r) {
                    H(r, j) = -H(r, j);
                    U(r, j) = -U(r, j);
                }
                continue;
            }
            BigInt a = H(i, i), b = H(i, j), g, x, y;
            ext_gcd(a, b, g, x, y);
            BigInt ag = a / g, bg = b / g;
            // (col_i, col_j) <- (x col_i + y col_j, -b/g col_i + a/g col_j)
            H.mix_cols(i, j, x, y, -bg, ag);
            U.mix_cols(i, j, x, y, -bg, ag);
        }
    }
    // pair up negative diagonal entries; their count is even since det > 0
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < n; ++i)
        if (H(i, i) < 0) neg.push_back(i);
    for (std::size_t k = 0; k + 1 < neg.size(); k += 2)
        for (std::size_t c : {neg[k], neg[k + 1]})
            for (std::size_t r = 0; r < n; ++r) {
                H(r, c) = -H(r, c);
                U(r, c) = -U(r, c);
            }
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = i + 1; j < n; ++j) {
            BigInt q = floor_div(H(i, j), H(i, i));
            H.add_col(j, i, -q);
            U.add_col(j, i, -q);
        }
    if (transform) *transform = U;
    return H;
}

struct SmithForm {
    IntMatrix U, D, V;  // A = U * D * V
};

inline SmithForm snf(const IntMatrix& A) {
    const std::size_t n = A.rows();
    if (n != A.cols()) fail("InvalidArgument", "snf needs a square matrix");
    if (det(A) == 0) fail("SingularMatrix", "snf needs a nonsingular matrix");
    SmithForm s{IntMatrix::identity(n), A, IntMatrix::identity(n)};
    IntMatrix& U = s.U;
    IntMatrix& D = s.D;
    IntMatrix& V = s.V;
    // Invariant A = U D V. A row operation D <- E D needs U <- U E^{-1};
    // a column operation D <- D F needs V <- F^{-1} V.
    auto row_mix = [&](std::size_t i, std::size_t j, const BigInt& p, const BigInt& q, const BigInt& r, const BigInt& t) {
        D.mix_rows(i, j, p, q, r, t);
        // E = [[p,q],[r,t]] with det 1, E^{-1} = [[t,-q],[-r,p]] acting on columns i,j of U
        U.mix_cols(i, j, t, -r, -q, p);
    };
    auto col_mix = [&](std::size_t i, std::size_t j, const BigInt& p, const BigInt& q, const BigInt& r, const BigInt& t) {
        D.mix_cols(i, j, p, q, r, t);
        // F acts on columns as (c_i, c_j) <- (p c_i + q c_j, r c_i + t c_j), i.e. F = [[p,r],[q,t]];
        // F^{-1} = [[t,-r],[-q,p]] acting on rows i,j of V
        V.mix_rows(i, j, t, -r, -q, p);
    };
    for (std::size_t k = 0; k < n; ++k) {
        for (;;) {
            // bring a nonzero of least magnitude to (k,k)
            std::size_t bi = n, bj = n;
            for (std::size_t i = k; i < n; ++i)
                for (std::size_t j = k; j < n; ++j)
                    if (D(i, j) != 0 && (bi == n || abs(D(i, j)) < abs(D(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            if (bi != k) row_mix(k, bi, 0, 1, -1, 0);
            if (bj != k) col_mix(k, bj, 0, 1, -1, 0);
            bool clean = true;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (D(i, k) == 0) continue;
                BigInt q = floor_div(D(i, k), D(k, k));
                row_mix(k, i, 1, 0, -q, 1);
                if (D(i, k) != 0) clean = false;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (D(k, j) == 0) continue;
                BigInt q = floor_div(D(k, j), D(k, k));
                col_mix(k, j, 1, 0, -q, 1);
                if (D(k, j) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility: fold an offending row into row k and repeat
            bool fixed = true;
            for (std::size_t i = k + 1; i < n && fixed; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    if (D(i, j) % D(k, k) != 0) {
                        row_mix(k, i, 1, 1, 0, 1);
                        fixed = false;
                        break;
                    }
            if (fixed) break;
        }
    }
    // make the diagonal positive: negate row k of D and column k of U together
    for (std::size_t k = 0; k < n; ++k)
        if (D(k, k) < 0) {
            for (std::size_t j = 0; j < n; ++j) D(k, j) = -D(k, j);
            for (std::size_t i = 0; i < n; ++i) U(i, k) = -U(i, k);
        }
    return s;
}

} // namespace hbc
