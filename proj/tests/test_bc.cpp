#include <gtest/gtest.h>

#include <hbc/bc.hpp>

#include "support.hpp"

using namespace hbc;

namespace {

QZElt E(std::int64_t a, std::int64_t b, Rational c = 1) { return QZElt::e(RootOfUnity(a, b), c); }

QZElt random_qz(std::mt19937_64& rng, int max_den, int terms = 3) {
    QZElt x;
    std::uniform_int_distribution<int> c(-5, 5), nt(1, terms);
    for (int t = nt(rng); t > 0; --t) x.add(fixtures::random_root(rng, max_den), Rational(c(rng), 1 + rng() % 3));
    return x;
}

// mid with denominators dividing b
QZElt random_qz_level(std::mt19937_64& rng, std::int64_t b) {
    QZElt x;
    std::uniform_int_distribution<int> c(-4, 4);
    for (int t = 1 + rng() % 3; t > 0; --t) x.add(RootOfUnity(rng() % b, b), c(rng));
    return x;
}

BCElement random_monomial(std::mt19937_64& rng, std::int64_t b) {
    std::uniform_int_distribution<int> idx(1, 6);
    return BCElement::monomial(idx(rng), random_qz_level(rng, b), idx(rng));
}

} // namespace

TEST(QZ, SigmaExamples) {
    EXPECT_EQ(qz_sigma(E(1, 4), 2), E(1, 2));
    EXPECT_EQ(qz_sigma(E(1, 2), 2), QZElt::unit());
    EXPECT_EQ(qz_sigma(E(1, 6) + E(1, 2), 3), E(1, 2, 2));
}

TEST(QZ, RhoExamples) {
    EXPECT_EQ(qz_rho(QZElt::unit(), 2), E(0, 1, Rational(1, 2)) + E(1, 2, Rational(1, 2)));
    EXPECT_EQ(qz_rho(QZElt::unit(), 2), idempotent_e(2));
    EXPECT_EQ(qz_rho(E(1, 2), 2), E(1, 4, Rational(1, 2)) + E(3, 4, Rational(1, 2)));
    EXPECT_EQ(idempotent_e(1), QZElt::unit());
    EXPECT_EQ(idempotent_e(2) * idempotent_e(2), idempotent_e(2));
}

TEST(QZ, RingAxioms) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        auto x = random_qz(rng, 24), y = random_qz(rng, 24), z = random_qz(rng, 24);
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ(x * y, y * x);
        EXPECT_EQ(x * QZElt::unit(), x);
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_TRUE((x - x).is_zero());
    }
}

TEST(QZ, SigmaRhoRelations) {
    std::mt19937_64 rng(22);
    for (std::int64_t n = 1; n <= 12; ++n)
        for (int t = 0; t < 20; ++t) {
            auto x = random_qz(rng, 24);
            EXPECT_EQ(qz_sigma(qz_rho(x, n), n), x);
            EXPECT_EQ(qz_rho(qz_sigma(x, n), n), idempotent_e(n) * x);
            // sigma is a ring map, rho is not
            auto y = random_qz(rng, 24);
            EXPECT_EQ(qz_sigma(x * y, n), qz_sigma(x, n) * qz_sigma(y, n));
        }
}

TEST(QZ, Idempotents) {
    for (std::int64_t n = 1; n <= 12; ++n) {
        EXPECT_EQ(idempotent_e(n) * idempotent_e(n), idempotent_e(n));
        for (std::int64_t m = 1; m <= 12; ++m)
            if (std::gcd(n, m) == 1) EXPECT_EQ(idempotent_e(n * m), idempotent_e(n) * idempotent_e(m)) << n << " " << m;
    }
}

TEST(QZ, IntegralRhoTilde) {
    EXPECT_EQ(integral_rho_tilde(E(1, 2), 2), E(1, 4) + E(3, 4));
    EXPECT_EQ(integral_rho_tilde(QZElt::unit(), 2), E(0, 1) + E(1, 2));
    EXPECT_EQ(integral_rho_tilde(QZElt::unit(), 2), Rational(2) * idempotent_e(2));
    try {
        integral_rho_tilde(E(1, 3, Rational(1, 2)), 2);
        FAIL();
    } catch (const domain_error& e) {
        EXPECT_EQ(e.kind(), "NonIntegralInput");
    }
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        auto x = random_qz_level(rng, 12);
        std::int64_t n = 1 + rng() % 6;
        EXPECT_TRUE(integral_rho_tilde(x, n).is_integral());
    }
}

TEST(QZ, IntegralModelOperatorIdentity) {
    // mu~_n eps_m = n eps_{nm}; mu_n^* mu~_n = n on every column
    const std::int64_t K = 40;
    for (std::int64_t n = 1; n <= 4; ++n) {
        BCElement mu_tilde = Rational(n) * BCElement::monomial(n, QZElt::unit(), 1);
        BCElement mu_star = BCElement::monomial(1, QZElt::unit(), n);
        auto prod = pi_rho(mu_star, 1, 1, K) * pi_rho(mu_tilde, 1, 1, K);
        for (std::int64_t k : prod.validity_basis()) {
            EXPECT_EQ(prod.column(k).size(), 1u);
            EXPECT_EQ(prod.entry(k, k), CycRat::constant(1, n));
        }
        std::mt19937_64 rng(n);
        auto x = random_qz_level(rng, 4);
        auto lhs = pi_rho(BCElement::monomial(1, integral_rho_tilde(x, n), 1), 1, 4 * n, K);
        auto rhs = pi_rho(BCElement::monomial(1, qz_rho(x, n), 1), 1, 4 * n, K);
        for (std::int64_t k = 1; k <= K; ++k) EXPECT_EQ(lhs.entry(k, k), CycRat::constant(1, n) * rhs.entry(k, k));
    }
}

TEST(BC, MulExamples) {
    auto mu = [](std::int64_t a, std::int64_t b) { return BCElement::monomial(a, QZElt::unit(), b); };
    auto e2 = BCElement::monomial(1, idempotent_e(2), 1);
    EXPECT_EQ(mu(2, 1) * mu(1, 2), e2);
    EXPECT_EQ(mu(1, 2) * mu(2, 1), BCElement::unit());
    EXPECT_EQ(mu(2, 3) * mu(3, 2), e2);
    // mu_n e(r) mu_n^* = rho_n(e(r))
    EXPECT_EQ(mu(3, 1) * BCElement::monomial(1, E(1, 2), 1) * mu(1, 3), BCElement::monomial(1, qz_rho(E(1, 2), 3), 1));
    // coprime commutation
    EXPECT_EQ(mu(2, 1) * mu(1, 3), mu(1, 3) * mu(2, 1));
    EXPECT_EQ(BCElement::monomial(4, E(1, 3), 6), BCElement::monomial(2, qz_rho(E(1, 3), 2), 3));
}

TEST(BC, PiRhoExamples) {
    auto M = pi_rho(BCElement::monomial(1, E(1, 2), 1), 1, 2, 10);
    for (std::int64_t k = 1; k <= 10; ++k) EXPECT_EQ(M.entry(k, k), CycRat::constant(2, k % 2 ? -1 : 1));
    auto mu2 = pi_rho(BCElement::monomial(2, QZElt::unit(), 1), 1, 1, 6);
    EXPECT_EQ(mu2.column(3).size(), 1u);
    EXPECT_EQ(mu2.entry(6, 3), CycRat::constant(1, 1));
    EXPECT_FALSE(mu2.is_valid(4));
    try {
        pi_rho(BCElement::monomial(1, E(1, 3), 1), 1, 4, 10);
        FAIL();
    } catch (const domain_error& e) {
        EXPECT_EQ(e.kind(), "DenominatorMismatch");
    }
}

TEST(BC, OracleMatchesProduct) {
    std::mt19937_64 rng(55);
    const std::int64_t K = 60;
    int compared = 0;
    for (int t = 0; t < 100; ++t) {
        std::int64_t b = 1 + rng() % 12;
        auto u = random_monomial(rng, b), v = random_monomial(rng, b);
        auto uv = u * v;
        // normal forms can raise denominators through rho_g
        std::int64_t L = std::lcm(uv.level(), std::lcm(u.level(), v.level()));
        std::int64_t unit = L == 1 ? 1 : fixtures::primitive_root(rng, L).num();
        auto lhs = pi_rho(uv, unit, L, K);
        auto rhs = pi_rho(u, unit, L, K) * pi_rho(v, unit, L, K);
        for (std::int64_t k = 1; k <= K; ++k) {
            if (!lhs.is_valid(k) || !rhs.is_valid(k)) continue;
            ++compared;
            EXPECT_EQ(lhs.column(k), rhs.column(k)) << t << " col " << k;
        }
    }
    EXPECT_GT(compared, 2000);
}

TEST(BC, SumsAndAssociativity) {
    std::mt19937_64 rng(56);
    for (int t = 0; t < 100; ++t) {
        std::int64_t b = 1 + rng() % 12;
        auto u = random_monomial(rng, b), v = random_monomial(rng, b), w = random_monomial(rng, b);
        EXPECT_EQ((u * v) * w, u * (v * w));
        EXPECT_EQ(u * (v + w), u * v + u * w);
    }
}

TEST(BC, EOperator) {
    RootOfUnity z(1, 6);
    auto d = e_operator(z, HabiroElt(8, parse_poly("q")), 24);
    for (std::int64_t n = 1; n <= 24; ++n) EXPECT_EQ(d[n - 1], CycInt::x_pow(6, n));

    // E_{rho(r), q} = pi_rho(e(r))
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
        std::int64_t b = 1 + rng() % 12, a = b == 1 ? 1 : fixtures::primitive_root(rng, b).num();
        std::int64_t num = rng() % b;
        auto M = pi_rho(BCElement::monomial(1, E(num, b), 1), a, b, 24);
        auto D = e_operator(RootOfUnity(a * num, b), HabiroElt(b, parse_poly("q")), 24);
        for (std::int64_t n = 1; n <= 24; ++n) EXPECT_EQ(M.entry(n, n), to_rational(D[n - 1]));
    }

    EXPECT_THROW(e_operator(RootOfUnity(1, 5), HabiroElt(4, parse_poly("q")), 3), domain_error);
}

TEST(BC, EOperatorCompatibility) {
    std::mt19937_64 rng(60);
    for (int t = 0; t < 60; ++t) {
        int N = 12;
        HabiroElt f(N, fixtures::random_poly(rng, 20, 6));
        auto z = fixtures::random_root(rng, 12);
        std::int64_t n = 1 + rng() % 6;
        EXPECT_EQ(e_operator(z.pow(n), f, 24), e_operator(z, sigma_n(f, n), 24));
    }
}

TEST(BC, EOperatorGaloisEquivariance) {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 40; ++t) {
        HabiroElt f(12, fixtures::random_poly(rng, 15, 6));
        auto z = fixtures::random_root(rng, 12);
        std::int64_t m = z.order(), a = m == 1 ? 1 : fixtures::primitive_root(rng, m).num();
        auto d = e_operator(z, f, 12), da = e_operator(z.pow(a), f, 12);
        for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(galois_act(a, d[i]), da[i]);
    }
}
