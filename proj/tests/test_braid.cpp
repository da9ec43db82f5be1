#include <gtest/gtest.h>

#include <random>

#include <hbc/braid.hpp>

using namespace hbc;

namespace {

BraidWord random_word(std::mt19937_64& rng, int N, int max_len) {
    std::vector<int> w;
    for (int k = static_cast<int>(rng() % (max_len + 1)); k > 0; --k) {
        int i = 1 + static_cast<int>(rng() % (N - 1));
        w.push_back(rng() % 2 ? i : -i);
    }
    return BraidWord(N, w, static_cast<std::int64_t>(rng() % 5) - 2);
}

} // namespace

TEST(Braid, Writhe) {
    EXPECT_EQ(BraidWord(3, {1, 2}).writhe(), 2);
    EXPECT_EQ(BraidWord::full_twist(3).writhe(), 6);
    EXPECT_EQ(BraidWord(3, {1, -1}).writhe(), 0);
    EXPECT_TRUE(BraidWord(3, {1, -1}).letters().empty());
    EXPECT_EQ(BraidWord::full_twist(4).expanded().writhe(), 12);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 100; ++t) {
        auto a = random_word(rng, 5, 10), g = random_word(rng, 5, 10);
        EXPECT_EQ((a * g).writhe(), a.writhe() + g.writhe());
        EXPECT_EQ((a * g * a.inverse()).writhe(), g.writhe());
        EXPECT_EQ(a.expanded().writhe(), a.writhe());
    }
}

TEST(Braid, ParseAndPrint) {
    auto b = BraidWord::parse(4, "s1 s2^-1 -s3 s1^2 T^-1");
    EXPECT_EQ(b.letters(), (std::vector<int>{1, -2, -3, 1, 1}));
    EXPECT_EQ(b.center(), -1);
    EXPECT_EQ(b.str(), "s1 s2^-1 s3^-1 s1 s1");
    EXPECT_EQ(BraidWord::parse(4, b.str() + " T^-1"), b);
    EXPECT_THROW(BraidWord::parse(3, "s3"), domain_error);
    try {
        BraidWord::parse(3, "x1");
        FAIL();
    } catch (const domain_error& e) {
        EXPECT_EQ(e.kind(), "ParseError");
    }
}

TEST(Braid, RhoEndo) {
    BraidWord s1(2, {1});
    EXPECT_EQ(rho_endo(s1, 0), s1);
    auto r = rho_endo(s1, 1);
    EXPECT_EQ(r.center(), 1);
    EXPECT_EQ(r.expanded(), BraidWord(2, {1, 1, 1}));
    // each letter contributes T^m
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        auto a = random_word(rng, 4, 8), g = random_word(rng, 4, 8);
        std::int64_t m = static_cast<std::int64_t>(rng() % 7) - 3;
        EXPECT_EQ(rho_endo(a * g, m), rho_endo(a, m) * rho_endo(g, m));
    }
}

TEST(Braid, CompositionExponent) {
    BraidWord s1(3, {1});
    EXPECT_EQ(rho_endo(rho_endo(s1, 1), 1).center(), 8);
    EXPECT_TRUE(compose_identity_check(s1, 1, 1));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        int N = 2 + static_cast<int>(rng() % 5);
        auto g = random_word(rng, N, 20);
        std::int64_t n1 = rng() % 6, n2 = rng() % 6;
        EXPECT_TRUE(compose_identity_check(g, n1, n2));
        EXPECT_EQ(rho_endo(rho_endo(g, n1), n2).center() - g.center(), composition_exponent(N, n1, n2, g.writhe()));
        EXPECT_EQ(rho_endo(rho_endo(g, 0), n2), rho_endo(g, n2));
    }
}

TEST(Braid, ConjugationEquivariance) {
    EXPECT_TRUE(conjugation_equivariance_check(BraidWord(3), BraidWord(3, {2}), 2));
    EXPECT_TRUE(conjugation_equivariance_check(BraidWord(3, {1}), BraidWord(3, {2}), 2));
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        int N = 2 + static_cast<int>(rng() % 4);
        EXPECT_TRUE(conjugation_equivariance_check(random_word(rng, N, 10), random_word(rng, N, 10), static_cast<std::int64_t>(rng() % 5) - 2));
    }
}

TEST(Braid, TorusKnot) {
    auto r = torus_knot_action(2, 3, 1);
    EXPECT_EQ(r.b_new, 9);
    EXPECT_TRUE(r.word_identity);
    EXPECT_EQ(rho_endo(BraidWord(2, {1, 1, 1}), 1).expanded(), BraidWord(2, std::vector<int>(9, 1)));
    EXPECT_EQ(torus_knot_action(3, 1, 1).b_new, 7);
    EXPECT_TRUE(torus_knot_action(3, 1, 1).word_identity);
    auto z = torus_knot_action(4, 5, 0);
    EXPECT_EQ(z.b_new, 5);
    EXPECT_TRUE(z.word_identity);
    for (int a = 2; a <= 6; ++a)
        for (int b = 1; b <= 6; ++b)
            for (int m = -2; m <= 2; ++m) EXPECT_TRUE(torus_knot_action(a, b, m).word_identity) << a << b << m;
    EXPECT_THROW(torus_knot_action(1, 3, 1), domain_error);
}

TEST(Braid, MarkovObstruction) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        int N = 2 + static_cast<int>(rng() % 4);
        auto g = random_word(rng, N, 10);
        std::int64_t m = static_cast<std::int64_t>(rng() % 5) - 2;
        EXPECT_TRUE(markov_check(g, m));
        // stabilization changes the writhe by exactly one letter
        EXPECT_EQ((g.embed(N + 1) * BraidWord(N + 1, {N})).writhe(), g.expanded().writhe() + 1);
    }
}
