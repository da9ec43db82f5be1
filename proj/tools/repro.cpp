#include "repro.hpp"

#include <chrono>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <hbc/braid.hpp>
#include <hbc/multivar.hpp>
#include <hbc/mzv.hpp>
#include <hbc/witt.hpp>

namespace hbc::repro {

namespace {

// counts failures, keeps the first message and the worst residual
struct Tally {
    long checks = 0, failures = 0;
    double worst = 0;
    std::string first;

    void expect(bool ok, const std::string& what = {}) {
        ++checks;
        if (!ok && failures++ == 0) first = what;
    }
    void residual(double r, double tol, const std::string& what = {}) {
        worst = std::max(worst, r);
        expect(r <= tol, what + " residual " + std::to_string(r));
    }
    std::string summary() const {
        std::ostringstream os;
        os << checks << " checks, " << failures << " failed";
        if (worst > 0) os << ", max residual " << worst;
        if (failures) os << "; first: " << first;
        return os.str();
    }
};

IntPoly random_poly(std::mt19937_64& rng, int max_degree, int max_coeff) {
    std::uniform_int_distribution<int> deg(0, max_degree), c(-max_coeff, max_coeff);
    std::vector<BigInt> v(deg(rng) + 1);
    for (auto& x : v) x = c(rng);
    return IntPoly(std::move(v));
}

RootOfUnity random_root(std::mt19937_64& rng, int max_order) {
    int den = 1 + static_cast<int>(rng() % max_order);
    return RootOfUnity(static_cast<std::int64_t>(rng() % den), den);
}

std::int64_t random_unit(std::mt19937_64& rng, std::int64_t b) {
    if (b == 1) return 1;
    for (;;) {
        std::int64_t k = static_cast<std::int64_t>(rng() % b);
        if (std::gcd(k, b) == 1) return k;
    }
}

HabiroElt random_habiro(std::mt19937_64& rng, int N) {
    return HabiroElt(N, random_poly(rng, static_cast<int>(pochhammer_degree(N)) + 5, 6));
}

QZElt random_qz(std::mt19937_64& rng, int max_den) {
    QZElt x;
    std::uniform_int_distribution<int> c(-5, 5);
    for (int t = 1 + static_cast<int>(rng() % 3); t > 0; --t) x.add(random_root(rng, max_den), Rational(c(rng), 1 + static_cast<int>(rng() % 3)));
    return x;
}

BCElement random_monomial(std::mt19937_64& rng, std::int64_t b) {
    QZElt x;
    std::uniform_int_distribution<int> c(-4, 4), idx(1, 6);
    for (int t = 1 + static_cast<int>(rng() % 3); t > 0; --t) x.add(RootOfUnity(static_cast<std::int64_t>(rng() % b), b), c(rng));
    return BCElement::monomial(idx(rng), x, idx(rng));
}

IntMatrix random_det_positive(std::mt19937_64& rng, int lo, int hi, std::int64_t max_det) {
    std::uniform_int_distribution<int> e(lo, hi);
    for (;;) {
        IntMatrix m{{e(rng), e(rng)}, {e(rng), e(rng)}};
        BigInt d = det(m);
        if (d > 0 && d <= max_det) return m;
    }
}

// zeta(s) by partial sum plus Euler-Maclaurin remainder, long double
double zeta_oracle(double s, long long N = 2000) {
    long double acc = 0;
    for (long long n = N; n >= 1; --n) acc += std::pow(static_cast<long double>(n), -static_cast<long double>(s));
    long double x = N;
    acc += std::pow(x, 1 - s) / (s - 1) - std::pow(x, -s) / 2 + s * std::pow(x, -s - 1) / 12 - s * (s + 1) * (s + 2) * std::pow(x, -s - 3) / 720;
    return static_cast<double>(acc);
}

HabiroElt H(const char* p, int level = 16) { return HabiroElt(level, parse_poly(p)); }

Tally c1_cyclotomic() {
    Tally t;
    for (std::int64_t m = 1; m <= 60; ++m) {
        IntPoly prod = IntPoly::constant(1);
        for (auto d : divisors(m)) prod = prod * cyclotomic_poly(d);
        std::vector<BigInt> want(static_cast<std::size_t>(m) + 1);
        want[0] = -1;
        want[static_cast<std::size_t>(m)] = 1;
        t.expect(prod == IntPoly(want), "prod Phi_d at m=" + std::to_string(m));
    }
    std::mt19937_64 rng(1001);
    for (int k = 0; k < 500; ++k) {
        auto z = random_root(rng, 24);
        auto p = random_poly(rng, 30, 9), q = random_poly(rng, 30, 9);
        t.expect(eval_poly(p * q, z) == eval_poly(p, z) * eval_poly(q, z), "eval product at " + z.str());
        t.expect(eval_poly(p + q, z) == eval_poly(p, z) + eval_poly(q, z), "eval sum at " + z.str());
    }
    return t;
}

Tally c2_habiro_compat() {
    Tally t;
    std::mt19937_64 rng(1002);
    for (int k = 0; k < 200; ++k) {
        int N = 1 + static_cast<int>(rng() % 8);
        std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 6);
        auto f = random_habiro(rng, N);
        auto z = random_root(rng, N);
        t.expect(ev(sigma_n(f, n), z) == ev(f, z.pow(n)), "ev(sigma_n f) at " + z.str());
    }
    return t;
}

Tally c3_taylor() {
    Tally t;
    std::mt19937_64 rng(1003);
    for (int k = 0; k < 200; ++k) {
        int N = 2 + static_cast<int>(rng() % 11);
        auto z = random_root(rng, N - 1);
        int i = 1 + static_cast<int>(rng() % ((N - 1) / z.order()));
        auto f = random_habiro(rng, N), g = random_habiro(rng, N);
        auto tf = taylor(f, z, i), tg = taylor(g, z, i);
        t.expect(tf[0] == ev(f, z), "taylor[0] = ev");
        std::vector<CycInt> prod(tf.size(), CycInt(z.order()));
        for (std::size_t a = 0; a < tf.size(); ++a)
            for (std::size_t b = 0; a + b < tf.size(); ++b) prod[a + b] += tf[a] * tg[b];
        t.expect(taylor(f * g, z, i) == prod, "taylor(fg)");
    }
    return t;
}

Tally c4_bc_relations() {
    Tally t;
    std::mt19937_64 rng(1004);
    for (std::int64_t n = 1; n <= 12; ++n) {
        t.expect(idempotent_e(n) * idempotent_e(n) == idempotent_e(n), "e_n^2 = e_n");
        for (int k = 0; k < 20; ++k) {
            auto x = random_qz(rng, 24);
            t.expect(qz_sigma(qz_rho(x, n), n) == x, "sigma rho = id");
            t.expect(qz_rho(qz_sigma(x, n), n) == idempotent_e(n) * x, "rho sigma = e_n");
        }
    }
    return t;
}

Tally c5_oracle() {
    Tally t;
    std::mt19937_64 rng(1005);
    const std::int64_t K = 60;
    long compared = 0;
    for (int k = 0; k < 100; ++k) {
        std::int64_t b = 1 + static_cast<std::int64_t>(rng() % 12);
        auto u = random_monomial(rng, b), v = random_monomial(rng, b);
        auto uv = bc_mul(u, v);
        std::int64_t L = std::lcm(uv.level(), std::lcm(u.level(), v.level()));
        std::int64_t unit = random_unit(rng, L);
        auto lhs = pi_rho(uv, unit, L, K);
        auto rhs = pi_rho(u, unit, L, K) * pi_rho(v, unit, L, K);
        for (std::int64_t c = 1; c <= K; ++c) {
            if (!lhs.is_valid(c) || !rhs.is_valid(c)) continue;
            ++compared;
            t.expect(lhs.column(c) == rhs.column(c), "pair " + std::to_string(k) + " column " + std::to_string(c));
        }
    }
    t.expect(compared > 2000, "too few valid columns");
    for (int k = 0; k < 100; ++k) {
        std::int64_t b = 1 + static_cast<std::int64_t>(rng() % 12);
        auto u = random_monomial(rng, b), v = random_monomial(rng, b), w = random_monomial(rng, b);
        t.expect((u * v) * w == u * (v * w), "associativity");
    }
    return t;
}

Tally c6_e_operator() {
    Tally t;
    std::mt19937_64 rng(1006);
    for (int k = 0; k < 100; ++k) {
        HabiroElt f(12, random_poly(rng, 20, 6));
        auto z = random_root(rng, 12);
        std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 6);
        t.expect(e_operator(z.pow(n), f, 24) == e_operator(z, sigma_n(f, n), 24), "E compatibility at " + z.str());
    }
    return t;
}

Tally c7_partition() {
    Tally t;
    QSMConfig cfg;
    cfg.hbar = 0.5;
    cfg.beta = 2;
    cfg.nmax = 1000000;
    cfg.mmax = 60;
    auto Z = partition_function(cfg);
    double closed = zeta_oracle(2) / (1 - 0.25);
    t.residual(std::abs(closed - 2.1932454), 5e-8, "oracle vs 2.1932454");
    t.expect(std::abs(Z.value - closed) <= Z.tail_bound, "truncation error exceeds tail bound");
    t.residual(std::abs(Z.value - closed) / closed, 1e-6, "relative");
    return t;
}

Tally c8_gibbs_routes() {
    Tally t;
    for (const char* f : {"q", "q^2"})
        for (RootOfUnity z : {RootOfUnity(0, 1), RootOfUnity(1, 2), RootOfUnity(1, 4)})
            for (double beta : {2.0, 4.0, 8.0}) {
                QSMConfig cfg;
                cfg.hbar = 0.5;
                cfg.beta = beta;
                cfg.nmax = 60;
                cfg.mmax = 12;
                auto T = build_T(z, H(f), 3, cfg);
                for (int l = 0; l <= 2; ++l) {
                    auto D = delta_operator(l, cfg).adjoint();
                    t.residual(std::abs(gibbs_state(D * T, cfg) - gibbs_analytic(z, H(f), l, cfg, ShiftSide::Left)), 1e-12, "route");
                }
            }
    return t;
}

Tally c9_kms() {
    Tally t;
    for (const char* f : {"q", "q^2", "1 + q"})
        for (RootOfUnity z : {RootOfUnity(1, 2), RootOfUnity(1, 3), RootOfUnity(1, 4)}) {
            if (f == std::string("q^2") && z.order() == 2) continue;
            double prev = 1e300;
            cplx target = complex_embed(ev(H(f), z));
            for (double beta : {2.0, 4.0, 8.0, 16.0, 30.0}) {
                QSMConfig cfg;
                cfg.hbar = 0.5;
                cfg.beta = beta;
                cfg.nmax = 40;
                cfg.mmax = 6;
                double err = std::abs(gibbs_state(build_T(z, H(f), 2, cfg), cfg) - target);
                t.expect(err <= prev, "non-monotone at beta " + std::to_string(beta));
                prev = err;
            }
            t.residual(prev, 1e-6, "beta=30 error");
            QSMConfig cfg;
            cfg.hbar = 0.5;
            cfg.beta = 30;
            cfg.nmax = 40;
            cfg.mmax = 6;
            auto T = build_T(z, H(f), 3, cfg);
            double h = std::pow(cfg.hbar, cfg.beta);
            cplx rescaled = gibbs_state(T * delta_operator(1, cfg).adjoint(), cfg) / h;
            t.residual(std::abs(rescaled - complex_embed(taylor(H(f), z, 2)[1])), 1e-6, "rescaled l=1");
        }
    return t;
}

Tally c10_preimages() {
    Tally t;
    std::mt19937_64 rng(1010);
    for (int k = 0; k < 100; ++k) {
        auto a = random_det_positive(rng, -4, 4, 12);
        std::int64_t b = 1 + static_cast<std::int64_t>(rng() % 6), d = to_i64(det(a));
        QZVec r{RootOfUnity(static_cast<std::int64_t>(rng() % b), b), RootOfUnity(static_cast<std::int64_t>(rng() % b), b)};
        auto sols = preimage_solutions(a, r);
        std::set<QZVec> got(sols.begin(), sols.end());
        t.expect(static_cast<std::int64_t>(sols.size()) == d && got.size() == sols.size(), "count != det for " + to_string(a));
        for (const auto& s : sols) t.expect(apply_label(a, s) == r, "alpha(s) != r");
        std::set<QZVec> brute;
        const std::int64_t L = b * d;
        for (std::int64_t i = 0; i < L; ++i)
            for (std::int64_t j = 0; j < L; ++j) {
                QZVec s{RootOfUnity(i, L), RootOfUnity(j, L)};
                if (apply_label(a, s) == r) brute.insert(s);
            }
        t.expect(got == brute, "brute force differs for " + to_string(a));
    }
    return t;
}

Tally c11_partition_II1() {
    Tally t;
    for (std::int64_t d = 1; d <= 50; ++d) {
        std::int64_t s = 0;
        for (auto k : divisors(d)) s += k;
        t.expect(static_cast<std::int64_t>(hnf_enumerate(2, d).size()) == s, "HNF count at d=" + std::to_string(d));
    }
    auto lhs = partition_II1(2, 4, 200);
    // zeta(4) zeta(3) from independent truncated sums with their own tails
    const long long N = 200;
    double z4 = 0, z3 = 0;
    for (long long n = N; n >= 1; --n) {
        z4 += std::pow(double(n), -4.0);
        z3 += std::pow(double(n), -3.0);
    }
    double t4 = std::pow(double(N), -3.0) / 3, t3 = std::pow(double(N), -2.0) / 2;
    double rhs = z4 * z3, rhs_tail = (z4 + t4) * (z3 + t3) - rhs;
    t.expect(std::abs(lhs.value - rhs) <= lhs.tail_bound + rhs_tail, "II1 sum and zeta(4)zeta(3) differ beyond tails");
    t.expect(std::abs(rhs - 1.3010) < 1e-3, "zeta(4)zeta(3) not near 1.3010");
    return t;
}

Tally c12_witt() {
    Tally t;
    std::mt19937_64 rng(1012);
    auto rw = [&](std::size_t N, bool integral) {
        WittVector w(N);
        for (std::size_t i = 1; i <= N; ++i) {
            int a = static_cast<int>(rng() % 7) - 3;
            w[i] = integral ? Rational(a) : Rational(a, 1 + static_cast<int>(rng() % 4));
        }
        return w;
    };
    for (int k = 0; k < 100; ++k) {
        auto w = rw(1 + rng() % 12, false);
        t.expect(unghost(ghost(w)) == w, "roundtrip");
    }
    for (int k = 0; k < 200; ++k) {
        auto a = rw(12, true), b = rw(12, true);
        t.expect(witt_add(a, b).is_integral(), "sum not integral");
        t.expect(witt_mul(a, b).is_integral(), "product not integral");
    }
    WittVector w(std::vector<Rational>{2, -1, -2, -4});
    t.expect(ghost(w) == std::vector<Rational>{2, 2, 2, 2}, "ghost(2,-1,-2,-4)");
    return t;
}

Tally c13_frobenius() {
    Tally t;
    std::mt19937_64 rng(1013);
    for (std::int64_t p : {2, 3, 5, 7})
        for (std::int64_t k = 1; k <= 12; ++k) {
            GroupRingModP R{k, p};
            for (int s = 0; s < 100; ++s) {
                GroupRingModP::Elt x(static_cast<std::size_t>(k));
                for (auto& c : x) c = static_cast<int>(rng() % 13) - 6;
                t.expect(frobenius_lift_check(R, x).ok, "k=" + std::to_string(k) + " p=" + std::to_string(p));
            }
        }
    return t;
}

Tally c14_mzv() {
    Tally t;
    const double z2 = std::numbers::pi * std::numbers::pi / 6;
    RationalCone ray(1, {RatVec{Rational(1)}});
    ConeState s(ray, {RatVec{Rational(1)}, RatVec{Rational(1)}});
    auto r = mzv_cone(s, 1e6);
    t.expect(std::abs(r.value.real() - z2) <= r.tail, "outside reported tail");
    t.residual(std::abs(r.value.real() - z2) / z2, 1e-6, "relative");
    auto c = mzv_cone(channel_transform(s, IntMatrix{{2}}), 1e6);
    t.expect(std::abs(c.value.real() - z2 / 4) <= c.tail, "channel outside tail");
    t.residual(std::abs(c.value.real() - z2 / 4) / (z2 / 4), 1e-6, "channel relative");
    return t;
}

Tally c15_braids() {
    Tally t;
    std::mt19937_64 rng(1015);
    for (int k = 0; k < 200; ++k) {
        int N = 2 + static_cast<int>(rng() % 5);
        std::vector<int> w;
        for (int len = static_cast<int>(rng() % 21); len > 0; --len) {
            int i = 1 + static_cast<int>(rng() % (N - 1));
            w.push_back(rng() % 2 ? i : -i);
        }
        BraidWord g(N, w);
        std::int64_t n1 = static_cast<std::int64_t>(rng() % 6), n2 = static_cast<std::int64_t>(rng() % 6);
        auto twice = rho_endo(rho_endo(g, n1), n2);
        t.expect(twice.letters() == g.letters(), "letters changed");
        t.expect(twice.center() == (n1 + n2 + n1 * n2 * N * (N - 1)) * g.writhe(), "composition exponent");
    }
    auto tk = torus_knot_action(2, 3, 1);
    t.expect(tk.b_new == 9 && tk.word_identity, "torus knot (2,3,1)");
    t.expect(rho_endo(BraidWord(2, {1, 1, 1}), 1).expanded() == BraidWord(2, std::vector<int>(9, 1)), "s1^3 T^3 = s1^9");
    return t;
}

struct CriterionDef {
    int id;
    const char* suite;
    const char* name;
    double limit;
    std::function<Tally()> run;
};

const std::vector<CriterionDef>& criteria() {
    static const std::vector<CriterionDef> s{
        {1, "algebra", "cyclotomic products and eval homomorphism", 5, c1_cyclotomic},
        {2, "algebra", "habiro ev(sigma_n f, z) = ev(f, z^n)", 10, c2_habiro_compat},
        {3, "algebra", "taylor[0] = ev and truncated multiplicativity", 10, c3_taylor},
        {4, "algebra", "BC relations sigma/rho/idempotents", 5, c4_bc_relations},
        {5, "algebra", "crossed-product oracle and associativity", 60, c5_oracle},
        {6, "algebra", "E-operator compatibility", 10, c6_e_operator},
        {7, "qsm", "partition function Z_{1/2}(2)", 10, c7_partition},
        {8, "qsm", "Gibbs trace vs analytic series", 30, c8_gibbs_routes},
        {9, "qsm", "KMS infinity and rescaled Taylor limit", 30, c9_kms},
        {10, "multivar", "preimage solutions vs brute force", 30, c10_preimages},
        {11, "multivar", "HNF counts and type II1 partition", 30, c11_partition_II1},
        {12, "witt", "Witt roundtrip, integrality, worked vector", 10, c12_witt},
        {13, "witt", "Frobenius lift on Z[t]/(t^k-1)", 10, c13_frobenius},
        {14, "mzv", "cone MZV zeta(2) and channel v->2v", 10, c14_mzv},
        {15, "braid", "composition exponent and torus knot", 5, c15_braids},
    };
    return s;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> n{"algebra", "qsm", "multivar", "witt", "mzv", "braid", "all"};
    return n;
}

std::vector<CriterionResult> run_suite(const std::string& suite) {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        fail("InvalidArgument", "unknown suite '" + suite + "'");
    std::vector<CriterionResult> out;
    for (const auto& s : criteria()) {
        if (suite != "all" && suite != s.suite) continue;
        CriterionResult r{s.id, s.suite, s.name, false, {}, 0, s.limit};
        auto t0 = std::chrono::steady_clock::now();
        try {
            Tally t = s.run();
            r.checks_passed = t.failures == 0 && t.checks > 0;
            r.detail = t.summary();
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace hbc::repro
