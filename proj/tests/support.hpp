#pragma once

#include <random>

#include <hbc/cyclotomic.hpp>

namespace hbc::fixtures {

inline IntPoly random_poly(std::mt19937_64& rng, int max_degree, int max_coeff) {
    std::uniform_int_distribution<int> deg(0, max_degree), c(-max_coeff, max_coeff);
    std::vector<BigInt> v(deg(rng) + 1);
    for (auto& x : v) x = c(rng);
    return IntPoly(std::move(v));
}

inline RootOfUnity random_root(std::mt19937_64& rng, int max_order) {
    std::uniform_int_distribution<int> b(1, max_order);
    int den = b(rng);
    std::uniform_int_distribution<int> a(0, den - 1);
    return RootOfUnity(a(rng), den);
}

inline RootOfUnity primitive_root(std::mt19937_64& rng, int order) {
    std::uniform_int_distribution<int> a(0, order - 1);
    for (;;) {
        int k = a(rng);
        if (std::gcd(k, order) == 1) return RootOfUnity(k, order);
    }
}

inline CycInt random_cyc(std::mt19937_64& rng, std::int64_t m, int max_coeff) {
    std::uniform_int_distribution<int> c(-max_coeff, max_coeff);
    std::vector<BigInt> v(euler_phi(m));
    for (auto& x : v) x = c(rng);
    return CycInt::from_coeffs(m, std::move(v));
}

} // namespace hbc::fixtures
