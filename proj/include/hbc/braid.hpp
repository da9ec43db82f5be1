#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hbc {

// word * T_N^center, T_N = (s_1 ... s_{N-1})^N; letter +i is s_i, -i is s_i^{-1}
class BraidWord {
public:
    BraidWord() = default;
    BraidWord(int strands, std::vector<int> letters = {}, std::int64_t center = 0)
        : n_(strands), letters_(std::move(letters)), center_(center) {
        if (n_ < 2) fail("InvalidArgument", "braid needs at least 2 strands");
        for (int l : letters_)
            if (l == 0 || std::abs(l) > n_ - 1) fail("InvalidArgument", "generator index out of range: " + std::to_string(l));
        free_reduce();
    }

    static BraidWord full_twist(int strands, std::int64_t power = 1) { return BraidWord(strands, {}, power); }
    // (s_1 ... s_{N-1})^power as letters
    static BraidWord cycle_power(int strands, std::int64_t power) {
        std::vector<int> w;
        for (std::int64_t k = 0; k < std::abs(power); ++k)
            for (int i = 1; i < strands; ++i) w.push_back(i);
        BraidWord b(strands, w);
        return power < 0 ? b.inverse() : b;
    }

    int strands() const { return n_; }
    const std::vector<int>& letters() const { return letters_; }
    std::int64_t center() const { return center_; }

    std::int64_t writhe() const {
        std::int64_t s = 0;
        for (int l : letters_) s += l > 0 ? 1 : -1;
        return s + center_ * n_ * (n_ - 1);
    }

    BraidWord inverse() const {
        std::vector<int> w(letters_.rbegin(), letters_.rend());
        for (auto& l : w) l = -l;
        return BraidWord(n_, w, -center_);
    }

    // center moved into letters
    BraidWord expanded() const {
        auto w = letters_;
        auto t = cycle_power(n_, n_ * center_);
        w.insert(w.end(), t.letters_.begin(), t.letters_.end());
        return BraidWord(n_, w);
    }

    // B_N -> B_{N+1}; the center is expanded first since T_N is not central there
    BraidWord embed(int strands) const {
        if (strands < n_) fail("InvalidArgument", "cannot embed into fewer strands");
        return BraidWord(strands, expanded().letters_);
    }

    friend BraidWord operator*(const BraidWord& a, const BraidWord& b) {
        if (a.n_ != b.n_) fail("InvalidArgument", "strand counts differ");
        auto w = a.letters_;
        w.insert(w.end(), b.letters_.begin(), b.letters_.end());
        return BraidWord(a.n_, w, a.center_ + b.center_);
    }

    friend bool operator==(const BraidWord&, const BraidWord&) = default;

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            if (i) os << ' ';
            os << 's' << std::abs(letters_[i]);
            if (letters_[i] < 0) os << "^-1";
        }
        return os.str();
    }

    // "s1 s2^-1 -s3 T^2"
    static BraidWord parse(int strands, const std::string& text) {
        std::istringstream is(text);
        std::string tok;
        std::vector<int> w;
        std::int64_t c = 0;
        while (is >> tok) {
            bool neg = false;
            if (tok[0] == '-') {
                neg = true;
                tok.erase(0, 1);
            }
            try {
                if (!tok.empty() && tok[0] == 'T') {
                    std::int64_t e = 1;
                    if (tok.size() > 1) {
                        if (tok.compare(0, 2, "T^") != 0) throw std::invalid_argument(tok);
                        e = std::stoll(tok.substr(2));
                    }
                    c += neg ? -e : e;
                    continue;
                }
                if (tok.empty() || tok[0] != 's') throw std::invalid_argument(tok);
                auto caret = tok.find('^');
                std::size_t used = 0;
                int i = std::stoi(tok.substr(1, caret == std::string::npos ? std::string::npos : caret - 1), &used);
                if (used != (caret == std::string::npos ? tok.size() - 1 : caret - 1)) throw std::invalid_argument(tok);
                int e = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
                if (neg) e = -e;
                for (int k = 0; k < std::abs(e); ++k) w.push_back(e > 0 ? i : -i);
            } catch (const std::logic_error&) {
                fail("ParseError", "bad braid token '" + tok + "'");
            }
        }
        return BraidWord(strands, w, c);
    }

private:
    void free_reduce() {
        std::vector<int> out;
        for (int l : letters_) {
            if (!out.empty() && out.back() == -l)
                out.pop_back();
            else
                out.push_back(l);
        }
        letters_ = std::move(out);
    }

    int n_ = 2;
    std::vector<int> letters_;
    std::int64_t center_ = 0;
};

// gamma -> gamma T_N^{m l(gamma)}
inline BraidWord rho_endo(const BraidWord& g, std::int64_t m) {
    return BraidWord(g.strands(), g.letters(), g.center() + m * g.writhe());
}

inline std::int64_t composition_exponent(int N, std::int64_t n1, std::int64_t n2, std::int64_t writhe) {
    return (n1 + n2 + n1 * n2 * N * (N - 1)) * writhe;
}

inline bool compose_identity_check(const BraidWord& g, std::int64_t n1, std::int64_t n2) {
    auto twice = rho_endo(rho_endo(g, n1), n2);
    auto closed = BraidWord(g.strands(), g.letters(), g.center() + composition_exponent(g.strands(), n1, n2, g.writhe()));
    return twice == closed;
}

inline bool conjugation_equivariance_check(const BraidWord& a, const BraidWord& g, std::int64_t m) {
    auto lhs = rho_endo(a * g * a.inverse(), m);
    auto rhs = rho_endo(a, m) * rho_endo(g, m) * rho_endo(a.inverse(), m);
    return lhs == rhs && lhs.writhe() - (a * g * a.inverse()).writhe() == m * g.writhe() * g.strands() * (g.strands() - 1);
}

struct TorusKnotAction {
    std::int64_t a = 0, b = 0, b_new = 0;
    bool word_identity = false;
};

// T(a, b) = closure of (s_1 ... s_{a-1})^b  ->  T(a, b (1 + m a (a-1)))
inline TorusKnotAction torus_knot_action(int a, std::int64_t b, std::int64_t m) {
    if (a < 2 || b < 1) fail("InvalidArgument", "torus knot needs a >= 2, b >= 1");
    TorusKnotAction out{a, b, b * (1 + m * a * (a - 1)), false};
    auto word = BraidWord::cycle_power(a, b);
    auto image = rho_endo(word, m);
    out.word_identity = image.center() == m * b * (a - 1) && image.expanded() == BraidWord::cycle_power(a, out.b_new);
    return out;
}

// rho_{N+1}(gamma s_N) = rho_{N+1}(gamma) s_N T_{N+1}^m
inline bool markov_check(const BraidWord& g, std::int64_t m) {
    const int N = g.strands();
    auto e = g.embed(N + 1);
    BraidWord sN(N + 1, {N});
    auto lhs = rho_endo(e * sN, m);
    auto rhs = rho_endo(e, m) * sN * BraidWord::full_twist(N + 1, m);
    return lhs == rhs;
}

} // namespace hbc
