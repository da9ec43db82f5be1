#pragma once

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "../braid.hpp"
#include "../multivar.hpp"
#include "../mzv.hpp"
#include "../witt.hpp"

namespace hbc::io {

using json = nlohmann::ordered_json;

inline json to_json(const BigInt& x) { return to_string(x); }
inline json to_json(const Rational& x) { return to_string(x); }
inline json to_json(const RootOfUnity& z) { return z.str(); }

template <class T>
json to_json(const Cyclotomic<T>& z) {
    json c = json::array();
    for (const auto& x : z.coeffs()) c.push_back(to_string(x));
    return {{"order", z.order()}, {"coeffs", c}};
}

inline json to_json(const IntPoly& p) {
    json c = json::array();
    for (const auto& x : p.coeffs()) c.push_back(to_string(x));
    return c;
}

inline json to_json(const HabiroElt& f) { return {{"level", f.level()}, {"coeffs", to_json(f.rep())}}; }

inline json to_json(const QZElt& x) {
    json a = json::array();
    for (const auto& [r, c] : x.terms()) a.push_back({{"r", r.str()}, {"c", to_string(c)}});
    return a;
}

inline json to_json(const BCElement& u) {
    json a = json::array();
    for (const auto& [ab, x] : u.terms())
        for (const auto& [r, c] : x.terms())
            a.push_back({{"left", ab.first}, {"mid", r.str()}, {"right", ab.second}, {"coeff", to_string(c)}});
    return a;
}

inline json to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

inline json to_json(const WittVector& w) { return to_json(w.components()); }

inline json to_json(const QZVec& r) {
    json a = json::array();
    for (const auto& x : r) a.push_back(x.str());
    return a;
}

inline json to_json(const BraidWord& b) {
    return {{"strands", b.strands()}, {"word", b.str()}, {"centerExp", b.center()}, {"writhe", b.writhe()}};
}

inline json to_json(const std::complex<double>& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

// "[[1,2],[3,4]]" or "1,2;3,4"
inline IntMatrix parse_matrix(const std::string& text) {
    std::vector<std::vector<BigInt>> rows;
    auto trimmed = text;
    trimmed.erase(std::remove_if(trimmed.begin(), trimmed.end(), ::isspace), trimmed.end());
    if (!trimmed.empty() && trimmed.front() == '[') {
        json j;
        try {
            j = json::parse(trimmed);
        } catch (const std::exception& e) {
            fail("ParseError", std::string("bad matrix: ") + e.what());
        }
        if (!j.is_array()) fail("ParseError", "matrix must be an array of rows");
        for (const auto& r : j) {
            if (!r.is_array()) fail("ParseError", "matrix row must be an array");
            std::vector<BigInt> row;
            for (const auto& x : r) row.push_back(parse_bigint(x.is_string() ? x.get<std::string>() : x.dump()));
            rows.push_back(row);
        }
    } else {
        std::stringstream rs(trimmed);
        std::string r;
        while (std::getline(rs, r, ';')) {
            std::stringstream cs(r);
            std::string c;
            std::vector<BigInt> row;
            while (std::getline(cs, c, ',')) row.push_back(parse_bigint(c));
            rows.push_back(row);
        }
    }
    if (rows.empty()) fail("ParseError", "empty matrix");
    IntMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) fail("ParseError", "ragged matrix");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

// "a,b,c" of rationals
inline std::vector<Rational> parse_rational_list(const std::string& text, char sep = ',') {
    std::vector<Rational> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        if (tok.empty()) continue;
        v.push_back(parse_rational(tok));
    }
    return v;
}

inline RootOfUnity parse_root(const std::string& text) {
    auto t = text;
    t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
    return RootOfUnity::parse(t);
}

// "1/6:1, 1/2:-1/3" -> sum c e(r); a bare label has coefficient 1
inline QZElt parse_qz(const std::string& text) {
    QZElt x;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        if (tok.empty()) continue;
        auto colon = tok.find(':');
        Rational c = colon == std::string::npos ? Rational(1) : parse_rational(tok.substr(colon + 1));
        x.add(parse_root(tok.substr(0, colon)), c);
    }
    return x;
}

} // namespace hbc::io
