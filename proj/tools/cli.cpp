#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include <hbc/io/json.hpp>

#include "repro.hpp"

namespace hbc::cli {

namespace {

using io::json;
using io::to_json;

int default_level() {
    if (const char* v = std::getenv("HBC_DEFAULT_LEVEL")) {
        char* end = nullptr;
        long x = std::strtol(v, &end, 10);
        if (end && *end == '\0' && x >= 1 && x <= 1000) return static_cast<int>(x);
    }
    return 8;
}

std::string csv_cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// rows of objects -> header + lines; a plain object -> one row
std::string to_csv(const json& result) {
    json rows;
    if (result.is_object() && result.contains("rows") && result["rows"].is_array())
        rows = result["rows"];
    else if (result.is_array() && !result.empty() && result[0].is_object())
        rows = result;
    else if (result.is_object())
        rows = json::array({result});
    else
        rows = json::array({json{{"value", result}}});
    std::ostringstream os;
    if (rows.empty()) return "";
    std::vector<std::string> keys;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) keys.push_back(it.key());
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_cell(keys[i]);
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << (r.contains(keys[i]) ? csv_cell(r[keys[i]]) : "");
        os << '\n';
    }
    return os.str();
}

struct Leaf {
    std::string name;
    CLI::App* app = nullptr;
    bool exact = true;
    std::function<json()> run;
};

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
            fail("ParseError", "not a number: '" + tok + "'");
        }
    }
    return v;
}

// "a|x|b" with x a Q/Z element
BCElement parse_bc_monomial(const std::string& text) {
    auto p1 = text.find('|'), p2 = text.rfind('|');
    if (p1 == std::string::npos || p1 == p2) fail("ParseError", "BC monomial must look like 'a|1/6:1,1/2:2|b'");
    auto a = parse_bigint(text.substr(0, p1)), b = parse_bigint(text.substr(p2 + 1));
    if (a < 1 || b < 1 || a > 1000000 || b > 1000000) fail("InvalidArgument", "monomial indices must lie in [1, 10^6]");
    return BCElement::monomial(a.convert_to<std::int64_t>(), io::parse_qz(text.substr(p1 + 1, p2 - p1 - 1)), b.convert_to<std::int64_t>());
}

QSMConfig make_cfg(double hbar, double beta, int nmax, int mmax) {
    QSMConfig c;
    c.hbar = hbar;
    c.beta = beta;
    c.nmax = nmax;
    c.mmax = mmax;
    c.validate();
    return c;
}

std::vector<RatVec> parse_vectors(const std::string& text, char sep) {
    std::vector<RatVec> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(io::parse_rational_list(part));
    return out;
}

WittVector witt_from(const std::string& text, int trunc) {
    auto v = io::parse_rational_list(text);
    if (trunc > 0) v.resize(static_cast<std::size_t>(trunc), Rational(0));
    return WittVector(v);
}

} // namespace

Outcome run(const std::vector<std::string>& args) {
    CLI::App app{"Exact algebra and numerics for Habiro rings, Bost-Connes systems and friends", "hbc"};
    app.require_subcommand(1);
    std::string format = "json";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    std::vector<std::unique_ptr<Leaf>> leaves;
    auto group = [&](const std::string& name, const std::string& help) {
        auto* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        g->fallthrough();
        return g;
    };
    auto leaf = [&](CLI::App* parent, const std::string& cmd, const std::string& help, bool exact = true) -> Leaf& {
        leaves.push_back(std::make_unique<Leaf>());
        auto& l = *leaves.back();
        l.app = parent ? parent->add_subcommand(cmd, help) : app.add_subcommand(cmd, help);
        l.app->fallthrough();
        l.name = (parent ? parent->get_name() + "." : "") + cmd;
        l.exact = exact;
        return l;
    };

    // storage for flag values
    std::string f = "q", zeta = "0/1", poly, x, u, v, word, gens, forms, theta, height, channel, matrix, labels, elem = "t", betas = "2,4,8,16,30",
                suite = "all", side = "left", caps, psi;
    int level = default_level(), depth = 1, n = 1, nvars = 2, l = 0, K = 24, trunc = 0, k = 6, p = 2, strands = 3, a_int = 2;
    std::int64_t m_int = 1, mpow = 1, det_v = 1, b_int = 1, n1 = 1, n2 = 1, cap = 200;
    double hbar = 0.5, beta = 2, hmax = 10000;
    int nmax = 200, mmax = 40;
    bool list = false, integral = false, allow_div = false;

    // cyclo
    auto* cyclo = group("cyclo", "cyclotomic polynomials and integers");
    {
        auto& c = leaf(cyclo, "phi", "coefficients of Phi_m");
        c.app->add_option("--m", m_int, "index m")->required()->check(CLI::Range(1, 100000));
        c.run = [&] { return to_json(cyclotomic_poly(m_int)); };
        auto& e = leaf(cyclo, "eval", "P(zeta) in Z[zeta]");
        e.app->add_option("--poly", poly, "polynomial in q")->required();
        e.app->add_option("--zeta", zeta, "root of unity a/b")->required();
        e.run = [&] { return to_json(eval_poly(parse_poly(poly), io::parse_root(zeta))); };
    }

    // habiro
    auto* hab = group("habiro", "finite-level Habiro ring");
    auto habiro_opts = [&](CLI::App* s) {
        s->add_option("--f", f, "polynomial in q")->capture_default_str();
        s->add_option("--level", level, "truncation level N (env HBC_DEFAULT_LEVEL)")->capture_default_str()->check(CLI::Range(1, 200));
    };
    {
        auto& r = leaf(hab, "reduce", "canonical representative mod (q)_N");
        habiro_opts(r.app);
        r.run = [&] { return to_json(HabiroElt(level, parse_poly(f))); };
        auto& e = leaf(hab, "ev", "evaluation at a root of unity");
        habiro_opts(e.app);
        e.app->add_option("--zeta", zeta, "root of unity a/b")->required();
        e.run = [&] { return to_json(ev(HabiroElt(level, parse_poly(f)), io::parse_root(zeta))); };
        auto& s = leaf(hab, "sigma", "f(q) -> f(q^n)");
        habiro_opts(s.app);
        s.app->add_option("--n", n, "n >= 1")->required()->check(CLI::Range(1, 1000));
        s.run = [&] { return to_json(sigma_n(HabiroElt(level, parse_poly(f)), n)); };
        auto& t = leaf(hab, "taylor", "Taylor coefficients at zeta");
        habiro_opts(t.app);
        t.app->add_option("--zeta", zeta, "root of unity a/b")->required();
        t.app->add_option("--depth", depth, "number of coefficients")->capture_default_str()->check(CLI::Range(1, 200));
        t.run = [&] {
            json a = json::array();
            for (const auto& c : taylor(HabiroElt(level, parse_poly(f)), io::parse_root(zeta), depth)) a.push_back(to_json(c));
            return a;
        };
    }

    // bc
    auto* bc = group("bc", "Bost-Connes algebra");
    {
        auto& s = leaf(bc, "sigma", "e(r) -> e(nr)");
        s.app->add_option("--x", x, "Q/Z element '1/6:1,1/2:2'")->required();
        s.app->add_option("--n", n, "n >= 1")->required()->check(CLI::Range(1, 100000));
        s.run = [&] { return to_json(qz_sigma(io::parse_qz(x), n)); };
        auto& r = leaf(bc, "rho", "average over n-th roots");
        r.app->add_option("--x", x, "Q/Z element")->required();
        r.app->add_option("--n", n, "n >= 1")->required()->check(CLI::Range(1, 10000));
        r.run = [&] { return to_json(qz_rho(io::parse_qz(x), n)); };
        auto& e = leaf(bc, "idempotent", "e_n = rho_n(1)");
        e.app->add_option("--n", n, "n >= 1")->required()->check(CLI::Range(1, 10000));
        e.run = [&] { return to_json(idempotent_e(n)); };
        auto& m = leaf(bc, "mul", "product of monomials 'a|x|b'");
        m.app->add_option("--u", u, "left factor")->required();
        m.app->add_option("--v", v, "right factor")->required();
        m.run = [&] { return to_json(bc_mul(parse_bc_monomial(u), parse_bc_monomial(v))); };
        auto& o = leaf(bc, "eop", "diagonal of E_{zeta,f} on eps_1..eps_K");
        habiro_opts(o.app);
        o.app->add_option("--zeta", zeta, "root of unity a/b")->required();
        o.app->add_option("--K", K, "basis size")->capture_default_str()->check(CLI::Range(1, 10000));
        o.run = [&] {
            json a = json::array();
            for (const auto& c : e_operator(io::parse_root(zeta), HabiroElt(level, parse_poly(f)), K)) a.push_back(to_json(c));
            return a;
        };
    }

    // qsm
    auto* qsm = group("qsm", "partition functions and KMS states");
    auto qsm_opts = [&](CLI::App* s) {
        s->add_option("--hbar", hbar, "hbar in (0,1)")->capture_default_str();
        s->add_option("--beta", beta, "inverse temperature > 1")->capture_default_str();
        s->add_option("--nmax", nmax, "cutoff in n")->capture_default_str()->check(CLI::Range(1, 100000000));
        s->add_option("--mmax", mmax, "cutoff in m")->capture_default_str()->check(CLI::Range(0, 100000));
    };
    {
        auto& z = leaf(qsm, "partition", "truncated Z_hbar(beta) with tail bound", false);
        qsm_opts(z.app);
        z.run = [&] {
            auto r = partition_function(make_cfg(hbar, beta, nmax, mmax));
            return json{{"value", r.value}, {"tail_bound", r.tail_bound}};
        };
        auto& g = leaf(qsm, "gibbs", "phi_beta(delta_l^* T) by trace and by series", false);
        qsm_opts(g.app);
        g.app->add_option("--f", f, "polynomial in q")->capture_default_str();
        g.app->add_option("--level", level, "Habiro level")->capture_default_str()->check(CLI::Range(1, 200));
        g.app->add_option("--zeta", zeta, "root of unity a/b")->capture_default_str();
        g.app->add_option("--l", l, "shift l >= 0")->capture_default_str()->check(CLI::Range(0, 100));
        g.app->add_option("--side", side, "left: delta^* T, right: T delta^*")->check(CLI::IsMember({"left", "right"}))->capture_default_str();
        g.run = [&] {
            auto cfg = make_cfg(hbar, beta, nmax, mmax);
            HabiroElt fh(level, parse_poly(f));
            auto z = io::parse_root(zeta);
            auto T = build_T(z, fh, l + 1, cfg);
            auto D = delta_operator(l, cfg).adjoint();
            bool left = side == "left";
            cplx tr = gibbs_state(left ? D * T : T * D, cfg);
            cplx an = gibbs_analytic(z, fh, l, cfg, left ? ShiftSide::Left : ShiftSide::Right);
            return json{{"value", to_json(tr)}, {"analytic", to_json(an)}, {"difference", std::abs(tr - an)}};
        };
        auto& kl = leaf(qsm, "kms-limit", "phi_beta(T) (or rescaled l-th coefficient) along a beta grid", false);
        kl.app->add_option("--hbar", hbar, "hbar in (0,1)")->capture_default_str();
        kl.app->add_option("--nmax", nmax, "cutoff in n")->capture_default_str()->check(CLI::Range(1, 100000));
        kl.app->add_option("--mmax", mmax, "cutoff in m")->capture_default_str()->check(CLI::Range(0, 10000));
        kl.app->add_option("--f", f, "polynomial in q")->capture_default_str();
        kl.app->add_option("--level", level, "Habiro level")->capture_default_str()->check(CLI::Range(1, 200));
        kl.app->add_option("--zeta", zeta, "root of unity a/b")->capture_default_str();
        kl.app->add_option("--l", l, "Taylor index")->capture_default_str()->check(CLI::Range(0, 100));
        kl.app->add_option("--betas", betas, "comma-separated beta grid")->capture_default_str();
        kl.run = [&] {
            HabiroElt fh(level, parse_poly(f));
            auto z = io::parse_root(zeta);
            cplx target = complex_embed(taylor(fh, z, l + 1)[static_cast<std::size_t>(l)]);
            json rows = json::array();
            for (double b : parse_doubles(betas)) {
                auto cfg = make_cfg(hbar, b, nmax, mmax);
                auto T = build_T(z, fh, l + 1, cfg);
                cplx val = l == 0 ? gibbs_state(T, cfg) : gibbs_state(T * delta_operator(l, cfg).adjoint(), cfg) / std::pow(hbar, b * l);
                rows.push_back({{"beta", b}, {"value_re", val.real()}, {"value_im", val.imag()}, {"error", std::abs(val - target)}});
            }
            return json{{"target", to_json(target)}, {"rows", rows}};
        };
    }

    // multi
    auto* multi = group("multi", "multivariable systems");
    {
        auto& s = leaf(multi, "snf", "Smith form A = U D V");
        s.app->add_option("--matrix", matrix, "'[[1,2],[3,4]]' or '1,2;3,4'")->required();
        s.run = [&] {
            auto r = snf(io::parse_matrix(matrix));
            return json{{"U", to_json(r.U)}, {"D", to_json(r.D)}, {"V", to_json(r.V)}};
        };
        auto& h = leaf(multi, "hnf", "HNF representatives of determinant d");
        h.app->add_option("--n", nvars, "dimension")->capture_default_str()->check(CLI::Range(1, 6));
        h.app->add_option("--det", det_v, "determinant d >= 1")->required()->check(CLI::Range(1, 100000));
        h.app->add_flag("--count-only", list, "omit the matrices");
        h.run = [&] {
            json out{{"count", to_string(hnf_count(nvars, det_v))}};
            if (!list) {
                json a = json::array();
                for (const auto& m : hnf_enumerate(nvars, det_v)) a.push_back(to_json(m));
                out["matrices"] = a;
            }
            return out;
        };
        auto& pt = leaf(multi, "partition", "type II1 partition function vs zeta product", false);
        pt.app->add_option("--n", nvars, "dimension")->capture_default_str()->check(CLI::Range(1, 4));
        pt.app->add_option("--beta", beta, "beta > n")->capture_default_str();
        pt.app->add_option("--cap", cap, "determinant cap")->capture_default_str()->check(CLI::Range(1, 100000));
        pt.app->add_option("--caps", caps, "comma-separated caps for a sweep");
        pt.run = [&] {
            json rows = json::array();
            std::vector<double> cs = caps.empty() ? std::vector<double>{double(cap)} : parse_doubles(caps);
            for (double c : cs) {
                auto D = static_cast<std::int64_t>(c);
                auto z = partition_II1(nvars, beta, D);
                auto zp = zeta_product_truncated(nvars, beta, D);
                rows.push_back({{"cap", D}, {"value", z.value}, {"tail_bound", z.tail_bound}, {"zeta_product", zp.value}, {"zeta_product_tail", zp.tail_bound}});
            }
            return caps.empty() ? rows[0] : json{{"rows", rows}};
        };
        auto& pr = leaf(multi, "preimages", "all s with alpha(s) = r");
        pr.app->add_option("--alpha", matrix, "integer matrix")->required();
        pr.app->add_option("--r", labels, "labels 'a/b,c/d'")->required();
        pr.run = [&] {
            QZVec r;
            for (const auto& q : io::parse_rational_list(labels)) r.push_back(io::parse_root(to_string(q)));
            json a = json::array();
            for (const auto& s : preimage_solutions(io::parse_matrix(matrix), r)) a.push_back(to_json(s));
            return json{{"count", a.size()}, {"solutions", a}};
        };
    }

    // witt
    auto* witt = group("witt", "big Witt vectors");
    auto witt_opts = [&](CLI::App* s, bool two) {
        s->add_option("--u", u, "components 'a,b/c,...'")->required();
        if (two) s->add_option("--v", v, "second vector")->required();
        s->add_option("--trunc", trunc, "truncation N (pads or cuts; env HBC_DEFAULT_LEVEL if 0 and unset vectors)")->check(CLI::Range(0, 1000));
    };
    {
        auto& g = leaf(witt, "ghost", "ghost components");
        witt_opts(g.app, false);
        g.run = [&] { return to_json(ghost(witt_from(u, trunc))); };
        auto& ug = leaf(witt, "unghost", "Witt components from ghost components");
        ug.app->add_option("--psi", psi, "ghost components")->required();
        ug.app->add_option("--trunc", trunc, "truncation N")->check(CLI::Range(0, 1000));
        ug.app->add_flag("--integral", integral, "fail with NonIntegral on non-integral output");
        ug.run = [&] {
            auto v2 = io::parse_rational_list(psi);
            if (trunc > 0) v2.resize(static_cast<std::size_t>(trunc), Rational(0));
            return to_json(unghost(v2, integral));
        };
        auto& a = leaf(witt, "add", "Witt sum");
        witt_opts(a.app, true);
        a.run = [&] { return to_json(witt_add(witt_from(u, trunc), witt_from(v, trunc))); };
        auto& mu = leaf(witt, "mul", "Witt product");
        witt_opts(mu.app, true);
        mu.run = [&] { return to_json(witt_mul(witt_from(u, trunc), witt_from(v, trunc))); };
        auto& ad = leaf(witt, "adams", "F_n, truncation floor(N/n)");
        witt_opts(ad.app, false);
        ad.app->add_option("--n", n, "n >= 1")->required()->check(CLI::Range(1, 1000));
        ad.run = [&] { return to_json(adams_frobenius(witt_from(u, trunc), static_cast<std::size_t>(n))); };
    }
    auto* lambda = group("lambda", "Frobenius lifts on Z[t]/(t^k - 1)");
    // also reachable as witt frobcheck
    for (auto* parent : {lambda, witt}) {
        auto& fc = leaf(parent, "frobcheck", "s_p(x) - x^p in pR");
        fc.app->add_option("--k", k, "modulus k")->capture_default_str()->check(CLI::Range(1, 10000));
        fc.app->add_option("--p", p, "prime p")->capture_default_str()->check(CLI::Range(2, 1000));
        fc.app->add_option("--elem", elem, "polynomial in t")->capture_default_str();
        fc.run = [&] {
            GroupRingModP R{k, p};
            auto r = frobenius_lift_check(R, R.reduce(parse_poly(elem, 't')));
            json d = json::array(), q = json::array();
            for (const auto& c : r.difference) d.push_back(to_string(c));
            for (const auto& c : r.quotient) q.push_back(to_string(c));
            return json{{"ok", r.ok}, {"difference", d}, {"quotient", q}};
        };
    }

    // mzv
    auto* mzv = group("mzv", "cone multiple zeta values");
    {
        auto& c = leaf(mzv, "cone", "truncated cone MZV with tail", false);
        c.app->add_option("--gens", gens, "generators 'x,y;x,y'")->required();
        c.app->add_option("--forms", forms, "linear forms 'a,b|c,d'")->required();
        c.app->add_option("--theta", theta, "character 'a/b,c/d' (default trivial)");
        c.app->add_option("--hmax", hmax, "height cap")->capture_default_str();
        c.app->add_option("--height", height, "height form (default intrinsic to the cone)");
        c.app->add_option("--channel", channel, "integer matrix m; sums over forms l o m");
        c.app->add_flag("--allow-divergent", allow_div, "sum even when depth <= dimension");
        c.run = [&] {
            auto G = parse_vectors(gens, ';');
            if (G.empty()) fail("ParseError", "no generators");
            RationalCone C(G[0].size(), G);
            std::vector<RootOfUnity> th;
            for (const auto& q : io::parse_rational_list(theta)) th.push_back(io::parse_root(to_string(q)));
            ConeState s(C, parse_vectors(forms, '|'), th);
            if (!channel.empty()) s = channel_transform(s, io::parse_matrix(channel));
            std::optional<RatVec> h;
            if (!height.empty()) h = io::parse_rational_list(height);
            if (!(hmax > 0 && hmax < 1e9)) fail("InvalidArgument", "hmax must lie in (0, 1e9)");
            auto r = mzv_cone(s, hmax, allow_div, h);
            json t = std::isinf(r.tail) ? json("inf") : json(r.tail);
            return json{{"value_re", r.value.real()}, {"value_im", r.value.imag()}, {"tail", t}, {"points", r.points}};
        };
    }

    // braid
    auto* braid = group("braid", "braid endomorphisms");
    {
        auto& r = leaf(braid, "rho", "gamma -> gamma T_N^{m l(gamma)}");
        r.app->add_option("--n", strands, "strands N")->capture_default_str()->check(CLI::Range(2, 1000));
        r.app->add_option("--word", word, "'s1 s2^-1 T^2'")->capture_default_str();
        r.app->add_option("--m", mpow, "m")->capture_default_str();
        r.run = [&] {
            auto g = BraidWord::parse(strands, word);
            auto img = rho_endo(g, mpow);
            return json{{"input", to_json(g)}, {"image", to_json(img)}, {"expanded", img.expanded().str()}};
        };
        auto& c = leaf(braid, "compose", "rho_{n2} rho_{n1} against the closed-form exponent");
        c.app->add_option("--n", strands, "strands N")->capture_default_str()->check(CLI::Range(2, 1000));
        c.app->add_option("--word", word, "braid word")->capture_default_str();
        c.app->add_option("--n1", n1, "first exponent")->capture_default_str();
        c.app->add_option("--n2", n2, "second exponent")->capture_default_str();
        c.run = [&] {
            auto g = BraidWord::parse(strands, word);
            auto twice = rho_endo(rho_endo(g, n1), n2);
            return json{{"image", to_json(twice)},
                        {"exponent", twice.center() - g.center()},
                        {"closed_form", composition_exponent(strands, n1, n2, g.writhe())},
                        {"ok", compose_identity_check(g, n1, n2)}};
        };
        auto& t = leaf(braid, "torus", "T(a,b) -> T(a, b(1 + m a(a-1)))");
        t.app->add_option("--a", a_int, "a >= 2")->capture_default_str()->check(CLI::Range(2, 1000));
        t.app->add_option("--b", b_int, "b >= 1")->capture_default_str();
        t.app->add_option("--m", mpow, "m")->capture_default_str();
        t.run = [&] {
            auto r = torus_knot_action(a_int, b_int, mpow);
            return json{{"a", r.a}, {"b", r.b}, {"b_new", r.b_new}, {"word_identity", r.word_identity}};
        };
    }

    {
        auto& r = leaf(nullptr, "repro", "acceptance suite", false);
        r.app->add_option("suite,--suite", suite, "algebra|qsm|multivar|witt|mzv|braid|all")->capture_default_str()->check(CLI::IsMember(repro::suite_names()));
        r.run = [&] {
            json rows = json::array();
            bool all = true;
            for (const auto& c : repro::run_suite(suite)) {
                rows.push_back({{"criterion", c.id}, {"suite", c.suite}, {"name", c.name}, {"passed", c.passed()}, {"seconds", c.seconds}, {"detail", c.detail}});
                all = all && c.passed();
            }
            return json{{"all_passed", all}, {"rows", rows}};
        };
    }

    auto emit_error = [&](const std::string& command, const std::string& kind, const std::string& msg, int code) {
        json e{{"schema_version", schema_version}, {"command", command}, {"error", {{"kind", kind}, {"message", msg}}}};
        return Outcome{code, e.dump(2) + "\n"};
    };

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        // help on the innermost selected subcommand
        const CLI::App* sel = &app;
        for (bool more = true; more;) {
            more = false;
            for (const auto* s : sel->get_subcommands()) {
                sel = s;
                more = true;
                break;
            }
        }
        return {0, sel->help()};
    } catch (const CLI::ParseError& e) {
        std::string kind = "UsageError";
        std::string what = e.what();
        if (dynamic_cast<const CLI::ConversionError*>(&e) || dynamic_cast<const CLI::ValidationError*>(&e))
            kind = "BadFlagValue";
        else if (what.find("subcommand") != std::string::npos || dynamic_cast<const CLI::ExtrasError*>(&e)) {
            kind = "UnknownSubcommand";
            const CLI::App* cur = &app;
            std::string path = "hbc", prev;
            for (const auto& t : args) {
                if (t.rfind("-", 0) == 0) {
                    prev = t;
                    continue;
                }
                auto* opt = prev.empty() ? nullptr : cur->get_option_no_throw(prev);
                prev.clear();
                if (opt && opt->get_expected_max() > 0) continue;
                const CLI::App* sub = nullptr;
                for (const auto* s : cur->get_subcommands({})) sub = s->get_name() == t ? s : sub;
                if (!sub) {
                    what = "unknown subcommand '" + t + "' for '" + path + "'";
                    break;
                }
                cur = sub;
                path += " " + t;
            }
            if (what.find("unknown") == std::string::npos) what = "'" + path + "' needs a subcommand";
        }
        if (kind == "BadFlagValue") {
            // position of the first argument named in the message
            for (std::size_t i = 0; i < args.size(); ++i)
                if (args[i].rfind("--", 0) == 0 && what.find(args[i]) != std::string::npos) {
                    what += " (argument " + std::to_string(i + 1) + ")";
                    break;
                }
        }
        return emit_error("", kind, what, 2);
    }

    Leaf* chosen = nullptr;
    for (auto& lf : leaves)
        if (lf->app->parsed()) chosen = lf.get();
    if (!chosen) return emit_error("", "UnknownSubcommand", "no command selected", 2);

    json config{{"format", format}};
    for (const auto* opt : chosen->app->get_options()) {
        if (opt->get_single_name() == "help") continue;
        if (opt->count() > 0) {
            auto res = opt->results();
            config[opt->get_single_name()] = opt->get_expected_max() == 0 ? json(true) : json(res.size() == 1 ? res[0] : CLI::detail::join(res, " "));
        } else if (!opt->get_default_str().empty()) {
            config[opt->get_single_name()] = opt->get_default_str();
        }
    }
    if (chosen->app->get_option_no_throw("--level") && std::getenv("HBC_DEFAULT_LEVEL") && chosen->app->get_option("--level")->count() == 0)
        config["level_source"] = "HBC_DEFAULT_LEVEL";

    json result;
    try {
        result = chosen->run();
    } catch (const domain_error& e) {
        return emit_error(chosen->name, e.kind(), e.what(), 1);
    }

    if (format == "csv") return {0, to_csv(result)};
    json out{{"schema_version", schema_version}, {"command", chosen->name}, {"config", config}, {"exact", chosen->exact}, {"result", result}};
    return {0, out.dump(2) + "\n"};
}

} // namespace hbc::cli
