#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "fschubert/dual.hpp"
#include "fschubert/errors.hpp"
#include "fschubert/io.hpp"

namespace fst {

using namespace fschubert;

inline constexpr std::uint64_t kSeed = 20261016;

inline Setup make(const std::string& json) {
    RunOptions o;
    return build_setup(Json::parse(json), o);
}

inline Setup make(const std::string& type, const std::string& lattice, const std::string& fgl,
                  const std::string& ring = "\"Z\"", int N = 0) {
    std::string j = "{\"type\":\"" + type + "\",\"lattice\":\"" + lattice + "\",\"fgl\":" + fgl + ",\"ring\":" + ring;
    if (N) j += ",\"trunc\":" + std::to_string(N);
    return make(j + "}");
}

/// F = (x + y)/(1 + xy), as a custom coefficient table up to degree N.
inline std::string lorentz_json(int N) {
    std::string s = "{\"custom\":[";
    bool first = true;
    for (int k = 1; 2 * k + 1 <= N; ++k) {
        const char* c = k % 2 ? "\"-1\"" : "\"1\"";
        for (auto [i, j] : {std::pair{k + 1, k}, std::pair{k, k + 1}}) {
            if (!first) s += ",";
            first = false;
            s += "[" + std::to_string(i) + "," + std::to_string(j) + "," + c + "]";
        }
    }
    return s + "]}";
}

inline Series poly(const Setup& s, const std::vector<std::pair<std::vector<int>, long>>& terms, int p = -1) {
    std::vector<Series::Term> t;
    for (const auto& [e, c] : terms) {
        Monomial m;
        for (std::size_t i = 0; i < e.size(); ++i) {
            m.e[i] = static_cast<std::uint8_t>(e[i]);
            m.deg = static_cast<std::uint16_t>(m.deg + e[i]);
        }
        t.emplace_back(m, s.F->ring()->from_integer(c));
    }
    return Series::from_terms(s.F->ring(), s.rd->rank(), p < 0 ? s.N : p, std::move(t));
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed = kSeed) : eng(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }

    Series series(const Setup& s, int max_deg, int max_terms) {
        std::vector<Series::Term> terms;
        int n = uniform(0, max_terms);
        for (int k = 0; k < n; ++k) {
            Monomial m;
            int d = uniform(0, max_deg);
            for (int j = 0; j < d; ++j) {
                auto i = static_cast<std::size_t>(uniform(0, static_cast<int>(s.rd->rank()) - 1));
                m.e[i]++;
                m.deg++;
            }
            terms.emplace_back(m, s.F->ring()->from_integer(uniform(-4, 4)));
        }
        return Series::from_terms(s.F->ring(), s.rd->rank(), s.N, std::move(terms));
    }

    QWElem qwelem(const Setup& s) {
        const Context& C = *s.ctx;
        QWElem z;
        int n = uniform(1, 3);
        for (int k = 0; k < n; ++k) {
            QElem q = C.q_from(series(s, 2, 3));
            if (uniform(0, 1))
                q = C.q_mul(q, C.q_inv_root(static_cast<std::size_t>(uniform(0, static_cast<int>(s.rd->num_roots()) - 1))));
            z = C.qw_add(z, C.qw_left_scale(q, C.qw_delta(uniform(0, static_cast<int>(s.W->size()) - 1))));
        }
        return z;
    }

    DualElem dual(const Setup& s) {
        DualElem f;
        for (std::size_t w = 0; w < s.W->size(); ++w) f.c.push_back(s.ctx->q_from(series(s, 2, 2)));
        return f;
    }

    DualElem image_class(const Setup& s) {
        const Dual& D = *s.dual;
        DualElem f = D.zero();
        for (std::size_t w = 0; w < s.W->size(); ++w)
            f = D.add(f, D.scale(s.ctx->q_from(series(s, 1, 2)), D.bs_basis(static_cast<int>(w))));
        return f;
    }
};

/// Exact evaluation at a rational point, valid for the additive law where
/// x_λ is the linear form λ.  Used as an oracle independent of the series
/// and division code.
struct PointOracle {
    const Setup& s;
    std::vector<mpq_class> t;

    mpq_class linear(const LatticeVector& v) const {
        mpq_class r = 0;
        for (std::size_t i = 0; i < v.size(); ++i) r += mpq_class(static_cast<long>(v[i])) * t[i];
        return r;
    }

    LatticeVector act(int w, const LatticeVector& v) const {
        const auto& m = (*s.W)[static_cast<std::size_t>(w)].matrix;
        LatticeVector out(v.size(), 0);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * v[c];
        return out;
    }

    mpq_class eval(const Series& f) const {
        mpq_class r = 0;
        for (const auto& [m, c] : f.terms()) {
            mpq_class term = std::holds_alternative<mpz_class>(c) ? mpq_class(std::get<mpz_class>(c)) : std::get<mpq_class>(c);
            for (std::size_t i = 0; i < t.size(); ++i)
                for (int k = 0; k < m.e[i]; ++k) term *= t[i];
            r += term;
        }
        return r;
    }

    // x_Π at the point, product over negative roots.
    mpq_class x_pi() const {
        mpq_class r = 1;
        for (std::size_t b = 0; b < s.rd->num_positive(); ++b) r *= -linear(s.rd->root(b).coords);
        return r;
    }

    int index_of_product(int u, std::size_t i) const {
        const auto& mu = (*s.W)[static_cast<std::size_t>(u)].matrix;
        return s.W->find(mu * s.rd->simple_reflection(i));
    }

    // ψ_I by the localization formula A_α(f)_u = f_u/x_{-u(α)} + f_{us}/x_{u(α)}.
    std::vector<mpq_class> bott_samelson(const std::vector<int>& word) const {
        std::vector<mpq_class> f(s.W->size(), 0);
        f[0] = x_pi();
        for (int i : word) {
            std::vector<mpq_class> g(f.size());
            for (std::size_t u = 0; u < f.size(); ++u) {
                mpq_class ua = linear(act(static_cast<int>(u), s.rd->root(static_cast<std::size_t>(i)).coords));
                int us = index_of_product(static_cast<int>(u), static_cast<std::size_t>(i));
                g[u] = f[u] / (-ua) + f[static_cast<std::size_t>(us)] / ua;
            }
            f = std::move(g);
        }
        return f;
    }

    // Σ_w a_w b_w / w(x_Π).
    mpq_class pairing(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) const {
        mpq_class r = 0;
        for (std::size_t w = 0; w < a.size(); ++w) {
            mpq_class wx = 1;
            for (std::size_t p = 0; p < s.rd->num_positive(); ++p)
                wx *= -linear(act(static_cast<int>(w), s.rd->root(p).coords));
            r += a[w] * b[w] / wx;
        }
        return r;
    }
};

inline PointOracle random_point(const Setup& s, Rng& rng) {
    PointOracle o{s, {}};
    // Values chosen so that no root vanishes at the point.
    while (true) {
        o.t.clear();
        for (std::size_t i = 0; i < s.rd->rank(); ++i) {
            mpq_class v(rng.uniform(-40, 40), rng.uniform(1, 7));
            v.canonicalize();
            o.t.push_back(v);
        }
        bool ok = true;
        for (std::size_t r = 0; r < s.rd->num_roots(); ++r) ok = ok && o.linear(s.rd->root(r).coords) != 0;
        if (ok) return o;
    }
}

} // namespace fst
