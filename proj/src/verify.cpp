#include <random>

#include "fschubert/errors.hpp"
#include "fschubert/io.hpp"

namespace fschubert {

namespace {

constexpr std::uint64_t kSeed = 0x5eed2026;

class Suite {
public:
    void record(const std::string& name, bool pass, const std::string& detail = {}) {
        Json r{{"name", name}, {"pass", pass}};
        if (!detail.empty()) r["detail"] = detail;
        rows_.push_back(std::move(r));
        (pass ? passed_ : failed_)++;
    }

    // Exceptions inside a property count as a failure with the message.
    template <class F>
    void run(const std::string& name, F&& body) {
        try {
            std::string detail;
            bool ok = body(detail);
            record(name, ok, detail);
        } catch (const std::exception& e) {
            record(name, false, std::string("error: ") + e.what());
        }
    }

    Json finish() const { return Json{{"properties", rows_}, {"passed", passed_}, {"failed", failed_}}; }

private:
    Json rows_ = Json::array();
    int passed_ = 0, failed_ = 0;
};

struct Gen {
    const Setup& s;
    std::mt19937_64 rng{kSeed};

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    Series series(int max_deg, int max_terms) {
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
            terms.emplace_back(m, s.F->ring()->from_integer(uniform(-3, 3)));
        }
        return Series::from_terms(s.F->ring(), s.rd->rank(), s.N, std::move(terms));
    }

    QElem qelem() {
        const Context& c = *s.ctx;
        QElem q = c.q_from(series(2, 3));
        if (uniform(0, 1)) q = c.q_mul(q, c.q_inv_root(static_cast<std::size_t>(uniform(0, static_cast<int>(s.rd->num_roots()) - 1))));
        return q;
    }

    QWElem qwelem() {
        const Context& c = *s.ctx;
        QWElem z;
        int n = uniform(1, 3);
        for (int k = 0; k < n; ++k)
            z = c.qw_add(z, c.qw_left_scale(qelem(), c.qw_delta(uniform(0, static_cast<int>(s.W->size()) - 1))));
        return z;
    }

    DualElem dual() {
        DualElem f;
        for (std::size_t w = 0; w < s.W->size(); ++w) f.c.push_back(s.ctx->q_from(series(2, 2)));
        return f;
    }

    // S-combination of Bott-Samelson basis classes, so it lies in the image.
    DualElem image_class() {
        DualElem f = s.dual->zero();
        for (std::size_t w = 0; w < s.W->size(); ++w)
            f = s.dual->add(f, s.dual->scale(s.ctx->q_from(series(1, 2)), s.dual->bs_basis(static_cast<int>(w))));
        return f;
    }

    LatticeVector weight() {
        LatticeVector v(s.rd->rank());
        for (auto& x : v) x = uniform(-2, 2);
        return v;
    }
};

std::vector<Parabolic> all_subsets(std::size_t rank) {
    std::vector<Parabolic> out;
    for (std::uint32_t m = 0; m < (1u << rank); ++m) out.push_back(Parabolic{m});
    return out;
}

QWElem qw_sum(const Context& c, const std::vector<QWElem>& parts) {
    QWElem r;
    for (const auto& p : parts) r = c.qw_add(r, p);
    return r;
}

} // namespace

Json run_verify(const Setup& s, const RunOptions& opts) {
    Suite suite;
    Gen g{s};
    const auto& W = *s.W;
    const auto& rd = *s.rd;
    const Context& C = *s.ctx;
    const Dual& D = *s.dual;
    const std::size_t n = rd.rank();
    const int samples = 10;

    // Root system.
    suite.run("weyl.length_changes_by_one", [&](std::string&) {
        for (std::size_t w = 0; w < W.size(); ++w)
            for (std::size_t i = 0; i < n; ++i) {
                auto a = W.length(static_cast<int>(w)), b = W.length(W.right_simple(static_cast<int>(w), i));
                if (a + 1 != b && b + 1 != a) return false;
            }
        return true;
    });
    suite.run("weyl.longest_length_is_positive_root_count", [&](std::string& d) {
        d = std::to_string(W.length(W.longest())) + " vs " + std::to_string(rd.num_positive());
        return W.length(W.longest()) == rd.num_positive();
    });
    suite.run("weyl.preserves_roots", [&](std::string&) {
        for (std::size_t w = 0; w < W.size(); ++w)
            for (std::size_t r = 0; r < rd.num_roots(); ++r)
                if (rd.root_index(W.act(static_cast<int>(w), rd.root(r).coords)) < 0) return false;
        return true;
    });
    suite.run("weyl.coset_counts", [&](std::string&) {
        for (Parabolic xi : all_subsets(n)) {
            const auto& t = W.cosets(xi);
            if (t.min_reps.size() * t.subgroup.size() != W.size()) return false;
            for (std::size_t w = 0; w < W.size(); ++w)
                for (int i : xi.indices())
                    if (t.rep_of[w] != t.rep_of[static_cast<std::size_t>(W.right_simple(static_cast<int>(w), static_cast<std::size_t>(i)))])
                        return false;
        }
        return true;
    });

    // Formal group law and S.
    suite.run("fgl.inverse", [&](std::string&) {
        Series x = Series::variable(s.F->ring(), 1, s.N, 0);
        return s.F->apply(x, s.F->negate(x)).is_zero();
    });
    suite.run("fgl.x_is_homomorphism", [&](std::string&) {
        for (int k = 0; k < samples; ++k) {
            LatticeVector a = g.weight(), b = g.weight(), ab(n);
            for (std::size_t i = 0; i < n; ++i) ab[i] = a[i] + b[i];
            if (!s.S->x(ab).equals(s.F->apply(s.S->x(a), s.S->x(b)))) return false;
        }
        return true;
    });
    suite.run("fgl.action_composes", [&](std::string&) {
        for (int k = 0; k < samples; ++k) {
            int v = g.uniform(0, static_cast<int>(W.size()) - 1), w = g.uniform(0, static_cast<int>(W.size()) - 1);
            Series f = g.series(3, 4);
            if (!s.S->act(v, s.S->act(w, f)).equals(s.S->act(W.mul(v, w), f))) return false;
        }
        return true;
    });
    suite.run("fgl.division_round_trip", [&](std::string&) {
        for (int k = 0; k < samples; ++k) {
            auto r = static_cast<std::size_t>(g.uniform(0, static_cast<int>(rd.num_roots()) - 1));
            Series h = g.series(3, 4);
            auto q = s.S->divide_by_root(C.x(r) * h, r);
            if (!q || !q->equals(h) || q->precision() != s.N - 1) return false;
        }
        return true;
    });

    // Twisted group algebra.
    suite.run("hecke.delta_identity", [&](std::string&) {
        for (std::size_t i = 0; i < n; ++i) {
            QWElem rhs = C.qw_sub(C.qw_delta(0), C.qw_left_scale(C.q_from(C.x(i)), C.demazure_X(i)));
            if (!C.qw_equal(C.qw_delta(W.right_simple(0, i)), rhs)) return false;
        }
        return true;
    });
    suite.run("hecke.pushpull_identity", [&](std::string&) {
        for (std::size_t i = 0; i < n; ++i) {
            QWElem rhs = C.qw_sub(C.qw_scalar(C.q_from(C.kappa(i))), C.demazure_X(i));
            if (!C.qw_equal(C.pushpull_Y(i), rhs)) return false;
        }
        return true;
    });
    suite.run("hecke.associativity", [&](std::string&) {
        for (int k = 0; k < samples; ++k) {
            QWElem a = g.qwelem(), b = g.qwelem(), c = g.qwelem();
            if (!C.qw_equal(C.qw_mul(C.qw_mul(a, b), c), C.qw_mul(a, C.qw_mul(b, c)))) return false;
        }
        return true;
    });
    suite.run("hecke.X_square_in_DF", [&](std::string&) {
        for (std::size_t i = 0; i < n; ++i)
            if (!C.to_X_basis(C.qw_mul(C.demazure_X(i), C.demazure_X(i))).in_DF) return false;
        return true;
    });
    suite.run("hecke.X_basis_round_trip", [&](std::string&) {
        for (int k = 0; k < samples; ++k) {
            std::vector<QWElem> parts;
            for (int j = 0; j < 2; ++j) {
                auto w = g.uniform(0, static_cast<int>(W.size()) - 1);
                parts.push_back(C.qw_left_scale(C.q_from(g.series(2, 2)), C.X_basis_element(w)));
            }
            QWElem z = qw_sum(C, parts);
            XBasisResult b = C.to_X_basis(z);
            if (!b.in_DF || !C.qw_equal(C.from_X_basis(b.coeffs), z)) return false;
        }
        return true;
    });
    suite.run("hecke.word_independence", [&](std::string& d) {
        int differing = -1;
        for (std::size_t w = 0; w < W.size() && differing < 0; ++w) {
            auto words = W.reduced_words(static_cast<int>(w));
            QWElem first = C.word_element(WordKind::X, words.front());
            for (std::size_t k = 1; k < words.size(); ++k)
                if (!C.qw_equal(first, C.word_element(WordKind::X, words[k]))) {
                    differing = static_cast<int>(w);
                    break;
                }
        }
        bool expected_independent = s.F->kind() != FglKind::Custom;
        if (differing >= 0) d = "reduced words of element " + std::to_string(differing) + " give different X_I";
        else d = "X_I independent of the reduced word";
        // A custom law may or may not be word-independent; only report it.
        return !expected_independent || differing < 0;
    });

    // Dual side.
    suite.run("dual.bullet_module_law", [&](std::string&) {
        for (int k = 0; k < samples; ++k) {
            QWElem z = g.qwelem(), z2 = g.qwelem();
            DualElem f = g.dual();
            if (!D.equal(D.bullet(C.qw_mul(z, z2), f), D.bullet(z, D.bullet(z2, f)))) return false;
        }
        return true;
    });
    suite.run("dual.A_square", [&](std::string&) {
        for (int k = 0; k < samples; ++k) {
            auto i = static_cast<std::size_t>(g.uniform(0, static_cast<int>(n) - 1));
            DualElem f = g.dual();
            DualElem Af = D.A_simple(i, f);
            if (!D.equal(D.A_simple(i, Af), D.scale(C.q_from(C.kappa(i)), Af))) return false;
        }
        return true;
    });
    suite.run("dual.bott_samelson_in_image", [&](std::string& d) {
        int cert = INT_MAX;
        for (std::size_t w = 0; w < W.size(); ++w) {
            auto m = D.membership(D.bs_basis(static_cast<int>(w)));
            if (!m.accepted) return false;
            cert = std::min(cert, m.certified_degree);
        }
        d = "certified degree " + std::to_string(cert);
        return true;
    });
    suite.run("dual.char_map_in_image", [&](std::string&) {
        for (int k = 0; k < samples; ++k)
            if (!D.membership(D.char_map(s.S->x(g.weight()))).accepted) return false;
        return true;
    });
    suite.run("dual.char_map_is_ring_map", [&](std::string&) {
        for (int k = 0; k < samples; ++k) {
            Series a = g.series(2, 3), b = g.series(2, 3);
            if (!D.equal(D.mul(D.char_map(a), D.char_map(b)), D.char_map(a * b))) return false;
        }
        return true;
    });
    if (n <= 2)
        suite.run("dual.fixed_points_rejected", [&](std::string&) {
            for (std::size_t w = 0; w < W.size(); ++w)
                if (D.membership(D.basis_vector(static_cast<int>(w))).accepted) return false;
            return true;
        });
    suite.run("dual.bott_samelson_extends", [&](std::string&) {
        for (std::size_t w = 0; w < W.size(); ++w)
            for (std::size_t i = 0; i < n; ++i) {
                int ws = W.right_simple(static_cast<int>(w), i);
                if (W.length(ws) < W.length(static_cast<int>(w))) continue;
                auto word = W[w].word;
                word.push_back(static_cast<int>(i));
                if (!D.equal(D.bott_samelson(word), D.A_simple(i, D.bs_basis(static_cast<int>(w))))) return false;
            }
        return true;
    });
    suite.run("dual.other_reduced_words_in_image", [&](std::string&) {
        for (std::size_t w = 0; w < W.size(); ++w)
            for (const auto& word : W.reduced_words(static_cast<int>(w)))
                if (!D.to_bs_basis(D.bott_samelson(word)).in_image) return false;
        return true;
    });
    suite.run("dual.euler_classes", [&](std::string&) {
        for (Parabolic xi : all_subsets(n))
            for (int w : W.cosets(xi).min_reps)
                if (!D.euler_class(xi, w).holds) return false;
        return true;
    });
    suite.run("dual.A_parabolic_output_invariant", [&](std::string&) {
        for (Parabolic xi : all_subsets(n)) {
            DualElem f = g.image_class();
            if (!D.is_invariant(D.A_parabolic(xi, Parabolic{}, f), xi)) return false;
        }
        return true;
    });
    suite.run("dual.p_star_multiplicative", [&](std::string&) {
        for (Parabolic xi : all_subsets(n)) {
            ParabolicDualElem a = D.section(D.A_parabolic(xi, Parabolic{}, g.image_class()), xi);
            ParabolicDualElem b = D.section(D.A_parabolic(xi, Parabolic{}, g.image_class()), xi);
            if (!D.parabolic_equal(D.p_star(D.parabolic_mul(a, b), Parabolic{}),
                                   D.parabolic_mul(D.p_star(a, Parabolic{}), D.p_star(b, Parabolic{}))))
                return false;
        }
        return true;
    });
    suite.run("dual.pairing_projection_formula", [&](std::string&) {
        Parabolic none{};
        for (int k = 0; k < 3; ++k) {
            Series c = g.series(1, 2);
            ParabolicDualElem a = D.as_parabolic(g.image_class()), b = D.as_parabolic(g.image_class());
            // s·ξ scales every fixed-point coefficient by s.
            ParabolicDualElem sa{none, {}};
            for (const auto& q : a.c) sa.c.push_back(C.q_mul(q, c));
            if (!D.pairing(none, sa, b).equals(c * D.pairing(none, a, b))) return false;
        }
        return true;
    });
    suite.run("dual.pairing_nondegenerate", [&](std::string& d) {
        PairingReport rep = D.pairing_matrix(Parabolic{}, opts.threads);
        d = "det augmentation " + s.F->ring()->format(rep.det_augmentation);
        return rep.symmetric && rep.nondegenerate;
    });
    suite.run("dual.parabolic_coherence", [&](std::string&) {
        Parabolic full = Parabolic::full(n);
        for (std::size_t i = 0; i < n; ++i) {
            Parabolic mid{1u << i};
            for (int k = 0; k < 3; ++k) {
                ParabolicDualElem f = D.as_parabolic(g.image_class());
                if (!D.parabolic_equal(D.push(D.push(f, mid), full), D.push(f, full))) return false;
            }
        }
        return true;
    });
    if (opts.verify_representatives)
        suite.run("dual.representative_independence", [&](std::string&) {
            for (Parabolic xi : all_subsets(n))
                for (Parabolic xp : all_subsets(n)) {
                    if (!xp.subset_of(xi)) continue;
                    QWElem base = C.pushpull_parabolic(xi, xp);
                    const auto& fine = W.cosets(xp);
                    for (int k = 0; k < 5; ++k) {
                        std::vector<int> reps;
                        for (int r : W.relative_reps(xi, xp)) {
                            int u = fine.subgroup[static_cast<std::size_t>(g.uniform(0, static_cast<int>(fine.subgroup.size()) - 1))];
                            reps.push_back(W.mul(r, u));
                        }
                        ParabolicDualElem f = D.as_parabolic(g.image_class());
                        f = D.p_star(D.section(D.A_parabolic(xp, Parabolic{}, D.to_borel(f)), xp), Parabolic{});
                        DualElem lhs = D.A_parabolic(xi, xp, D.to_borel(f), &reps);
                        DualElem rhs = D.A_parabolic(xi, xp, D.to_borel(f));
                        if (!D.equal(lhs, rhs)) return false;
                    }
                }
            return true;
        });

    // Serialization.
    suite.run("io.class_round_trip", [&](std::string&) {
        for (std::size_t w = 0; w < W.size(); ++w) {
            const DualElem& f = D.bs_basis(static_cast<int>(w));
            Json j = class_to_json(f, D);
            ParabolicDualElem back = class_from_json(Json::parse(j.dump()), D);
            if (!D.equal(D.to_borel(back), f)) return false;
        }
        return true;
    });
    return suite.finish();
}

} // namespace fschubert
