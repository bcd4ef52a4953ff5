#include <doctest.h>

#include "support.hpp"

using namespace fst;

namespace {

const std::string kMult = "{\"multiplicative\":\"1\"}";

int elem(const Setup& s, std::vector<int> word) { return s.W->from_word(word); }

bool dual_is(const Setup& s, const DualElem& f, const std::vector<Series>& want) {
    return s.dual->equal(f, s.dual->from_series(want));
}

} // namespace

TEST_CASE("bullet action") {
    auto s = make("A2", "ad", kMult, "\"Z\"", 8);
    const Dual& D = *s.dual;
    const Context& C = *s.ctx;
    for (int w = 0; w < 6; ++w)
        for (int v = 0; v < 6; ++v)
            CHECK(D.equal(D.bullet(C.qw_delta(w), D.basis_vector(v)), D.basis_vector(s.W->mul(v, s.W->inverse(w)))));

    Rng rng;
    for (int w = 0; w < 6; ++w) {
        auto q = C.q_from(rng.series(s, 2, 3));
        auto want = D.scale(C.q_act(w, q), D.basis_vector(w));
        CHECK(D.equal(D.bullet(C.qw_scalar(q), D.basis_vector(w)), want));
    }

    for (const char* t : {"A2", "B2"})
        for (auto fgl : {std::string("\"additive\""), kMult, lorentz_json(8)}) {
            auto g = make(t, "sc", fgl, "\"Z\"", 8);
            const Context& G = *g.ctx;
            for (std::size_t i = 0; i < g.rd->rank(); ++i)
                for (int w = 0; w < static_cast<int>(g.W->size()); ++w) {
                    auto lhs = g.dual->bullet(G.pushpull_Y(i), g.dual->basis_vector(w));
                    auto neg = g.rd->negate(static_cast<std::size_t>(g.W->act_root(w, i)));
                    auto sum = g.dual->add(g.dual->basis_vector(w), g.dual->basis_vector(g.W->right_simple(w, i)));
                    CHECK(g.dual->equal(lhs, g.dual->scale(G.q_inv_root(neg), sum)));
                    CHECK(g.dual->equal(lhs, g.dual->A_simple(i, g.dual->basis_vector(w))));
                }
        }
}

TEST_CASE("push-pull operators") {
    auto s = make("A1", "ad", "\"additive\"", "\"Z\"", 6);
    const Dual& D = *s.dual;
    const Context& C = *s.ctx;
    auto fe = D.basis_vector(0), fs = D.basis_vector(1);
    CHECK(D.equal(D.A_simple(0, fe), D.scale(C.q_inv_root(1), D.add(fe, fs))));
    CHECK(D.equal(D.A_word({}, fe), fe));
    auto g = D.scale(C.q_from(C.x(1)), fe);
    CHECK(D.equal(D.A_simple(0, g), D.add(fe, fs)));
    CHECK_THROWS_AS(D.A_parabolic(Parabolic{1}, Parabolic{1}, fe), UsageError);
    CHECK(D.equal(D.A_parabolic(Parabolic{1}, Parabolic{}, fe), D.A_simple(0, fe)));

    // A_α A_α = κ_α A_α.
    Rng rng;
    for (auto fgl : {kMult, lorentz_json(8)}) {
        auto m = make("B2", "ad", fgl, "\"Z\"", 8);
        for (int k = 0; k < 5; ++k) {
            auto f = rng.dual(m);
            for (std::size_t i = 0; i < 2; ++i) {
                auto once = m.dual->A_simple(i, f);
                CHECK(m.dual->equal(m.dual->A_simple(i, once), m.dual->scale(m.ctx->q_from(m.ctx->kappa(i)), once)));
            }
        }
    }
}

TEST_CASE("Bott-Samelson classes") {
    auto a1 = make("A1", "ad", "\"additive\"", "\"Z\"", 6);
    CHECK(dual_is(a1, a1.dual->bott_samelson({}), {-a1.S->variable(0), a1.S->zero()}));
    for (auto fgl : {std::string("\"additive\""), kMult, lorentz_json(8)})
        for (const char* lat : {"ad", "sc"}) {
            auto s = make("A1", lat, fgl, "\"Z\"", 8);
            CHECK(s.dual->equal(s.dual->bott_samelson({0}), s.dual->unit()));
            // 1 · 1 = 1.
            auto psi = s.dual->bott_samelson({0});
            CHECK(s.dual->equal(s.dual->mul(psi, psi), psi));
        }

    auto a2 = make("A2", "ad", "\"additive\"", "\"Z\"", 8);
    auto psi = a2.dual->bott_samelson({0});
    Series expect = a2.ctx->x(a2.rd->negate(1)) * a2.ctx->x(a2.rd->negate(2));
    CHECK(psi.c[0].num.equals(expect));
    CHECK(psi.c[static_cast<std::size_t>(elem(a2, {0}))].num.equals(expect));
    for (std::size_t w = 0; w < 6; ++w)
        if (w != 0 && static_cast<int>(w) != elem(a2, {0})) CHECK(psi.c[w].is_zero());

    // Too small a truncation is reported, not hidden.
    auto low = make("B2", "sc", "\"additive\"", "\"Z\"", 3);
    CHECK_THROWS_AS(low.dual->bott_samelson({0, 1, 0, 1}), PrecisionError);
}

TEST_CASE("Bott-Samelson classes against localization at a point") {
    Rng rng(kSeed + 1);
    for (const char* t : {"A2", "B2", "G2"}) {
        auto s = make(t, "ad", "\"additive\"", "\"Q\"");
        for (int trial = 0; trial < 2; ++trial) {
            auto pt = random_point(s, rng);
            for (int w = 0; w < static_cast<int>(s.W->size()); ++w)
                for (const auto& word : s.W->reduced_words(w)) {
                    auto psi = s.dual->bott_samelson(word);
                    auto oracle = pt.bott_samelson(word);
                    for (std::size_t u = 0; u < s.W->size(); ++u) {
                        REQUIRE(psi.c[u].in_S());
                        CHECK(pt.eval(psi.c[u].num) == oracle[u]);
                    }
                }
        }
    }
}

TEST_CASE("pointwise product and characteristic map") {
    auto a1 = make("A1", "ad", "\"additive\"", "\"Z\"", 6);
    const Dual& D = *a1.dual;
    CHECK(D.equal(D.mul(D.basis_vector(0), D.basis_vector(1)), D.zero()));
    Rng rng;
    auto f = rng.dual(a1);
    CHECK(D.equal(D.mul(D.unit(), f), f));
    CHECK(D.equal(D.char_map(a1.S->one()), D.unit()));
    auto x1 = a1.S->variable(0);
    CHECK(dual_is(a1, D.char_map(a1.ctx->x(0)), {x1, -x1}));

    for (auto fgl : {kMult, lorentz_json(8)}) {
        auto s = make("B2", "sc", fgl, "\"Z\"", 8);
        for (int k = 0; k < 5; ++k) {
            auto a = rng.series(s, 3, 4), b = rng.series(s, 3, 4);
            CHECK(s.dual->equal(s.dual->mul(s.dual->char_map(a), s.dual->char_map(b)), s.dual->char_map(a * b)));
            CHECK(s.dual->membership(s.dual->char_map(a)).accepted);
        }
    }
}

TEST_CASE("image criterion") {
    auto a1 = make("A1", "ad", "\"additive\"", "\"Z\"", 6);
    auto r = a1.dual->membership(a1.dual->basis_vector(0));
    CHECK_FALSE(r.accepted);
    CHECK(r.witness_root == 0);
    CHECK(r.witness_w == 0);
    CHECK(a1.dual->membership(a1.dual->unit()).accepted);

    for (const char* t : {"A1", "A2", "B2"}) {
        auto s = make(t, "ad", "\"additive\"", "\"Z\"");
        for (int w = 0; w < static_cast<int>(s.W->size()); ++w) {
            CHECK_FALSE(s.dual->membership(s.dual->basis_vector(w)).accepted);
            for (const auto& word : s.W->reduced_words(w)) {
                auto m = s.dual->membership(s.dual->bott_samelson(word));
                CHECK(m.accepted);
                CHECK(m.certified_degree >= 1);
            }
        }
    }
}

TEST_CASE("Bott-Samelson basis") {
    auto a1 = make("A1", "ad", "\"additive\"", "\"Z\"", 6);
    const Dual& D = *a1.dual;
    auto one = D.to_bs_basis(D.unit());
    REQUIRE(one.in_image);
    CHECK(one.coeffs.size() == 1);
    CHECK(one.coeffs.at(1).equals(a1.S->one()));

    auto c = D.to_bs_basis(D.char_map(a1.ctx->x(0)));
    REQUIRE(c.in_image);
    CHECK(c.coeffs.at(0).equals(a1.S->constant(a1.F->ring()->from_integer(-2))));
    CHECK(c.coeffs.at(1).equals(-a1.S->variable(0)));

    CHECK_FALSE(D.to_bs_basis(D.basis_vector(0)).in_image);

    for (auto fgl : {std::string("\"additive\""), kMult, lorentz_json(10)}) {
        auto s = make("A2", "ad", fgl, "\"Z\"", 10);
        for (int w = 0; w < 6; ++w) {
            auto r = s.dual->to_bs_basis(s.dual->bs_basis(w));
            REQUIRE(r.in_image);
            REQUIRE(r.coeffs.size() == 1);
            CHECK(r.coeffs.at(w).equals(s.S->one()));
            // Non-canonical words land in the image too.
            for (const auto& word : s.W->reduced_words(w)) CHECK(s.dual->to_bs_basis(s.dual->bott_samelson(word)).in_image);
        }
        Rng rng;
        for (int k = 0; k < 5; ++k) {
            auto f = rng.image_class(s);
            auto r = s.dual->to_bs_basis(f);
            REQUIRE(r.in_image);
            DualElem back = s.dual->zero();
            for (const auto& [w, cw] : r.coeffs) back = s.dual->add(back, s.dual->scale(s.ctx->q_from(cw), s.dual->bs_basis(w)));
            CHECK(s.dual->equal(back, f));
        }
    }
}

TEST_CASE("parabolic projections") {
    auto s = make("A2", "ad", kMult, "\"Z\"", 8);
    const Dual& D = *s.dual;
    Parabolic one{1}, none{};
    auto fe = D.parabolic_basis_vector(one, 0);
    CHECK(D.parabolic_equal(D.p_star(fe, one), fe));
    auto lifted = D.p_star(fe, none);
    auto want = D.add(D.basis_vector(0), D.basis_vector(elem(s, {0})));
    CHECK(D.equal(D.to_borel(lifted), want));
    auto back = D.d_star(lifted, one);
    auto two = D.parabolic_zero(one);
    two.c[0] = s.ctx->q_from(s.S->constant(s.F->ring()->from_integer(2)));
    CHECK(D.parabolic_equal(back, two));

    // p^⋆ is multiplicative.
    Rng rng;
    for (int k = 0; k < 5; ++k) {
        auto a = D.section(D.A_parabolic(one, none, rng.dual(s)), one);
        auto b = D.section(D.A_parabolic(one, none, rng.dual(s)), one);
        CHECK(D.parabolic_equal(D.p_star(D.parabolic_mul(a, b), none), D.parabolic_mul(D.p_star(a, none), D.p_star(b, none))));
    }
}

TEST_CASE("invariants and sections") {
    auto a1 = make("A1", "ad", "\"additive\"", "\"Z\"", 6);
    CHECK(a1.dual->is_invariant(a1.dual->unit(), Parabolic{1}));
    CHECK_FALSE(a1.dual->is_invariant(a1.dual->basis_vector(0), Parabolic{1}));
    CHECK_THROWS_AS(a1.dual->section(a1.dual->basis_vector(0), Parabolic{1}), UsageError);

    auto a2 = make("A2", "ad", kMult, "\"Z\"", 8);
    Rng rng;
    for (int k = 0; k < 5; ++k) {
        auto f = rng.dual(a2);
        auto g = a2.dual->A_parabolic(Parabolic{1}, Parabolic{}, f);
        CHECK(a2.dual->is_invariant(g, Parabolic{1}));
        CHECK(a2.dual->equal(a2.dual->to_borel(a2.dual->section(g, Parabolic{1})), g));
        // The Hecke action by δ_{s_1} fixes it.
        CHECK(a2.dual->equal(a2.dual->bullet(a2.ctx->qw_delta(1), g), g));
    }
}

TEST_CASE("parabolic classes") {
    auto a2 = make("A2", "ad", "\"additive\"", "\"Z\"", 8);
    const Dual& D = *a2.dual;
    CHECK(D.equal(D.to_borel(D.parabolic_class(Parabolic{}, {0, 1})), D.bott_samelson({0, 1})));
    auto g = D.parabolic_class(Parabolic{2}, {});
    CHECK(g.c.size() == 3);
    CHECK(g.c[0].num.equals(a2.ctx->x(a2.rd->negate(0)) * a2.ctx->x(a2.rd->negate(2))));

    // Full push-forward of the top class: degree 0 part of the fundamental class.
    auto top_add = D.parabolic_class(Parabolic{3}, {0, 1, 0});
    CHECK(top_add.c.size() == 1);
    CHECK(top_add.c[0].num.is_zero());
    auto m = make("A2", "ad", kMult, "\"Z\"", 8);
    auto top_mul = m.dual->parabolic_class(Parabolic{3}, {0, 1, 0});
    CHECK(top_mul.c[0].num.equals(m.S->one()));

    // The parabolic basis solves back to an indicator.
    for (int w : a2.W->cosets(Parabolic{1}).min_reps) {
        auto r = D.to_parabolic_basis(D.parabolic_basis(Parabolic{1}, w));
        REQUIRE(r.in_image);
        REQUIRE(r.coeffs.size() == 1);
        CHECK(r.coeffs.at(w).equals(a2.S->one()));
    }
}

TEST_CASE("pairing") {
    auto a1 = make("A1", "ad", "\"additive\"", "\"Z\"", 6);
    auto rep = a1.dual->pairing_matrix(Parabolic{});
    auto x1 = a1.S->variable(0);
    REQUIRE(rep.matrix.size() == 2);
    CHECK(rep.matrix[0][0].equals(-x1));
    CHECK(rep.matrix[0][1].equals(a1.S->one()));
    CHECK(rep.matrix[1][0].equals(a1.S->one()));
    CHECK(rep.matrix[1][1].is_zero());
    REQUIRE(rep.determinant.has_value());
    CHECK(rep.determinant->equals(-a1.S->one()));
    CHECK(rep.nondegenerate);
    CHECK(rep.symmetric);

    auto m = make("A1", "ad", kMult, "\"Z\"", 6);
    auto p1 = m.dual->as_parabolic(m.dual->bs_basis(1));
    CHECK(m.dual->pairing(Parabolic{}, p1, p1).equals(m.S->one()));
    for (auto fgl : {std::string("\"additive\""), kMult, lorentz_json(8)}) {
        auto s = make("A1", "sc", fgl, "\"Z\"", 8);
        auto a = s.dual->as_parabolic(s.dual->bs_basis(0)), b = s.dual->as_parabolic(s.dual->bs_basis(1));
        CHECK(s.dual->pairing(Parabolic{}, a, b).equals(s.S->one()));
    }
}

TEST_CASE("pairing against the localization oracle") {
    Rng rng(kSeed + 2);
    for (const char* t : {"A2", "B2"}) {
        auto s = make(t, "sc", "\"additive\"", "\"Q\"");
        auto pt = random_point(s, rng);
        auto rep = s.dual->pairing_matrix(Parabolic{}, 2);
        CHECK(rep.symmetric);
        CHECK(rep.nondegenerate);
        for (std::size_t i = 0; i < rep.basis.size(); ++i)
            for (std::size_t j = 0; j < rep.basis.size(); ++j) {
                auto a = pt.bott_samelson(s.W->operator[](static_cast<std::size_t>(rep.basis[i])).word);
                auto b = pt.bott_samelson(s.W->operator[](static_cast<std::size_t>(rep.basis[j])).word);
                CHECK(pt.eval(rep.matrix[i][j]) == pt.pairing(a, b));
            }
    }
}

TEST_CASE("projection formula") {
    auto s = make("A2", "sc", kMult, "\"Z\"", 8);
    Rng rng;
    Parabolic xi{1};
    for (int k = 0; k < 4; ++k) {
        auto t = rng.series(s, 2, 3);
        auto a = s.dual->parabolic_basis(xi, s.W->cosets(xi).min_reps[static_cast<std::size_t>(rng.uniform(0, 2))]);
        auto b = s.dual->parabolic_basis(xi, s.W->cosets(xi).min_reps[static_cast<std::size_t>(rng.uniform(0, 2))]);
        auto ta = a;
        for (auto& q : ta.c) q = s.ctx->q_mul(q, s.ctx->q_from(t));
        CHECK(s.dual->pairing(xi, ta, b).equals(t * s.dual->pairing(xi, a, b)));
    }
}

TEST_CASE("Euler classes") {
    for (const char* t : {"A1", "A2", "B2"}) {
        auto s = make(t, "sc", kMult, "\"Z\"", 8);
        for (std::uint32_t mask = 0; mask < (1u << s.rd->rank()); ++mask)
            for (int w : s.W->cosets(Parabolic{mask}).min_reps) CHECK(s.dual->euler_class(Parabolic{mask}, w).holds);
    }
    auto a1 = make("A1", "ad", "\"additive\"", "\"Z\"", 6);
    auto e = a1.dual->euler_class(Parabolic{}, 1);
    CHECK(e.expected.equals(a1.S->variable(0)));
    CHECK(a1.dual->euler_class(Parabolic{}, 0).expected.equals(a1.ctx->x_pi()));
    CHECK_THROWS_AS(a1.dual->euler_class(Parabolic{1}, 1), UsageError);
}

TEST_CASE("Borel presentation check") {
    auto ad_z = make("A1", "ad", "\"additive\"", "\"Z\"");
    auto r = ad_z.dual->borel_check(2);
    CHECK_FALSE(r.surjective);
    CHECK(r.cokernel == std::vector<std::string>{"Z/2"});
    CHECK(make("A1", "sc", "\"additive\"", "\"Z\"").dual->borel_check(2).surjective);
    CHECK(make("A1", "ad", "\"additive\"", "\"Q\"").dual->borel_check(2).surjective);
    CHECK(make("A2", "sc", kMult, "\"Z\"").dual->borel_check(4).surjective);
    CHECK(make("A2", "sc", "\"additive\"", "\"Q\"").dual->borel_check(4).surjective);
    auto zb = make("A1", "ad", "{\"multiplicative\":\"b\"}", "{\"ZPoly\":[\"b\"]}");
    CHECK_THROWS_AS(zb.dual->borel_check(2), ValidationError);
}
