// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Limits are wall-clock seconds on a single process.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace fst;
namespace fsys = std::filesystem;

namespace {

constexpr double kLimit1 = 1.0;
constexpr double kLimit2 = 5.0;
constexpr double kLimit3 = 5.0;
constexpr double kLimit4PerConfig = 60.0;
constexpr double kLimit5 = 5.0;
constexpr double kLimit6 = 10.0;
constexpr double kLimit7 = 30.0;
constexpr double kLimit8 = 30.0;
constexpr double kLimit9B2 = 120.0;
constexpr double kLimit10 = 300.0;
constexpr double kLimit11 = 60.0;
constexpr int kTriples = 100;
constexpr int kInvariantSamples = 50;
constexpr int kCoherenceSamples = 20;
constexpr int kRepresentativeChoices = 5;
constexpr int kMinCertifiedDegree = 4;

const std::string kAdd = "\"additive\"";
const std::string kMult = "{\"multiplicative\":\"1\"}";

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

int failures = 0;

void report(int n, const std::string& title, const std::function<void(Outcome&)>& body, double limit) {
    Outcome o;
    auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    double dt = since(t0);
    if (limit > 0 && dt >= limit) {
        std::ostringstream os;
        os << "took " << dt << " s, limit " << limit << " s";
        o.fail(os.str());
    }
    if (!o.ok) ++failures;
    std::printf("%s criterion %2d: %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", n, title.c_str(), dt,
                o.detail.empty() ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
}

std::vector<std::string> three_laws(int N) { return {kAdd, kMult, lorentz_json(N)}; }

std::string law_name(const std::string& fgl) {
    if (fgl == kAdd) return "additive";
    if (fgl == kMult) return "multiplicative";
    return "Lorentz";
}

std::string where(const std::string& type, const std::string& lat, const std::string& fgl) {
    return type + " " + lat + " " + law_name(fgl);
}

QWElem scalar(const Context& C, const Series& s) { return C.qw_scalar(C.q_from(s)); }

// 1. κ_α lands in S for every root.
void kappa_membership(Outcome& o) {
    std::vector<std::pair<std::string, std::string>> data{{"A1", "ad"}, {"A2", "sc"}, {"A2", "ad"}, {"B2", "sc"}, {"B2", "ad"}};
    for (const auto& [type, lat] : data)
        for (const auto& fgl : three_laws(10)) {
            auto s = make(type, lat, fgl, "\"Z\"", 10);
            const Context& C = *s.ctx;
            for (std::size_t r = 0; r < s.rd->num_roots(); ++r) {
                QElem k = C.q_add(C.q_inv_root(r), C.q_inv_root(s.rd->negate(r)));
                if (!k.in_S()) return o.fail("κ not in S for " + where(type, lat, fgl));
                if (fgl == kAdd && !k.num.is_zero()) return o.fail("additive κ is not 0");
                if (fgl == kMult && !k.num.equals(s.S->one())) return o.fail("multiplicative κ is not 1");
            }
        }
}

// 2. δ_{s_i} = 1 - x_i X_i, Y = κ - X, associativity.
void twisted_identities(Outcome& o) {
    Rng rng(kSeed);
    for (const char* type : {"A2", "B2"})
        for (const auto& fgl : three_laws(8)) {
            auto s = make(type, "sc", fgl, "\"Z\"", 8);
            const Context& C = *s.ctx;
            for (std::size_t i = 0; i < s.rd->rank(); ++i) {
                int si = s.W->from_word(std::vector<int>{static_cast<int>(i)});
                if (!C.qw_equal(C.qw_delta(si), C.qw_sub(C.qw_delta(0), C.qw_mul(scalar(C, C.x(i)), C.demazure_X(i)))))
                    return o.fail("δ_s identity in " + where(type, "sc", fgl));
                if (!C.qw_equal(C.pushpull_Y(i), C.qw_sub(scalar(C, C.kappa(i)), C.demazure_X(i))))
                    return o.fail("Y = κ - X in " + where(type, "sc", fgl));
            }
            for (int k = 0; k < kTriples; ++k) {
                auto a = rng.qwelem(s), b = rng.qwelem(s), c = rng.qwelem(s);
                if (!C.qw_equal(C.qw_mul(C.qw_mul(a, b), c), C.qw_mul(a, C.qw_mul(b, c))))
                    return o.fail("associativity in " + where(type, "sc", fgl));
            }
        }
}

// 3. X_121 vs X_212 in A2.
void word_dependence(Outcome& o) {
    for (const auto& fgl : three_laws(10)) {
        auto s = make("A2", "sc", fgl, "\"Z\"", 10);
        const Context& C = *s.ctx;
        bool same = C.qw_equal(C.word_element(WordKind::X, {0, 1, 0}), C.word_element(WordKind::X, {1, 0, 1}));
        bool want = fgl != lorentz_json(10);
        if (same != want) return o.fail("unexpected verdict for " + law_name(fgl));
    }
}

// 4. Bott-Samelson classes land in S for all reduced words.
void bs_landing(Outcome& o, const std::string& type, const std::string& fgl) {
    auto t0 = Clock::now();
    auto s = make(type, "sc", fgl, "\"Z\"");
    for (int w = 0; w < static_cast<int>(s.W->size()); ++w)
        for (const auto& word : s.W->reduced_words(w)) {
            DualElem psi = s.dual->bott_samelson(word);
            if (!psi.in_S()) return o.fail("denominator left in " + where(type, "sc", fgl));
            if (psi.precision() < kMinCertifiedDegree)
                return o.fail("certified degree " + std::to_string(psi.precision()) + " in " + where(type, "sc", fgl));
        }
    if (since(t0) >= kLimit4PerConfig) o.fail(where(type, "sc", fgl) + " exceeded the per-configuration limit");
}

// 5. Y_α • f_w against the localization formula.
void localization_formula(Outcome& o) {
    for (const char* type : {"A2", "B2"})
        for (const auto& fgl : three_laws(8)) {
            auto s = make(type, "sc", fgl, "\"Z\"", 8);
            const Dual& D = *s.dual;
            const Context& C = *s.ctx;
            for (std::size_t i = 0; i < s.rd->rank(); ++i)
                for (int w = 0; w < static_cast<int>(s.W->size()); ++w) {
                    auto lhs = D.bullet(C.pushpull_Y(i), D.basis_vector(w));
                    auto neg = s.rd->negate(static_cast<std::size_t>(s.W->act_root(w, i)));
                    auto rhs = D.scale(C.q_inv_root(neg), D.add(D.basis_vector(w), D.basis_vector(s.W->right_simple(w, i))));
                    if (!D.equal(lhs, rhs)) return o.fail("mismatch in " + where(type, "sc", fgl));
                }
        }
}

// 6. Euler classes at fixed points.
void euler_classes(Outcome& o) {
    for (const char* type : {"A2", "B2"})
        for (const auto& fgl : three_laws(8)) {
            auto s = make(type, "sc", fgl, "\"Z\"", 8);
            const Dual& D = *s.dual;
            const Context& C = *s.ctx;
            std::size_t n = s.rd->rank();
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                Parabolic xi{mask};
                for (int w : s.W->cosets(xi).min_reps)
                    if (!D.euler_class(xi, w).holds) return o.fail("Euler class in " + where(type, "sc", fgl));
                // Aggregate form: x_{Π/Ξ} • 1_Ξ = Σ w(x_{Π/Ξ}) f_w̄.
                Series x_rel = C.root_product(C.relative_negative_roots(Parabolic::full(n), xi));
                DualElem lhs = D.bullet(scalar(C, x_rel), D.to_borel(D.parabolic_unit(xi)));
                DualElem rhs = D.zero();
                for (int w : s.W->cosets(xi).min_reps)
                    rhs = D.add(rhs, D.scale(C.q_from(s.S->act(w, x_rel)), D.to_borel(D.parabolic_basis_vector(xi, w))));
                if (!D.equal(lhs, rhs)) return o.fail("aggregate Euler identity in " + where(type, "sc", fgl));
            }
        }
}

// 7. Image criterion, exhaustive at A1/A2 adjoint additive over Z.
void image_criterion(Outcome& o) {
    for (const char* type : {"A1", "A2"}) {
        auto s = make(type, "ad", kAdd, "\"Z\"");
        const Dual& D = *s.dual;
        for (int w = 0; w < static_cast<int>(s.W->size()); ++w) {
            for (const auto& word : s.W->reduced_words(w)) {
                auto m = D.membership(D.bott_samelson(word));
                if (!m.accepted) return o.fail(std::string("ψ rejected in ") + type);
                if (m.certified_degree < 1) return o.fail("no certified degree");
            }
            if (D.membership(D.basis_vector(w)).accepted) return o.fail(std::string("f_w accepted in ") + type);
        }
        // x_λ over a box of weights, which contains every root.
        std::size_t n = s.rd->rank();
        std::vector<std::int64_t> lam(n, -2);
        while (true) {
            if (!D.membership(D.char_map(s.S->x(lam))).accepted) return o.fail(std::string("c(x_λ) rejected in ") + type);
            std::size_t k = 0;
            while (k < n && lam[k] == 2) lam[k++] = -2;
            if (k == n) break;
            ++lam[k];
        }
    }
}

// 8. δ_{s_1}-invariants equal the image of p^⋆ in A2.
void invariants(Outcome& o) {
    auto s = make("A2", "sc", kMult, "\"Z\"");
    const Dual& D = *s.dual;
    const Context& C = *s.ctx;
    Parabolic xi{1};
    Rng rng(kSeed + 8);
    auto hecke_invariant = [&](const DualElem& f) { return D.equal(D.bullet(C.qw_delta(s.W->from_word(std::vector<int>{0})), f), f); };
    std::size_t invariant_seen = 0, other_seen = 0;
    for (int k = 0; k < kInvariantSamples; ++k) {
        DualElem f;
        switch (k % 3) {
            case 0:  // a pulled-back parabolic class
                f = D.to_borel(D.p_star(D.section(D.A_parabolic(xi, Parabolic{}, rng.image_class(s)), xi), Parabolic{}));
                break;
            case 1:  // a combination of ψ classes
                f = rng.image_class(s);
                break;
            default:  // symmetrized plus noise
                f = D.add(D.A_parabolic(xi, Parabolic{}, rng.image_class(s)), D.scale(C.q_from(rng.series(s, 1, 1)), D.bs_basis(1)));
        }
        bool inv = hecke_invariant(f);
        // Image of p^⋆: some parabolic element pulls back to f.
        bool in_image = false;
        if (D.is_invariant(f, xi)) {
            ParabolicDualElem g = D.section(f, xi);
            in_image = D.equal(D.to_borel(D.p_star(g, Parabolic{})), f);
        }
        if (inv != in_image) return o.fail("sample " + std::to_string(k) + " separates the two subspaces");
        (inv ? invariant_seen : other_seen)++;
    }
    if (invariant_seen == 0 || other_seen == 0) return o.fail("samples did not exercise both cases");
    for (int w : s.W->cosets(xi).min_reps) {
        DualElem f = D.to_borel(D.p_star(D.parabolic_basis(xi, w), Parabolic{}));
        if (!hecke_invariant(f)) return o.fail("parabolic basis element not invariant");
    }
}

// 9. Pairing non-degeneracy.
void pairing(Outcome& o, const std::string& type, const std::string& lat, const std::string& fgl, const std::string& ring) {
    auto s = make(type, lat, fgl, ring);
    auto rep = s.dual->pairing_matrix(Parabolic{}, 4);
    if (!rep.symmetric) return o.fail("asymmetric matrix for " + where(type, lat, fgl));
    if (!rep.nondegenerate) return o.fail("degenerate for " + where(type, lat, fgl) + " over " + ring);
    if (type == "B2" && lat == "sc" && s.S->warnings().empty()) return o.fail("B2 sc without a warning");
    if (type == "A1" && lat == "ad" && fgl == kAdd) {
        auto x1 = s.S->variable(0);
        auto one = s.S->one();
        bool exact = rep.matrix[0][0].equals(-x1) && rep.matrix[0][1].equals(one) && rep.matrix[1][0].equals(one) &&
                     rep.matrix[1][1].is_zero();
        if (!exact) return o.fail("A1 matrix differs from [[-x1,1],[1,0]]");
    }
}

// 10. Borel presentation.
void borel(Outcome& o) {
    struct Case {
        const char* type;
        std::string fgl;
        const char* ring;
        bool surjective;
    };
    for (const auto& c : {Case{"A2", kMult, "\"Z\"", true}, Case{"A2", kAdd, "\"Q\"", true}, Case{"B2", kAdd, "\"Z\"", false}}) {
        auto s = make(c.type, "sc", c.fgl, c.ring);
        auto r = s.dual->borel_check(4);
        if (r.surjective != c.surjective) {
            std::string got = r.surjective ? "surjective" : "not surjective";
            o.fail(std::string(c.type) + " sc " + law_name(c.fgl) + " over " + c.ring + " is " + got);
        }
    }
}

// 11. Parabolic coherence and representative independence.
void coherence(Outcome& o) {
    Rng rng(kSeed + 11);
    Parabolic mid{1}, full{3};
    for (const auto& fgl : {kMult, lorentz_json(8)}) {
        auto s = make("A2", "sc", fgl, "\"Z\"", 8);
        const Dual& D = *s.dual;
        const auto& W = *s.W;
        for (int k = 0; k < kCoherenceSamples; ++k) {
            ParabolicDualElem f = D.as_parabolic(rng.image_class(s));
            auto two_step = D.push(D.push(f, mid), full);
            auto one_step = D.push(f, full);
            if (!D.parabolic_equal(two_step, one_step)) return o.fail("composition differs for " + law_name(fgl));
        }
        for (auto [xi, xp] : {std::pair{mid, Parabolic{}}, std::pair{full, mid}, std::pair{full, Parabolic{}}}) {
            const auto& fine = W.cosets(xp);
            for (int k = 0; k < kRepresentativeChoices; ++k) {
                std::vector<int> reps;
                for (int r : W.relative_reps(xi, xp))
                    reps.push_back(W.mul(r, fine.subgroup[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(fine.subgroup.size()) - 1))]));
                ParabolicDualElem g = D.section(D.A_parabolic(xp, Parabolic{}, rng.image_class(s)), xp);
                if (!D.parabolic_equal(D.push(g, xi, &reps), D.push(g, xi)))
                    return o.fail("representative choice changes the result for " + law_name(fgl));
            }
        }
    }
}

// 12. Two CLI runs over every example job give identical bytes.
std::string slurp(const fsys::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism(Outcome& o) {
    auto dir = fsys::temp_directory_path() / ("fs_acceptance_" + std::to_string(::getpid()));
    fsys::create_directories(dir);
    std::vector<fsys::path> jobs;
    for (const auto& e : fsys::directory_iterator(fsys::path(FS_SOURCE_DIR) / "examples" / "jobs"))
        if (e.path().extension() == ".json") jobs.push_back(e.path());
    std::sort(jobs.begin(), jobs.end());
    if (jobs.empty()) return o.fail("no example jobs found");
    auto run_all = [&](const std::string& tag) {
        std::string all;
        for (const auto& j : jobs) {
            auto out = dir / (j.stem().string() + "." + tag);
            std::string cmd = "\"" + std::string(FS_CLI) + "\" run \"" + j.string() + "\" --threads 4 > \"" + out.string() + "\" 2>&1";
            int rc = std::system(cmd.c_str());
            all += j.filename().string() + " exit " + std::to_string(WIFEXITED(rc) ? WEXITSTATUS(rc) : -1) + "\n" + slurp(out);
        }
        return all;
    };
    std::string first = run_all("a"), second = run_all("b");
    fsys::remove_all(dir);
    if (first != second) o.fail("outputs differ between runs");
}

} // namespace

int main() {
    report(1, "kappa lies in S (0 additive, 1 multiplicative)", kappa_membership, kLimit1);
    report(2, "twisted group algebra identities and associativity", twisted_identities, kLimit2);
    report(3, "X_121 vs X_212 word (in)dependence", word_dependence, kLimit3);
    report(4, "Bott-Samelson classes land in S with certified degree >= 4", [](Outcome& o) {
        for (const char* type : {"A2", "B2"})
            for (const auto& fgl : three_laws(default_truncation(*RootDatum::from_type(type, LatticeKind::SimplyConnected))))
                bs_landing(o, type, fgl);
    }, 0);
    report(5, "push-pull localization formula", localization_formula, kLimit5);
    report(6, "fixed-point Euler classes", euler_classes, kLimit6);
    report(7, "image criterion accepts classes and rejects f_w", image_criterion, kLimit7);
    report(8, "invariants equal the image of p^*", invariants, kLimit8);
    report(9, "pairing matrices are non-degenerate", [](Outcome& o) {
        for (const auto& fgl : {kAdd, kMult}) {
            pairing(o, "A1", "ad", fgl, "\"Z\"");
            pairing(o, "A2", "ad", fgl, "\"Z\"");
            pairing(o, "A2", "sc", fgl, "\"Z\"");
            auto t0 = Clock::now();
            pairing(o, "B2", "sc", fgl, "\"Z\"");
            if (since(t0) >= kLimit9B2) o.fail("B2 " + law_name(fgl) + " exceeded its limit");
        }
    }, 0);
    report(10, "Borel presentation surjectivity at D = 4", borel, kLimit10);
    report(11, "parabolic coherence and representative independence", coherence, kLimit11);
    report(12, "byte-identical CLI output across two runs", determinism, 0);
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
