#include "fschubert/io.hpp"

#include <chrono>
#include <fstream>
#include <set>

#include "fschubert/errors.hpp"

namespace fschubert {

namespace {

const std::set<std::string> kConfigKeys = {"type", "lattice", "simple_roots", "simple_coroots",
                                           "fgl",  "ring",    "trunc",        "command"};

const std::map<std::string, std::set<std::string>> kCommandArgs = {
    {"weyl-table", {"xi"}},
    {"bs-class", {"word"}},
    {"parabolic-class", {"xi", "word"}},
    {"multiply", {"classes"}},
    {"structure-constants", {"u", "v"}},
    {"pairing-matrix", {"xi"}},
    {"membership", {"class"}},
    {"invariants", {"class", "xi"}},
    {"char-map", {"series", "weight"}},
    {"borel-check", {"degree"}},
    {"verify", {}},
};

[[noreturn]] void bad(const std::string& msg) { throw ValidationError(msg); }

std::string ring_value_string(const Json& j, const char* what) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    bad(std::string(what) + " must be a string or an integer");
}

int get_int(const Json& j, const char* what) {
    if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
    return j.get<int>();
}

Json read_json_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) bad("cannot open " + p.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        bad("malformed JSON in " + p.string() + ": " + e.what());
    }
}

Json roots_to_json(const RootDatum& rd, std::size_t idx) { return rd.root(idx).simple; }

FglPtr parse_fgl(const Json& j, const RingPtr& R, int N) {
    if (j.is_string()) {
        if (j.get<std::string>() == "additive") return FormalGroupLaw::additive(R, N);
        bad("unknown formal group law '" + j.get<std::string>() + "'");
    }
    if (!j.is_object() || j.size() != 1) bad("fgl must be \"additive\", {\"multiplicative\": b} or {\"custom\": [...]}");
    const auto& [key, val] = *j.items().begin();
    if (key == "multiplicative") return FormalGroupLaw::multiplicative(R, N, R->parse(ring_value_string(val, "beta")));
    if (key == "custom") {
        if (!val.is_array()) bad("custom table must be a list of [i, j, coefficient]");
        std::vector<std::tuple<int, int, RingValue>> table;
        for (const auto& e : val) {
            if (!e.is_array() || e.size() != 3) bad("custom table entries are [i, j, coefficient]");
            table.emplace_back(get_int(e[0], "i"), get_int(e[1], "j"), R->parse(ring_value_string(e[2], "coefficient")));
        }
        return FormalGroupLaw::custom(R, N, table);
    }
    bad("unknown formal group law key '" + key + "'");
}

} // namespace

int default_truncation(const RootDatum& rd) { return static_cast<int>(2 * rd.num_positive()) + 2; }

RingPtr parse_ring(const Json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "Z") return Ring::integers();
        if (s == "Q") return Ring::rationals();
        bad("unknown ring '" + s + "'");
    }
    if (j.is_object() && j.size() == 1) {
        if (j.contains("Zmod")) {
            const auto& m = j["Zmod"];
            mpz_class mod(ring_value_string(m, "modulus"));
            return Ring::integers_mod(mod);
        }
        if (j.contains("ZPoly")) {
            if (!j["ZPoly"].is_array()) bad("ZPoly expects a list of variable names");
            return Ring::polynomials(j["ZPoly"].get<std::vector<std::string>>());
        }
    }
    bad("ring must be \"Z\", \"Q\", {\"Zmod\": m} or {\"ZPoly\": [names]}");
}

RootDatumPtr parse_root_datum(const Json& job) {
    bool by_type = job.contains("type");
    bool by_matrix = job.contains("simple_roots") || job.contains("simple_coroots");
    if (by_type == by_matrix) bad("give either \"type\" (with \"lattice\") or \"simple_roots\" and \"simple_coroots\"");
    if (by_type) {
        if (!job["type"].is_string()) bad("type must be a Dynkin label such as \"A2\"");
        std::string lat = job.value("lattice", std::string("sc"));
        LatticeKind kind;
        if (lat == "sc") kind = LatticeKind::SimplyConnected;
        else if (lat == "ad") kind = LatticeKind::Adjoint;
        else bad("lattice must be \"sc\" or \"ad\"");
        return RootDatum::from_type(job["type"].get<std::string>(), kind);
    }
    if (job.contains("lattice")) bad("\"lattice\" only applies together with \"type\"");
    if (!job.contains("simple_roots") || !job.contains("simple_coroots"))
        bad("explicit root data needs both simple_roots and simple_coroots");
    try {
        auto roots = job["simple_roots"].get<std::vector<LatticeVector>>();
        auto coroots = job["simple_coroots"].get<std::vector<LatticeVector>>();
        return RootDatum::from_matrices(roots, coroots);
    } catch (const Json::exception&) {
        bad("simple_roots and simple_coroots must be integer matrices");
    }
}

Setup build_setup(const Json& job, const RunOptions& opts) {
    if (!job.is_object()) bad("job must be a JSON object");
    Setup s;
    s.rd = parse_root_datum(job);
    s.W = std::make_shared<const WeylGroup>(s.rd);
    if (opts.trunc) s.N = *opts.trunc;
    else if (job.contains("trunc")) s.N = get_int(job["trunc"], "trunc");
    else s.N = default_truncation(*s.rd);
    RingPtr R = parse_ring(job.value("ring", Json("Z")));
    s.F = parse_fgl(job.value("fgl", Json("additive")), R, s.N);
    s.S = std::make_shared<const FormalGroupAlgebra>(s.W, s.F);
    s.ctx = std::make_shared<const Context>(s.S);
    s.dual = std::make_shared<Dual>(s.ctx);

    Json& e = s.echo;
    if (job.contains("type")) {
        e["type"] = job["type"];
        e["lattice"] = job.value("lattice", std::string("sc"));
    } else {
        e["simple_roots"] = job["simple_roots"];
        e["simple_coroots"] = job["simple_coroots"];
    }
    e["dynkin"] = s.rd->label();
    e["ring"] = job.value("ring", Json("Z"));
    e["fgl"] = job.value("fgl", Json("additive"));
    e["trunc"] = s.N;
    return s;
}

// ---------------------------------------------------------------------------

Json word_to_json(const std::vector<int>& word) {
    Json j = Json::array();
    for (int i : word) j.push_back(i + 1);
    return j;
}

std::vector<int> word_from_json(const Json& j, std::size_t rank) {
    if (!j.is_array()) bad("a word is a list of 1-based simple-root indices");
    std::vector<int> w;
    for (const auto& x : j) {
        int i = get_int(x, "word letter");
        if (i < 1 || static_cast<std::size_t>(i) > rank)
            bad("word letter " + std::to_string(i) + " outside 1.." + std::to_string(rank));
        w.push_back(i - 1);
    }
    return w;
}

Parabolic parabolic_from_json(const Json& j, std::size_t rank) {
    if (!j.is_array()) bad("a parabolic subset is a list of 1-based simple-root indices");
    Parabolic xi;
    for (const auto& x : j) {
        int i = get_int(x, "parabolic index");
        if (i < 1 || static_cast<std::size_t>(i) > rank)
            bad("parabolic index " + std::to_string(i) + " outside 1.." + std::to_string(rank));
        if (xi.contains(static_cast<std::size_t>(i - 1))) bad("parabolic index " + std::to_string(i) + " repeated");
        xi.mask |= 1u << (i - 1);
    }
    return xi;
}

Json parabolic_to_json(Parabolic xi) {
    Json j = Json::array();
    for (int i : xi.indices()) j.push_back(i + 1);
    return j;
}

Json series_to_json(const Series& s) {
    Json terms = Json::array();
    for (const auto& [m, c] : s.terms()) {
        Json e = Json::array();
        for (std::size_t i = 0; i < s.nvars(); ++i) e.push_back(m.e[i]);
        terms.push_back(Json::array({e, s.ring()->format(c)}));
    }
    return Json{{"terms", terms}, {"precision", s.precision()}};
}

Series series_from_json(const Json& j, const FormalGroupAlgebra& S) {
    if (!j.is_object()) bad("a series is {\"terms\": [[exponents, coefficient], ...], \"precision\": p}");
    for (const auto& [k, v] : j.items())
        if (k != "terms" && k != "precision") bad("unknown key '" + k + "' in series");
    int p = j.contains("precision") ? get_int(j["precision"], "precision") : S.truncation();
    if (p < 0 || p > S.truncation()) bad("series precision must lie in 0..N");
    std::vector<Series::Term> terms;
    for (const auto& t : j.value("terms", Json::array())) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_array()) bad("series terms are [exponents, coefficient]");
        if (t[0].size() != S.nvars()) bad("exponent vector length differs from the rank");
        Monomial m;
        for (std::size_t i = 0; i < S.nvars(); ++i) {
            int e = get_int(t[0][i], "exponent");
            if (e < 0 || e > 255) bad("exponent out of range");
            m.e[i] = static_cast<std::uint8_t>(e);
            m.deg = static_cast<std::uint16_t>(m.deg + e);
        }
        terms.emplace_back(m, S.ring()->parse(ring_value_string(t[1], "coefficient")));
    }
    return Series::from_terms(S.ring(), S.nvars(), p, std::move(terms));
}

Json qelem_to_json(const QElem& q, const Context& ctx) {
    if (q.in_S()) return series_to_json(q.num);
    Json den = Json::array();
    for (std::size_t b = 0; b < q.den.size(); ++b)
        if (q.den[b]) den.push_back(Json::array({roots_to_json(ctx.rd(), b), q.den[b]}));
    return Json{{"num", series_to_json(q.num)}, {"den", den}};
}

Json qwelem_to_json(const QWElem& z, const Context& ctx) {
    Json out = Json::array();
    for (const auto& [w, q] : z.terms) {
        Json den = Json::array();
        for (std::size_t b = 0; b < q.den.size(); ++b)
            if (q.den[b]) den.push_back(Json::array({roots_to_json(ctx.rd(), b), q.den[b]}));
        out.push_back(Json::array({word_to_json(ctx.W()[static_cast<std::size_t>(w)].word), series_to_json(q.num), den}));
    }
    return out;
}

namespace {

Json coeff_list(const std::vector<QElem>& c, const std::vector<int>& labels, const Dual& D, int& precision) {
    Json out = Json::array();
    precision = INT_MAX;
    for (std::size_t k = 0; k < c.size(); ++k) {
        precision = std::min(precision, c[k].precision());
        if (c[k].is_zero()) continue;
        out.push_back(
            Json::array({word_to_json(D.W()[static_cast<std::size_t>(labels[k])].word), qelem_to_json(c[k], D.ctx())}));
    }
    return out;
}

std::vector<int> all_elements(const WeylGroup& W) {
    std::vector<int> v(W.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
}

} // namespace

Json class_to_json(const DualElem& f, const Dual& D) {
    int p = 0;
    Json coeffs = coeff_list(f.c, all_elements(D.W()), D, p);
    return Json{{"model", "borel"}, {"coeffs", coeffs}, {"precision", p}};
}

Json class_to_json(const ParabolicDualElem& g, const Dual& D) {
    if (g.xi.empty()) return class_to_json(DualElem{g.c}, D);
    int p = 0;
    Json coeffs = coeff_list(g.c, D.W().cosets(g.xi).min_reps, D, p);
    return Json{{"model", Json{{"parabolic", parabolic_to_json(g.xi)}}}, {"coeffs", coeffs}, {"precision", p}};
}

ParabolicDualElem class_from_json(const Json& j, const Dual& D) {
    if (!j.is_object()) bad("a class is {\"model\": ..., \"coeffs\": [[word, series], ...], \"precision\": p}");
    for (const auto& [k, v] : j.items())
        if (k != "model" && k != "coeffs" && k != "precision") bad("unknown key '" + k + "' in class");
    const auto& S = D.ctx().S();
    const std::size_t rank = D.ctx().rd().rank();
    Parabolic xi;
    const Json model = j.value("model", Json("borel"));
    if (model.is_object() && model.size() == 1 && model.contains("parabolic"))
        xi = parabolic_from_json(model["parabolic"], rank);
    else if (model != Json("borel"))
        bad("class model must be \"borel\" or {\"parabolic\": [...]}");
    int cap = j.contains("precision") ? get_int(j["precision"], "precision") : S.truncation();
    if (cap < 0 || cap > S.truncation()) bad("class precision must lie in 0..N");
    const auto& table = D.W().cosets(xi);
    ParabolicDualElem g = D.parabolic_zero(xi);
    for (auto& q : g.c) q.num = q.num.truncated(cap);
    std::vector<bool> seen(g.c.size(), false);
    for (const auto& e : j.value("coeffs", Json::array())) {
        if (!e.is_array() || e.size() != 2) bad("class coefficients are [word, series]");
        int w = D.W().from_word(word_from_json(e[0], rank));
        int pos = table.position[static_cast<std::size_t>(w)];
        if (pos < 0) bad("word " + e[0].dump() + " is not a minimal coset representative for this model");
        if (seen[static_cast<std::size_t>(pos)]) bad("element " + e[0].dump() + " listed twice");
        seen[static_cast<std::size_t>(pos)] = true;
        g.c[static_cast<std::size_t>(pos)] = D.ctx().q_from(series_from_json(e[1], S).truncated(cap));
    }
    return g;
}

// ---------------------------------------------------------------------------

namespace {

ParabolicDualElem load_class(const Json& j, const Dual& D, const RunOptions& opts) {
    if (j.is_string()) {
        std::filesystem::path p = j.get<std::string>();
        if (p.is_relative()) p = opts.base_dir / p;
        return class_from_json(read_json_file(p), D);
    }
    return class_from_json(j, D);
}

const Json& need(const Json& job, const char* key) {
    if (!job.contains(key)) bad(std::string("command '") + job["command"].get<std::string>() + "' needs \"" + key + "\"");
    return job[key];
}

Json membership_json(const MembershipResult& m, const Dual& D) {
    Json r{{"verdict", m.accepted ? "accept" : "reject"}};
    if (m.accepted) {
        r["certified_degree"] = m.certified_degree == INT_MAX ? Json(nullptr) : Json(m.certified_degree);
    } else {
        r["witness"] = Json{{"root", roots_to_json(D.ctx().rd(), static_cast<std::size_t>(m.witness_root))},
                            {"w", word_to_json(D.W()[static_cast<std::size_t>(m.witness_w)].word)}};
    }
    return r;
}

Json basis_json(const BasisSolveResult& b, const Dual& D) {
    if (!b.in_image)
        return Json{{"in_image", false},
                    {"failed_at", word_to_json(D.W()[static_cast<std::size_t>(b.failed_at)].word)}};
    Json coeffs = Json::array();
    for (const auto& [w, c] : b.coeffs)
        coeffs.push_back(Json::array({word_to_json(D.W()[static_cast<std::size_t>(w)].word), series_to_json(c)}));
    return Json{{"in_image", true},
                {"coeffs", coeffs},
                {"certified_degree", b.certified_degree == INT_MAX ? Json(nullptr) : Json(b.certified_degree)}};
}

Json cmd_weyl_table(const Json& job, const Setup& s) {
    const auto& W = *s.W;
    Json rows = Json::array();
    for (std::size_t w = 0; w < W.size(); ++w) {
        Json m = Json::array();
        for (std::size_t r = 0; r < W[w].matrix.rows(); ++r) m.push_back(W[w].matrix.row(r));
        rows.push_back(Json{{"word", word_to_json(W[w].word)}, {"length", W[w].length()}, {"matrix", m}});
    }
    Json out{{"order", W.size()}, {"longest_length", W.length(W.longest())}, {"elements", rows}};
    Json pos = Json::array();
    for (std::size_t r = 0; r < s.rd->num_positive(); ++r) pos.push_back(s.rd->root(r).simple);
    out["positive_roots"] = pos;
    if (job.contains("xi")) {
        Parabolic xi = parabolic_from_json(job["xi"], s.rd->rank());
        Json reps = Json::array();
        for (int w : W.cosets(xi).min_reps) reps.push_back(word_to_json(W[static_cast<std::size_t>(w)].word));
        out["min_coset_reps"] = reps;
    }
    return out;
}

Json cmd_bs_class(const Json& job, const Setup& s) {
    auto word = word_from_json(need(job, "word"), s.rd->rank());
    DualElem f = s.dual->bott_samelson(word);
    MembershipResult m = s.dual->membership(f);
    return Json{{"class", class_to_json(f, *s.dual)}, {"membership", membership_json(m, *s.dual)}};
}

Json cmd_parabolic_class(const Json& job, const Setup& s) {
    Parabolic xi = parabolic_from_json(need(job, "xi"), s.rd->rank());
    auto word = word_from_json(need(job, "word"), s.rd->rank());
    ParabolicDualElem g = s.dual->parabolic_class(xi, word);
    return Json{{"class", class_to_json(g, *s.dual)}, {"certified_degree", g.precision()}};
}

Json cmd_multiply(const Json& job, const Setup& s, const RunOptions& opts) {
    const Json& list = need(job, "classes");
    if (!list.is_array() || list.size() < 2) bad("\"classes\" needs at least two classes");
    ParabolicDualElem acc = load_class(list[0], *s.dual, opts);
    for (std::size_t k = 1; k < list.size(); ++k) acc = s.dual->parabolic_mul(acc, load_class(list[k], *s.dual, opts));
    return Json{{"class", class_to_json(acc, *s.dual)}, {"certified_degree", acc.precision()}};
}

Json cmd_structure_constants(const Json& job, const Setup& s) {
    const auto& W = *s.W;
    std::vector<int> us, vs;
    auto pick = [&](const char* key, std::vector<int>& out) {
        if (job.contains(key)) out.push_back(W.from_word(word_from_json(job[key], s.rd->rank())));
        else out = all_elements(W);
    };
    pick("u", us);
    pick("v", vs);
    Json rows = Json::array();
    int cert = INT_MAX;
    for (int u : us)
        for (int v : vs) {
            DualElem prod = s.dual->mul(s.dual->bs_basis(u), s.dual->bs_basis(v));
            BasisSolveResult b = s.dual->to_bs_basis(prod);
            if (!b.in_image) throw ArithmeticError("product of basis classes left the image");
            cert = std::min(cert, b.certified_degree);
            Json r = basis_json(b, *s.dual);
            r.erase("in_image");
            r["u"] = word_to_json(W[static_cast<std::size_t>(u)].word);
            r["v"] = word_to_json(W[static_cast<std::size_t>(v)].word);
            rows.push_back(std::move(r));
        }
    return Json{{"products", rows}, {"certified_degree", cert == INT_MAX ? Json(nullptr) : Json(cert)}};
}

Json cmd_pairing_matrix(const Json& job, const Setup& s, const RunOptions& opts) {
    Parabolic xi = job.contains("xi") ? parabolic_from_json(job["xi"], s.rd->rank()) : Parabolic{};
    PairingReport rep = s.dual->pairing_matrix(xi, opts.threads);
    Json basis = Json::array();
    for (int w : rep.basis) basis.push_back(word_to_json(s.W->operator[](static_cast<std::size_t>(w)).word));
    Json m = Json::array();
    for (const auto& row : rep.matrix) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(series_to_json(e));
        m.push_back(std::move(r));
    }
    return Json{{"xi", parabolic_to_json(xi)},
                {"basis", basis},
                {"matrix", m},
                {"determinant", rep.determinant ? series_to_json(*rep.determinant) : Json(nullptr)},
                {"det_augmentation", s.F->ring()->format(rep.det_augmentation)},
                {"symmetric", rep.symmetric},
                {"verdict", rep.nondegenerate ? "non-degenerate" : "degenerate"},
                {"certified_degree", rep.precision}};
}

Json cmd_membership(const Json& job, const Setup& s, const RunOptions& opts) {
    ParabolicDualElem g = load_class(need(job, "class"), *s.dual, opts);
    DualElem f = s.dual->to_borel(g);
    return membership_json(s.dual->membership(f), *s.dual);
}

Json cmd_invariants(const Json& job, const Setup& s, const RunOptions& opts) {
    ParabolicDualElem g = load_class(need(job, "class"), *s.dual, opts);
    Parabolic xi = parabolic_from_json(need(job, "xi"), s.rd->rank());
    DualElem f = s.dual->to_borel(g);
    auto wit = s.dual->invariance_witness(f, xi);
    Json out{{"xi", parabolic_to_json(xi)}, {"invariant", !wit}};
    if (wit) {
        out["witness"] = Json{{"simple", wit->first + 1},
                              {"w", word_to_json(s.W->operator[](static_cast<std::size_t>(wit->second)).word)}};
    } else {
        out["section"] = class_to_json(s.dual->section(f, xi), *s.dual);
    }
    return out;
}

Json cmd_char_map(const Json& job, const Setup& s) {
    if (job.contains("series") == job.contains("weight")) bad("char-map takes exactly one of \"series\" or \"weight\"");
    Series x;
    if (job.contains("series")) {
        x = series_from_json(job["series"], *s.S);
    } else {
        LatticeVector lambda;
        try {
            lambda = job["weight"].get<LatticeVector>();
        } catch (const Json::exception&) {
            bad("weight must be an integer vector");
        }
        if (lambda.size() != s.rd->rank()) bad("weight length differs from the rank");
        x = s.S->x(lambda);
    }
    DualElem f = s.dual->char_map(x);
    return Json{{"class", class_to_json(f, *s.dual)}, {"membership", membership_json(s.dual->membership(f), *s.dual)}};
}

Json cmd_borel_check(const Json& job, const Setup& s) {
    int D = job.contains("degree") ? get_int(job["degree"], "degree") : std::min(4, s.N);
    BorelReport rep = s.dual->borel_check(D);
    Json inv = Json::array();
    for (const auto& d : rep.invariant_factors) inv.push_back(d.get_str());
    Json out{{"degree_bound", rep.degree_bound},
             {"generators", rep.generators},
             {"basis_size", rep.basis_size},
             {"rank", rep.rank},
             {"invariant_factors", inv},
             {"surjective", rep.surjective},
             {"cokernel", rep.cokernel},
             {"torsion_primes", rep.torsion_primes},
             {"table_prediction", rep.table_prediction ? Json(*rep.table_prediction) : Json(nullptr)},
             {"certified_degree", rep.certified_degree == INT_MAX ? Json(nullptr) : Json(rep.certified_degree)}};
    return out;
}

} // namespace

Json run_job(const Json& job, const RunOptions& opts) {
    auto start = std::chrono::steady_clock::now();
    if (!job.is_object()) bad("job must be a JSON object");
    if (!job.contains("command") || !job["command"].is_string()) bad("job needs a \"command\" string");
    const std::string cmd = job["command"].get<std::string>();
    auto it = kCommandArgs.find(cmd);
    if (it == kCommandArgs.end()) bad("unknown command '" + cmd + "'");
    for (const auto& [k, v] : job.items())
        if (!kConfigKeys.count(k) && !it->second.count(k))
            bad("unknown key '" + k + "' for command '" + cmd + "'");

    Setup s = build_setup(job, opts);
    Json result;
    try {
    if (cmd == "weyl-table") result = cmd_weyl_table(job, s);
    else if (cmd == "bs-class") result = cmd_bs_class(job, s);
    else if (cmd == "parabolic-class") result = cmd_parabolic_class(job, s);
    else if (cmd == "multiply") result = cmd_multiply(job, s, opts);
    else if (cmd == "structure-constants") result = cmd_structure_constants(job, s);
    else if (cmd == "pairing-matrix") result = cmd_pairing_matrix(job, s, opts);
    else if (cmd == "membership") result = cmd_membership(job, s, opts);
    else if (cmd == "invariants") result = cmd_invariants(job, s, opts);
    else if (cmd == "char-map") result = cmd_char_map(job, s);
    else if (cmd == "borel-check") result = cmd_borel_check(job, s);
    else result = run_verify(s, opts);
    } catch (const PrecisionError& e) {
        throw PrecisionError(std::string(e.what()) + " (N = " + std::to_string(s.N) + ", required N >= " +
                                 std::to_string(s.N + e.needed()) + ")",
                             e.needed());
    }

    Json echo = s.echo;
    echo["command"] = cmd;
    for (const auto& k : it->second)
        if (job.contains(k)) echo[k] = job[k];
    std::vector<std::string> warnings = s.S->warnings();
    for (const auto& w : s.ctx->warnings())
        if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    Json out{{"job", echo}, {"result", result}, {"warnings", warnings}};
    if (opts.timing) {
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        out["timing"] = Json{{"seconds", dt.count()}};
    }
    return out;
}

namespace {

bool has_object(const Json& j) {
    if (j.is_object()) return true;
    if (j.is_array())
        for (const auto& e : j)
            if (has_object(e)) return true;
    return false;
}

void dump_into(const Json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(k).dump() + ": ";
            dump_into(v, indent + 2, out);
        }
        out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
    } else if (j.is_array() && !j.empty()) {
        std::string flat = j.dump();
        if (!has_object(j) && flat.size() + static_cast<std::size_t>(indent) <= 100) {
            out += flat;
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump_into(j[i], indent + 2, out);
        }
        out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
    } else {
        out += j.dump();
    }
}

} // namespace

std::string dump_canonical(const Json& j) {
    std::string out;
    dump_into(j, 0, out);
    out += "\n";
    return out;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return 2;
    if (dynamic_cast<const ArithmeticError*>(&e)) return 3;
    if (dynamic_cast<const ResourceError*>(&e)) return 4;
    if (dynamic_cast<const Json::exception*>(&e)) return 2;
    return 1;
}

} // namespace fschubert
