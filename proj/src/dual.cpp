#include "fschubert/dual.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "fschubert/errors.hpp"

namespace fschubert {

int DualElem::precision() const {
    int p = INT_MAX;
    for (const auto& q : c) p = std::min(p, q.precision());
    return p;
}

bool DualElem::in_S() const {
    return std::all_of(c.begin(), c.end(), [](const QElem& q) { return q.in_S(); });
}

int ParabolicDualElem::precision() const {
    int p = INT_MAX;
    for (const auto& q : c) p = std::min(p, q.precision());
    return p;
}

bool ParabolicDualElem::in_S() const {
    return std::all_of(c.begin(), c.end(), [](const QElem& q) { return q.in_S(); });
}

Dual::Dual(ContextPtr ctx) : ctx_(std::move(ctx)) {}

DualElem Dual::zero() const { return DualElem{std::vector<QElem>(W().size(), ctx_->q_zero())}; }

DualElem Dual::unit() const { return DualElem{std::vector<QElem>(W().size(), ctx_->q_one())}; }

DualElem Dual::basis_vector(int w) const {
    DualElem f = zero();
    f.c.at(static_cast<std::size_t>(w)) = ctx_->q_one();
    return f;
}

DualElem Dual::from_series(const std::vector<Series>& coeffs) const {
    if (coeffs.size() != W().size()) throw UsageError("class needs one coefficient per Weyl element");
    DualElem f;
    for (const auto& s : coeffs) f.c.push_back(ctx_->q_from(s));
    return f;
}

std::vector<Series> Dual::to_series(const DualElem& f) const {
    std::vector<Series> out;
    for (const auto& q : f.c) {
        if (!q.in_S()) throw ArithmeticError("coefficient does not lie in S");
        out.push_back(q.num);
    }
    return out;
}

bool Dual::equal(const DualElem& a, const DualElem& b) const {
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!ctx_->q_equal(a.c[i], b.c[i])) return false;
    return true;
}

DualElem Dual::add(const DualElem& a, const DualElem& b) const {
    DualElem r;
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c.push_back(ctx_->q_add(a.c[i], b.c[i]));
    return r;
}

DualElem Dual::sub(const DualElem& a, const DualElem& b) const {
    DualElem r;
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c.push_back(ctx_->q_sub(a.c[i], b.c[i]));
    return r;
}

DualElem Dual::mul(const DualElem& a, const DualElem& b) const {
    DualElem r;
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c.push_back(ctx_->q_mul(a.c[i], b.c[i]));
    return r;
}

DualElem Dual::scale(const QElem& q, const DualElem& f) const {
    DualElem r;
    for (const auto& c : f.c) r.c.push_back(ctx_->q_mul(q, c));
    return r;
}

DualElem Dual::bullet(const QWElem& z, const DualElem& f) const {
    // (z • f)_u = Σ_v u(q_v) f_{uv}
    DualElem r = zero();
    // Terms dropped from z are known only above z.floor; scale that by the
    // lowest degree occurring in f.
    int bound = INT_MAX;
    if (z.floor != INT_MAX) {
        int v = INT_MAX;
        for (const auto& q : f.c) v = std::min(v, q.num.valuation() - q.den_degree());
        if (v != INT_MAX) bound = z.floor + v;
    }
    for (std::size_t u = 0; u < W().size(); ++u) {
        QElem acc = ctx_->q_zero();
        bool first = true;
        for (const auto& [v, q] : z.terms) {
            const QElem& fv = f.c[static_cast<std::size_t>(W().mul(static_cast<int>(u), v))];
            if (fv.is_zero() && fv.den_degree() == 0 && fv.precision() >= ctx_->truncation()) continue;
            QElem t = ctx_->q_mul(ctx_->q_act(static_cast<int>(u), q), fv);
            acc = first ? t : ctx_->q_add(acc, t);
            first = false;
        }
        if (bound != INT_MAX) acc.num = acc.num.truncated(std::max(0, bound + acc.den_degree()));
        r.c[u] = std::move(acc);
    }
    return r;
}

DualElem Dual::A_simple(std::size_t i, const DualElem& f) const {
    // A_α(f)_u = f_u / x_{-u(α)} + f_{u s} / x_{u(α)}
    DualElem r;
    const auto& rd = ctx_->rd();
    for (std::size_t u = 0; u < W().size(); ++u) {
        auto ua = static_cast<std::size_t>(W().act_root(static_cast<int>(u), i));
        auto us = static_cast<std::size_t>(W().right_simple(static_cast<int>(u), i));
        QElem t1 = ctx_->q_mul(f.c[u], ctx_->q_inv_root(rd.negate(ua)));
        QElem t2 = ctx_->q_mul(f.c[us], ctx_->q_inv_root(ua));
        r.c.push_back(ctx_->q_add(t1, t2));
    }
    return r;
}

DualElem Dual::A_word(const std::vector<int>& word, const DualElem& f) const {
    DualElem r = f;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it < 0 || static_cast<std::size_t>(*it) >= ctx_->rd().rank())
            throw ValidationError("word letter out of range: " + std::to_string(*it + 1));
        r = A_simple(static_cast<std::size_t>(*it), r);
    }
    return r;
}

DualElem Dual::A_parabolic(Parabolic xi, Parabolic xi_prime, const DualElem& f, const std::vector<int>* reps) const {
    if (!xi_prime.subset_of(xi)) throw UsageError("Ξ' must be a subset of Ξ");
    if (auto wit = invariance_witness(f, xi_prime))
        throw UsageError("input to A_{Xi/Xi'} is not invariant under s_" + std::to_string(wit->first + 1) +
                         " (domain is the W_Xi'-invariants)");
    return bullet(ctx_->pushpull_parabolic(xi, xi_prime, reps), f);
}

DualElem Dual::bott_samelson(const std::vector<int>& word) const {
    DualElem f = zero();
    f.c[0] = ctx_->q_from(ctx_->x_pi());
    for (int i : word) {
        if (i < 0 || static_cast<std::size_t>(i) >= ctx_->rd().rank())
            throw ValidationError("word letter out of range: " + std::to_string(i + 1));
        f = A_simple(static_cast<std::size_t>(i), f);
    }
    // ψ_I starts in degree #Σ⁻ - |I|; below that the result certifies nothing.
    int degree = static_cast<int>(ctx_->num_positive()) - static_cast<int>(word.size());
    if (f.precision() < degree)
        throw PrecisionError("Bott-Samelson class computed only to degree " + std::to_string(f.precision()) +
                                 ", below its degree " + std::to_string(degree),
                             degree - f.precision());
    for (std::size_t u = 0; u < f.c.size(); ++u)
        if (!f.c[u].in_S())
            throw PrecisionError("Bott-Samelson coefficient at element " + std::to_string(u) +
                                     " kept a denominator; the truncation N is too small",
                                 f.c[u].den_degree());
    return f;
}

const DualElem& Dual::bs_basis(int w) const {
    {
        std::lock_guard lock(mutex_);
        auto it = bs_cache_.find(w);
        if (it != bs_cache_.end()) return it->second;
    }
    DualElem f = bott_samelson(W()[static_cast<std::size_t>(w)].word);
    std::lock_guard lock(mutex_);
    return bs_cache_.emplace(w, std::move(f)).first->second;
}

std::vector<std::size_t> Dual::bs_lead_factors(int w, Parabolic xi) const {
    const auto& rd = ctx_->rd();
    std::vector<bool> drop(rd.num_roots(), false);
    int prefix = 0;
    for (int i : W()[static_cast<std::size_t>(w)].word) {
        auto beta = static_cast<std::size_t>(W().act_root(prefix, static_cast<std::size_t>(i)));
        drop[rd.negate(beta)] = true;
        prefix = W().right_simple(prefix, static_cast<std::size_t>(i));
    }
    for (auto r : W().positive_roots_in(xi))
        drop[static_cast<std::size_t>(W().act_root(w, rd.negate(r)))] = true;
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < rd.num_positive(); ++b) {
        std::size_t nb = rd.negate(b);
        if (!drop[nb]) out.push_back(nb);
    }
    return out;
}

DualElem Dual::char_map(const Series& s) const {
    DualElem f;
    for (std::size_t w = 0; w < W().size(); ++w) f.c.push_back(ctx_->q_from(ctx_->S().act(static_cast<int>(w), s)));
    return f;
}

MembershipResult Dual::membership(const DualElem& f) const {
    MembershipResult res;
    auto q = to_series(f);
    const auto& rd = ctx_->rd();
    for (std::size_t a = 0; a < rd.num_positive(); ++a) {
        int refl = W().reflection(a);
        for (std::size_t w = 0; w < W().size(); ++w) {
            auto sw = static_cast<std::size_t>(W().mul(refl, static_cast<int>(w)));
            if (sw < w) continue;  // the pair (s_α w, w) gives the same difference up to sign
            Series d = q[w] - q[sw];
            if (d.precision() < 1)
                throw PrecisionError("membership test needs precision at least 1", 1 - d.precision());
            auto h = ctx_->S().divide_by_root(d, a);
            if (!h) {
                res.accepted = false;
                res.witness_root = static_cast<int>(a);
                res.witness_w = static_cast<int>(w);
                return res;
            }
            res.certified_degree = std::min(res.certified_degree, h->precision());
        }
    }
    return res;
}

BasisSolveResult Dual::triangular_solve(const std::vector<QElem>& f, const std::vector<int>& labels,
                                        const std::vector<const std::vector<QElem>*>& basis,
                                        const std::vector<std::vector<std::size_t>>& leads) const {
    BasisSolveResult res;
    const std::size_t n = f.size();
    std::vector<Series> rem;
    for (const auto& q : f) {
        if (!q.in_S()) throw UsageError("basis expansion needs coefficients in S");
        rem.push_back(q.num);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return W().length(labels[a]) > W().length(labels[b]);
    });
    for (std::size_t k : order) {
        Series c = rem[k];
        for (auto r : leads[k]) {
            if (c.precision() < 1) {
                if (c.precision() == 0 && !ctx_->ring()->is_zero(c.constant_term())) {
                    res.in_image = false;
                    res.failed_at = labels[k];
                    return res;
                }
                throw PrecisionError("precision exhausted in basis expansion; raise the truncation N",
                                     static_cast<int>(leads[k].size()));
            }
            auto h = ctx_->S().divide_by_root(c, r);
            if (!h) {
                res.in_image = false;
                res.failed_at = labels[k];
                return res;
            }
            c = std::move(*h);
        }
        res.certified_degree = std::min(res.certified_degree, c.precision());
        if (c.is_zero()) continue;
        const auto& b = *basis[k];
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j].is_zero()) continue;
            rem[j] = rem[j] - c * b[j].num;
        }
        res.coeffs.emplace(labels[k], std::move(c));
    }
    for (const auto& r : rem)
        if (!r.is_zero()) throw ArithmeticError("triangular basis solve left a residue");
    return res;
}

BasisSolveResult Dual::to_bs_basis(const DualElem& f) const {
    std::vector<int> labels(W().size());
    std::iota(labels.begin(), labels.end(), 0);
    std::vector<const std::vector<QElem>*> basis;
    std::vector<std::vector<std::size_t>> leads;
    for (int w : labels) {
        basis.push_back(&bs_basis(w).c);
        leads.push_back(bs_lead_factors(w));
    }
    return triangular_solve(f.c, labels, basis, leads);
}

ParabolicDualElem Dual::parabolic_zero(Parabolic xi) const {
    return ParabolicDualElem{xi, std::vector<QElem>(W().cosets(xi).min_reps.size(), ctx_->q_zero())};
}

ParabolicDualElem Dual::parabolic_unit(Parabolic xi) const {
    return ParabolicDualElem{xi, std::vector<QElem>(W().cosets(xi).min_reps.size(), ctx_->q_one())};
}

ParabolicDualElem Dual::parabolic_basis_vector(Parabolic xi, int w) const {
    const auto& t = W().cosets(xi);
    ParabolicDualElem g = parabolic_zero(xi);
    g.c.at(static_cast<std::size_t>(t.position[static_cast<std::size_t>(t.rep_of[static_cast<std::size_t>(w)])])) =
        ctx_->q_one();
    return g;
}

ParabolicDualElem Dual::as_parabolic(const DualElem& f) const { return ParabolicDualElem{Parabolic{}, f.c}; }

DualElem Dual::to_borel(const ParabolicDualElem& g) const { return DualElem{p_star(g, Parabolic{}).c}; }

ParabolicDualElem Dual::p_star(const ParabolicDualElem& g, Parabolic finer) const {
    if (!finer.subset_of(g.xi)) throw UsageError("p^* goes from Ξ to a subset Ξ'");
    const auto& coarse = W().cosets(g.xi);
    const auto& fine = W().cosets(finer);
    ParabolicDualElem r{finer, {}};
    for (int v : fine.min_reps) {
        auto rep = static_cast<std::size_t>(coarse.rep_of[static_cast<std::size_t>(v)]);
        r.c.push_back(g.c[static_cast<std::size_t>(coarse.position[rep])]);
    }
    return r;
}

ParabolicDualElem Dual::d_star(const ParabolicDualElem& g, Parabolic coarser) const {
    if (!g.xi.subset_of(coarser)) throw UsageError("d^* goes from Ξ' to a superset Ξ");
    const auto& fine = W().cosets(g.xi);
    const auto& coarse = W().cosets(coarser);
    ParabolicDualElem r = parabolic_zero(coarser);
    for (std::size_t k = 0; k < fine.min_reps.size(); ++k) {
        auto rep = static_cast<std::size_t>(coarse.rep_of[static_cast<std::size_t>(fine.min_reps[k])]);
        auto& slot = r.c[static_cast<std::size_t>(coarse.position[rep])];
        slot = ctx_->q_add(slot, g.c[k]);
    }
    return r;
}

bool Dual::parabolic_equal(const ParabolicDualElem& a, const ParabolicDualElem& b) const {
    if (!(a.xi == b.xi) || a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!ctx_->q_equal(a.c[i], b.c[i])) return false;
    return true;
}

ParabolicDualElem Dual::parabolic_mul(const ParabolicDualElem& a, const ParabolicDualElem& b) const {
    if (!(a.xi == b.xi)) throw UsageError("parabolic classes over different subsets");
    ParabolicDualElem r{a.xi, {}};
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c.push_back(ctx_->q_mul(a.c[i], b.c[i]));
    return r;
}

std::optional<std::pair<int, int>> Dual::invariance_witness(const DualElem& f, Parabolic xi) const {
    // δ_{s_i} • f = f  iff  f_u = f_{u s_i} for every u.
    for (int i : xi.indices()) {
        if (static_cast<std::size_t>(i) >= ctx_->rd().rank()) throw UsageError("parabolic index out of range");
        for (std::size_t u = 0; u < W().size(); ++u) {
            auto us = static_cast<std::size_t>(W().right_simple(static_cast<int>(u), static_cast<std::size_t>(i)));
            if (us < u) continue;
            if (!ctx_->q_equal(f.c[u], f.c[us])) return std::make_pair(i, static_cast<int>(u));
        }
    }
    return std::nullopt;
}

ParabolicDualElem Dual::section(const DualElem& f, Parabolic xi) const {
    if (auto wit = invariance_witness(f, xi))
        throw UsageError("element is not invariant under s_" + std::to_string(wit->first + 1) +
                         "; no parabolic section exists");
    ParabolicDualElem g{xi, {}};
    for (int w : W().cosets(xi).min_reps) g.c.push_back(f.c[static_cast<std::size_t>(w)]);
    return g;
}

ParabolicDualElem Dual::push(const ParabolicDualElem& g, Parabolic xi, const std::vector<int>* reps) const {
    DualElem lifted = to_borel(g);
    DualElem h = A_parabolic(xi, g.xi, lifted, reps);
    return section(h, xi);
}

ParabolicDualElem Dual::parabolic_class(Parabolic xi, const std::vector<int>& word) const {
    DualElem psi = bott_samelson(word);
    ParabolicDualElem g = push(as_parabolic(psi), xi);
    for (const auto& q : g.c)
        if (!q.in_S())
            throw PrecisionError("parabolic class kept a denominator; the truncation N is too small", q.den_degree());
    return g;
}

const ParabolicDualElem& Dual::parabolic_basis(Parabolic xi, int w) const {
    auto key = std::make_pair(xi.mask, w);
    {
        std::lock_guard lock(mutex_);
        auto it = pb_cache_.find(key);
        if (it != pb_cache_.end()) return it->second;
    }
    ParabolicDualElem g = xi.empty() ? as_parabolic(bs_basis(w))
                                     : parabolic_class(xi, W()[static_cast<std::size_t>(w)].word);
    std::lock_guard lock(mutex_);
    return pb_cache_.emplace(key, std::move(g)).first->second;
}

BasisSolveResult Dual::to_parabolic_basis(const ParabolicDualElem& g) const {
    const auto& reps = W().cosets(g.xi).min_reps;
    std::vector<const std::vector<QElem>*> basis;
    std::vector<std::vector<std::size_t>> leads;
    for (int w : reps) {
        basis.push_back(&parabolic_basis(g.xi, w).c);
        leads.push_back(bs_lead_factors(w, g.xi));
    }
    return triangular_solve(g.c, reps, basis, leads);
}

Series Dual::pairing(Parabolic xi, const ParabolicDualElem& a, const ParabolicDualElem& b) const {
    if (!(a.xi == xi) || !(b.xi == xi)) throw UsageError("pairing arguments live over a different subset");
    ParabolicDualElem prod = parabolic_mul(a, b);
    ParabolicDualElem top = push(prod, Parabolic::full(ctx_->rd().rank()));
    const QElem& v = top.c.at(0);
    if (!v.in_S())
        throw PrecisionError("push-forward to the point kept a denominator; raise the truncation N", v.den_degree());
    return v.num;
}

namespace {

// Determinant by expansion along rows with memoization over column subsets.
template <class T, class Mul, class Add, class Neg>
T subset_determinant(const std::vector<std::vector<T>>& m, T zero, T one, Mul mul, Add add, Neg neg) {
    const std::size_t n = m.size();
    std::vector<std::optional<T>> memo(std::size_t{1} << n);
    std::function<T(std::uint32_t)> rec = [&](std::uint32_t used) -> T {
        auto row = static_cast<std::size_t>(__builtin_popcount(used));
        if (row == n) return one;
        if (memo[used]) return *memo[used];
        T acc = zero;
        int sign = 1;
        for (std::size_t c = 0; c < n; ++c) {
            if (used & (1u << c)) continue;
            T term = mul(m[row][c], rec(used | (1u << c)));
            acc = add(acc, sign > 0 ? term : neg(term));
            sign = -sign;
        }
        memo[used] = acc;
        return acc;
    };
    return rec(0);
}

// Fraction-free elimination.  Z/m is lifted to Z, where the exact
// divisions of the Bareiss recurrence are unambiguous.
RingValue bareiss_determinant(const Ring& R, std::vector<std::vector<RingValue>> m) {
    if (R.kind() == RingKind::IntegersMod) {
        auto Z = Ring::integers();
        for (auto& row : m)
            for (auto& v : row) v = *R.to_integer(v);
        RingValue d = bareiss_determinant(*Z, std::move(m));
        return R.from_integer(std::get<mpz_class>(d));
    }
    const std::size_t n = m.size();
    RingValue prev = R.one();
    bool negate = false;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && R.is_zero(m[piv][k])) ++piv;
        if (piv == n) return R.zero();
        if (piv != k) {
            std::swap(m[piv], m[k]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                RingValue t = R.sub(R.mul(m[i][j], m[k][k]), R.mul(m[i][k], m[k][j]));
                auto q = R.exact_div(t, prev);
                if (!q) throw ArithmeticError("fraction-free determinant hit an inexact division");
                m[i][j] = std::move(*q);
            }
        prev = m[k][k];
    }
    RingValue d = n ? m[n - 1][n - 1] : R.one();
    return negate ? R.neg(d) : d;
}

} // namespace

PairingReport Dual::pairing_matrix(Parabolic xi, unsigned threads) const {
    PairingReport rep;
    rep.xi = xi;
    rep.basis = W().cosets(xi).min_reps;
    const std::size_t n = rep.basis.size();
    for (int w : rep.basis) (void)parabolic_basis(xi, w);

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) jobs.emplace_back(i, j);
    std::vector<std::optional<Series>> entries(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mutex;
    auto worker = [&] {
        while (true) {
            std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            try {
                auto [i, j] = jobs[k];
                entries[k] = pairing(xi, parabolic_basis(xi, rep.basis[i]), parabolic_basis(xi, rep.basis[j]));
            } catch (...) {
                std::lock_guard lock(fail_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned t = std::max(1u, threads);
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    rep.matrix.assign(n, std::vector<Series>(n));
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        auto [i, j] = jobs[k];
        rep.matrix[i][j] = *entries[k];
        rep.precision = std::min(rep.precision, entries[k]->precision());
    }
    // Symmetry is verified on computed entries for the lower triangle too.
    rep.symmetric = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            Series lower = pairing(xi, parabolic_basis(xi, rep.basis[i]), parabolic_basis(xi, rep.basis[j]));
            if (!lower.equals(rep.matrix[j][i])) rep.symmetric = false;
            rep.matrix[i][j] = std::move(lower);
        }

    const Ring& R = *ctx_->ring();
    if (n <= 10) {
        Series det = subset_determinant<Series>(
            rep.matrix, ctx_->S().zero(), ctx_->S().one(), [](const Series& a, const Series& b) { return a * b; },
            [](const Series& a, const Series& b) { return a + b; }, [](const Series& a) { return -a; });
        rep.det_augmentation = det.constant_term();
        rep.determinant = std::move(det);
    } else {
        std::vector<std::vector<RingValue>> eps(n, std::vector<RingValue>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) eps[i][j] = rep.matrix[i][j].constant_term();
        rep.det_augmentation = bareiss_determinant(R, std::move(eps));
    }
    rep.nondegenerate = R.is_unit(rep.det_augmentation);
    return rep;
}

EulerCheck Dual::euler_class(Parabolic xi, int w) const {
    const auto& t = W().cosets(xi);
    if (t.position[static_cast<std::size_t>(w)] < 0) throw UsageError("element is not a minimal coset representative");
    std::vector<std::size_t> roots = ctx_->relative_negative_roots(Parabolic::full(ctx_->rd().rank()), xi);
    Series x_rel = ctx_->root_product(roots);
    EulerCheck res;
    DualElem f = to_borel(parabolic_basis_vector(xi, w));
    res.lhs = bullet(ctx_->qw_scalar(ctx_->q_from(x_rel)), f);
    res.expected = ctx_->S().act(w, x_rel);
    for (std::size_t u = 0; u < W().size(); ++u) {
        bool in_coset = t.rep_of[u] == w;
        QElem want = in_coset ? ctx_->q_from(res.expected) : ctx_->q_zero();
        if (!ctx_->q_equal(res.lhs.c[u], want)) res.holds = false;
    }
    return res;
}

BorelReport Dual::borel_check(int degree_bound) const {
    const Ring& R = *ctx_->ring();
    if (R.kind() == RingKind::PolynomialsOverIntegers)
        throw ValidationError("borel-check supports Z, Q and Z/m coefficient rings only");
    if (degree_bound < 0 || degree_bound > ctx_->truncation())
        throw ValidationError("degree bound D must satisfy 0 <= D <= N");
    BorelReport rep;
    rep.degree_bound = degree_bound;
    rep.basis_size = W().size();
    rep.torsion_primes = ctx_->rd().torsion_primes();

    // Monomials in x_1..x_n of total degree <= D, mapped through c and ε.
    const std::size_t n = ctx_->rd().rank();
    std::vector<std::vector<int>> monos{{}};
    std::vector<std::vector<int>> all;
    std::function<void(std::vector<int>&, std::size_t, int)> gen = [&](std::vector<int>& e, std::size_t i, int left) {
        if (i == n) {
            all.push_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            gen(e, i + 1, left - k);
        }
    };
    std::vector<int> e(n, 0);
    gen(e, 0, degree_bound);
    std::vector<std::vector<RingValue>> rows;
    for (const auto& ex : all) {
        Series m = ctx_->S().one();
        for (std::size_t i = 0; i < n; ++i)
            for (int k = 0; k < ex[i]; ++k) m = m * ctx_->S().variable(i);
        BasisSolveResult b = to_bs_basis(char_map(m));
        if (!b.in_image) throw ArithmeticError("characteristic map image failed to expand in the Bott-Samelson basis");
        rep.certified_degree = std::min(rep.certified_degree, b.certified_degree);
        if (b.certified_degree < 0) throw PrecisionError("augmentation of a basis coefficient is not certified", 1);
        std::vector<RingValue> row;
        for (std::size_t w = 0; w < W().size(); ++w) {
            auto it = b.coeffs.find(static_cast<int>(w));
            row.push_back(it == b.coeffs.end() ? R.zero() : it->second.constant_term());
        }
        rows.push_back(std::move(row));
    }
    rep.generators = rows.size();
    const std::size_t cols = W().size();
    if (R.kind() == RingKind::Rationals) {
        // Rank over Q after clearing denominators row by row.
        std::vector<std::vector<mpz_class>> z;
        for (const auto& r : rows) {
            mpz_class l = 1;
            for (const auto& v : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), std::get<mpq_class>(v).get_den_mpz_t());
            std::vector<mpz_class> zr;
            for (const auto& v : r) {
                mpq_class s = std::get<mpq_class>(v) * mpq_class(l);
                zr.push_back(s.get_num());
            }
            z.push_back(std::move(zr));
        }
        auto inv = invariant_factors(z, cols);
        rep.rank = inv.size();
        rep.invariant_factors.assign(inv.size(), 1);
        rep.surjective = rep.rank == cols;
        if (!rep.surjective) rep.cokernel.push_back("Q^" + std::to_string(cols - rep.rank));
    } else {
        std::vector<std::vector<mpz_class>> z;
        for (const auto& r : rows) {
            std::vector<mpz_class> zr;
            for (const auto& v : r) zr.push_back(std::get<mpz_class>(v));
            z.push_back(std::move(zr));
        }
        if (R.kind() == RingKind::IntegersMod)
            for (std::size_t i = 0; i < cols; ++i) {
                std::vector<mpz_class> zr(cols, 0);
                zr[i] = R.modulus();
                z.push_back(std::move(zr));
            }
        auto inv = invariant_factors(z, cols);
        rep.invariant_factors = inv;
        rep.rank = 0;
        for (const auto& d : inv)
            if (R.integer_is_unit(d)) ++rep.rank;
        rep.surjective = rep.rank == cols;
        for (const auto& d : inv)
            if (!R.integer_is_unit(d)) rep.cokernel.push_back("Z/" + d.get_str());
        if (inv.size() < cols) rep.cokernel.push_back("Z^" + std::to_string(cols - inv.size()));
    }

    // Expectation from the torsion-prime table.
    const auto& F = ctx_->S().fgl();
    bool primes_invertible = std::all_of(rep.torsion_primes.begin(), rep.torsion_primes.end(),
                                         [&](int p) { return R.integer_is_unit(p); });
    if (F.kind() == FglKind::Additive) rep.table_prediction = primes_invertible;
    else if (F.kind() == FglKind::Multiplicative && R.is_unit(F.beta()) &&
             ctx_->rd().kind() == LatticeKind::SimplyConnected)
        rep.table_prediction = true;
    else if (primes_invertible)
        rep.table_prediction = true;
    return rep;
}

} // namespace fschubert
