#include "fschubert/hecke.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fschubert/errors.hpp"

namespace fschubert {

bool QElem::in_S() const {
    return std::all_of(den.begin(), den.end(), [](auto m) { return m == 0; });
}

int QElem::den_degree() const { return std::accumulate(den.begin(), den.end(), 0); }

int QWElem::precision() const {
    int p = floor;
    for (const auto& [w, q] : terms) p = std::min(p, q.precision());
    return p;
}

Context::Context(AlgebraPtr algebra) : S_(std::move(algebra)) {
    warnings_ = S_->warnings();
    const std::size_t P = num_positive();
    for (std::size_t b = 0; b < P; ++b) {
        auto u = S_->divide_by_root(x(b), rd().negate(b));
        if (!u) throw ArithmeticError("x_{-beta} does not divide x_beta; the formal group law is degenerate");
        units_.push_back(std::move(*u));
    }
    x_pi_ = S_->one();
    for (std::size_t b = 0; b < P; ++b) x_pi_ = x_pi_ * x(rd().negate(b));
}

Series Context::root_product(const std::vector<std::size_t>& roots) const {
    Series p = S_->one();
    for (auto r : roots) p = p * x(r);
    return p;
}

std::vector<std::size_t> Context::relative_negative_roots(Parabolic xi, Parabolic xi_prime) const {
    if (!xi_prime.subset_of(xi)) throw UsageError("Ξ' must be a subset of Ξ");
    auto big = W().positive_roots_in(xi);
    auto small = W().positive_roots_in(xi_prime);
    std::vector<std::size_t> out;
    for (auto r : big)
        if (std::find(small.begin(), small.end(), r) == small.end()) out.push_back(rd().negate(r));
    return out;
}

QElem Context::q_from(const Series& s) const { return QElem{s, std::vector<std::uint16_t>(num_positive(), 0)}; }

QElem Context::q_inv_root(std::size_t root_idx) const {
    QElem q = q_one();
    if (rd().is_positive(root_idx)) {
        q.den[root_idx] = 1;
    } else {
        std::size_t b = rd().negate(root_idx);
        q.num = units_[b];
        q.den[b] = 1;
    }
    return q;
}

void Context::normalize(QElem& a) const {
    for (std::size_t b = 0; b < a.den.size(); ++b) {
        while (a.den[b] > 0) {
            if (a.num.precision() < 1) {
                if (a.num.precision() == 0 && !ring()->is_zero(a.num.constant_term())) break;
                throw PrecisionError("precision exhausted while cancelling denominators; raise the truncation N",
                                     a.den_degree() + 1 - std::max(a.num.precision(), 0));
            }
            auto h = S_->divide_by_root(a.num, b);
            if (!h) break;
            a.num = std::move(*h);
            --a.den[b];
        }
    }
}

namespace {

Series power_product(const Context& ctx, const std::vector<std::uint16_t>& exps) {
    Series p = ctx.S().one();
    for (std::size_t b = 0; b < exps.size(); ++b)
        for (int k = 0; k < exps[b]; ++k) p = p * ctx.x(b);
    return p;
}

// Numerator of a ± b over the common denominator, unnormalized.
QElem combine(const Context& ctx, const QElem& a, const QElem& b, bool subtract) {
    if (a.den == b.den) return QElem{subtract ? a.num - b.num : a.num + b.num, a.den};
    std::vector<std::uint16_t> M(a.den.size()), ea(a.den.size()), eb(a.den.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
        M[i] = std::max(a.den[i], b.den[i]);
        ea[i] = static_cast<std::uint16_t>(M[i] - a.den[i]);
        eb[i] = static_cast<std::uint16_t>(M[i] - b.den[i]);
    }
    Series na = a.num * power_product(ctx, ea);
    Series nb = b.num * power_product(ctx, eb);
    return QElem{subtract ? na - nb : na + nb, M};
}

} // namespace

QElem Context::q_add(const QElem& a, const QElem& b) const {
    if (a.is_zero() && a.den_degree() == 0 && a.precision() >= b.precision()) return b;
    if (b.is_zero() && b.den_degree() == 0 && b.precision() >= a.precision()) return a;
    QElem r = combine(*this, a, b, false);
    normalize(r);
    return r;
}

QElem Context::q_sub(const QElem& a, const QElem& b) const {
    QElem r = combine(*this, a, b, true);
    normalize(r);
    return r;
}

QElem Context::q_neg(const QElem& a) const { return QElem{-a.num, a.den}; }

QElem Context::q_mul(const QElem& a, const QElem& b) const {
    QElem r{a.num * b.num, a.den};
    for (std::size_t i = 0; i < r.den.size(); ++i) r.den[i] = static_cast<std::uint16_t>(r.den[i] + b.den[i]);
    if (!r.in_S()) normalize(r);
    return r;
}

QElem Context::q_mul(const QElem& a, const Series& s) const {
    QElem r{a.num * s, a.den};
    normalize(r);
    return r;
}

QElem Context::q_act(int w, const QElem& a) const {
    if (w == 0) return a;
    QElem r{S_->act(w, a.num), std::vector<std::uint16_t>(a.den.size(), 0)};
    for (std::size_t b = 0; b < a.den.size(); ++b) {
        if (a.den[b] == 0) continue;
        auto g = static_cast<std::size_t>(W().act_root(w, b));
        if (rd().is_positive(g)) {
            r.den[g] = static_cast<std::uint16_t>(r.den[g] + a.den[b]);
        } else {
            std::size_t pg = rd().negate(g);
            r.den[pg] = static_cast<std::uint16_t>(r.den[pg] + a.den[b]);
            for (int k = 0; k < a.den[b]; ++k) r.num = r.num * units_[pg];
        }
    }
    return r;
}

bool Context::q_equal(const QElem& a, const QElem& b) const { return combine(*this, a, b, true).num.is_zero(); }

std::string Context::q_to_string(const QElem& a) const {
    std::string s = a.num.to_string({});
    if (a.in_S()) return s;
    std::ostringstream os;
    os << "(" << s << ")/(";
    bool first = true;
    for (std::size_t b = 0; b < a.den.size(); ++b) {
        if (!a.den[b]) continue;
        if (!first) os << "*";
        first = false;
        os << "x_r" << b + 1;
        if (a.den[b] > 1) os << "^" << a.den[b];
    }
    os << ")";
    return os.str();
}

void Context::drop_zeros(QWElem& a) const {
    for (auto it = a.terms.begin(); it != a.terms.end();) {
        if (it->second.is_zero()) {
            a.floor = std::min(a.floor, it->second.precision() - it->second.den_degree());
            it = a.terms.erase(it);
        } else {
            ++it;
        }
    }
}

QWElem Context::qw_delta(int w) const {
    QWElem r;
    r.terms.emplace(w, q_one());
    return r;
}

QWElem Context::qw_scalar(const QElem& q) const {
    QWElem r;
    r.terms.emplace(0, q);
    drop_zeros(r);
    return r;
}

QWElem Context::qw_add(const QWElem& a, const QWElem& b) const {
    QWElem r = a;
    r.floor = std::min(a.floor, b.floor);
    for (const auto& [w, q] : b.terms) {
        auto it = r.terms.find(w);
        if (it == r.terms.end())
            r.terms.emplace(w, q);
        else
            it->second = q_add(it->second, q);
    }
    drop_zeros(r);
    return r;
}

QWElem Context::qw_sub(const QWElem& a, const QWElem& b) const {
    QWElem nb = b;
    for (auto& [w, q] : nb.terms) q = q_neg(q);
    return qw_add(a, nb);
}

namespace {

// Lowest degree of num / ∏ x^den, counting each x_β as degree 1.
int value_valuation(const QElem& q) { return q.num.valuation() - q.den_degree(); }

int min_value_valuation(const QWElem& z) {
    int v = INT_MAX;
    for (const auto& [w, q] : z.terms) v = std::min(v, value_valuation(q));
    return v;
}

// Floor of a product: dropped parts of one factor times the other.
int product_floor(const QWElem& a, const QWElem& b) {
    auto shift = [](int floor, int val) { return floor == INT_MAX || val == INT_MAX ? INT_MAX : floor + val; };
    int f = std::min(shift(a.floor, min_value_valuation(b)), shift(b.floor, min_value_valuation(a)));
    if (a.floor != INT_MAX && b.floor != INT_MAX) f = std::min(f, a.floor + b.floor);
    return f;
}

} // namespace

QWElem Context::qw_mul(const QWElem& a, const QWElem& b) const {
    QWElem r;
    r.floor = product_floor(a, b);
    for (const auto& [v, qa] : a.terms)
        for (const auto& [w, qb] : b.terms) {
            QElem t = q_mul(qa, q_act(v, qb));
            int vw = W().mul(v, w);
            auto it = r.terms.find(vw);
            if (it == r.terms.end())
                r.terms.emplace(vw, std::move(t));
            else
                it->second = q_add(it->second, t);
        }
    drop_zeros(r);
    return r;
}

QWElem Context::qw_left_scale(const QElem& q, const QWElem& a) const {
    QWElem r;
    if (a.floor != INT_MAX) r.floor = a.floor + value_valuation(q);
    for (const auto& [w, c] : a.terms) r.terms.emplace(w, q_mul(q, c));
    drop_zeros(r);
    return r;
}

bool Context::qw_equal(const QWElem& a, const QWElem& b) const {
    // A missing coefficient is zero only up to the other side's floor.
    auto vanishes = [](const QElem& q, int floor) { return floor != INT_MAX ? value_valuation(q) > floor : q.is_zero(); };
    for (const auto& [w, q] : a.terms) {
        const QElem* o = b.at(w);
        if (o ? !q_equal(q, *o) : !vanishes(q, b.floor)) return false;
    }
    for (const auto& [w, q] : b.terms)
        if (!a.at(w) && !vanishes(q, a.floor)) return false;
    return true;
}

const Series& Context::kappa(std::size_t simple) const {
    {
        std::lock_guard lock(mutex_);
        auto it = kappa_cache_.find(simple);
        if (it != kappa_cache_.end()) return it->second;
    }
    std::size_t a = simple;
    QElem k = q_add(q_inv_root(a), q_inv_root(rd().negate(a)));
    if (!k.in_S())
        throw ArithmeticError("kappa for simple root " + std::to_string(simple + 1) +
                              " does not lie in S; the regularity assumption on x_alpha fails");
    std::lock_guard lock(mutex_);
    return kappa_cache_.emplace(simple, k.num).first->second;
}

QWElem Context::demazure_X(std::size_t simple) const {
    QWElem r;
    QElem inv = q_inv_root(simple);
    r.terms.emplace(0, inv);
    r.terms.emplace(W().right_simple(0, simple), q_neg(inv));
    return r;
}

QWElem Context::pushpull_Y(std::size_t simple) const {
    QWElem r;
    r.terms.emplace(0, q_inv_root(rd().negate(simple)));
    r.terms.emplace(W().right_simple(0, simple), q_inv_root(simple));
    return r;
}

QWElem Context::word_element(WordKind kind, const std::vector<int>& word) const {
    QWElem r = qw_delta(0);
    for (int i : word) {
        if (i < 0 || static_cast<std::size_t>(i) >= rd().rank())
            throw ValidationError("word letter out of range: " + std::to_string(i + 1));
        auto s = static_cast<std::size_t>(i);
        r = qw_mul(r, kind == WordKind::X ? demazure_X(s) : pushpull_Y(s));
    }
    return r;
}

QWElem Context::pushpull_parabolic(Parabolic xi, Parabolic xi_prime, const std::vector<int>* reps) const {
    auto roots = relative_negative_roots(xi, xi_prime);
    QElem inv = q_one();
    for (auto r : roots) inv = q_mul(inv, q_inv_root(r));
    std::vector<int> defaults;
    if (!reps) {
        defaults = W().relative_reps(xi, xi_prime);
        reps = &defaults;
    }
    QWElem out;
    for (int w : *reps) {
        QElem t = q_act(w, inv);
        auto it = out.terms.find(w);
        if (it != out.terms.end()) throw UsageError("duplicate coset representative");
        out.terms.emplace(w, std::move(t));
    }
    return out;
}

const QWElem& Context::X_basis_element(int w) const {
    {
        std::lock_guard lock(mutex_);
        auto it = xbasis_cache_.find(w);
        if (it != xbasis_cache_.end()) return it->second;
    }
    QWElem e = word_element(WordKind::X, W()[static_cast<std::size_t>(w)].word);
    std::lock_guard lock(mutex_);
    return xbasis_cache_.emplace(w, std::move(e)).first->second;
}

XBasisResult Context::to_X_basis(const QWElem& z) const {
    XBasisResult res;
    QWElem remaining = z;
    std::vector<int> order(W().size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return W().length(a) > W().length(b); });
    for (int w : order) {
        const QElem* r = remaining.at(w);
        if (!r) continue;
        // The δ_w coefficient of X_{I_w} is (-1)^k / ∏ x_{β_j} with
        // β_j = s_{i_1}...s_{i_{j-1}}(α_{i_j}).
        const auto& word = W()[static_cast<std::size_t>(w)].word;
        Series lead_inv = S_->one();
        int prefix = 0;
        for (int i : word) {
            lead_inv = lead_inv * x(static_cast<std::size_t>(W().act_root(prefix, static_cast<std::size_t>(i))));
            prefix = W().right_simple(prefix, static_cast<std::size_t>(i));
        }
        if (word.size() % 2) lead_inv = -lead_inv;
        QElem c = q_mul(*r, lead_inv);
        if (!c.in_S()) {
            res.in_DF = false;
            res.failed_at = w;
            return res;
        }
        res.precision = std::min(res.precision, c.precision());
        remaining = qw_sub(remaining, qw_left_scale(c, X_basis_element(w)));
        if (remaining.at(w)) throw ArithmeticError("X-basis elimination did not clear the leading term");
        if (!c.is_zero()) res.coeffs.emplace(w, c.num);
    }
    res.precision = std::min(res.precision, remaining.floor);
    return res;
}

QWElem Context::from_X_basis(const std::map<int, Series>& coeffs) const {
    QWElem r;
    for (const auto& [w, c] : coeffs) r = qw_add(r, qw_left_scale(q_from(c), X_basis_element(w)));
    return r;
}

} // namespace fschubert
