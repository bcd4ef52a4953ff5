#include "fschubert/series.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "fschubert/errors.hpp"

namespace fschubert {

Series::Series(RingPtr ring, std::size_t nvars, int precision)
    : ring_(std::move(ring)), nvars_(nvars), precision_(precision) {
    if (nvars_ > kMaxVars) throw ValidationError("at most 8 variables are supported");
    if (precision_ < 0) precision_ = -1;
}

Series Series::constant(RingPtr ring, std::size_t nvars, int precision, const RingValue& c) {
    Series s(std::move(ring), nvars, precision);
    if (!s.ring_->is_zero(c) && precision >= 0) s.terms_.emplace_back(Monomial{}, c);
    return s;
}

Series Series::variable(RingPtr ring, std::size_t nvars, int precision, std::size_t i) {
    Series s(std::move(ring), nvars, precision);
    if (i >= nvars) throw UsageError("variable index out of range");
    if (precision >= 1) s.terms_.emplace_back(Monomial::unit(i), s.ring_->one());
    return s;
}

Series Series::from_terms(RingPtr ring, std::size_t nvars, int precision, std::vector<Term> terms) {
    Series s(std::move(ring), nvars, precision);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    for (auto& t : terms) {
        if (t.first.deg > precision) continue;
        if (!s.terms_.empty() && s.terms_.back().first == t.first)
            s.terms_.back().second = s.ring_->add(s.terms_.back().second, t.second);
        else
            s.terms_.push_back(std::move(t));
    }
    std::erase_if(s.terms_, [&](const Term& t) { return s.ring_->is_zero(t.second); });
    return s;
}

int Series::valuation() const noexcept { return terms_.empty() ? precision_ + 1 : terms_.front().first.deg; }

RingValue Series::constant_term() const {
    if (!terms_.empty() && terms_.front().first.deg == 0) return terms_.front().second;
    return ring_->zero();
}

RingValue Series::coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& k) { return t.first < k; });
    if (it != terms_.end() && it->first == m) return it->second;
    return ring_->zero();
}

Series Series::homogeneous(int degree) const {
    Series s(ring_, nvars_, precision_);
    for (const auto& t : terms_)
        if (t.first.deg == degree) s.terms_.push_back(t);
    return s;
}

Series Series::truncated(int p) const {
    Series s(ring_, nvars_, std::min(p, precision_));
    for (const auto& t : terms_)
        if (t.first.deg <= s.precision_) s.terms_.push_back(t);
    return s;
}

void Series::check_compatible(const Series& b) const {
    if (!ring_ || !b.ring_ || !(*ring_ == *b.ring_)) throw UsageError("series over different rings");
    if (nvars_ != b.nvars_) throw UsageError("series in different numbers of variables");
}

Series Series::operator-() const {
    Series s = *this;
    for (auto& t : s.terms_) t.second = ring_->neg(t.second);
    return s;
}

namespace {

Series merge(const Series& a, const Series& b, bool subtract, const RingPtr& ring) {
    int p = std::min(a.precision(), b.precision());
    std::vector<Series::Term> out;
    out.reserve(a.terms().size() + b.terms().size());
    auto ia = a.terms().begin(), ea = a.terms().end();
    auto ib = b.terms().begin(), eb = b.terms().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            if (ia->first.deg <= p) out.push_back(*ia);
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            if (ib->first.deg <= p) out.emplace_back(ib->first, subtract ? ring->neg(ib->second) : ib->second);
            ++ib;
        } else {
            if (ia->first.deg <= p) {
                RingValue c = subtract ? ring->sub(ia->second, ib->second) : ring->add(ia->second, ib->second);
                if (!ring->is_zero(c)) out.emplace_back(ia->first, std::move(c));
            }
            ++ia;
            ++ib;
        }
    }
    return Series::from_terms(ring, a.nvars(), p, std::move(out));
}

} // namespace

Series operator+(const Series& a, const Series& b) {
    a.check_compatible(b);
    return merge(a, b, false, a.ring_);
}

Series operator-(const Series& a, const Series& b) {
    a.check_compatible(b);
    return merge(a, b, true, a.ring_);
}

Series operator*(const Series& a, const Series& b) {
    a.check_compatible(b);
    // Valuation-aware precision: an unknown tail of a of degree > p_a only
    // meets terms of b of degree >= v_b.
    int p = std::min(a.precision_ + b.valuation(), b.precision_ + a.valuation());
    p = std::min(p, std::max(a.precision_, b.precision_));
    std::vector<Series::Term> prods;
    for (const auto& [ma, ca] : a.terms_) {
        if (ma.deg > p) break;
        for (const auto& [mb, cb] : b.terms_) {
            if (ma.deg + mb.deg > p) break;
            prods.emplace_back(ma + mb, a.ring_->mul(ca, cb));
        }
    }
    return Series::from_terms(a.ring_, a.nvars_, p, std::move(prods));
}

Series Series::scaled(const RingValue& c) const {
    Series s(ring_, nvars_, precision_);
    for (const auto& t : terms_) {
        RingValue v = ring_->mul(t.second, c);
        if (!ring_->is_zero(v)) s.terms_.emplace_back(t.first, std::move(v));
    }
    return s;
}

bool Series::equals(const Series& b) const {
    check_compatible(b);
    int p = std::min(precision_, b.precision_);
    auto ia = terms_.begin(), ib = b.terms_.begin();
    auto skip = [p](auto& it, auto end) {
        while (it != end && it->first.deg > p) ++it;
    };
    while (true) {
        skip(ia, terms_.end());
        skip(ib, b.terms_.end());
        bool ea = ia == terms_.end(), eb = ib == b.terms_.end();
        if (ea || eb) return ea && eb;
        if (!(ia->first == ib->first) || !ring_->equal(ia->second, ib->second)) return false;
        ++ia;
        ++ib;
    }
}

std::optional<Series> Series::divide_integer(const mpz_class& d) const {
    Series s(ring_, nvars_, precision_);
    for (const auto& t : terms_) {
        auto q = ring_->div_integer(t.second, d);
        if (!q) return std::nullopt;
        if (!ring_->is_zero(*q)) s.terms_.emplace_back(t.first, std::move(*q));
    }
    return s;
}

std::string Series::to_string(const std::vector<std::string>& names) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string cs = ring_->format(c);
        bool compound = cs.find_first_of("+-", 1) != std::string::npos;
        if (compound) cs = "(" + cs + ")";
        if (!first) os << " + ";
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (m.e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += i < names.size() ? names[i] : "x" + std::to_string(i + 1);
            if (m.e[i] > 1) mono += "^" + std::to_string(m.e[i]);
        }
        if (mono.empty())
            os << cs;
        else if (cs == "1")
            os << mono;
        else if (cs == "-1")
            os << "-" << mono;
        else
            os << cs << "*" << mono;
    }
    if (first) os << "0";
    os << " + O(" << precision_ + 1 << ")";
    return os.str();
}

Substitution::Substitution(std::vector<Series> images) : images_(std::move(images)) {
    if (images_.empty()) return;
    ring_ = images_.front().ring();
    target_vars_ = images_.front().nvars();
    for (const auto& s : images_) {
        if (s.nvars() != target_vars_) throw UsageError("substitution images live in different rings");
        if (!ring_->is_zero(s.constant_term())) throw UsageError("substituted series must have zero constant term");
    }
}

const Series& Substitution::monomial_image(const Monomial& m) const {
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
    }
    std::size_t i = 0;
    while (m.e[i] == 0) ++i;
    Monomial rest = m;
    rest.e[i] -= 1;
    rest.deg -= 1;
    Series img = rest.deg == 0 ? images_[i] : monomial_image(rest) * images_[i];
    std::unique_lock lock(mutex_);
    return cache_.emplace(m, std::move(img)).first->second;
}

Series Substitution::apply(const Series& f) const {
    if (f.nvars() != images_.size()) throw UsageError("substitution arity mismatch");
    if (images_.empty()) {
        // Map into the ring itself: only the constant term survives.
        return Series::constant(f.ring(), 0, f.precision(), f.constant_term());
    }
    int p = f.precision();
    std::vector<Series::Term> acc;
    for (const auto& [m, c] : f.terms()) {
        if (m.deg == 0) {
            acc.emplace_back(Monomial{}, c);
            continue;
        }
        const Series& img = monomial_image(m);
        p = std::min(p, img.precision());
        for (const auto& [mm, cc] : img.terms()) acc.emplace_back(mm, ring_->mul(c, cc));
    }
    // Unknown tail of f: degree > p_f maps to degree > p_f since images
    // have positive valuation, so p_f bounds the result.
    return Series::from_terms(f.ring(), target_vars_, p, std::move(acc));
}

} // namespace fschubert
