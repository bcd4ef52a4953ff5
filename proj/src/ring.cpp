#include "fschubert/ring.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "fschubert/errors.hpp"

namespace fschubert {

namespace {

std::uint32_t degree_of(const IntPoly::Exponents& e) {
    return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

// Canonical order: ascending degree, then descending lexicographic.
bool canonical_less(const IntPoly::Exponents& a, const IntPoly::Exponents& b) {
    auto da = degree_of(a), db = degree_of(b);
    if (da != db) return da < db;
    return b < a;
}

// Graded-lex term order used for division (a true monomial order).
bool grlex_less(const IntPoly::Exponents& a, const IntPoly::Exponents& b) {
    auto da = degree_of(a), db = degree_of(b);
    if (da != db) return da < db;
    return a < b;
}

} // namespace

IntPoly IntPoly::constant(std::size_t nvars, const mpz_class& c) {
    IntPoly p(nvars);
    if (c != 0) p.terms_.emplace_back(Exponents(nvars, 0), c);
    return p;
}

IntPoly IntPoly::variable(std::size_t nvars, std::size_t index) {
    IntPoly p(nvars);
    Exponents e(nvars, 0);
    e.at(index) = 1;
    p.terms_.emplace_back(std::move(e), mpz_class(1));
    return p;
}

bool IntPoly::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && degree_of(terms_[0].first) == 0);
}

mpz_class IntPoly::constant_term() const {
    if (!terms_.empty() && degree_of(terms_[0].first) == 0) return terms_[0].second;
    return 0;
}

void IntPoly::canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return canonical_less(a.first, b.first); });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().first == t.first)
            merged.back().second += t.second;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.second == 0; });
    terms_ = std::move(merged);
}

IntPoly IntPoly::operator-() const {
    IntPoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.nvars_, b.nvars_));
    r.terms_ = a.terms_;
    r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
    r.canonicalize();
    return r;
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    std::map<IntPoly::Exponents, mpz_class> acc;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            IntPoly::Exponents e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            acc[e] += ca * cb;
        }
    IntPoly r(std::max(a.nvars_, b.nvars_));
    for (auto& [e, c] : acc)
        if (c != 0) r.terms_.emplace_back(e, c);
    r.canonicalize();
    return r;
}

bool operator==(const IntPoly& a, const IntPoly& b) { return a.terms_ == b.terms_; }

std::optional<IntPoly> IntPoly::divide_exact(const mpz_class& d) const {
    if (d == 0) throw UsageError("division of a polynomial by zero");
    IntPoly r = *this;
    for (auto& t : r.terms_) {
        if (!mpz_divisible_p(t.second.get_mpz_t(), d.get_mpz_t())) return std::nullopt;
        mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), d.get_mpz_t());
    }
    return r;
}

std::optional<IntPoly> IntPoly::divide_exact(const IntPoly& d) const {
    if (d.is_zero()) throw UsageError("division of a polynomial by zero");
    auto leading = [](const IntPoly& p) -> const Term& {
        return *std::max_element(p.terms_.begin(), p.terms_.end(),
                                 [](const Term& x, const Term& y) { return grlex_less(x.first, y.first); });
    };
    const Term& ld = leading(d);
    IntPoly rem = *this;
    IntPoly quo(nvars_);
    while (!rem.is_zero()) {
        const Term& lr = leading(rem);
        Exponents e(lr.first.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (lr.first[i] < ld.first[i]) return std::nullopt;
            e[i] = lr.first[i] - ld.first[i];
        }
        if (!mpz_divisible_p(lr.second.get_mpz_t(), ld.second.get_mpz_t())) return std::nullopt;
        mpz_class c = lr.second / ld.second;
        IntPoly step(nvars_);
        step.terms_.emplace_back(std::move(e), c);
        quo = quo + step;
        rem = rem - step * d;
    }
    return quo;
}

std::string IntPoly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        mpz_class mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool is_const = degree_of(e) == 0;
        bool wrote = false;
        if (mag != 1 || is_const) {
            os << mag.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (wrote) os << "*";
            os << names.at(i);
            if (e[i] > 1) os << "^" << e[i];
            wrote = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

Ring::Ring(RingKind kind, mpz_class modulus, std::vector<std::string> variables)
    : kind_(kind), modulus_(std::move(modulus)), variables_(std::move(variables)) {}

RingPtr Ring::integers() {
    static const RingPtr z(new Ring(RingKind::Integers, 0, {}));
    return z;
}

RingPtr Ring::rationals() {
    static const RingPtr q(new Ring(RingKind::Rationals, 0, {}));
    return q;
}

RingPtr Ring::integers_mod(const mpz_class& modulus) {
    if (modulus < 2) throw ValidationError("Zmod modulus must be at least 2, got " + modulus.get_str());
    return RingPtr(new Ring(RingKind::IntegersMod, modulus, {}));
}

RingPtr Ring::polynomials(std::vector<std::string> variables) {
    if (variables.empty()) throw ValidationError("ZPoly needs at least one variable");
    for (std::size_t i = 0; i < variables.size(); ++i) {
        const auto& v = variables[i];
        if (v.empty()) throw ValidationError("ZPoly variable names must be nonempty");
        if (!std::isalpha(static_cast<unsigned char>(v[0])) && v[0] != '_')
            throw ValidationError("ZPoly variable name must start with a letter: " + v);
        for (char ch : v)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
                throw ValidationError("ZPoly variable name has invalid character: " + v);
        for (std::size_t j = 0; j < i; ++j)
            if (variables[j] == v) throw ValidationError("duplicate ZPoly variable name: " + v);
    }
    return RingPtr(new Ring(RingKind::PolynomialsOverIntegers, 0, std::move(variables)));
}

std::string Ring::name() const {
    switch (kind_) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::IntegersMod: return "Z/" + modulus_.get_str();
    case RingKind::PolynomialsOverIntegers: {
        std::string s = "Z[";
        for (std::size_t i = 0; i < variables_.size(); ++i) s += (i ? "," : "") + variables_[i];
        return s + "]";
    }
    }
    return "?";
}

bool operator==(const Ring& a, const Ring& b) {
    return a.kind_ == b.kind_ && a.modulus_ == b.modulus_ && a.variables_ == b.variables_;
}

RingValue Ring::reduce(mpz_class v) const {
    switch (kind_) {
    case RingKind::Integers: return v;
    case RingKind::Rationals: return mpq_class(v);
    case RingKind::IntegersMod: {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), modulus_.get_mpz_t());
        return r;
    }
    case RingKind::PolynomialsOverIntegers: return IntPoly::constant(variables_.size(), v);
    }
    return v;
}

RingValue Ring::zero() const { return reduce(0); }
RingValue Ring::one() const { return reduce(1); }
RingValue Ring::from_integer(const mpz_class& n) const { return reduce(n); }

RingValue Ring::add(const RingValue& a, const RingValue& b) const {
    switch (kind_) {
    case RingKind::Integers: return mpz_class(std::get<mpz_class>(a) + std::get<mpz_class>(b));
    case RingKind::Rationals: return mpq_class(std::get<mpq_class>(a) + std::get<mpq_class>(b));
    case RingKind::IntegersMod: return reduce(std::get<mpz_class>(a) + std::get<mpz_class>(b));
    case RingKind::PolynomialsOverIntegers: return std::get<IntPoly>(a) + std::get<IntPoly>(b);
    }
    return a;
}

RingValue Ring::sub(const RingValue& a, const RingValue& b) const {
    switch (kind_) {
    case RingKind::Integers: return mpz_class(std::get<mpz_class>(a) - std::get<mpz_class>(b));
    case RingKind::Rationals: return mpq_class(std::get<mpq_class>(a) - std::get<mpq_class>(b));
    case RingKind::IntegersMod: return reduce(std::get<mpz_class>(a) - std::get<mpz_class>(b));
    case RingKind::PolynomialsOverIntegers: return std::get<IntPoly>(a) - std::get<IntPoly>(b);
    }
    return a;
}

RingValue Ring::neg(const RingValue& a) const {
    switch (kind_) {
    case RingKind::Integers: return mpz_class(-std::get<mpz_class>(a));
    case RingKind::Rationals: return mpq_class(-std::get<mpq_class>(a));
    case RingKind::IntegersMod: return reduce(-std::get<mpz_class>(a));
    case RingKind::PolynomialsOverIntegers: return -std::get<IntPoly>(a);
    }
    return a;
}

RingValue Ring::mul(const RingValue& a, const RingValue& b) const {
    switch (kind_) {
    case RingKind::Integers: return mpz_class(std::get<mpz_class>(a) * std::get<mpz_class>(b));
    case RingKind::Rationals: return mpq_class(std::get<mpq_class>(a) * std::get<mpq_class>(b));
    case RingKind::IntegersMod: return reduce(std::get<mpz_class>(a) * std::get<mpz_class>(b));
    case RingKind::PolynomialsOverIntegers: return std::get<IntPoly>(a) * std::get<IntPoly>(b);
    }
    return a;
}

bool Ring::is_zero(const RingValue& a) const {
    switch (kind_) {
    case RingKind::Integers:
    case RingKind::IntegersMod: return std::get<mpz_class>(a) == 0;
    case RingKind::Rationals: return std::get<mpq_class>(a) == 0;
    case RingKind::PolynomialsOverIntegers: return std::get<IntPoly>(a).is_zero();
    }
    return false;
}

bool Ring::equal(const RingValue& a, const RingValue& b) const {
    switch (kind_) {
    case RingKind::Integers:
    case RingKind::IntegersMod: return std::get<mpz_class>(a) == std::get<mpz_class>(b);
    case RingKind::Rationals: return std::get<mpq_class>(a) == std::get<mpq_class>(b);
    case RingKind::PolynomialsOverIntegers: return std::get<IntPoly>(a) == std::get<IntPoly>(b);
    }
    return false;
}

bool Ring::is_unit(const RingValue& a) const {
    switch (kind_) {
    case RingKind::Integers: return abs(std::get<mpz_class>(a)) == 1;
    case RingKind::Rationals: return std::get<mpq_class>(a) != 0;
    case RingKind::IntegersMod: {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), std::get<mpz_class>(a).get_mpz_t(), modulus_.get_mpz_t());
        return g == 1;
    }
    case RingKind::PolynomialsOverIntegers: {
        const auto& p = std::get<IntPoly>(a);
        return p.is_constant() && abs(p.constant_term()) == 1;
    }
    }
    return false;
}

std::optional<RingValue> Ring::exact_div(const RingValue& a, const RingValue& b) const {
    if (is_zero(b)) throw UsageError("exact division by zero in " + name());
    switch (kind_) {
    case RingKind::Integers: {
        const auto& x = std::get<mpz_class>(a);
        const auto& y = std::get<mpz_class>(b);
        if (!mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t())) return std::nullopt;
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        return q;
    }
    case RingKind::Rationals: return mpq_class(std::get<mpq_class>(a) / std::get<mpq_class>(b));
    case RingKind::IntegersMod: {
        // Solve b*q = a (mod m); solutions form q0 + k*(m/g).
        const auto& x = std::get<mpz_class>(a);
        const auto& y = std::get<mpz_class>(b);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), y.get_mpz_t(), modulus_.get_mpz_t());
        if (!mpz_divisible_p(x.get_mpz_t(), g.get_mpz_t())) return std::nullopt;
        mpz_class m2 = modulus_ / g, y2 = y / g, x2 = x / g, inv;
        if (m2 == 1) return mpz_class(0);
        mpz_invert(inv.get_mpz_t(), y2.get_mpz_t(), m2.get_mpz_t());
        mpz_class q = x2 * inv;
        mpz_fdiv_r(q.get_mpz_t(), q.get_mpz_t(), m2.get_mpz_t());
        return q;
    }
    case RingKind::PolynomialsOverIntegers: {
        auto q = std::get<IntPoly>(a).divide_exact(std::get<IntPoly>(b));
        if (!q) return std::nullopt;
        return RingValue(std::move(*q));
    }
    }
    return std::nullopt;
}

std::optional<RingValue> Ring::div_integer(const RingValue& a, const mpz_class& d) const {
    if (kind_ == RingKind::PolynomialsOverIntegers) {
        if (d == 0) throw UsageError("exact division by zero in " + name());
        auto q = std::get<IntPoly>(a).divide_exact(d);
        if (!q) return std::nullopt;
        return RingValue(std::move(*q));
    }
    return exact_div(a, from_integer(d));
}

bool Ring::integer_is_unit(const mpz_class& d) const { return is_unit(from_integer(d)); }
bool Ring::integer_is_zero(const mpz_class& d) const { return is_zero(from_integer(d)); }

std::optional<mpz_class> Ring::to_integer(const RingValue& a) const {
    switch (kind_) {
    case RingKind::Integers:
    case RingKind::IntegersMod: return std::get<mpz_class>(a);
    case RingKind::Rationals: {
        const auto& q = std::get<mpq_class>(a);
        if (q.get_den() != 1) return std::nullopt;
        return mpz_class(q.get_num());
    }
    case RingKind::PolynomialsOverIntegers: {
        const auto& p = std::get<IntPoly>(a);
        if (!p.is_constant()) return std::nullopt;
        return p.constant_term();
    }
    }
    return std::nullopt;
}

std::string Ring::format(const RingValue& a) const {
    switch (kind_) {
    case RingKind::Integers:
    case RingKind::IntegersMod: return std::get<mpz_class>(a).get_str();
    case RingKind::Rationals: return std::get<mpq_class>(a).get_str();
    case RingKind::PolynomialsOverIntegers: return std::get<IntPoly>(a).to_string(variables_);
    }
    return "?";
}

namespace {

// Recursive-descent parser for integer polynomial expressions:
//   expr := term (('+'|'-') term)*,  term := factor ('*' factor)*,
//   factor := ['-'] (integer | name ['^' integer] | '(' expr ')') ['^' integer]
class PolyParser {
public:
    PolyParser(const std::string& text, const std::vector<std::string>& names)
        : s_(text), names_(names) {}

    IntPoly parse() {
        IntPoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ValidationError("cannot parse ring element '" + s_ + "': " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    IntPoly expr() {
        IntPoly acc = term();
        for (;;) {
            if (accept('+'))
                acc = acc + term();
            else if (accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }
    IntPoly term() {
        IntPoly acc = factor();
        while (accept('*')) acc = acc * factor();
        return acc;
    }
    unsigned long exponent() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected exponent");
        return std::stoul(s_.substr(start, pos_ - start));
    }
    IntPoly factor() {
        if (accept('-')) return -factor();
        skip();
        IntPoly base(names_.size());
        if (accept('(')) {
            base = expr();
            if (!accept(')')) fail("missing ')'");
        } else if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            base = IntPoly::constant(names_.size(), mpz_class(s_.substr(start, pos_ - start)));
        } else if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto it = std::find(names_.begin(), names_.end(), name);
            if (it == names_.end()) fail("unknown variable '" + name + "'");
            base = IntPoly::variable(names_.size(), static_cast<std::size_t>(it - names_.begin()));
        } else {
            fail("expected a factor");
        }
        if (accept('^')) {
            unsigned long k = exponent();
            IntPoly r = IntPoly::constant(names_.size(), 1);
            for (unsigned long i = 0; i < k; ++i) r = r * base;
            return r;
        }
        return base;
    }

    const std::string& s_;
    const std::vector<std::string>& names_;
    std::size_t pos_ = 0;
};

mpz_class parse_integer(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    std::size_t start = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (start == t.size()) throw ValidationError("cannot parse integer '" + text + "'");
    for (std::size_t i = start; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) throw ValidationError("cannot parse integer '" + text + "'");
    if (t[0] == '+') t.erase(0, 1);
    return mpz_class(t);
}

} // namespace

RingValue Ring::parse(const std::string& text) const {
    switch (kind_) {
    case RingKind::Integers:
    case RingKind::IntegersMod: return reduce(parse_integer(text));
    case RingKind::Rationals: {
        auto slash = text.find('/');
        if (slash == std::string::npos) return mpq_class(parse_integer(text));
        mpz_class num = parse_integer(text.substr(0, slash));
        mpz_class den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    case RingKind::PolynomialsOverIntegers: return PolyParser(text, variables_).parse();
    }
    return zero();
}

// ---------------------------------------------------------------------------

RingElem::RingElem(RingPtr ring, RingValue value) : ring_(std::move(ring)), value_(std::move(value)) {}

RingElem RingElem::integer(RingPtr ring, long n) {
    auto v = ring->from_integer(n);
    return RingElem(std::move(ring), std::move(v));
}

RingElem RingElem::parse(RingPtr ring, const std::string& text) {
    auto v = ring->parse(text);
    return RingElem(std::move(ring), std::move(v));
}

namespace {
void require_same(const RingElem& a, const RingElem& b) {
    if (!(*a.ring() == *b.ring()))
        throw UsageError("ring mismatch: " + a.ring()->name() + " vs " + b.ring()->name());
}
} // namespace

RingElem operator+(const RingElem& a, const RingElem& b) {
    require_same(a, b);
    return RingElem(a.ring_, a.ring_->add(a.value_, b.value_));
}

RingElem operator-(const RingElem& a, const RingElem& b) {
    require_same(a, b);
    return RingElem(a.ring_, a.ring_->sub(a.value_, b.value_));
}

RingElem operator*(const RingElem& a, const RingElem& b) {
    require_same(a, b);
    return RingElem(a.ring_, a.ring_->mul(a.value_, b.value_));
}

RingElem RingElem::operator-() const { return RingElem(ring_, ring_->neg(value_)); }

bool operator==(const RingElem& a, const RingElem& b) {
    require_same(a, b);
    return a.ring_->equal(a.value_, b.value_);
}

std::optional<RingElem> RingElem::exact_div(const RingElem& b) const {
    require_same(*this, b);
    auto q = ring_->exact_div(value_, b.value_);
    if (!q) return std::nullopt;
    return RingElem(ring_, std::move(*q));
}

} // namespace fschubert
