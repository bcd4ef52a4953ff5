#include "fschubert/formal_group.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "fschubert/errors.hpp"

namespace fschubert {

FormalGroupLaw::FormalGroupLaw(FglKind kind, RingPtr ring, int N)
    : kind_(kind), ring_(std::move(ring)), N_(N), beta_(ring_->zero()) {
    if (N_ < 2) throw ValidationError("truncation degree N must be at least 2");
    if (N_ > 60) throw ValidationError("truncation degree N must be at most 60");
}

RingValue FormalGroupLaw::coefficient(int i, int j) const {
    auto it = table_.find({i, j});
    return it == table_.end() ? ring_->zero() : it->second;
}

void FormalGroupLaw::finish() {
    std::vector<Series::Term> terms;
    terms.emplace_back(Monomial::unit(0), ring_->one());
    terms.emplace_back(Monomial::unit(1), ring_->one());
    for (const auto& [ij, c] : table_) {
        Monomial m;
        m.e[0] = static_cast<std::uint8_t>(ij.first);
        m.e[1] = static_cast<std::uint8_t>(ij.second);
        m.deg = static_cast<std::uint16_t>(ij.first + ij.second);
        terms.emplace_back(m, c);
    }
    law_ = Series::from_terms(ring_, 2, N_, std::move(terms));

    // ι(x) = -x + Σ b_k x^k: fix b_k from the x^k coefficient of F(x, ι_{<k}).
    Series x = Series::variable(ring_, 1, N_, 0);
    Series iota = -x;
    for (int k = 2; k <= N_; ++k) {
        Series s = apply(x, iota);
        Monomial m;
        m.e[0] = static_cast<std::uint8_t>(k);
        m.deg = static_cast<std::uint16_t>(k);
        RingValue c = s.coefficient(m);
        if (ring_->is_zero(c)) continue;
        iota = iota - Series::from_terms(ring_, 1, N_, {{m, c}});
    }
    inverse_ = iota;
}

Series FormalGroupLaw::apply(const Series& f, const Series& g) const {
    return Substitution({f, g}).apply(law_);
}

Series FormalGroupLaw::negate(const Series& f) const { return Substitution({f}).apply(inverse_); }

std::shared_ptr<const FormalGroupLaw> FormalGroupLaw::additive(RingPtr ring, int N) {
    std::shared_ptr<FormalGroupLaw> F(new FormalGroupLaw(FglKind::Additive, std::move(ring), N));
    F->finish();
    return F;
}

std::shared_ptr<const FormalGroupLaw> FormalGroupLaw::multiplicative(RingPtr ring, int N, const RingValue& beta) {
    std::shared_ptr<FormalGroupLaw> F(new FormalGroupLaw(FglKind::Multiplicative, std::move(ring), N));
    F->beta_ = beta;
    RingValue a11 = F->ring_->neg(beta);
    if (!F->ring_->is_zero(a11)) F->table_[{1, 1}] = a11;
    F->finish();
    return F;
}

std::shared_ptr<const FormalGroupLaw> FormalGroupLaw::custom(RingPtr ring, int N,
                                                             const std::vector<std::tuple<int, int, RingValue>>& table) {
    std::shared_ptr<FormalGroupLaw> F(new FormalGroupLaw(FglKind::Custom, std::move(ring), N));
    for (const auto& [i, j, c] : table) {
        if (i < 0 || j < 0) throw ValidationError("negative exponent in formal group law table");
        if (i == 0 || j == 0)
            throw ValidationError("pure terms a_" + std::to_string(i) + std::to_string(j) +
                                  " are not allowed: F(x,0) must equal x");
        if (i + j > N) throw ValidationError("table entry of degree " + std::to_string(i + j) + " exceeds N");
        if (F->table_.count({i, j})) throw ValidationError("duplicate table entry");
        if (!F->ring_->is_zero(c)) F->table_[{i, j}] = c;
    }
    for (const auto& [ij, c] : F->table_)
        if (!F->ring_->equal(c, F->coefficient(ij.second, ij.first)))
            throw ValidationError("formal group law is not commutative: a_" + std::to_string(ij.first) + "," +
                                  std::to_string(ij.second) + " != a_" + std::to_string(ij.second) + "," +
                                  std::to_string(ij.first));
    F->finish();

    // Associativity F(F(x,y),z) = F(x,F(y,z)) modulo degree N+1.
    const RingPtr& R = F->ring_;
    Series x = Series::variable(R, 3, N, 0), y = Series::variable(R, 3, N, 1), z = Series::variable(R, 3, N, 2);
    Series diff = F->apply(F->apply(x, y), z) - F->apply(x, F->apply(y, z));
    if (!diff.is_zero())
        throw ValidationError("formal group law fails associativity in degree " +
                              std::to_string(diff.terms().front().first.deg));
    return F;
}

std::shared_ptr<const FormalGroupLaw> FormalGroupLaw::lorentz(RingPtr ring, int N) {
    std::vector<std::tuple<int, int, RingValue>> table;
    for (int k = 1; 2 * k + 1 <= N; ++k) {
        RingValue c = ring->from_integer(k % 2 ? -1 : 1);
        table.emplace_back(k + 1, k, c);
        table.emplace_back(k, k + 1, c);
    }
    return custom(std::move(ring), N, table);
}

std::string FormalGroupLaw::describe() const {
    switch (kind_) {
    case FglKind::Additive: return "additive";
    case FglKind::Multiplicative: return "multiplicative(" + ring_->format(beta_) + ")";
    case FglKind::Custom: return "custom";
    }
    return "custom";
}

Series weight_series(const FormalGroupLaw& F, const LatticeVector& lambda) {
    const std::size_t n = lambda.size();
    const RingPtr& R = F.ring();
    const int N = F.truncation();
    Series acc(R, n, N);
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (lambda[i] == 0) continue;
        Series xi = Series::variable(R, n, N, i);
        Series m = xi;
        for (std::int64_t k = 1; k < std::abs(lambda[i]); ++k) m = F.apply(m, xi);
        if (lambda[i] < 0) m = F.negate(m);
        acc = first ? m : F.apply(acc, m);
        first = false;
    }
    return acc;
}

FormalGroupAlgebra::FormalGroupAlgebra(WeylGroupPtr weyl, FglPtr fgl) : weyl_(std::move(weyl)), fgl_(std::move(fgl)) {
    if (nvars() > kMaxVars) throw ValidationError("rank above 8 is not supported");
    actions_.resize(weyl_->size());
    const RootDatum& rd = datum();
    const Ring& R = *ring();
    for (std::size_t r = 0; r < rd.num_positive(); ++r) {
        std::int64_t d = gcd_of(rd.root(r).coords);
        if (d > 1 && !R.integer_is_unit(d)) {
            std::ostringstream os;
            os << "root " << r + 1 << " has linear content " << d << " in the lattice, not a unit in " << R.name()
               << "; x_alpha may fail to be regular in S (symplectic simply connected component)";
            warnings_.push_back(os.str());
        }
    }
    if (rd.has_symplectic_sc_component())
        warnings_.push_back("type C on the simply connected lattice: the regularity hypotheses of the image "
                            "criterion are not guaranteed");
    if (R.kind() == RingKind::IntegersMod && mpz_divisible_ui_p(R.modulus().get_mpz_t(), 2))
        warnings_.push_back("2 is a zero divisor in " + R.name() + "; regularity assumptions may fail");
}

Series FormalGroupAlgebra::zero() const { return Series(ring(), nvars(), truncation()); }
Series FormalGroupAlgebra::one() const { return constant(ring()->one()); }
Series FormalGroupAlgebra::constant(const RingValue& c) const {
    return Series::constant(ring(), nvars(), truncation(), c);
}
Series FormalGroupAlgebra::variable(std::size_t i) const {
    return Series::variable(ring(), nvars(), truncation(), i);
}

const Series& FormalGroupAlgebra::x(const LatticeVector& lambda) const {
    if (lambda.size() != nvars()) throw UsageError("weight has the wrong dimension");
    {
        std::shared_lock lock(mutex_);
        auto it = x_cache_.find(lambda);
        if (it != x_cache_.end()) return it->second;
    }
    Series value;
    std::size_t i = 0;
    while (i < lambda.size() && lambda[i] == 0) ++i;
    if (i == lambda.size()) {
        value = zero();
    } else {
        std::int64_t sign = lambda[i] > 0 ? 1 : -1;
        LatticeVector unit(nvars(), 0);
        unit[i] = sign;
        if (lambda == unit) {
            value = sign > 0 ? variable(i) : fgl_->negate(variable(i));
        } else {
            LatticeVector rest = lambda;
            rest[i] -= sign;
            value = fgl_->apply(x(rest), x(unit));
        }
    }
    std::unique_lock lock(mutex_);
    return x_cache_.emplace(lambda, std::move(value)).first->second;
}

const Series& FormalGroupAlgebra::x_root(std::size_t root_idx) const { return x(datum().root(root_idx).coords); }

const Substitution& FormalGroupAlgebra::action(int w) const {
    {
        std::shared_lock lock(mutex_);
        if (actions_.at(static_cast<std::size_t>(w))) return *actions_[static_cast<std::size_t>(w)];
    }
    std::vector<Series> images;
    for (std::size_t i = 0; i < nvars(); ++i) {
        LatticeVector e(nvars(), 0);
        e[i] = 1;
        images.push_back(x(weyl_->act(w, e)));
    }
    auto sub = std::make_unique<Substitution>(std::move(images));
    std::unique_lock lock(mutex_);
    auto& slot = actions_[static_cast<std::size_t>(w)];
    if (!slot) slot = std::move(sub);
    return *slot;
}

Series FormalGroupAlgebra::act(int w, const Series& f) const {
    if (w == 0) return f;
    return action(w).apply(f);
}

namespace {

std::vector<Series> linear_images(const RingPtr& R, const IntMatrix& V, int prec) {
    // x_i -> Σ_j V_ij y_j
    std::vector<Series> out;
    const std::size_t n = V.rows();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Series::Term> terms;
        for (std::size_t j = 0; j < n; ++j)
            if (V(i, j) != 0) terms.emplace_back(Monomial::unit(j), R->from_integer(static_cast<long>(V(i, j))));
        out.push_back(Series::from_terms(R, n, prec, std::move(terms)));
    }
    return out;
}

} // namespace

std::optional<Series> FormalGroupAlgebra::divide_by_weight(const Series& f, const LatticeVector& lambda) const {
    if (f.precision() < 1)
        throw PrecisionError("division by x_lambda of a series with precision 0 certifies nothing", 1);
    const std::int64_t d = gcd_of(lambda);
    if (d == 0) throw UsageError("division by x_0 = 0");
    const RingPtr& R = ring();
    if (R->integer_is_zero(d))
        throw ArithmeticError("x_lambda has vanishing linear part in " + R->name() +
                              " (regularity of x_alpha violated)");
    const Series& g = x(lambda);
    const int pr = std::min(f.precision(), g.precision());
    const std::size_t n = nvars();

    LatticeVector ell = lambda;
    for (auto& v : ell) v /= d;
    std::size_t nonzero = 0, pivot = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (ell[i] != 0) {
            ++nonzero;
            pivot = i;
        }
    mpz_class dd(static_cast<long>(d));
    Series F = f.truncated(pr), G = g;
    std::optional<IntMatrix> V;
    if (nonzero == 1 && (ell[pivot] == 1 || ell[pivot] == -1)) {
        if (ell[pivot] < 0) dd = -dd;
    } else {
        V = unimodular_completion(ell);
        Substitution to_y(linear_images(R, *V, truncation()));
        F = to_y.apply(F);
        G = to_y.apply(G);
        pivot = 0;
    }

    if (!R->is_zero(F.constant_term())) return std::nullopt;
    Series residual = F;
    std::vector<Series::Term> quotient;
    for (int t = 0; t < pr; ++t) {
        std::vector<Series::Term> qt;
        for (const auto& [m, c] : residual.terms()) {
            if (m.deg < t + 1) continue;
            if (m.deg > t + 1) break;
            if (m.e[pivot] == 0) return std::nullopt;
            auto q = R->div_integer(c, dd);
            if (!q) return std::nullopt;
            Monomial mm = m;
            mm.e[pivot] -= 1;
            mm.deg -= 1;
            qt.emplace_back(mm, std::move(*q));
        }
        if (qt.empty()) continue;
        Series qs = Series::from_terms(R, n, pr, qt);
        residual = residual - G * qs;
        quotient.insert(quotient.end(), qt.begin(), qt.end());
    }
    Series h = Series::from_terms(R, n, pr - 1, std::move(quotient));
    if (V) {
        Substitution to_x(linear_images(R, unimodular_inverse(*V), truncation()));
        h = to_x.apply(h);
    }
    return h;
}

std::optional<Series> FormalGroupAlgebra::divide_by_root(const Series& f, std::size_t root_idx) const {
    return divide_by_weight(f, datum().root(root_idx).coords);
}

LatticeQuotientMap::LatticeQuotientMap(const FormalGroupAlgebra& source, const IntMatrix& q) : target_vars_(q.rows()) {
    const std::size_t n = source.nvars();
    if (q.cols() != n) throw UsageError("quotient map has the wrong number of columns");
    if (target_vars_ > 0) {
        std::vector<std::vector<mpz_class>> rows(q.rows(), std::vector<mpz_class>(n));
        for (std::size_t r = 0; r < q.rows(); ++r)
            for (std::size_t c = 0; c < n; ++c) rows[r][c] = static_cast<long>(q(r, c));
        auto inv = invariant_factors(rows, n);
        bool surjective = inv.size() == target_vars_ && std::all_of(inv.begin(), inv.end(), [](auto& v) { return v == 1; });
        if (!surjective) throw UsageError("lattice map is not surjective onto Z^" + std::to_string(target_vars_));
    }
    std::vector<Series> images;
    for (std::size_t i = 0; i < n; ++i) images.push_back(weight_series(source.fgl(), q.column(i)));
    if (target_vars_ == 0) {
        images.assign(n, Series(source.ring(), 0, source.truncation()));
    }
    subst_ = std::make_unique<Substitution>(std::move(images));
}

Series LatticeQuotientMap::apply(const Series& f) const { return subst_->apply(f); }

} // namespace fschubert
