#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "fschubert/lattice.hpp"
#include "fschubert/ring.hpp"
#include "fschubert/root_system.hpp"
#include "fschubert/series.hpp"

namespace fschubert {

enum class FglKind { Additive, Multiplicative, Custom };

/// Truncated one-dimensional commutative formal group law
/// F(x,y) = x + y + Σ a_ij x^i y^j, 2 <= i+j <= N.
class FormalGroupLaw {
public:
    static std::shared_ptr<const FormalGroupLaw> additive(RingPtr ring, int N);
    static std::shared_ptr<const FormalGroupLaw> multiplicative(RingPtr ring, int N, const RingValue& beta);
    /// Entries (i, j, a_ij) with i, j >= 1.  Both (i, j) and (j, i) must be
    /// listed when i != j; a missing mirror entry reads as zero.
    static std::shared_ptr<const FormalGroupLaw> custom(RingPtr ring, int N,
                                                        const std::vector<std::tuple<int, int, RingValue>>& table);
    /// F = (x + y)/(1 + xy) expanded to degree N.
    static std::shared_ptr<const FormalGroupLaw> lorentz(RingPtr ring, int N);

    FglKind kind() const noexcept { return kind_; }
    const RingPtr& ring() const noexcept { return ring_; }
    int truncation() const noexcept { return N_; }
    const RingValue& beta() const noexcept { return beta_; }
    /// a_ij (zero outside the table).
    RingValue coefficient(int i, int j) const;
    /// F as a series in two variables.
    const Series& law() const noexcept { return law_; }
    /// The formal inverse ι(x) as a series in one variable.
    const Series& inverse() const noexcept { return inverse_; }

    /// F(f, g) for series with zero constant term.
    Series apply(const Series& f, const Series& g) const;
    /// ι(f) for a series with zero constant term.
    Series negate(const Series& f) const;

    std::string describe() const;

private:
    FormalGroupLaw(FglKind kind, RingPtr ring, int N);
    void finish();

    FglKind kind_;
    RingPtr ring_;
    int N_;
    RingValue beta_;
    std::map<std::pair<int, int>, RingValue> table_;
    Series law_;
    Series inverse_;
};

using FglPtr = std::shared_ptr<const FormalGroupLaw>;

/// S = R[[Λ]]_F in the coordinates x_i = x_{e_i} of a basis of Λ, with the
/// induced W-action and exact division by the x_α.
class FormalGroupAlgebra {
public:
    FormalGroupAlgebra(WeylGroupPtr weyl, FglPtr fgl);

    const WeylGroup& weyl() const noexcept { return *weyl_; }
    const RootDatum& datum() const noexcept { return weyl_->datum(); }
    const FormalGroupLaw& fgl() const noexcept { return *fgl_; }
    const RingPtr& ring() const noexcept { return fgl_->ring(); }
    int truncation() const noexcept { return fgl_->truncation(); }
    std::size_t nvars() const noexcept { return datum().rank(); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    Series zero() const;
    Series one() const;
    Series constant(const RingValue& c) const;
    Series variable(std::size_t i) const;

    /// x_λ, memoized.
    const Series& x(const LatticeVector& lambda) const;
    const Series& x_root(std::size_t root_idx) const;

    /// w(f): substitution x_i -> x_{w(e_i)}.
    Series act(int w, const Series& f) const;

    /// h with x_λ h = f modulo degree > p_f, or nullopt.  Throws
    /// PrecisionError for precision-0 input and ArithmeticError when the
    /// linear content of x_λ vanishes in R.
    std::optional<Series> divide_by_weight(const Series& f, const LatticeVector& lambda) const;
    std::optional<Series> divide_by_root(const Series& f, std::size_t root_idx) const;

    RingValue augmentation(const Series& f) const { return f.constant_term(); }

private:
    const Substitution& action(int w) const;

    WeylGroupPtr weyl_;
    FglPtr fgl_;
    std::vector<std::string> warnings_;

    mutable std::shared_mutex mutex_;
    mutable std::map<LatticeVector, Series> x_cache_;
    mutable std::vector<std::unique_ptr<Substitution>> actions_;
};

using AlgebraPtr = std::shared_ptr<const FormalGroupAlgebra>;

/// Algebra map S(Λ) -> S(Λ') induced by a surjection q: Λ -> Z^{n'}.
class LatticeQuotientMap {
public:
    /// `q` has n' rows and rank(Λ) columns; n' = 0 gives the augmentation.
    LatticeQuotientMap(const FormalGroupAlgebra& source, const IntMatrix& q);

    Series apply(const Series& f) const;
    std::size_t target_vars() const noexcept { return target_vars_; }

private:
    std::size_t target_vars_;
    std::unique_ptr<Substitution> subst_;
};

/// x_λ in an arbitrary number of variables (no root datum needed).
Series weight_series(const FormalGroupLaw& F, const LatticeVector& lambda);

} // namespace fschubert
