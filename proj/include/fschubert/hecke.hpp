#pragma once

#include <climits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fschubert/formal_group.hpp"
#include "fschubert/root_system.hpp"
#include "fschubert/series.hpp"

namespace fschubert {

/// Element num / ∏ x_β^{den[β]} of Q, β running over positive roots.
/// Negative-root denominators are rewritten through the unit
/// u_β = x_β / x_{-β}.  After normalization no x_β with den[β] > 0 divides
/// the numerator.
struct QElem {
    Series num;
    std::vector<std::uint16_t> den;

    bool in_S() const;
    bool is_zero() const { return num.is_zero(); }
    int precision() const { return num.precision(); }
    int den_degree() const;
};

/// Finite combination Σ q_w δ_w.  `floor` records the lowest precision of
/// coefficients that vanished and were dropped.
struct QWElem {
    std::map<int, QElem> terms;
    int floor = INT_MAX;

    const QElem* at(int w) const {
        auto it = terms.find(w);
        return it == terms.end() ? nullptr : &it->second;
    }
    int precision() const;
};

enum class WordKind { X, Y };

struct XBasisResult {
    bool in_DF = true;
    int failed_at = -1;             // element whose coefficient kept a denominator
    std::map<int, Series> coeffs;   // nonzero c_w
    int precision = INT_MAX;
};

/// Shared computational context: W, S, root series, units and the Q / Q_W
/// arithmetic built on them.
class Context {
public:
    explicit Context(AlgebraPtr algebra);

    const FormalGroupAlgebra& S() const noexcept { return *S_; }
    const WeylGroup& W() const noexcept { return S_->weyl(); }
    const RootDatum& rd() const noexcept { return S_->datum(); }
    const RingPtr& ring() const noexcept { return S_->ring(); }
    int truncation() const noexcept { return S_->truncation(); }
    std::size_t num_positive() const noexcept { return rd().num_positive(); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    const Series& x(std::size_t root_idx) const { return S_->x_root(root_idx); }
    /// u_β = x_β / x_{-β} for a positive root β.
    const Series& unit(std::size_t pos_root) const { return units_.at(pos_root); }
    /// x_Π = ∏ over negative roots.
    const Series& x_pi() const noexcept { return x_pi_; }
    /// ∏ x_α over the given roots.
    Series root_product(const std::vector<std::size_t>& roots) const;
    /// Negative roots of Σ_Ξ \ Σ_Ξ' (the factors of x_{Ξ/Ξ'}).
    std::vector<std::size_t> relative_negative_roots(Parabolic xi, Parabolic xi_prime) const;

    // Q arithmetic.
    QElem q_from(const Series& s) const;
    QElem q_zero() const { return q_from(S_->zero()); }
    QElem q_one() const { return q_from(S_->one()); }
    /// 1 / x_α for any root α.
    QElem q_inv_root(std::size_t root_idx) const;
    QElem q_add(const QElem& a, const QElem& b) const;
    QElem q_sub(const QElem& a, const QElem& b) const;
    QElem q_neg(const QElem& a) const;
    QElem q_mul(const QElem& a, const QElem& b) const;
    QElem q_mul(const QElem& a, const Series& s) const;
    QElem q_act(int w, const QElem& a) const;
    bool q_equal(const QElem& a, const QElem& b) const;
    /// Greedy per-root cancellation.  Throws PrecisionError if divisibility
    /// cannot be decided at the available precision.
    void normalize(QElem& a) const;
    std::string q_to_string(const QElem& a) const;

    // Q_W arithmetic.
    QWElem qw_delta(int w) const;
    QWElem qw_scalar(const QElem& q) const;
    QWElem qw_add(const QWElem& a, const QWElem& b) const;
    QWElem qw_sub(const QWElem& a, const QWElem& b) const;
    QWElem qw_mul(const QWElem& a, const QWElem& b) const;
    QWElem qw_left_scale(const QElem& q, const QWElem& a) const;
    bool qw_equal(const QWElem& a, const QWElem& b) const;

    /// κ_α = 1/x_α + 1/x_{-α} as an element of S (throws ArithmeticError if
    /// it does not normalize).
    const Series& kappa(std::size_t simple) const;
    QWElem demazure_X(std::size_t simple) const;
    QWElem pushpull_Y(std::size_t simple) const;
    QWElem word_element(WordKind kind, const std::vector<int>& word) const;
    /// Y_{Ξ/Ξ'} = Σ_{w} w(1/x_{Ξ/Ξ'}) δ_w over minimal representatives of
    /// W_Ξ/W_Ξ', or over the supplied representatives.
    QWElem pushpull_parabolic(Parabolic xi, Parabolic xi_prime, const std::vector<int>* reps = nullptr) const;

    /// X_{I_w} for the canonical word of w (memoized).
    const QWElem& X_basis_element(int w) const;
    XBasisResult to_X_basis(const QWElem& z) const;
    QWElem from_X_basis(const std::map<int, Series>& coeffs) const;

private:
    void drop_zeros(QWElem& a) const;

    AlgebraPtr S_;
    std::vector<Series> units_;
    Series x_pi_;
    std::vector<std::string> warnings_;

    mutable std::mutex mutex_;
    mutable std::map<std::size_t, Series> kappa_cache_;
    mutable std::map<int, QWElem> xbasis_cache_;
};

using ContextPtr = std::shared_ptr<const Context>;

} // namespace fschubert
