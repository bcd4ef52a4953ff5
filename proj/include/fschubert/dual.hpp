#pragma once

#include <climits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fschubert/hecke.hpp"

namespace fschubert {

/// Σ q_w f_w, dense over W in enumeration order.
struct DualElem {
    std::vector<QElem> c;

    int precision() const;
    bool in_S() const;
};

/// Σ q_{w̄} f_{w̄} over W/W_Ξ, indexed by position in W^Ξ.
struct ParabolicDualElem {
    Parabolic xi;
    std::vector<QElem> c;

    int precision() const;
    bool in_S() const;
};

struct MembershipResult {
    bool accepted = true;
    int witness_root = -1;  // positive root index
    int witness_w = -1;
    int certified_degree = INT_MAX;
};

struct BasisSolveResult {
    bool in_image = true;
    int failed_at = -1;
    std::map<int, Series> coeffs;  // keyed by Weyl element
    int certified_degree = INT_MAX;
};

struct PairingReport {
    Parabolic xi;
    std::vector<int> basis;  // elements of W^Ξ
    std::vector<std::vector<Series>> matrix;
    std::optional<Series> determinant;  // omitted for large bases
    RingValue det_augmentation;
    bool nondegenerate = false;
    bool symmetric = false;
    int precision = INT_MAX;
};

struct EulerCheck {
    bool holds = true;
    DualElem lhs;  // x_{Π/Ξ} • f_{w̄} in the Borel model
    Series expected;  // w(x_{Π/Ξ})
};

struct BorelReport {
    int degree_bound = 0;
    std::size_t generators = 0;
    std::size_t basis_size = 0;
    std::size_t rank = 0;
    std::vector<mpz_class> invariant_factors;
    bool surjective = false;
    std::vector<std::string> cokernel;
    std::vector<int> torsion_primes;
    std::optional<bool> table_prediction;
    int certified_degree = INT_MAX;
};

/// Operations on S*_W, Q*_W and their parabolic versions.
class Dual {
public:
    explicit Dual(ContextPtr ctx);

    const Context& ctx() const noexcept { return *ctx_; }
    const ContextPtr& ctx_ptr() const noexcept { return ctx_; }
    const WeylGroup& W() const noexcept { return ctx_->W(); }

    DualElem zero() const;
    DualElem unit() const;
    DualElem basis_vector(int w) const;
    DualElem from_series(const std::vector<Series>& coeffs) const;
    std::vector<Series> to_series(const DualElem& f) const;
    bool equal(const DualElem& a, const DualElem& b) const;
    DualElem add(const DualElem& a, const DualElem& b) const;
    DualElem sub(const DualElem& a, const DualElem& b) const;
    DualElem mul(const DualElem& a, const DualElem& b) const;
    /// Coefficientwise product with a fixed element of Q.
    DualElem scale(const QElem& q, const DualElem& f) const;

    DualElem bullet(const QWElem& z, const DualElem& f) const;
    DualElem A_simple(std::size_t i, const DualElem& f) const;
    /// A_I = Y_I •, so the last letter acts first.
    DualElem A_word(const std::vector<int>& word, const DualElem& f) const;
    /// A_{Ξ/Ξ'} on a W_Ξ'-invariant element; usage error otherwise.
    DualElem A_parabolic(Parabolic xi, Parabolic xi_prime, const DualElem& f,
                         const std::vector<int>* reps = nullptr) const;

    /// ψ_I = A_{I^rev}(x_Π f_e); throws ArithmeticError if a coefficient
    /// fails to land in S.
    DualElem bott_samelson(const std::vector<int>& word) const;
    /// ψ_{I_w} for the canonical word (memoized).
    const DualElem& bs_basis(int w) const;
    /// Roots whose x-product is ψ_{I_w}(w).
    std::vector<std::size_t> bs_lead_factors(int w, Parabolic xi = {}) const;

    DualElem char_map(const Series& s) const;
    MembershipResult membership(const DualElem& f) const;
    BasisSolveResult to_bs_basis(const DualElem& f) const;

    // Parabolic models.
    ParabolicDualElem parabolic_zero(Parabolic xi) const;
    ParabolicDualElem parabolic_unit(Parabolic xi) const;
    ParabolicDualElem parabolic_basis_vector(Parabolic xi, int w) const;
    ParabolicDualElem as_parabolic(const DualElem& f) const;
    DualElem to_borel(const ParabolicDualElem& g) const;
    /// p^⋆ from g.xi down to a subset.
    ParabolicDualElem p_star(const ParabolicDualElem& g, Parabolic finer) const;
    /// d^⋆ from g.xi up to a superset.
    ParabolicDualElem d_star(const ParabolicDualElem& g, Parabolic coarser) const;
    bool parabolic_equal(const ParabolicDualElem& a, const ParabolicDualElem& b) const;
    ParabolicDualElem parabolic_mul(const ParabolicDualElem& a, const ParabolicDualElem& b) const;

    /// First (i, u) with f_u != f_{u s_i}, i in Ξ; nullopt when invariant.
    std::optional<std::pair<int, int>> invariance_witness(const DualElem& f, Parabolic xi) const;
    bool is_invariant(const DualElem& f, Parabolic xi) const { return !invariance_witness(f, xi); }
    ParabolicDualElem section(const DualElem& f, Parabolic xi) const;

    /// 𝒜_{Ξ/Ξ'} with Ξ' = g.xi: lift, apply Y_{Ξ/Ξ'}•, section.
    ParabolicDualElem push(const ParabolicDualElem& g, Parabolic xi, const std::vector<int>* reps = nullptr) const;
    ParabolicDualElem parabolic_class(Parabolic xi, const std::vector<int>& word) const;
    const ParabolicDualElem& parabolic_basis(Parabolic xi, int w) const;
    BasisSolveResult to_parabolic_basis(const ParabolicDualElem& g) const;

    Series pairing(Parabolic xi, const ParabolicDualElem& a, const ParabolicDualElem& b) const;
    PairingReport pairing_matrix(Parabolic xi, unsigned threads = 1) const;

    EulerCheck euler_class(Parabolic xi, int w) const;
    BorelReport borel_check(int degree_bound) const;

private:
    BasisSolveResult triangular_solve(const std::vector<QElem>& f, const std::vector<int>& labels,
                                      const std::vector<const std::vector<QElem>*>& basis,
                                      const std::vector<std::vector<std::size_t>>& leads) const;

    ContextPtr ctx_;
    mutable std::mutex mutex_;
    mutable std::map<int, DualElem> bs_cache_;
    mutable std::map<std::pair<std::uint32_t, int>, ParabolicDualElem> pb_cache_;
};

} // namespace fschubert
