#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "fschubert/ring.hpp"

namespace fschubert {

inline constexpr std::size_t kMaxVars = 8;

struct Monomial {
    std::array<std::uint8_t, kMaxVars> e{};
    std::uint16_t deg = 0;

    static Monomial unit(std::size_t i) {
        Monomial m;
        m.e[i] = 1;
        m.deg = 1;
        return m;
    }
    Monomial operator+(const Monomial& o) const {
        Monomial m;
        for (std::size_t i = 0; i < kMaxVars; ++i) m.e[i] = static_cast<std::uint8_t>(e[i] + o.e[i]);
        m.deg = static_cast<std::uint16_t>(deg + o.deg);
        return m;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.deg == b.deg && a.e == b.e; }
    // Canonical order: ascending total degree, then descending lexicographic.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.deg != b.deg) return a.deg < b.deg;
        return b.e < a.e;
    }
};

/// Truncated power series in `nvars` variables.  All statements are modulo
/// terms of total degree > precision.  Terms are sorted in canonical order
/// and never carry a zero coefficient.
class Series {
public:
    using Term = std::pair<Monomial, RingValue>;

    Series() = default;
    Series(RingPtr ring, std::size_t nvars, int precision);

    static Series constant(RingPtr ring, std::size_t nvars, int precision, const RingValue& c);
    static Series variable(RingPtr ring, std::size_t nvars, int precision, std::size_t i);
    /// Build from unsorted terms; merges duplicates and drops zeros and
    /// terms above the precision.
    static Series from_terms(RingPtr ring, std::size_t nvars, int precision, std::vector<Term> terms);

    const RingPtr& ring() const noexcept { return ring_; }
    std::size_t nvars() const noexcept { return nvars_; }
    int precision() const noexcept { return precision_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    /// Lowest degree of a stored term; precision + 1 for a zero series.
    int valuation() const noexcept;
    RingValue constant_term() const;
    RingValue coefficient(const Monomial& m) const;
    Series homogeneous(int degree) const;
    /// Copy with precision lowered to min(p, precision()).
    Series truncated(int p) const;

    Series operator-() const;
    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);
    Series scaled(const RingValue& c) const;
    Series& operator+=(const Series& b) { return *this = *this + b; }
    Series& operator-=(const Series& b) { return *this = *this - b; }

    /// Equality modulo degree > min(p_a, p_b).
    bool equals(const Series& b) const;

    /// Every coefficient divided by the integer d; nullopt if some
    /// coefficient is not divisible.
    std::optional<Series> divide_integer(const mpz_class& d) const;

    std::string to_string(const std::vector<std::string>& names) const;

private:
    void check_compatible(const Series& b) const;

    RingPtr ring_;
    std::size_t nvars_ = 0;
    int precision_ = 0;
    std::vector<Term> terms_;
};

/// Substitution x_i -> images[i] (images with zero constant term), with a
/// memo of monomial images that is safe under concurrent use.
class Substitution {
public:
    explicit Substitution(std::vector<Series> images);

    Series apply(const Series& f) const;
    const std::vector<Series>& images() const noexcept { return images_; }

private:
    const Series& monomial_image(const Monomial& m) const;

    std::vector<Series> images_;
    RingPtr ring_;
    std::size_t target_vars_ = 0;
    mutable std::shared_mutex mutex_;
    mutable std::map<Monomial, Series> cache_;
};

} // namespace fschubert
