#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace fschubert {

/// Multivariate polynomial with integer coefficients.  Terms are kept sorted
/// (ascending total degree, then descending lexicographic exponents) with no
/// zero coefficients, so structural equality is value equality.
class IntPoly {
public:
    using Exponents = std::vector<std::uint32_t>;
    using Term = std::pair<Exponents, mpz_class>;

    IntPoly() = default;
    explicit IntPoly(std::size_t nvars) : nvars_(nvars) {}

    static IntPoly constant(std::size_t nvars, const mpz_class& c);
    static IntPoly variable(std::size_t nvars, std::size_t index);

    std::size_t nvars() const noexcept { return nvars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    mpz_class constant_term() const;

    IntPoly operator-() const;
    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    friend bool operator==(const IntPoly& a, const IntPoly& b);

    // Exact quotients; nullopt when the division does not come out even.
    std::optional<IntPoly> divide_exact(const IntPoly& d) const;
    std::optional<IntPoly> divide_exact(const mpz_class& d) const;

    std::string to_string(const std::vector<std::string>& names) const;

private:
    void canonicalize();

    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

using RingValue = std::variant<mpz_class, mpq_class, IntPoly>;

enum class RingKind { Integers, Rationals, IntegersMod, PolynomialsOverIntegers };

/// Descriptor and arithmetic for the coefficient ring R.  Values are plain
/// `RingValue` payloads; every operation interprets them through the ring
/// that produced them.
class Ring {
public:
    static std::shared_ptr<const Ring> integers();
    static std::shared_ptr<const Ring> rationals();
    static std::shared_ptr<const Ring> integers_mod(const mpz_class& modulus);
    static std::shared_ptr<const Ring> polynomials(std::vector<std::string> variables);

    RingKind kind() const noexcept { return kind_; }
    const mpz_class& modulus() const noexcept { return modulus_; }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    std::string name() const;

    friend bool operator==(const Ring& a, const Ring& b);

    RingValue zero() const;
    RingValue one() const;
    RingValue from_integer(const mpz_class& n) const;

    RingValue add(const RingValue& a, const RingValue& b) const;
    RingValue sub(const RingValue& a, const RingValue& b) const;
    RingValue neg(const RingValue& a) const;
    RingValue mul(const RingValue& a, const RingValue& b) const;

    bool is_zero(const RingValue& a) const;
    bool equal(const RingValue& a, const RingValue& b) const;
    bool is_unit(const RingValue& a) const;

    /// q with b*q == a.  Among several solutions (zero divisors mod m) the
    /// smallest non-negative representative is returned.  Throws UsageError
    /// when b is zero.
    std::optional<RingValue> exact_div(const RingValue& a, const RingValue& b) const;
    std::optional<RingValue> div_integer(const RingValue& a, const mpz_class& d) const;

    bool integer_is_unit(const mpz_class& d) const;
    bool integer_is_zero(const mpz_class& d) const;

    /// Integer part of a value, when the value is (the image of) an integer.
    std::optional<mpz_class> to_integer(const RingValue& a) const;

    std::string format(const RingValue& a) const;
    RingValue parse(const std::string& text) const;

private:
    Ring(RingKind kind, mpz_class modulus, std::vector<std::string> variables);

    RingValue reduce(mpz_class v) const;

    RingKind kind_;
    mpz_class modulus_;
    std::vector<std::string> variables_;
};

using RingPtr = std::shared_ptr<const Ring>;

/// A value bundled with its ring; mixing rings is a usage error.
class RingElem {
public:
    RingElem(RingPtr ring, RingValue value);
    static RingElem integer(RingPtr ring, long n);
    static RingElem parse(RingPtr ring, const std::string& text);

    const RingPtr& ring() const noexcept { return ring_; }
    const RingValue& value() const noexcept { return value_; }

    friend RingElem operator+(const RingElem& a, const RingElem& b);
    friend RingElem operator-(const RingElem& a, const RingElem& b);
    friend RingElem operator*(const RingElem& a, const RingElem& b);
    RingElem operator-() const;
    friend bool operator==(const RingElem& a, const RingElem& b);

    bool is_zero() const { return ring_->is_zero(value_); }
    bool is_unit() const { return ring_->is_unit(value_); }
    std::optional<RingElem> exact_div(const RingElem& b) const;
    std::string to_string() const { return ring_->format(value_); }

private:
    RingPtr ring_;
    RingValue value_;
};

} // namespace fschubert
