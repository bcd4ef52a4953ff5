#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace fschubert {

using LatticeVector = std::vector<std::int64_t>;

/// Small dense integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<LatticeVector>& rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<std::int64_t>& data() const noexcept { return data_; }

    LatticeVector row(std::size_t r) const;
    LatticeVector column(std::size_t c) const;
    LatticeVector apply(std::span<const std::int64_t> v) const;
    IntMatrix transpose() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;
    friend auto operator<=>(const IntMatrix& a, const IntMatrix& b) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::int64_t> data_;
};

struct IntMatrixHash {
    std::size_t operator()(const IntMatrix& m) const noexcept;
};

std::int64_t gcd_of(std::span<const std::int64_t> v);

/// Unimodular V with row·V = e_1, for a primitive row vector (gcd 1).
IntMatrix unimodular_completion(std::span<const std::int64_t> primitive_row);

/// Inverse of a unimodular matrix (throws if not invertible over Z).
IntMatrix unimodular_inverse(const IntMatrix& m);

mpq_class determinant(const IntMatrix& m);
std::size_t rank_over_q(const IntMatrix& m);

/// Invariant factors d_1 | d_2 | ... of an mpz matrix (Smith normal form
/// diagonal, nonzero entries only, positive).
std::vector<mpz_class> invariant_factors(std::vector<std::vector<mpz_class>> rows, std::size_t cols);

/// True when every principal minor is positive (finite-type Cartan test).
bool all_principal_minors_positive(const IntMatrix& m);

} // namespace fschubert
