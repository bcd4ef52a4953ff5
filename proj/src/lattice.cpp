#include "fschubert/lattice.hpp"

#include <numeric>
#include <utility>

#include "fschubert/errors.hpp"

namespace fschubert {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<LatticeVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw ValidationError("matrix row has wrong length");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

LatticeVector IntMatrix::row(std::size_t r) const {
    return LatticeVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

LatticeVector IntMatrix::column(std::size_t c) const {
    LatticeVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

LatticeVector IntMatrix::apply(std::span<const std::int64_t> v) const {
    if (v.size() != cols_) throw UsageError("matrix/vector dimension mismatch");
    LatticeVector out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
    return out;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw UsageError("matrix product dimension mismatch");
    IntMatrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            auto aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += aik * b(k, j);
        }
    return p;
}

std::size_t IntMatrixHash::operator()(const IntMatrix& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : m.data()) {
        h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

std::int64_t gcd_of(std::span<const std::int64_t> v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x);
    return g;
}

namespace {

// (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

} // namespace

IntMatrix unimodular_completion(std::span<const std::int64_t> primitive_row) {
    const std::size_t n = primitive_row.size();
    if (gcd_of(primitive_row) != 1) throw UsageError("unimodular completion needs a primitive vector");
    IntMatrix v = IntMatrix::identity(n);
    LatticeVector r(primitive_row.begin(), primitive_row.end());
    for (std::size_t j = 1; j < n; ++j) {
        if (r[j] == 0) continue;
        auto [g, s, t] = ext_gcd(r[0], r[j]);
        std::int64_t a = r[0] / g, b = r[j] / g;
        // Column operation with determinant s*a + t*b = 1.
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t c0 = v(i, 0), cj = v(i, j);
            v(i, 0) = s * c0 + t * cj;
            v(i, j) = -b * c0 + a * cj;
        }
        r[0] = g;
        r[j] = 0;
    }
    if (r[0] == -1)
        for (std::size_t i = 0; i < n; ++i) v(i, 0) = -v(i, 0);
    return v;
}

namespace {

std::vector<std::vector<mpq_class>> to_rational(const IntMatrix& m) {
    std::vector<std::vector<mpq_class>> a(m.rows(), std::vector<mpq_class>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = mpq_class(static_cast<long>(m(r, c)));
    return a;
}

} // namespace

IntMatrix unimodular_inverse(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw UsageError("inverse of a non-square matrix");
    auto a = to_rational(m);
    std::vector<std::vector<mpq_class>> inv(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw ArithmeticError("singular matrix has no inverse");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        mpq_class p = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            mpq_class f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    IntMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            if (inv[r][c].get_den() != 1) throw ArithmeticError("matrix is not unimodular");
            out(r, c) = inv[r][c].get_num().get_si();
        }
    return out;
}

mpq_class determinant(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw UsageError("determinant of a non-square matrix");
    auto a = to_rational(m);
    mpq_class det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            mpq_class f = a[r][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

std::size_t rank_over_q(const IntMatrix& m) {
    auto a = to_rational(m);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t piv = rank;
        while (piv < m.rows() && a[piv][col] == 0) ++piv;
        if (piv == m.rows()) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = rank + 1; r < m.rows(); ++r) {
            if (a[r][col] == 0) continue;
            mpq_class f = a[r][col] / a[rank][col];
            for (std::size_t j = col; j < m.cols(); ++j) a[r][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::vector<mpz_class> invariant_factors(std::vector<std::vector<mpz_class>> a, std::size_t cols) {
    const std::size_t rows = a.size();
    std::vector<mpz_class> diag;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        std::size_t pr = rows, pc = cols;
        for (std::size_t r = t; r < rows; ++r)
            for (std::size_t c = t; c < cols; ++c)
                if (a[r][c] != 0 && (pr == rows || abs(a[r][c]) < abs(a[pr][pc]))) {
                    pr = r;
                    pc = c;
                }
        if (pr == rows) break;
        std::swap(a[t], a[pr]);
        for (auto& row : a) std::swap(row[t], row[pc]);

        bool clean = true;
        for (std::size_t r = t + 1; r < rows; ++r) {
            if (a[r][t] == 0) continue;
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), a[r][t].get_mpz_t(), a[t][t].get_mpz_t());
            for (std::size_t c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
            if (a[r][t] != 0) clean = false;
        }
        for (std::size_t c = t + 1; c < cols; ++c) {
            if (a[t][c] == 0) continue;
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), a[t][c].get_mpz_t(), a[t][t].get_mpz_t());
            for (std::size_t r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
            if (a[t][c] != 0) clean = false;
        }
        if (!clean) continue;
        // Enforce divisibility of the trailing block by the pivot.
        bool divides = true;
        for (std::size_t r = t + 1; r < rows && divides; ++r)
            for (std::size_t c = t + 1; c < cols; ++c)
                if (!mpz_divisible_p(a[r][c].get_mpz_t(), a[t][t].get_mpz_t())) {
                    for (std::size_t cc = t; cc < cols; ++cc) a[t][cc] += a[r][cc];
                    divides = false;
                    break;
                }
        if (!divides) continue;
        diag.push_back(abs(a[t][t]));
        ++t;
    }
    return diag;
}

bool all_principal_minors_positive(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n > 20) throw UsageError("principal minor test limited to small matrices");
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        IntMatrix sub(idx.size(), idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = m(idx[r], idx[c]);
        if (determinant(sub) <= 0) return false;
    }
    return true;
}

} // namespace fschubert
