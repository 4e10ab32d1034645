#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "affrank/field.hpp"

namespace affrank {

/// Dense matrix over GF(q). Row-major uint8 storage, entries always reduced.
/// All operations below are pure functions; treat constructed matrices as values.
class Matrix {
public:
    Matrix(FieldSpec field, int rows, int cols)
        : field_(field), rows_(rows), cols_(cols), e_(size_t(check_dims(rows, cols)), 0) {}

    static Matrix identity(FieldSpec field, int n) {
        Matrix m(field, n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    // E_{i,j}: single 1 at (i, j). Zero-based indices.
    static Matrix elementary(FieldSpec field, int n, int i, int j) {
        Matrix m(field, n, n);
        m.set(i, j, 1);
        return m;
    }

    static Matrix from_rows(FieldSpec field, const std::vector<std::vector<int>>& rows) {
        int r = int(rows.size());
        int c = r == 0 ? 0 : int(rows[0].size());
        Matrix m(field, r, c);
        for (int i = 0; i < r; ++i) {
            if (int(rows[i].size()) != c)
                throw usage_error("Matrix::from_rows: ragged rows");
            for (int j = 0; j < c; ++j) m.set(i, j, fp::reduce(rows[i][j], field.q));
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    FieldSpec field() const { return field_; }

    uint8_t at(int r, int c) const { return e_[size_t(r) * cols_ + c]; }
    Scalar scalar_at(int r, int c) const { return Scalar(at(r, c), field_); }
    void set(int r, int c, unsigned v) { e_[size_t(r) * cols_ + c] = fp::reduce(long(v), field_.q); }

    const std::vector<uint8_t>& data() const { return e_; }

    bool operator==(const Matrix& o) const {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

    std::string to_text() const {
        std::ostringstream os;
        os << '[';
        for (int i = 0; i < rows_; ++i) {
            if (i) os << ',';
            os << '[';
            for (int j = 0; j < cols_; ++j) {
                if (j) os << ',';
                os << int(at(i, j));
            }
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    static int check_dims(int rows, int cols) {
        if (rows < 0 || cols < 0) throw usage_error("Matrix: negative dimensions");
        return rows * cols;
    }

    FieldSpec field_;
    int rows_, cols_;
    std::vector<uint8_t> e_;
};

namespace detail {

inline void check_same_field(const Matrix& a, const Matrix& b, const char* op) {
    if (!(a.field() == b.field()))
        throw usage_error(std::string(op) + ": mismatched fields GF(" +
                          std::to_string(a.field().q) + ") vs GF(" + std::to_string(b.field().q) + ")");
}

inline void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    check_same_field(a, b, op);
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw usage_error(std::string(op) + ": shape mismatch");
}

// In-place row echelon pass with first-nonzero pivot selection.
// Returns rank; when `det_out` is non-null the caller promises a square input
// and receives the determinant.
inline int eliminate(std::vector<uint8_t>& a, int rows, int cols, uint16_t q,
                     uint8_t* det_out = nullptr, int rank_cap = -1) {
    int rank = 0;
    uint8_t det = 1;
    int swaps = 0;
    const int cap = rank_cap < 0 ? (rows < cols ? rows : cols) : rank_cap;
    for (int col = 0; col < cols && rank < rows; ++col) {
        if (rank >= cap && det_out == nullptr) return rank;
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[size_t(r) * cols + col]) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank) {
            for (int c = col; c < cols; ++c)
                std::swap(a[size_t(piv) * cols + c], a[size_t(rank) * cols + c]);
            ++swaps;
        }
        const uint8_t p = a[size_t(rank) * cols + col];
        det = fp::mul(det, p, q);
        const uint8_t pinv = fp::inv(p, q);
        for (int r = rank + 1; r < rows; ++r) {
            const uint8_t v = a[size_t(r) * cols + col];
            if (!v) continue;
            const uint8_t f = fp::mul(v, pinv, q);
            for (int c = col; c < cols; ++c) {
                uint8_t& x = a[size_t(r) * cols + c];
                x = fp::sub(x, fp::mul(f, a[size_t(rank) * cols + c], q), q);
            }
        }
        ++rank;
    }
    if (det_out) {
        if (rank < rows) det = 0;
        if (swaps & 1) det = fp::neg(det, q);
        *det_out = det;
    }
    return rank;
}

inline int rank_generic(const Matrix& m, int rank_cap = -1) {
    std::vector<uint8_t> a = m.data();
    return eliminate(a, m.rows(), m.cols(), m.field().q, nullptr, rank_cap);
}

// GF(2) fast path: one 64-bit word per row.
inline int rank_gf2(const Matrix& m, int rank_cap = -1) {
    const int rows = m.rows(), cols = m.cols();
    if (rows > 64) return rank_generic(m, rank_cap < 0 ? -1 : rank_cap + 1);
    uint64_t w[64];
    for (int r = 0; r < rows; ++r) {
        uint64_t x = 0;
        for (int c = 0; c < cols; ++c)
            if (m.at(r, c)) x |= uint64_t(1) << c;
        w[r] = x;
    }
    const int cap = rank_cap < 0 ? rows : rank_cap;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows && rank < cap + 1; ++col) {
        const uint64_t bit = uint64_t(1) << col;
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (w[r] & bit) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(w[piv], w[rank]);
        for (int r = rank + 1; r < rows; ++r)
            if (w[r] & bit) w[r] ^= w[rank];
        ++rank;
    }
    return rank;
}

} // namespace detail

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    detail::check_same_shape(a, b, "Matrix add");
    Matrix r(a.field(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r.set(i, j, fp::add(a.at(i, j), b.at(i, j), a.field().q));
    return r;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    detail::check_same_shape(a, b, "Matrix sub");
    Matrix r(a.field(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r.set(i, j, fp::sub(a.at(i, j), b.at(i, j), a.field().q));
    return r;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    detail::check_same_field(a, b, "Matrix mul");
    if (a.cols() != b.rows()) throw usage_error("Matrix mul: inner dimensions differ");
    Matrix r(a.field(), a.rows(), b.cols());
    const uint16_t q = a.field().q;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            uint32_t acc = 0;
            for (int k = 0; k < a.cols(); ++k) acc += uint32_t(a.at(i, k)) * b.at(k, j);
            r.set(i, j, uint8_t(acc % q));
        }
    return r;
}

inline Matrix scale(uint8_t c, const Matrix& a) {
    Matrix r(a.field(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.set(i, j, fp::mul(c, a.at(i, j), a.field().q));
    return r;
}

inline Matrix negate(const Matrix& a) { return scale(fp::neg(1, a.field().q), a); }

inline Matrix transpose(const Matrix& a) {
    Matrix r(a.field(), a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.set(j, i, a.at(i, j));
    return r;
}

inline Matrix hconcat(const Matrix& a, const Matrix& b) {
    detail::check_same_field(a, b, "hconcat");
    if (a.rows() != b.rows()) throw usage_error("hconcat: row counts differ");
    Matrix r(a.field(), a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) r.set(i, j, a.at(i, j));
        for (int j = 0; j < b.cols(); ++j) r.set(i, a.cols() + j, b.at(i, j));
    }
    return r;
}

inline Matrix vconcat(const Matrix& a, const Matrix& b) {
    detail::check_same_field(a, b, "vconcat");
    if (a.cols() != b.cols()) throw usage_error("vconcat: column counts differ");
    Matrix r(a.field(), a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.set(i, j, a.at(i, j));
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) r.set(a.rows() + i, j, b.at(i, j));
    return r;
}

/// Exact rank by Gaussian elimination; packed-word path over GF(2).
inline int rank(const Matrix& m) {
    if (m.field().q == 2 && m.cols() <= 64) return detail::rank_gf2(m);
    return detail::rank_generic(m);
}

/// min(rank(m), cap + 1): stops eliminating once `cap` is exceeded.
inline int rank_capped(const Matrix& m, int cap) {
    if (m.field().q == 2 && m.cols() <= 64) return detail::rank_gf2(m, cap);
    return detail::rank_generic(m, cap + 1);
}

/// Exact determinant. The empty 0x0 matrix has determinant 1.
inline Scalar det(const Matrix& m) {
    if (!m.is_square()) throw usage_error("det: matrix is not square");
    if (m.rows() == 0) return Scalar(1, m.field());
    std::vector<uint8_t> a = m.data();
    uint8_t d = 0;
    detail::eliminate(a, m.rows(), m.cols(), m.field().q, &d);
    return Scalar(d, m.field());
}

inline std::optional<Matrix> try_inverse(const Matrix& m) {
    if (!m.is_square()) throw usage_error("inverse: matrix is not square");
    const int n = m.rows();
    const uint16_t q = m.field().q;
    // Gauss-Jordan on [M | I].
    std::vector<uint8_t> a(size_t(n) * 2 * n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[size_t(i) * 2 * n + j] = m.at(i, j);
        a[size_t(i) * 2 * n + n + i] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[size_t(r) * 2 * n + col]) { piv = r; break; }
        if (piv < 0) return std::nullopt;
        if (piv != col)
            for (int c = 0; c < 2 * n; ++c)
                std::swap(a[size_t(piv) * 2 * n + c], a[size_t(col) * 2 * n + c]);
        const uint8_t pinv = fp::inv(a[size_t(col) * 2 * n + col], q);
        for (int c = 0; c < 2 * n; ++c)
            a[size_t(col) * 2 * n + c] = fp::mul(a[size_t(col) * 2 * n + c], pinv, q);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const uint8_t f = a[size_t(r) * 2 * n + col];
            if (!f) continue;
            for (int c = 0; c < 2 * n; ++c)
                a[size_t(r) * 2 * n + c] =
                    fp::sub(a[size_t(r) * 2 * n + c], fp::mul(f, a[size_t(col) * 2 * n + c], q), q);
        }
    }
    Matrix inv(m.field(), n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.set(i, j, a[size_t(i) * 2 * n + n + j]);
    return inv;
}

inline Matrix inverse(const Matrix& m) {
    auto inv = try_inverse(m);
    if (!inv) throw usage_error("inverse: matrix is singular");
    return *inv;
}

/// Basis of the right kernel {x : Mx = 0}, deterministic (free variables in
/// ascending column order, each set to 1 in turn).
inline std::vector<std::vector<uint8_t>> right_kernel_basis(const Matrix& m) {
    const int rows = m.rows(), cols = m.cols();
    const uint16_t q = m.field().q;
    std::vector<uint8_t> a = m.data();
    // reduced echelon form
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[size_t(r) * cols + col]) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int c = 0; c < cols; ++c)
                std::swap(a[size_t(piv) * cols + c], a[size_t(rank) * cols + c]);
        const uint8_t pinv = fp::inv(a[size_t(rank) * cols + col], q);
        for (int c = 0; c < cols; ++c)
            a[size_t(rank) * cols + c] = fp::mul(a[size_t(rank) * cols + c], pinv, q);
        for (int r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const uint8_t f = a[size_t(r) * cols + col];
            if (!f) continue;
            for (int c = 0; c < cols; ++c)
                a[size_t(r) * cols + c] =
                    fp::sub(a[size_t(r) * cols + c], fp::mul(f, a[size_t(rank) * cols + c], q), q);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(size_t(cols), false);
    for (int c : pivot_col) is_pivot[size_t(c)] = true;
    std::vector<std::vector<uint8_t>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[size_t(free)]) continue;
        std::vector<uint8_t> x(size_t(cols), 0);
        x[size_t(free)] = 1;
        for (int r = 0; r < rank; ++r)
            x[size_t(pivot_col[size_t(r)])] = fp::neg(a[size_t(r) * cols + free], q);
        basis.push_back(std::move(x));
    }
    return basis;
}

inline int kernel_dim(const Matrix& m) { return m.cols() - rank(m); }

/// Column vector of the diagonal entries.
inline Matrix diagonal_vector(const Matrix& m) {
    if (!m.is_square()) throw usage_error("diagonal_vector: matrix is not square");
    Matrix d(m.field(), m.rows(), 1);
    for (int i = 0; i < m.rows(); ++i) d.set(i, 0, m.at(i, i));
    return d;
}

namespace detail {

inline Matrix delete_row_col(const Matrix& m, int row, int col) {
    Matrix r(m.field(), m.rows() - 1, m.cols() - 1);
    for (int i = 0, ri = 0; i < m.rows(); ++i) {
        if (i == row) continue;
        for (int j = 0, rj = 0; j < m.cols(); ++j) {
            if (j == col) continue;
            r.set(ri, rj, m.at(i, j));
            ++rj;
        }
        ++ri;
    }
    return r;
}

inline uint8_t cofactor(const Matrix& m, int i, int j) {
    const uint16_t q = m.field().q;
    uint8_t d = det(delete_row_col(m, i, j)).value();
    return ((i + j) & 1) ? fp::neg(d, q) : d;
}

// First-principles adjugate from cofactors; also the test oracle.
inline Matrix adjugate_cofactor(const Matrix& m) {
    const int n = m.rows();
    Matrix adj(m.field(), n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) adj.set(i, j, cofactor(m, j, i));
    return adj;
}

// Elimination-backed adjugate: det * inverse when invertible, rank-one outer
// product when rank = n-1, zero otherwise.
inline Matrix adjugate_elimination(const Matrix& m) {
    const int n = m.rows();
    const uint16_t q = m.field().q;
    const int r = rank(m);
    if (r == n) {
        const uint8_t d = det(m).value();
        return scale(d, inverse(m));
    }
    if (r < n - 1) return Matrix(m.field(), n, n);
    auto xk = right_kernel_basis(m);
    auto yk = right_kernel_basis(transpose(m));
    const std::vector<uint8_t>& x = xk.front();
    const std::vector<uint8_t>& y = yk.front();
    int i0 = 0, j0 = 0;
    while (!x[size_t(i0)]) ++i0;
    while (!y[size_t(j0)]) ++j0;
    // adj = alpha * x y^T with alpha fixed by one explicit cofactor.
    const uint8_t c = cofactor(m, j0, i0);
    const uint8_t alpha = fp::div(c, fp::mul(x[size_t(i0)], y[size_t(j0)], q), q);
    Matrix adj(m.field(), n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            adj.set(i, j, fp::mul(alpha, fp::mul(x[size_t(i)], y[size_t(j)], q), q));
    return adj;
}

} // namespace detail

/// Classical adjoint M^ad with M * M^ad = det(M) * I. The 1x1 adjugate is [1].
inline Matrix adjugate(const Matrix& m) {
    if (!m.is_square()) throw usage_error("adjugate: matrix is not square");
    if (m.rows() == 0) throw usage_error("adjugate: undefined for the 0x0 matrix");
    if (m.rows() <= 4) return detail::adjugate_cofactor(m);
    return detail::adjugate_elimination(m);
}

/// P * M * P^T for invertible P.
inline Matrix congruence_apply(const Matrix& p, const Matrix& m) {
    detail::check_same_field(p, m, "congruence_apply");
    if (!p.is_square() || !m.is_square() || p.rows() != m.rows())
        throw usage_error("congruence_apply: P and M must be square of equal size");
    if (rank(p) != p.rows()) throw usage_error("congruence_apply: P is singular");
    return p * m * transpose(p);
}

/// r + rank(B A^{-1} C - D); equals the rank of the block matrix [[A, C], [B, D]].
inline int schur_rank(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    detail::check_same_field(a, b, "schur_rank");
    detail::check_same_field(a, c, "schur_rank");
    detail::check_same_field(a, d, "schur_rank");
    if (!a.is_square()) throw usage_error("schur_rank: A must be square");
    if (b.cols() != a.rows() || c.rows() != a.rows())
        throw usage_error("schur_rank: block shapes incompatible with A");
    if (d.rows() != b.rows() || d.cols() != c.cols())
        throw usage_error("schur_rank: block shapes incompatible with D");
    auto ainv = try_inverse(a);
    if (!ainv) throw usage_error("schur_rank: A is singular");
    return a.rows() + rank(b * *ainv * c - d);
}

struct ShapeFlags {
    bool symmetric = false;
    bool alternating = false;
};

/// alternating := M = -M^T with zero diagonal (equivalently X^T M X = 0 for
/// all X); in characteristic 2 every alternating matrix is also symmetric.
inline ShapeFlags classify_shape(const Matrix& m) {
    if (!m.is_square()) return {};
    ShapeFlags f;
    f.symmetric = true;
    f.alternating = true;
    const uint16_t q = m.field().q;
    for (int i = 0; i < m.rows(); ++i) {
        if (m.at(i, i) != 0) f.alternating = false;
        for (int j = i + 1; j < m.cols(); ++j) {
            if (m.at(i, j) != m.at(j, i)) f.symmetric = false;
            if (m.at(i, j) != fp::neg(m.at(j, i), q)) f.alternating = false;
        }
    }
    return f;
}

enum class Shape { symmetric, alternating, neither };

inline Shape shape_class(const Matrix& m) {
    ShapeFlags f = classify_shape(m);
    if (f.alternating) return Shape::alternating;
    if (f.symmetric) return Shape::symmetric;
    return Shape::neither;
}

} // namespace affrank
