#include <doctest.h>

#include "affrank/matrix.hpp"
#include "affrank/rng.hpp"

using namespace affrank;

namespace {

// Independent determinant oracle: recursive Laplace expansion along the first
// row. Deliberately avoids elimination so it can check the production path.
uint8_t det_laplace(const Matrix& m) {
    const int n = m.rows();
    const uint16_t q = m.field().q;
    if (n == 0) return 1;
    if (n == 1) return m.at(0, 0);
    uint8_t acc = 0;
    for (int j = 0; j < n; ++j) {
        if (!m.at(0, j)) continue;
        uint8_t term = fp::mul(m.at(0, j), det_laplace(detail::delete_row_col(m, 0, j)), q);
        acc = (j % 2 == 0) ? fp::add(acc, term, q) : fp::sub(acc, term, q);
    }
    return acc;
}

Matrix adjugate_laplace(const Matrix& m) {
    const int n = m.rows();
    const uint16_t q = m.field().q;
    Matrix adj(m.field(), n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            uint8_t c = det_laplace(detail::delete_row_col(m, j, i));
            adj.set(i, j, ((i + j) % 2) ? fp::neg(c, q) : c);
        }
    return adj;
}

Matrix random_matrix(Rng& rng, FieldSpec f, int rows, int cols) {
    Matrix m(f, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.set(i, j, unsigned(rng.below(f.q)));
    return m;
}

Matrix random_symmetric(Rng& rng, FieldSpec f, int n) {
    Matrix m(f, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            unsigned v = unsigned(rng.below(f.q));
            m.set(i, j, v);
            m.set(j, i, v);
        }
    return m;
}

// All matrices of a given size over GF(2), by bitmask.
Matrix gf2_matrix_from_mask(int n, int cols, unsigned mask) {
    Matrix m(FieldSpec(2), n, cols);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < cols; ++j)
            if (mask >> (i * cols + j) & 1u) m.set(i, j, 1);
    return m;
}

} // namespace

TEST_CASE("rank basics") {
    FieldSpec f2(2);
    CHECK(rank(Matrix(f2, 3, 3)) == 0);
    Matrix e13 = Matrix::elementary(f2, 3, 0, 2) + Matrix::elementary(f2, 3, 2, 0);
    CHECK(rank(e13) == 2);
    // member of U with (a,b,c) = (0,0,0)
    Matrix u0 = Matrix::elementary(f2, 4, 0, 3) + Matrix::elementary(f2, 4, 3, 0);
    CHECK(rank(u0) == 2);
    CHECK(rank(Matrix::identity(FieldSpec(5), 4)) == 4);
}

TEST_CASE("GF(2) packed rank agrees with the generic elimination") {
    Rng rng(0xA1);
    FieldSpec f2(2);
    for (int trial = 0; trial < 2000; ++trial) {
        int rows = 1 + int(rng.below(7));
        int cols = 1 + int(rng.below(7));
        Matrix m = random_matrix(rng, f2, rows, cols);
        CHECK(detail::rank_gf2(m) == detail::rank_generic(m));
    }
}

TEST_CASE("rank_capped is min(rank, cap+1)") {
    Rng rng(0xA2);
    for (unsigned q : {2u, 3u}) {
        FieldSpec f(q);
        for (int trial = 0; trial < 500; ++trial) {
            Matrix m = random_matrix(rng, f, 4, 4);
            int r = rank(m);
            for (int cap = 0; cap <= 4; ++cap)
                CHECK(rank_capped(m, cap) == std::min(r, cap + 1));
        }
    }
}

TEST_CASE("det basics and oracle agreement") {
    CHECK(det(Matrix::identity(FieldSpec(3), 4)) == Scalar(1, FieldSpec(3)));
    CHECK(det(Matrix(FieldSpec(2), 0, 0)) == Scalar(1, FieldSpec(2)));
    CHECK_THROWS_AS(det(Matrix(FieldSpec(2), 2, 3)), usage_error);

    Rng rng(0xB0);
    FieldSpec f5(5);
    for (int trial = 0; trial < 500; ++trial) {
        Matrix m = random_matrix(rng, f5, 3, 3);
        CHECK(det(m).value() == det_laplace(m));
    }
}

TEST_CASE("adjugate: identity, 1x1, symmetry over GF(2)") {
    FieldSpec f3(3), f2(2);
    for (int n = 1; n <= 4; ++n) CHECK(adjugate(Matrix::identity(f3, n)) == Matrix::identity(f3, n));
    Matrix a(f3, 1, 1);
    a.set(0, 0, 2);
    CHECK(adjugate(a) == Matrix::identity(f3, 1));
    CHECK_THROWS_AS(adjugate(Matrix(f2, 0, 0)), usage_error);
    CHECK_THROWS_AS(adjugate(Matrix(f2, 2, 3)), usage_error);

    Rng rng(0xB1);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix s = random_symmetric(rng, f2, 3);
        CHECK(classify_shape(adjugate(s)).symmetric);
        CHECK(adjugate(s) == adjugate_laplace(s));
    }
}

TEST_CASE("adjugate identity M * adj(M) = det(M) * I, exhaustive 2x2 and 3x3 over GF(2)") {
    for (int n : {2, 3}) {
        const unsigned total = 1u << (n * n);
        for (unsigned mask = 0; mask < total; ++mask) {
            Matrix m = gf2_matrix_from_mask(n, n, mask);
            Matrix adj = adjugate(m);
            Matrix expect = scale(det(m).value(), Matrix::identity(m.field(), n));
            CHECK(m * adj == expect);
            CHECK(adj * m == expect);
        }
    }
}

TEST_CASE("elimination-backed adjugate matches the cofactor oracle at n = 5") {
    Rng rng(0xB2);
    for (unsigned q : {2u, 3u, 5u}) {
        FieldSpec f(q);
        int checked_singular = 0;
        for (int trial = 0; trial < 120; ++trial) {
            Matrix m = random_matrix(rng, f, 5, 5);
            if (trial % 3 == 0) {
                // force rank deficiency: overwrite a row with a combination
                int dst = int(rng.below(5)), src = int(rng.below(5));
                for (int j = 0; j < 5; ++j) m.set(dst, j, m.at(src, j));
            }
            Matrix viaElim = detail::adjugate_elimination(m);
            Matrix viaCof = adjugate_laplace(m);
            CHECK(viaElim == viaCof);
            if (rank(m) < 5) ++checked_singular;
        }
        CHECK(checked_singular > 10);
    }
}

TEST_CASE("rank-1 determinant update over GF(2), exhaustive 2x2 and 3x3") {
    FieldSpec f2(2);
    for (int n : {2, 3}) {
        for (unsigned pm = 0; pm < (1u << (n * n)); ++pm) {
            Matrix p = gf2_matrix_from_mask(n, n, pm);
            Matrix padj = adjugate(p);
            for (unsigned cm = 0; cm < (1u << n); ++cm) {
                Matrix c(f2, n, 1);
                for (int i = 0; i < n; ++i)
                    if (cm >> i & 1u) c.set(i, 0, 1);
                Matrix lhsM = p + c * transpose(c);
                uint8_t lhs = det(lhsM).value();
                uint8_t quad = (transpose(c) * padj * c).at(0, 0);
                uint8_t rhs = fp::add(det(p).value(), quad, 2);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("diagonal_vector") {
    FieldSpec f2(2);
    Matrix d = diagonal_vector(Matrix::identity(f2, 3));
    CHECK(d.rows() == 3);
    CHECK(d.cols() == 1);
    for (int i = 0; i < 3; ++i) CHECK(d.at(i, 0) == 1);
    Matrix e = Matrix::elementary(f2, 2, 0, 1) + Matrix::elementary(f2, 2, 1, 0);
    CHECK(diagonal_vector(e) == Matrix(f2, 2, 1));
    Matrix ones = Matrix::from_rows(f2, {{1, 1}, {1, 1}});
    Matrix dv = diagonal_vector(ones);
    CHECK(dv.at(0, 0) == 1);
    CHECK(dv.at(1, 0) == 1);
}

TEST_CASE("congruence_apply basics") {
    FieldSpec f2(2);
    Matrix e11 = Matrix::elementary(f2, 2, 0, 0);
    Matrix e22 = Matrix::elementary(f2, 2, 1, 1);
    Matrix ones = Matrix::from_rows(f2, {{1, 1}, {1, 1}});
    Matrix p = Matrix::from_rows(f2, {{1, 1}, {0, 1}});

    CHECK(congruence_apply(Matrix::identity(f2, 2), ones) == ones);
    // hand-multiplied 2x2 products
    CHECK(congruence_apply(p, e11) == e11);
    CHECK(congruence_apply(p, e22) == ones);
    CHECK(congruence_apply(transpose(p), e11) == ones);
    CHECK(congruence_apply(transpose(p), e22) == e22);

    Matrix singular(f2, 2, 2);
    CHECK_THROWS_AS(congruence_apply(singular, e11), usage_error);

    Rng rng(0xC0);
    for (unsigned q : {2u, 3u, 5u}) {
        FieldSpec f(q);
        for (int trial = 0; trial < 100; ++trial) {
            Matrix m = random_matrix(rng, f, 3, 3);
            Matrix pr = random_matrix(rng, f, 3, 3);
            if (rank(pr) < 3) continue;
            CHECK(rank(congruence_apply(pr, m)) == rank(m));
            ShapeFlags before = classify_shape(m);
            ShapeFlags after = classify_shape(congruence_apply(pr, m));
            if (before.symmetric) CHECK(after.symmetric);
            if (before.alternating) CHECK(after.alternating);
        }
    }
}

TEST_CASE("schur_rank") {
    FieldSpec f2(2), f3(3);
    // A = I_2, zero blocks, n = 3
    CHECK(schur_rank(Matrix::identity(f2, 2), Matrix(f2, 1, 2), Matrix(f2, 2, 1), Matrix(f2, 1, 1)) == 2);
    // [[1,1],[1,1]] over GF(2)
    Matrix one(f2, 1, 1);
    one.set(0, 0, 1);
    CHECK(schur_rank(one, one, one, one) == 1);
    CHECK_THROWS_AS(schur_rank(Matrix(f2, 1, 1), one, one, one), usage_error);

    Rng rng(0xC1);
    for (int trial = 0; trial < 400; ++trial) {
        int r = 1 + int(rng.below(3));
        int m = 1 + int(rng.below(3));
        Matrix a = random_matrix(rng, f3, r, r);
        if (rank(a) < r) continue;
        Matrix b = random_matrix(rng, f3, m, r);
        Matrix c = random_matrix(rng, f3, r, m);
        Matrix d = random_matrix(rng, f3, m, m);
        Matrix block = vconcat(hconcat(a, c), hconcat(b, d));
        CHECK(schur_rank(a, b, c, d) == rank(block));
    }
}

TEST_CASE("classify_shape") {
    FieldSpec f2(2), f3(3);
    Matrix alt2 = Matrix::elementary(f2, 2, 0, 1) + Matrix::elementary(f2, 2, 1, 0);
    CHECK(classify_shape(alt2).alternating);
    CHECK(classify_shape(alt2).symmetric); // characteristic 2
    CHECK(shape_class(Matrix::elementary(f2, 2, 0, 0)) == Shape::symmetric);
    CHECK(shape_class(Matrix::elementary(f2, 2, 0, 1)) == Shape::neither);

    // over odd characteristic: alternating iff skew-symmetric with zero
    // diagonal iff X^T M X = 0 for all X; exhaustive for n <= 3, q <= 5
    for (unsigned q : {2u, 3u, 5u}) {
        FieldSpec f(q);
        for (int n : {1, 2, 3}) {
            const int N = n * n;
            std::vector<uint8_t> digits(size_t(N), 0);
            for (;;) {
                Matrix m(f, n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) m.set(i, j, digits[size_t(i * n + j)]);
                bool quad_null = true;
                std::vector<uint8_t> x(size_t(n), 0);
                for (;;) {
                    int ii = n - 1;
                    while (ii >= 0 && x[size_t(ii)] == q - 1) { x[size_t(ii)] = 0; --ii; }
                    if (ii < 0) break;
                    ++x[size_t(ii)];
                    uint32_t acc = 0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) acc += uint32_t(x[size_t(a)]) * m.at(a, b) % q * x[size_t(b)];
                    if (acc % q != 0) { quad_null = false; break; }
                }
                CHECK(classify_shape(m).alternating == quad_null);
                int k = N - 1;
                while (k >= 0 && digits[size_t(k)] == q - 1) { digits[size_t(k)] = 0; --k; }
                if (k < 0) break;
                ++digits[size_t(k)];
            }
        }
    }
}

TEST_CASE("alternating matrices have even rank") {
    // classical fact used by the model upper-rank certificates
    for (unsigned q : {2u, 3u, 5u}) {
        FieldSpec f(q);
        for (int n : {2, 3, 4}) {
            const int nc = n * (n - 1) / 2;
            std::vector<uint8_t> digits(size_t(nc), 0);
            for (;;) {
                Matrix m(f, n, n);
                int k = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        m.set(i, j, digits[size_t(k)]);
                        m.set(j, i, fp::neg(digits[size_t(k)], f.q));
                        ++k;
                    }
                CHECK(rank(m) % 2 == 0);
                int t = nc - 1;
                while (t >= 0 && digits[size_t(t)] == q - 1) { digits[size_t(t)] = 0; --t; }
                if (t < 0) break;
                ++digits[size_t(t)];
            }
        }
    }
}

TEST_CASE("inverse round trip") {
    Rng rng(0xC2);
    for (unsigned q : {2u, 3u, 5u}) {
        FieldSpec f(q);
        int found = 0;
        for (int trial = 0; trial < 200 && found < 50; ++trial) {
            Matrix m = random_matrix(rng, f, 4, 4);
            auto inv = try_inverse(m);
            if (!inv) {
                CHECK(rank(m) < 4);
                continue;
            }
            ++found;
            CHECK(*inv * m == Matrix::identity(f, 4));
            CHECK(m * *inv == Matrix::identity(f, 4));
        }
        CHECK(found > 0);
    }
}
