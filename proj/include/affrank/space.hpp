#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "affrank/matrix.hpp"

namespace affrank {

inline constexpr long long kDefaultMemberBudget = 10'000'000;
inline constexpr long long kDefaultSpaceBudget = 10'000'000;
inline constexpr long long kDefaultGroupBudget = 100'000'000;

enum class Ambient { full, symmetric, alternating };

/// Ambient matrix space together with its frozen vectorization order:
///   full(n, p)     -> all (i, j), row-major
///   symmetric(n)   -> (i, j) with i <= j, lexicographic
///   alternating(n) -> (i, j) with i < j, lexicographic
class AmbientKind {
public:
    static AmbientKind full(int n, int p) { return AmbientKind(Ambient::full, n, p); }
    static AmbientKind symmetric(int n) { return AmbientKind(Ambient::symmetric, n, n); }
    static AmbientKind alternating(int n) { return AmbientKind(Ambient::alternating, n, n); }

    Ambient kind() const { return kind_; }
    int rows() const { return n_; }
    int cols() const { return p_; }
    int n() const { return n_; }
    bool is_square() const { return n_ == p_; }

    int dim() const {
        switch (kind_) {
            case Ambient::full: return n_ * p_;
            case Ambient::symmetric: return n_ * (n_ + 1) / 2;
            case Ambient::alternating: return n_ * (n_ - 1) / 2;
        }
        return 0;
    }

    std::vector<std::pair<int, int>> coords() const {
        std::vector<std::pair<int, int>> cs;
        cs.reserve(size_t(dim()));
        switch (kind_) {
            case Ambient::full:
                for (int i = 0; i < n_; ++i)
                    for (int j = 0; j < p_; ++j) cs.emplace_back(i, j);
                break;
            case Ambient::symmetric:
                for (int i = 0; i < n_; ++i)
                    for (int j = i; j < n_; ++j) cs.emplace_back(i, j);
                break;
            case Ambient::alternating:
                for (int i = 0; i < n_; ++i)
                    for (int j = i + 1; j < n_; ++j) cs.emplace_back(i, j);
                break;
        }
        return cs;
    }

    bool admits(const Matrix& m) const {
        if (m.rows() != n_ || m.cols() != p_) return false;
        if (kind_ == Ambient::full) return true;
        ShapeFlags f = classify_shape(m);
        return kind_ == Ambient::symmetric ? f.symmetric : f.alternating;
    }

    std::string name() const {
        switch (kind_) {
            case Ambient::full: return "full";
            case Ambient::symmetric: return "symmetric";
            case Ambient::alternating: return "alternating";
        }
        return "?";
    }

    bool operator==(const AmbientKind&) const = default;

private:
    AmbientKind(Ambient kind, int n, int p) : kind_(kind), n_(n), p_(p) {
        if (n < 0 || p < 0) throw usage_error("AmbientKind: negative size");
        if (kind != Ambient::full && n != p)
            throw usage_error("AmbientKind: symmetric/alternating ambients are square");
    }

    Ambient kind_;
    int n_, p_;
};

inline std::vector<uint8_t> vectorize(const AmbientKind& ambient, const Matrix& m) {
    if (!ambient.admits(m))
        throw usage_error("vectorize: matrix does not lie in the " + ambient.name() + " ambient");
    std::vector<uint8_t> v;
    v.reserve(size_t(ambient.dim()));
    for (auto [i, j] : ambient.coords()) v.push_back(m.at(i, j));
    return v;
}

inline Matrix unvectorize(const AmbientKind& ambient, FieldSpec field,
                          const std::vector<uint8_t>& v) {
    if (int(v.size()) != ambient.dim()) throw usage_error("unvectorize: wrong length");
    Matrix m(field, ambient.rows(), ambient.cols());
    int k = 0;
    for (auto [i, j] : ambient.coords()) {
        m.set(i, j, v[size_t(k)]);
        if (ambient.kind() == Ambient::symmetric && i != j) m.set(j, i, v[size_t(k)]);
        if (ambient.kind() == Ambient::alternating) m.set(j, i, fp::neg(v[size_t(k)], field.q));
        ++k;
    }
    return m;
}

namespace detail {

// Reduced row echelon form over GF(q). Drops zero rows; rows end up ordered by
// ascending pivot column with unit pivots and cleared pivot columns.
// Returns the pivot columns.
inline std::vector<int> rref(std::vector<std::vector<uint8_t>>& rows, uint16_t q) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    const int cols = int(rows[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < int(rows.size()); ++col) {
        int piv = -1;
        for (int r = rank; r < int(rows.size()); ++r)
            if (rows[size_t(r)][size_t(col)]) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(rows[size_t(piv)], rows[size_t(rank)]);
        const uint8_t pinv = fp::inv(rows[size_t(rank)][size_t(col)], q);
        for (auto& x : rows[size_t(rank)]) x = fp::mul(x, pinv, q);
        for (int r = 0; r < int(rows.size()); ++r) {
            if (r == rank) continue;
            const uint8_t f = rows[size_t(r)][size_t(col)];
            if (!f) continue;
            for (int c = 0; c < cols; ++c)
                rows[size_t(r)][size_t(c)] =
                    fp::sub(rows[size_t(r)][size_t(c)], fp::mul(f, rows[size_t(rank)][size_t(c)], q), q);
        }
        pivots.push_back(col);
        ++rank;
    }
    rows.resize(size_t(rank));
    return pivots;
}

inline void add_scaled(std::vector<uint8_t>& dst, const std::vector<uint8_t>& src, uint8_t c,
                       uint16_t q) {
    for (size_t k = 0; k < dst.size(); ++k)
        dst[k] = fp::add(dst[k], fp::mul(c, src[k], q), q);
}

} // namespace detail

/// Affine subspace of the ambient (base + span of basis), kept in canonical
/// form: basis vectorizations in reduced row echelon form and the base point
/// zeroed on every pivot coordinate. Two descriptions of the same affine set
/// canonicalize identically.
class AffineMatrixSpace {
public:
    const AmbientKind& ambient() const { return ambient_; }
    FieldSpec field() const { return field_; }
    int dim() const { return int(basis_.size()); }

    const std::vector<uint8_t>& base_vec() const { return base_; }
    const std::vector<std::vector<uint8_t>>& basis_vecs() const { return basis_; }

    Matrix base_matrix() const { return unvectorize(ambient_, field_, base_); }
    Matrix basis_matrix(int i) const { return unvectorize(ambient_, field_, basis_[size_t(i)]); }

    bool is_linear() const {
        return std::all_of(base_.begin(), base_.end(), [](uint8_t v) { return v == 0; });
    }

    bool operator==(const AffineMatrixSpace& o) const {
        return ambient_ == o.ambient_ && field_ == o.field_ && base_ == o.base_ &&
               basis_ == o.basis_;
    }

    // Trusted constructor: inputs must already be canonical.
    static AffineMatrixSpace from_canonical(AmbientKind ambient, FieldSpec field,
                                            std::vector<uint8_t> base,
                                            std::vector<std::vector<uint8_t>> basis) {
        return AffineMatrixSpace(ambient, field, std::move(base), std::move(basis));
    }

private:
    AffineMatrixSpace(AmbientKind ambient, FieldSpec field, std::vector<uint8_t> base,
                      std::vector<std::vector<uint8_t>> basis)
        : ambient_(ambient), field_(field), base_(std::move(base)), basis_(std::move(basis)) {}

    AmbientKind ambient_;
    FieldSpec field_;
    std::vector<uint8_t> base_;
    std::vector<std::vector<uint8_t>> basis_;
};

namespace detail {

inline AffineMatrixSpace canonicalize(AmbientKind ambient, FieldSpec field,
                                      std::vector<uint8_t> base,
                                      std::vector<std::vector<uint8_t>> basis) {
    auto pivots = rref(basis, field.q);
    for (size_t r = 0; r < pivots.size(); ++r) {
        const uint8_t v = base[size_t(pivots[r])];
        if (v) add_scaled(base, basis[r], fp::neg(v, field.q), field.q);
    }
    return AffineMatrixSpace::from_canonical(ambient, field, std::move(base), std::move(basis));
}

} // namespace detail

/// Canonical space through `base` with translation directions `gens`.
inline AffineMatrixSpace space_from_generators(const AmbientKind& ambient, const Matrix& base,
                                               const std::vector<Matrix>& gens) {
    FieldSpec field = base.field();
    std::vector<uint8_t> b = vectorize(ambient, base);
    std::vector<std::vector<uint8_t>> rows;
    rows.reserve(gens.size());
    for (const Matrix& g : gens) {
        if (!(g.field() == field)) throw usage_error("space_from_generators: mixed fields");
        rows.push_back(vectorize(ambient, g));
    }
    return detail::canonicalize(ambient, field, std::move(b), std::move(rows));
}

inline int dim(const AffineMatrixSpace& s) { return s.dim(); }

inline bool contains(const AffineMatrixSpace& s, const Matrix& m) {
    std::vector<uint8_t> v = vectorize(s.ambient(), m);
    const uint16_t q = s.field().q;
    for (size_t k = 0; k < v.size(); ++k) v[k] = fp::sub(v[k], s.base_vec()[k], q);
    // reduce against the echelon basis
    for (const auto& row : s.basis_vecs()) {
        size_t p = 0;
        while (p < row.size() && row[p] == 0) ++p;
        if (p == row.size()) continue;
        const uint8_t c = v[p];
        if (c) detail::add_scaled(v, row, fp::neg(c, q), q);
    }
    return std::all_of(v.begin(), v.end(), [](uint8_t x) { return x == 0; });
}

namespace detail {

inline long long pow_checked(long long q, int e, long long cap) {
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > cap / q) return cap + 1;
        r *= q;
    }
    return r;
}

inline long long member_count_or_throw(const AffineMatrixSpace& s, long long budget,
                                       const char* who) {
    long long count = pow_checked(s.field().q, s.dim(), budget);
    if (count > budget)
        throw capacity_error(std::string(who) + ": member count q^dim = " +
                             std::to_string(s.field().q) + "^" + std::to_string(s.dim()) +
                             " exceeds member budget " + std::to_string(budget));
    return count;
}

} // namespace detail

/// Visits every member vectorization exactly once, in lexicographic
/// coefficient order (first basis coefficient most significant). The visitor
/// may return false to stop early; the function reports whether it ran to
/// completion.
inline bool for_each_member_vec(const AffineMatrixSpace& s, long long budget,
                                const std::function<bool(const std::vector<uint8_t>&)>& fn) {
    detail::member_count_or_throw(s, budget, "enumerate_members");
    const uint16_t q = s.field().q;
    const int d = s.dim();
    std::vector<uint8_t> cur = s.base_vec();
    std::vector<uint8_t> digits(size_t(d), 0);
    for (;;) {
        if (!fn(cur)) return false;
        int i = d - 1;
        while (i >= 0) {
            detail::add_scaled(cur, s.basis_vecs()[size_t(i)], 1, q);
            if (++digits[size_t(i)] < q) break;
            digits[size_t(i)] = 0;
            --i;
        }
        if (i < 0) return true;
    }
}

inline std::vector<Matrix> enumerate_members(const AffineMatrixSpace& s,
                                             long long budget = kDefaultMemberBudget) {
    std::vector<Matrix> out;
    for_each_member_vec(s, budget, [&](const std::vector<uint8_t>& v) {
        out.push_back(unvectorize(s.ambient(), s.field(), v));
        return true;
    });
    return out;
}

/// Exact max rank over all members; stops early if the ambient rank ceiling
/// is reached.
inline int upper_rank(const AffineMatrixSpace& s, long long budget = kDefaultMemberBudget) {
    const int ceiling = std::min(s.ambient().rows(), s.ambient().cols());
    int best = 0;
    for_each_member_vec(s, budget, [&](const std::vector<uint8_t>& v) {
        Matrix m = unvectorize(s.ambient(), s.field(), v);
        best = std::max(best, rank(m));
        return best < ceiling;
    });
    return best;
}

inline AffineMatrixSpace translation_space(const AffineMatrixSpace& s) {
    std::vector<uint8_t> zero(size_t(s.ambient().dim()), 0);
    return AffineMatrixSpace::from_canonical(s.ambient(), s.field(), std::move(zero),
                                             s.basis_vecs());
}

/// Linear hyperplane of K^n given by a nonzero normal vector, normalized so
/// its first nonzero coordinate is 1.
struct Hyperplane {
    std::vector<uint8_t> normal;

    Hyperplane(std::vector<uint8_t> raw, FieldSpec field) : normal(std::move(raw)) {
        size_t p = 0;
        while (p < normal.size() && normal[p] == 0) ++p;
        if (p == normal.size()) throw usage_error("Hyperplane: zero normal vector");
        const uint8_t inv = fp::inv(normal[p], field.q);
        for (auto& x : normal) x = fp::mul(x, inv, field.q);
    }

    bool operator==(const Hyperplane&) const = default;
};

/// All (q^n - 1)/(q - 1) hyperplanes, lexicographically smallest normalized
/// normal first.
inline std::vector<Hyperplane> enumerate_hyperplanes(FieldSpec field, int n,
                                                     long long budget = kDefaultSpaceBudget) {
    const long long cap = budget > (1LL << 60) / field.q ? (1LL << 60) : budget * field.q + 1;
    long long total = detail::pow_checked(field.q, n, cap);
    long long count = (total - 1) / (field.q - 1);
    if (total > cap || count > budget)
        throw capacity_error("enumerate_hyperplanes: hyperplane count exceeds budget " +
                             std::to_string(budget));
    std::vector<Hyperplane> out;
    out.reserve(size_t(count));
    std::vector<uint8_t> v(size_t(n), 0);
    for (;;) {
        // odometer, last coordinate fastest => lexicographic ascending
        int i = n - 1;
        while (i >= 0 && v[size_t(i)] == field.q - 1) v[size_t(i--)] = 0;
        if (i < 0) break;
        ++v[size_t(i)];
        size_t p = 0;
        while (p < v.size() && v[p] == 0) ++p;
        if (v[p] == 1) out.emplace_back(v, field);
    }
    return out;
}

namespace detail {

// Basis of H = {x : normal^T x = 0}: for each coordinate j other than the
// pivot, e_j - normal_j * e_pivot. Deterministic, ascending j.
inline std::vector<std::vector<uint8_t>> hyperplane_basis(const Hyperplane& h, FieldSpec field) {
    const int n = int(h.normal.size());
    size_t pivot = 0;
    while (h.normal[pivot] == 0) ++pivot;
    std::vector<std::vector<uint8_t>> basis;
    basis.reserve(size_t(n - 1));
    for (int j = 0; j < n; ++j) {
        if (size_t(j) == pivot) continue;
        std::vector<uint8_t> w(size_t(n), 0);
        w[size_t(j)] = 1;
        w[pivot] = fp::neg(h.normal[size_t(j)], field.q);
        basis.push_back(std::move(w));
    }
    return basis;
}

inline uint8_t bilinear(const std::vector<uint8_t>& x, const Matrix& m,
                        const std::vector<uint8_t>& y) {
    const uint16_t q = m.field().q;
    uint32_t acc = 0;
    for (int i = 0; i < m.rows(); ++i) {
        if (!x[size_t(i)]) continue;
        uint32_t row = 0;
        for (int j = 0; j < m.cols(); ++j) row += uint32_t(m.at(i, j)) * y[size_t(j)];
        acc += uint32_t(x[size_t(i)]) * (row % q);
    }
    return uint8_t(acc % q);
}

// Rows of the linear system cutting S_H out of the space's basis coefficients.
inline std::vector<std::vector<uint8_t>> sh_condition_rows(const AffineMatrixSpace& s,
                                                           const Hyperplane& h) {
    if (s.ambient().kind() == Ambient::full)
        throw usage_error("S_H restriction requires a symmetric or alternating ambient");
    if (!s.is_linear())
        throw usage_error("S_H restriction is defined on linear spaces; pass the translation space");
    const bool need_diagonal = s.ambient().kind() == Ambient::symmetric;
    auto hb = hyperplane_basis(h, s.field());
    std::vector<Matrix> basis_mats;
    basis_mats.reserve(size_t(s.dim()));
    for (int k = 0; k < s.dim(); ++k) basis_mats.push_back(s.basis_matrix(k));
    std::vector<std::vector<uint8_t>> rows;
    for (size_t a = 0; a < hb.size(); ++a)
        for (size_t b = need_diagonal ? a : a + 1; b < hb.size(); ++b) {
            std::vector<uint8_t> row(size_t(s.dim()), 0);
            bool nonzero = false;
            for (int k = 0; k < s.dim(); ++k) {
                row[size_t(k)] = bilinear(hb[a], basis_mats[size_t(k)], hb[b]);
                nonzero |= row[size_t(k)] != 0;
            }
            if (nonzero) rows.push_back(std::move(row));
        }
    return rows;
}

} // namespace detail

/// dim S_H without materializing the subspace.
inline int dim_SH(const AffineMatrixSpace& s, const Hyperplane& h) {
    auto rows = detail::sh_condition_rows(s, h);
    auto pivots = detail::rref(rows, s.field().q);
    return s.dim() - int(pivots.size());
}

/// The linear subspace S_H = {M in S : X^T M Y = 0 for all X, Y in H}.
inline AffineMatrixSpace restrict_SH(const AffineMatrixSpace& s, const Hyperplane& h) {
    auto rows = detail::sh_condition_rows(s, h);
    const int d = s.dim();
    Matrix cond(s.field(), int(rows.size()), d);
    for (int i = 0; i < int(rows.size()); ++i)
        for (int j = 0; j < d; ++j) cond.set(i, j, rows[size_t(i)][size_t(j)]);
    auto coeff_kernel = right_kernel_basis(cond);
    std::vector<std::vector<uint8_t>> new_basis;
    for (const auto& coeffs : coeff_kernel) {
        std::vector<uint8_t> v(size_t(s.ambient().dim()), 0);
        for (int k = 0; k < d; ++k)
            if (coeffs[size_t(k)]) detail::add_scaled(v, s.basis_vecs()[size_t(k)], coeffs[size_t(k)], s.field().q);
        new_basis.push_back(std::move(v));
    }
    std::vector<uint8_t> zero(size_t(s.ambient().dim()), 0);
    return detail::canonicalize(s.ambient(), s.field(), std::move(zero), std::move(new_basis));
}

struct HyperplaneScan {
    int min_dim = 0;
    Hyperplane witness;
};

/// Minimum of dim S_H over all hyperplanes, with the first witness in
/// lexicographic normal order.
inline HyperplaneScan hyperplane_scan(const AffineMatrixSpace& s,
                                      long long budget = kDefaultSpaceBudget) {
    if (!s.ambient().is_square() || s.ambient().kind() == Ambient::full)
        throw usage_error("hyperplane_scan: symmetric or alternating ambient required");
    auto hs = enumerate_hyperplanes(s.field(), s.ambient().n(), budget);
    int best = s.dim() + 1;
    const Hyperplane* witness = nullptr;
    for (const auto& h : hs) {
        int d = dim_SH(s, h);
        if (d < best) {
            best = d;
            witness = &h;
            if (best == 0) break;
        }
    }
    if (!witness) throw usage_error("hyperplane_scan: no hyperplanes (n = 0)");
    return HyperplaneScan{best, *witness};
}

namespace detail {

// Basis of Alt_n viewed inside the symmetric ambient; only meaningful in
// characteristic 2.
inline AffineMatrixSpace alternating_inside_symmetric(FieldSpec field, int n) {
    AmbientKind amb = AmbientKind::symmetric(n);
    std::vector<Matrix> gens;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Matrix g(field, n, n);
            g.set(i, j, 1);
            g.set(j, i, 1);
            gens.push_back(std::move(g));
        }
    return space_from_generators(amb, Matrix(field, n, n), gens);
}

} // namespace detail

/// True iff (Alt_n)_H is not included in S_H. Characteristic 2, symmetric
/// ambient, linear input space.
inline bool is_adapted(const AffineMatrixSpace& s, const Hyperplane& h) {
    if (s.field().q != 2) throw usage_error("is_adapted: requires characteristic 2 (q = 2)");
    if (s.ambient().kind() != Ambient::symmetric)
        throw usage_error("is_adapted: requires a symmetric ambient");
    if (!s.is_linear()) throw usage_error("is_adapted: requires a linear space");
    auto alt = detail::alternating_inside_symmetric(s.field(), s.ambient().n());
    auto alt_h = restrict_SH(alt, h);
    for (int k = 0; k < alt_h.dim(); ++k)
        if (!contains(s, alt_h.basis_matrix(k))) return true;
    return false;
}

/// Embeds every member in the top-left corner of an n x n matrix.
inline AffineMatrixSpace pad_space(const AffineMatrixSpace& s, int n) {
    if (!s.ambient().is_square()) throw usage_error("pad_space: square ambient required");
    const int r = s.ambient().n();
    if (n < r) throw usage_error("pad_space: target size " + std::to_string(n) +
                                 " smaller than current size " + std::to_string(r));
    AmbientKind big = s.ambient().kind() == Ambient::full
                          ? AmbientKind::full(n, n)
                          : (s.ambient().kind() == Ambient::symmetric ? AmbientKind::symmetric(n)
                                                               : AmbientKind::alternating(n));
    // coordinate embedding preserves the frozen order, so canonical stays canonical
    auto small_coords = s.ambient().coords();
    auto big_coords = big.coords();
    std::vector<int> where(small_coords.size(), -1);
    for (size_t k = 0; k < small_coords.size(); ++k) {
        for (size_t t = 0; t < big_coords.size(); ++t)
            if (big_coords[t] == small_coords[k]) { where[k] = int(t); break; }
    }
    auto embed = [&](const std::vector<uint8_t>& v) {
        std::vector<uint8_t> out(size_t(big.dim()), 0);
        for (size_t k = 0; k < v.size(); ++k) out[size_t(where[k])] = v[k];
        return out;
    };
    std::vector<std::vector<uint8_t>> basis;
    basis.reserve(size_t(s.dim()));
    for (const auto& row : s.basis_vecs()) basis.push_back(embed(row));
    return AffineMatrixSpace::from_canonical(big, s.field(), embed(s.base_vec()), std::move(basis));
}

/// dim {X : MX = 0 for every M in the space}.
inline int common_kernel_dim(const AffineMatrixSpace& s) {
    const int n = s.ambient().rows();
    const int p = s.ambient().cols();
    Matrix stacked(s.field(), (s.dim() + 1) * n, p);
    auto put = [&](int block, const Matrix& m) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) stacked.set(block * n + i, j, m.at(i, j));
    };
    put(0, s.base_matrix());
    for (int k = 0; k < s.dim(); ++k) put(k + 1, s.basis_matrix(k));
    return p - rank(stacked);
}

/// dim {X : X^T M = 0 for every M in the space}.
inline int left_kernel_dim(const AffineMatrixSpace& s) {
    const int n = s.ambient().rows();
    const int p = s.ambient().cols();
    Matrix stacked(s.field(), (s.dim() + 1) * p, n);
    auto put = [&](int block, const Matrix& m) {
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < n; ++j) stacked.set(block * p + i, j, m.at(j, i));
    };
    put(0, s.base_matrix());
    for (int k = 0; k < s.dim(); ++k) put(k + 1, s.basis_matrix(k));
    return n - rank(stacked);
}

/// Re-expresses the same set of matrices in another ambient (e.g. alternating
/// matrices over GF(2) viewed as symmetric ones). Fails if a basis or base
/// matrix does not fit the target shape.
inline AffineMatrixSpace as_ambient(const AffineMatrixSpace& s, const AmbientKind& target) {
    std::vector<Matrix> gens;
    gens.reserve(size_t(s.dim()));
    for (int k = 0; k < s.dim(); ++k) gens.push_back(s.basis_matrix(k));
    return space_from_generators(target, s.base_matrix(), gens);
}

} // namespace affrank
