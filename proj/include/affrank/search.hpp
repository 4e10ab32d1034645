#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "affrank/congruence.hpp"
#include "affrank/models.hpp"

namespace affrank {

/// Number of D-dimensional linear subspaces of F_q^N (Gaussian binomial),
/// saturating at `cap`.
inline long long gaussian_binomial(int N, int D, uint16_t q, long long cap = (1LL << 62)) {
    if (D < 0 || D > N) return 0;
    // product over the pivot-pattern free entries: prod (q^(N-i) - 1)/(q^(D-i) - 1)
    // computed as an exact integer via the recurrence [N, D] = [N-1, D-1] + q^D [N-1, D]
    std::vector<long long> row(size_t(D) + 1, 0);
    row[0] = 1;
    for (int n = 1; n <= N; ++n)
        for (int d = std::min(n, D); d >= 1; --d) {
            long long qd = 1;
            for (int i = 0; i < d; ++i) {
                if (qd > cap / q) { qd = cap; break; }
                qd *= q;
            }
            long long t = row[size_t(d - 1)];
            if (qd >= cap || row[size_t(d)] > (cap - t) / (qd ? qd : 1)) {
                row[size_t(d)] = cap;
            } else {
                row[size_t(d)] = t + qd * row[size_t(d)];
            }
        }
    return row[size_t(D)];
}

/// [N, D]_q * q^(N - D): the number of D-dimensional affine subspaces.
inline long long count_affine_subspaces(int N, int D, uint16_t q, long long cap = (1LL << 62)) {
    long long lin = gaussian_binomial(N, D, q, cap);
    long long cosets = detail::pow_checked(q, N - D, cap);
    if (lin >= cap || cosets >= cap || lin > cap / cosets) return cap;
    return lin * cosets;
}

/// Visits every D-dimensional affine subspace of the ambient exactly once, in
/// canonical form: reduced-echelon pivot patterns in lexicographic order, free
/// entries and coset representatives by odometer.
inline void for_each_affine_subspace(const AmbientKind& ambient, FieldSpec f, int D,
                                     long long space_budget,
                                     const std::function<void(const AffineMatrixSpace&)>& fn) {
    const int N = ambient.dim();
    if (D < 0 || D > N)
        throw usage_error("for_each_affine_subspace: dimension out of range");
    long long total = count_affine_subspaces(N, D, f.q, space_budget + 1);
    if (total > space_budget)
        throw capacity_error("for_each_affine_subspace: " + std::to_string(total) +
                             " affine subspaces exceed space budget " +
                             std::to_string(space_budget));

    std::vector<int> pivots(size_t(D), 0);
    for (int i = 0; i < D; ++i) pivots[size_t(i)] = i;
    const uint16_t q = f.q;
    for (;;) {
        // free slots of the echelon pattern: (row i, col j) with j > pivots[i],
        // j not a pivot
        std::vector<bool> is_pivot(size_t(N), false);
        for (int p : pivots) is_pivot[size_t(p)] = true;
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < D; ++i)
            for (int j = pivots[size_t(i)] + 1; j < N; ++j)
                if (!is_pivot[size_t(j)]) slots.emplace_back(i, j);
        std::vector<int> free_cols;
        for (int j = 0; j < N; ++j)
            if (!is_pivot[size_t(j)]) free_cols.push_back(j);

        std::vector<std::vector<uint8_t>> rows(size_t(D), std::vector<uint8_t>(size_t(N), 0));
        for (int i = 0; i < D; ++i) rows[size_t(i)][size_t(pivots[size_t(i)])] = 1;

        std::vector<uint8_t> slot_digits(slots.size(), 0);
        for (;;) {
            std::vector<uint8_t> base(size_t(N), 0);
            std::vector<uint8_t> base_digits(free_cols.size(), 0);
            for (;;) {
                fn(AffineMatrixSpace::from_canonical(ambient, f, base, rows));
                size_t bi = free_cols.size();
                while (bi > 0) {
                    --bi;
                    uint8_t& v = base[size_t(free_cols[bi])];
                    v = fp::add(v, 1, q);
                    if (++base_digits[bi] < q) break;
                    base_digits[bi] = 0;
                    if (bi == 0) goto cosets_done;
                }
                if (free_cols.empty()) break;
            }
        cosets_done:;
            size_t si = slots.size();
            while (si > 0) {
                --si;
                auto [i, j] = slots[si];
                uint8_t& v = rows[size_t(i)][size_t(j)];
                v = fp::add(v, 1, q);
                if (++slot_digits[si] < q) break;
                slot_digits[si] = 0;
                if (si == 0) goto pattern_done;
            }
            if (slots.empty()) break;
        }
    pattern_done:;
        // next pivot combination in lexicographic order
        int k = D - 1;
        while (k >= 0 && pivots[size_t(k)] == N - D + k) --k;
        if (k < 0) break;
        ++pivots[size_t(k)];
        for (int i = k + 1; i < D; ++i) pivots[size_t(i)] = pivots[size_t(i - 1)] + 1;
    }
}

namespace detail {

// rank lookup table over all q^N vectorizations, indexed by the base-q value
// of the digit string (coordinate 0 most significant).
struct RankTable {
    AmbientKind ambient;
    FieldSpec field;
    std::vector<uint8_t> table;
    std::vector<long long> place; // place[i] = q^(N-1-i)

    int index_of(const std::vector<uint8_t>& v) const {
        long long idx = 0;
        for (size_t i = 0; i < v.size(); ++i) idx += place[i] * v[i];
        return int(idx);
    }
};

inline RankTable build_rank_table(const AmbientKind& ambient, FieldSpec f,
                                  long long cap = (1LL << 22)) {
    const int N = ambient.dim();
    long long total = pow_checked(f.q, N, cap);
    if (total > cap)
        throw capacity_error("build_rank_table: q^N exceeds the table cap");
    RankTable t{ambient, f, {}, std::vector<long long>(size_t(N), 1)};
    for (int i = N - 2; i >= 0; --i) t.place[size_t(i)] = t.place[size_t(i + 1)] * f.q;
    t.table.resize(size_t(total));
    std::vector<uint8_t> v(size_t(N), 0);
    for (long long idx = 0; idx < total; ++idx) {
        t.table[size_t(idx)] = uint8_t(rank(unvectorize(ambient, f, v)));
        int i = N - 1;
        while (i >= 0 && v[size_t(i)] == f.q - 1) {
            v[size_t(i)] = 0;
            --i;
        }
        if (i >= 0) ++v[size_t(i)];
    }
    return t;
}

// max member rank, capped: returns cap + 1 as soon as some member exceeds cap.
inline int space_upper_rank_lut(const AffineMatrixSpace& s, const RankTable& lut, int cap) {
    const uint16_t q = s.field().q;
    const int d = s.dim();
    std::vector<uint8_t> cur = s.base_vec();
    std::vector<uint8_t> digits(size_t(d), 0);
    int best = 0;
    for (;;) {
        int r = lut.table[size_t(lut.index_of(cur))];
        if (r > best) {
            best = r;
            if (best > cap) return best;
        }
        int i = d - 1;
        while (i >= 0) {
            add_scaled(cur, s.basis_vecs()[size_t(i)], 1, q);
            if (++digits[size_t(i)] < q) break;
            digits[size_t(i)] = 0;
            --i;
        }
        if (i < 0) return best;
    }
}

} // namespace detail

struct CensusResult {
    long long spaces_scanned = 0;
    long long spaces_satisfying = 0;
};

namespace detail {

// Count-only bounded-rank scan over GF(2), working entirely on bit masks:
// echelon rows, coset bases and members are all N-bit words, members are
// visited in Gray-code order with one XOR per step.
inline CensusResult bounded_rank_census_gf2(const AmbientKind& ambient, int r, int D,
                                            long long space_budget) {
    const int N = ambient.dim();
    FieldSpec f(2);
    if (N > 20) throw capacity_error("bounded_rank_census: mask path limited to dim <= 20");
    long long total = count_affine_subspaces(N, D, 2, space_budget + 1);
    if (total > space_budget)
        throw capacity_error("bounded_rank_census: " + std::to_string(total) +
                             " affine subspaces exceed space budget " +
                             std::to_string(space_budget));

    // rank lookup over all 2^N vectorizations; mask bit i = coordinate i
    std::vector<uint8_t> lut(size_t(1) << N);
    {
        std::vector<uint8_t> v(size_t(N), 0);
        for (uint32_t mask = 0; mask < (uint32_t(1) << N); ++mask) {
            for (int i = 0; i < N; ++i) v[size_t(i)] = (mask >> i) & 1u;
            lut[mask] = uint8_t(rank(unvectorize(ambient, f, v)));
        }
    }

    CensusResult out;
    std::vector<int> pivots(size_t(D), 0);
    for (int i = 0; i < D; ++i) pivots[size_t(i)] = i;
    for (;;) {
        uint32_t pivot_mask = 0;
        for (int p : pivots) pivot_mask |= uint32_t(1) << p;
        std::vector<std::pair<int, int>> slots; // (row, coordinate)
        for (int i = 0; i < D; ++i)
            for (int j = pivots[size_t(i)] + 1; j < N; ++j)
                if (!(pivot_mask >> j & 1u)) slots.emplace_back(i, j);
        std::vector<int> free_cols;
        for (int j = 0; j < N; ++j)
            if (!(pivot_mask >> j & 1u)) free_cols.push_back(j);

        std::vector<uint32_t> rows(size_t(D), 0);
        for (int i = 0; i < D; ++i) rows[size_t(i)] = uint32_t(1) << pivots[size_t(i)];

        const uint64_t slot_count = uint64_t(1) << slots.size();
        const uint64_t coset_count = uint64_t(1) << free_cols.size();
        for (uint64_t sg = 0;; ++sg) {
            uint32_t base = 0;
            for (uint64_t bg = 0;; ++bg) {
                ++out.spaces_scanned;
                // Gray-code walk over the 2^D members
                uint32_t cur = base;
                bool ok = lut[cur] <= r;
                if (ok)
                    for (uint64_t g = 1; g < (uint64_t(1) << D); ++g) {
                        cur ^= rows[size_t(__builtin_ctzll(g))];
                        if (lut[cur] > r) { ok = false; break; }
                    }
                if (ok) ++out.spaces_satisfying;
                if (bg + 1 >= coset_count) break;
                base ^= uint32_t(1) << free_cols[size_t(__builtin_ctzll(bg + 1))];
            }
            if (sg + 1 >= slot_count) break;
            auto [ri, cj] = slots[size_t(__builtin_ctzll(sg + 1))];
            rows[size_t(ri)] ^= uint32_t(1) << cj;
        }
        int k = D - 1;
        while (k >= 0 && pivots[size_t(k)] == N - D + k) --k;
        if (k < 0) break;
        ++pivots[size_t(k)];
        for (int i = k + 1; i < D; ++i) pivots[size_t(i)] = pivots[size_t(i - 1)] + 1;
    }
    return out;
}

} // namespace detail

/// Counts the D-dimensional affine subspaces of upper rank <= r. Same scan as
/// bounded_rank_search without classification; over GF(2) a packed-mask path
/// makes much larger censuses affordable.
inline CensusResult bounded_rank_census(const AmbientKind& ambient, int r, FieldSpec f, int D,
                                        long long space_budget = kDefaultSpaceBudget) {
    const int N = ambient.dim();
    if (D < 0 || D > N) return {0, 0};
    if (f.q == 2 && N <= 20) return detail::bounded_rank_census_gf2(ambient, r, D, space_budget);
    CensusResult out;
    auto lut = detail::build_rank_table(ambient, f);
    for_each_affine_subspace(ambient, f, D, space_budget, [&](const AffineMatrixSpace& s) {
        ++out.spaces_scanned;
        if (detail::space_upper_rank_lut(s, lut, r) <= r) ++out.spaces_satisfying;
    });
    return out;
}

struct SearchClass {
    std::string canonical_key;
    AffineMatrixSpace representative;     // first survivor found, canonical
    std::vector<ModelName> matched_models;
    long long survivor_count = 0;         // survivors congruent to the representative
    long long orbit_size = 0;             // distinct spaces in the congruence orbit
};

struct SearchReport {
    AmbientKind ambient;
    FieldSpec field;
    int n = 0, p = 0, r = 0, dim = 0;
    long long spaces_scanned = 0;
    long long spaces_satisfying = 0;
    int max_dim_found = 0; // dim if any survivor, else 0
    std::vector<SearchClass> classes;
};

namespace detail {

struct ClassBucket {
    InvariantProfile profile;
    AffineMatrixSpace representative;
    std::unordered_set<std::string> orbit; // serialized canonical forms of P.S.P^T
    long long survivor_count = 0;
};

inline std::unordered_set<std::string> orbit_set(const AffineMatrixSpace& s,
                                                 long long group_budget) {
    auto group = general_linear_group(s.field(), s.ambient().rows(), group_budget);
    std::unordered_set<std::string> orbit;
    orbit.reserve(group->size() * 2);
    for (const Matrix& p : *group) orbit.insert(serialize_space(transform_space(p, s)));
    return orbit;
}

} // namespace detail

/// Scans all D-dimensional affine subspaces of the ambient and keeps those of
/// upper rank at most r. With `classify`, deduplicates survivors up to
/// congruence and matches every class against the catalog models.
inline SearchReport bounded_rank_search(const AmbientKind& ambient, int r, FieldSpec f, int D,
                                        bool classify,
                                        long long space_budget = kDefaultSpaceBudget,
                                        long long member_budget = kDefaultMemberBudget,
                                        long long group_budget = kDefaultGroupBudget) {
    if (classify && !ambient.is_square())
        throw usage_error("bounded_rank_search: classification requires a square ambient");
    SearchReport report{ambient, f, ambient.rows(), ambient.cols(), r, D, 0, 0, 0, {}};
    auto lut = detail::build_rank_table(ambient, f);
    std::vector<detail::ClassBucket> buckets;
    for_each_affine_subspace(ambient, f, D, space_budget, [&](const AffineMatrixSpace& s) {
        ++report.spaces_scanned;
        if (detail::space_upper_rank_lut(s, lut, r) > r) return;
        ++report.spaces_satisfying;
        if (!classify) return;
        InvariantProfile prof = invariant_profile(s, member_budget);
        std::string ser = serialize_space(s);
        for (auto& b : buckets) {
            if (!(b.profile == prof)) continue;
            if (b.orbit.count(ser)) {
                ++b.survivor_count;
                return;
            }
        }
        detail::ClassBucket nb{std::move(prof), s, detail::orbit_set(s, group_budget), 1};
        buckets.push_back(std::move(nb));
    });
    report.max_dim_found = report.spaces_satisfying > 0 ? D : 0;
    if (classify) {
        for (auto& b : buckets) {
            SearchClass cls{*std::min_element(b.orbit.begin(), b.orbit.end()), b.representative,
                            {}, b.survivor_count, static_cast<long long>(b.orbit.size())};
            for (const ModelName& name : candidate_models(ambient.kind(), ambient.rows(), r, f)) {
                AffineMatrixSpace model = build_model(name, ambient.rows(), f);
                if (!(model.ambient() == ambient)) {
                    try {
                        model = as_ambient(model, ambient);
                    } catch (const usage_error&) {
                        continue;
                    }
                }
                if (model.dim() != D) continue;
                if (b.orbit.count(serialize_space(model))) cls.matched_models.push_back(name);
            }
            report.classes.push_back(std::move(cls));
        }
    }
    return report;
}

struct FlandersReport {
    SearchReport core;
    long long with_common_kernel = 0;   // right kernel of dimension >= p - r
    long long with_common_range = 0;    // n = p and shared range space of dim <= r
    long long exceptional_zero_free = 0; // q = 2, n = p = 2, zero-free
    long long unexplained = 0;          // survivors matching no case
};

/// Rectangular bounded-rank scan of Mat_{n,p} with the equality-case
/// trichotomy checks.
inline FlandersReport flanders_scan(int n, int p, int r, FieldSpec f, int D,
                                    long long space_budget = kDefaultSpaceBudget) {
    if (n < p) throw usage_error("flanders_scan: requires n >= p");
    if (r > std::min(n, p)) throw usage_error("flanders_scan: requires r <= min(n, p)");
    AmbientKind ambient = AmbientKind::full(n, p);
    FlandersReport rep{{ambient, f, n, p, r, D, 0, 0, 0, {}}, 0, 0, 0, 0};
    auto lut = detail::build_rank_table(ambient, f);
    for_each_affine_subspace(ambient, f, D, space_budget, [&](const AffineMatrixSpace& s) {
        ++rep.core.spaces_scanned;
        if (detail::space_upper_rank_lut(s, lut, r) > r) return;
        ++rep.core.spaces_satisfying;
        bool any = false;
        if (common_kernel_dim(s) >= p - r) {
            ++rep.with_common_kernel;
            any = true;
        }
        if (n == p) {
            // the span of all member ranges is the column span of base and basis
            Matrix stacked = s.base_matrix();
            for (int k = 0; k < s.dim(); ++k) stacked = hconcat(stacked, s.basis_matrix(k));
            if (rank(stacked) <= r) {
                ++rep.with_common_range;
                any = true;
            }
        }
        if (f.q == 2 && n == 2 && p == 2 && !contains(s, Matrix(f, 2, 2))) {
            ++rep.exceptional_zero_free;
            any = true;
        }
        if (!any) ++rep.unexplained;
    });
    rep.core.max_dim_found = rep.core.spaces_satisfying > 0 ? D : 0;
    return rep;
}

/// Recovers the vector Y with V = { [N, N Y] } for an affine space V of
/// n x p matrices that projects onto all of Mat_{n, p-1}, has upper rank < p,
/// and satisfies the side condition (n > p or p > 2 or q > 2 or 0 in V).
inline std::vector<uint8_t> flanders_recover_Y(const AffineMatrixSpace& v,
                                               long long member_budget = kDefaultMemberBudget) {
    const AmbientKind& amb = v.ambient();
    if (amb.kind() != Ambient::full) throw usage_error("flanders_recover_Y: full ambient required");
    const int n = amb.rows(), p = amb.cols();
    if (p < 2 || n < p) throw usage_error("flanders_recover_Y: requires n >= p >= 2");

    if (upper_rank(v, member_budget) >= p)
        throw usage_error("flanders_recover_Y: hypothesis failed: upper rank is not below p");

    // projection onto the first p-1 columns must cover Mat_{n, p-1}
    std::vector<std::vector<uint8_t>> proj;
    for (int k = 0; k < v.dim(); ++k) {
        Matrix b = v.basis_matrix(k);
        std::vector<uint8_t> row;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j + 1 < p; ++j) row.push_back(b.at(i, j));
        proj.push_back(std::move(row));
    }
    auto pivots = detail::rref(proj, v.field().q);
    if (int(pivots.size()) != n * (p - 1))
        throw usage_error(
            "flanders_recover_Y: hypothesis failed: projection onto the first p-1 columns is not "
            "surjective");

    if (!(n > p || p > 2 || v.field().q > 2 || contains(v, Matrix(v.field(), n, p))))
        throw usage_error(
            "flanders_recover_Y: hypothesis failed: need n > p, p > 2, q > 2, or 0 in V");

    // the common right kernel is spanned by [Y; -1]
    Matrix stacked(v.field(), (v.dim() + 1) * n, p);
    auto put = [&](int block, const Matrix& m) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) stacked.set(block * n + i, j, m.at(i, j));
    };
    put(0, v.base_matrix());
    for (int k = 0; k < v.dim(); ++k) put(k + 1, v.basis_matrix(k));
    auto kernel = right_kernel_basis(stacked);
    if (kernel.size() != 1 || kernel[0][size_t(p - 1)] == 0)
        throw usage_error("flanders_recover_Y: hypothesis failed: no spanning kernel vector");
    const uint16_t q = v.field().q;
    // scale so the last coordinate equals -1
    uint8_t scale_by = fp::div(fp::neg(1, q), kernel[0][size_t(p - 1)], q);
    std::vector<uint8_t> y(size_t(p - 1));
    for (int j = 0; j + 1 < p; ++j) y[size_t(j)] = fp::mul(kernel[0][size_t(j)], scale_by, q);
    return y;
}

/// True iff the affine span of the members of rank > threshold equals the
/// whole space.
inline bool generation_check(const AffineMatrixSpace& s, int rank_threshold,
                             long long member_budget = kDefaultMemberBudget) {
    std::vector<std::vector<uint8_t>> high;
    for_each_member_vec(s, member_budget, [&](const std::vector<uint8_t>& v) {
        Matrix m = unvectorize(s.ambient(), s.field(), v);
        if (rank_capped(m, rank_threshold) > rank_threshold) high.push_back(v);
        return true;
    });
    if (high.empty()) return false; // the affine span of nothing covers nothing
    const uint16_t q = s.field().q;
    std::vector<std::vector<uint8_t>> diffs;
    for (size_t i = 1; i < high.size(); ++i) {
        std::vector<uint8_t> d = high[i];
        for (size_t k = 0; k < d.size(); ++k) d[k] = fp::sub(d[k], high[0][k], q);
        diffs.push_back(std::move(d));
    }
    auto pivots = detail::rref(diffs, q);
    return int(pivots.size()) == s.dim();
}

/// Exact maximum dimension of an affine subspace contained in
/// { M in ambient : rank M <= r }, found by depth-first search over canonical
/// ascending generator sequences inside the rank set. Exhaustive and
/// enumeration-free in the subspace count, so it reaches configurations whose
/// affine-subspace census would blow the space budget.
inline int max_affine_dim_in_rank_set(const AmbientKind& ambient, int r, FieldSpec f) {
    const int N = ambient.dim();
    const uint16_t q = f.q;
    auto lut = detail::build_rank_table(ambient, f);
    const long long total = static_cast<long long>(lut.table.size());

    std::vector<char> in_set(size_t(total), 0);
    std::vector<long long> members; // vec indices with rank <= r
    for (long long idx = 0; idx < total; ++idx)
        if (lut.table[size_t(idx)] <= r) {
            in_set[size_t(idx)] = 1;
            members.push_back(idx);
        }

    // index addition table (digitwise mod q); XOR when q = 2
    std::vector<int> add_table;
    const bool use_xor = q == 2;
    if (!use_xor) {
        if (total > 2048)
            throw capacity_error("max_affine_dim_in_rank_set: index addition table too large");
        add_table.resize(size_t(total * total));
        std::vector<uint8_t> va(size_t(N), 0);
        for (long long a = 0; a < total; ++a) {
            std::vector<uint8_t> vb(size_t(N), 0);
            for (long long b = 0; b < total; ++b) {
                long long idx = 0;
                for (int i = 0; i < N; ++i)
                    idx += lut.place[size_t(i)] * fp::add(va[size_t(i)], vb[size_t(i)], q);
                add_table[size_t(a * total + b)] = int(idx);
                int i = N - 1;
                while (i >= 0 && vb[size_t(i)] == q - 1) { vb[size_t(i)] = 0; --i; }
                if (i >= 0) ++vb[size_t(i)];
            }
            int i = N - 1;
            while (i >= 0 && va[size_t(i)] == q - 1) { va[size_t(i)] = 0; --i; }
            if (i >= 0) ++va[size_t(i)];
        }
    }
    auto add_idx = [&](long long a, long long b) -> long long {
        return use_xor ? (a ^ b) : add_table[size_t(a * total + b)];
    };
    auto scale_idx = [&](long long a, uint8_t c) -> long long {
        if (use_xor) return c ? a : 0;
        long long out = 0, rest = a;
        for (int i = 0; i < N; ++i) {
            long long digit = rest / lut.place[size_t(i)];
            rest -= digit * lut.place[size_t(i)];
            out += lut.place[size_t(i)] * fp::mul(uint8_t(digit), c, q);
        }
        return out;
    };

    // canonical generating sequence of a span: reduced-echelon rows in
    // ascending lexicographic order (reverse pivot order)
    auto canonical_sequence = [&](std::vector<std::vector<uint8_t>> rows) {
        detail::rref(rows, q);
        std::reverse(rows.begin(), rows.end());
        return rows;
    };
    auto vec_of_index = [&](long long idx) {
        std::vector<uint8_t> v(size_t(N), 0);
        long long rest = idx;
        for (int i = 0; i < N; ++i) {
            v[size_t(i)] = uint8_t(rest / lut.place[size_t(i)]);
            rest -= static_cast<long long>(v[size_t(i)]) * lut.place[size_t(i)];
        }
        return v;
    };

    int best = 0;
    std::vector<long long> span_members;       // member indices of current span (through 0)
    std::vector<std::vector<uint8_t>> gens;    // ascending canonical generator sequence

    std::function<void(long long, const std::vector<long long>&)> dfs =
        [&](long long base_idx, const std::vector<long long>& directions) {
            best = std::max(best, int(gens.size()));
            for (long long dir : directions) {
                std::vector<uint8_t> dv = vec_of_index(dir);
                if (!gens.empty() && !(gens.back() < dv)) continue;
                // closure: every new member base + old + c*dir stays in the set
                bool ok = true;
                for (uint8_t c = 1; ok && c < q; ++c) {
                    long long cdir = scale_idx(dir, c);
                    for (long long m : span_members)
                        if (!in_set[size_t(add_idx(base_idx, add_idx(m, cdir)))]) {
                            ok = false;
                            break;
                        }
                }
                if (!ok) continue;
                // canonical-sequence check: visit each subspace once per base
                auto seq = gens;
                seq.push_back(dv);
                if (canonical_sequence(seq) != seq) continue;
                // extend
                size_t old_count = span_members.size();
                for (uint8_t c = 1; c < q; ++c) {
                    long long cdir = scale_idx(dir, c);
                    for (size_t i = 0; i < old_count; ++i)
                        span_members.push_back(add_idx(span_members[i], cdir));
                }
                gens.push_back(dv);
                dfs(base_idx, directions);
                gens.pop_back();
                span_members.resize(old_count);
            }
        };

    for (long long b : members) {
        std::vector<long long> directions;
        for (long long m : members)
            if (m != b) directions.push_back(use_xor ? (m ^ b) : add_idx(m, scale_idx(b, uint8_t(q - 1))));
        std::sort(directions.begin(), directions.end());
        directions.erase(std::unique(directions.begin(), directions.end()), directions.end());
        span_members.assign(1, 0);
        gens.clear();
        dfs(b, directions);
    }
    return best;
}

} // namespace affrank
