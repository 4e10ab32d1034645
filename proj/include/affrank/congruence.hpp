#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "affrank/space.hpp"

namespace affrank {

/// Congruence-invariant fingerprint of an affine matrix space, computed by
/// full member enumeration.
struct InvariantProfile {
    int dim = 0;
    std::map<int, long long> rank_distribution;
    long long alternating_count = 0;
    bool contains_zero = false;
    int common_kernel_dim = 0;
    int left_kernel_dim = 0;
    bool is_linear = false;

    bool operator==(const InvariantProfile&) const = default;
};

inline InvariantProfile invariant_profile(const AffineMatrixSpace& s,
                                          long long member_budget = kDefaultMemberBudget) {
    InvariantProfile p;
    p.dim = s.dim();
    p.is_linear = s.is_linear();
    p.common_kernel_dim = common_kernel_dim(s);
    p.left_kernel_dim = left_kernel_dim(s);
    for_each_member_vec(s, member_budget, [&](const std::vector<uint8_t>& v) {
        Matrix m = unvectorize(s.ambient(), s.field(), v);
        ++p.rank_distribution[rank(m)];
        if (classify_shape(m).alternating) ++p.alternating_count;
        return true;
    });
    p.contains_zero = p.rank_distribution.count(0) > 0;
    return p;
}

/// Name of the first profile field on which the two sides differ, empty when equal.
inline std::string first_profile_difference(const InvariantProfile& a, const InvariantProfile& b) {
    if (a.dim != b.dim) return "dim";
    if (a.is_linear != b.is_linear) return "is_linear";
    if (a.contains_zero != b.contains_zero) return "contains_zero";
    if (a.rank_distribution != b.rank_distribution) return "rank_distribution";
    if (a.alternating_count != b.alternating_count) return "alternating_count";
    if (a.common_kernel_dim != b.common_kernel_dim) return "common_kernel_dim";
    if (a.left_kernel_dim != b.left_kernel_dim) return "left_kernel_dim";
    return "";
}

/// |GL_n(F_q)| = prod_{i<n} (q^n - q^i), saturating at LLONG_MAX / 2.
inline long long general_linear_order(uint16_t q, int n) {
    const long long cap = (1LL << 62);
    long long qn = 1;
    for (int i = 0; i < n; ++i) {
        if (qn > cap / q) return cap;
        qn *= q;
    }
    long long order = 1, qi = 1;
    for (int i = 0; i < n; ++i) {
        long long factor = qn - qi;
        if (factor <= 0 || order > cap / factor) return cap;
        order *= factor;
        qi *= q;
    }
    return order;
}

namespace detail {

// Enumeration order: ascending row-major vectorization, invertible only.
inline std::shared_ptr<const std::vector<Matrix>> general_linear_group(FieldSpec f, int n,
                                                                       long long group_budget) {
    const long long order = general_linear_order(f.q, n);
    if (order > group_budget)
        throw capacity_error("general_linear_group: |GL_" + std::to_string(n) + "(F_" +
                             std::to_string(f.q) + ")| = " + std::to_string(order) +
                             " exceeds group budget " + std::to_string(group_budget));
    static std::mutex mtx;
    static std::map<std::pair<uint16_t, int>, std::shared_ptr<const std::vector<Matrix>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(f.q, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto group = std::make_shared<std::vector<Matrix>>();
    group->reserve(size_t(order));
    std::vector<uint8_t> digits(size_t(n) * n, 0);
    for (;;) {
        Matrix m(f, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.set(i, j, digits[size_t(i * n + j)]);
        if (rank(m) == n) group->push_back(std::move(m));
        int k = n * n - 1;
        while (k >= 0 && digits[size_t(k)] == f.q - 1) {
            digits[size_t(k)] = 0;
            --k;
        }
        if (k < 0) break;
        ++digits[size_t(k)];
    }
    cache[key] = group;
    return group;
}

} // namespace detail

/// Byte-stable serialization of a canonical space: ambient tag, sizes, q, dim,
/// then base and basis digits in the frozen coordinate order.
inline std::string serialize_space(const AffineMatrixSpace& s) {
    std::string out;
    out.reserve(8 + size_t(s.dim() + 1) * size_t(s.ambient().dim()));
    switch (s.ambient().kind()) {
        case Ambient::full: out.push_back('f'); break;
        case Ambient::symmetric: out.push_back('s'); break;
        case Ambient::alternating: out.push_back('a'); break;
    }
    out.push_back(char(s.ambient().rows()));
    out.push_back(char(s.ambient().cols()));
    out.push_back(char(s.field().q));
    out.push_back(char(s.dim()));
    out.append(s.base_vec().begin(), s.base_vec().end());
    for (const auto& row : s.basis_vecs()) out.append(row.begin(), row.end());
    return out;
}

/// P . S . P^T, canonicalized. P must be invertible of the ambient size.
inline AffineMatrixSpace transform_space(const Matrix& p, const AffineMatrixSpace& s) {
    Matrix pt = transpose(p);
    std::vector<uint8_t> base = vectorize(s.ambient(), p * s.base_matrix() * pt);
    std::vector<std::vector<uint8_t>> basis;
    basis.reserve(size_t(s.dim()));
    for (int k = 0; k < s.dim(); ++k)
        basis.push_back(vectorize(s.ambient(), p * s.basis_matrix(k) * pt));
    return detail::canonicalize(s.ambient(), s.field(), std::move(base), std::move(basis));
}

struct CongruenceResult {
    bool congruent = false;
    std::optional<Matrix> witness;    // first P in the enumeration order with P A P^T = B
    std::string first_difference;     // profile field, or "group_exhausted"
};

/// Exact congruence test of two affine spaces under GL_n(F_q). The invariant
/// profile comparison always runs first; the group is only enumerated on
/// profile-equal pairs.
inline CongruenceResult are_congruent(const AffineMatrixSpace& a, const AffineMatrixSpace& b,
                                      long long member_budget = kDefaultMemberBudget,
                                      long long group_budget = kDefaultGroupBudget) {
    if (!(a.ambient() == b.ambient()) || !(a.field() == b.field()))
        throw usage_error("are_congruent: spaces live in different ambients");
    std::string diff = first_profile_difference(invariant_profile(a, member_budget),
                                                invariant_profile(b, member_budget));
    if (!diff.empty()) return {false, std::nullopt, diff};
    const std::string target = serialize_space(b);
    auto group = detail::general_linear_group(a.field(), a.ambient().rows(), group_budget);
    for (const Matrix& p : *group)
        if (serialize_space(transform_space(p, a)) == target) return {true, p, ""};
    return {false, std::nullopt, "group_exhausted"};
}

/// Lexicographically smallest serialized canonical form of P . S . P^T over
/// all P in GL_n(F_q). Equal keys <=> congruent spaces.
inline std::string canonical_key(const AffineMatrixSpace& s,
                                 long long group_budget = kDefaultGroupBudget) {
    auto group = detail::general_linear_group(s.field(), s.ambient().rows(), group_budget);
    std::string best;
    for (const Matrix& p : *group) {
        std::string key = serialize_space(transform_space(p, s));
        if (best.empty() || key < best) best = std::move(key);
    }
    return best;
}

} // namespace affrank
