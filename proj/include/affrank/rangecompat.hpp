#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affrank/models.hpp"

namespace affrank {

/// A linear map F from a linear space of p x p matrices to K^p, given by the
/// image of each basis element. F(sum c_i B_i) = sum c_i images[i].
struct LinearMapOnSpace {
    AffineMatrixSpace domain;
    std::vector<std::vector<uint8_t>> images;
};

namespace detail {

// Solvability of M x = b by elimination on the augmented matrix.
inline bool in_column_space(const Matrix& m, const std::vector<uint8_t>& b) {
    const int n = m.rows();
    Matrix aug(m.field(), n, m.cols() + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
        aug.set(i, m.cols(), b[size_t(i)]);
    }
    return rank(aug) == rank(m);
}

} // namespace detail

/// True iff F(M) lies in the column space of M for every member M of rank at
/// least `min_member_rank`. The default 0 is plain range-compatibility; 1
/// checks the weaker property quantified over nonzero members only.
inline bool is_range_compatible(const LinearMapOnSpace& f,
                                long long member_budget = kDefaultMemberBudget,
                                int min_member_rank = 0) {
    const auto& s = f.domain;
    if (!s.is_linear()) throw usage_error("is_range_compatible: domain must be linear");
    if (int(f.images.size()) != s.dim())
        throw usage_error("is_range_compatible: one image per basis element required");
    const uint16_t q = s.field().q;
    const int p = s.ambient().rows();
    const int d = s.dim();
    detail::member_count_or_throw(s, member_budget, "is_range_compatible");
    // parallel odometer over the member and its image under F
    std::vector<uint8_t> cur = s.base_vec();
    std::vector<uint8_t> img(size_t(p), 0);
    std::vector<uint8_t> digits(size_t(d), 0);
    for (;;) {
        Matrix m = unvectorize(s.ambient(), s.field(), cur);
        if (rank(m) >= min_member_rank && !detail::in_column_space(m, img)) return false;
        int i = d - 1;
        while (i >= 0) {
            detail::add_scaled(cur, s.basis_vecs()[size_t(i)], 1, q);
            detail::add_scaled(img, f.images[size_t(i)], 1, q);
            if (++digits[size_t(i)] < q) break;
            digits[size_t(i)] = 0;
            --i;
        }
        if (i < 0) return true;
    }
}

enum class RcLabel { local, local_plus_delta, other };

struct RcClassified {
    std::vector<std::vector<uint8_t>> images;
    RcLabel label = RcLabel::other;
    std::optional<std::vector<uint8_t>> witness; // x with F(M) = Mx (after removing the
                                                 // diagonal part for local_plus_delta)
};

struct RcEnumeration {
    AffineMatrixSpace domain;
    long long maps_tested = 0;
    std::vector<RcClassified> rc_maps;
    long long local_count = 0;
    long long local_plus_delta_count = 0;
    long long other_count = 0;
};

namespace detail {

// First x in lexicographic order with B_i x = images[i] for every basis element.
inline std::optional<std::vector<uint8_t>> local_witness(
    const AffineMatrixSpace& s, const std::vector<std::vector<uint8_t>>& images) {
    const uint16_t q = s.field().q;
    const int p = s.ambient().rows();
    std::vector<Matrix> basis;
    for (int k = 0; k < s.dim(); ++k) basis.push_back(s.basis_matrix(k));
    std::vector<uint8_t> x(size_t(p), 0);
    for (;;) {
        bool ok = true;
        for (int k = 0; ok && k < s.dim(); ++k)
            for (int i = 0; ok && i < p; ++i) {
                uint32_t acc = 0;
                for (int j = 0; j < p; ++j) acc += uint32_t(basis[size_t(k)].at(i, j)) * x[size_t(j)];
                ok = uint8_t(acc % q) == images[size_t(k)][size_t(i)];
            }
        if (ok) return x;
        int i = p - 1;
        while (i >= 0 && x[size_t(i)] == q - 1) {
            x[size_t(i)] = 0;
            --i;
        }
        if (i < 0) return std::nullopt;
        ++x[size_t(i)];
    }
}

} // namespace detail

/// Enumerates every linear map from the full Sym_p or Alt_p space to K^p,
/// keeps the range-compatible ones, and labels each as local, local plus the
/// diagonal map (characteristic 2 only), or other.
inline RcEnumeration enumerate_rc_maps(Ambient ambient_kind, int p, FieldSpec f,
                                       long long map_budget = kDefaultMemberBudget) {
    if (ambient_kind == Ambient::full)
        throw usage_error("enumerate_rc_maps: ambient must be symmetric or alternating");
    AffineMatrixSpace domain = ambient_kind == Ambient::symmetric ? full_symmetric_space(f, p)
                                                                  : full_alternating_space(f, p);
    const int d = domain.dim();
    const long long total = detail::pow_checked(f.q, d * p, map_budget);
    if (total > map_budget)
        throw capacity_error("enumerate_rc_maps: q^(dim*p) = " + std::to_string(f.q) + "^" +
                             std::to_string(d * p) + " maps exceed budget " +
                             std::to_string(map_budget));

    RcEnumeration out{domain, 0, {}, 0, 0, 0};
    std::vector<std::vector<uint8_t>> delta_images; // images of M -> d(M) on the basis
    for (int k = 0; k < d; ++k) {
        Matrix b = domain.basis_matrix(k);
        std::vector<uint8_t> dv(size_t(p), 0);
        for (int i = 0; i < p; ++i) dv[size_t(i)] = b.at(i, i);
        delta_images.push_back(std::move(dv));
    }

    std::vector<std::vector<uint8_t>> images(size_t(d), std::vector<uint8_t>(size_t(p), 0));
    for (;;) {
        ++out.maps_tested;
        LinearMapOnSpace map{domain, images};
        if (is_range_compatible(map)) {
            RcClassified c;
            c.images = images;
            if (auto w = detail::local_witness(domain, images)) {
                c.label = RcLabel::local;
                c.witness = *w;
                ++out.local_count;
            } else if (f.q == 2) {
                std::vector<std::vector<uint8_t>> shifted = images;
                for (int k = 0; k < d; ++k)
                    for (int i = 0; i < p; ++i)
                        shifted[size_t(k)][size_t(i)] = fp::sub(
                            shifted[size_t(k)][size_t(i)], delta_images[size_t(k)][size_t(i)], 2);
                if (auto w = detail::local_witness(domain, shifted)) {
                    c.label = RcLabel::local_plus_delta;
                    c.witness = *w;
                    ++out.local_plus_delta_count;
                } else {
                    ++out.other_count;
                }
            } else {
                ++out.other_count;
            }
            out.rc_maps.push_back(std::move(c));
        }
        // next map, lexicographic over all d*p digits
        int k = d - 1, i = p - 1;
        for (;;) {
            if (k < 0) return out;
            if (++images[size_t(k)][size_t(i)] < f.q) break;
            images[size_t(k)][size_t(i)] = 0;
            if (--i < 0) {
                i = p - 1;
                --k;
            }
        }
    }
}

inline std::string rc_label_string(RcLabel l) {
    switch (l) {
        case RcLabel::local: return "local";
        case RcLabel::local_plus_delta: return "local_plus_delta";
        case RcLabel::other: return "other";
    }
    return "?";
}

} // namespace affrank
