#pragma once

#include <string>
#include <vector>

#include "affrank/space.hpp"

namespace affrank {

// Catalog of the named bounded-rank spaces.
//   sym_pad(r):  Sym_r embedded top-left in size n          (upper rank r)
//   alt_pad(r):  Alt_{r+1} embedded top-left, r even        (upper rank r)
//   wa(r):       [[A, B], [-B^T, 0]], A in Alt_s, r = 2s    (upper rank r)
//   ws(r):       symmetric block pattern, r even or odd     (upper rank r)
//   z(m):        {[S, d(S); d(S)^T, (m-1)]} padded to n, q=2 (upper rank m-1)
//   zprime(r):   symmetric pattern with a Z_2 block, q=2, r odd
//   y1/y2/y3:    the three singular 3-dimensional affine families, n=3, q=2
//   u:           the exceptional alternating family, n=4, q=2
enum class ModelTag { sym_pad, alt_pad, wa, ws, z, zprime, y1, y2, y3, u };

struct ModelName {
    ModelTag tag;
    int param = 0; // r for sym_pad/alt_pad/wa/ws/zprime, block size m for z

    bool operator==(const ModelName&) const = default;
};

inline std::string model_tag_string(ModelTag t) {
    switch (t) {
        case ModelTag::sym_pad: return "sym-pad";
        case ModelTag::alt_pad: return "alt-pad";
        case ModelTag::wa: return "wa";
        case ModelTag::ws: return "ws";
        case ModelTag::z: return "z";
        case ModelTag::zprime: return "zprime";
        case ModelTag::y1: return "y1";
        case ModelTag::y2: return "y2";
        case ModelTag::y3: return "y3";
        case ModelTag::u: return "u";
    }
    return "?";
}

inline std::string model_name_string(const ModelName& m) {
    switch (m.tag) {
        case ModelTag::sym_pad:
        case ModelTag::alt_pad:
        case ModelTag::wa:
        case ModelTag::ws:
        case ModelTag::zprime:
            return model_tag_string(m.tag) + "(r=" + std::to_string(m.param) + ")";
        case ModelTag::z:
            return "z(m=" + std::to_string(m.param) + ")";
        default:
            return model_tag_string(m.tag);
    }
}

namespace detail {

inline Matrix sym_unit(FieldSpec f, int n, int i, int j) {
    Matrix m(f, n, n);
    m.set(i, j, 1);
    m.set(j, i, 1);
    return m;
}

inline Matrix alt_unit(FieldSpec f, int n, int i, int j) {
    Matrix m(f, n, n);
    m.set(i, j, 1);
    m.set(j, i, fp::neg(1, f.q));
    return m;
}

inline void require(bool ok, const std::string& constraint) {
    if (!ok) throw usage_error("build_model: constraint violated: " + constraint);
}

} // namespace detail

/// The full space Sym_n as a canonical linear space.
inline AffineMatrixSpace full_symmetric_space(FieldSpec f, int n) {
    std::vector<Matrix> gens;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) gens.push_back(detail::sym_unit(f, n, i, j));
    return space_from_generators(AmbientKind::symmetric(n), Matrix(f, n, n), gens);
}

/// The full space Alt_n as a canonical linear space.
inline AffineMatrixSpace full_alternating_space(FieldSpec f, int n) {
    std::vector<Matrix> gens;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) gens.push_back(detail::alt_unit(f, n, i, j));
    return space_from_generators(AmbientKind::alternating(n), Matrix(f, n, n), gens);
}

/// The full space Mat_{n,p} as a canonical linear space.
inline AffineMatrixSpace full_rectangular_space(FieldSpec f, int n, int p) {
    std::vector<Matrix> gens;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            Matrix g(f, n, p);
            g.set(i, j, 1);
            gens.push_back(std::move(g));
        }
    return space_from_generators(AmbientKind::full(n, p), Matrix(f, n, p), gens);
}

namespace detail {

// Z_m at its own size: {[S, d(S); d(S)^T, (m-1).1]} for S in Sym_{m-1}.
inline AffineMatrixSpace z_block(FieldSpec f, int m) {
    require(f.q == 2, "z requires q = 2");
    require(m >= 1, "z requires m >= 1");
    Matrix base(f, m, m);
    base.set(m - 1, m - 1, unsigned(m - 1));
    std::vector<Matrix> gens;
    for (int i = 0; i < m - 1; ++i)
        for (int j = i; j < m - 1; ++j) {
            Matrix g = sym_unit(f, m, i, j);
            if (i == j) { // diagonal parameter feeds the border through d(S)
                g.set(i, m - 1, 1);
                g.set(m - 1, i, 1);
            }
            gens.push_back(std::move(g));
        }
    return space_from_generators(AmbientKind::symmetric(m), base, gens);
}

} // namespace detail

/// Builds the named space at ambient size n over GF(q), in canonical form.
/// The ambient is alternating for wa/alt_pad/u, symmetric otherwise.
inline AffineMatrixSpace build_model(const ModelName& name, int n, FieldSpec f) {
    using detail::require;
    const int r = name.param;
    switch (name.tag) {
        case ModelTag::sym_pad: {
            require(0 <= r && r <= n, "sym-pad requires 0 <= r <= n");
            return pad_space(full_symmetric_space(f, r), n);
        }
        case ModelTag::alt_pad: {
            require(r % 2 == 0, "alt-pad requires r even");
            require(0 <= r && r + 1 <= n, "alt-pad requires r + 1 <= n");
            return pad_space(full_alternating_space(f, r + 1), n);
        }
        case ModelTag::wa: {
            require(r % 2 == 0, "wa requires r even");
            require(0 <= r && r < n, "wa requires r < n");
            const int s = r / 2;
            std::vector<Matrix> gens;
            for (int i = 0; i < s; ++i)
                for (int j = i + 1; j < s; ++j) gens.push_back(detail::alt_unit(f, n, i, j));
            for (int i = 0; i < s; ++i)
                for (int j = s; j < n; ++j) gens.push_back(detail::alt_unit(f, n, i, j));
            return space_from_generators(AmbientKind::alternating(n), Matrix(f, n, n), gens);
        }
        case ModelTag::ws: {
            require(r >= 0, "ws requires r >= 0");
            const int s = r / 2;
            std::vector<Matrix> gens;
            if (r % 2 == 0) {
                require(r <= n, "ws with even r requires r = 2s <= n");
                for (int i = 0; i < s; ++i)
                    for (int j = i; j < n; ++j) gens.push_back(detail::sym_unit(f, n, i, j));
            } else {
                require(r < n, "ws with odd r requires r = 2s + 1 < n");
                for (int i = 0; i < s; ++i)
                    for (int j = i; j < n; ++j) gens.push_back(detail::sym_unit(f, n, i, j));
                gens.push_back(detail::sym_unit(f, n, s, s));
            }
            return space_from_generators(AmbientKind::symmetric(n), Matrix(f, n, n), gens);
        }
        case ModelTag::z: {
            const int m = name.param;
            require(m >= 1 && m <= n, "z requires 1 <= m <= n");
            return pad_space(detail::z_block(f, m), n);
        }
        case ModelTag::zprime: {
            require(f.q == 2, "zprime requires q = 2");
            require(r % 2 == 1, "zprime requires r odd");
            require(r < n, "zprime requires r < n");
            const int s = r / 2;
            require(n >= s + 2, "zprime requires n >= s + 2");
            Matrix base = Matrix::elementary(f, n, s + 1, s + 1);
            std::vector<Matrix> gens;
            for (int i = 0; i < s; ++i)
                for (int j = i; j < n; ++j) gens.push_back(detail::sym_unit(f, n, i, j));
            // the Z_2 block direction: all-ones minus E_22, at rows/cols s, s+1
            Matrix dir(f, n, n);
            dir.set(s, s, 1);
            dir.set(s, s + 1, 1);
            dir.set(s + 1, s, 1);
            gens.push_back(std::move(dir));
            return space_from_generators(AmbientKind::symmetric(n), base, gens);
        }
        case ModelTag::y1: {
            require(n == 3 && f.q == 2, "y1 requires n = 3, q = 2");
            Matrix base = Matrix::from_rows(f, {{0, 0, 1}, {0, 0, 0}, {1, 0, 0}});
            std::vector<Matrix> gens = {
                Matrix::from_rows(f, {{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}), // a
                Matrix::from_rows(f, {{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}), // b
                Matrix::from_rows(f, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}), // c
            };
            return space_from_generators(AmbientKind::symmetric(3), base, gens);
        }
        case ModelTag::y2: {
            require(n == 3 && f.q == 2, "y2 requires n = 3, q = 2");
            Matrix base = Matrix::from_rows(f, {{0, 0, 1}, {0, 0, 0}, {1, 0, 0}});
            std::vector<Matrix> gens = {
                Matrix::from_rows(f, {{1, 0, 1}, {0, 0, 0}, {1, 0, 0}}), // a
                Matrix::from_rows(f, {{0, 1, 1}, {1, 0, 0}, {1, 0, 0}}), // b
                Matrix::from_rows(f, {{0, 0, 1}, {0, 1, 0}, {1, 0, 1}}), // c
            };
            return space_from_generators(AmbientKind::symmetric(3), base, gens);
        }
        case ModelTag::y3: {
            require(n == 3 && f.q == 2, "y3 requires n = 3, q = 2");
            Matrix base = Matrix::from_rows(f, {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}});
            std::vector<Matrix> gens = {
                Matrix::from_rows(f, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}), // a
                Matrix::from_rows(f, {{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}), // b
                Matrix::from_rows(f, {{0, 0, 1}, {0, 0, 0}, {1, 0, 0}}), // c
            };
            return space_from_generators(AmbientKind::symmetric(3), base, gens);
        }
        case ModelTag::u: {
            require(n == 4 && f.q == 2, "u requires n = 4, q = 2");
            Matrix base(f, 4, 4);
            base.set(0, 3, 1);
            base.set(3, 0, 1);
            std::vector<Matrix> gens = {
                detail::alt_unit(f, 4, 0, 1),                              // a
                detail::alt_unit(f, 4, 0, 2),                              // b
                detail::alt_unit(f, 4, 1, 2) + detail::alt_unit(f, 4, 0, 3), // c
            };
            return space_from_generators(AmbientKind::alternating(4), base, gens);
        }
    }
    throw usage_error("build_model: unknown tag");
}

enum class FormulaKind { a1, a2, s1, s2 };

/// The four critical dimension formulas. a1/a2 require r even; all require r < n.
inline int dim_formula(FormulaKind kind, int n, int r) {
    if (r < 0 || r >= n) throw usage_error("dim_formula: requires 0 <= r < n");
    const int s = r / 2;
    switch (kind) {
        case FormulaKind::a1:
            if (r % 2) throw usage_error("dim_formula: a1 requires r even");
            return r * (r + 1) / 2;
        case FormulaKind::a2:
            if (r % 2) throw usage_error("dim_formula: a2 requires r even");
            return s * (s - 1) / 2 + s * (n - s);
        case FormulaKind::s1:
            return r * (r + 1) / 2;
        case FormulaKind::s2:
            return s * (s + 1) / 2 + s * (n - s) + (r % 2 ? 1 : 0);
    }
    throw usage_error("dim_formula: unknown kind");
}

inline int max_dim_formula(Ambient ambient, int n, int r) {
    if (ambient == Ambient::alternating)
        return std::max(dim_formula(FormulaKind::a1, n, r), dim_formula(FormulaKind::a2, n, r));
    if (ambient == Ambient::symmetric)
        return std::max(dim_formula(FormulaKind::s1, n, r), dim_formula(FormulaKind::s2, n, r));
    return n * r; // full ambient: the rectangular bound with n = p
}

enum class CrossKind { alt, sym_even, sym_odd };
enum class Crossover { first_max, second_max, tie };

/// Which of the two formulas attains the maximum:
///   alt      -> first iff 5s >= 2n-3 or s = 0
///   sym_even -> first iff 5s >= 2n-1 or s = 0
///   sym_odd  -> first iff 5s >= 2n-5 or s = 0
inline Crossover crossover(CrossKind kind, int n, int s) {
    if (s < 0 || n <= (kind == CrossKind::sym_odd ? 2 * s + 1 : 2 * s))
        throw usage_error("crossover: requires s >= 0 and r < n");
    int threshold = 0;
    switch (kind) {
        case CrossKind::alt: threshold = 2 * n - 3; break;
        case CrossKind::sym_even: threshold = 2 * n - 1; break;
        case CrossKind::sym_odd: threshold = 2 * n - 5; break;
    }
    const bool first = 5 * s >= threshold || s == 0;
    const bool second = 5 * s <= threshold || s == 0;
    if (first && second) return Crossover::tie;
    return first ? Crossover::first_max : Crossover::second_max;
}

/// Equality-case candidates for the ambient at (n, r, q), in matching order:
/// pads first, then ws/wa, then z/zprime, then y/u.
inline std::vector<ModelName> candidate_models(Ambient ambient, int n, int r, FieldSpec f) {
    std::vector<ModelName> out;
    const int s = r / 2;
    if (ambient == Ambient::alternating) {
        if (r % 2 == 0 && r + 1 <= n) out.push_back({ModelTag::alt_pad, r});
        if (r % 2 == 0 && r < n) out.push_back({ModelTag::wa, r});
        if (f.q == 2 && r == 2 && n == 4) out.push_back({ModelTag::u, 0});
    } else if (ambient == Ambient::symmetric) {
        if (r <= n) out.push_back({ModelTag::sym_pad, r});
        if (f.q == 2 && r % 2 == 0 && r + 1 <= n) out.push_back({ModelTag::alt_pad, r});
        if (f.q == 2 && r + 1 <= n) out.push_back({ModelTag::z, r + 1});
        if (r % 2 == 0 ? r <= n : r < n) out.push_back({ModelTag::ws, r});
        if (f.q == 2 && r % 2 == 1 && r < n && n >= s + 2)
            out.push_back({ModelTag::zprime, r});
        if (f.q == 2 && r == 2 && n == 3) {
            out.push_back({ModelTag::y1, 0});
            out.push_back({ModelTag::y2, 0});
            out.push_back({ModelTag::y3, 0});
        }
    }
    return out;
}

} // namespace affrank
