#include <doctest.h>

#include <set>

#include "affrank/models.hpp"
#include "affrank/rng.hpp"

using namespace affrank;

TEST_CASE("z(3) over GF(2) is the displayed family") {
    FieldSpec f2(2);
    auto z3 = build_model({ModelTag::z, 3}, 3, f2);
    CHECK(z3.dim() == 3);
    CHECK(z3.is_linear()); // n odd
    std::set<std::string> got;
    for (const auto& m : enumerate_members(z3)) got.insert(m.to_text());
    std::set<std::string> want;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                want.insert(Matrix::from_rows(f2, {{a, b, a}, {b, c, c}, {a, c, 0}}).to_text());
    CHECK(got == want);
    // exactly two alternating members
    int alternating = 0;
    for (const auto& m : enumerate_members(z3))
        if (classify_shape(m).alternating) ++alternating;
    CHECK(alternating == 2);
}

TEST_CASE("z(2) is { E_22, all-ones }") {
    FieldSpec f2(2);
    auto z2 = build_model({ModelTag::z, 2}, 2, f2);
    auto members = enumerate_members(z2);
    REQUIRE(members.size() == 2);
    CHECK(members[0] == Matrix::elementary(f2, 2, 1, 1));
    CHECK(members[1] == Matrix::from_rows(f2, {{1, 1}, {1, 1}}));
    CHECK_FALSE(z2.is_linear());
}

TEST_CASE("y families match their displayed matrices") {
    FieldSpec f2(2);
    auto y1 = build_model({ModelTag::y1, 0}, 3, f2);
    auto y2 = build_model({ModelTag::y2, 0}, 3, f2);
    auto y3 = build_model({ModelTag::y3, 0}, 3, f2);
    for (const auto* y : {&y1, &y2, &y3}) {
        CHECK(y->dim() == 3);
        CHECK_FALSE(contains(*y, Matrix(f2, 3, 3)));
        for (const auto& m : enumerate_members(*y)) CHECK(det(m).value() == 0);
    }
    std::set<std::string> got1, want1, got2, want2, got3, want3;
    for (const auto& m : enumerate_members(y1)) got1.insert(m.to_text());
    for (const auto& m : enumerate_members(y2)) got2.insert(m.to_text());
    for (const auto& m : enumerate_members(y3)) got3.insert(m.to_text());
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                want1.insert(
                    Matrix::from_rows(f2, {{a, b, c + 1}, {b, c, 0}, {c + 1, 0, 0}}).to_text());
                want2.insert(Matrix::from_rows(f2, {{a, b, a + b + c + 1},
                                                    {b, c, 0},
                                                    {a + b + c + 1, 0, c}})
                                 .to_text());
                want3.insert(
                    Matrix::from_rows(f2, {{a, b, c}, {b, 0, a + 1}, {c, a + 1, 0}}).to_text());
            }
    CHECK(got1 == want1);
    CHECK(got2 == want2);
    CHECK(got3 == want3);
}

TEST_CASE("u matches its displayed matrices and has singular members only") {
    FieldSpec f2(2);
    auto u = build_model({ModelTag::u, 0}, 4, f2);
    CHECK(u.dim() == 3);
    CHECK(u.ambient().kind() == Ambient::alternating);
    CHECK_FALSE(contains(u, Matrix(f2, 4, 4)));
    std::set<std::string> got, want;
    for (const auto& m : enumerate_members(u)) {
        CHECK(det(m).value() == 0);
        got.insert(m.to_text());
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                want.insert(Matrix::from_rows(f2, {{0, a, b, c + 1},
                                                   {a, 0, c, 0},
                                                   {b, c, 0, 0},
                                                   {c + 1, 0, 0, 0}})
                                .to_text());
    CHECK(got == want);
    CHECK(upper_rank(u) == 2);
}

TEST_CASE("model dimensions and upper ranks at small sizes") {
    // ws(4) at n=5 over GF(3): dim 9, upper rank 4
    auto ws54 = build_model({ModelTag::ws, 4}, 5, FieldSpec(3));
    CHECK(ws54.dim() == 9);
    CHECK(upper_rank(ws54) == 4);

    for (unsigned q : {2u, 3u}) {
        FieldSpec f(q);
        for (int n = 1; n <= 4; ++n) {
            for (int r = 0; r <= n; ++r) {
                auto pad = build_model({ModelTag::sym_pad, r}, n, f);
                CHECK(pad.dim() == r * (r + 1) / 2);
                CHECK(upper_rank(pad) == r);
                if (r % 2 == 0 && r + 1 <= n) {
                    auto apad = build_model({ModelTag::alt_pad, r}, n, f);
                    CHECK(apad.dim() == r * (r + 1) / 2);
                    CHECK(upper_rank(apad) == r);
                }
                if (r % 2 == 0 && r < n) {
                    auto wa = build_model({ModelTag::wa, r}, n, f);
                    CHECK(wa.dim() == dim_formula(FormulaKind::a2, n, r));
                    CHECK(upper_rank(wa) == r);
                }
                if (r < n || (r % 2 == 0 && r == n)) {
                    auto ws = build_model({ModelTag::ws, r}, n, f);
                    int s = r / 2;
                    CHECK(ws.dim() == s * (s + 1) / 2 + s * (n - s) + (r % 2 ? 1 : 0));
                    CHECK(upper_rank(ws) == r);
                }
                if (q == 2 && r % 2 == 1 && r < n && n >= r / 2 + 2) {
                    auto zp = build_model({ModelTag::zprime, r}, n, f);
                    CHECK(zp.dim() == dim_formula(FormulaKind::s2, n, r));
                    CHECK(upper_rank(zp) == r);
                }
            }
            if (q == 2)
                for (int m = 1; m <= n; ++m) {
                    auto z = build_model({ModelTag::z, m}, n, f);
                    CHECK(z.dim() == m * (m - 1) / 2);
                    CHECK(upper_rank(z) == m - 1);
                    CHECK(z.is_linear() == (m % 2 == 1));
                }
        }
    }
}

TEST_CASE("pattern membership") {
    FieldSpec f2(2);
    auto ws32 = build_model({ModelTag::ws, 2}, 3, f2);
    CHECK(contains(ws32, Matrix::elementary(f2, 3, 0, 0)));
    CHECK_FALSE(contains(ws32, Matrix::elementary(f2, 3, 2, 2)));
}

TEST_CASE("degenerate coincidences at r = 1") {
    FieldSpec f2(2);
    for (int n = 2; n <= 4; ++n) {
        CHECK(build_model({ModelTag::zprime, 1}, n, f2) == build_model({ModelTag::z, 2}, n, f2));
        CHECK(build_model({ModelTag::ws, 1}, n, f2) == build_model({ModelTag::sym_pad, 1}, n, f2));
    }
}

TEST_CASE("parameter constraints are enforced") {
    FieldSpec f2(2), f3(3);
    CHECK_THROWS_AS(build_model({ModelTag::wa, 3}, 4, f2), usage_error);  // r odd
    CHECK_THROWS_AS(build_model({ModelTag::wa, 4}, 4, f2), usage_error);  // r = n
    CHECK_THROWS_AS(build_model({ModelTag::ws, 5}, 5, f2), usage_error);  // odd r = n
    CHECK_THROWS_AS(build_model({ModelTag::z, 3}, 3, f3), usage_error);   // q != 2
    CHECK_THROWS_AS(build_model({ModelTag::zprime, 2}, 4, f2), usage_error);
    CHECK_THROWS_AS(build_model({ModelTag::y1, 0}, 4, f2), usage_error);
    CHECK_THROWS_AS(build_model({ModelTag::u, 0}, 4, f3), usage_error);
    CHECK_THROWS_AS(build_model({ModelTag::sym_pad, 5}, 4, f2), usage_error);
    CHECK_NOTHROW(build_model({ModelTag::ws, 4}, 4, f3)); // even r = n is allowed
}

TEST_CASE("dim_formula examples") {
    CHECK(dim_formula(FormulaKind::a2, 6, 4) == 9);
    CHECK(dim_formula(FormulaKind::s2, 5, 3) == 6);
    CHECK(dim_formula(FormulaKind::s1, 5, 0) == 0);
    CHECK(dim_formula(FormulaKind::s1, 4, 3) == 6);
    CHECK_THROWS_AS(dim_formula(FormulaKind::a1, 6, 3), usage_error);
    CHECK_THROWS_AS(dim_formula(FormulaKind::s1, 4, 4), usage_error);
}

TEST_CASE("crossover examples and agreement with direct comparison") {
    CHECK(crossover(CrossKind::alt, 8, 2) == Crossover::second_max);
    CHECK(crossover(CrossKind::sym_even, 3, 1) == Crossover::tie);
    CHECK(crossover(CrossKind::alt, 5, 0) == Crossover::tie);
    CHECK(crossover(CrossKind::alt, 9, 0) == Crossover::tie);

    for (int n = 1; n <= 40; ++n)
        for (int s = 0; 2 * s < n; ++s) {
            {
                int a1 = dim_formula(FormulaKind::a1, n, 2 * s);
                int a2 = dim_formula(FormulaKind::a2, n, 2 * s);
                Crossover want = a1 == a2 ? Crossover::tie
                                          : (a1 > a2 ? Crossover::first_max : Crossover::second_max);
                CHECK(crossover(CrossKind::alt, n, s) == want);
            }
            {
                int s1 = dim_formula(FormulaKind::s1, n, 2 * s);
                int s2 = dim_formula(FormulaKind::s2, n, 2 * s);
                Crossover want = s1 == s2 ? Crossover::tie
                                          : (s1 > s2 ? Crossover::first_max : Crossover::second_max);
                CHECK(crossover(CrossKind::sym_even, n, s) == want);
            }
            if (2 * s + 1 < n) {
                int s1 = dim_formula(FormulaKind::s1, n, 2 * s + 1);
                int s2 = dim_formula(FormulaKind::s2, n, 2 * s + 1);
                Crossover want = s1 == s2 ? Crossover::tie
                                          : (s1 > s2 ? Crossover::first_max : Crossover::second_max);
                CHECK(crossover(CrossKind::sym_odd, n, s) == want);
            }
        }
}

TEST_CASE("the border identity behind the singularity of z") {
    // over GF(2): d(S)^T S^ad d(S) = (m-1) det S for symmetric S
    FieldSpec f2(2);
    for (int sz = 1; sz <= 3; ++sz) {
        const int nc = sz * (sz + 1) / 2;
        for (unsigned mask = 0; mask < (1u << nc); ++mask) {
            Matrix s(f2, sz, sz);
            int k = 0;
            for (int i = 0; i < sz; ++i)
                for (int j = i; j < sz; ++j) {
                    if (mask >> k & 1u) {
                        s.set(i, j, 1);
                        s.set(j, i, 1);
                    }
                    ++k;
                }
            Matrix d = diagonal_vector(s);
            uint8_t lhs = (transpose(d) * adjugate(s) * d).at(0, 0);
            uint8_t rhs = fp::mul(uint8_t(sz % 2), det(s).value(), 2);
            CHECK(lhs == rhs);
        }
    }
    Rng rng(0xE0);
    for (int trial = 0; trial < 3000; ++trial) {
        Matrix s(f2, 4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                unsigned v = unsigned(rng.below(2));
                s.set(i, j, v);
                s.set(j, i, v);
            }
        Matrix d = diagonal_vector(s);
        uint8_t lhs = (transpose(d) * adjugate(s) * d).at(0, 0);
        CHECK(lhs == 0); // (m-1) even here
    }
    // every member of z(m) is singular
    for (int m = 2; m <= 5; ++m) {
        auto z = build_model({ModelTag::z, m}, m, f2);
        for (const auto& mem : enumerate_members(z)) CHECK(det(mem).value() == 0);
    }
}

TEST_CASE("candidate model lists") {
    FieldSpec f2(2), f3(3);
    CHECK(candidate_models(Ambient::symmetric, 3, 2, f2).size() == 7);
    CHECK(candidate_models(Ambient::symmetric, 3, 2, f3).size() == 2);
    CHECK(candidate_models(Ambient::alternating, 4, 2, f2).size() == 3);
}
