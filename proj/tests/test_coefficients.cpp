#include <gtest/gtest.h>

#include <fstream>

#include "polyrad/coefficients.hpp"
#include "polyrad/radial_json.hpp"
#include "polyrad/report.hpp"

using namespace polyrad;

namespace {
const AlphaPoly a = AlphaPoly::alpha();
}

TEST(DFactor, Conventions) {
    EXPECT_EQ(d_factor(0, 3, 5), 1);
    EXPECT_EQ(d_factor(-1, 3, 5), 0);
    EXPECT_EQ(d_factor(1, 1, 2), 1);
    EXPECT_EQ(d_factor(4, 3, 5), 0);
    EXPECT_EQ(d_factor(2, 3, 6), (6 - 2) * (6 - 3));
}

TEST(EFactor, Conventions) {
    EXPECT_EQ(e_factor(2, 2), AlphaPoly(1));
    EXPECT_EQ(e_factor(0, 1), AlphaPoly::affine(1, 1));
    EXPECT_TRUE(e_factor(5, 3).is_zero());
    EXPECT_TRUE(e_factor(-1, 3).is_zero());
    EXPECT_EQ(e_factor(1, 3), AlphaPoly::affine(1, 3) * AlphaPoly::affine(1, 5));
}

TEST(Binomial, ZeroOutsideRange) {
    EXPECT_EQ(binomial(5, 2), 10);
    EXPECT_EQ(binomial(5, -1), 0);
    EXPECT_EQ(binomial(5, 6), 0);
}

TEST(KFactor, Values) {
    for (int m = 1; m <= 8; ++m) EXPECT_EQ(k_factor(0, m), AlphaPoly(1));
    EXPECT_EQ(k_factor(1, 2), AlphaPoly::affine(1, -3));
    for (int m = 1; m <= 8; ++m) EXPECT_EQ(k_factor(m, m) * e_factor(0, m), p_constant(m)) << "m=" << m;
    EXPECT_THROW(k_factor(3, 2), domain_error);
}

TEST(KFactor, Recursion) {
    for (int m = 1; m <= 8; ++m)
        for (int j = 0; j < m; ++j)
            EXPECT_EQ(k_factor(j + 1, m), AlphaPoly::affine(1, 1 - 2LL * m + 2LL * j) * k_factor(j, m));
}

TEST(GCoefficient, TopRowAndFirstRow) {
    for (int m = 1; m <= 8; ++m) {
        EXPECT_EQ(g_coefficient(0, m, m), p_constant(m));
        for (int i = 1; i <= m; ++i) EXPECT_TRUE(g_coefficient(i, m, m).is_zero()) << "i=" << i << " m=" << m;
        EXPECT_EQ(g_coefficient(1, 1, m), AlphaPoly::affine(2, 2 - 4LL * m) * AlphaPoly(m - 1LL));
    }
    EXPECT_EQ(g_coefficient(0, 1, 2).evaluate(Rational(4)), Rational(5));
    EXPECT_EQ(g_coefficient(1, 1, 2).evaluate(Rational(4)), Rational(2));
}

TEST(HCoefficient, InductionIdentity) {
    for (int m = 1; m <= 8; ++m)
        for (int j = 1; j < m; ++j)
            for (int i = 0; i <= j + 1; ++i)
                EXPECT_EQ(g_coefficient(i, j + 1, m), -(k_factor(j, m) * h_coefficient(i, j, m)))
                    << "i=" << i << " j=" << j << " m=" << m;
}

TEST(HCoefficient, FirstCaseReduction) {
    for (int m = 2; m <= 8; ++m)
        for (int j = 1; j < m; ++j)
            EXPECT_EQ(h_coefficient(0, j, m), -(e_factor(0, j + 1) * AlphaPoly::affine(1, 1 - 2LL * m + 2LL * j)));
}

TEST(HCoefficient, BracketIdentity) {
    for (int m = 2; m <= 8; ++m)
        for (int j = 1; j < m; ++j) {
            EXPECT_EQ(lmq(j, m).L, -Integer(j + 1) * (m - j - 1));
            const AlphaPoly expected = AlphaPoly(-(j + 1LL) * (m - j - 1LL)) * AlphaPoly::affine(1, 2LL * j + 1) *
                                       AlphaPoly::affine(1, 2LL * j + 1 - 2LL * m);
            EXPECT_EQ(lmq_bracket(j, m), expected) << "j=" << j << " m=" << m;
            for (int i = 1; i <= j - 1; ++i) EXPECT_EQ(h_coefficient(i, j, m), h_case1_bracket_form(i, j, m));
            for (int i = 0; i <= j + 1; ++i) EXPECT_EQ(h_coefficient(i, j, m), h_case_reduced(i, j, m));
        }
    EXPECT_THROW(h_coefficient(0, 2, 2), domain_error);
}

TEST(PConstant, Values) {
    EXPECT_EQ(p_constant(1), AlphaPoly::affine(1, -1) * AlphaPoly::affine(1, 1));
    EXPECT_EQ(p_constant(2).evaluate(Rational(4)), Rational(105));
    EXPECT_EQ(p_constant(1).evaluate(Rational(3)), Rational(8));
    for (int m = 1; m <= 8; ++m) EXPECT_EQ(p_constant(m).degree(), 2 * m);
}

TEST(CoeffTable, BoundaryConventions) {
    const auto t = CoeffTable::build(4);
    for (int j = 0; j <= 4; ++j) {
        EXPECT_EQ(t.D.at({0, j}), 1);
        EXPECT_EQ(t.D.at({-1, j}), 0);
        EXPECT_EQ(t.D.at({j + 1, j}), 0);
        EXPECT_EQ(t.E.at({j, j}), AlphaPoly(1));
        EXPECT_TRUE(t.E.at({j + 1, j}).is_zero());
        EXPECT_TRUE(t.E.at({-1, j}).is_zero());
    }
    EXPECT_EQ(t.H.count({0, 4}), 0u);
    EXPECT_EQ(t.H.count({0, 3}), 1u);
}

TEST(VerifyExpansion, PassesUpToEight) {
    const auto r1 = verify_expansion(1);
    ASSERT_EQ(r1.checks.size(), 1u);
    EXPECT_TRUE(r1.pass());
    for (int m = 2; m <= 8; ++m) EXPECT_TRUE(verify_expansion(m).pass()) << "m=" << m;
}

TEST(VerifyExpansion, DetectsCorruptedEntry) {
    auto t = CoeffTable::build(3);
    t.G[{1, 2}] = t.G[{1, 2}] + AlphaPoly(1);
    const auto rep = verify_expansion(3, t);
    EXPECT_FALSE(rep.pass());
    ASSERT_FALSE(rep.checks[1].pass);
    ASSERT_EQ(rep.checks[1].diffs.size(), 1u);
    EXPECT_EQ(rep.checks[1].diffs[0].difference(), AlphaPoly(-1));
    EXPECT_TRUE(rep.checks[0].pass);
}

TEST(VerifyRecursion, AllIdentitiesHold) {
    for (int m = 1; m <= 8; ++m) {
        const auto rep = verify_recursion(m);
        EXPECT_TRUE(rep.pass()) << "m=" << m << ": " << (rep.failures.empty() ? "" : rep.failures.front());
        EXPECT_GT(rep.identities_checked, 0);
    }
}

TEST(Golden, TablesMatchIndependentOracle) {
    for (int m = 1; m <= 8; ++m) {
        std::ifstream in(std::string(POLYRAD_GOLDEN_DIR) + "/coeff_table_m" + std::to_string(m) + ".json");
        ASSERT_TRUE(in) << "missing golden table m=" << m;
        const auto golden = nlohmann::json::parse(in);
        nlohmann::json mine = report::document();
        mine.update(coeff_table_json(CoeffTable::build(m)));
        EXPECT_EQ(mine, golden) << "m=" << m;
    }
}
