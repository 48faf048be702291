#include <gtest/gtest.h>

#include <random>

#include "polyrad/alpha_poly.hpp"

using namespace polyrad;

TEST(AlphaPoly, ZeroPolynomialHasNoCoefficients) {
    AlphaPoly z;
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.degree(), -1);
    EXPECT_EQ(AlphaPoly({0, 0, 0}), z);
    EXPECT_EQ(z.str(), "0");
}

TEST(AlphaPoly, LeadingCoefficientIsTrimmed) {
    const AlphaPoly p = AlphaPoly({1, 2, 3}) - AlphaPoly({0, 0, 3});
    EXPECT_EQ(p.degree(), 1);
    EXPECT_EQ(p.coefficient(1), Rational(2));
    EXPECT_EQ(p.coefficient(7), Rational(0));
}

TEST(AlphaPoly, ProductMatchesExpansion) {
    // (a - 1)(a + 1) = a^2 - 1
    EXPECT_EQ(AlphaPoly::affine(1, -1) * AlphaPoly::affine(1, 1), AlphaPoly({-1, 0, 1}));
    EXPECT_EQ(product_of_shifts({-1, 1}), AlphaPoly({-1, 0, 1}));
    EXPECT_TRUE((AlphaPoly{} * AlphaPoly::alpha()).is_zero());
}

TEST(AlphaPoly, RationalEvaluationIsExact) {
    const AlphaPoly p = AlphaPoly(std::vector<Rational>{Rational(1, 3), Rational(-1, 2), 2});
    // 1/3 - (1/2)(2/7) + 2 (4/49) = 1/3 - 1/7 + 8/49
    EXPECT_EQ(p.evaluate(Rational(2, 7)), Rational(1, 3) - Rational(1, 7) + Rational(8, 49));
    EXPECT_NEAR(p.evaluate(2.0 / 7.0), static_cast<double>(p.evaluate(Rational(2, 7))), 1e-15);
}

TEST(AlphaPoly, StringFormsRoundTrip) {
    const AlphaPoly p = AlphaPoly(std::vector<Rational>{Rational(-3, 4), 0, 5});
    EXPECT_EQ(p.str(), "5*a^2 - 3/4");
    EXPECT_EQ(AlphaPoly::from_strings(p.to_strings()), p);
    EXPECT_EQ(parse_rational("-12/8"), Rational(-3, 2));
    EXPECT_EQ(to_string(Rational(-6, 4)), "-3/2");
}

TEST(AlphaPoly, RingAxiomsOnRandomPolynomials) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> c(-9, 9), deg(0, 4);
    auto random_poly = [&] {
        std::vector<Rational> v(deg(rng) + 1);
        for (auto& x : v) x = Rational(c(rng), 1 + std::abs(c(rng)));
        return AlphaPoly(std::move(v));
    };
    for (int t = 0; t < 50; ++t) {
        const AlphaPoly a = random_poly(), b = random_poly(), d = random_poly();
        EXPECT_EQ(a * (b + d), a * b + a * d);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) - b, a);
        const Rational x(c(rng), 3);
        EXPECT_EQ((a * b).evaluate(x), a.evaluate(x) * b.evaluate(x));
    }
}
