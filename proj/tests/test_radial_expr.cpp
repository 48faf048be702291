#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "polyrad/coefficients.hpp"
#include "polyrad/radial_expr.hpp"
#include "polyrad/radial_json.hpp"

using namespace polyrad;

namespace {

const AlphaPoly a = AlphaPoly::alpha();

RadialExpr r_squared() { return radial_term(1, 2, {0, 0}); }

}  // namespace

TEST(AbcCoefficients, ConstantIsAnnihilated) {
    const auto c = abc_coefficients(0, {0, 0});
    EXPECT_TRUE(c.A.is_zero());
    EXPECT_TRUE(c.B.is_zero());
    EXPECT_TRUE(c.C.is_zero());
}

TEST(AbcCoefficients, RSquaredAtAlphaFour) {
    const auto c = abc_coefficients(2, {0, 0});
    EXPECT_EQ(c.A.evaluate(Rational(4)), Rational(10));
    EXPECT_EQ(c.B.evaluate(Rational(4)), Rational(20));
    EXPECT_EQ(c.C.evaluate(Rational(4)), Rational(10));
}

TEST(AbcCoefficients, LeadingCoefficientOfFirstLaplacian) {
    // -A(0, alpha, alpha - 2m + 1) is the r^2 coefficient 2(alpha - 2m + 1)(m - 1).
    for (int m = 1; m <= 6; ++m) {
        const auto c = abc_coefficients(0, {1, 1 - 2LL * m});
        EXPECT_EQ(-c.A, AlphaPoly::affine(1, 1 - 2LL * m) * AlphaPoly(2LL * (m - 1))) << "m=" << m;
    }
}

TEST(ApplyLaplacian, FirstOrderExtremal) {
    const RadialExpr lap = apply_laplacian(extremal_base(1));
    EXPECT_EQ(lap, radial_term(-(AlphaPoly::affine(1, -1) * AlphaPoly::affine(1, 1)), 0, {1, 3}));
}

TEST(ApplyLaplacian, ConstantAndZero) {
    EXPECT_TRUE(apply_laplacian(radial_constant(1)).is_zero());
    EXPECT_TRUE(apply_polyharmonic(RadialExpr{}, 1).is_zero());
}

TEST(ApplyLaplacian, RSquaredIsTwoAlphaPlusTwo) {
    const RadialExpr lap = apply_laplacian(r_squared());
    EXPECT_TRUE(equivalent(lap, radial_constant(AlphaPoly::affine(2, 2))));
    EXPECT_EQ(reduce(lap), radial_constant(AlphaPoly::affine(2, 2)));
}

TEST(ApplyLaplacian, ExponentShiftsByFour) {
    const RadialExpr e = radial_term(3, 2, {1, -5}) + radial_term(a, 0, {0, 2}) + radial_term(1, 4, {1, 1});
    RadialExpr cur = e;
    for (int step = 1; step <= 3; ++step) {
        const RadialExpr next = apply_laplacian(cur);
        for (const auto& t : next.terms()) {
            bool found = false;
            for (const auto& s : cur.terms()) found = found || t.sigma == s.sigma.shifted(4);
            EXPECT_TRUE(found) << "step " << step;
        }
        cur = next;
    }
}

TEST(ApplyPolyharmonic, ExtremalIdentityUpToEight) {
    for (int m = 1; m <= 8; ++m) {
        const RadialExpr lhs = apply_polyharmonic(extremal_base(m), m, true);
        EXPECT_EQ(lhs, radial_term(p_constant(m), 0, {1, 2LL * m + 1})) << "m=" << m;
        EXPECT_FALSE(lhs.has_negative_powers());
    }
}

TEST(ApplyPolyharmonic, SecondOrderFirstStep) {
    const RadialExpr e = apply_polyharmonic(extremal_base(2), 1, true);
    const AlphaPoly am3 = AlphaPoly::affine(1, -3);
    EXPECT_EQ(e, radial_term(am3 * AlphaPoly::affine(1, 1), 0, {1, 1}) + radial_term(am3 * AlphaPoly(2), 2, {1, 1}));
    EXPECT_EQ(e.coefficient(0, {1, 1}), g_coefficient(0, 1, 2));
    EXPECT_EQ(e.coefficient(2, {1, 1}), g_coefficient(1, 1, 2));
}

TEST(ApplyPolyharmonic, RejectsNonPositiveOrder) { EXPECT_THROW(apply_polyharmonic(extremal_base(1), 0), domain_error); }

TEST(Differentiate, Basics) {
    EXPECT_TRUE(differentiate(radial_constant(5)).is_zero());
    EXPECT_EQ(differentiate(r_squared()), radial_term(2, 1, {0, 0}));
    EXPECT_EQ(differentiate(radial_term(1, 0, {0, 1})), radial_term(-1, 1, {0, 3}));
}

TEST(NablaM, EvenOrderIsIteratedLaplacian) {
    const RadialExpr u = extremal_base(2);
    EXPECT_EQ(nabla_m(u, 2), apply_laplacian(u));
    EXPECT_EQ(nabla_m(u, 4), apply_laplacian(apply_laplacian(u)));
    EXPECT_EQ(nabla_m(u, 4), apply_polyharmonic(u, 2, false));
}

TEST(NablaM, FirstOrderOfFirstExtremal) {
    EXPECT_EQ(nabla_m(extremal_base(1), 1), radial_term(-AlphaPoly::affine(1, -1), 1, {1, 1}));
}

TEST(NablaM, ThirdOrderAgainstFiniteDifferences) {
    const double alpha = 8.0, h = 1e-5;
    const RealRadialExpr lap = specialize(apply_laplacian(extremal_base(3)), alpha);
    const RealRadialExpr n3 = specialize(nabla_m(extremal_base(3), 3), alpha);
    for (double r : {0.5, 1.0, 2.0}) {
        const double fd = (lap.evaluate(alpha, r + h) - lap.evaluate(alpha, r - h)) / (2.0 * h);
        EXPECT_NEAR(n3.evaluate(alpha, r), fd, 1e-8 * std::abs(fd)) << "r=" << r;
    }
}

TEST(Evaluate, KnownValues) {
    EXPECT_EQ(evaluate(RadialExpr{}, 3.0, 2.0), 0.0);
    EXPECT_DOUBLE_EQ(evaluate(radial_term(1, 0, {0, 2}), 0.0, 1.0), 0.5);
    const RadialExpr e = radial_term(p_constant(1), 0, {1, 3});
    EXPECT_DOUBLE_EQ(evaluate(e, 3.0, 1.0), 1.0);
    EXPECT_EQ(evaluate_exact(e, Rational(3), Rational(1)), std::optional<Rational>(Rational(1)));
    EXPECT_FALSE(evaluate_exact(e, Rational(4), Rational(1)).has_value());
    EXPECT_THROW(evaluate(e, 3.0, 0.0), domain_error);
}

TEST(ExponentAffine, MultiplierRestricted) { EXPECT_THROW(ExponentAffine(2, 0), domain_error); }

TEST(Canonical, MergesLikeTermsAndIsIdempotent) {
    RadialExpr e({}, {{AlphaPoly(1), 2, {1, 0}}, {AlphaPoly(2), 0, {1, 0}}, {AlphaPoly(-1), 2, {1, 0}}});
    EXPECT_EQ(e.size(), 1u);
    RadialExpr f = e;
    f.canonicalize();
    EXPECT_EQ(f, e);
    const RadialExpr g({}, {{AlphaPoly(1), 4, {0, 2}}, {AlphaPoly(1), 0, {0, 2}}, {AlphaPoly(1), 2, {0, 0}}});
    for (std::size_t k = 1; k < g.size(); ++k)
        EXPECT_LT(std::tie(g.terms()[k - 1].sigma, g.terms()[k - 1].r_power), std::tie(g.terms()[k].sigma, g.terms()[k].r_power));
}

TEST(Json, StableShapeAndRoundTrip) {
    const RadialExpr e = apply_polyharmonic(extremal_base(2), 1);
    const auto j = to_json(e);
    EXPECT_EQ(j.dump(),
              R"([{"coeff":["-3","-2","1"],"r_power":0,"sigma":{"a":1,"b":1}},)"
              R"({"coeff":["-6","2"],"r_power":2,"sigma":{"a":1,"b":1}}])");
    EXPECT_EQ(radial_expr_from_json(j), e);
}

namespace {

RadialExpr random_expr(std::mt19937& rng) {
    std::uniform_int_distribution<int> c(-5, 5), rho(0, 3), shift(-3, 6), mult(0, 1), count(1, 3);
    std::vector<RadialTerm> terms;
    for (int k = count(rng); k > 0; --k) {
        const AlphaPoly coeff = AlphaPoly::affine(c(rng), c(rng)) + AlphaPoly(Rational(c(rng), 7));
        terms.push_back({coeff, 2 * rho(rng), {mult(rng), shift(rng)}});
    }
    return RadialExpr({}, std::move(terms));
}

}  // namespace

TEST(Properties, LaplacianIsLinear) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    for (int t = 0; t < 40; ++t) {
        const RadialExpr e1 = random_expr(rng), e2 = random_expr(rng);
        const AlphaPoly s(Rational(num(rng), den(rng)));
        EXPECT_EQ(apply_laplacian(s * e1 + e2), s * apply_laplacian(e1) + apply_laplacian(e2));
    }
}

TEST(Properties, LaplacianMatchesSecondDifferences) {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> alpha_d(1.0, 9.0), r_d(0.3, 3.0);
    // Central differences at h and h/2 combined by Richardson: truncation O(h^4), roundoff ~ 1e-16 / h^2.
    const double h = 2e-3;
    for (int t = 0; t < 40; ++t) {
        const RadialExpr e = random_expr(rng);
        const double al = alpha_d(rng), r = r_d(rng);
        const RealRadialExpr f = specialize(e, al);
        const double lap = specialize(apply_laplacian(e), al).evaluate(al, r);
        auto central = [&](double s) {
            const double f0 = f.evaluate(al, r), fp = f.evaluate(al, r + s), fm = f.evaluate(al, r - s);
            return (fp - 2.0 * f0 + fm) / (s * s) + al / r * (fp - fm) / (2.0 * s);
        };
        const double fd = (4.0 * central(h / 2.0) - central(h)) / 3.0;
        EXPECT_NEAR(fd, lap, 1e-6 * std::abs(lap)) << "alpha=" << al << " r=" << r;
    }
}
