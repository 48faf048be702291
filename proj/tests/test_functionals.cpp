#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "polyrad/functionals.hpp"

using namespace polyrad;

namespace {

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

double extremal_integrand(double a, double r) { return std::pow(r, a) * std::pow(1.0 + r * r, -(a + 1.0)); }

const std::vector<std::pair<int, double>> pairs = {{1, 3.0}, {1, 5.0}, {2, 4.0}, {2, 6.0}, {3, 8.0}};

}  // namespace

TEST(QuadratureSpec, DefaultsAndValidation) {
    QuadratureSpec s;
    EXPECT_EQ(s.rel_tol, 1e-10);
    EXPECT_EQ(s.abs_tol, 1e-14);
    EXPECT_EQ(s.max_subdivisions, 2000);
    EXPECT_EQ(s.split_point, 1.0);
    s.rel_tol = -1.0;
    EXPECT_ANY_THROW(s.validate());
    QuadratureSpec t;
    t.max_subdivisions = 0;
    EXPECT_ANY_THROW(t.validate());
}

TEST(ImproperIntegral, ClosedForms) {
    const auto one = improper_integral([](double r) { return extremal_integrand(1.0, r); });
    EXPECT_NEAR(one.value, 0.5, 1e-12);
    EXPECT_GE(one.err_estimate, 0.0);
    const auto three = improper_integral([](double r) { return extremal_integrand(3.0, r); });
    EXPECT_LE(rel(three.value, 1.0 / 12.0), 1e-12);
}

TEST(ImproperIntegral, MatchesGammaClosedForm) {
    for (double a : {1.5, 3.0, 4.0, 7.25}) {
        const auto q = improper_integral([a](double r) { return extremal_integrand(a, r); });
        const double g = gamma_function(0.5 * (a + 1.0));
        EXPECT_LE(rel(q.value, g * g / (2.0 * gamma_function(a + 1.0))), 1e-10) << "alpha=" << a;
    }
}

TEST(ImproperIntegral, DivergentTailFails) {
    EXPECT_THROW(improper_integral([](double r) { return 1.0 / std::sqrt(1.0 + r * r); }), convergence_error);
}

TEST(ImproperIntegral, SubdivisionBudget) {
    QuadratureSpec s;
    s.max_subdivisions = 1;
    s.rel_tol = 1e-15;
    s.abs_tol = 1e-300;
    EXPECT_THROW(improper_integral([](double r) { return std::sin(50.0 * r) / (1.0 + r * r); }, s), convergence_error);
}

TEST(WeightedNorm, FirstExtremalLFour) {
    const auto n = weighted_lebesgue_norm(bliss_profile(1, 3.0, 1.0), 4.0, 3.0);
    EXPECT_LE(rel(n.value, std::pow(16.0 / 3.0, 0.25)), 1e-12);
    EXPECT_LE(rel(n.value, 1.5196713713031850947), 1e-12);
}

TEST(WeightedNorm, ZeroProfile) { EXPECT_EQ(weighted_lebesgue_norm(zero_profile(3.0), 2.0, 3.0).value, 0.0); }

TEST(WeightedNorm, ArgumentChecks) {
    const auto w = bliss_profile(1, 3.0, 1.0);
    EXPECT_THROW(weighted_lebesgue_norm(w, 0.5, 3.0), domain_error);
    EXPECT_THROW(weighted_lebesgue_norm(w, 2.0, -1.0), domain_error);
}

TEST(WeightedNorm, CriticalNormIsDilationInvariant) {
    for (auto [m, a] : pairs) {
        const double q = critical_exponent(m, a);
        const double base = weighted_lebesgue_norm(bliss_profile(m, a, 1.0), q, a).value;
        for (double eps : {0.5, 2.0})
            EXPECT_LE(rel(weighted_lebesgue_norm(bliss_profile(m, a, eps), q, a).value, base), 1e-8)
                << "m=" << m << " eps=" << eps;
    }
}

TEST(GradientSeminorm, FirstExtremal) {
    EXPECT_LE(rel(gradient_seminorm(bliss_profile(1, 3.0, 1.0), 1, 3.0).value, std::sqrt(16.0 / 3.0)), 1e-12);
    EXPECT_EQ(gradient_seminorm(zero_profile(3.0), 1, 3.0).value, 0.0);
}

TEST(GradientSeminorm, SecondOrderMatchesBestConstant) {
    const auto w = bliss_profile(2, 4.0, 1.0);
    const double lhs = gradient_seminorm(w, 2, 4.0).value;
    const double rhs = std::sqrt(best_constant(2, 4.0).S) * weighted_lebesgue_norm(w, critical_exponent(2, 4.0), 4.0).value;
    EXPECT_LE(rel(lhs, rhs), 1e-6);
}

TEST(GradientSeminorm, BlackBoxNeedsChain) {
    const auto bb = RadialProfile::black_box([](double r) { return 1.0 / (1.0 + r * r); }, 2);
    EXPECT_THROW(gradient_seminorm(bb, 1, 3.0), unsupported_profile_error);
    const auto with = bb.with_nabla(1, [](double r) { return -2.0 * r / ((1.0 + r * r) * (1.0 + r * r)); });
    // int 4 r^2 r^3 / (1+r^2)^4 dr = 2/3
    EXPECT_LE(rel(gradient_seminorm(with, 1, 3.0).value, std::sqrt(2.0 / 3.0)), 1e-10);
}

TEST(Rayleigh, FirstExtremalIsBestConstant) {
    EXPECT_LE(rel(rayleigh_quotient(bliss_profile(1, 3.0, 1.0), 1, 3.0), 4.0 / std::sqrt(3.0)), 1e-12);
}

TEST(Rayleigh, AttainmentForTestPairs) {
    for (auto [m, a] : pairs)
        EXPECT_LE(rel(rayleigh_quotient(bliss_profile(m, a, 1.0), m, a), best_constant(m, a).S), 1e-6) << "m=" << m;
}

TEST(Rayleigh, DilationInvariance) {
    for (auto [m, a] : pairs) {
        std::vector<double> q;
        for (double eps : {0.25, 0.5, 1.0, 2.0, 4.0}) q.push_back(rayleigh_quotient(bliss_profile(m, a, eps), m, a));
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) EXPECT_LE(rel(q[i], q[j]), 1e-8) << "m=" << m << " alpha=" << a;
    }
}

TEST(Rayleigh, ZeroProfileIsRejected) { EXPECT_THROW(rayleigh_quotient(zero_profile(3.0), 1, 3.0), domain_error); }

TEST(Rayleigh, ExplicitProbe) {
    // w_1 + 0.1 (1 + r^2)^(-(alpha - 2m + 3)/2), m = 2, alpha = 4
    const auto probe = bliss_profile(2, 4.0, 1.0) +
                       RadialProfile::symbolic(specialize(radial_term(1, 0, {1, -1}), 4.0), 0.1).with_decay(3.0);
    EXPECT_GE(rayleigh_quotient(probe, 2, 4.0), best_constant(2, 4.0).S - 1e-6);
}

TEST(Rayleigh, MinimalityProbes) {
    for (auto [m, a] : pairs) {
        const double S = best_constant(m, a).S;
        for (int d = 0; d < 10; ++d)
            for (double delta : {0.05, 0.1})
                EXPECT_GE(rayleigh_quotient(perturbed_profile(m, a, d, delta), m, a), S - 1e-6)
                    << "m=" << m << " alpha=" << a << " direction " << d << " delta " << delta;
    }
}

TEST(Rayleigh, DilatedProbeKeepsQuotient) {
    const auto p = perturbed_profile(2, 4.0, 3, 0.1);
    const double q1 = rayleigh_quotient(p, 2, 4.0);
    for (double eps : {0.5, 2.0}) EXPECT_LE(rel(rayleigh_quotient(dilated(p, 2, 4.0, eps), 2, 4.0), q1), 1e-8);
}

TEST(Perturbations, FixedAndDecaying) {
    const auto dirs = perturbation_directions(2);
    ASSERT_EQ(dirs.size(), 10u);
    std::set<std::string> names;
    for (const auto& d : dirs) {
        names.insert(d.name);
        for (const auto& t : d.expr.terms()) {
            EXPECT_EQ(t.sigma.alpha_multiplier, 1);
            // decay rate sigma - rho is at least that of w_1
            EXPECT_GE(t.sigma.constant_shift - t.r_power, 1 - 2LL * 2);
        }
    }
    EXPECT_EQ(names.size(), 10u);
    EXPECT_THROW(perturbed_profile(2, 4.0, 10, 0.1), std::invalid_argument);
}

TEST(BlissProfile, OriginValues) {
    EXPECT_LE(rel(bliss_profile(1, 3.0, 1.0)(0.0), std::sqrt(8.0)), 1e-15);
    const double v = bliss_profile(2, 4.0, 2.0)(0.0);
    EXPECT_LE(rel(v, std::pow(105.0, 0.125) / std::sqrt(2.0)), 1e-14);
    EXPECT_LE(rel(v, 1.2651256603483464764), 1e-14);
    EXPECT_LE(rel(bliss_origin_value(2, 4.0, 2.0), v), 1e-14);
}

TEST(BlissProfile, ScalingLaw) {
    const auto w1 = bliss_profile(2, 6.0, 1.0);
    const double s = dilation_exponent(2, 6.0);
    for (double eps : {0.5, 3.0}) {
        const auto we = bliss_profile(2, 6.0, eps);
        const auto wd = dilated(w1, 2, 6.0, eps);
        for (double r : {0.1, 1.0, 7.0}) {
            EXPECT_LE(rel(we(r), std::pow(eps, -s) * w1(r / eps)), 1e-14);
            EXPECT_LE(rel(wd(r), we(r)), 1e-14);
        }
    }
}

TEST(BlissProfile, EvenExtensionAndOddDerivatives) {
    const RealRadialExpr e = specialize(extremal_base(2), 4.0);
    for (double r : {0.3, 1.0, 2.5}) EXPECT_EQ(e.evaluate(4.0, -r), e.evaluate(4.0, r));
    RealRadialExpr d = e;
    for (int k = 1; k <= 5; ++k) {
        d = differentiate(d);
        if (k % 2 == 1) {
            EXPECT_EQ(d.evaluate(4.0, 0.0), 0.0) << "order " << k;
        }
    }
    const BlissChain chain(2, 4.0, 1.5);
    for (int j = 0; j <= 2; ++j) EXPECT_EQ(chain.derivative(j, 0.0), 0.0);
}

TEST(BlissProfile, SobolevGate) {
    EXPECT_THROW(bliss_profile(2, 3.0, 1.0), domain_error);
    EXPECT_THROW(bliss_profile(1, 3.0, 0.0), domain_error);
}

TEST(BlissChain, MatchesSymbolicPolyharmonic) {
    const BlissChain chain(2, 4.0, 0.7);
    const auto w = bliss_profile(2, 4.0, 0.7);
    for (int j = 0; j <= 2; ++j) {
        const auto f = w.polyharmonic_fn(j);
        for (double r : {0.05, 0.7, 3.0}) EXPECT_LE(rel(chain.value(j, r), f(r)), 1e-13);
    }
    // (-Delta)^m w = w^{2*-1}
    const double c = critical_exponent(2, 4.0);
    for (double r : {0.05, 0.7, 3.0}) EXPECT_LE(rel(chain.value(2, r), std::pow(w(r), c - 1.0)), 1e-12);
}

TEST(RadialBound, FirstExtremal) {
    const auto rep = radial_bound_check(bliss_profile(1, 3.0, 1.0), 1, 3.0);
    EXPECT_TRUE(rep.finite);
    EXPECT_TRUE(rep.interior_max);
    ASSERT_TRUE(rep.normalized_sup.has_value());
    EXPECT_GT(*rep.normalized_sup, 0.0);
    EXPECT_LT(rep.tail_ratio, 1e-3);
}

TEST(RadialBound, ZeroProfile) {
    const auto rep = radial_bound_check(zero_profile(3.0), 1, 3.0);
    EXPECT_EQ(rep.weighted_sup, 0.0);
    EXPECT_TRUE(rep.finite);
}

TEST(RadialBound, SaturatingProfileIsFlat) {
    // m = 1, alpha = 5: (1 + r^2)^(-1) decays exactly like r^{-(alpha-2m+1)/2}.
    const auto f = RadialProfile::symbolic(specialize(radial_term(1, 0, {0, 2}), 5.0));
    const auto rep = radial_bound_check(f, 1, 5.0);
    EXPECT_GT(rep.tail_ratio, 0.999);
    EXPECT_NEAR(rep.weighted_sup, 1.0, 1e-6);
}
