#include "forchheimer/forchheimer_law.hpp"

#include "support/law_properties.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace forch {
namespace {

const ForchheimerPolynomial kTwoTerm = ForchheimerPolynomial::two_term(1.0, 1.0);
const ForchheimerPolynomial kThreeTerm({1.0, 1.0, 1.0}, {1.0, 2.0});
const ForchheimerPolynomial kFractional({1.0, 0.5, 2.0}, {0.5, 3.0});

// Closed forms for g(s) = 1 + s.
double two_term_K(double xi) { return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * xi)); }

// Independent of the library's Newton path.
double bisect_s(const ForchheimerPolynomial& law, double xi)
{
    double lo = 0.0;
    double hi = xi / law.coefficients().front();
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid * law.g(mid) > xi) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

TEST(ForchheimerLaw, RejectsInvalidCoefficients)
{
    EXPECT_THROW(ForchheimerPolynomial({0.0, 1.0}, {1.0}), DomainError);
    EXPECT_THROW(ForchheimerPolynomial({1.0, 0.0}, {1.0}), DomainError);
    EXPECT_THROW(ForchheimerPolynomial({1.0, -1.0, 1.0}, {1.0, 2.0}), DomainError);
    EXPECT_THROW(ForchheimerPolynomial({1.0, 1.0, 1.0}, {2.0, 1.0}), DomainError);
    EXPECT_THROW(ForchheimerPolynomial({1.0, 1.0}, {0.0}), DomainError);
    EXPECT_THROW(ForchheimerPolynomial({1.0, 1.0}, {}), DomainError);
}

TEST(ForchheimerLaw, DegeneracyExponent)
{
    EXPECT_DOUBLE_EQ(kTwoTerm.degeneracy(), 0.5);
    EXPECT_DOUBLE_EQ(kTwoTerm.beta(), 1.5);
    EXPECT_DOUBLE_EQ(kThreeTerm.degeneracy(), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(kFractional.degeneracy(), 0.75);
    EXPECT_DOUBLE_EQ(ForchheimerPolynomial::darcy(2.0).degeneracy(), 0.0);
}

TEST(ForchheimerLaw, EvalG)
{
    EXPECT_DOUBLE_EQ(kTwoTerm.g(0.0), 1.0);
    EXPECT_DOUBLE_EQ(kTwoTerm.g(2.0), 3.0);
    const ForchheimerPolynomial law({1.0, 2.0, 1.0}, {0.5, 2.0});
    EXPECT_DOUBLE_EQ(law.g(4.0), 21.0);
    EXPECT_THROW((void)kTwoTerm.g(-1.0), DomainError);
}

TEST(ForchheimerLaw, SolveS)
{
    EXPECT_EQ(kTwoTerm.solve_s(0.0), 0.0);
    EXPECT_EQ(kFractional.solve_s(0.0), 0.0);
    EXPECT_NEAR(kTwoTerm.solve_s(2.0), 1.0, 1e-15);
    EXPECT_NEAR(kThreeTerm.solve_s(3.0), 1.0, 1e-14);
    EXPECT_THROW((void)kTwoTerm.solve_s(-1e-3), DomainError);
}

TEST(ForchheimerLaw, SolveSMatchesBisectionAndResidual)
{
    std::mt19937_64 rng(7);
    for (const auto& law : testing::property_laws()) {
        for (int i = 0; i < 500; ++i) {
            const double xi = testing::log_uniform(rng, 1e-10, 1e10);
            const double s = law.solve_s(xi);
            EXPECT_LE(std::abs(s * law.g(s) - xi), 1e-12 * xi);
            EXPECT_NEAR(s, bisect_s(law, xi), 1e-12 * s + 1e-300);
        }
    }
}

TEST(ForchheimerLaw, MobilityValues)
{
    EXPECT_DOUBLE_EQ(kTwoTerm.mobility(0.0), 1.0);
    EXPECT_DOUBLE_EQ(ForchheimerPolynomial({4.0, 1.0}, {1.0}).mobility(0.0), 0.25);
    EXPECT_NEAR(kTwoTerm.mobility(2.0), 0.5, 1e-15);
    EXPECT_NEAR(kTwoTerm.mobility(6.0), 1.0 / 3.0, 1e-15);
    for (double xi : {1e-6, 0.3, 2.0, 50.0, 1e5}) {
        EXPECT_NEAR(kThreeTerm.mobility(xi), 1.0 / kThreeTerm.g(bisect_s(kThreeTerm, xi)), 1e-13);
        EXPECT_NEAR(kTwoTerm.mobility(xi), two_term_K(xi), 1e-15);
    }
}

TEST(ForchheimerLaw, MobilityDerivative)
{
    EXPECT_EQ(ForchheimerPolynomial::darcy(3.0).mobility_derivative(1.7), 0.0);
    EXPECT_NEAR(kTwoTerm.mobility_derivative(2.0), -1.0 / 12.0, 1e-15);

    const double h = 1e-6;
    const double fd = (two_term_K(2.0 + h) - two_term_K(2.0 - h)) / (2.0 * h);
    EXPECT_NEAR(kTwoTerm.mobility_derivative(2.0), fd, 1e-7);

    for (const auto& law : testing::property_laws()) {
        const double central = (law.mobility(1.0 + h) - law.mobility(1.0 - h)) / (2.0 * h);
        EXPECT_NEAR(law.mobility_derivative(1.0), central, 1e-7);
    }
    EXPECT_THROW((void)kTwoTerm.mobility_derivative(0.0), DomainError);
}

TEST(ForchheimerLaw, EnergyDensity)
{
    EXPECT_EQ(kTwoTerm.energy_density(0.0), 0.0);
    EXPECT_NEAR(ForchheimerPolynomial::darcy(2.0).energy_density(2.0), 2.0, 1e-14);

    // Trapezoid rule in the original variable t on a fine grid.
    auto trapezoid = [](const ForchheimerPolynomial& law, double xi) {
        const int m = 1 << 20;
        const double top = xi * xi;
        double sum = 0.5 * (law.mobility(0.0) + law.mobility(xi));
        for (int i = 1; i < m; ++i) {
            sum += law.mobility(std::sqrt(top * i / m));
        }
        return sum * top / m;
    };
    const double h1 = kTwoTerm.energy_density(1.0);
    EXPECT_NEAR(h1, trapezoid(kTwoTerm, 1.0), 1e-8);
    EXPECT_GE(h1, kTwoTerm.mobility(1.0));
    EXPECT_LE(h1, 2.0 * kTwoTerm.mobility(1.0));
    EXPECT_NEAR(kFractional.energy_density(2.5), trapezoid(kFractional, 2.5), 1e-7);
}

TEST(ForchheimerLaw, FluxGradientPair)
{
    EXPECT_EQ(kTwoTerm.flux_of_gradient(Vec2::Zero()), Vec2::Zero());
    EXPECT_EQ(kTwoTerm.gradient_of_flux(Vec2::Zero()), Vec2::Zero());
    const Vec2 u = kTwoTerm.flux_of_gradient(Vec2(2.0, 0.0));
    EXPECT_NEAR(u.x(), -1.0, 1e-15);
    EXPECT_EQ(u.y(), 0.0);
    const Vec2 y = kTwoTerm.gradient_of_flux(Vec2(-1.0, 0.0));
    EXPECT_NEAR(y.x(), 2.0, 1e-15);

    std::mt19937_64 rng(11);
    for (const auto& law : testing::property_laws()) {
        for (int i = 0; i < 1000; ++i) {
            const Vec2 v = testing::random_vector(rng, 1e-6, 1e3);
            const Vec2 back = law.flux_of_gradient(law.gradient_of_flux(v));
            EXPECT_LE((back - v).norm(), 1e-10 * std::max(1.0, v.norm()));
        }
    }
}

TEST(ForchheimerLaw, StructuralPropertiesHoldForAllLaws)
{
    for (const auto& law : testing::property_laws()) {
        for (const auto& outcome : testing::check_all_properties(law, 2000, 2024)) {
            EXPECT_EQ(outcome.violations, 0) << law.to_string() << ": " << outcome.name;
        }
    }
}

TEST(ForchheimerLaw, ParseLaw)
{
    const auto law = parse_law("1,1", "1");
    EXPECT_TRUE(law.is_two_term());
    EXPECT_TRUE(parse_law("2", "").is_darcy());
    EXPECT_THROW((void)parse_law("1,x", "1"), std::invalid_argument);
    EXPECT_THROW((void)parse_law("1,1", "1,2"), DomainError);
}

} // namespace
} // namespace forch
