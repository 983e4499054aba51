#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "eqfd/quadrature.hpp"

namespace {

TEST(Quadrature, ExactOnLowDegreePolynomials) {
    // Kronrod-15 integrates degree <= 22 exactly in one panel.
    const auto r = eqfd::integrate([](double x) { return 3 * x * x * x * x - x + 2; }, -1.0, 2.0);
    EXPECT_NEAR(r.value, 3.0 * (32.0 + 1.0) / 5.0 - (4.0 - 1.0) / 2.0 + 6.0, 1e-13);
    EXPECT_EQ(r.evaluations, 15u);
}

TEST(Quadrature, SmoothTranscendentalIntegrands) {
    EXPECT_NEAR(eqfd::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-13);
    EXPECT_NEAR(eqfd::integrate([](double x) { return 1.0 / x; }, 1.0, std::exp(1.0)).value, 1.0, 1e-13);
    EXPECT_NEAR(eqfd::integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value,
                std::sqrt(std::numbers::pi), 1e-12);
}

TEST(Quadrature, ReversedBoundsFlipSign) {
    const auto f = [](double x) { return std::cos(x); };
    EXPECT_DOUBLE_EQ(eqfd::integrate(f, 1.0, 0.0).value, -eqfd::integrate(f, 0.0, 1.0).value);
    EXPECT_EQ(eqfd::integrate(f, 0.5, 0.5).value, 0.0);
}

TEST(Quadrature, SubdividesNearSteepFeatures) {
    // Narrow peak of width 1e-3 at x = 0.3.
    const auto f = [](double x) { return 1e-3 / ((x - 0.3) * (x - 0.3) + 1e-6); };
    const double exact = std::atan(0.7 / 1e-3) + std::atan(0.3 / 1e-3);
    const auto r = eqfd::integrate(f, 0.0, 1.0);
    EXPECT_NEAR(r.value, exact, 1e-10 * exact);
    EXPECT_GT(r.evaluations, 15u);
}

TEST(Quadrature, PiecewiseHandlesKinks) {
    const std::vector<double> breaks{0.25};
    const auto f = [](double x) { return std::abs(x - 0.25); };
    const auto r = eqfd::integrate_piecewise(f, 0.0, 1.0, breaks);
    EXPECT_NEAR(r.value, 0.5 * 0.25 * 0.25 + 0.5 * 0.75 * 0.75, 1e-15);
}

TEST(Quadrature, BudgetExhaustionReportsEstimate) {
    eqfd::QuadratureOptions opts;
    opts.max_subintervals = 8;
    try {
        eqfd::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opts);
        FAIL() << "expected NumericalError";
    } catch (const eqfd::NumericalError& e) {
        EXPECT_GT(e.estimate(), 1.0);
        EXPECT_LT(e.estimate(), 2.0);
    }
}

}  // namespace
