#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "eqfd/stencil.hpp"

namespace {

// Oracle: solve the 3x3 moment system sum_k w_k (x_k)^p / p! = delta_{p,order}.
std::array<double, 3> vandermonde_weights(int order, double hl, double hr) {
    Eigen::Matrix3d m;
    const std::array<double, 3> x{-hl, 0.0, hr};
    for (int p = 0; p < 3; ++p) {
        for (int k = 0; k < 3; ++k) m(p, k) = std::pow(x[k], p) / (p == 2 ? 2.0 : 1.0);
    }
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    rhs(order) = 1.0;
    const Eigen::Vector3d w = m.fullPivLu().solve(rhs);
    return {w(0), w(1), w(2)};
}

// max over f in {1, x, x^2} of |stencil(f) - f^(order)(0)|, relative to the largest term.
double moment_defect(const eqfd::StencilCoeffs& s, double hl, double hr) {
    double worst = 0.0;
    for (int p = 0; p <= 2; ++p) {
        const double exact = p == s.order ? (p == 2 ? 2.0 : 1.0) : 0.0;
        const double ta = s.a * std::pow(-hl, p), tb = s.b * (p == 0 ? 1.0 : 0.0), tc = s.c * std::pow(hr, p);
        const double scale = std::max({std::abs(exact), std::abs(ta), std::abs(tb), std::abs(tc)});
        worst = std::max(worst, std::abs(ta + tb + tc - exact) / scale);
    }
    return worst;
}

TEST(Stencil, UniformLimitIsClassical) {
    for (double h : {1e-3, 0.1, 0.5, 1.0, 3.0, 1e3}) {
        const auto d1 = eqfd::first_derivative_coeffs(h, h);
        EXPECT_EQ(d1.a, -1.0 / (2.0 * h));
        EXPECT_EQ(d1.b, 0.0);
        EXPECT_EQ(d1.c, 1.0 / (2.0 * h));
        const auto d2 = eqfd::second_derivative_coeffs(h, h);
        EXPECT_EQ(d2.a, 1.0 / (h * h));
        EXPECT_EQ(d2.b, -2.0 / (h * h));
        EXPECT_EQ(d2.c, 1.0 / (h * h));
    }
}

TEST(Stencil, SpecificValues) {
    const auto d1 = eqfd::first_derivative_coeffs(1.0, 2.0);
    EXPECT_NEAR(d1.a, -2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d1.b, 0.5, 1e-15);
    EXPECT_NEAR(d1.c, 1.0 / 6.0, 1e-15);
    const auto d2 = eqfd::second_derivative_coeffs(1.0, 2.0);
    EXPECT_NEAR(d2.a, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d2.b, -1.0, 1e-15);
    EXPECT_NEAR(d2.c, 1.0 / 3.0, 1e-15);
}

TEST(Stencil, MatchesVandermondeOracle) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> logh(std::log(1e-2), std::log(1e2));
    for (int t = 0; t < 500; ++t) {
        const double hl = std::exp(logh(rng));
        const double hr = std::exp(logh(rng));
        for (int order : {1, 2}) {
            const auto s = eqfd::derivative_coeffs(order, hl, hr);
            const auto w = vandermonde_weights(order, hl, hr);
            const double scale = std::abs(w[0]) + std::abs(w[1]) + std::abs(w[2]);
            EXPECT_NEAR(s.a, w[0], 1e-11 * scale);
            EXPECT_NEAR(s.b, w[1], 1e-11 * scale);
            EXPECT_NEAR(s.c, w[2], 1e-11 * scale);
        }
    }
}

TEST(Stencil, MomentConditionsOverWideRange) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> logh(std::log(1e-3), std::log(1e3));
    for (int t = 0; t < 1000; ++t) {
        const double hl = std::exp(logh(rng));
        const double hr = std::exp(logh(rng));
        EXPECT_LE(moment_defect(eqfd::first_derivative_coeffs(hl, hr), hl, hr), 1e-12);
        EXPECT_LE(moment_defect(eqfd::second_derivative_coeffs(hl, hr), hl, hr), 1e-12);
    }
}

TEST(Stencil, ExactOnQuadratics) {
    const double hl = 0.3, hr = 0.7, x0 = 1.1;
    auto f = [](double x) { return 2.0 * x * x - 3.0 * x + 0.5; };
    const auto d1 = eqfd::first_derivative_coeffs(hl, hr);
    const auto d2 = eqfd::second_derivative_coeffs(hl, hr);
    EXPECT_NEAR(d1.a * f(x0 - hl) + d1.b * f(x0) + d1.c * f(x0 + hr), 4.0 * x0 - 3.0, 1e-12);
    EXPECT_NEAR(d2.a * f(x0 - hl) + d2.b * f(x0) + d2.c * f(x0 + hr), 4.0, 1e-12);
}

TEST(Stencil, ConvergenceOrderOnSmoothMesh) {
    // Smoothly graded mesh: both derivatives converge at second order.
    auto err = [](std::size_t n, int order) {
        std::vector<double> x(n + 1), f(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n);
            x[i] = t + 0.2 * std::sin(3.14159 * t) / 3.14159;
            f[i] = std::sin(2.0 * x[i]);
        }
        const auto mesh = eqfd::Mesh1D::from_nodes(x);
        const auto d = eqfd::differentiate(mesh, f, order);
        double e = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double exact = order == 1 ? 2.0 * std::cos(2.0 * x[i]) : -4.0 * std::sin(2.0 * x[i]);
            e = std::max(e, std::abs(d[i - 1] - exact));
        }
        return e;
    };
    for (int order : {1, 2}) {
        const double rate = std::log2(err(64, order) / err(128, order));
        EXPECT_GT(rate, 1.8) << "order " << order;
    }
}

TEST(Stencil, ErrorPaths) {
    EXPECT_THROW(eqfd::first_derivative_coeffs(0.0, 1.0), eqfd::InputError);
    EXPECT_THROW(eqfd::second_derivative_coeffs(1.0, -1.0), eqfd::InputError);
    EXPECT_THROW(eqfd::second_derivative_coeffs(NAN, 1.0), eqfd::InputError);
    EXPECT_THROW(eqfd::derivative_coeffs(3, 1.0, 1.0), eqfd::InputError);
    const auto mesh = eqfd::Mesh1D::uniform({0.0, 1.0}, 4);
    const std::vector<double> f(3, 0.0);
    EXPECT_THROW(eqfd::differentiate(mesh, f, 1), eqfd::InputError);
}

}  // namespace
