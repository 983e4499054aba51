#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "eqfd/weights.hpp"
#include "eqfd/weights_json.hpp"

using eqfd::WeightSpec;

namespace {

TEST(Weights, EvaluateExamples) {
    EXPECT_EQ(eqfd::evaluate(WeightSpec::constant(3.0), 0.7), 3.0);
    const auto well = WeightSpec::gaussian_well(0.9, 0.0, 50.0);
    EXPECT_NEAR(eqfd::evaluate(well, 0.0), 0.1, 1e-15);
    EXPECT_NEAR(eqfd::evaluate(well, 25.0), 1.0 - 0.9 * std::exp(-0.25), 1e-15);
    EXPECT_NEAR(eqfd::evaluate(well, 25.0), 0.29908, 1e-5);
}

TEST(Weights, TableInterpolatesLinearlyWithoutExtrapolation) {
    const auto t = WeightSpec::table({0.0, 1.0, 3.0}, {1.0, 2.0, 4.0});
    EXPECT_DOUBLE_EQ(t(0.5), 1.5);
    EXPECT_DOUBLE_EQ(t(2.0), 3.0);
    EXPECT_DOUBLE_EQ(t(3.0), 4.0);
    EXPECT_THROW(t(3.0001), eqfd::DomainError);
    EXPECT_THROW(t(-1.0), eqfd::DomainError);
    EXPECT_EQ(t.breakpoints({0.0, 3.0}), std::vector<double>{1.0});
}

TEST(Weights, EvaluateRejectsNonFiniteInput) {
    EXPECT_THROW(WeightSpec::constant(1.0)(std::numeric_limits<double>::quiet_NaN()), eqfd::InputError);
    EXPECT_THROW(WeightSpec::gaussian_well(0.5, 0, 1)(std::numeric_limits<double>::infinity()), eqfd::InputError);
}

TEST(Weights, ConstructionRejectsOutOfRangeParameters) {
    EXPECT_THROW(WeightSpec::constant(0.0), eqfd::ValidationError);
    EXPECT_THROW(WeightSpec::constant(-2.0), eqfd::ValidationError);
    EXPECT_THROW(WeightSpec::gaussian_well(1.0, 0, 1), eqfd::ValidationError);
    EXPECT_THROW(WeightSpec::gaussian_well(-0.1, 0, 1), eqfd::ValidationError);
    EXPECT_THROW(WeightSpec::gaussian_well(0.5, 0, 0), eqfd::ValidationError);
    EXPECT_THROW(WeightSpec::table({0.0, 0.0}, {1.0, 1.0}), eqfd::ValidationError);
    EXPECT_THROW(WeightSpec::table({0.0, 1.0}, {1.0}), eqfd::ValidationError);
    EXPECT_THROW(WeightSpec::table({0.0}, {1.0}), eqfd::ValidationError);
}

TEST(Weights, ValidateConstant) {
    const auto r = eqfd::validate(WeightSpec::constant(1.0), {0.0, 1.0}, 100);
    EXPECT_EQ(r.min_value, 1.0);
    EXPECT_EQ(r.max_value, 1.0);
    EXPECT_TRUE(r.valid());
}

TEST(Weights, ValidateGaussianWellFindsExtrema) {
    const auto r = eqfd::validate(WeightSpec::gaussian_well(0.9, 0.0, 50.0), {-25.0, 25.0}, 100);
    EXPECT_NEAR(r.min_value, 0.1, 1e-15);
    EXPECT_EQ(r.argmin, 0.0);
    EXPECT_NEAR(r.max_value, 1.0 - 0.9 * std::exp(-0.25), 1e-15);
    EXPECT_EQ(std::abs(r.argmax), 25.0);
    EXPECT_TRUE(r.valid());
}

TEST(Weights, ValidateFlagsPositivityViolation) {
    const auto r = eqfd::validate(WeightSpec::table({0.0, 1.0}, {1.0, -1.0}), {0.0, 1.0}, 50);
    EXPECT_FALSE(r.positive);
    EXPECT_FALSE(r.valid());
    EXPECT_NE(r.message.find("positivity"), std::string::npos);
    EXPECT_THROW(eqfd::require_valid(WeightSpec::table({0.0, 1.0}, {1.0, -1.0}), {0.0, 1.0}), eqfd::ValidationError);
}

TEST(Weights, ValidateRejectsEmptyDomainAndTableOutsideHull) {
    EXPECT_THROW(eqfd::validate(WeightSpec::constant(1.0), {1.0, 1.0}, 10), eqfd::InputError);
    EXPECT_THROW(eqfd::validate(WeightSpec::constant(1.0), {0.0, 1.0}, 1), eqfd::InputError);
    const auto r = eqfd::validate(WeightSpec::table({0.0, 1.0}, {1.0, 1.0}), {0.0, 2.0}, 10);
    EXPECT_FALSE(r.valid());
}

TEST(Weights, BuiltInVariantsArePositiveAndBoundedEverywhere) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> depth(0.0, 0.999), center(-10, 10), width(0.01, 100), x(-50, 50);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = WeightSpec::gaussian_well(depth(rng), center(rng), width(rng));
        for (int k = 0; k < 200; ++k) {
            const double v = g(x(rng));
            ASSERT_GT(v, 0.0);
            ASSERT_TRUE(std::isfinite(v));
        }
    }
}

TEST(Weights, JsonRoundTripAndErrors) {
    const auto j = nlohmann::json::parse(R"({ "type": "gaussian_well", "depth": 0.9, "center": 0.0, "width": 50.0 })");
    const auto g = eqfd::weight_from_json(j);
    EXPECT_NEAR(g(0.0), 0.1, 1e-15);
    EXPECT_EQ(eqfd::weight_to_json(g), j);

    const auto t = WeightSpec::table({0.0, 2.0}, {1.0, 3.0});
    EXPECT_DOUBLE_EQ(eqfd::weight_from_json(eqfd::weight_to_json(t))(1.0), 2.0);

    EXPECT_THROW(eqfd::weight_from_json(nlohmann::json::parse(R"({"type": "spline"})")), eqfd::ValidationError);
    EXPECT_THROW(eqfd::weight_from_json(nlohmann::json::parse(R"({"type": "constant"})")), eqfd::ValidationError);
}

TEST(Weights, JointWeights) {
    const auto p = eqfd::Weight2D::product(WeightSpec::gaussian_well(0.5, 0, 1), WeightSpec::constant(2.0));
    EXPECT_TRUE(p.separable());
    EXPECT_DOUBLE_EQ(p(0.0, 7.0), 1.0);
    EXPECT_DOUBLE_EQ(p.along_x(3.0)(0.0), 1.0);
    EXPECT_DOUBLE_EQ(p.along_y(0.0)(3.0), 1.0);

    const auto r = eqfd::Weight2D::radial_well(0.9, 1.0, -1.0, 2.0);
    EXPECT_FALSE(r.separable());
    EXPECT_NEAR(r(1.0, -1.0), 0.1, 1e-15);
    EXPECT_NEAR(r(3.0, -1.0), 1.0 - 0.9 * std::exp(-1.0), 1e-15);
    EXPECT_THROW(eqfd::Weight2D::radial_well(1.2, 0, 0, 1), eqfd::ValidationError);
}

}  // namespace
