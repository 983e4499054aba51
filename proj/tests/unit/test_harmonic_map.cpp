#include <array>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "eqfd/harmonic_map.hpp"
#include "eqfd/io.hpp"

using eqfd::Interval;
using eqfd::WeightSpec;

namespace {

eqfd::TensorMesh tensor_of(const WeightSpec& gx, const WeightSpec& gy, eqfd::Rectangle r, std::size_t n) {
    const std::array specs{gx, gy};
    const std::array doms{r.x, r.y};
    const std::array<std::size_t, 2> segs{n - 1, n - 1};
    return eqfd::generate_tensor_mesh(specs, doms, segs);
}

TEST(Winslow, ConstantWeightGivesUniformGridImmediately) {
    const eqfd::Rectangle r{{0.0, 2.0}, {-1.0, 1.0}};
    const auto g = eqfd::Weight2D::product(WeightSpec::constant(1.0), WeightSpec::constant(3.0));
    const auto grid = eqfd::solve_winslow(g, r, 9, 5);
    EXPECT_LE(grid.residual(), 1e-8);
    for (std::size_t j = 0; j < 5; ++j) {
        for (std::size_t i = 0; i < 9; ++i) {
            EXPECT_NEAR(grid.x(i, j), 0.25 * static_cast<double>(i), 1e-12);
            EXPECT_NEAR(grid.y(i, j), -1.0 + 0.5 * static_cast<double>(j), 1e-12);
        }
    }
}

TEST(Winslow, SeparableWeightReproducesTensorMesh) {
    const eqfd::Rectangle r{{-25.0, 25.0}, {-25.0, 25.0}};
    const auto gx = WeightSpec::gaussian_well(0.9, 0.0, 50.0);
    const auto gy = WeightSpec::gaussian_well(0.9, 0.0, 50.0);
    const auto grid = eqfd::solve_winslow(eqfd::Weight2D::product(gx, gy), r, 33, 33);
    const auto tm = tensor_of(gx, gy, r, 33);
    EXPECT_LE(grid.residual(), 1e-8);
    EXPECT_GT(grid.min_jacobian(), 0.0);
    EXPECT_LE(grid.max_discrepancy(tm), 5e-5);
    const auto back = grid.to_tensor_mesh(1e-4);
    for (std::size_t i = 0; i < 33; ++i) EXPECT_NEAR(back.axis(0)[i], tm.axis(0)[i], 5e-5);
}

TEST(Winslow, AnisotropicSeparableWeight) {
    const eqfd::Rectangle r{{0.0, 3.0}, {-1.0, 1.0}};
    const auto gx = WeightSpec::gaussian_well(0.7, 1.0, 0.8);
    const auto gy = WeightSpec::table({-1.0, 0.0, 1.0}, {0.3, 1.0, 0.6});
    const auto grid = eqfd::solve_winslow(eqfd::Weight2D::product(gx, gy), r, 25, 17);
    const eqfd::TensorMesh tm({eqfd::generate_mesh(gx, r.x, 24), eqfd::generate_mesh(gy, r.y, 16)});
    EXPECT_LE(grid.max_discrepancy(tm), 5e-5 * r.diameter());
}

TEST(Winslow, NonSeparableWeightStaysUnfolded) {
    const eqfd::Rectangle r{{-5.0, 5.0}, {-5.0, 5.0}};
    const auto g = eqfd::Weight2D::radial_well(0.8, 1.0, -0.5, 4.0);
    const auto grid = eqfd::solve_winslow(g, r, 21, 21);
    EXPECT_GT(grid.min_jacobian(), 0.0);
    EXPECT_LE(grid.residual(), 1e-8);
    // Cells near the well center shrink relative to the corners.
    const double center_cell = grid.x(11, 10) - grid.x(10, 10);
    const double corner_cell = grid.x(1, 0) - grid.x(0, 0);
    EXPECT_LT(center_cell, corner_cell);
    // Not a tensor product any more.
    EXPECT_THROW(grid.to_tensor_mesh(1e-6), eqfd::NumericalError);
}

TEST(Winslow, CsvAndErrors) {
    const eqfd::Rectangle r{{0.0, 1.0}, {0.0, 1.0}};
    const auto flat = eqfd::Weight2D::product(WeightSpec::constant(1.0), WeightSpec::constant(1.0));
    std::ostringstream os;
    eqfd::solve_winslow(flat, r, 3, 3).write_csv(os, eqfd::ShortestFormat{});
    EXPECT_EQ(os.str().substr(0, 22), "i,j,x,y\n0,0,0,0\n1,0,0.");

    EXPECT_THROW(eqfd::solve_winslow(flat, r, 2, 5), eqfd::InputError);
    const auto bad = eqfd::Weight2D::product(WeightSpec::table({0.0, 1.0}, {1.0, -1.0}), WeightSpec::constant(1.0));
    EXPECT_THROW(eqfd::solve_winslow(bad, r, 5, 5), eqfd::ValidationError);

    eqfd::WinslowOptions opts;
    opts.max_iter = 0;
    const auto well = eqfd::Weight2D::radial_well(0.9, 0.5, 0.5, 0.3);
    try {
        eqfd::solve_winslow(well, r, 9, 9, opts);
        FAIL() << "expected ConvergenceError";
    } catch (const eqfd::ConvergenceError& e) {
        EXPECT_GT(e.last_residual(), 1e-8);
    }
}

}  // namespace
