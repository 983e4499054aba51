#include <array>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "eqfd/io.hpp"
#include "eqfd/tensor_mesh.hpp"

using eqfd::Interval;
using eqfd::WeightSpec;

namespace {

TEST(TensorMesh, AxesAreIndependentEquidistributions) {
    const std::array specs{WeightSpec::gaussian_well(0.9, 0.0, 50.0), WeightSpec::constant(1.0)};
    const std::array<Interval, 2> doms{Interval{-25.0, 25.0}, Interval{0.0, 2.0}};
    const std::array<std::size_t, 2> segs{40, 8};
    const auto tm = eqfd::generate_tensor_mesh(specs, doms, segs);
    ASSERT_EQ(tm.dimension(), 2u);
    EXPECT_EQ(tm.dims(), (std::vector<std::size_t>{41, 9}));

    const auto x = eqfd::generate_mesh(specs[0], doms[0], 40);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(tm.axis(0)[i], x[i]);
    for (std::size_t j = 0; j < 9; ++j) EXPECT_NEAR(tm.axis(1)[j], 0.25 * static_cast<double>(j), 1e-14);

    EXPECT_NEAR(tm.normalization(0), 332.321, 1e-3);
    EXPECT_NEAR(tm.normalization(1), 2.0, 1e-13);
}

TEST(TensorMesh, ThreeAxes) {
    const std::array specs{WeightSpec::constant(1.0), WeightSpec::constant(2.0), WeightSpec::gaussian_well(0.5, 0, 1)};
    const std::array<Interval, 3> doms{Interval{0, 1}, Interval{0, 1}, Interval{-1, 1}};
    const std::array<std::size_t, 3> segs{2, 3, 4};
    const auto tm = eqfd::generate_tensor_mesh(specs, doms, segs);
    EXPECT_EQ(tm.dimension(), 3u);
    std::ostringstream os;
    EXPECT_THROW(tm.write_csv(os, eqfd::ShortestFormat{}), eqfd::UnsupportedDimensionError);
}

TEST(TensorMesh, CsvLayoutIsXFastest) {
    const std::array specs{WeightSpec::constant(1.0), WeightSpec::constant(1.0)};
    const std::array<Interval, 2> doms{Interval{0, 1}, Interval{0, 2}};
    const std::array<std::size_t, 2> segs{2, 2};
    std::ostringstream os;
    eqfd::generate_tensor_mesh(specs, doms, segs).write_csv(os, eqfd::ShortestFormat{});
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "i,j,x_i,y_j");
    std::getline(in, line);
    EXPECT_EQ(line, "0,0,0,0");
    std::getline(in, line);
    EXPECT_EQ(line, "1,0,0.5,0");
}

TEST(TensorMesh, ErrorPaths) {
    const std::array specs{WeightSpec::constant(1.0)};
    const std::array<Interval, 2> doms{Interval{0, 1}, Interval{0, 1}};
    const std::array<std::size_t, 1> segs{4};
    EXPECT_THROW(eqfd::generate_tensor_mesh(specs, doms, segs), eqfd::InputError);
    EXPECT_THROW(eqfd::TensorMesh({}), eqfd::InputError);
}

}  // namespace
