#include "acx/disk_map.hpp"
#include "acx/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace acx;

namespace {

Vec cubic(Complex z) {
  const double x = z.real(), y = z.imag();
  Vec v(2);
  v << 1.0 + x - 2.0 * y + x * x * y - 0.5 * y * y * y + x * x * x, 0.3 * x * y * y - x * x + y;
  return v;
}

}  // namespace

TEST(DiskMap, InterpolationExactOnBicubics) {
  const auto f = DiskMap::sample(1.0, 6, 2, cubic);
  for (Complex z : {Complex(0.13, -0.41), Complex(-0.77, 0.2), Complex(0.5, 0.5), Complex(0.0, 0.99)}) {
    EXPECT_LT((f(z) - cubic(z)).norm(), 1e-12);
  }
}

TEST(DiskMap, NodeValuesAreExact) {
  const auto f = DiskMap::sample(0.5, 8, 2, cubic);
  EXPECT_EQ((f(Complex(0.0, 0.0)) - cubic(0.0)).norm(), 0.0);
  EXPECT_EQ((f.center_value() - cubic(0.0)).norm(), 0.0);
}

TEST(DiskMap, DerivativeOfQuarticIsExact) {
  // The five-point stencil is exact on quartics.
  const auto fn = [](Complex z) {
    Vec v(2);
    v << std::pow(z.real(), 4) - z.imag(), z.real() * z.imag();
    return v;
  };
  const auto f = DiskMap::sample(1.0, 8, 2, fn);
  const Mat d = f.center_derivative();
  EXPECT_NEAR(d(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(d(0, 1), -1.0, 1e-12);
  EXPECT_NEAR(d(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(d(1, 1), 0.0, 1e-12);
}

TEST(DiskMap, CsvRoundTrip) {
  const auto f = DiskMap::sample(0.7, 5, 2, cubic);
  std::stringstream ss;
  f.write_csv(ss);
  const auto g = DiskMap::read_csv(ss, 0.7);
  EXPECT_EQ(g.half_count(), f.half_count());
  EXPECT_DOUBLE_EQ(g.spacing(), f.spacing());
  EXPECT_EQ((g.values() - f.values()).norm(), 0.0);
}

TEST(DiskMap, TransformedAppliesNodewise) {
  const auto f = DiskMap::sample(1.0, 4, 2, cubic);
  const auto g = f.transformed([](const Vec& v) { return Vec(2.0 * v); });
  EXPECT_EQ((g.values() - 2.0 * f.values()).norm(), 0.0);
}

TEST(DiskMap, RejectsBadGeometry) {
  EXPECT_THROW(DiskMap(1.0, 0.1, 5, Mat::Zero(2, 10)), ConfigurationError);
  EXPECT_THROW(DiskMap::sample(1.0, 1, 2, cubic), ConfigurationError);
}
