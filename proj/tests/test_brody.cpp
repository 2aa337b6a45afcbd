#include "acx/brody.hpp"
#include "acx/errors.hpp"
#include "acx/gallery.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace acx;

namespace {

DiskMap affine(double radius, const Vec& v, int res = 24) {
  return DiskMap::sample(radius, res, static_cast<int>(v.size()), [&](Complex z) { return complex_scale(z, v); });
}

}  // namespace

TEST(Profile, AffineAndConstantMaps) {
  const auto box = gallery::flat_box(100.0);
  const auto p1 = sup_norm_profile(box, affine(1.0, Vec::Unit(2, 0)));
  EXPECT_NEAR(p1.max, 1.0, 1e-12);
  EXPECT_EQ(p1.argmax, Complex(0.0, 0.0));
  const auto p2 = sup_norm_profile(box, affine(1.0, 2.0 * Vec::Unit(2, 0)));
  EXPECT_NEAR(p2.max, 2.0, 1e-12);
  for (const auto& s : p2.samples) EXPECT_NEAR(s.value, 2.0 * (1.0 - std::norm(s.z)), 1e-8);
  const auto p0 = sup_norm_profile(box, DiskMap::constant(Vec::Ones(2), 1.0));
  EXPECT_EQ(p0.max, 0.0);
}

TEST(Brody, AffineOracle) {
  const auto box = gallery::flat_box(1e3);
  for (double speed : {1.0, 4.0, 10.0}) {
    const double c = 1.0;
    Vec v(2);
    v << 0.6 * speed, 0.8 * speed;
    const auto res = brody_reparametrize(box, affine(1.0, v), c);
    EXPECT_NEAR(res.scale_t, c / (2.0 * speed), 1e-3 * c / speed) << speed;
    EXPECT_NEAR(res.achieved_center_norm / (0.5 * c), 1.0, 1e-2);
    EXPECT_LE(res.worst_bound_ratio, 1.01);
    if (speed > 1.0) {
      EXPECT_LT(res.scale_t, 1.0);
    }
  }
}

TEST(Brody, ImageContainedInSource) {
  const auto box = gallery::flat_box(1e3);
  const auto f = affine(1.0, 3.0 * Vec::Unit(2, 1));
  const auto res = brody_reparametrize(box, f, 1.0);
  for (int j = 0; j < res.h.side(); ++j)
    for (int i = 0; i < res.h.side(); ++i)
      if (res.h.in_disk(i, j)) EXPECT_LE(Vec(res.h.value(i, j)).norm(), 3.0 + 1e-12);
}

TEST(Brody, PreconditionAndConfiguration) {
  const auto box = gallery::flat_box(1e3);
  EXPECT_THROW(brody_reparametrize(box, affine(1.0, 0.5 * Vec::Unit(2, 0)), 1.0), PreconditionError);
  EXPECT_THROW(brody_reparametrize(box, affine(1.0, Vec::Unit(2, 0)), 0.0), ConfigurationError);
}

TEST(Schwarz, IdentityAndScaledDisks) {
  const auto disk = gallery::unit_disk();
  const auto fit = schwarz_bound_check(disk, {affine(1.0, Vec::Unit(2, 0), 32)}, 1.0 + 1e-12);
  EXPECT_NEAR(fit.fitted_c, 1.0, 1e-2);
  EXPECT_TRUE(fit.pass);
  for (double R : {5.0, 20.0}) {
    const auto box = gallery::flat_box(R);
    const auto f = affine(1.0, 0.999 * R * Vec::Unit(2, 0), 32);
    EXPECT_NEAR(schwarz_bound_check(box, {f}, 1.0).fitted_c / R, 1.0, 2e-2);
  }
}

TEST(Probe, AffineSequenceStabilizes) {
  const auto box = gallery::flat_box(1e6);
  const DiskGenerator gen = [](int k) -> std::optional<DiskMap> {
    return affine(1.0, (k + 2.0) * Vec::Unit(2, 0), 16);
  };
  const auto report = rescaling_probe(box, gen, 5);
  ASSERT_EQ(report.rows.size(), 5u) << report.diagnostic;
  EXPECT_FALSE(report.precondition_failed);
  EXPECT_TRUE(std::isnan(report.rows[0].trailing_cauchy_diff));
  for (const auto& row : report.rows) EXPECT_NEAR(row.rescaled_center_norm, 1.0, 1e-2);
  EXPECT_LE(report.rows.back().trailing_cauchy_diff, 1e-3);
}

TEST(Probe, UnitDiskHasNoAdmissibleGenerator) {
  const DiskGenerator none = [](int) -> std::optional<DiskMap> { return std::nullopt; };
  const auto report = rescaling_probe(gallery::unit_disk(), none, 4);
  EXPECT_TRUE(report.precondition_failed);
  EXPECT_TRUE(report.rows.empty());
}

TEST(Probe, ExhaustionGivesPartialReport) {
  const auto box = gallery::flat_box(1e6);
  const DiskGenerator gen = [](int k) -> std::optional<DiskMap> {
    if (k >= 2) return std::nullopt;
    return affine(1.0, (k + 2.0) * Vec::Unit(2, 0), 16);
  };
  const auto report = rescaling_probe(box, gen, 5);
  EXPECT_TRUE(report.partial);
  EXPECT_EQ(report.rows.size(), 2u);
}

TEST(Probe, InvariantSphereCurveStabilizes) {
  const gallery::S6Chart chart(gallery::default_pole());
  const auto m = gallery::s6_chart(gallery::default_pole(), 10.0);
  const DiskGenerator gen = [&](int k) -> std::optional<DiskMap> {
    const double scale = k + 1.0;
    return DiskMap::sample(1.0, 16 * (k + 1), 6, [&](Complex z) { return chart.s2_curve(scale * z); });
  };
  const auto report = rescaling_probe(m, gen, 4);
  ASSERT_EQ(report.rows.size(), 4u);
  for (const auto& row : report.rows) EXPECT_NEAR(row.rescaled_center_norm, 1.0, 1e-2);
  EXPECT_LT(report.rows.back().trailing_cauchy_diff, report.rows[1].trailing_cauchy_diff + 1e-12);
  EXPECT_LE(report.rows.back().trailing_cauchy_diff, 1e-2);
}
