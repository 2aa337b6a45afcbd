#include "acx/errors.hpp"
#include "acx/gallery.hpp"
#include "acx/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace acx;

TEST(CauchyGreen, FftMatchesDirectSum) {
  const int side = 21;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Mat phi(4, side * side);
  for (Eigen::Index k = 0; k < phi.size(); ++k) phi.data()[k] = g(rng);
  const Mat fast = cauchy_green(phi, side, 0.1);
  const Mat slow = cauchy_green_direct(phi, side, 0.1);
  EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-11 * slow.cwiseAbs().maxCoeff());
}

TEST(CauchyGreen, InvertsDbarOnCompactSupport) {
  // psi(z) = exp(-|z|^2 / s) is negligible at the lattice edge, so
  // T[dbar psi] = psi by the Cauchy-Pompeiu formula; dbar psi = -z psi / s.
  const double s = 0.05;
  const auto psi = [s](Complex z) { return std::exp(-std::norm(z) / s); };
  for (int half : {40, 80}) {
    const int side = 2 * half + 1;
    const double h = 1.5 / half;
    Mat phi(2, side * side);
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) {
        const Complex z((i - half) * h, (j - half) * h);
        const Complex d = -z * psi(z) / s;
        phi(0, j * side + i) = d.real();
        phi(1, j * side + i) = d.imag();
      }
    }
    const Mat t = cauchy_green(phi, side, h);
    double err = 0.0;
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) {
        const Complex z((i - half) * h, (j - half) * h);
        err = std::max(err, std::abs(Complex(t(0, j * side + i), t(1, j * side + i)) - psi(z)));
      }
    }
    EXPECT_LT(err, half == 40 ? 2e-2 : 5e-3) << "half " << half;
  }
}

TEST(Residual, AffineZeroAntiholomorphicPositive) {
  const auto m = gallery::flat_box(5.0, 2);
  Vec v(2);
  v << 0.6, 0.8;
  const auto hol = DiskMap::sample(1.0, 8, 2, [&](Complex z) { return complex_scale(z, v); });
  EXPECT_LT(residual(m, hol), 1e-14);
  const auto anti = DiskMap::sample(1.0, 8, 2, [&](Complex z) { return complex_scale(std::conj(z), v); });
  EXPECT_NEAR(residual(m, anti), 2.0 * v.norm() / (v.norm() + 1.0), 1e-12);
}

TEST(Solver, ConstantStructureGivesAffineDisk) {
  const auto m = gallery::flat_box(5.0, 4);
  const Vec p = Vec::Zero(4);
  const Vec v = Vec::Unit(4, 0);
  SolveStats stats;
  const auto f = solve_local_disk(m, p, v, 1.0, {16, 1e-10, 60, 0.7, 0}, &stats);
  EXPECT_EQ(stats.iterations, 0);
  EXPECT_LT(stats.residual, 1e-14);
  for (Complex z : {Complex(0.3, 0.4), Complex(-0.9, 0.1)}) EXPECT_LT((f(z) - complex_scale(z, v)).norm(), 1e-14);
}

TEST(Solver, ConjugateConstantStructure) {
  // J = -J0 is constant too; its disks are z -> p + conj-linear images of z.
  const ChartManifold m(AlmostComplexStructure::constant_field(-standard_structure(2)), Domain::ball(Vec::Zero(2), 3.0));
  Vec v(2);
  v << 1.0, 0.5;
  const auto f = solve_local_disk(m, Vec::Zero(2), v, 1.0, {16, 1e-10, 60, 0.7, 0});
  EXPECT_LT(residual(m, f), 1e-12);
  EXPECT_LT((f.center_derivative().col(0) - v).norm(), 1e-12);
}

TEST(Solver, EscapeReportsLargestValidRadius) {
  const auto m = gallery::flat_box(0.5, 2);  // diameter 1
  try {
    solve_local_disk(m, Vec::Zero(2), Vec::Unit(2, 0), 2.0, {16, 1e-8, 60, 0.7, 0});
    FAIL() << "expected a domain escape";
  } catch (const DomainEscapeError& e) {
    EXPECT_GT(e.largest_valid_radius(), 0.4);
    EXPECT_LT(e.largest_valid_radius(), 0.5);
  }
}

TEST(Solver, RejectsBadInputs) {
  const auto m = gallery::flat_box(1.0, 2);
  EXPECT_THROW(solve_local_disk(m, Vec::Zero(2), Vec::Zero(2), 0.5, {}), ConfigurationError);
  EXPECT_THROW(solve_local_disk(m, Vec::Constant(2, 3.0), Vec::Unit(2, 0), 0.5, {}), DomainError);
  EXPECT_THROW(solve_local_disk(m, Vec::Zero(2), Vec::Unit(2, 0), 0.5, {16, 1e-6, 60, 1.5, 0}), ConfigurationError);
}

TEST(Solver, BumpStructureConvergesAndRefines) {
  const auto m = gallery::bump_r4(0.05);
  const Vec p = Vec::Zero(4);
  const Vec v = Vec::Unit(4, 0);
  SolveStats coarse, fine;
  const auto f16 = solve_local_disk(m, p, v, 0.25, {16, 1e-3, 50, 0.7, 0}, &coarse);
  const auto f32 = solve_local_disk(m, p, v, 0.25, {32, 1e-3, 50, 0.7, 0}, &fine);
  EXPECT_LE(fine.iterations, 50);
  EXPECT_GE(coarse.residual / fine.residual, 2.0);
  EXPECT_LT(fine.residual, 5e-6);
  EXPECT_EQ((f32.center_value() - p).norm(), 0.0);
  EXPECT_LT((f32.center_derivative().col(0) - v).norm(), 1e-10);
  // Consistency of the two discretizations on the disk.
  for (Complex z : {Complex(0.1, 0.05), Complex(-0.2, 0.1), Complex(0.0, -0.24)}) {
    EXPECT_LT((f16(z) - f32(z)).norm(), 1e-4);
  }
}

TEST(Solver, NonConvergenceCarriesBestResidual) {
  const auto m = gallery::bump_r4(0.05);
  try {
    solve_local_disk(m, Vec::Zero(4), Vec::Unit(4, 0), 0.25, {8, 1e-12, 3, 0.7, 1});
    FAIL() << "expected non-convergence";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.best_residual(), 1e-12);
    EXPECT_TRUE(std::isfinite(e.best_residual()));
  }
}

TEST(DiskFamily, FlatFamilyIsLinearInVelocity) {
  const auto m = gallery::flat_box(10.0, 2);
  const DiskFamily fam(m, Vec::Zero(2), 1.0, {8, 1e-8, 60, 0.7, 0});
  EXPECT_DOUBLE_EQ(fam.velocity_ball_radius(), 1.0);
  const Complex zeta(0.3, -0.4);
  const Mat jac = fam.velocity_jacobian(zeta, 1e-3);
  Mat expected(2, 2);
  expected << zeta.real(), -zeta.imag(), zeta.imag(), zeta.real();
  EXPECT_LT((jac - expected).norm(), 1e-10);
  EXPECT_LT((fam(Vec::Zero(2))(zeta)).norm(), 1e-15);
}

TEST(DiskFamily, SmallDomainShrinksBall) {
  const auto m = gallery::flat_box(0.3, 2);
  const DiskFamily fam(m, Vec::Zero(2), 1.0, {8, 1e-8, 60, 0.7, 0});
  EXPECT_LT(fam.velocity_ball_radius(), 0.3);
  EXPECT_GT(fam.velocity_ball_radius(), 0.1);
}

TEST(MaxDiskRadius, FlatDomainsMatchGeometry) {
  const SolverConfig cfg{8, 1e-8, 60, 0.7, 0};
  const auto disk = max_disk_radius(gallery::unit_disk(), Vec::Zero(2), Vec::Unit(2, 0), cfg);
  EXPECT_FALSE(disk.failed);
  EXPECT_NEAR(disk.radius, 1.0, 2e-3);
  const auto box = max_disk_radius(gallery::flat_box(10.0), Vec::Zero(2), Vec::Unit(2, 0), cfg);
  EXPECT_NEAR(box.radius, 10.0, 2e-2);
  const auto capped = max_disk_radius(gallery::flat_box(10.0), Vec::Zero(2), Vec::Unit(2, 0), cfg, {0.25, 1e-3, 4.0});
  EXPECT_TRUE(capped.cap_limited);
}

TEST(MaxDiskRadius, HomogeneousInVelocity) {
  const auto r = max_disk_radius(gallery::unit_disk(), Vec::Zero(2), 2.0 * Vec::Unit(2, 0), {8, 1e-8, 60, 0.7, 0});
  EXPECT_NEAR(r.radius, 0.5, 1e-3);
}

TEST(DiskFamily, PerturbedVelocityJacobianHasFullRank) {
  const auto m = gallery::bump_r4(0.05);
  const DiskFamily fam(m, Vec::Zero(4), 0.25, {12, 1e-4, 60, 0.7, 0});
  ASSERT_GT(fam.velocity_ball_radius(), 0.0);
  EXPECT_TRUE(std::isfinite(fam.lipschitz()));
  const Mat jac = fam.velocity_jacobian(Complex(0.1, 0.05), 1e-3);
  const Eigen::JacobiSVD<Mat> svd(jac);
  EXPECT_GT(svd.singularValues().minCoeff(), 1e-3);
  EXPECT_LT((fam(Vec::Zero(4)).values().colwise() - Vec::Zero(4)).norm(), 1e-15);
}
