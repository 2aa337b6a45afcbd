#pragma once

#include "acx/acs.hpp"
#include "acx/disk_map.hpp"

#include <functional>
#include <optional>

namespace acx {

struct SolverConfig {
  int grid_resolution = 24;  ///< lattice nodes per disk radius
  double tol = 1e-6;         ///< residual target
  int max_iterations = 60;
  double shrink_factor = 0.7;
  int max_shrinks = 4;
};

struct SolveStats {
  int iterations = 0;
  int shrinks = 0;
  double residual = 0.0;
};

/// Cauchy-Green transform T[phi](z) = (1/pi) sum phi(zeta) / (z - zeta) h^2 on a
/// square lattice, with the kernel punctured at zeta = z (the cell integral of
/// 1/(z - zeta) over a centered square vanishes). phi is C^n valued, stored as
/// 2n x nodes real pairs. Returns the transform at every node.
Mat cauchy_green(const Mat& phi, int side, double spacing);

/// Reference transform by direct summation, O(nodes^2).
Mat cauchy_green_direct(const Mat& phi, int side, double spacing);

/// Pseudoholomorphic disk f on the r-disk with f(0) = p and f_*(0)e = v.
///
/// Solves df o j = J(f) o df in Beltrami form dbar g = Q(g) d g in a frame at p
/// in which J(p) = J0, by Picard iteration g <- z v + T[chi Q(g) d g] from the
/// affine seed. chi is a smooth cutoff equal to 1 on a neighborhood of the
/// r-disk, so the equation holds on the whole closed disk. Non-convergence
/// shrinks r by shrink_factor, at most max_shrinks times.
DiskMap solve_local_disk(const ChartManifold& m, const Point& p, const Vec& v, double r,
                         const SolverConfig& cfg, SolveStats* stats = nullptr);

/// sup over nodes |z| < r of |f_y - J(f) f_x| / (|f_x| + 1), central differences.
double residual(const ChartManifold& m, const DiskMap& f);
/// Per-node residual (0 outside the disk).
double local_residual(const ChartManifold& m, const DiskMap& f, int i, int j);

/// Deterministic family v -> f(.; v) of solved disks centered at p.
class DiskFamily {
 public:
  DiskFamily(ChartManifold m, Point p, double r, SolverConfig cfg);

  /// f(.; v); v = 0 gives the constant disk.
  DiskMap operator()(const Vec& v) const;
  /// Largest tested velocity norm (within max_norm) for which every probe
  /// direction solves at full radius.
  double velocity_ball_radius() const { return ball_radius_; }
  /// Fitted Lipschitz constant of v -> f(.; v) in sup norm on the ball.
  double lipschitz() const { return lipschitz_; }

  /// d f(zeta; v) / d v at v = 0 by central differences (2n x 2n).
  Mat velocity_jacobian(Complex zeta, double step) const;

 private:
  ChartManifold m_;
  Point p_;
  double r_;
  SolverConfig cfg_;
  double ball_radius_ = 0.0;
  double lipschitz_ = 0.0;
};

struct RadiusSearchConfig {
  double initial_radius = 0.25;
  double rel_tol = 1e-3;
  double cap = 1e3;
};

struct RadiusResult {
  double radius = 0.0;
  bool cap_limited = false;
  bool failed = false;
  std::string diagnostic;
};

/// Largest r (by bisection) for which solve_local_disk(p, v, r) succeeds at
/// full radius with image in the domain.
RadiusResult max_disk_radius(const ChartManifold& m, const Point& p, const Vec& v,
                             const SolverConfig& cfg, const RadiusSearchConfig& search = {});

}  // namespace acx
