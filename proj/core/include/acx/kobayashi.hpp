#pragma once

#include "acx/acs.hpp"
#include "acx/hyperbolic.hpp"
#include "acx/solver.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace acx {

/// One disk of a chain. z and w are parameters in the unit disk; the disk map
/// itself lives on radius `disk.radius()` and is evaluated at radius * z.
struct ChainLink {
  DiskMap disk;
  DiskPoint z;
  DiskPoint w;

  Point source_point() const { return disk(disk.radius() * z.z()); }
  Point target_point() const { return disk(disk.radius() * w.z()); }
  ChainLink reversed() const { return {disk, w, z}; }
};

struct KobayashiChain {
  std::vector<ChainLink> links;
  double tolerance = 1e-6;

  KobayashiChain reversed() const;
  /// Concatenation; the junction tolerance is the larger of the two.
  KobayashiChain then(const KobayashiChain& next) const;
};

/// sum of poincare_distance(z_k, w_k).
double chain_length(const KobayashiChain& c);

/// f_1(z_1) = p, f_m(w_m) = q and f_k(w_k) = f_{k+1}(z_{k+1}) within c.tolerance.
/// The empty chain joins p to q iff |p - q| <= tolerance.
bool validate_chain(const KobayashiChain& c, const Point& p, const Point& q);

/// Largest endpoint or junction gap of the chain for (p, q).
double chain_gap(const KobayashiChain& c, const Point& p, const Point& q);

struct EstimatorConfig {
  int waypoints = 8;
  /// Pairs further apart than this (chart distance) are not shot at.
  double radius_budget = std::numeric_limits<double>::infinity();
  SolverConfig solver{16, 1e-3, 60, 0.7, 2};
  double junction_tol = 1e-6;
  /// Bisection steps on the hit parameter per shoot.
  int trial_budget = 40;
  /// Relative width at which the hit-parameter bisection stops.
  double hit_rel_tol = 1e-3;
  int newton_iterations = 8;
  std::uint64_t seed = 1;
  /// Points always added to the waypoint set (shared pools make estimates
  /// over the pool one shortest-path metric).
  std::vector<Point> extra_waypoints;
};

struct SolverCounts {
  int solves = 0;
  int failures = 0;
  int edges_tried = 0;
  int edges_found = 0;
};

struct DistanceEstimate {
  double upper_bound = 0.0;
  KobayashiChain chain;
  std::vector<Point> waypoints;
  SolverCounts solver_stats;
};

/// Single-disk connection from a to b: a disk centered at a, of radius 1,
/// hitting b at a real parameter s found by bisection.
struct ShootResult {
  bool found = false;
  std::optional<ChainLink> link;
  double length = std::numeric_limits<double>::infinity();
  SolverCounts counts;
};

ShootResult shoot(const ChartManifold& m, const Point& a, const Point& b,
                  const EstimatorConfig& cfg);

/// Upper bound on d_M(p, q) with a witnessing chain. Throws ReachabilityError
/// when no chain is found within the budget.
DistanceEstimate estimate_distance(const ChartManifold& m, const Point& p, const Point& q,
                                   const EstimatorConfig& cfg);

/// Estimates for every pair of a shared point pool: one graph, so the results
/// form a pseudometric on the pool. Entry (i, j) is +inf when unreachable.
Mat pool_distances(const ChartManifold& m, const std::vector<Point>& pool,
                   const EstimatorConfig& cfg, SolverCounts* counts = nullptr);

struct PseudometricEstimate {
  double value = std::numeric_limits<double>::infinity();  ///< upper bound on F_M(p; v)
  double witness_radius = 0.0;
  double width_analog = 0.0;  ///< pi * witness_radius^2
  bool cap_limited = false;
  std::string diagnostic;
};

PseudometricEstimate infinitesimal_metric(const ChartManifold& m, const Point& p, const Vec& v,
                                          const SolverConfig& cfg,
                                          const RadiusSearchConfig& search = {});

// ---------------------------------------------------------------------------
// Harnesses

/// A map between chart manifolds, pseudoholomorphic when dh o J_src = J_tgt o dh.
struct ChartMap {
  std::function<Vec(const Point&)> map;
  double fd_step = 1e-5;
};

/// sup over sampled source points of ||dh J_src - J_tgt(h) dh||_F.
double map_defect(const ChartManifold& source, const ChartManifold& target, const ChartMap& h,
                  int samples, std::uint64_t seed = 0);

struct TransferRow {
  Point p, q;
  double source_bound = 0.0;
  double transferred_bound = 0.0;
  bool transferred_valid = false;
  double transferred_residual = 0.0;
  double target_estimate = std::numeric_limits<double>::infinity();
  bool pass = false;
};

struct TransferReport {
  std::vector<TransferRow> rows;
  double slack = 0.0;
  bool pass = false;
};

/// Pushes source witness chains through h and checks they are valid target
/// chains no longer than the source bound + slack.
TransferReport check_nonincreasing(const ChartManifold& source, const ChartManifold& target,
                                   const ChartMap& h,
                                   const std::vector<std::pair<Point, Point>>& pairs,
                                   const EstimatorConfig& cfg, double map_tol = 1e-6);

/// Product chart with split structure J1 x J2 and product domain.
ChartManifold product_manifold(const ChartManifold& m1, const ChartManifold& m2);

struct ProductRow {
  Point p, q;
  double factor1 = 0.0;  ///< factor estimates
  double factor2 = 0.0;
  double product_direct = std::numeric_limits<double>::infinity();
  double concatenated = 0.0;  ///< length of the factor chains run one after the other
  double product_bound = 0.0;  ///< min(direct, concatenated)
  double projected1 = 0.0;  ///< lengths of the projected product witness
  double projected2 = 0.0;
  bool upper_ok = false;
  bool lower_ok = false;
};

struct ProductReport {
  std::vector<ProductRow> rows;
  double slack = 0.0;
  bool pass = false;
};

/// Checks max(d1, d2) <= d12 <= d1 + d2 in the directions available to an
/// upper-bound estimator. Throws ConfigurationError when m12 is not split.
ProductReport product_bounds(const ChartManifold& m1, const ChartManifold& m2,
                             const ChartManifold& m12,
                             const std::vector<std::pair<Point, Point>>& pairs,
                             const EstimatorConfig& cfg, double slack = 1e-3);

struct BundleRow {
  Point p, q;             ///< total-space points
  double e_bound = 0.0;   ///< estimate between p and q in E
  double projected = 0.0; ///< length of the projected E witness in B
  double b_bound = 0.0;   ///< estimate between pi(p), pi(q) in B
  double lifted = 0.0;    ///< length of the fiber-constant lift in E
  bool projection_ok = false;
  bool lift_ok = false;
};

struct BundleReport {
  std::vector<BundleRow> rows;
  double slack = 0.0;
  bool pass = false;
};

/// E = B x F with split structure, projection onto the first factor.
BundleReport bundle_projection_check(const ChartManifold& e, const ChartManifold& b,
                                     const ChartManifold& fiber,
                                     const std::vector<std::pair<Point, Point>>& pairs,
                                     const EstimatorConfig& cfg, double slack = 1e-3);

}  // namespace acx
