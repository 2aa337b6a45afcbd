#pragma once

#include "acx/acs.hpp"
#include "acx/disk_map.hpp"
#include "acx/octonion.hpp"

#include <cstdint>
#include <vector>

namespace acx::gallery {

using octonion::Im7;

/// Which side w multiplies on: J_w(eta) = eta x w (default) or w x eta.
enum class CrossOrder { EtaCrossW, WCrossEta };

/// J_w(eta) on T_w S^6. Throws PreconditionError unless |w| = 1 (1e-12) and
/// <eta, w> = 0 (1e-10).
Im7 s6_apply(const Im7& w, const Im7& eta, CrossOrder order = CrossOrder::EtaCrossW);

struct S2InvarianceReport {
  int samples = 0;
  /// max over S^2 samples of the component of J_w(eta) outside Im H
  double max_out_of_subspace = 0.0;
  /// same quantity at generic w in S^6, with eta the tangent projection of an Im H vector
  double control_out_of_subspace = 0.0;
  bool invariant = false;
  bool control_failed_as_expected = false;
};

S2InvarianceReport s2_invariance_check(int samples, std::uint64_t seed = 0);

/// Stereographic chart of S^6 \ {pole} onto R^6 with the pulled-back structure.
class S6Chart {
 public:
  /// Throws ConfigurationError if pole lies on the invariant S^2 or is not unit.
  explicit S6Chart(const Im7& pole, CrossOrder order = CrossOrder::EtaCrossW);

  const Im7& pole() const { return pole_; }
  CrossOrder order() const { return order_; }
  /// sigma(y) = (2 B y + (|y|^2 - 1) pole) / (|y|^2 + 1)
  Im7 to_sphere(const Vec& y) const;
  Vec from_sphere(const Im7& w) const;
  /// d sigma(y), 7 x 6; conformal with factor 2 / (1 + |y|^2).
  Eigen::Matrix<double, 7, 6> differential(const Vec& y) const;
  /// (d sigma)^+ J_{sigma(y)} d sigma.
  Mat structure_at(const Vec& y) const;
  AlmostComplexStructure structure(double smoothness_step = 1e-3) const;

  /// Pseudoholomorphic parametrization C -> invariant S^2 -> chart,
  /// zeta -> (2 Re zeta, 2 Im zeta, |zeta|^2 - 1) / (|zeta|^2 + 1).
  Vec s2_curve(Complex zeta) const;

 private:
  Im7 pole_;
  Eigen::Matrix<double, 7, 6> basis_;
  CrossOrder order_;
};

Im7 default_pole();

/// Ball of the given radius in the chart.
ChartManifold s6_chart(const Im7& pole, double radius, CrossOrder order = CrossOrder::EtaCrossW);

// ---------------------------------------------------------------------------
// Perturbations

struct Bump {
  Vec center;
  double width = 1.0;
  /// exp(1 - 1/(1 - |x - c|^2 / w^2)) inside the ball, 0 outside; peak 1.
  double operator()(const Point& x) const;
};

/// Perturbation direction: bump(x) (K + J(x) K J(x)), which anticommutes with J(x).
struct PerturbationShape {
  Bump bump;
  Mat pattern;
};

/// Deterministic shapes: bumps spread over the ball of the given radius.
std::vector<PerturbationShape> default_shapes(int dim, int count, double radius = 1.0);

/// B (-B^2)^{-1/2} via Denman-Beavers; commutes with B and squares to -I.
/// Throws RetractionError when -B^2 has spectrum on the closed negative axis.
Mat retract(const Mat& b);

/// J_tau = R(J0 + sum tau_i A_i).
AlmostComplexStructure perturbation_family(const AlmostComplexStructure& base,
                                           const std::vector<PerturbationShape>& shapes,
                                           const Vec& tau);

/// Multilinear interpolation of structure samples on a regular lattice, retracted.
AlmostComplexStructure grid_structure(const Vec& lo, const Vec& hi, const std::vector<int>& shape,
                                      const std::vector<Mat>& samples);

// ---------------------------------------------------------------------------
// Named examples

ChartManifold unit_disk();
/// (R^dim, J0) on the open box [-R, R]^dim.
ChartManifold flat_box(double half_width, int dim = 2);
/// Single-bump perturbation of J0 on R^4 used by the solver contract.
ChartManifold bump_r4(double eps, double domain_radius = 1.0);
/// Perturbed J0 on the unit ball of R^4 with the standard symplectic form.
ChartManifold tame_r4(const Vec& tau);
std::vector<PerturbationShape> tame_r4_shapes();

}  // namespace acx::gallery
