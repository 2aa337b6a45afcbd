#pragma once

#include "acx/linalg.hpp"

namespace acx {

/// A point of the open unit disk.
class DiskPoint {
 public:
  /// Throws DomainError when |z| >= 1.
  explicit DiskPoint(Complex z);
  DiskPoint() = default;
  Complex z() const { return z_; }
  double abs() const { return std::abs(z_); }

 private:
  Complex z_{0.0, 0.0};
};

/// z -> e^{i theta} (z - a) / (1 - conj(a) z), an automorphism of the unit disk.
class DiskAutomorphism {
 public:
  DiskAutomorphism(Complex a, double theta);
  DiskAutomorphism() = default;

  static DiskAutomorphism identity() { return {}; }
  /// The automorphism sending a to 0 with derivative (rotation) e^{i theta}/(1-|a|^2) there.
  Complex a() const { return a_; }
  double theta() const { return theta_; }

  Complex operator()(Complex z) const;
  DiskPoint operator()(const DiskPoint& z) const;
  Complex derivative(Complex z) const;
  /// Inverse map: w -> (e^{-i theta} w + a) / (1 + conj(a) e^{-i theta} w).
  Complex inverse(Complex w) const;
  Complex inverse_derivative(Complex w) const;
  DiskAutomorphism inverted() const;

 private:
  Complex a_{0.0, 0.0};
  double theta_ = 0.0;
};

/// |v| / (1 - |z|^2).
double poincare_norm(const DiskPoint& z, Complex v);
double poincare_norm(Complex z, Complex v);

/// artanh |(z - w) / (1 - conj(z) w)|; d(0, r) = artanh(r).
double poincare_distance(const DiskPoint& z, const DiskPoint& w);
double poincare_distance(Complex z, Complex w);

}  // namespace acx
