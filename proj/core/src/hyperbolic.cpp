#include "acx/hyperbolic.hpp"

#include "acx/errors.hpp"

#include <cmath>

namespace acx {
namespace {

void require_in_disk(Complex z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("point outside the open unit disk");
}

}  // namespace

DiskPoint::DiskPoint(Complex z) : z_(z) { require_in_disk(z); }

DiskAutomorphism::DiskAutomorphism(Complex a, double theta) : a_(a), theta_(theta) {
  require_in_disk(a);
}

Complex DiskAutomorphism::operator()(Complex z) const {
  require_in_disk(z);
  return std::polar(1.0, theta_) * (z - a_) / (1.0 - std::conj(a_) * z);
}

DiskPoint DiskAutomorphism::operator()(const DiskPoint& z) const {
  // Clamp rounding drift out of the open disk.
  Complex w = (*this)(z.z());
  if (std::abs(w) >= 1.0) w *= std::nextafter(1.0, 0.0) / std::abs(w);
  return DiskPoint(w);
}

Complex DiskAutomorphism::derivative(Complex z) const {
  const Complex d = 1.0 - std::conj(a_) * z;
  return std::polar(1.0, theta_) * (1.0 - std::norm(a_)) / (d * d);
}

Complex DiskAutomorphism::inverse(Complex w) const {
  const Complex u = std::polar(1.0, -theta_) * w;
  return (u + a_) / (1.0 + std::conj(a_) * u);
}

Complex DiskAutomorphism::inverse_derivative(Complex w) const {
  const Complex u = std::polar(1.0, -theta_) * w;
  const Complex d = 1.0 + std::conj(a_) * u;
  return std::polar(1.0, -theta_) * (1.0 - std::norm(a_)) / (d * d);
}

DiskAutomorphism DiskAutomorphism::inverted() const {
  // inverse(w) = e^{i(-theta)} (w - b) / (1 - conj(b) w) with b = -e^{i theta} a.
  return DiskAutomorphism(-std::polar(1.0, theta_) * a_, -theta_);
}

double poincare_norm(Complex z, Complex v) {
  require_in_disk(z);
  return std::abs(v) / (1.0 - std::norm(z));
}

double poincare_norm(const DiskPoint& z, Complex v) { return poincare_norm(z.z(), v); }

double poincare_distance(Complex z, Complex w) {
  require_in_disk(z);
  require_in_disk(w);
  if (z == w) return 0.0;
  const double q = std::abs((z - w) / (1.0 - std::conj(z) * w));
  return std::atanh(std::min(q, std::nextafter(1.0, 0.0)));
}

double poincare_distance(const DiskPoint& z, const DiskPoint& w) {
  return poincare_distance(z.z(), w.z());
}

}  // namespace acx
