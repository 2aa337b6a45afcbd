#include "acx/gallery.hpp"

#include "acx/errors.hpp"
#include "acx/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace acx::gallery {

using octonion::cross;

Im7 s6_apply(const Im7& w, const Im7& eta, CrossOrder order) {
  if (std::abs(w.norm() - 1.0) > 1e-12) throw PreconditionError("s6_apply: w is not a unit vector");
  if (std::abs(eta.dot(w)) > 1e-10) throw PreconditionError("s6_apply: eta is not tangent at w");
  return order == CrossOrder::EtaCrossW ? cross(eta, w) : cross(w, eta);
}

S2InvarianceReport s2_invariance_check(int samples, std::uint64_t seed) {
  S2InvarianceReport report;
  report.samples = samples;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto random_im7 = [&](int active) {
    Im7 x = Im7::Zero();
    for (int i = 0; i < active; ++i) x[i] = gauss(rng);
    return x;
  };
  for (int s = 0; s < samples; ++s) {
    const Im7 w = random_im7(3).normalized();
    Im7 eta = random_im7(3);
    eta -= eta.dot(w) * w;
    const Im7 jeta = s6_apply(w, eta);
    report.max_out_of_subspace = std::max(report.max_out_of_subspace, jeta.tail<4>().norm() / eta.norm());

    // Control: generic w, eta the tangent projection of an Im H vector.
    const Im7 wg = random_im7(7).normalized();
    Im7 etag = random_im7(3);
    etag -= etag.dot(wg) * wg;
    const Im7 jg = s6_apply(wg, etag);
    report.control_out_of_subspace = std::max(report.control_out_of_subspace, jg.tail<4>().norm() / etag.norm());
  }
  report.invariant = report.max_out_of_subspace <= 1e-12;
  report.control_failed_as_expected = report.control_out_of_subspace > 1e-3;
  return report;
}

S6Chart::S6Chart(const Im7& pole, CrossOrder order) : pole_(pole), order_(order) {
  if (std::abs(pole.norm() - 1.0) > 1e-12) throw ConfigurationError("S6 chart pole must be a unit vector");
  if (pole.tail<4>().norm() < 1e-9) {
    throw ConfigurationError("S6 chart pole lies on the invariant 2-sphere");
  }
  // Gram-Schmidt on the coordinate axes, skipping the one closest to the pole.
  int skip = 0;
  pole.cwiseAbs().maxCoeff(&skip);
  int col = 0;
  for (int k = 0; k < 7; ++k) {
    if (k == skip) continue;
    Im7 e = Im7::Unit(k);
    e -= e.dot(pole_) * pole_;
    for (int c = 0; c < col; ++c) e -= e.dot(basis_.col(c)) * basis_.col(c);
    basis_.col(col++) = e.normalized();
  }
}

Im7 S6Chart::to_sphere(const Vec& y) const {
  const double s = y.squaredNorm();
  return (2.0 * basis_ * y + (s - 1.0) * pole_) / (s + 1.0);
}

Vec S6Chart::from_sphere(const Im7& w) const {
  const double denom = 1.0 - w.dot(pole_);
  if (denom <= 0.0) throw DomainError("S6 chart: the pole has no chart coordinates");
  return basis_.transpose() * w / denom;
}

Eigen::Matrix<double, 7, 6> S6Chart::differential(const Vec& y) const {
  const double s = y.squaredNorm() + 1.0;
  const Im7 u = 2.0 * basis_ * y + (s - 2.0) * pole_;
  const Eigen::Matrix<double, 7, 6> du = 2.0 * basis_ + 2.0 * pole_ * y.transpose();
  return du / s - u * (2.0 * y.transpose()) / (s * s);
}

Mat S6Chart::structure_at(const Vec& y) const {
  const Im7 w = to_sphere(y);
  const Eigen::Matrix<double, 7, 6> d = differential(y);
  const double lambda = 2.0 / (1.0 + y.squaredNorm());
  Eigen::Matrix<double, 7, 7> jw = octonion::right_cross_matrix(w);
  if (order_ == CrossOrder::WCrossEta) jw = -jw;
  return d.transpose() * jw * d / (lambda * lambda);
}

AlmostComplexStructure S6Chart::structure(double smoothness_step) const {
  const S6Chart chart = *this;
  return AlmostComplexStructure(6, [chart](const Point& y) { return chart.structure_at(y); }, smoothness_step);
}

Vec S6Chart::s2_curve(Complex zeta) const {
  // The opposite cross order conjugates the structure, so the curve flips too.
  const Complex z = order_ == CrossOrder::EtaCrossW ? zeta : std::conj(zeta);
  const double s = std::norm(z);
  Im7 w = Im7::Zero();
  w[0] = 2.0 * z.real() / (s + 1.0);
  w[1] = 2.0 * z.imag() / (s + 1.0);
  w[2] = (s - 1.0) / (s + 1.0);
  return from_sphere(w);
}

Im7 default_pole() { return Im7::Unit(6); }

ChartManifold s6_chart(const Im7& pole, double radius, CrossOrder order) {
  const S6Chart chart(pole, order);
  return ChartManifold(chart.structure(), Domain::ball(Vec::Zero(6), radius));
}

double Bump::operator()(const Point& x) const {
  const double q = (x - center).squaredNorm() / (width * width);
  if (q >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - q));
}

std::vector<PerturbationShape> default_shapes(int dim, int count, double radius) {
  std::vector<PerturbationShape> out;
  const std::vector<Vec> dirs = sphere_samples(dim, count, 17);
  std::uint64_t state = 0x5eed;
  for (int k = 0; k < count; ++k) {
    Mat pattern(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) pattern(i, j) = 2.0 * uniform01(state) - 1.0;
    pattern /= pattern.norm();
    out.push_back({Bump{0.4 * radius * dirs[k], radius}, pattern});
  }
  return out;
}

namespace {

// Denman-Beavers: y -> S^{1/2}, z -> S^{-1/2} for S = -B^2. Fixed sizes avoid
// heap traffic in the per-node structure evaluations of the solver.
template <typename M>
M inverse_sqrt(const M& s) {
  M y = s;
  M z = M::Identity(s.rows(), s.cols());
  for (int it = 0; it < 100; ++it) {
    const M yi = y.inverse();
    const M zi = z.inverse();
    const M y_next = 0.5 * (y + zi);
    z = 0.5 * (z + yi);
    const double change = (y_next - y).norm();
    y = y_next;
    if (!(change > 1e-15 * y.norm())) break;
  }
  return z;
}

}  // namespace

Mat retract(const Mat& b) {
  const int n = static_cast<int>(b.rows());
  const Mat s = -b * b;
  Mat z;
  if (n == 4) {
    z = inverse_sqrt<Eigen::Matrix4d>(s);
  } else if (n == 6) {
    z = inverse_sqrt<Eigen::Matrix<double, 6, 6>>(s);
  } else {
    z = inverse_sqrt<Mat>(s);
  }
  const Mat j = b * z;
  if (!j.allFinite() || (j * j + Mat::Identity(n, n)).norm() > 1e-10) {
    // Diagnose: a spectrum on the closed negative axis has no principal root.
    const Eigen::EigenSolver<Mat> es(s, false);
    for (const auto& lam : es.eigenvalues()) {
      if (lam.real() <= 0.0 && std::abs(lam.imag()) <= 1e-12 * (1.0 + s.norm())) {
        throw RetractionError("retraction: -B^2 has spectrum on the closed negative axis (tau too large)");
      }
    }
    throw RetractionError("retraction: square-root iteration did not converge (tau too large)");
  }
  return j;
}

AlmostComplexStructure perturbation_family(const AlmostComplexStructure& base,
                                           const std::vector<PerturbationShape>& shapes, const Vec& tau) {
  if (tau.size() != static_cast<Eigen::Index>(shapes.size())) {
    throw ConfigurationError("perturbation_family: tau and shapes differ in length");
  }
  for (const auto& s : shapes) {
    if (s.pattern.rows() != base.dim() || s.pattern.cols() != base.dim() || s.bump.center.size() != base.dim()) {
      throw ConfigurationError("perturbation_family: shape dimension mismatch");
    }
  }
  if (tau.isZero(0.0)) return base;
  auto field = [base, shapes, tau](const Point& x) -> Mat {
    const Mat j = base(x);
    Mat b = j;
    bool touched = false;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      const double beta = shapes[i].bump(x);
      if (beta == 0.0 || tau[i] == 0.0) continue;
      b += tau[i] * beta * (shapes[i].pattern + j * shapes[i].pattern * j);
      touched = true;
    }
    return touched ? retract(b) : j;
  };
  return AlmostComplexStructure(base.dim(), field, base.smoothness_step());
}

AlmostComplexStructure grid_structure(const Vec& lo, const Vec& hi, const std::vector<int>& shape,
                                      const std::vector<Mat>& samples) {
  const int d = static_cast<int>(lo.size());
  if (hi.size() != d || static_cast<int>(shape.size()) != d || d == 0) {
    throw ConfigurationError("grid_structure: lattice description mismatch");
  }
  std::size_t total = 1;
  for (int s : shape) {
    if (s < 2) throw ConfigurationError("grid_structure: each axis needs at least two samples");
    total *= static_cast<std::size_t>(s);
  }
  if (samples.size() != total) throw ConfigurationError("grid_structure: wrong number of samples");
  const int n = static_cast<int>(samples.front().rows());
  if (n != d) throw ConfigurationError("grid_structure: sample matrices must match the lattice dimension");
  for (const Mat& m : samples) {
    if (m.rows() != n || m.cols() != n) throw ConfigurationError("grid_structure: sample size mismatch");
  }
  auto field = [lo, hi, shape, samples, d, n](const Point& x) -> Mat {
    std::vector<int> base(d);
    std::vector<double> frac(d);
    for (int a = 0; a < d; ++a) {
      const double t = std::clamp((x[a] - lo[a]) / (hi[a] - lo[a]), 0.0, 1.0) * (shape[a] - 1);
      base[a] = std::min(static_cast<int>(std::floor(t)), shape[a] - 2);
      frac[a] = t - base[a];
    }
    Mat b = Mat::Zero(n, n);
    for (int corner = 0; corner < (1 << d); ++corner) {
      double weight = 1.0;
      std::size_t index = 0;
      std::size_t stride = 1;
      for (int a = 0; a < d; ++a) {
        const int bit = (corner >> a) & 1;
        weight *= bit ? frac[a] : 1.0 - frac[a];
        index += static_cast<std::size_t>(base[a] + bit) * stride;
        stride *= static_cast<std::size_t>(shape[a]);
      }
      if (weight != 0.0) b += weight * samples[index];
    }
    return retract(b);
  };
  return AlmostComplexStructure(n, field);
}

ChartManifold unit_disk() {
  return ChartManifold(AlmostComplexStructure::standard(2), Domain::ball(Vec::Zero(2), 1.0));
}

ChartManifold flat_box(double half_width, int dim) {
  return ChartManifold(AlmostComplexStructure::standard(dim), Domain::box(Vec::Zero(dim), half_width));
}

ChartManifold bump_r4(double eps, double domain_radius) {
  Vec c(4);
  c << 0.2, -0.1, 0.15, 0.05;
  Mat k = Mat::Zero(4, 4);
  k(0, 1) = k(1, 2) = k(2, 3) = k(3, 0) = 1.0;
  k(0, 2) = 0.5;
  const std::vector<PerturbationShape> shapes{{Bump{c, 1.0}, k}};
  return ChartManifold(perturbation_family(AlmostComplexStructure::standard(4), shapes, Vec::Constant(1, eps)),
                       Domain::ball(Vec::Zero(4), domain_radius), std::nullopt, SymplecticForm::standard(4));
}

std::vector<PerturbationShape> tame_r4_shapes() { return default_shapes(4, 3, 1.0); }

ChartManifold tame_r4(const Vec& tau) {
  return ChartManifold(perturbation_family(AlmostComplexStructure::standard(4), tame_r4_shapes(), tau),
                       Domain::ball(Vec::Zero(4), 1.0), std::nullopt, SymplecticForm::standard(4));
}

}  // namespace acx::gallery
