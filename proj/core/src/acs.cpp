#include "acx/acs.hpp"

#include "acx/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace acx {

double operator_norm(const Mat& differential, const Mat* metric) {
  // sigma_max of G^{1/2} D through the 2x2 Gram matrix D^T G D.
  Eigen::Matrix2d gram = metric ? Eigen::Matrix2d(differential.transpose() * (*metric) * differential)
                                : Eigen::Matrix2d(differential.transpose() * differential);
  const double tr = gram(0, 0) + gram(1, 1);
  // tr^2/4 - det written without cancellation; conformal maps give exactly 0.
  const double half_gap = 0.5 * (gram(0, 0) - gram(1, 1));
  const double disc = std::sqrt(half_gap * half_gap + gram(0, 1) * gram(1, 0));
  return std::sqrt(std::max(0.0, 0.5 * tr + disc));
}

AlmostComplexStructure::AlmostComplexStructure(int dim, MatrixField eval, double smoothness_step,
                                               bool constant)
    : dim_(dim),
      eval_(std::make_shared<MatrixField>(std::move(eval))),
      step_(smoothness_step),
      constant_(constant) {
  if (dim <= 0 || dim % 2 != 0) {
    throw ConfigurationError("structure dimension must be even and positive");
  }
  if (!(smoothness_step > 0.0)) throw ConfigurationError("smoothness_step must be positive");
}

AlmostComplexStructure AlmostComplexStructure::standard(int dim) {
  return constant_field(standard_structure(dim));
}

AlmostComplexStructure AlmostComplexStructure::constant_field(const Mat& j) {
  if (j.rows() != j.cols()) throw ConfigurationError("structure matrix must be square");
  return AlmostComplexStructure(static_cast<int>(j.rows()), [j](const Point&) { return j; }, 1e-3,
                                true);
}

SymplecticForm SymplecticForm::standard(int dim) {
  const Mat omega = standard_symplectic(dim);
  return SymplecticForm([omega](const Point&) { return omega; });
}

Domain::Domain(std::function<bool(const Point&)> contains, Vec lo, Vec hi, std::string description)
    : contains_(std::make_shared<std::function<bool(const Point&)>>(std::move(contains))),
      lo_(std::move(lo)),
      hi_(std::move(hi)),
      description_(std::move(description)) {
  if (lo_.size() != hi_.size()) throw ConfigurationError("bounding box corners differ in length");
}

Domain Domain::ball(const Vec& center, double radius) {
  if (!(radius > 0.0)) throw ConfigurationError("ball radius must be positive");
  const Vec c = center;
  return Domain([c, radius](const Point& p) { return p.size() == c.size() && (p - c).norm() < radius; },
                c.array() - radius, c.array() + radius, "ball");
}

Domain Domain::box(const Vec& center, const Vec& half_width) {
  if ((half_width.array() <= 0.0).any()) throw ConfigurationError("box half widths must be positive");
  const Vec lo = center - half_width;
  const Vec hi = center + half_width;
  return Domain(
      [lo, hi](const Point& p) {
        return p.size() == lo.size() && (p.array() > lo.array()).all() && (p.array() < hi.array()).all();
      },
      lo, hi, "box");
}

Domain Domain::box(const Vec& center, double half_width) {
  return box(center, Vec::Constant(center.size(), half_width));
}

Domain Domain::product(const Domain& a, const Domain& b) {
  const int da = a.dim();
  const int db = b.dim();
  Vec lo(da + db), hi(da + db);
  lo << a.lo(), b.lo();
  hi << a.hi(), b.hi();
  return Domain(
      [a, b, da, db](const Point& p) {
        return p.size() == da + db && a.contains(p.head(da)) && b.contains(p.tail(db));
      },
      lo, hi, a.description() + "x" + b.description());
}

ChartManifold::ChartManifold(AlmostComplexStructure structure, Domain domain,
                             std::optional<MatrixField> norm,
                             std::optional<SymplecticForm> taming_form)
    : structure_(std::move(structure)),
      domain_(std::move(domain)),
      norm_(std::move(norm)),
      taming_form_(std::move(taming_form)) {
  if (domain_.dim() != structure_.dim()) {
    throw ConfigurationError("domain and structure dimensions differ");
  }
}

Mat ChartManifold::norm_matrix(const Point& p) const {
  if (norm_) return (*norm_)(p);
  return Mat::Identity(dim(), dim());
}

double ChartManifold::norm(const Point& p, const Vec& v) const {
  if (!norm_) return v.norm();
  return std::sqrt(std::max(0.0, v.dot((*norm_)(p) * v)));
}

ChartManifold ChartManifold::with_taming_form(SymplecticForm form) const {
  return ChartManifold(structure_, domain_, norm_, std::move(form));
}

std::vector<Point> sample_domain(const Domain& domain, int count, std::uint64_t seed) {
  std::vector<Point> out;
  out.reserve(count);
  HaltonSequence seq(domain.dim(), seed);
  const Vec width = domain.hi() - domain.lo();
  const long max_tries = 1000L + 200L * count;
  for (long tries = 0; static_cast<int>(out.size()) < count && tries < max_tries; ++tries) {
    Point p = domain.lo() + seq.next().cwiseProduct(width);
    if (domain.contains(p)) out.push_back(std::move(p));
  }
  if (out.empty()) throw DomainEmptyError("no sample point satisfies the domain (" + domain.description() + ")");
  return out;
}

StructureReport check_structure(const ChartManifold& m, int sample_count, double tol,
                                std::uint64_t seed) {
  if (sample_count < 1) throw ConfigurationError("sample_count must be >= 1");
  if (!(tol > 0.0)) throw ConfigurationError("tol must be positive");
  const auto points = sample_domain(m.domain(), sample_count, seed);
  const int n = m.dim();
  StructureReport report;
  report.samples = static_cast<int>(points.size());
  for (const auto& p : points) {
    const Mat j = m.structure()(p);
    const double defect = (j * j + Mat::Identity(n, n)).norm();
    report.max_defect = std::max(report.max_defect, std::isfinite(defect) ? defect : std::numeric_limits<double>::infinity());
  }
  report.pass = report.max_defect <= tol;
  return report;
}

Mat directional_derivative(const AlmostComplexStructure& j, const Point& p, const Vec& a) {
  const double h = j.smoothness_step();
  return (-j(p + 2 * h * a) + 8.0 * j(p + h * a) - 8.0 * j(p - h * a) + j(p - 2 * h * a)) / (12.0 * h);
}

namespace {

// J(p) and its coordinate partials; directional derivatives are linear
// combinations of these, so the tensor below is exactly bilinear.
struct Jet {
  Mat jp;
  std::vector<Mat> partials;

  Mat along(const Vec& a) const {
    Mat d = Mat::Zero(jp.rows(), jp.cols());
    for (Eigen::Index k = 0; k < a.size(); ++k) d += a[k] * partials[k];
    return d;
  }
};

Jet jet_at(const AlmostComplexStructure& j, const Point& p, const Domain* domain) {
  const int n = j.dim();
  if (p.size() != n) throw ConfigurationError("nijenhuis: point length differs from structure dimension");
  if (domain && !domain->contains(p)) throw BoundaryMarginError("point outside the domain");
  const double h = j.smoothness_step();
  if (domain) {
    for (int k = 0; k < n; ++k) {
      for (double s : {-2.0, -1.0, 1.0, 2.0}) {
        if (!domain->contains(p + s * h * Vec::Unit(n, k))) {
          throw BoundaryMarginError("finite-difference stencil leaves the domain");
        }
      }
    }
  }
  Jet jet{j(p), {}};
  if (j.is_constant()) return jet;
  for (int k = 0; k < n; ++k) jet.partials.push_back(directional_derivative(j, p, Vec::Unit(n, k)));
  return jet;
}

Vec nijenhuis_from_jet(const Jet& jet, const Vec& xi, const Vec& eta) {
  if (jet.partials.empty()) return Vec::Zero(xi.size());
  // Constant extensions X = xi, Y = eta:
  //   [JX, JY]  = (D_{JX} J) eta - (D_{JY} J) xi
  //   J[JX, Y]  = -J (D_eta J) xi
  //   J[X, JY]  =  J (D_xi J) eta
  //   [X, Y]    = 0
  const Vec jxi = jet.jp * xi;
  const Vec jeta = jet.jp * eta;
  return jet.along(jxi) * eta - jet.along(jeta) * xi + jet.jp * (jet.along(eta) * xi) -
         jet.jp * (jet.along(xi) * eta);
}

}  // namespace

Vec nijenhuis(const AlmostComplexStructure& j, const Point& p, const Vec& xi, const Vec& eta,
              const Domain* domain) {
  const int n = j.dim();
  if (p.size() != n || xi.size() != n || eta.size() != n) {
    throw ConfigurationError("nijenhuis: vector length differs from structure dimension");
  }
  return nijenhuis_from_jet(jet_at(j, p, domain), xi, eta);
}

GeneralPositionReport general_position_report(const AlmostComplexStructure& j, const Point& p,
                                              int xi_samples, int eta_samples, double tol,
                                              const Domain* domain, std::uint64_t seed) {
  const int n = j.dim();
  if (xi_samples < n || eta_samples < n) {
    throw ConfigurationError("general position check needs at least 2n samples of each kind");
  }
  std::vector<Vec> xis;
  for (int k = 0; k < n && static_cast<int>(xis.size()) < xi_samples; ++k) xis.push_back(Vec::Unit(n, k));
  for (auto& v : sphere_samples(n, xi_samples - static_cast<int>(xis.size()), seed)) xis.push_back(v);
  std::vector<Vec> etas;
  for (int k = 0; k < n; ++k) etas.push_back(Vec::Unit(n, k));
  for (auto& v : sphere_samples(n, std::max(0, eta_samples - n), seed + 7)) etas.push_back(v);

  const Jet jet = jet_at(j, p, domain);
  GeneralPositionReport report;
  report.weakest_xi_strength = std::numeric_limits<double>::infinity();
  for (const auto& xi : xis) {
    double strength = 0.0;
    for (const auto& eta : etas) strength = std::max(strength, nijenhuis_from_jet(jet, xi, eta).norm());
    if (strength < report.weakest_xi_strength) {
      report.weakest_xi_strength = strength;
      report.weakest_xi = xi;
    }
  }
  report.general = report.weakest_xi_strength > tol;
  return report;
}

bool slightly_general_position(const AlmostComplexStructure& j, const Point& p, int xi_samples,
                               int eta_samples, double tol, const Domain* domain,
                               std::uint64_t seed) {
  return general_position_report(j, p, xi_samples, eta_samples, tol, domain, seed).general;
}

double taming_defect(const ChartManifold& m, int sample_count, std::uint64_t seed) {
  if (!m.taming_form()) throw ConfigurationError("manifold carries no taming form");
  const auto points = sample_domain(m.domain(), sample_count, seed);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    const Mat q = (*m.taming_form())(p) * m.structure()(p);
    // min over unit X of X^T (omega J) X is the least eigenvalue of the symmetric part.
    const Mat sym = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> eig(sym, Eigen::EigenvaluesOnly);
    worst = std::min(worst, eig.eigenvalues().minCoeff());
  }
  return worst;
}

}  // namespace acx
