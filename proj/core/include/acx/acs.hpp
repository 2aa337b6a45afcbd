#pragma once

#include "acx/errors.hpp"
#include "acx/linalg.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace acx {

using MatrixField = std::function<Mat(const Point&)>;

/// A point-indexed field of 2n x 2n maps with J(p)^2 = -I.
class AlmostComplexStructure {
 public:
  AlmostComplexStructure(int dim, MatrixField eval, double smoothness_step = 1e-3,
                         bool constant = false);

  /// The constant structure J0 on R^dim.
  static AlmostComplexStructure standard(int dim);
  static AlmostComplexStructure constant_field(const Mat& j);

  int dim() const { return dim_; }
  double smoothness_step() const { return step_; }
  /// True when eval is known not to depend on the point.
  bool is_constant() const { return constant_; }
  Mat operator()(const Point& p) const { return (*eval_)(p); }
  const MatrixField& field() const { return *eval_; }

 private:
  int dim_;
  std::shared_ptr<const MatrixField> eval_;
  double step_;
  bool constant_;
};

class SymplecticForm {
 public:
  explicit SymplecticForm(MatrixField eval) : eval_(std::make_shared<MatrixField>(std::move(eval))) {}
  static SymplecticForm standard(int dim);
  Mat operator()(const Point& p) const { return (*eval_)(p); }

 private:
  std::shared_ptr<const MatrixField> eval_;
};

/// Chart domain: membership predicate plus a bounding box containing it.
class Domain {
 public:
  Domain(std::function<bool(const Point&)> contains, Vec lo, Vec hi, std::string description);

  /// Open ball.
  static Domain ball(const Vec& center, double radius);
  /// Open box center +- half_width.
  static Domain box(const Vec& center, const Vec& half_width);
  static Domain box(const Vec& center, double half_width);
  static Domain product(const Domain& a, const Domain& b);

  bool contains(const Point& p) const { return (*contains_)(p); }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  int dim() const { return static_cast<int>(lo_.size()); }
  const std::string& description() const { return description_; }

 private:
  std::shared_ptr<const std::function<bool(const Point&)>> contains_;
  Vec lo_;
  Vec hi_;
  std::string description_;
};

class ChartManifold {
 public:
  ChartManifold(AlmostComplexStructure structure, Domain domain,
                std::optional<MatrixField> norm = std::nullopt,
                std::optional<SymplecticForm> taming_form = std::nullopt);

  const AlmostComplexStructure& structure() const { return structure_; }
  const Domain& domain() const { return domain_; }
  int dim() const { return structure_.dim(); }
  bool has_custom_norm() const { return norm_.has_value(); }
  /// Positive-definite Gram matrix of the reference norm at p.
  Mat norm_matrix(const Point& p) const;
  double norm(const Point& p, const Vec& v) const;
  const std::optional<SymplecticForm>& taming_form() const { return taming_form_; }

  ChartManifold with_taming_form(SymplecticForm form) const;

 private:
  AlmostComplexStructure structure_;
  Domain domain_;
  std::optional<MatrixField> norm_;
  std::optional<SymplecticForm> taming_form_;
};

/// Up to `count` deterministic domain points (Halton over the bounding box,
/// filtered by membership). Throws DomainEmptyError when none is found.
std::vector<Point> sample_domain(const Domain& domain, int count, std::uint64_t seed);

struct StructureReport {
  double max_defect = 0.0;  ///< max ||J(p)^2 + I||_F over samples
  int samples = 0;
  bool pass = false;
};

StructureReport check_structure(const ChartManifold& m, int sample_count, double tol,
                                std::uint64_t seed = 0);

/// Directional derivative of J at p along a, 4th-order central differences.
Mat directional_derivative(const AlmostComplexStructure& j, const Point& p, const Vec& a);

/// N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] for the constant extensions of
/// xi and eta. D J comes from 4th-order coordinate partials at p, so the
/// result is exactly bilinear and antisymmetric; zero for constant fields.
/// With a domain, every stencil point p +- 2h e_k must lie inside it.
Vec nijenhuis(const AlmostComplexStructure& j, const Point& p, const Vec& xi, const Vec& eta,
              const Domain* domain = nullptr);

struct GeneralPositionReport {
  bool general = false;
  /// min over sampled xi of max over sampled eta of ||N(xi, eta)||
  double weakest_xi_strength = 0.0;
  Vec weakest_xi;
};

/// Sampled check that eta -> N(xi, eta) is nonzero for every sampled unit xi.
/// The xi samples start with the coordinate frame.
GeneralPositionReport general_position_report(const AlmostComplexStructure& j, const Point& p,
                                              int xi_samples, int eta_samples, double tol,
                                              const Domain* domain = nullptr,
                                              std::uint64_t seed = 0);

bool slightly_general_position(const AlmostComplexStructure& j, const Point& p, int xi_samples,
                               int eta_samples, double tol, const Domain* domain = nullptr,
                               std::uint64_t seed = 0);

/// min over sampled points of min over unit X of omega_p(X, J(p) X).
double taming_defect(const ChartManifold& m, int sample_count, std::uint64_t seed = 0);

}  // namespace acx
