#pragma once

#include "acx/linalg.hpp"

#include <functional>
#include <iosfwd>
#include <string>

namespace acx {

/// Grid samples of a map from the closed radius-r disk into a chart.
///
/// Nodes live on a square lattice of spacing h centered at the origin, with
/// `half_count` nodes on each side of it; the lattice overhangs the disk so
/// that centered stencils exist at every node with |z| <= r. Node (i, j) sits
/// at z = (i - half_count) h + i (j - half_count) h.
class DiskMap {
 public:
  DiskMap(double radius, double spacing, int half_count, Mat values);

  /// Samples fn on a lattice of `resolution` nodes per radius with `ghost`
  /// extra layers outside the disk.
  static DiskMap sample(double radius, int resolution, int dim,
                        const std::function<Vec(Complex)>& fn, int ghost = 4);
  static DiskMap constant(const Point& p, double radius, int resolution = 8);

  double radius() const { return radius_; }
  double spacing() const { return spacing_; }
  int half_count() const { return half_; }
  int side() const { return 2 * half_ + 1; }
  int dim() const { return static_cast<int>(values_.rows()); }
  int node_count() const { return static_cast<int>(values_.cols()); }
  int index(int i, int j) const { return j * side() + i; }
  Complex node(int i, int j) const { return {(i - half_) * spacing_, (j - half_) * spacing_}; }
  bool in_disk(int i, int j) const { return std::abs(node(i, j)) <= radius_ * (1.0 + 1e-12); }
  bool in_open_disk(int i, int j) const { return std::abs(node(i, j)) < radius_ * (1.0 - 1e-12); }

  auto value(int i, int j) const { return values_.col(index(i, j)); }
  const Mat& values() const { return values_; }
  Point center_value() const { return values_.col(index(half_, half_)); }

  /// Node derivatives d/dx, d/dy (4th order where the stencil fits).
  Vec dx(int i, int j) const;
  Vec dy(int i, int j) const;
  /// Image of (d/dx, d/dy) at 0 as a 2n x 2 matrix.
  Mat center_derivative() const;

  /// Bicubic interpolation of the samples.
  Vec operator()(Complex z) const;
  /// 2n x 2 differential at z from interpolated node derivatives.
  Mat derivative(Complex z) const;

  /// Node-wise image under a map of the target (pushforward, products).
  DiskMap transformed(const std::function<Vec(const Vec&)>& fn) const;

  void write_csv(std::ostream& out, const std::function<double(int, int)>& local_residual) const;
  void write_csv(std::ostream& out) const;
  /// Reads the lattice back from write_csv output.
  static DiskMap read_csv(std::istream& in, double radius);

 private:
  Vec interpolate(Complex z, const std::function<Vec(int, int)>& node_value) const;

  double radius_;
  double spacing_;
  int half_;
  Mat values_;
};

}  // namespace acx
