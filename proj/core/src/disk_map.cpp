#include "acx/disk_map.hpp"

#include "acx/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace acx {
namespace {

// Lagrange weights of the four nodes base..base+3 at fractional position u.
std::array<double, 4> cubic_weights(double u, int base) {
  std::array<double, 4> w{};
  for (int a = 0; a < 4; ++a) {
    double num = 1.0, den = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      num *= u - (base + b);
      den *= static_cast<double>(a - b);
    }
    w[a] = num / den;
  }
  return w;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

DiskMap::DiskMap(double radius, double spacing, int half_count, Mat values)
    : radius_(radius), spacing_(spacing), half_(half_count), values_(std::move(values)) {
  if (!(radius > 0.0) || !(spacing > 0.0) || half_count < 2) {
    throw ConfigurationError("DiskMap: invalid lattice geometry");
  }
  if (values_.cols() != static_cast<Eigen::Index>(side()) * side()) {
    throw ConfigurationError("DiskMap: value count does not match lattice");
  }
}

DiskMap DiskMap::sample(double radius, int resolution, int dim,
                        const std::function<Vec(Complex)>& fn, int ghost) {
  if (resolution < 2) throw ConfigurationError("DiskMap: resolution must be >= 2");
  const double h = radius / resolution;
  const int half = resolution + std::max(ghost, 2);
  const int side = 2 * half + 1;
  Mat values(dim, side * side);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      values.col(j * side + i) = fn(Complex((i - half) * h, (j - half) * h));
    }
  }
  return DiskMap(radius, h, half, std::move(values));
}

DiskMap DiskMap::constant(const Point& p, double radius, int resolution) {
  return sample(radius, resolution, static_cast<int>(p.size()), [&p](Complex) { return p; });
}

Vec DiskMap::dx(int i, int j) const {
  const int n = side();
  const double h = spacing_;
  if (i >= 2 && i + 2 < n) {
    return (-value(i + 2, j) + 8.0 * value(i + 1, j) - 8.0 * value(i - 1, j) + value(i - 2, j)) / (12.0 * h);
  }
  if (i >= 1 && i + 1 < n) return (value(i + 1, j) - value(i - 1, j)) / (2.0 * h);
  if (i == 0) return (value(1, j) - value(0, j)) / h;
  return (value(i, j) - value(i - 1, j)) / h;
}

Vec DiskMap::dy(int i, int j) const {
  const int n = side();
  const double h = spacing_;
  if (j >= 2 && j + 2 < n) {
    return (-value(i, j + 2) + 8.0 * value(i, j + 1) - 8.0 * value(i, j - 1) + value(i, j - 2)) / (12.0 * h);
  }
  if (j >= 1 && j + 1 < n) return (value(i, j + 1) - value(i, j - 1)) / (2.0 * h);
  if (j == 0) return (value(i, 1) - value(i, 0)) / h;
  return (value(i, j) - value(i, j - 1)) / h;
}

Mat DiskMap::center_derivative() const {
  Mat d(dim(), 2);
  d.col(0) = dx(half_, half_);
  d.col(1) = dy(half_, half_);
  return d;
}

Vec DiskMap::interpolate(Complex z, const std::function<Vec(int, int)>& node_value) const {
  const double u = z.real() / spacing_ + half_;
  const double v = z.imag() / spacing_ + half_;
  const int last = side() - 4;
  const int bi = std::clamp(static_cast<int>(std::floor(u)) - 1, 0, last);
  const int bj = std::clamp(static_cast<int>(std::floor(v)) - 1, 0, last);
  const auto wx = cubic_weights(u, bi);
  const auto wy = cubic_weights(v, bj);
  // Exact node hits skip the stencil; keeps f(0) bit-identical.
  if (std::abs(u - std::round(u)) < 1e-12 && std::abs(v - std::round(v)) < 1e-12) {
    const int i = static_cast<int>(std::round(u));
    const int j = static_cast<int>(std::round(v));
    if (i >= 0 && i < side() && j >= 0 && j < side()) return node_value(i, j);
  }
  Vec out = Vec::Zero(dim());
  for (int b = 0; b < 4; ++b) {
    Vec row = Vec::Zero(dim());
    for (int a = 0; a < 4; ++a) row += wx[a] * node_value(bi + a, bj + b);
    out += wy[b] * row;
  }
  return out;
}

Vec DiskMap::operator()(Complex z) const {
  return interpolate(z, [this](int i, int j) { return Vec(value(i, j)); });
}

Mat DiskMap::derivative(Complex z) const {
  Mat d(dim(), 2);
  d.col(0) = interpolate(z, [this](int i, int j) { return dx(i, j); });
  d.col(1) = interpolate(z, [this](int i, int j) { return dy(i, j); });
  return d;
}

DiskMap DiskMap::transformed(const std::function<Vec(const Vec&)>& fn) const {
  const Vec first = fn(values_.col(0));
  Mat out(first.size(), values_.cols());
  out.col(0) = first;
  for (Eigen::Index k = 1; k < values_.cols(); ++k) out.col(k) = fn(values_.col(k));
  return DiskMap(radius_, spacing_, half_, std::move(out));
}

void DiskMap::write_csv(std::ostream& out,
                        const std::function<double(int, int)>& local_residual) const {
  out << "x,y";
  for (int k = 0; k < dim(); ++k) out << ",f" << (k + 1);
  if (local_residual) out << ",residual_local";
  out << '\n';
  for (int j = 0; j < side(); ++j) {
    for (int i = 0; i < side(); ++i) {
      const Complex z = node(i, j);
      out << format_double(z.real()) << ',' << format_double(z.imag());
      for (int k = 0; k < dim(); ++k) out << ',' << format_double(values_(k, index(i, j)));
      if (local_residual) out << ',' << format_double(local_residual(i, j));
      out << '\n';
    }
  }
}

void DiskMap::write_csv(std::ostream& out) const { write_csv(out, nullptr); }

DiskMap DiskMap::read_csv(std::istream& in, double radius) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigurationError("DiskMap CSV: missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  int dim = 0;
  for (const auto& h : header) {
    if (!h.empty() && h[0] == 'f') ++dim;
  }
  if (header.size() < 3 || dim == 0) throw ConfigurationError("DiskMap CSV: bad header");
  std::vector<double> xs, ys;
  std::vector<Vec> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    if (static_cast<int>(cells.size()) < 2 + dim) throw ConfigurationError("DiskMap CSV: short row");
    xs.push_back(cells[0]);
    ys.push_back(cells[1]);
    Vec f(dim);
    for (int k = 0; k < dim; ++k) f[k] = cells[2 + k];
    rows.push_back(std::move(f));
  }
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows.size()))));
  if (side * side != static_cast<int>(rows.size()) || side < 5 || side % 2 == 0) {
    throw ConfigurationError("DiskMap CSV: rows do not form a square lattice");
  }
  const int half = side / 2;
  const double h = -xs[0] / half;
  Mat values(dim, side * side);
  for (int k = 0; k < side * side; ++k) values.col(k) = rows[k];
  return DiskMap(radius, h, half, std::move(values));
}

}  // namespace acx
