#include "acx/octonion.hpp"

#include <cmath>

namespace acx::octonion {
namespace {

using Quat = std::array<double, 4>;

Quat qmul(const Quat& p, const Quat& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

Quat qconj(const Quat& q) { return {q[0], -q[1], -q[2], -q[3]}; }

Quat qsub(const Quat& p, const Quat& q) { return {p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3]}; }
Quat qadd(const Quat& p, const Quat& q) { return {p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]}; }

}  // namespace

Oct multiply(const Oct& x, const Oct& y) {
  const Quat a{x[0], x[1], x[2], x[3]}, b{x[4], x[5], x[6], x[7]};
  const Quat c{y[0], y[1], y[2], y[3]}, d{y[4], y[5], y[6], y[7]};
  const Quat lo = qsub(qmul(a, c), qmul(qconj(d), b));
  const Quat hi = qadd(qmul(d, a), qmul(b, qconj(c)));
  return {lo[0], lo[1], lo[2], lo[3], hi[0], hi[1], hi[2], hi[3]};
}

Oct conjugate(const Oct& x) {
  Oct out = x;
  for (int i = 1; i < 8; ++i) out[i] = -out[i];
  return out;
}

double norm(const Oct& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

const std::array<std::array<std::array<double, 8>, 8>, 8>& table() {
  static const auto t = [] {
    std::array<std::array<std::array<double, 8>, 8>, 8> out{};
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        Oct a{}, b{};
        a[i] = 1.0;
        b[j] = 1.0;
        const Oct p = multiply(a, b);
        for (int k = 0; k < 8; ++k) out[i][j][k] = p[k];
      }
    }
    return out;
  }();
  return t;
}

Oct embed(const Im7& x) {
  Oct out{};
  for (int i = 0; i < 7; ++i) out[i + 1] = x[i];
  return out;
}

Im7 imaginary(const Oct& x) {
  Im7 out;
  for (int i = 0; i < 7; ++i) out[i] = x[i + 1];
  return out;
}

Im7 cross(const Im7& x, const Im7& y) { return imaginary(multiply(embed(x), embed(y))); }

Eigen::Matrix<double, 7, 7> right_cross_matrix(const Im7& w) {
  Eigen::Matrix<double, 7, 7> m;
  for (int k = 0; k < 7; ++k) m.col(k) = cross(Im7::Unit(k), w);
  return m;
}

}  // namespace acx::octonion
