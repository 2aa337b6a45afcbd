#pragma once

#include "acx/linalg.hpp"

#include <array>

namespace acx::octonion {

using Oct = std::array<double, 8>;
using Im7 = Eigen::Matrix<double, 7, 1>;

/// Cayley-Dickson doubling of the quaternions:
/// (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)); basis (1, e1, ..., e7),
/// the quaternion subalgebra is span(1, e1, e2, e3).
Oct multiply(const Oct& x, const Oct& y);
Oct conjugate(const Oct& x);
double norm(const Oct& x);

/// Structure constants c[i][j][k]: e_i e_j = sum_k c[i][j][k] e_k.
const std::array<std::array<std::array<double, 8>, 8>, 8>& table();

Oct embed(const Im7& x);
Im7 imaginary(const Oct& x);

/// Im(x y) for imaginary x, y.
Im7 cross(const Im7& x, const Im7& y);
/// 7x7 matrix of eta -> eta x w.
Eigen::Matrix<double, 7, 7> right_cross_matrix(const Im7& w);

}  // namespace acx::octonion
