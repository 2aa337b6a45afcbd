#pragma once

#include <Eigen/Dense>

#include <complex>

namespace acx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Chart coordinates of a point of M^{2n}.
using Point = Eigen::VectorXd;

struct TangentVector {
  Point base;
  Vec dir;
};

/// The standard structure on R^{2n}: e_{2k} -> e_{2k+1}, e_{2k+1} -> -e_{2k}.
inline Mat standard_structure(int dim) {
  Mat j = Mat::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; k += 2) {
    j(k + 1, k) = 1.0;
    j(k, k + 1) = -1.0;
  }
  return j;
}

/// Standard symplectic matrix with omega(X, J0 X) = |X|^2.
inline Mat standard_symplectic(int dim) { return standard_structure(dim).transpose(); }

/// Multiplication of a real 2n-vector by a complex scalar, R^{2n} = C^n via J0.
inline Vec complex_scale(Complex c, const Vec& v) {
  Vec out(v.size());
  for (Eigen::Index k = 0; k + 1 < v.size(); k += 2) {
    const Complex w = c * Complex(v[k], v[k + 1]);
    out[k] = w.real();
    out[k + 1] = w.imag();
  }
  return out;
}

/// Largest singular value of a 2n x 2 differential, optionally in the metric G.
double operator_norm(const Mat& differential, const Mat* metric = nullptr);

}  // namespace acx
