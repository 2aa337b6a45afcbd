#include "acx/errors.hpp"
#include "acx/solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace acx {
namespace {

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer make_buffer(std::size_t n) {
  return FftwBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// Plans and the transformed unit-spacing kernel for one lattice size.
struct ConvolutionPlan {
  int side = 0;
  int padded = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  FftwBuffer kernel_hat;
};

int padded_size(int side) {
  int p = 1;
  while (p < 2 * side - 1) p *= 2;
  return p;
}

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const ConvolutionPlan& plan_for(int side) {
  static std::map<int, std::unique_ptr<ConvolutionPlan>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto& slot = cache[side];
  if (slot) return *slot;
  auto plan = std::make_unique<ConvolutionPlan>();
  plan->side = side;
  plan->padded = padded_size(side);
  const int p = plan->padded;
  const std::size_t total = static_cast<std::size_t>(p) * p;
  FftwBuffer scratch = make_buffer(total);
  plan->kernel_hat = make_buffer(total);
  plan->forward = fftw_plan_dft_2d(p, p, scratch.get(), plan->kernel_hat.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  plan->backward = fftw_plan_dft_2d(p, p, scratch.get(), plan->kernel_hat.get(), FFTW_BACKWARD, FFTW_ESTIMATE);

  // K(m) = 1 / (pi (m_x + i m_y)) at unit spacing, punctured at the origin.
  for (std::size_t k = 0; k < total; ++k) scratch[k][0] = scratch[k][1] = 0.0;
  for (int my = -(side - 1); my <= side - 1; ++my) {
    for (int mx = -(side - 1); mx <= side - 1; ++mx) {
      if (mx == 0 && my == 0) continue;
      const std::complex<double> kval = 1.0 / (std::numbers::pi * std::complex<double>(mx, my));
      const int ix = (mx + p) % p;
      const int iy = (my + p) % p;
      scratch[static_cast<std::size_t>(iy) * p + ix][0] = kval.real();
      scratch[static_cast<std::size_t>(iy) * p + ix][1] = kval.imag();
    }
  }
  fftw_execute_dft(plan->forward, scratch.get(), plan->kernel_hat.get());
  slot = std::move(plan);
  return *slot;
}

}  // namespace

Mat cauchy_green(const Mat& phi, int side, double spacing) {
  if (phi.cols() != static_cast<Eigen::Index>(side) * side || phi.rows() % 2 != 0) {
    throw ConfigurationError("cauchy_green: data does not match lattice");
  }
  const ConvolutionPlan& plan = plan_for(side);
  const int p = plan.padded;
  const std::size_t total = static_cast<std::size_t>(p) * p;
  const double scale = spacing / static_cast<double>(total);  // h^2 / h from the kernel, 1/total from FFTW
  FftwBuffer a = make_buffer(total);
  FftwBuffer b = make_buffer(total);
  Mat out = Mat::Zero(phi.rows(), phi.cols());
  for (Eigen::Index c = 0; c + 1 < phi.rows(); c += 2) {
    if (phi.row(c).isZero(0.0) && phi.row(c + 1).isZero(0.0)) continue;
    for (std::size_t k = 0; k < total; ++k) a[k][0] = a[k][1] = 0.0;
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) {
        const Eigen::Index node = static_cast<Eigen::Index>(j) * side + i;
        a[static_cast<std::size_t>(j) * p + i][0] = phi(c, node);
        a[static_cast<std::size_t>(j) * p + i][1] = phi(c + 1, node);
      }
    }
    fftw_execute_dft(plan.forward, a.get(), b.get());
    for (std::size_t k = 0; k < total; ++k) {
      const double re = b[k][0] * plan.kernel_hat[k][0] - b[k][1] * plan.kernel_hat[k][1];
      const double im = b[k][0] * plan.kernel_hat[k][1] + b[k][1] * plan.kernel_hat[k][0];
      b[k][0] = re;
      b[k][1] = im;
    }
    fftw_execute_dft(plan.backward, b.get(), a.get());
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) {
        const Eigen::Index node = static_cast<Eigen::Index>(j) * side + i;
        out(c, node) = a[static_cast<std::size_t>(j) * p + i][0] * scale;
        out(c + 1, node) = a[static_cast<std::size_t>(j) * p + i][1] * scale;
      }
    }
  }
  return out;
}

Mat cauchy_green_direct(const Mat& phi, int side, double spacing) {
  if (phi.cols() != static_cast<Eigen::Index>(side) * side || phi.rows() % 2 != 0) {
    throw ConfigurationError("cauchy_green_direct: data does not match lattice");
  }
  Mat out = Mat::Zero(phi.rows(), phi.cols());
  const double area = spacing * spacing;
  for (int jz = 0; jz < side; ++jz) {
    for (int iz = 0; iz < side; ++iz) {
      const Eigen::Index target = static_cast<Eigen::Index>(jz) * side + iz;
      for (int j = 0; j < side; ++j) {
        for (int i = 0; i < side; ++i) {
          const Eigen::Index src = static_cast<Eigen::Index>(j) * side + i;
          if (src == target) continue;
          const std::complex<double> k =
              area / (std::numbers::pi * std::complex<double>((iz - i) * spacing, (jz - j) * spacing));
          for (Eigen::Index c = 0; c + 1 < phi.rows(); c += 2) {
            const std::complex<double> v = k * std::complex<double>(phi(c, src), phi(c + 1, src));
            out(c, target) += v.real();
            out(c + 1, target) += v.imag();
          }
        }
      }
    }
  }
  return out;
}

}  // namespace acx
