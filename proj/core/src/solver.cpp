#include "acx/solver.hpp"

#include "acx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace acx {
namespace {

struct Frame {
  Mat a;
  Mat a_inv;
};

// Columns a_1, J a_1, a_2, J a_2, ... with a_1 = v / |v|, so A^{-1} J(p) A = J0.
Frame frame_at(const Mat& j, const Vec& v) {
  const int n = static_cast<int>(j.rows());
  Mat a(n, n);
  int filled = 0;
  auto push = [&](const Vec& u) {
    a.col(filled++) = u;
    a.col(filled++) = j * u;
  };
  push(v / v.norm());
  while (filled < n) {
    const auto basis = a.leftCols(filled);
    const Eigen::HouseholderQR<Mat> qr(basis);
    const Mat q = qr.householderQ() * Mat::Identity(n, filled);
    Vec best;
    double best_norm = -1.0;
    for (int k = 0; k < n; ++k) {
      const Vec e = Vec::Unit(n, k);
      const Vec r = e - q * (q.transpose() * e);
      if (r.norm() > best_norm) {
        best_norm = r.norm();
        best = r / r.norm();
      }
    }
    push(best);
  }
  return {a, a.inverse()};
}

// Smooth partition: 1 for rho <= r1, 0 for rho >= r2.
double cutoff(double rho, double r1, double r2) {
  if (rho <= r1) return 1.0;
  if (rho >= r2) return 0.0;
  const double s = (rho - r1) / (r2 - r1);
  const auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = psi(1.0 - s);
  return a / (a + psi(s));
}

struct Lattice {
  double h;
  int half;
  int side;
  Complex node(int i, int j) const { return {(i - half) * h, (j - half) * h}; }
  int index(int i, int j) const { return j * side + i; }
};

Vec d4x(const Mat& g, const Lattice& lat, int i, int j) {
  return (-g.col(lat.index(i + 2, j)) + 8.0 * g.col(lat.index(i + 1, j)) - 8.0 * g.col(lat.index(i - 1, j)) +
          g.col(lat.index(i - 2, j))) /
         (12.0 * lat.h);
}

Vec d4y(const Mat& g, const Lattice& lat, int i, int j) {
  return (-g.col(lat.index(i, j + 2)) + 8.0 * g.col(lat.index(i, j + 1)) - 8.0 * g.col(lat.index(i, j - 1)) +
          g.col(lat.index(i, j - 2))) /
         (12.0 * lat.h);
}

enum class AttemptStatus { Converged, Diverged, Stalled };

struct Attempt {
  AttemptStatus status = AttemptStatus::Diverged;
  int iterations = 0;
  Mat values;  // chart values p + A g
  Lattice lattice{};
};

Attempt picard_attempt(const ChartManifold& m, const Point& p, const Vec& v, double radius,
                       const SolverConfig& cfg) {
  const int n = m.dim();
  const int N = cfg.grid_resolution;
  const double h = radius / N;
  // chi = 1 up to r1, covering every stencil used by the residual; the margin
  // only depends on N for coarse lattices, so refinements solve one system.
  const double r1 = radius * (1.0 + std::max(0.1, 2.0 / N));
  const double r2 = r1 + 0.5 * radius;
  Lattice lat{h, static_cast<int>(std::ceil(r2 / h)) + 3, 0};
  lat.side = 2 * lat.half + 1;
  const int nodes = lat.side * lat.side;

  const Mat jp = m.structure()(p);
  const Frame frame = frame_at(jp, v);
  const Vec vt = frame.a_inv * v;
  const Mat j0 = standard_structure(n);
  const Mat eye = Mat::Identity(n, n);

  Mat seed(n, nodes);
  std::vector<double> chi(nodes, 0.0);
  std::vector<int> active;
  for (int j = 0; j < lat.side; ++j) {
    for (int i = 0; i < lat.side; ++i) {
      const int k = lat.index(i, j);
      const Complex z = lat.node(i, j);
      seed.col(k) = complex_scale(z, vt);
      chi[k] = cutoff(std::abs(z), r1, r2);
      if (chi[k] > 0.0) active.push_back(k);
    }
  }

  Attempt out;
  out.lattice = lat;
  Mat g = seed;
  if (!m.structure().is_constant()) {
    const double scale = 1.0 + vt.norm();
    const double picard_tol = std::max(1e-2 * cfg.tol * h * scale, 1e-14 * scale * radius);
    const double blowup = 1e3 * scale * (radius + 1.0);
    const int center = lat.index(lat.half, lat.half);
    double previous = std::numeric_limits<double>::infinity();
    int slow_steps = 0;
    out.status = AttemptStatus::Stalled;
    for (int it = 1; it <= cfg.max_iterations; ++it) {
      Mat phi = Mat::Zero(n, nodes);
      bool singular = false;
      for (int k : active) {
        const int i = k % lat.side;
        const int j = k / lat.side;
        const Mat jt = frame.a_inv * m.structure()(p + frame.a * g.col(k)) * frame.a;
        const Mat x = j0 * jt;
        const Eigen::PartialPivLU<Mat> lu(eye - x);
        const Mat q = (eye + x) * lu.inverse();
        if (!q.allFinite() || q.norm() > 1e3) {
          singular = true;
          break;
        }
        const Vec dg = 0.5 * (d4x(g, lat, i, j) - j0 * d4y(g, lat, i, j));
        phi.col(k) = chi[k] * (q * dg);
      }
      if (singular) {
        out.status = AttemptStatus::Diverged;
        out.iterations = it;
        break;
      }
      const Mat t = cauchy_green(phi, lat.side, h);
      const Vec t0 = t.col(center);
      const Vec c = d4x(t, lat, lat.half, lat.half);
      Mat next(n, nodes);
      double delta = 0.0;
      for (int j = 0; j < lat.side; ++j) {
        for (int i = 0; i < lat.side; ++i) {
          const int k = lat.index(i, j);
          const Complex z = lat.node(i, j);
          next.col(k) = seed.col(k) + t.col(k) - t0 - complex_scale(z, c);
          if (std::abs(z) <= r1) delta = std::max(delta, (next.col(k) - g.col(k)).lpNorm<Eigen::Infinity>());
        }
      }
      g = std::move(next);
      out.iterations = it;
      if (!std::isfinite(delta) || delta > blowup) {
        out.status = AttemptStatus::Diverged;
        break;
      }
      if (delta <= picard_tol) {
        out.status = AttemptStatus::Converged;
        break;
      }
      slow_steps = delta > 0.9 * previous ? slow_steps + 1 : 0;
      if (slow_steps >= 3 && it > 6) {
        // Rounding floor or non-contraction; the residual decides which.
        out.status = delta < 1e-9 * scale * radius ? AttemptStatus::Converged : AttemptStatus::Stalled;
        break;
      }
      previous = delta;
    }
  } else {
    out.status = AttemptStatus::Converged;
  }

  out.values.resize(n, nodes);
  for (int k = 0; k < nodes; ++k) out.values.col(k) = p + frame.a * g.col(k);
  return out;
}

}  // namespace

double local_residual(const ChartManifold& m, const DiskMap& f, int i, int j) {
  if (!f.in_open_disk(i, j) || i < 1 || j < 1 || i + 1 >= f.side() || j + 1 >= f.side()) return 0.0;
  const double h = f.spacing();
  const Vec fx = (f.value(i + 1, j) - f.value(i - 1, j)) / (2.0 * h);
  const Vec fy = (f.value(i, j + 1) - f.value(i, j - 1)) / (2.0 * h);
  const Mat jf = m.structure()(f.value(i, j));
  return (fy - jf * fx).norm() / (fx.norm() + 1.0);
}

double residual(const ChartManifold& m, const DiskMap& f) {
  double worst = 0.0;
  for (int j = 0; j < f.side(); ++j) {
    for (int i = 0; i < f.side(); ++i) {
      if (!f.in_open_disk(i, j)) continue;
      const double r = local_residual(m, f, i, j);
      worst = std::max(worst, std::isfinite(r) ? r : std::numeric_limits<double>::infinity());
    }
  }
  return worst;
}

DiskMap solve_local_disk(const ChartManifold& m, const Point& p, const Vec& v, double r,
                         const SolverConfig& cfg, SolveStats* stats) {
  if (p.size() != m.dim() || v.size() != m.dim()) {
    throw ConfigurationError("solve_local_disk: point or velocity has wrong dimension");
  }
  if (!m.domain().contains(p)) throw DomainError("solve_local_disk: center outside the domain");
  if (!(v.norm() > 0.0)) throw ConfigurationError("solve_local_disk: velocity must be nonzero");
  if (!(r > 0.0)) throw ConfigurationError("solve_local_disk: radius must be positive");
  if (!(cfg.tol > 0.0) || !(cfg.shrink_factor > 0.0 && cfg.shrink_factor < 1.0) || cfg.grid_resolution < 4) {
    throw ConfigurationError("solve_local_disk: invalid solver configuration");
  }

  double radius = r;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int shrink = 0; shrink <= cfg.max_shrinks; ++shrink, radius *= cfg.shrink_factor) {
    const Attempt attempt = picard_attempt(m, p, v, radius, cfg);
    if (attempt.status == AttemptStatus::Diverged) continue;
    DiskMap disk(radius, attempt.lattice.h, attempt.lattice.half, attempt.values);

    double min_escape = std::numeric_limits<double>::infinity();
    for (int j = 0; j < disk.side(); ++j) {
      for (int i = 0; i < disk.side(); ++i) {
        if (!disk.in_disk(i, j)) continue;
        if (!m.domain().contains(disk.value(i, j))) min_escape = std::min(min_escape, std::abs(disk.node(i, j)));
      }
    }
    if (std::isfinite(min_escape)) {
      double valid = 0.0;
      for (int j = 0; j < disk.side(); ++j) {
        for (int i = 0; i < disk.side(); ++i) {
          const double rho = std::abs(disk.node(i, j));
          if (rho < min_escape) valid = std::max(valid, rho);
        }
      }
      std::ostringstream msg;
      msg << "disk image leaves the domain at parameter radius " << min_escape << " (requested " << radius << ")";
      throw DomainEscapeError(msg.str(), valid);
    }

    const double res = residual(m, disk);
    best_residual = std::min(best_residual, res);
    if (res <= cfg.tol) {
      if (stats) *stats = {attempt.iterations, shrink, res};
      return disk;
    }
  }
  std::ostringstream msg;
  msg << "pseudoholomorphic disk solve did not converge after " << cfg.max_shrinks
      << " radius reductions; best residual " << best_residual;
  throw ConvergenceError(msg.str(), best_residual);
}

DiskFamily::DiskFamily(ChartManifold m, Point p, double r, SolverConfig cfg)
    : m_(std::move(m)), p_(std::move(p)), r_(r), cfg_(cfg) {
  // Probe the coordinate directions; halve the ball until all of them solve
  // at full radius inside the domain.
  SolverConfig strict = cfg_;
  strict.max_shrinks = 0;
  const int n = m_.dim();
  double ball = 1.0;
  for (int attempt = 0; attempt < 12; ++attempt, ball *= 0.5) {
    double lip = 0.0;
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      for (double sign : {1.0, -1.0}) {
        const Vec v = sign * ball * Vec::Unit(n, k);
        try {
          const DiskMap f = solve_local_disk(m_, p_, v, r_, strict);
          double sup = 0.0;
          for (int j = 0; j < f.side(); ++j)
            for (int i = 0; i < f.side(); ++i)
              if (f.in_disk(i, j)) sup = std::max(sup, (f.value(i, j) - p_).norm());
          lip = std::max(lip, sup / ball);
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      ball_radius_ = ball;
      lipschitz_ = lip;
      return;
    }
  }
}

DiskMap DiskFamily::operator()(const Vec& v) const {
  if (v.norm() == 0.0) return DiskMap::constant(p_, r_, cfg_.grid_resolution);
  return solve_local_disk(m_, p_, v, r_, cfg_);
}

Mat DiskFamily::velocity_jacobian(Complex zeta, double step) const {
  const int n = m_.dim();
  Mat jac(n, n);
  for (int k = 0; k < n; ++k) {
    const Vec e = step * Vec::Unit(n, k);
    jac.col(k) = ((*this)(e)(zeta) - (*this)(-e)(zeta)) / (2.0 * step);
  }
  return jac;
}

RadiusResult max_disk_radius(const ChartManifold& m, const Point& p, const Vec& v,
                             const SolverConfig& cfg, const RadiusSearchConfig& search) {
  RadiusResult result;
  if (!(v.norm() > 0.0)) {
    result.failed = true;
    result.diagnostic = "zero velocity";
    return result;
  }
  SolverConfig strict = cfg;
  strict.max_shrinks = 0;
  std::string last_error;
  auto ok = [&](double r) {
    try {
      solve_local_disk(m, p, v, r, strict);
      return true;
    } catch (const Error& e) {
      last_error = e.what();
      return false;
    }
  };

  double lo = 0.0;
  double hi = 0.0;
  double r = search.initial_radius;
  if (ok(r)) {
    lo = r;
    while (true) {
      const double next = std::min(2.0 * lo, search.cap);
      if (next <= lo) {
        result.radius = lo;
        result.cap_limited = true;
        result.diagnostic = "search cap reached";
        return result;
      }
      if (!ok(next)) {
        hi = next;
        break;
      }
      lo = next;
    }
  } else {
    hi = r;
    while (true) {
      r *= 0.5;
      if (r < 1e-9) {
        result.failed = true;
        result.diagnostic = "no radius solves: " + last_error;
        return result;
      }
      if (ok(r)) {
        lo = r;
        break;
      }
      hi = r;
    }
  }
  while (hi - lo > search.rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  result.radius = lo;
  return result;
}

}  // namespace acx
