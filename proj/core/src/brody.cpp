#include "acx/brody.hpp"

#include "acx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace acx {
namespace {

double norm_of(const ChartManifold& m, const Mat& d, const Vec& at) {
  if (!m.has_custom_norm()) return operator_norm(d);
  const Mat g = m.norm_matrix(at);
  return operator_norm(d, &g);
}

// Clamps z into the lattice square of f so interpolation never extrapolates.
Complex clamp_to_lattice(const DiskMap& f, Complex z) {
  const double edge = f.half_count() * f.spacing();
  return {std::clamp(z.real(), -edge, edge), std::clamp(z.imag(), -edge, edge)};
}

struct NodeNorms {
  std::vector<Complex> z;
  std::vector<double> norm;
};

NodeNorms node_norms(const ChartManifold& m, const DiskMap& f) {
  NodeNorms out;
  for (int j = 0; j < f.side(); ++j) {
    for (int i = 0; i < f.side(); ++i) {
      if (!f.in_open_disk(i, j)) continue;
      out.z.push_back(f.node(i, j));
      out.norm.push_back(differential_norm_at_node(m, f, i, j));
    }
  }
  return out;
}

// s(t) = max over |u| < t r of (1 - |u|^2 / (t r)^2) t |f_*(u)|, with the maximizer.
std::pair<double, Complex> scaled_profile_max(const NodeNorms& nodes, double r, double t) {
  const double tr2 = (t * r) * (t * r);
  double best = 0.0;
  Complex arg{0.0, 0.0};
  for (std::size_t k = 0; k < nodes.z.size(); ++k) {
    const double u2 = std::norm(nodes.z[k]);
    if (u2 >= tr2) continue;
    const double value = (1.0 - u2 / tr2) * t * nodes.norm[k];
    if (value > best) {
      best = value;
      arg = nodes.z[k];
    }
  }
  return {best, arg};
}

}  // namespace

double differential_norm(const ChartManifold& m, const DiskMap& f, Complex z) {
  return norm_of(m, f.derivative(z), f(z));
}

double differential_norm_at_node(const ChartManifold& m, const DiskMap& f, int i, int j) {
  Mat d(f.dim(), 2);
  d.col(0) = f.dx(i, j);
  d.col(1) = f.dy(i, j);
  return norm_of(m, d, f.value(i, j));
}

NormProfile sup_norm_profile(const ChartManifold& m, const DiskMap& f) {
  NormProfile profile;
  profile.radius = f.radius();
  const double r2 = f.radius() * f.radius();
  for (int j = 0; j < f.side(); ++j) {
    for (int i = 0; i < f.side(); ++i) {
      if (!f.in_open_disk(i, j)) continue;
      const Complex z = f.node(i, j);
      const double value = (1.0 - std::norm(z) / r2) * differential_norm_at_node(m, f, i, j);
      profile.samples.push_back({z, value});
      if (value > profile.max) {
        profile.max = value;
        profile.argmax = z;
      }
    }
  }
  return profile;
}

ReparamResult brody_reparametrize(const ChartManifold& m, const DiskMap& f, double c, int resolution) {
  if (!(c > 0.0)) throw ConfigurationError("brody_reparametrize: c must be positive");
  const double center = differential_norm(m, f, Complex(0.0, 0.0));
  // Relative slack absorbs rounding when f is rescaled to center norm exactly c.
  if (center < c * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "brody_reparametrize: center norm " << center << " is below c = " << c;
    throw PreconditionError(msg.str());
  }
  const double r = f.radius();
  const NodeNorms nodes = node_norms(m, f);
  const double target = 0.5 * c;

  // s is nondecreasing in t with s(0+) = 0 and s(1) >= c.
  double lo = 0.0;
  double hi = 1.0;
  if (!(scaled_profile_max(nodes, r, hi).first >= target)) {
    throw StagnationError("brody_reparametrize: profile never reaches c/2", lo, hi);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (scaled_profile_max(nodes, r, mid).first >= target ? hi : lo) = mid;
  }
  const double t = hi;
  const auto [s_value, u_star] = scaled_profile_max(nodes, r, t);
  if (std::abs(s_value - target) > 1e-2 * target) {
    throw StagnationError("brody_reparametrize: bisection bracket does not straddle c/2", lo, hi);
  }

  // Recenter f_t(z) = f(t z) at z* = u*/t; the invariant profile keeps its max at 0.
  const Complex a = u_star / (t * r);
  const DiskAutomorphism alpha(a, 0.0);
  const int res = resolution > 0 ? resolution : std::max(8, static_cast<int>(std::lround(r / f.spacing())));
  DiskMap h = DiskMap::sample(r, res, f.dim(), [&](Complex zeta) -> Vec {
    const Complex w = zeta / r;
    const Complex z = std::abs(w) < 1.0 ? alpha.inverse(w) : w;
    return f(clamp_to_lattice(f, t * r * z));
  });

  ReparamResult result{h, t, alpha, differential_norm(m, h, Complex(0.0, 0.0)), 0.0};
  const double r2 = r * r;
  for (int j = 0; j < h.side(); ++j) {
    for (int i = 0; i < h.side(); ++i) {
      if (!h.in_open_disk(i, j)) continue;
      const double bound = target * r2 / (r2 - std::norm(h.node(i, j)));
      result.worst_bound_ratio = std::max(result.worst_bound_ratio, differential_norm_at_node(m, h, i, j) / bound);
    }
  }
  return result;
}

SchwarzReport schwarz_bound_check(const ChartManifold& m, const std::vector<DiskMap>& disks, double c) {
  SchwarzReport report;
  for (const auto& f : disks) {
    const NormProfile p = sup_norm_profile(m, f);
    report.fitted_c = std::max(report.fitted_c, f.radius() * p.max);
  }
  report.pass = report.fitted_c <= c;
  return report;
}

ProbeReport rescaling_probe(const ChartManifold& m, const DiskGenerator& disks, int steps, const ProbeConfig& cfg) {
  ProbeReport report;
  // Fixed comparison lattice in the closed compare disk.
  const double hc = cfg.compare_radius / cfg.compare_resolution;
  for (int j = -cfg.compare_resolution; j <= cfg.compare_resolution; ++j)
    for (int i = -cfg.compare_resolution; i <= cfg.compare_resolution; ++i)
      if (i * i + j * j <= cfg.compare_resolution * cfg.compare_resolution) report.compare_points.emplace_back(i * hc, j * hc);

  std::vector<std::vector<Vec>> history;
  std::vector<double> radii;
  for (int k = 0; k < steps; ++k) {
    const std::optional<DiskMap> fk = disks(k);
    if (!fk) {
      if (k == 0) {
        report.precondition_failed = true;
        report.diagnostic = "generator produced no admissible disk (derivatives bounded)";
      } else {
        report.partial = true;
        report.diagnostic = "generator exhausted after " + std::to_string(k) + " steps";
      }
      break;
    }
    const double ck = differential_norm(m, *fk, Complex(0.0, 0.0));
    const double rk = 0.5 * ck * fk->radius();
    const int res = std::max(8, static_cast<int>(std::ceil(cfg.resolution * rk)));
    ProbeRow row;
    row.k = k;
    row.r_k = rk;
    row.center_norm = ck;
    try {
      if (!(ck > 0.0)) throw PreconditionError("center derivative vanishes");
      const DiskMap big = DiskMap::sample(rk, res, fk->dim(), [&](Complex z) -> Vec {
        return (*fk)(clamp_to_lattice(*fk, 2.0 * z / ck));
      });
      const ReparamResult g = brody_reparametrize(m, big, 2.0, res);
      row.rescaled_center_norm = g.achieved_center_norm;
      std::vector<Vec> values;
      for (const Complex& z : report.compare_points) values.push_back(g.h(clamp_to_lattice(g.h, z)));
      double diff = history.empty() ? std::numeric_limits<double>::quiet_NaN() : 0.0;
      const int first = std::max(0, static_cast<int>(history.size()) - cfg.window);
      for (int prev = first; prev < static_cast<int>(history.size()); ++prev) {
        const double reach = 0.999 * std::min(rk, radii[prev]);
        for (std::size_t q = 0; q < values.size(); ++q) {
          if (std::abs(report.compare_points[q]) > reach) continue;
          diff = std::max(diff, (values[q] - history[prev][q]).norm());
        }
      }
      row.trailing_cauchy_diff = diff;
      history.push_back(values);
      radii.push_back(rk);
      report.last_values = std::move(values);
    } catch (const PreconditionError& e) {
      report.precondition_failed = true;
      report.diagnostic = e.what();
      break;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace acx
