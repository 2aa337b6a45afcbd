#include "commands.hpp"

#include "manifold_spec.hpp"

#include "acx/brody.hpp"
#include "acx/errors.hpp"
#include "acx/gallery.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace acx::cli {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Runs body and maps library exceptions onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigurationError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainEmptyError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ReachabilityError& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kFailure;
  } catch (const Error& e) {
    err << "failure: " << e.what() << '\n';
    return kFailure;
  }
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& content, std::ostream& out) {
  if (cfg.output_dir.empty()) {
    out << content;
    return;
  }
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / name;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigurationError("cannot write " + path.string());
  file << content;
}

Point point_or_center(const ChartManifold& m, const std::optional<std::string>& text) {
  const Point p = text ? parse_vector(*text) : Point(0.5 * (m.domain().lo() + m.domain().hi()));
  if (p.size() != m.dim()) throw ConfigurationError("point has the wrong dimension");
  if (!m.domain().contains(p)) throw DomainError("point lies outside the domain");
  return p;
}

Vec direction(const ChartManifold& m, const std::string& text) {
  const Vec v = parse_vector(text);
  if (v.size() != m.dim()) throw ConfigurationError("direction has the wrong dimension");
  if (!(v.norm() > 0.0)) throw ConfigurationError("direction must be nonzero");
  return v;
}

// Max |N(e_i, e_j)| over coordinate pairs at p.
double nijenhuis_max(const ChartManifold& m, const Point& p) {
  double worst = 0.0;
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      worst = std::max(worst, nijenhuis(m.structure(), p, Vec::Unit(n, i), Vec::Unit(n, j), &m.domain()).norm());
  return worst;
}

double sampled_nijenhuis_max(const ChartManifold& m, int count, std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& p : sample_domain(m.domain(), count, seed)) {
    try {
      worst = std::max(worst, nijenhuis_max(m, p));
    } catch (const BoundaryMarginError&) {
    }
  }
  return worst;
}

std::optional<DiskMap> checked_disk(const ChartManifold& m, DiskMap f) {
  for (int j = 0; j < f.side(); ++j)
    for (int i = 0; i < f.side(); ++i)
      if (f.in_disk(i, j) && !m.domain().contains(f.value(i, j))) return std::nullopt;
  return f;
}

}  // namespace

void validate(const RunConfig& cfg) {
  const auto& s = cfg.solver;
  const auto& e = cfg.estimator;
  if (!(s.tol > 0.0) || s.grid_resolution < 4 || s.max_iterations < 1 || !(s.shrink_factor > 0.0 && s.shrink_factor < 1.0) ||
      s.max_shrinks < 0) {
    throw ConfigurationError("solver configuration must have positive tolerances and budgets");
  }
  if (!(e.junction_tol > 0.0) || !(e.hit_rel_tol > 0.0) || e.trial_budget < 1 || e.waypoints < 0 ||
      !(e.radius_budget > 0.0) || !(e.solver.tol > 0.0) || e.solver.grid_resolution < 4) {
    throw ConfigurationError("estimator configuration must have positive tolerances and budgets");
  }
  if (!(cfg.radius_search.rel_tol > 0.0) || !(cfg.radius_search.initial_radius > 0.0)) {
    throw ConfigurationError("radius search configuration must be positive");
  }
}

int cmd_check(const std::string& spec_path, int samples, double tol, const RunConfig& cfg, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    if (samples < 1 || !(tol > 0.0)) throw ConfigurationError("--samples and --tol must be positive");
    const ManifoldSpec spec = load_spec(spec_path);
    const ChartManifold m = build_manifold(spec);
    const StructureReport structure = check_structure(m, samples, tol, cfg.seed);
    std::ostringstream csv;
    csv << "check,value,threshold,result\n";
    csv << "structure_defect," << num(structure.max_defect) << ',' << num(tol) << ','
        << (structure.pass ? "pass" : "fail") << '\n';
    bool ok = structure.pass;
    if (m.taming_form()) {
      const double defect = taming_defect(m, samples, cfg.seed);
      csv << "taming_defect," << num(defect) << ",0," << (defect > 0.0 ? "pass" : "fail") << '\n';
      ok = ok && defect > 0.0;
    }
    const double nmax = sampled_nijenhuis_max(m, std::min(samples, 20), cfg.seed);
    csv << "nijenhuis_nonzero," << num(nmax) << ",1e-08," << (nmax > 1e-8 ? "yes" : "no") << '\n';
    emit(cfg, "check.csv", csv.str(), out);
    return ok ? kSuccess : kFailure;
  });
}

int cmd_nijenhuis(const std::string& spec_path, const std::optional<std::string>& at, int samples, double tol,
                  const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    if (samples < 1 || !(tol > 0.0)) throw ConfigurationError("--samples and --tol must be positive");
    const ChartManifold m = build_manifold(load_spec(spec_path));
    const Point p = point_or_center(m, at);
    const int n = m.dim();
    std::ostringstream csv;
    csv << "i,j,norm";
    for (int k = 0; k < n; ++k) csv << ",n" << (k + 1);
    csv << '\n';
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Vec v = nijenhuis(m.structure(), p, Vec::Unit(n, i), Vec::Unit(n, j), &m.domain());
        csv << i << ',' << j << ',' << num(v.norm());
        for (int k = 0; k < n; ++k) csv << ',' << num(v[k]);
        csv << '\n';
      }
    }
    emit(cfg, "nijenhuis.csv", csv.str(), out);
    const bool general = slightly_general_position(m.structure(), p, samples, samples, tol, &m.domain(), cfg.seed);
    err << "slightly general position at p: " << (general ? "yes" : "no") << '\n';
    return kSuccess;
  });
}

int cmd_disk(const std::string& spec_path, const std::optional<std::string>& at, const std::string& dir,
             double radius, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const ChartManifold m = build_manifold(load_spec(spec_path));
    const Point p = point_or_center(m, at);
    const Vec v = direction(m, dir);
    SolveStats stats;
    const DiskMap f = solve_local_disk(m, p, v, radius, cfg.solver, &stats);
    std::ostringstream csv;
    f.write_csv(csv, [&](int i, int j) { return local_residual(m, f, i, j); });
    emit(cfg, "disk.csv", csv.str(), out);
    err << "radius " << num(f.radius()) << ", residual " << num(stats.residual) << ", iterations "
        << stats.iterations << ", shrinks " << stats.shrinks << '\n';
    return kSuccess;
  });
}

int cmd_distance(const std::string& spec_path, const std::string& from, const std::string& to, const RunConfig& cfg,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const ChartManifold m = build_manifold(load_spec(spec_path));
    const Point p = point_or_center(m, from);
    const Point q = point_or_center(m, to);
    const DistanceEstimate est = estimate_distance(m, p, q, cfg.estimator);
    std::ostringstream csv;
    csv << "p,q,upper_bound,links,solver_failures,solves\n";
    csv << format_vector(p) << ',' << format_vector(q) << ',' << num(est.upper_bound) << ','
        << est.chain.links.size() << ',' << est.solver_stats.failures << ',' << est.solver_stats.solves << '\n';
    emit(cfg, "distance.csv", csv.str(), out);
    if (!cfg.output_dir.empty()) {
      std::ostringstream chain;
      chain << "link,radius,z_re,z_im,w_re,w_im,length,disk_file\n";
      for (std::size_t k = 0; k < est.chain.links.size(); ++k) {
        const ChainLink& link = est.chain.links[k];
        const std::string file = "link_" + std::to_string(k) + ".csv";
        chain << k << ',' << num(link.disk.radius()) << ',' << num(link.z.z().real()) << ',' << num(link.z.z().imag())
              << ',' << num(link.w.z().real()) << ',' << num(link.w.z().imag()) << ','
              << num(poincare_distance(link.z, link.w)) << ',' << file << '\n';
        std::ostringstream disk;
        link.disk.write_csv(disk);
        emit(cfg, file, disk.str(), out);
      }
      emit(cfg, "chain.csv", chain.str(), out);
    }
    err << "chain of " << est.chain.links.size() << " link(s), gap " << num(chain_gap(est.chain, p, q)) << '\n';
    return kSuccess;
  });
}

int cmd_fmetric(const std::string& spec_path, const std::optional<std::string>& at, const std::string& dir,
                const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const ChartManifold m = build_manifold(load_spec(spec_path));
    const Point p = point_or_center(m, at);
    const Vec v = direction(m, dir);
    const PseudometricEstimate est = infinitesimal_metric(m, p, v, cfg.solver, cfg.radius_search);
    std::ostringstream csv;
    csv << "p,v,value,witness_radius,width_analog,cap_limited,diagnostic\n";
    csv << format_vector(p) << ',' << format_vector(v) << ',' << num(est.value) << ',' << num(est.witness_radius) << ','
        << num(est.width_analog) << ',' << (est.cap_limited ? 1 : 0) << ',' << est.diagnostic << '\n';
    emit(cfg, "fmetric.csv", csv.str(), out);
    if (!std::isfinite(est.value)) {
      err << "radius search failed: " << est.diagnostic << '\n';
      return kFailure;
    }
    return kSuccess;
  });
}

int cmd_brody(const std::string& spec_path, const std::string& probe, int steps, const RunConfig& cfg,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    if (steps < 1) throw ConfigurationError("--steps must be positive");
    const ManifoldSpec spec = load_spec(spec_path);
    const ChartManifold m = build_manifold(spec);
    DiskGenerator gen;
    if (probe == "affine") {
      // f_k(z) = p + (k + 2) z e_1 on the unit disk.
      const Point p = point_or_center(m, std::nullopt);
      const Vec v = Vec::Unit(m.dim(), 0);
      gen = [m, p, v](int k) {
        const double scale = k + 2.0;
        return checked_disk(m, DiskMap::sample(1.0, 32, m.dim(), [&](Complex z) { return Vec(p + complex_scale(scale * z, v)); }));
      };
    } else if (probe == "s2") {
      const auto chart = s6_chart_of(spec);
      if (!chart) throw ConfigurationError("the s2 probe needs an s6 or s6-chart spec");
      gen = [m, chart](int k) {
        const double scale = k + 1.0;
        return checked_disk(m, DiskMap::sample(1.0, 16 * (k + 1), 6, [&](Complex z) { return chart->s2_curve(scale * z); }));
      };
    } else {
      throw ConfigurationError("unknown probe '" + probe + "' (expected affine or s2)");
    }
    const ProbeReport report = rescaling_probe(m, gen, steps);
    std::ostringstream csv;
    csv << "k,r_k,center_norm,rescaled_center_norm,trailing_cauchy_diff,status\n";
    for (const auto& row : report.rows) {
      const char* status = std::isnan(row.trailing_cauchy_diff) ? "first"
                           : row.trailing_cauchy_diff <= 1e-3   ? "stabilizing"
                                                                : "open";
      csv << row.k << ',' << num(row.r_k) << ',' << num(row.center_norm) << ',' << num(row.rescaled_center_norm) << ','
          << num(row.trailing_cauchy_diff) << ',' << status << '\n';
    }
    emit(cfg, "brody.csv", csv.str(), out);
    if (report.precondition_failed) {
      const SchwarzReport schwarz = schwarz_bound_check(m, {DiskMap::sample(1.0, 16, m.dim(), [&](Complex z) {
        return Vec(point_or_center(m, std::nullopt) + complex_scale(0.999 * z, Vec::Unit(m.dim(), 0)));
      })}, 1.0);
      err << "derivatives bounded: " << report.diagnostic << " (Schwarz fit C = " << num(schwarz.fitted_c) << ")\n";
      return kFailure;
    }
    if (report.partial) err << "partial report: " << report.diagnostic << '\n';
    if (!report.rows.empty() && report.rows.back().trailing_cauchy_diff <= 1e-3) {
      err << "nonhyperbolicity evidence: rescaled disks stabilize (numerical evidence, not a proof)\n";
    }
    return kSuccess;
  });
}

int cmd_gallery(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    using nlohmann::json;
    const std::vector<std::pair<std::string, json>> examples{
        {"unit-disk", {{"kind", "constant"}, {"dim", 2}, {"domain", {{"type", "ball"}, {"center", {0, 0}}, {"radius", 1}}}}},
        {"flat-box-10", {{"kind", "constant"}, {"dim", 2}, {"domain", {{"type", "box"}, {"center", {0, 0}}, {"half_width", 10}}}}},
        {"flat-box-50", {{"kind", "constant"}, {"dim", 2}, {"domain", {{"type", "box"}, {"center", {0, 0}}, {"half_width", 50}}}}},
        {"bump-r4", {{"kind", "perturbed"}, {"dim", 4}, {"params", {{"preset", "bump"}, {"eps", 0.05}}}, {"taming_form", "standard"}}},
        {"tame-r4", {{"kind", "tame-r4"}, {"dim", 4}, {"params", {{"tau", {0.05, -0.03, 0.04}}}}}},
        {"s6-chart", {{"kind", "s6-chart"}, {"dim", 6}}},
        {"s6", {{"kind", "s6"}, {"dim", 6}}},
    };
    std::ostringstream csv;
    csv << "name,dim,structure_defect,nijenhuis_max,taming_defect\n";
    for (const auto& [name, j] : examples) {
      const ManifoldSpec spec = parse_spec(j);
      const ChartManifold m = build_manifold(spec);
      const StructureReport s = check_structure(m, 100, 1e-10, cfg.seed);
      csv << name << ',' << spec.dim << ',' << num(s.max_defect) << ',' << num(sampled_nijenhuis_max(m, 5, cfg.seed))
          << ',' << (m.taming_form() ? num(taming_defect(m, 100, cfg.seed)) : std::string("nan")) << '\n';
      if (!cfg.output_dir.empty()) emit(cfg, name + ".json", to_json(spec).dump(2) + "\n", out);
    }
    emit(cfg, "gallery.csv", csv.str(), out);
    return kSuccess;
  });
}

}  // namespace acx::cli
