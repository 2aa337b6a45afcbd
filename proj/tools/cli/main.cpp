#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  using namespace acx::cli;
  CLI::App app{"acx: Kobayashi pseudodistance toolkit for almost complex manifolds"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string spec;
  int samples = 500;
  double tol = 1e-10;
  int directions = 24;
  double kernel_tol = 1e-8;
  std::optional<double> solver_tol;
  std::optional<std::string> at;
  std::string from, to, dir, probe = "affine";
  double radius = 0.25;
  int steps = 5;

  auto common = [&](CLI::App* sub, bool needs_spec) {
    if (needs_spec) sub->add_option("--spec", spec, "Manifold spec file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", cfg.seed, "Sampling seed");
    sub->add_option("--out", cfg.output_dir, "Write CSV files into this directory instead of stdout");
  };

  auto* check = app.add_subcommand("check", "Structure, taming and integrability report");
  common(check, true);
  check->add_option("--samples", samples, "Sample points");
  check->add_option("--tol", tol, "Structure defect tolerance");

  auto* nij = app.add_subcommand("nijenhuis", "Nijenhuis tensor on coordinate pairs at a point");
  common(nij, true);
  nij->add_option("--at", at, "Point (comma-separated); domain center by default");
  nij->add_option("--samples", directions, "Direction samples for the general-position test");
  nij->add_option("--tol", kernel_tol, "Kernel tolerance");

  auto* disk = app.add_subcommand("disk", "Solve one pseudoholomorphic disk");
  common(disk, true);
  disk->add_option("--at", at, "Center point");
  disk->add_option("--dir", dir, "Center velocity")->required();
  disk->add_option("--radius", radius, "Disk radius");
  disk->add_option("--tol", solver_tol, "Residual tolerance");
  disk->add_option("--resolution", cfg.solver.grid_resolution, "Lattice nodes per radius");

  auto* dist = app.add_subcommand("distance", "Upper bound on the Kobayashi pseudodistance");
  common(dist, true);
  dist->add_option("--from", from, "Point p")->required();
  dist->add_option("--to", to, "Point q")->required();
  dist->add_option("--waypoints", cfg.estimator.waypoints, "Waypoint count");
  dist->add_option("--tol", solver_tol, "Disk residual tolerance");
  dist->add_option("--junction-tol", cfg.estimator.junction_tol, "Allowed junction gap");

  auto* fm = app.add_subcommand("fmetric", "Upper bound on the infinitesimal pseudometric");
  common(fm, true);
  fm->add_option("--at", at, "Base point");
  fm->add_option("--dir", dir, "Tangent vector")->required();
  fm->add_option("--tol", solver_tol, "Disk residual tolerance");

  auto* brody = app.add_subcommand("brody", "Rescaling probe");
  common(brody, true);
  brody->add_option("--probe", probe, "Disk generator: affine or s2");
  brody->add_option("--steps", steps, "Probe steps");

  auto* gallery = app.add_subcommand("gallery", "Built-in examples; --out also writes their spec files");
  common(gallery, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  cfg.estimator.seed = cfg.seed == 0 ? cfg.estimator.seed : cfg.seed;
  if (solver_tol) {
    cfg.solver.tol = *solver_tol;
    cfg.estimator.solver.tol = *solver_tol;
  }

  if (*check) return cmd_check(spec, samples, tol, cfg, std::cout, std::cerr);
  if (*nij) return cmd_nijenhuis(spec, at, directions, kernel_tol, cfg, std::cout, std::cerr);
  if (*disk) return cmd_disk(spec, at, dir, radius, cfg, std::cout, std::cerr);
  if (*dist) return cmd_distance(spec, from, to, cfg, std::cout, std::cerr);
  if (*fm) return cmd_fmetric(spec, at, dir, cfg, std::cout, std::cerr);
  if (*brody) return cmd_brody(spec, probe, steps, cfg, std::cout, std::cerr);
  return cmd_gallery(cfg, std::cout, std::cerr);
}
