#pragma once

#include "acx/kobayashi.hpp"
#include "acx/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace acx::cli {

struct RunConfig {
  SolverConfig solver{64, 1e-6, 60, 0.7, 4};
  EstimatorConfig estimator;
  RadiusSearchConfig radius_search;
  std::string output_dir;  ///< empty: CSV goes to the output stream
  std::uint64_t seed = 0;
};

/// Throws ConfigurationError unless every tolerance and budget is positive.
void validate(const RunConfig& cfg);

/// Exit codes: 0 success, 1 analytic or budget failure, 2 input error.
enum ExitCode { kSuccess = 0, kFailure = 1, kInputError = 2 };

int cmd_check(const std::string& spec_path, int samples, double tol, const RunConfig& cfg, std::ostream& out,
              std::ostream& err);
int cmd_nijenhuis(const std::string& spec_path, const std::optional<std::string>& at, int samples, double tol,
                  const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_disk(const std::string& spec_path, const std::optional<std::string>& at, const std::string& dir,
             double radius, const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_distance(const std::string& spec_path, const std::string& from, const std::string& to,
                 const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_fmetric(const std::string& spec_path, const std::optional<std::string>& at, const std::string& dir,
                const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_brody(const std::string& spec_path, const std::string& probe, int steps, const RunConfig& cfg,
              std::ostream& out, std::ostream& err);
/// Structure report for the built-in examples; with an output dir, also
/// writes one spec file per example.
int cmd_gallery(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace acx::cli
