#pragma once

#include "acx/acs.hpp"
#include "acx/disk_map.hpp"
#include "acx/hyperbolic.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace acx {

/// Operator norm of f_*(z) in the manifold norm: the largest |f_*(z) u| over
/// unit directions u in the parameter plane. Equals |f_*(z)e| whenever the
/// norm is J-invariant.
double differential_norm(const ChartManifold& m, const DiskMap& f, Complex z);
double differential_norm_at_node(const ChartManifold& m, const DiskMap& f, int i, int j);

struct ProfileSample {
  Complex z;
  double value;
};

/// z -> (1 - |z|^2 / r^2) |f_*(z)| over the lattice nodes of the open r-disk.
struct NormProfile {
  std::vector<ProfileSample> samples;
  double radius = 0.0;
  Complex argmax{0.0, 0.0};
  double max = 0.0;
};

NormProfile sup_norm_profile(const ChartManifold& m, const DiskMap& f);

struct ReparamResult {
  DiskMap h;
  double scale_t = 1.0;
  DiskAutomorphism recentering;  ///< normalized to the unit disk
  double achieved_center_norm = 0.0;
  double worst_bound_ratio = 0.0;  ///< max over nodes of |h_*(z)| / ((c/2) r^2/(r^2-|z|^2))
};

/// Brody reparametrization: h = f(t* . ) recentered at the profile maximizer,
/// with |h_*(0)| = c/2 and |h_*(z)| <= (c/2) r^2 / (r^2 - |z|^2).
/// Throws PreconditionError when |f_*(0)| < c.
ReparamResult brody_reparametrize(const ChartManifold& m, const DiskMap& f, double c,
                                  int resolution = 0);

struct SchwarzReport {
  double fitted_c = 0.0;  ///< max over disks and nodes of (1 - |z|^2/r^2) r |f_*(z)|
  bool pass = false;
};

SchwarzReport schwarz_bound_check(const ChartManifold& m, const std::vector<DiskMap>& disks,
                                  double c);

/// Returns f_k for k = 0, 1, ... or nullopt when exhausted.
using DiskGenerator = std::function<std::optional<DiskMap>(int k)>;

struct ProbeRow {
  int k = 0;
  double r_k = 0.0;
  double center_norm = 0.0;  ///< |(f_k)_*(0)|
  double rescaled_center_norm = 0.0;  ///< |(g_k)_*(0)|, 1 on success
  double trailing_cauchy_diff = 0.0;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  bool precondition_failed = false;
  bool partial = false;
  std::string diagnostic;
  /// Values of the last g_k on the comparison lattice.
  std::vector<Complex> compare_points;
  std::vector<Vec> last_values;
};

struct ProbeConfig {
  int window = 3;
  double compare_radius = 1.0;
  int compare_resolution = 8;
  int resolution = 32;  ///< lattice nodes per unit parameter length
};

/// Rescaling argument: g_k = Brody(f_k(2z/|f_k'(0)|), c = 2) on r_k = |f_k'(0)|/2,
/// compared on a fixed compact lattice. Small trailing differences are
/// numerical evidence for an entire curve; they are never a proof.
ProbeReport rescaling_probe(const ChartManifold& m, const DiskGenerator& disks, int steps,
                            const ProbeConfig& cfg = {});

}  // namespace acx
