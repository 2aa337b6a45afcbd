#include "acx/kobayashi.hpp"

#include "acx/errors.hpp"
#include "acx/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace acx {
namespace {

Mat block_diag(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Mat map_differential(const ChartMap& h, const Point& p, int target_dim) {
  const int n = static_cast<int>(p.size());
  Mat d(target_dim, n);
  for (int k = 0; k < n; ++k) {
    const Vec e = h.fd_step * Vec::Unit(n, k);
    d.col(k) = (h.map(p + e) - h.map(p - e)) / (2.0 * h.fd_step);
  }
  return d;
}

// Chain whose links are the given chain's disks followed by fn, node-wise.
KobayashiChain push_chain(const KobayashiChain& c, const std::function<Vec(const Vec&)>& fn) {
  KobayashiChain out{{}, c.tolerance};
  for (const auto& link : c.links) out.links.push_back({link.disk.transformed(fn), link.z, link.w});
  return out;
}

bool disk_is_constant(const DiskMap& d) {
  const Mat& v = d.values();
  return ((v.colwise() - v.col(0)).cwiseAbs().maxCoeff()) == 0.0;
}

// Length counting only links whose disk moves; constant disks can be
// replaced by stationary links.
double moving_length(const KobayashiChain& c) {
  double total = 0.0;
  for (const auto& link : c.links)
    if (!disk_is_constant(link.disk)) total += poincare_distance(link.z, link.w);
  return total;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

std::optional<DistanceEstimate> try_estimate(const ChartManifold& m, const Point& p, const Point& q,
                                             const EstimatorConfig& cfg) {
  try {
    return estimate_distance(m, p, q, cfg);
  } catch (const ReachabilityError&) {
    return std::nullopt;
  }
}

void require_split(const ChartManifold& m1, const ChartManifold& m2, const ChartManifold& m12) {
  const int n1 = m1.dim();
  const int n2 = m2.dim();
  if (m12.dim() != n1 + n2) throw ConfigurationError("product chart dimension does not match the factors");
  const auto points = sample_domain(m12.domain(), 16, 3);
  for (const auto& p : points) {
    const Mat j = m12.structure()(p);
    const Mat split = block_diag(m1.structure()(p.head(n1)), m2.structure()(p.tail(n2)));
    if ((j - split).norm() > 1e-10) {
      throw ConfigurationError("product structure is not split as J1 x J2");
    }
  }
}

}  // namespace

double map_defect(const ChartManifold& source, const ChartManifold& target, const ChartMap& h, int samples,
                  std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& p : sample_domain(source.domain(), samples, seed)) {
    const Mat d = map_differential(h, p, target.dim());
    const double defect = (d * source.structure()(p) - target.structure()(h.map(p)) * d).norm();
    worst = std::max(worst, std::isfinite(defect) ? defect : std::numeric_limits<double>::infinity());
  }
  return worst;
}

TransferReport check_nonincreasing(const ChartManifold& source, const ChartManifold& target, const ChartMap& h,
                                   const std::vector<std::pair<Point, Point>>& pairs, const EstimatorConfig& cfg,
                                   double map_tol) {
  const double defect = map_defect(source, target, h, 64, cfg.seed);
  if (!(defect <= map_tol)) {
    throw InvalidMapError("map is not pseudoholomorphic: defect " + std::to_string(defect));
  }
  TransferReport report;
  report.slack = 2.0 * cfg.junction_tol;
  report.pass = true;
  for (const auto& [p, q] : pairs) {
    TransferRow row;
    row.p = p;
    row.q = q;
    const DistanceEstimate est = estimate_distance(source, p, q, cfg);
    row.source_bound = est.upper_bound;
    const KobayashiChain pushed = push_chain(est.chain, h.map);
    row.transferred_bound = chain_length(pushed);
    row.transferred_valid = validate_chain(pushed, h.map(p), h.map(q));
    for (const auto& link : pushed.links) row.transferred_residual = std::max(row.transferred_residual, residual(target, link.disk));
    if (auto t = try_estimate(target, h.map(p), h.map(q), cfg)) row.target_estimate = t->upper_bound;
    row.pass = row.transferred_valid && row.transferred_bound <= row.source_bound + report.slack &&
               row.transferred_residual <= cfg.solver.tol;
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  }
  return report;
}

ChartManifold product_manifold(const ChartManifold& m1, const ChartManifold& m2) {
  const int n1 = m1.dim();
  const int n2 = m2.dim();
  const AlmostComplexStructure j1 = m1.structure();
  const AlmostComplexStructure j2 = m2.structure();
  const bool constant = j1.is_constant() && j2.is_constant();
  AlmostComplexStructure j(
      n1 + n2, [j1, j2, n1, n2](const Point& p) { return block_diag(j1(p.head(n1)), j2(p.tail(n2))); },
      std::min(j1.smoothness_step(), j2.smoothness_step()), constant);
  std::optional<MatrixField> norm;
  if (m1.has_custom_norm() || m2.has_custom_norm()) {
    norm = [m1, m2, n1, n2](const Point& p) { return block_diag(m1.norm_matrix(p.head(n1)), m2.norm_matrix(p.tail(n2))); };
  }
  std::optional<SymplecticForm> omega;
  if (m1.taming_form() && m2.taming_form()) {
    const SymplecticForm w1 = *m1.taming_form();
    const SymplecticForm w2 = *m2.taming_form();
    omega = SymplecticForm([w1, w2, n1, n2](const Point& p) { return block_diag(w1(p.head(n1)), w2(p.tail(n2))); });
  }
  return ChartManifold(j, Domain::product(m1.domain(), m2.domain()), norm, omega);
}

ProductReport product_bounds(const ChartManifold& m1, const ChartManifold& m2, const ChartManifold& m12,
                             const std::vector<std::pair<Point, Point>>& pairs, const EstimatorConfig& cfg,
                             double slack) {
  require_split(m1, m2, m12);
  const int n1 = m1.dim();
  const int n2 = m2.dim();
  ProductReport report;
  report.slack = slack;
  report.pass = true;
  for (const auto& [p, q] : pairs) {
    ProductRow row;
    row.p = p;
    row.q = q;
    const Vec p1 = p.head(n1), p2 = p.tail(n2), q1 = q.head(n1), q2 = q.tail(n2);
    const DistanceEstimate e1 = estimate_distance(m1, p1, q1, cfg);
    const DistanceEstimate e2 = estimate_distance(m2, p2, q2, cfg);
    row.factor1 = e1.upper_bound;
    row.factor2 = e2.upper_bound;

    // First factor moves with the second held at p2, then the second moves.
    const KobayashiChain lifted1 = push_chain(e1.chain, [&](const Vec& x) { return concat(x, p2); });
    const KobayashiChain lifted2 = push_chain(e2.chain, [&](const Vec& y) { return concat(q1, y); });
    const KobayashiChain concatenated = lifted1.then(lifted2);
    row.concatenated = chain_length(concatenated);
    const bool concat_valid = validate_chain(concatenated, p, q);

    KobayashiChain witness = concatenated;
    row.product_bound = concat_valid ? row.concatenated : std::numeric_limits<double>::infinity();
    if (auto direct = try_estimate(m12, p, q, cfg)) {
      row.product_direct = direct->upper_bound;
      if (row.product_direct < row.product_bound) {
        row.product_bound = row.product_direct;
        witness = direct->chain;
      }
    }

    const KobayashiChain proj1 = push_chain(witness, [&](const Vec& x) -> Vec { return x.head(n1); });
    const KobayashiChain proj2 = push_chain(witness, [&](const Vec& x) -> Vec { return x.tail(n2); });
    row.projected1 = moving_length(proj1);
    row.projected2 = moving_length(proj2);
    row.upper_ok = concat_valid && row.product_bound <= row.factor1 + row.factor2 + slack;
    row.lower_ok = validate_chain(proj1, p1, q1) && validate_chain(proj2, p2, q2) &&
                   row.projected1 <= row.product_bound + slack && row.projected2 <= row.product_bound + slack;
    report.pass = report.pass && row.upper_ok && row.lower_ok;
    report.rows.push_back(std::move(row));
  }
  return report;
}

BundleReport bundle_projection_check(const ChartManifold& e, const ChartManifold& b, const ChartManifold& fiber,
                                     const std::vector<std::pair<Point, Point>>& pairs, const EstimatorConfig& cfg,
                                     double slack) {
  require_split(b, fiber, e);
  const int nb = b.dim();
  const int nf = fiber.dim();
  BundleReport report;
  report.slack = slack;
  report.pass = true;
  for (const auto& [p, q] : pairs) {
    BundleRow row;
    row.p = p;
    row.q = q;
    const Vec pb = p.head(nb), qb = q.head(nb), pf = p.tail(nf);

    const DistanceEstimate est_e = estimate_distance(e, p, q, cfg);
    row.e_bound = est_e.upper_bound;
    const KobayashiChain projected = push_chain(est_e.chain, [&](const Vec& x) -> Vec { return x.head(nb); });
    row.projected = moving_length(projected);
    row.projection_ok = validate_chain(projected, pb, qb) && row.projected <= row.e_bound + slack;

    const DistanceEstimate est_b = estimate_distance(b, pb, qb, cfg);
    row.b_bound = est_b.upper_bound;
    const KobayashiChain lifted = push_chain(est_b.chain, [&](const Vec& x) { return concat(x, pf); });
    row.lifted = chain_length(lifted);
    Vec lifted_end(nb + nf);
    lifted_end << qb, pf;
    row.lift_ok = validate_chain(lifted, p, lifted_end) && row.lifted <= row.b_bound + slack;

    report.pass = report.pass && row.projection_ok && row.lift_ok;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace acx
