#include "acx/kobayashi.hpp"

#include "acx/errors.hpp"
#include "acx/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace acx {

KobayashiChain KobayashiChain::reversed() const {
  KobayashiChain out{{}, tolerance};
  for (auto it = links.rbegin(); it != links.rend(); ++it) out.links.push_back(it->reversed());
  return out;
}

KobayashiChain KobayashiChain::then(const KobayashiChain& next) const {
  KobayashiChain out{links, std::max(tolerance, next.tolerance)};
  out.links.insert(out.links.end(), next.links.begin(), next.links.end());
  return out;
}

double chain_length(const KobayashiChain& c) {
  double total = 0.0;
  for (const auto& link : c.links) total += poincare_distance(link.z, link.w);
  return total;
}

double chain_gap(const KobayashiChain& c, const Point& p, const Point& q) {
  if (c.links.empty()) return (p.size() == q.size()) ? (p - q).norm() : std::numeric_limits<double>::infinity();
  auto gap = [](const Vec& a, const Vec& b) {
    return a.size() == b.size() ? (a - b).norm() : std::numeric_limits<double>::infinity();
  };
  double worst = gap(c.links.front().source_point(), p);
  worst = std::max(worst, gap(c.links.back().target_point(), q));
  for (std::size_t k = 0; k + 1 < c.links.size(); ++k) {
    worst = std::max(worst, gap(c.links[k].target_point(), c.links[k + 1].source_point()));
  }
  return worst;
}

bool validate_chain(const KobayashiChain& c, const Point& p, const Point& q) {
  const double g = chain_gap(c, p, q);
  return std::isfinite(g) && g <= c.tolerance;
}

namespace {

// One Newton (Broyden) solve for v with f_v(s) = b; the disk is centered at a.
// jac is the warm-start Jacobian of v -> f_v(s); updated on success.
std::optional<DiskMap> hit(const ChartManifold& m, const Point& a, const Point& b, double s, Vec& v, Mat& jac,
                           const SolverConfig& sc, const EstimatorConfig& cfg, SolverCounts& counts) {
  const int n = m.dim();
  Vec x = v;
  Mat jac_local = jac;
  Vec prev_x, prev_f;
  for (int it = 0; it < std::max(1, cfg.newton_iterations); ++it) {
    if (!(x.norm() > 0.0)) return std::nullopt;
    DiskMap disk = DiskMap::constant(a, 1.0);
    try {
      ++counts.solves;
      disk = solve_local_disk(m, a, x, 1.0, sc);
    } catch (const Error&) {
      ++counts.failures;
      return std::nullopt;
    }
    const Vec f = disk(Complex(s, 0.0)) - b;
    if (!f.allFinite()) return std::nullopt;
    if (f.norm() <= 0.1 * cfg.junction_tol) {
      v = x;
      jac = jac_local;
      return disk;
    }
    if (prev_f.size() == n) {
      const Vec dx = x - prev_x;
      const Vec df = f - prev_f;
      if (dx.squaredNorm() > 0.0) jac_local += (df - jac_local * dx) * dx.transpose() / dx.squaredNorm();
    }
    prev_x = x;
    prev_f = f;
    x -= jac_local.partialPivLu().solve(f);
  }
  return std::nullopt;
}

}  // namespace

ShootResult shoot(const ChartManifold& m, const Point& a, const Point& b, const EstimatorConfig& cfg) {
  ShootResult res;
  const double dist = (b - a).norm();
  if (dist <= cfg.junction_tol) {
    res.found = true;
    res.length = 0.0;
    res.link = ChainLink{DiskMap::constant(a, 1.0), DiskPoint(), DiskPoint()};
    return res;
  }
  SolverConfig sc = cfg.solver;
  sc.max_shrinks = 0;
  int trials = 0;
  // Jacobian at the last feasible parameter; d f_v(s) / dv scales like s.
  Mat jac_hi;
  double s_jac = 1.0;
  auto feasible = [&](double s, Vec& v) {
    ++trials;
    Mat jac = jac_hi.size() ? Mat(jac_hi * (s / s_jac)) : Mat(s * Mat::Identity(m.dim(), m.dim()));
    auto d = hit(m, a, b, s, v, jac, sc, cfg, res.counts);
    if (d) {
      jac_hi = jac;
      s_jac = s;
    }
    return d;
  };

  std::optional<DiskMap> best;
  double s_hi = 0.0;
  Vec v_hi;
  for (double s : {0.9, 0.99, 0.999}) {
    Vec v = (b - a) / s;
    if (auto d = feasible(s, v)) {
      best = std::move(d);
      s_hi = s;
      v_hi = v;
      break;
    }
  }
  if (!best) return res;

  double s_lo = 0.0;
  while (trials < cfg.trial_budget) {
    const double s = 0.5 * s_hi;
    if (s < 1e-12) break;
    Vec v = v_hi * (s_hi / s);
    if (auto d = feasible(s, v)) {
      best = std::move(d);
      s_hi = s;
      v_hi = v;
    } else {
      s_lo = s;
      break;
    }
  }
  if (s_lo > 0.0) {
    while (trials < cfg.trial_budget && s_hi / s_lo - 1.0 > cfg.hit_rel_tol) {
      const double s = std::sqrt(s_lo * s_hi);
      Vec v = v_hi * (s_hi / s);
      if (auto d = feasible(s, v)) {
        best = std::move(d);
        s_hi = s;
        v_hi = v;
      } else {
        s_lo = s;
      }
    }
  }
  res.found = true;
  res.link = ChainLink{std::move(*best), DiskPoint(), DiskPoint(Complex(s_hi, 0.0))};
  res.length = poincare_distance(Complex(0.0), Complex(s_hi, 0.0));
  return res;
}

namespace {

struct Edge {
  double weight = std::numeric_limits<double>::infinity();
  std::optional<ChainLink> link;  // oriented from the lower to the higher node index
};

struct Graph {
  std::vector<Point> nodes;
  std::vector<std::vector<Edge>> edges;  // edges[i][j], i < j
  SolverCounts counts;
};

Graph build_graph(const ChartManifold& m, std::vector<Point> nodes, const EstimatorConfig& cfg) {
  Graph g;
  g.nodes = std::move(nodes);
  const int k = static_cast<int>(g.nodes.size());
  g.edges.assign(k, std::vector<Edge>(k));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if ((g.nodes[i] - g.nodes[j]).norm() <= cfg.radius_budget) pairs.emplace_back(i, j);
  std::vector<ShootResult> forward(pairs.size()), backward(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), [&](int e) {
    const auto [i, j] = pairs[e];
    forward[e] = shoot(m, g.nodes[i], g.nodes[j], cfg);
    backward[e] = shoot(m, g.nodes[j], g.nodes[i], cfg);
  });
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const auto [i, j] = pairs[e];
    for (const ShootResult* r : {&forward[e], &backward[e]}) {
      g.counts.solves += r->counts.solves;
      g.counts.failures += r->counts.failures;
      ++g.counts.edges_tried;
    }
    Edge& edge = g.edges[i][j];
    if (forward[e].found && forward[e].length <= backward[e].length) {
      edge.weight = forward[e].length;
      edge.link = forward[e].link;
    } else if (backward[e].found) {
      edge.weight = backward[e].length;
      edge.link = backward[e].link->reversed();
    }
    if (edge.link) ++g.counts.edges_found;
  }
  return g;
}

double weight(const Graph& g, int i, int j) {
  return i < j ? g.edges[i][j].weight : g.edges[j][i].weight;
}

ChainLink oriented_link(const Graph& g, int i, int j) {
  return i < j ? *g.edges[i][j].link : g.edges[j][i].link->reversed();
}

// Dijkstra from src; returns distances and predecessors.
std::pair<std::vector<double>, std::vector<int>> shortest_paths(const Graph& g, int src) {
  const int k = static_cast<int>(g.nodes.size());
  std::vector<double> dist(k, std::numeric_limits<double>::infinity());
  std::vector<int> prev(k, -1);
  std::vector<bool> done(k, false);
  dist[src] = 0.0;
  for (int round = 0; round < k; ++round) {
    int u = -1;
    for (int i = 0; i < k; ++i)
      if (!done[i] && std::isfinite(dist[i]) && (u < 0 || dist[i] < dist[u])) u = i;
    if (u < 0) break;
    done[u] = true;
    for (int w = 0; w < k; ++w) {
      if (done[w] || w == u) continue;
      const double alt = dist[u] + weight(g, u, w);
      if (alt < dist[w]) {
        dist[w] = alt;
        prev[w] = u;
      }
    }
  }
  return {dist, prev};
}

std::vector<Point> waypoint_set(const ChartManifold& m, const std::vector<Point>& fixed,
                                const EstimatorConfig& cfg) {
  std::vector<Point> nodes = fixed;
  for (const auto& p : cfg.extra_waypoints) nodes.push_back(p);
  if (cfg.waypoints > 0) {
    for (auto& p : sample_domain(m.domain(), cfg.waypoints, cfg.seed)) nodes.push_back(std::move(p));
  }
  return nodes;
}

void require_in_domain(const ChartManifold& m, const Point& p, const char* what) {
  if (p.size() != m.dim()) throw ConfigurationError(std::string(what) + " has the wrong dimension");
  if (!m.domain().contains(p)) throw DomainError(std::string(what) + " lies outside the domain");
}

}  // namespace

DistanceEstimate estimate_distance(const ChartManifold& m, const Point& p, const Point& q,
                                   const EstimatorConfig& cfg) {
  require_in_domain(m, p, "p");
  require_in_domain(m, q, "q");
  DistanceEstimate est;
  est.chain.tolerance = cfg.junction_tol;
  if ((p - q).norm() <= cfg.junction_tol) {
    est.waypoints = {p, q};
    return est;
  }
  const Graph g = build_graph(m, waypoint_set(m, {p, q}, cfg), cfg);
  est.waypoints = g.nodes;
  est.solver_stats = g.counts;
  const auto [dist, prev] = shortest_paths(g, 0);
  if (!std::isfinite(dist[1])) {
    throw ReachabilityError("no chain from p to q within the budget (" + std::to_string(g.counts.edges_found) +
                            " of " + std::to_string(g.counts.edges_tried / 2) + " edges found)");
  }
  std::vector<int> path{1};
  while (path.back() != 0) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) est.chain.links.push_back(oriented_link(g, path[k], path[k + 1]));
  est.upper_bound = chain_length(est.chain);
  return est;
}

Mat pool_distances(const ChartManifold& m, const std::vector<Point>& pool, const EstimatorConfig& cfg,
                   SolverCounts* counts) {
  for (const auto& p : pool) require_in_domain(m, p, "pool point");
  const Graph g = build_graph(m, waypoint_set(m, pool, cfg), cfg);
  if (counts) *counts = g.counts;
  const int k = static_cast<int>(pool.size());
  Mat out(k, k);
  for (int i = 0; i < k; ++i) {
    const auto dist = shortest_paths(g, i).first;
    for (int j = 0; j < k; ++j) out(i, j) = (pool[i] - pool[j]).norm() <= cfg.junction_tol ? 0.0 : dist[j];
  }
  return out;
}

PseudometricEstimate infinitesimal_metric(const ChartManifold& m, const Point& p, const Vec& v,
                                          const SolverConfig& cfg, const RadiusSearchConfig& search) {
  require_in_domain(m, p, "p");
  PseudometricEstimate out;
  if (!(v.norm() > 0.0)) {
    out.diagnostic = "zero direction";
    return out;
  }
  const RadiusResult r = max_disk_radius(m, p, v, cfg, search);
  out.cap_limited = r.cap_limited;
  out.diagnostic = r.diagnostic;
  if (r.failed || !(r.radius > 0.0)) return out;
  out.witness_radius = r.radius;
  out.value = 1.0 / r.radius;
  out.width_analog = M_PI * r.radius * r.radius;
  return out;
}

}  // namespace acx
