#include "potato/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace potato {
namespace {

// Clipping at the collapse needs far less slack than the solver's tolerance.
constexpr Tolerance kClip{1e-15, 1e-14};

double scale_of(const HPolygon& p) {
  double s = 1.0;
  for (double b : p.offsets) s = std::max(s, std::abs(b));
  return s;
}

// max A_i . x over {A_j x <= b_j - t, j != i} minus (b_i - t); +inf if unbounded.
double overhang(const HPolygon& p, int i, double t) {
  std::vector<Halfspace> rows;
  rows.reserve(p.size());
  for (int j = 0; j < p.size(); ++j)
    if (j != i) rows.push_back({Vec3(p.normals[j].x(), p.normals[j].y(), 0.0), p.offsets[j] - t});
  const Vec2& a = p.normals[i];
  const LpResult r = small_lp(2, rows, Vec3(a.x(), a.y(), 0.0));
  if (r.status == LpStatus::kUnbounded) return std::numeric_limits<double>::infinity();
  if (!r.optimal()) return -std::numeric_limits<double>::infinity();
  return r.value - (p.offsets[i] - t);
}

template <class Pred>
double bisect_last_true(double lo, double hi, Pred&& pred, const OracleConfig& config) {
  for (int it = 0; it < config.max_iterations && hi - lo > config.tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double oracle_fi(const HPolygon& p, int i, double t, int n) {
  const std::vector<Vec2> pts = inner_vertices(p, t, kClip);
  if (pts.empty()) throw GeometryError(ErrorCode::kEmptyInner, "t=" + std::to_string(t));
  return directional_width(VPolygon{pts}, p.normals[i]) - 2.0 * (n - 1) * t;
}

double oracle_Mi(const HPolygon& p, int i, const OracleConfig& config) {
  const double r = inradius_incenter(p).radius;
  if (overhang(p, i, r) >= 0.0) return r;
  return bisect_last_true(0.0, r, [&](double t) { return overhang(p, i, t) >= 0.0; }, config);
}

OracleSolution oracle_solve(const HPolygon& p, int n, const OracleConfig& config) {
  const int m = p.size();
  const double r = inradius_incenter(p).radius;
  const double tol = 1e-12 * scale_of(p);
  OracleSolution best;
  for (int i = 0; i < m; ++i) {
    const double mi = oracle_Mi(p, i, config);
    if (oracle_fi(p, i, mi, n) > tol) continue;
    const double root = bisect_last_true(0.0, mi, [&](double t) { return oracle_fi(p, i, t, n) > 0.0; }, config);
    if (best.winner < 0 || root < best.rho - tol) best = {root, p.normals[i], i};
  }
  if (best.winner < 0) {
    // width(inner_t) - 2 (n - 1) t is strictly decreasing; its root is rho.
    auto positive = [&](double t) {
      const std::vector<Vec2> pts = inner_vertices(p, t, kClip);
      return !pts.empty() && min_width(VPolygon{pts}).width - 2.0 * (n - 1) * t > 0.0;
    };
    best.rho = bisect_last_true(0.0, r, positive, config);
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double f = oracle_fi(p, i, best.rho, n);
      if (f < lowest - tol) lowest = f, best.winner = i;
    }
    best.direction = p.normals[best.winner];
  }
  return best;
}

PolygonModel parse_model(const std::string& name) {
  if (name == "circle") return PolygonModel::kCircle;
  if (name == "ellipse") return PolygonModel::kEllipse;
  if (name == "smoothed") return PolygonModel::kSmoothed;
  throw GeometryError(ErrorCode::kMalformedInput, "unknown polygon model " + name);
}

HPolygon random_polygon(int m, std::uint64_t seed, PolygonModel model) {
  if (m < 3) throw GeometryError(ErrorCode::kMalformedInput, "m=" + std::to_string(m));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int attempt = 0;; ++attempt) {
    std::vector<double> angles(m);
    if (attempt < 8) {
      for (double& a : angles) a = two_pi * unit(rng);
      std::sort(angles.begin(), angles.end());
    } else {
      // Large m: iid angles leave near-collinear triples, so one angle per sector.
      for (int k = 0; k < m; ++k) angles[k] = two_pi * (k + 0.25 + 0.5 * unit(rng)) / m;
    }
    const double aspect = model == PolygonModel::kEllipse ? 0.3 + 0.7 * unit(rng) : 1.0;
    const double tilt = two_pi * unit(rng);
    const double phase = two_pi * unit(rng);
    std::vector<Vec2> pts;
    pts.reserve(m);
    for (double a : angles) {
      double radius = 1.0;
      if (model == PolygonModel::kSmoothed) radius += 0.05 * std::sin(3.0 * a + phase);
      const Vec2 q(radius * std::cos(a), aspect * radius * std::sin(a));
      pts.emplace_back(std::cos(tilt) * q.x() - std::sin(tilt) * q.y(), std::sin(tilt) * q.x() + std::cos(tilt) * q.y());
    }
    try {
      const Polygon p = canonicalize(VPolygon{convex_hull(pts)});
      if (10 * p.size() >= 9 * m) return p.h;
    } catch (const GeometryError&) {
    }
  }
}

}  // namespace potato
