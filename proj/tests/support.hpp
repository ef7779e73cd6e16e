#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "potato/dome.hpp"
#include "potato/geom_core.hpp"
#include "potato/hierarchy.hpp"

namespace potato::testing {

inline const double kSqrt3 = std::sqrt(3.0);

inline HPolygon unit_square() {
  return canonicalize(VPolygon{{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}}).h;
}

inline HPolygon triangle() {
  return canonicalize(VPolygon{{Vec2(0, 0), Vec2(1, 0), Vec2(0.5, kSqrt3 / 2)}}).h;
}

// Circumradius r, first vertex on the positive x axis.
inline VPolygon regular_vertices(int m, double r = 1.0, double phase = 0.0) {
  VPolygon v;
  for (int k = 0; k < m; ++k) {
    const double a = phase + 2.0 * std::numbers::pi * k / m;
    v.vertices.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return v;
}

inline HPolygon hexagon() { return canonicalize(regular_vertices(6)).h; }

// Edge normals at k * 2pi/m, offsets 1 (inradius 1).
inline HPolygon regular_h(int m) {
  HPolygon p;
  for (int k = 0; k < m; ++k) {
    const double a = 2.0 * std::numbers::pi * k / m;
    p.normals.emplace_back(std::cos(a), std::sin(a));
    p.offsets.push_back(1.0);
  }
  return p;
}

inline bool rel_close(double a, double b, double rel, double floor = 0.0) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), floor});
}

inline Hierarchy make_hierarchy(const HPolygon& p, bool perturbed, std::uint64_t seed = 0, bool verify = false) {
  Dome d = build_dome(p);
  if (perturbed) d = perturb(d, seed);
  return build_hierarchy(d, bounded_core(d), {verify});
}

// All rows of the dome, label order.
inline std::vector<Halfspace> dome_rows(const Dome& d) {
  std::vector<Halfspace> rows;
  for (int l = 0; l <= d.size(); ++l) rows.push_back(d.halfspace(l));
  return rows;
}

inline Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v / v.norm();
}

// x -> R(angle) x + shift, then scaled by lambda.
inline HPolygon transform(const HPolygon& p, double angle, const Vec2& shift, double lambda = 1.0) {
  const Eigen::Rotation2Dd r(angle);
  HPolygon q;
  for (int i = 0; i < p.size(); ++i) {
    const Vec2 a = r * p.normals[i];
    q.normals.push_back(a);
    q.offsets.push_back(lambda * (p.offsets[i] + a.dot(shift)));
  }
  return q;
}

inline double diam(const HPolygon& p) { return diameter(canonicalize(p).v); }

}  // namespace potato::testing
