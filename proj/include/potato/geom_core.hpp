#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "potato/errors.hpp"
#include "potato/small_lp.hpp"
#include "potato/tolerance.hpp"

namespace potato {

using Vec2 = Eigen::Vector2d;

// Half-plane description {x : normals[i] . x <= offsets[i]} of a convex polygon.
// Canonical instances have unit normals, no redundant rows, and rows sorted
// counterclockwise by normal angle starting from angle 0.
struct HPolygon {
  std::vector<Vec2> normals;
  std::vector<double> offsets;

  int size() const { return static_cast<int>(normals.size()); }
};

// Counterclockwise vertex list.
struct VPolygon {
  std::vector<Vec2> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
};

// Both forms of one polygon. vertices[k] is the corner shared by rows k and k+1,
// so edge k runs from vertices[k-1] to vertices[k].
struct Polygon {
  HPolygon h;
  VPolygon v;

  int size() const { return h.size(); }
};

struct WidthResult {
  double width = 0.0;
  Vec2 direction = Vec2::Zero();  // outward unit normal of `edge`
  int edge = -1;                  // edge vertices[edge] -> vertices[edge + 1]
  int antipode = -1;              // vertex farthest from that edge
};

Polygon canonicalize(const VPolygon& input, const Tolerance& tol = {});
Polygon canonicalize(const HPolygon& input, const Tolerance& tol = {});

double directional_width(const VPolygon& p, const Vec2& direction);

// Rotating calipers; ties go to the lowest edge index.
WidthResult min_width(const VPolygon& p);

double diameter(const VPolygon& p);

// {A x <= b - t}; std::nullopt once the region has no interior.
std::optional<Polygon> inner_body(const HPolygon& p, double t, const Tolerance& tol = {});

// Vertices of {A x <= b - t} for a canonical p, tolerating a collapsed result:
// may return one or two points (or none when t exceeds the inradius).
std::vector<Vec2> inner_vertices(const HPolygon& p, double t, const Tolerance& tol = {});

struct Incircle {
  double radius = 0.0;
  Vec2 center = Vec2::Zero();
};

Incircle inradius_incenter(const HPolygon& p, const Tolerance& tol = {});

// Largest inscribed circle of {A x <= b} intersected with extra rows; radius
// is negative when the region is empty.
Incircle inscribed_circle(std::span<const Vec2> normals, std::span<const double> offsets,
                          const Tolerance& tol = {});

// Convex hull, counterclockwise, collinear points removed (monotone chain).
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace potato
