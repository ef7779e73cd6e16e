#include "potato/geom_core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>

namespace potato {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInterior: return "EmptyInterior";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kDegenerateVertex: return "DegenerateVertex";
    case ErrorCode::kNotPlanar: return "NotPlanar";
    case ErrorCode::kNonIndependentRemoval: return "NonIndependentRemoval";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kNotQualified: return "NotQualified";
    case ErrorCode::kInvalidPieceCount: return "InvalidPieceCount";
    case ErrorCode::kVerificationFailed: return "VerificationFailed";
    case ErrorCode::kEmptyInner: return "EmptyInner";
    case ErrorCode::kMalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double angle_of(const Vec2& n) {
  double a = std::atan2(n.y(), n.x());
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

Vec2 intersect(const Vec2& n1, double b1, const Vec2& n2, double b2) {
  const double det = cross2(n1, n2);
  return Vec2((b1 * n2.y() - b2 * n1.y()) / det, (n1.x() * b2 - n2.x() * b1) / det);
}

struct Line {
  Vec2 n;
  double b;
  double angle;
};

double offset_scale(std::span<const double> offsets) {
  double s = 1.0;
  for (double b : offsets) s = std::max(s, std::abs(b));
  return s;
}

// Half-plane intersection over angle-sorted lines (no parallel duplicates),
// assumed bounded. A line whose feasible side does not strictly contain the
// current corner is dropped, so zero-length edges never survive. Returns the
// kept line indices in angular order.
std::vector<int> clip_sorted(const std::vector<Line>& lines, double eps) {
  std::deque<int> dq;
  auto corner = [&](int i, int j) { return intersect(lines[i].n, lines[i].b, lines[j].n, lines[j].b); };
  auto strictly_inside = [&](int i, const Vec2& p) { return lines[i].b - lines[i].n.dot(p) > eps; };
  auto parallel = [&](int i, int j) { return cross2(lines[i].n, lines[j].n) <= 1e-15; };

  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    while (dq.size() >= 2 && !strictly_inside(i, corner(dq[dq.size() - 2], dq.back()))) dq.pop_back();
    while (dq.size() >= 2 && !strictly_inside(i, corner(dq[0], dq[1]))) dq.pop_front();
    if (!dq.empty() && parallel(dq.back(), i)) {
      // Turn of pi or more between neighbours: nothing bounded survives here.
      if (lines[dq.back()].n.dot(lines[i].n) < 0) return {};
    }
    dq.push_back(i);
  }
  while (dq.size() >= 3 && !strictly_inside(dq[0], corner(dq[dq.size() - 2], dq.back()))) dq.pop_back();
  while (dq.size() >= 3 && !strictly_inside(dq.back(), corner(dq[0], dq[1]))) dq.pop_front();
  if (dq.size() < 3) return {};
  for (std::size_t k = 0; k < dq.size(); ++k) {
    if (parallel(dq[k], dq[(k + 1) % dq.size()])) return {};
  }
  return {dq.begin(), dq.end()};
}

// Normalizes, sorts, and merges parallel rows. Throws EmptyInterior on a
// vanishing normal with a violated offset.
std::vector<Line> prepare_lines(const HPolygon& input, const Tolerance& tol) {
  if (input.normals.size() != input.offsets.size())
    throw GeometryError(ErrorCode::kMalformedInput, "normals/offsets size mismatch");
  std::vector<Line> lines;
  lines.reserve(input.normals.size());
  for (int i = 0; i < input.size(); ++i) {
    Vec2 n = input.normals[i];
    double b = input.offsets[i];
    if (!std::isfinite(n.x()) || !std::isfinite(n.y()) || !std::isfinite(b))
      throw GeometryError(ErrorCode::kMalformedInput, "non-finite half-plane");
    const double sq = n.squaredNorm();
    if (sq <= 1e-28) {
      if (b < -tol.bound(std::abs(b))) throw GeometryError(ErrorCode::kEmptyInterior, "row 0 <= b with b < 0");
      continue;
    }
    // Already-unit rows are kept bit-for-bit so canonicalization is idempotent.
    if (std::abs(sq - 1.0) > 4e-16) {
      const double len = std::sqrt(sq);
      n /= len;
      b /= len;
    }
    lines.push_back({n, b, angle_of(n)});
  }
  std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    return a.b < b.b;
  });
  std::vector<Line> merged;
  merged.reserve(lines.size());
  auto same_direction = [](const Line& a, const Line& b) {
    return std::abs(cross2(a.n, b.n)) <= 1e-15 && a.n.dot(b.n) > 0;
  };
  for (const Line& l : lines) {
    if (!merged.empty() && same_direction(merged.back(), l)) {
      if (l.b < merged.back().b) merged.back() = Line{merged.back().n, l.b, merged.back().angle};
      continue;
    }
    merged.push_back(l);
  }
  if (merged.size() >= 2 && same_direction(merged.front(), merged.back())) {
    merged.front().b = std::min(merged.front().b, merged.back().b);
    merged.pop_back();
  }
  return merged;
}

bool positively_spanning(const std::vector<Line>& lines) {
  if (lines.size() < 3) return false;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const double a0 = lines[k].angle;
    const double a1 = k + 1 < lines.size() ? lines[k + 1].angle : lines[0].angle + kTwoPi;
    if (a1 - a0 >= std::numbers::pi - 1e-12) return false;
  }
  return true;
}

Incircle chebyshev(const std::vector<Line>& lines, double cap, const Tolerance& tol) {
  std::vector<Halfspace> rows;
  rows.reserve(lines.size() + 1);
  for (const Line& l : lines) rows.push_back({Vec3(l.n.x(), l.n.y(), 1.0), l.b});
  rows.push_back({Vec3(0, 0, 1), cap});
  LpOptions opt;
  opt.tol = tol;
  const LpResult r = small_lp(3, rows, Vec3(0, 0, 1), opt);
  if (!r.optimal()) return {-1.0, Vec2::Zero()};
  return {r.value, Vec2(r.point.x(), r.point.y())};
}

Polygon assemble(const std::vector<Line>& lines, std::vector<int> kept) {
  // Rotate so the smallest angle comes first.
  auto first = std::min_element(kept.begin(), kept.end(),
                                [&](int a, int b) { return lines[a].angle < lines[b].angle; });
  std::rotate(kept.begin(), first, kept.end());
  Polygon out;
  const int m = static_cast<int>(kept.size());
  out.h.normals.reserve(m);
  out.h.offsets.reserve(m);
  for (int idx : kept) {
    out.h.normals.push_back(lines[idx].n);
    out.h.offsets.push_back(lines[idx].b);
  }
  out.v.vertices.reserve(m);
  for (int k = 0; k < m; ++k) {
    const int j = (k + 1) % m;
    out.v.vertices.push_back(intersect(out.h.normals[k], out.h.offsets[k], out.h.normals[j], out.h.offsets[j]));
  }
  return out;
}

}  // namespace

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  auto turn = [](const Vec2& o, const Vec2& a, const Vec2& b) { return cross2(a - o, b - o); };
  for (const Vec2& p : points) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && turn(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

Polygon canonicalize(const HPolygon& input, const Tolerance& tol) {
  std::vector<Line> lines = prepare_lines(input, tol);
  std::vector<double> offsets;
  offsets.reserve(lines.size());
  for (const Line& l : lines) offsets.push_back(l.b);
  const double scale = offset_scale(offsets);
  const double eps = tol.bound(scale);

  if (!positively_spanning(lines)) {
    const Incircle c = chebyshev(lines, scale, tol);
    if (c.radius <= eps) throw GeometryError(ErrorCode::kEmptyInterior, "half-planes have no common interior");
    throw GeometryError(ErrorCode::kUnbounded, "half-planes do not bound a region");
  }
  const Incircle c = chebyshev(lines, 4.0 * scale, tol);
  if (c.radius <= eps) throw GeometryError(ErrorCode::kEmptyInterior, "half-planes have no common interior");

  std::vector<int> kept = clip_sorted(lines, eps);
  if (kept.size() < 3) throw GeometryError(ErrorCode::kEmptyInterior, "clipping left fewer than three edges");
  return assemble(lines, std::move(kept));
}

Polygon canonicalize(const VPolygon& input, const Tolerance& tol) {
  for (const Vec2& p : input.vertices)
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
      throw GeometryError(ErrorCode::kMalformedInput, "non-finite vertex");
  const std::vector<Vec2> hull = convex_hull(input.vertices);
  if (hull.size() < 3) throw GeometryError(ErrorCode::kEmptyInterior, "fewer than three hull vertices");
  HPolygon h;
  const int n = static_cast<int>(hull.size());
  for (int k = 0; k < n; ++k) {
    const Vec2 d = hull[(k + 1) % n] - hull[k];
    const double len = d.norm();
    if (len == 0.0) continue;
    const Vec2 normal(d.y() / len, -d.x() / len);
    h.normals.push_back(normal);
    h.offsets.push_back(normal.dot(hull[k]));
  }
  return canonicalize(h, tol);
}

double directional_width(const VPolygon& p, const Vec2& direction) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec2& x : p.vertices) {
    const double s = direction.dot(x);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return p.vertices.empty() ? 0.0 : hi - lo;
}

WidthResult min_width(const VPolygon& p) {
  WidthResult best;
  const int n = p.size();
  if (n < 2) return best;
  best.width = std::numeric_limits<double>::infinity();
  const auto& v = p.vertices;
  int j = 1;
  for (int i = 0; i < n; ++i) {
    const Vec2 d = v[(i + 1) % n] - v[i];
    const double len = d.norm();
    if (len == 0.0) continue;
    const Vec2 normal(d.y() / len, -d.x() / len);
    auto depth = [&](int k) { return normal.dot(v[i] - v[k % n]); };
    if (j == i) j = (i + 1) % n;
    while (depth(j + 1) > depth(j)) j = (j + 1) % n;
    const double w = depth(j);
    if (w < best.width) {
      best.width = w;
      best.direction = normal;
      best.edge = i;
      best.antipode = j % n;
    }
  }
  return best;
}

double diameter(const VPolygon& p) {
  const int n = p.size();
  if (n < 2) return 0.0;
  const auto& v = p.vertices;
  if (n == 2) return (v[1] - v[0]).norm();
  double best = 0.0;
  int j = 1;
  auto area = [&](int a, int b, int c) { return std::abs(cross2(v[b % n] - v[a % n], v[c % n] - v[a % n])); };
  for (int i = 0; i < n; ++i) {
    while (area(i, i + 1, j + 1) > area(i, i + 1, j)) j = (j + 1) % n;
    best = std::max({best, (v[i] - v[j]).norm(), (v[(i + 1) % n] - v[j]).norm()});
  }
  return best;
}

std::optional<Polygon> inner_body(const HPolygon& p, double t, const Tolerance& tol) {
  HPolygon shifted = p;
  for (double& b : shifted.offsets) b -= t;
  try {
    return canonicalize(shifted, tol);
  } catch (const GeometryError& e) {
    if (e.code() == ErrorCode::kEmptyInterior) return std::nullopt;
    throw;
  }
}

std::vector<Vec2> inner_vertices(const HPolygon& p, double t, const Tolerance& tol) {
  std::vector<Line> lines;
  lines.reserve(p.size());
  for (int i = 0; i < p.size(); ++i) lines.push_back({p.normals[i], p.offsets[i] - t, angle_of(p.normals[i])});
  std::vector<double> offsets(p.offsets.begin(), p.offsets.end());
  const double scale = offset_scale(offsets);
  const double eps = tol.bound(scale);
  const Incircle c = chebyshev(lines, 4.0 * scale, tol);
  if (c.radius < -eps) return {};
  if (c.radius > eps) {
    const std::vector<int> kept = clip_sorted(lines, eps);
    if (kept.size() >= 3) return assemble(lines, kept).v.vertices;
  }
  // Collapsed to a point or a segment: its ends are extreme along an axis.
  std::vector<Halfspace> rows;
  rows.reserve(lines.size());
  for (const Line& l : lines) rows.push_back({Vec3(l.n.x(), l.n.y(), 0.0), l.b + eps});
  std::vector<Vec2> out;
  for (const Vec3& dir : {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0)}) {
    LpOptions opt;
    opt.tol = tol;
    const LpResult r = small_lp(2, rows, dir, opt);
    if (!r.optimal()) continue;
    const Vec2 q(r.point.x(), r.point.y());
    bool dup = false;
    for (const Vec2& o : out) dup |= (o - q).norm() <= 8.0 * eps;
    if (!dup) out.push_back(q);
  }
  if (out.size() <= 1) return {c.center};
  return out;
}

Incircle inscribed_circle(std::span<const Vec2> normals, std::span<const double> offsets, const Tolerance& tol) {
  std::vector<Halfspace> rows;
  rows.reserve(normals.size());
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const double len = normals[i].norm();
    rows.push_back({Vec3(normals[i].x(), normals[i].y(), len), offsets[i]});
  }
  LpOptions opt;
  opt.tol = tol;
  const LpResult r = small_lp(3, rows, Vec3(0, 0, 1), opt);
  if (r.status == LpStatus::kUnbounded) return {std::numeric_limits<double>::infinity(), Vec2::Zero()};
  if (!r.optimal()) return {-1.0, Vec2::Zero()};
  return {r.value, Vec2(r.point.x(), r.point.y())};
}

Incircle inradius_incenter(const HPolygon& p, const Tolerance& tol) {
  return inscribed_circle(p.normals, p.offsets, tol);
}

}  // namespace potato
