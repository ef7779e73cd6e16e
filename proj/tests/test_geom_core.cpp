#include <doctest.h>

#include <Eigen/Dense>

#include "support.hpp"

using namespace potato;
using namespace potato::testing;

namespace {

// Best vertex by trying every basis of `dim` constraints.
double enumerate_lp(int dim, const std::vector<Halfspace>& rows, const Vec3& c) {
  double best = -std::numeric_limits<double>::infinity();
  const int k = static_cast<int>(rows.size());
  auto consider = [&](const Vec3& x) {
    for (const auto& r : rows)
      if (r.normal.head(dim).dot(x.head(dim)) > r.offset + 1e-9) return;
    best = std::max(best, c.head(dim).dot(x.head(dim)));
  };
  if (dim == 2) {
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        Eigen::Matrix2d m;
        m << rows[a].normal.head(2).transpose(), rows[b].normal.head(2).transpose();
        if (std::abs(m.determinant()) < 1e-12) continue;
        const Eigen::Vector2d x = m.inverse() * Eigen::Vector2d(rows[a].offset, rows[b].offset);
        consider(Vec3(x.x(), x.y(), 0));
      }
  } else {
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        for (int e = b + 1; e < k; ++e) {
          Eigen::Matrix3d m;
          m << rows[a].normal.transpose(), rows[b].normal.transpose(), rows[e].normal.transpose();
          if (std::abs(m.determinant()) < 1e-12) continue;
          consider(m.inverse() * Vec3(rows[a].offset, rows[b].offset, rows[e].offset));
        }
  }
  return best;
}

}  // namespace

TEST_CASE("canonicalize the unit square") {
  const Polygon p = canonicalize(VPolygon{{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}});
  REQUIRE(p.size() == 4);
  const Vec2 normals[] = {Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)};
  const double offsets[] = {1, 1, 0, 0};
  for (int i = 0; i < 4; ++i) {
    CHECK((p.h.normals[i] - normals[i]).norm() < 1e-15);
    CHECK(p.h.offsets[i] == doctest::Approx(offsets[i]).epsilon(1e-15));
  }
  CHECK(p.v.size() == 4);
}

TEST_CASE("canonicalize drops duplicate and slack rows") {
  HPolygon raw;
  raw.normals = {Vec2(1, 0), Vec2(1, 0), Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)};
  raw.offsets = {1, 1, 5, 1, 0, 0};
  const Polygon p = canonicalize(raw);
  const HPolygon sq = unit_square();
  REQUIRE(p.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK((p.h.normals[i] - sq.normals[i]).norm() < 1e-15);
    CHECK(p.h.offsets[i] == doctest::Approx(sq.offsets[i]));
  }
}

TEST_CASE("canonicalize rejects empty and unbounded regions") {
  HPolygon slab;
  slab.normals = {Vec2(1, 0), Vec2(-1, 0)};
  slab.offsets = {0, -1};
  try {
    canonicalize(slab);
    FAIL("expected EmptyInterior");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::kEmptyInterior);
  }
  HPolygon wedge;
  wedge.normals = {Vec2(1, 0), Vec2(0, 1)};
  wedge.offsets = {1, 1};
  try {
    canonicalize(wedge);
    FAIL("expected Unbounded");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::kUnbounded);
  }
  HPolygon flat;
  flat.normals = {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)};
  flat.offsets = {1, 0, 0, 0};
  CHECK_THROWS_AS(canonicalize(flat), GeometryError);
}

TEST_CASE("canonicalize normalizes and sorts raw rows") {
  HPolygon raw;
  raw.normals = {Vec2(0, -3), Vec2(2, 0), Vec2(-1, 0), Vec2(0, 0.5)};
  raw.offsets = {0, 2, 0, 0.5};
  const Polygon p = canonicalize(raw);
  const HPolygon sq = unit_square();
  REQUIRE(p.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK((p.h.normals[i] - sq.normals[i]).norm() < 1e-15);
    CHECK(p.h.offsets[i] == doctest::Approx(sq.offsets[i]).epsilon(1e-15));
  }
}

TEST_CASE("canonicalize is idempotent bit for bit") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Vec2> pts;
    for (int k = 0; k < 40; ++k) pts.emplace_back(u(rng), u(rng));
    const Polygon once = canonicalize(VPolygon{pts});
    const Polygon twice = canonicalize(once.h);
    REQUIRE(twice.size() == once.size());
    for (int i = 0; i < once.size(); ++i) {
      CHECK(twice.h.normals[i] == once.h.normals[i]);
      CHECK(twice.h.offsets[i] == once.h.offsets[i]);
    }
  }
}

TEST_CASE("directional width") {
  const VPolygon sq{{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}};
  CHECK(directional_width(sq, Vec2(1, 0)) == doctest::Approx(1.0));
  CHECK(directional_width(sq, Vec2(std::sqrt(0.5), std::sqrt(0.5))) == doctest::Approx(std::sqrt(2.0)));
  const VPolygon tri{{Vec2(0, 0), Vec2(1, 0), Vec2(0.5, kSqrt3 / 2)}};
  CHECK(directional_width(tri, Vec2(0, -1)) == doctest::Approx(kSqrt3 / 2).epsilon(1e-15));
}

TEST_CASE("min width") {
  const WidthResult sq = min_width(canonicalize(unit_square()).v);
  CHECK(sq.width == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((std::abs(sq.direction.x()) == doctest::Approx(1.0) || std::abs(sq.direction.y()) == doctest::Approx(1.0)));
  CHECK(min_width(canonicalize(triangle()).v).width == doctest::Approx(kSqrt3 / 2).epsilon(1e-14));
  CHECK(min_width(canonicalize(hexagon()).v).width == doctest::Approx(kSqrt3).epsilon(1e-14));
}

TEST_CASE("min width is attained at an edge normal and beats random directions") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec2> pts;
    for (int k = 0; k < 30; ++k) pts.emplace_back(u(rng), 0.4 * u(rng));
    const Polygon p = canonicalize(VPolygon{pts});
    const WidthResult w = min_width(p.v);
    double brute = std::numeric_limits<double>::infinity();
    for (const Vec2& n : p.h.normals) brute = std::min(brute, directional_width(p.v, n));
    CHECK(w.width == doctest::Approx(brute).epsilon(1e-12));
    for (int k = 0; k < 1000; ++k) {
      const double a = std::numbers::pi * (u(rng) + 1);
      CHECK(w.width <= directional_width(p.v, Vec2(std::cos(a), std::sin(a))) + 1e-12);
    }
  }
}

TEST_CASE("inner body") {
  const auto quarter = inner_body(unit_square(), 0.25);
  REQUIRE(quarter.has_value());
  CHECK(quarter->size() == 4);
  for (const Vec2& v : quarter->v.vertices) {
    CHECK((std::abs(v.x() - 0.25) < 1e-15 || std::abs(v.x() - 0.75) < 1e-15));
    CHECK((std::abs(v.y() - 0.25) < 1e-15 || std::abs(v.y() - 0.75) < 1e-15));
  }
  CHECK_FALSE(inner_body(unit_square(), 0.6).has_value());

  const auto small = inner_body(triangle(), kSqrt3 / 12);
  REQUIRE(small.has_value());
  REQUIRE(small->size() == 3);
  const auto& v = small->v.vertices;
  for (int k = 0; k < 3; ++k) CHECK((v[k] - v[(k + 1) % 3]).norm() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("inner bodies shrink, stay inside, and satisfy the width identity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Vec2> pts;
    for (int k = 0; k < 25; ++k) pts.emplace_back(u(rng), u(rng));
    const Polygon p = canonicalize(VPolygon{pts});
    const double r = inradius_incenter(p.h).radius;
    double prev_width = min_width(p.v).width;
    std::vector<Vec2> prev = p.v.vertices;
    for (int s = 1; s < 10; ++s) {
      const double t = r * s / 10.0;
      const auto in = inner_body(p.h, t);
      REQUIRE(in.has_value());
      for (const Vec2& x : in->v.vertices) {
        for (int i = 0; i < p.size(); ++i) CHECK(p.h.normals[i].dot(x) <= p.h.offsets[i] - t + 1e-12);
      }
      // width of the rounded body equals width(inner) + 2t.
      double rounded = std::numeric_limits<double>::infinity();
      for (const Vec2& n : p.h.normals) rounded = std::min(rounded, directional_width(in->v, n) + 2 * t);
      CHECK(rounded == doctest::Approx(min_width(in->v).width + 2 * t).epsilon(1e-12));
      CHECK(min_width(in->v).width <= prev_width + 1e-12);
      prev_width = min_width(in->v).width;
      prev = in->v.vertices;
    }
  }
}

TEST_CASE("small_lp examples") {
  std::vector<Halfspace> sq;
  const HPolygon h = unit_square();
  for (int i = 0; i < 4; ++i) sq.push_back({Vec3(h.normals[i].x(), h.normals[i].y(), 0), h.offsets[i]});
  const LpResult a = small_lp(2, sq, Vec3(1, 1, 0));
  REQUIRE(a.optimal());
  CHECK(a.value == doctest::Approx(2.0));
  CHECK((a.point.head(2) - Eigen::Vector2d(1, 1)).norm() < 1e-12);

  std::vector<Halfspace> lifted;
  for (int i = 0; i < 4; ++i) lifted.push_back({Vec3(h.normals[i].x(), h.normals[i].y(), 1), h.offsets[i]});
  lifted.push_back({Vec3(0, 0, -1), 0});
  const LpResult b = small_lp(3, lifted, Vec3(0, 0, 1));
  REQUIRE(b.optimal());
  CHECK(b.value == doctest::Approx(0.5));
  CHECK((b.point - Vec3(0.5, 0.5, 0.5)).norm() < 1e-12);

  const std::vector<Halfspace> contradiction = {{Vec3(1, 0, 0), 0}, {Vec3(-1, 0, 0), -1}};
  CHECK(small_lp(1, contradiction, Vec3(1, 0, 0)).status == LpStatus::kInfeasible);

  const std::vector<Halfspace> open = {{Vec3(1, 0, 0), 1}};
  CHECK(small_lp(2, open, Vec3(-1, 0, 0)).status == LpStatus::kUnbounded);
}

TEST_CASE("small_lp is deterministic per seed and reports a tight basis") {
  std::mt19937_64 rng(11);
  std::vector<Halfspace> rows;
  for (int k = 0; k < 30; ++k) rows.push_back({random_direction(rng), 1.0});
  const Vec3 c = random_direction(rng);
  LpOptions o;
  o.seed = 5;
  const LpResult a = small_lp(3, rows, c, o);
  const LpResult b = small_lp(3, rows, c, o);
  REQUIRE(a.optimal());
  CHECK(a.point == b.point);
  CHECK(a.basis == b.basis);
  CHECK(a.basis.size() <= 3);
  for (int id : a.basis) CHECK(std::abs(rows[id].normal.dot(a.point) - rows[id].offset) < 1e-9);
}

TEST_CASE("small_lp agrees with vertex enumeration") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.3, 1.5);
  for (int dim : {2, 3}) {
    for (int poly = 0; poly < 20; ++poly) {
      std::vector<Halfspace> rows;
      for (int k = 0; k < dim; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = 1;
        rows.push_back({e, 2.0});
        rows.push_back({-e, 2.0});
      }
      while (static_cast<int>(rows.size()) < 12) {
        Vec3 n = random_direction(rng);
        if (dim == 2) n.z() = 0;
        rows.push_back({n / n.norm(), u(rng)});
      }
      for (int q = 0; q < 25; ++q) {
        Vec3 c = random_direction(rng);
        if (dim == 2) c.z() = 0;
        LpOptions o;
        o.seed = q;
        const LpResult r = small_lp(dim, rows, c, o);
        REQUIRE(r.optimal());
        const double ref = enumerate_lp(dim, rows, c);
        CHECK(rel_close(r.value, ref, 1e-9, 1.0));
      }
    }
  }
}

TEST_CASE("inradius and incenter") {
  const Incircle sq = inradius_incenter(unit_square());
  CHECK(sq.radius == doctest::Approx(0.5));
  CHECK((sq.center - Vec2(0.5, 0.5)).norm() < 1e-12);
  CHECK(inradius_incenter(triangle()).radius == doctest::Approx(kSqrt3 / 6).epsilon(1e-14));
  CHECK(inradius_incenter(hexagon()).radius == doctest::Approx(kSqrt3 / 2).epsilon(1e-14));
}

TEST_CASE("inner vertices tolerate collapse") {
  const auto point = inner_vertices(unit_square(), 0.5);
  REQUIRE(point.size() == 1);
  CHECK((point[0] - Vec2(0.5, 0.5)).norm() < 1e-9);
  HPolygon rect;
  rect.normals = {Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)};
  rect.offsets = {2, 1, 0, 0};
  const auto seg = inner_vertices(rect, 0.5);
  REQUIRE(seg.size() == 2);
  CHECK(directional_width(VPolygon{seg}, Vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(inner_vertices(unit_square(), 0.6).empty());
}
