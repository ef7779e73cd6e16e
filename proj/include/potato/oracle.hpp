#pragma once

#include <cstdint>
#include <string>

#include "potato/geom_core.hpp"

namespace potato {

struct OracleConfig {
  double tolerance = 1e-12;  // absolute, in t
  int max_iterations = 200;
  std::uint64_t seed = 0;
};

// width_{A_i}(inner_body(P, t)) - 2 (n - 1) t by clipping from scratch.
// Throws EmptyInner when the inner body is empty.
double oracle_fi(const HPolygon& p, int i, double t, int n);

// Largest t at which row i still touches {A x <= b - t}, by bisection.
double oracle_Mi(const HPolygon& p, int i, const OracleConfig& config = {});

struct OracleSolution {
  double rho = 0.0;
  Vec2 direction = Vec2::Zero();
  int winner = -1;
};

// Bisects every qualifying f_i; O(m^2 log(1/tol)).
OracleSolution oracle_solve(const HPolygon& p, int n, const OracleConfig& config = {});

enum class PolygonModel { kCircle, kEllipse, kSmoothed };

PolygonModel parse_model(const std::string& name);

// Canonical convex polygon with at least 0.9 m vertices, deterministic per seed.
HPolygon random_polygon(int m, std::uint64_t seed, PolygonModel model = PolygonModel::kCircle);

}  // namespace potato
