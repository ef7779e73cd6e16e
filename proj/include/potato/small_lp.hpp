#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "potato/tolerance.hpp"

namespace potato {

using Vec3 = Eigen::Vector3d;

// normal . x <= offset. Only the leading `dim` coordinates are read.
struct Halfspace {
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Vec3 point = Vec3::Zero();
  double value = 0.0;
  // Indices of the constraints that pin the optimum (at most dim of them).
  std::vector<int> basis;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

struct LpOptions {
  std::uint64_t seed = 0;
  Tolerance tol;
  // Half-width of the bounding box used to start the recursion; 0 picks one
  // from the constraint offsets.
  double box = 0.0;
};

// Maximizes objective . x subject to the halfspaces, for dim in {1, 2, 3}.
// Seidel's randomized incremental algorithm: expected linear time, and fully
// deterministic for a fixed seed. When several constraints tie as the binding
// one, the lowest index enters the basis.
LpResult small_lp(int dim, std::span<const Halfspace> constraints, const Vec3& objective,
                  const LpOptions& options = {});

}  // namespace potato
