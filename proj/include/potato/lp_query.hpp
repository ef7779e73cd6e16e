#pragma once

#include "potato/hierarchy.hpp"
#include "potato/small_lp.hpp"

namespace potato {

// Basis label used for the query's own plane or extra halfspace.
constexpr int kQueryLabel = -1;

// Per-call counters; callers sum them when they want totals.
struct QueryStats {
  long queries = 0;
  long levels_visited = 0;
  long facet_subproblems = 0;
  long vertex_inspections = 0;
  long search_steps = 0;

  QueryStats& operator+=(const QueryStats& o) {
    queries += o.queries;
    levels_visited += o.levels_visited;
    facet_subproblems += o.facet_subproblems;
    vertex_inspections += o.vertex_inspections;
    search_steps += o.search_steps;
    return *this;
  }
};

// {x : normal . x = offset}
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
};

// All queries maximize c . x and break ties toward the lexicographically
// smallest point. Basis entries are facet labels of the dome (kQueryLabel
// for the plane or extra halfspace).

// Over the whole dome, walking from the core down the kill records.
LpResult lp_max(const Hierarchy& h, const Vec3& c, QueryStats* stats = nullptr);

// Over the facet `label` of level `level`. Throws OutOfRange if the facet is
// not present at that level.
LpResult lp_max_facet(const Hierarchy& h, int level, int label, const Vec3& c, QueryStats* stats = nullptr);

// Over the dome cut by a plane. Status kInfeasible when the plane misses it.
LpResult lp_max_section(const Hierarchy& h, const Plane& plane, const Vec3& c, QueryStats* stats = nullptr);

// Over the dome plus one extra halfspace: the unconstrained optimum if it
// complies, otherwise the optimum on the halfspace's boundary plane.
LpResult lp_max_constrained(const Hierarchy& h, const Vec3& c, const Halfspace& extra,
                            QueryStats* stats = nullptr);

// Highest point of edge facet i of the dome.
double facet_max_t(const Hierarchy& h, int i, QueryStats* stats = nullptr);

}  // namespace potato
