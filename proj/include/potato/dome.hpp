#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "potato/geom_core.hpp"

namespace potato {

// The lift {(x, t) : A x <= b - t, t >= 0} of a polygon. Facet labels 0..m-1
// are the lifted edges with normal (A_i, 1); label m is the floor -t <= 0.
// Lifted rows keep the unnormalized normal (A_i, 1): the slice at height t is
// exactly the inner body at distance t.
struct Dome {
  HPolygon base;                // canonical polygon being lifted (never perturbed)
  std::vector<double> offsets;  // lifted offsets b_i, perturbed when perturbation > 0
  double scale = 1.0;           // diameter of base
  double perturbation = 0.0;    // delta used by perturb()
  Tolerance tol;

  int size() const { return base.size(); }
  int floor_label() const { return base.size(); }
  bool is_floor(int label) const { return label == base.size(); }

  Halfspace halfspace(int label) const;
  // offset - normal . x; negative means x violates the facet.
  double slack(int label, const Vec3& x) const;
  double eps() const { return tol.bound(scale); }
};

Dome build_dome(const HPolygon& p, const Tolerance& tol = {});

// Shifts every lifted offset down by delta * eta_i with eta_i ~ U(0, 1) and
// delta = min(1e-7 * diameter, a tenth of the shortest edge times the
// sine of the sharpest turn). The floor is left alone.
Dome perturb(const Dome& d, std::uint64_t seed);

// Intersection point of three facet planes of the dome.
Vec3 facet_point(const Dome& d, int a, int b, int c);

struct LatticeVertex {
  Vec3 point = Vec3::Zero();
  std::array<int, 3> facets{};  // sorted labels
  std::array<int, 3> edges{-1, -1, -1};
};

struct LatticeEdge {
  std::array<int, 2> facets{};  // sorted labels
  std::array<int, 2> vertices{};
};

// Face lattice of a simple 3-polytope: every vertex on three facets, every
// edge on two. Facets are addressed by position in `labels` (ascending, floor
// last); their vertex cycles and neighbour lists are stored flat.
class FaceLattice {
 public:
  std::vector<LatticeVertex> vertices;
  std::vector<LatticeEdge> edges;
  std::vector<int> labels;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_facets() const { return static_cast<int>(labels.size()); }

  int facet_index(int label) const;
  std::span<const int> cycle(int facet) const;
  std::span<const int> neighbors(int facet) const;  // neighbour labels

  int find_vertex(int a, int b, int c) const;
  int find_edge(int a, int b) const;

  // Rebuilds cycles, neighbour lists and lookup tables from vertices/edges.
  void finalize();

  std::size_t storage_bytes() const;

 private:
  std::vector<int> cycle_start_, cycle_data_;
  std::vector<int> neighbor_start_, neighbor_data_;
  std::vector<std::pair<std::uint64_t, int>> vertex_keys_, edge_keys_;
};

std::uint64_t triple_key(int a, int b, int c);
std::uint64_t pair_key(int a, int b);

// Full lattice of a generic dome. Throws DegenerateVertex when a fourth facet
// passes through a vertex.
FaceLattice face_lattice(const Dome& d);

// Lattice of the dome cut out by the given edge labels (ascending) plus the
// floor. The labels must bound a polygon. Runs the straight-skeleton sweep
// of that polygon: edges move inward at unit speed and each collapse is a
// dome vertex.
FaceLattice build_lattice(const Dome& d, std::span<const int> edge_labels, bool check_degenerate);

struct BoundedCore {
  std::vector<int> labels;  // ascending, always ends with the floor
};

BoundedCore bounded_core(const Dome& d);

}  // namespace potato
