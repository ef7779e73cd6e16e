#pragma once

#include <span>
#include <string>
#include <vector>

#include "potato/dome.hpp"

namespace potato {

// Facet adjacency as lists of facet positions.
using FacetGraph = std::vector<std::vector<int>>;

FacetGraph facet_graph(const FaceLattice& lattice);

// Colors in 1..6, indexed like the graph.
using Coloring = std::vector<int>;

// Peels a vertex of degree <= 5 until the graph is empty, then colors greedily
// in reverse peel order. Throws NotPlanar if the peel gets stuck.
Coloring six_color(const FacetGraph& graph);

// The color class with the most members outside the core (smallest color id
// on ties), minus the core. `labels` are the facet labels the coloring indexes.
std::vector<int> pick_color(const Coloring& coloring, std::span<const int> labels, const BoundedCore& core);

// How a vertex of level l+1 relates to level l.
struct KillRecord {
  int survivor = -1;  // vertex id in level l when the vertex is still there
  int killer = -1;    // otherwise, the removed facet label it violates
};

struct PeelResult {
  FaceLattice lattice;
  std::vector<KillRecord> kills;  // one per vertex of the new lattice
};

// Drops an independent set of facets from the lattice. Every new vertex is
// charged to the unique removed facet it violates. Throws
// NonIndependentRemoval when two removed facets share an edge.
PeelResult peel_level(const Dome& d, const FaceLattice& lattice, std::span<const int> removal);

struct HierarchyLevel {
  FaceLattice lattice;
  std::vector<int> removed;       // facets of this level missing from the next
  std::vector<KillRecord> kills;  // relative to the previous level; empty at level 0
};

struct HierarchyOptions {
  // Re-checks nesting and kill uniqueness numerically after every level.
  bool verify = false;
};

// Levels P_0 (the whole dome) through P_k (the core). Immutable once built.
class Hierarchy {
 public:
  Dome dome;
  BoundedCore core;
  std::vector<HierarchyLevel> levels;
  std::vector<int> top_level;  // per label: deepest level that still has the facet

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  std::size_t total_vertices() const;
};

Hierarchy build_hierarchy(const Dome& d, const BoundedCore& core, const HierarchyOptions& options = {});

// One block per level: facet labels, V/E/F counts, removed facets and the kill
// record of every vertex (keyed by its facet triple).
std::string dump_hierarchy(const Hierarchy& h);

}  // namespace potato
