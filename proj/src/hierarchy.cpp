#include "potato/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace potato {

FacetGraph facet_graph(const FaceLattice& lattice) {
  FacetGraph g(lattice.num_facets());
  for (int f = 0; f < lattice.num_facets(); ++f) {
    for (int label : lattice.neighbors(f)) g[f].push_back(lattice.facet_index(label));
  }
  return g;
}

Coloring six_color(const FacetGraph& graph) {
  const int n = static_cast<int>(graph.size());
  std::vector<int> degree(n);
  std::vector<char> queued(n, 0), peeled(n, 0);
  std::deque<int> ready;
  for (int v = 0; v < n; ++v) {
    degree[v] = static_cast<int>(graph[v].size());
    if (degree[v] <= 5) {
      ready.push_back(v);
      queued[v] = 1;
    }
  }
  std::vector<int> order;
  order.reserve(n);
  while (static_cast<int>(order.size()) < n) {
    if (ready.empty()) throw GeometryError(ErrorCode::kNotPlanar, "no vertex of degree <= 5 left to peel");
    const int v = ready.front();
    ready.pop_front();
    peeled[v] = 1;
    order.push_back(v);
    for (int w : graph[v]) {
      if (peeled[w]) continue;
      if (--degree[w] <= 5 && !queued[w]) {
        queued[w] = 1;
        ready.push_back(w);
      }
    }
  }
  Coloring color(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    bool used[7] = {};
    for (int w : graph[*it]) used[color[w]] = true;
    int c = 1;
    while (c <= 6 && used[c]) ++c;
    if (c > 6) throw GeometryError(ErrorCode::kNotPlanar, "greedy coloring needed a seventh color");
    color[*it] = c;
  }
  return color;
}

std::vector<int> pick_color(const Coloring& coloring, std::span<const int> labels, const BoundedCore& core) {
  auto in_core = [&](int label) { return std::binary_search(core.labels.begin(), core.labels.end(), label); };
  int count[7] = {};
  for (std::size_t f = 0; f < labels.size(); ++f)
    if (!in_core(labels[f])) ++count[coloring[f]];
  int best = 1;
  for (int c = 2; c <= 6; ++c)
    if (count[c] > count[best]) best = c;
  std::vector<int> out;
  if (count[best] == 0) return out;
  for (std::size_t f = 0; f < labels.size(); ++f)
    if (coloring[f] == best && !in_core(labels[f])) out.push_back(labels[f]);
  return out;
}

PeelResult peel_level(const Dome& d, const FaceLattice& lattice, std::span<const int> removal) {
  std::vector<int> removed(removal.begin(), removal.end());
  std::sort(removed.begin(), removed.end());
  auto is_removed = [&](int label) { return std::binary_search(removed.begin(), removed.end(), label); };
  for (int f : removed) {
    if (d.is_floor(f)) throw GeometryError(ErrorCode::kOutOfRange, "the floor facet cannot be removed");
    const int idx = lattice.facet_index(f);
    if (idx < 0) throw GeometryError(ErrorCode::kOutOfRange, "removed facet is not in the lattice");
    for (int g : lattice.neighbors(idx))
      if (is_removed(g))
        throw GeometryError(ErrorCode::kNonIndependentRemoval,
                            "facets " + std::to_string(f) + " and " + std::to_string(g) + " are adjacent");
  }

  std::vector<int> keep;
  keep.reserve(lattice.labels.size());
  for (int label : lattice.labels)
    if (!d.is_floor(label) && !is_removed(label)) keep.push_back(label);

  PeelResult out;
  out.lattice = build_lattice(d, keep, false);
  const FaceLattice& next = out.lattice;
  out.kills.assign(next.num_vertices(), {});
  for (int v = 0; v < next.num_vertices(); ++v) {
    const auto& f = next.vertices[v].facets;
    out.kills[v].survivor = lattice.find_vertex(f[0], f[1], f[2]);
  }

  // Every edge of the new lattice whose facet pair already bounded an old edge
  // extends that edge past a cut corner. The corner's third facet is the killer
  // of the new endpoint beyond it. The remaining new vertices of each cap are
  // reached by walking the other new edges.
  auto third = [](const LatticeVertex& v, const LatticeEdge& e) {
    for (int label : v.facets)
      if (label != e.facets[0] && label != e.facets[1]) return label;
    return -1;
  };
  std::deque<int> frontier;
  std::vector<char> extended(next.num_edges(), 0);
  for (int id = 0; id < next.num_edges(); ++id) {
    const auto& e = next.edges[id];
    const int old_edge = lattice.find_edge(e.facets[0], e.facets[1]);
    if (old_edge < 0) continue;
    extended[id] = 1;
    const auto& ends = lattice.edges[old_edge].vertices;
    for (int fresh : e.vertices) {
      if (out.kills[fresh].survivor >= 0 || out.kills[fresh].killer >= 0) continue;
      int killer = -1;
      double worst = 0.0;
      for (int corner : ends) {
        const int label = third(lattice.vertices[corner], lattice.edges[old_edge]);
        if (!is_removed(label)) continue;
        const double s = d.slack(label, next.vertices[fresh].point);
        if (killer < 0 || s < worst) killer = label, worst = s;
      }
      if (killer < 0) continue;
      out.kills[fresh].killer = killer;
      frontier.push_back(fresh);
    }
  }
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop_front();
    for (int e : next.vertices[v].edges) {
      if (extended[e]) continue;
      const auto& ends = next.edges[e].vertices;
      const int w = ends[0] == v ? ends[1] : ends[0];
      if (out.kills[w].survivor >= 0 || out.kills[w].killer >= 0) continue;
      out.kills[w].killer = out.kills[v].killer;
      frontier.push_back(w);
    }
  }
  for (int v = 0; v < next.num_vertices(); ++v) {
    auto& k = out.kills[v];
    if (k.survivor >= 0 || k.killer >= 0) continue;
    double worst = 0.0;
    for (int f : removed) {
      const double s = d.slack(f, next.vertices[v].point);
      if (k.killer < 0 || s < worst) {
        worst = s;
        k.killer = f;
      }
    }
  }
  return out;
}

namespace {

void verify_level(const Dome& d, const FaceLattice& fine, const PeelResult& coarse, std::span<const int> removed) {
  const double eps = d.eps();
  for (const auto& v : fine.vertices)
    for (int label : coarse.lattice.labels)
      if (d.slack(label, v.point) < -eps) throw std::logic_error("hierarchy nesting violated");
  for (int v = 0; v < coarse.lattice.num_vertices(); ++v) {
    const KillRecord& k = coarse.kills[v];
    if (k.survivor >= 0) continue;
    const Vec3& x = coarse.lattice.vertices[v].point;
    if (d.slack(k.killer, x) > eps) throw std::logic_error("kill record names a facet the vertex satisfies");
    for (int f : removed)
      if (f != k.killer && d.slack(f, x) < -eps) throw std::logic_error("new vertex violates two removed facets");
  }
}

}  // namespace

std::size_t Hierarchy::total_vertices() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.lattice.vertices.size();
  return n;
}

Hierarchy build_hierarchy(const Dome& d, const BoundedCore& core, const HierarchyOptions& options) {
  Hierarchy h;
  h.dome = d;
  h.core = core;
  std::vector<int> all(d.size());
  for (int i = 0; i < d.size(); ++i) all[i] = i;
  h.levels.push_back({build_lattice(d, all, false), {}, {}});

  auto in_core = [&](int label) { return std::binary_search(core.labels.begin(), core.labels.end(), label); };
  while (true) {
    const FaceLattice& cur = h.levels.back().lattice;
    const bool done = std::all_of(cur.labels.begin(), cur.labels.end(), in_core);
    if (done) break;
    const Coloring coloring = six_color(facet_graph(cur));
    std::vector<int> removal = pick_color(coloring, cur.labels, core);
    if (removal.empty()) break;
    PeelResult peeled = peel_level(d, cur, removal);
    if (options.verify) verify_level(d, cur, peeled, removal);
    h.levels.back().removed = std::move(removal);
    h.levels.push_back({std::move(peeled.lattice), {}, std::move(peeled.kills)});
  }

  h.top_level.assign(d.size() + 1, 0);
  for (int l = 0; l < static_cast<int>(h.levels.size()); ++l)
    for (int label : h.levels[l].lattice.labels) h.top_level[label] = l;
  return h;
}

std::string dump_hierarchy(const Hierarchy& h) {
  std::ostringstream out;
  auto triple = [](const LatticeVertex& v) {
    return std::to_string(v.facets[0]) + "," + std::to_string(v.facets[1]) + "," + std::to_string(v.facets[2]);
  };
  out << "hierarchy m=" << h.dome.size() << " depth=" << h.depth() << " core=";
  for (std::size_t i = 0; i < h.core.labels.size(); ++i) out << (i ? " " : "") << h.core.labels[i];
  out << "\n";
  for (int l = 0; l < static_cast<int>(h.levels.size()); ++l) {
    const HierarchyLevel& level = h.levels[l];
    const FaceLattice& lat = level.lattice;
    out << "level " << l << "\n  facets:";
    for (int label : lat.labels) out << " " << label;
    out << "\n  counts: V=" << lat.num_vertices() << " E=" << lat.num_edges() << " F=" << lat.num_facets()
        << "\n  removed:";
    for (int label : level.removed) out << " " << label;
    out << "\n";
    if (level.kills.empty()) continue;
    std::vector<std::string> lines;
    for (int v = 0; v < lat.num_vertices(); ++v) {
      const KillRecord& k = level.kills[v];
      lines.push_back("    " + triple(lat.vertices[v]) +
                      (k.survivor >= 0 ? std::string(" survives") : " killer " + std::to_string(k.killer)));
    }
    std::sort(lines.begin(), lines.end());
    out << "  kills:\n";
    for (const auto& line : lines) out << line << "\n";
  }
  return out.str();
}

}  // namespace potato
