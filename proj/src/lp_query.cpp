#include "potato/lp_query.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

namespace potato {
namespace {

constexpr int kLinearScan = 8;

// Where a section optimum sits on a level: a vertex lying in the plane, or the
// crossing of the plane with the edge u-w on facets `facets`.
struct Feature {
  int vertex = -1;
  int u = -1, w = -1;
  std::array<int, 2> facets{};
  Vec3 point = Vec3::Zero();
};

class Descent {
 public:
  Descent(const Hierarchy& h, const Vec3& c, QueryStats& stats)
      : h_(h), c_(c), stats_(stats), eps_len_(h.dome.eps()),
        eps_val_(h.dome.tol.bound(c.norm() * h.dome.scale)) {}

  const FaceLattice& lat(int l) const { return h_.levels[l].lattice; }
  const KillRecord& kill(int l, int v) const { return h_.levels[l].kills[v]; }

  double value(const Vec3& x) const { return c_.dot(x); }

  // Strictly better objective, or a tie broken toward the lexicographically
  // smaller point.
  bool better(const Vec3& a, const Vec3& b) const {
    const double va = value(a), vb = value(b);
    if (va > vb + eps_val_) return true;
    if (vb > va + eps_val_) return false;
    for (int k = 0; k < 3; ++k) {
      if (a[k] < b[k] - eps_len_) return true;
      if (a[k] > b[k] + eps_len_) return false;
    }
    return false;
  }

  const Vec3& point(int l, int v) {
    ++stats_.vertex_inspections;
    return lat(l).vertices[v].point;
  }

  // Maximizer position of a unimodal cyclic sequence, in O(log n) probes.
  template <class F>
  int cyclic_argmax(int n, F&& s) {
    auto scan = [&] {
      int best = 0;
      double bv = s(0);
      for (int k = 1; k < n; ++k) {
        const double v = s(k);
        if (v > bv) bv = v, best = k;
      }
      return best;
    };
    if (n <= kLinearScan) return scan();
    const double s0 = s(0);
    auto up = [&](int j) { return s((j + 1) % n) > s(j); };
    const bool rising = up(0);
    auto before_max = [&](int j) {
      ++stats_.search_steps;
      return rising ? (up(j) && s(j) >= s0) : (up(j) || s(j) <= s0);
    };
    int lo = 1, hi = n;  // first j in [1, n) with !before_max(j); n if none
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (before_max(mid)) lo = mid + 1;
      else hi = mid;
    }
    const int best = lo % n;
    const double bv = s(best);
    if (s((best + 1) % n) > bv || s((best + n - 1) % n) > bv) return scan();
    return best;
  }

  // Best vertex of facet `label` on level l.
  int facet_extreme(int l, int label) {
    ++stats_.facet_subproblems;
    const FaceLattice& L = lat(l);
    const auto cyc = L.cycle(L.facet_index(label));
    const int n = static_cast<int>(cyc.size());
    if (n <= kLinearScan) {
      int best = cyc[0];
      for (int k = 1; k < n; ++k)
        if (better(point(l, cyc[k]), point(l, best))) best = cyc[k];
      return best;
    }
    const int k = cyclic_argmax(n, [&](int i) { return value(point(l, cyc[i])); });
    int best = cyc[k];
    for (int nb : {cyc[(k + 1) % n], cyc[(k + n - 1) % n]})
      if (better(point(l, nb), point(l, best))) best = nb;
    return best;
  }

  int core_extreme() {
    const int k = h_.depth();
    int best = 0;
    for (int v = 1; v < lat(k).num_vertices(); ++v)
      if (better(point(k, v), point(k, best))) best = v;
    return best;
  }

  // ---- sections ----

  void set_plane(const Plane& p) {
    const double len = p.normal.norm();
    pn_ = p.normal / len;
    pd_ = p.offset / len;
  }

  double side(const Vec3& x) const { return pn_.dot(x) - pd_; }

  Feature edge_feature(int l, int u, int w, double su, double sw) {
    Feature f;
    f.u = u;
    f.w = w;
    const auto& fu = lat(l).vertices[u].facets;
    const auto& fw = lat(l).vertices[w].facets;
    int n = 0;
    for (int a : fu)
      if (std::find(fw.begin(), fw.end(), a) != fw.end() && n < 2) f.facets[n++] = a;
    const Vec3& pu = lat(l).vertices[u].point;
    const Vec3& pw = lat(l).vertices[w].point;
    f.point = pu + (pw - pu) * (su / (su - sw));
    return f;
  }

  Feature vertex_feature(int l, int v) {
    Feature f;
    f.vertex = v;
    f.point = lat(l).vertices[v].point;
    return f;
  }

  void offer(std::optional<Feature>& best, Feature cand) {
    if (!best || better(cand.point, best->point)) best = cand;
  }

  // Exhaustive section of one level.
  std::optional<Feature> section_scan(int l) {
    const FaceLattice& L = lat(l);
    std::vector<double> s(L.num_vertices());
    std::optional<Feature> best;
    for (int v = 0; v < L.num_vertices(); ++v) {
      s[v] = side(point(l, v));
      if (std::abs(s[v]) <= eps_len_) offer(best, vertex_feature(l, v));
    }
    for (const auto& e : L.edges) {
      const int a = e.vertices[0], b = e.vertices[1];
      if ((s[a] > eps_len_ && s[b] < -eps_len_) || (s[a] < -eps_len_ && s[b] > eps_len_))
        offer(best, edge_feature(l, a, b, s[a], s[b]));
    }
    return best;
  }

  // Best point of the plane on facet `label` of level l.
  std::optional<Feature> facet_section(int l, int label) {
    ++stats_.facet_subproblems;
    const FaceLattice& L = lat(l);
    const auto cyc = L.cycle(L.facet_index(label));
    const int n = static_cast<int>(cyc.size());
    auto s = [&](int i) { return side(point(l, cyc[((i % n) + n) % n])); };
    std::optional<Feature> best;
    auto add_vertex = [&](int i) { offer(best, vertex_feature(l, cyc[((i % n) + n) % n])); };
    auto add_edge = [&](int i, int j) {
      const int a = ((i % n) + n) % n, b = ((j % n) + n) % n;
      offer(best, edge_feature(l, cyc[a], cyc[b], s(a), s(b)));
    };

    if (n <= kLinearScan) {
      for (int i = 0; i < n; ++i) {
        const double si = s(i), sj = s(i + 1);
        if (std::abs(si) <= eps_len_) add_vertex(i);
        if ((si > eps_len_ && sj < -eps_len_) || (si < -eps_len_ && sj > eps_len_)) add_edge(i, i + 1);
      }
      return best;
    }

    const int kmax = cyclic_argmax(n, s);
    const int kmin = cyclic_argmax(n, [&](int i) { return -s(i); });
    const double smax = s(kmax), smin = s(kmin);
    if (smax < -eps_len_ || smin > eps_len_) return std::nullopt;
    if (smax <= eps_len_ || smin >= -eps_len_) {
      const int k = smax <= eps_len_ ? kmax : kmin;
      for (int i : {k - 1, k, k + 1})
        if (std::abs(s(i)) <= eps_len_) add_vertex(i);
      return best;
    }
    // s increases from kmin to kmax along both chains; find where each one
    // leaves the negative side.
    for (int dir : {1, -1}) {
      const int len = ((dir * (kmax - kmin)) % n + n) % n;
      auto at = [&](int i) { return kmin + dir * i; };
      int lo = 1, hi = len;
      while (lo < hi) {
        ++stats_.search_steps;
        const int mid = lo + (hi - lo) / 2;
        if (s(at(mid)) > -eps_len_) hi = mid;
        else lo = mid + 1;
      }
      if (std::abs(s(at(lo))) <= eps_len_) add_vertex(at(lo));
      else add_edge(at(lo - 1), at(lo));
    }
    return best;
  }

  LpResult finish_section(const Feature& f) {
    LpResult r;
    r.status = LpStatus::kOptimal;
    if (f.vertex >= 0) {
      const auto& v = lat(0).vertices[f.vertex];
      r.point = v.point;
      r.basis.assign(v.facets.begin(), v.facets.end());
    } else {
      Eigen::Matrix3d m;
      Eigen::Vector3d rhs;
      for (int k = 0; k < 2; ++k) {
        const Halfspace hs = h_.dome.halfspace(f.facets[k]);
        m.row(k) = hs.normal.transpose();
        rhs[k] = hs.offset;
      }
      m.row(2) = pn_.transpose();
      rhs[2] = pd_;
      const Eigen::PartialPivLU<Eigen::Matrix3d> lu(m);
      const Vec3 x = lu.solve(rhs);
      r.point = (x.allFinite() && (x - f.point).norm() <= 1e3 * eps_len_ + 1e-6 * h_.dome.scale) ? x : f.point;
      r.basis = {kQueryLabel, f.facets[0], f.facets[1]};
    }
    r.value = value(r.point);
    return r;
  }

  LpResult section(const Plane& plane) {
    set_plane(plane);
    const int k = h_.depth();
    std::optional<Feature> cur = section_scan(k);
    if (!cur) return {};
    for (int l = k - 1; l >= 0; --l) {
      ++stats_.levels_visited;
      Feature& f = *cur;
      if (f.vertex >= 0) {
        const KillRecord& rec = kill(l + 1, f.vertex);
        if (rec.survivor >= 0) {
          f.vertex = rec.survivor;
          continue;
        }
        cur = facet_section(l, rec.killer);
        if (!cur) return {};
        continue;
      }
      const KillRecord& ru = kill(l + 1, f.u);
      const KillRecord& rw = kill(l + 1, f.w);
      int killer = -1;
      double worst = 0.0;
      for (const KillRecord* r : {&ru, &rw}) {
        if (r->survivor >= 0) continue;
        const double sl = h_.dome.slack(r->killer, f.point);
        if (killer < 0 || sl < worst) killer = r->killer, worst = sl;
      }
      // The coarser optimum left this level exactly when it violates a killer;
      // an edge with both ends in one cap lies wholly inside it.
      const bool one_cap = ru.survivor < 0 && rw.survivor < 0 && ru.killer == rw.killer;
      if (killer >= 0 && (one_cap || worst < 0.0)) {
        cur = facet_section(l, killer);
        if (!cur) return {};
        continue;
      }
      const int g = f.facets[0], hh = f.facets[1];
      const int u = ru.survivor >= 0 ? ru.survivor : lat(l).find_vertex(g, hh, ru.killer);
      const int w = rw.survivor >= 0 ? rw.survivor : lat(l).find_vertex(g, hh, rw.killer);
      if (u < 0 || w < 0) {
        cur = section_scan(l);
        if (!cur) return {};
        continue;
      }
      f.u = u;
      f.w = w;
    }
    return finish_section(*cur);
  }

 private:
  const Hierarchy& h_;
  Vec3 c_;
  QueryStats& stats_;
  double eps_len_;
  double eps_val_;
  Vec3 pn_ = Vec3::UnitZ();
  double pd_ = 0.0;
};

LpResult vertex_result(const Hierarchy& h, int v, const Vec3& c) {
  const auto& vert = h.levels[0].lattice.vertices[v];
  LpResult r;
  r.status = LpStatus::kOptimal;
  r.point = vert.point;
  r.value = c.dot(vert.point);
  r.basis.assign(vert.facets.begin(), vert.facets.end());
  return r;
}

}  // namespace

LpResult lp_max(const Hierarchy& h, const Vec3& c, QueryStats* stats) {
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  ++st.queries;
  Descent run(h, c, st);
  int v = run.core_extreme();
  for (int l = h.depth() - 1; l >= 0; --l) {
    ++st.levels_visited;
    const KillRecord& rec = run.kill(l + 1, v);
    v = rec.survivor >= 0 ? rec.survivor : run.facet_extreme(l, rec.killer);
  }
  return vertex_result(h, v, c);
}

LpResult lp_max_facet(const Hierarchy& h, int level, int label, const Vec3& c, QueryStats* stats) {
  if (label < 0 || label > h.dome.size() || level < 0 || level > h.top_level[label])
    throw GeometryError(ErrorCode::kOutOfRange, "facet " + std::to_string(label) + " absent at level " +
                                                    std::to_string(level));
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  ++st.queries;
  Descent run(h, c, st);
  const int top = h.top_level[label];
  int v = run.facet_extreme(top, label);
  for (int l = top - 1; l >= level; --l) {
    ++st.levels_visited;
    const KillRecord& rec = run.kill(l + 1, v);
    if (rec.survivor >= 0) {
      v = rec.survivor;
      continue;
    }
    // The optimum over the facet moves onto its edge with the killer.
    const int e = run.lat(l).find_edge(label, rec.killer);
    if (e < 0) {
      v = run.facet_extreme(l, label);
      continue;
    }
    const auto& ends = run.lat(l).edges[e].vertices;
    v = run.better(run.point(l, ends[1]), run.point(l, ends[0])) ? ends[1] : ends[0];
  }
  LpResult r;
  r.status = LpStatus::kOptimal;
  const auto& vert = h.levels[level].lattice.vertices[v];
  r.point = vert.point;
  r.value = c.dot(vert.point);
  r.basis.assign(vert.facets.begin(), vert.facets.end());
  return r;
}

LpResult lp_max_section(const Hierarchy& h, const Plane& plane, const Vec3& c, QueryStats* stats) {
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  ++st.queries;
  Descent run(h, c, st);
  return run.section(plane);
}

LpResult lp_max_constrained(const Hierarchy& h, const Vec3& c, const Halfspace& extra, QueryStats* stats) {
  LpResult free = lp_max(h, c, stats);
  const double len = extra.normal.norm();
  if (extra.normal.dot(free.point) - extra.offset <= h.dome.eps() * len) return free;
  return lp_max_section(h, {extra.normal, extra.offset}, c, stats);
}

double facet_max_t(const Hierarchy& h, int i, QueryStats* stats) {
  return lp_max_facet(h, 0, i, Vec3::UnitZ(), stats).value;
}

}  // namespace potato
