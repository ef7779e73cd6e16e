#include "potato/dome.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace potato {

Halfspace Dome::halfspace(int label) const {
  if (is_floor(label)) return {Vec3(0, 0, -1), 0.0};
  const Vec2& n = base.normals[label];
  return {Vec3(n.x(), n.y(), 1.0), offsets[label]};
}

double Dome::slack(int label, const Vec3& x) const {
  if (is_floor(label)) return x.z();
  const Vec2& n = base.normals[label];
  return offsets[label] - n.x() * x.x() - n.y() * x.y() - x.z();
}

Dome build_dome(const HPolygon& p, const Tolerance& tol) {
  Dome d;
  d.base = p;
  d.offsets = p.offsets;
  d.tol = tol;
  VPolygon v;
  const int m = p.size();
  v.vertices.reserve(m);
  for (int k = 0; k < m; ++k) {
    const int j = (k + 1) % m;
    const double det = cross2(p.normals[k], p.normals[j]);
    v.vertices.emplace_back((p.offsets[k] * p.normals[j].y() - p.offsets[j] * p.normals[k].y()) / det,
                            (p.normals[k].x() * p.offsets[j] - p.normals[j].x() * p.offsets[k]) / det);
  }
  d.scale = std::max(diameter(v), 1e-300);
  return d;
}

Dome perturb(const Dome& d, std::uint64_t seed) {
  Dome out = d;
  // Each shifted line moves the corners on it by at most shift / sin(turn);
  // capping the shift keeps every edge at least 60% of its length.
  const int m = d.size();
  double cap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    const Vec2& a = d.base.normals[(k + m - 1) % m];
    const Vec2& b = d.base.normals[k];
    const Vec2& c = d.base.normals[(k + 1) % m];
    const double sin_ab = cross2(a, b), sin_bc = cross2(b, c);
    const double ab = d.base.offsets[(k + m - 1) % m], bb = d.base.offsets[k], cb = d.base.offsets[(k + 1) % m];
    const Vec2 p((ab * b.y() - bb * a.y()) / sin_ab, (a.x() * bb - b.x() * ab) / sin_ab);
    const Vec2 q((bb * c.y() - cb * b.y()) / sin_bc, (b.x() * cb - c.x() * bb) / sin_bc);
    cap = std::min(cap, 0.1 * (q - p).norm() * std::min(sin_ab, sin_bc));
  }
  out.perturbation = std::min(1e-7 * d.scale, cap);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eta(0.0, 1.0);
  for (double& b : out.offsets) {
    double e = eta(rng);
    while (e == 0.0) e = eta(rng);
    b -= out.perturbation * e;
  }
  return out;
}

Vec3 facet_point(const Dome& d, int a, int b, int c) {
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  const int ids[3] = {a, b, c};
  for (int r = 0; r < 3; ++r) {
    const Halfspace h = d.halfspace(ids[r]);
    m.row(r) = h.normal.transpose();
    rhs[r] = h.offset;
  }
  return m.partialPivLu().solve(rhs);
}

std::uint64_t triple_key(int a, int b, int c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 42) | (static_cast<std::uint64_t>(b) << 21) |
         static_cast<std::uint64_t>(c);
}

std::uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 21) | static_cast<std::uint64_t>(b);
}

int FaceLattice::facet_index(int label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return -1;
  return static_cast<int>(it - labels.begin());
}

std::span<const int> FaceLattice::cycle(int facet) const {
  return {cycle_data_.data() + cycle_start_[facet], cycle_data_.data() + cycle_start_[facet + 1]};
}

std::span<const int> FaceLattice::neighbors(int facet) const {
  return {neighbor_data_.data() + neighbor_start_[facet], neighbor_data_.data() + neighbor_start_[facet + 1]};
}

namespace {

int lookup(const std::vector<std::pair<std::uint64_t, int>>& keys, std::uint64_t key) {
  auto it = std::lower_bound(keys.begin(), keys.end(), std::make_pair(key, -1));
  if (it == keys.end() || it->first != key) return -1;
  return it->second;
}

}  // namespace

int FaceLattice::find_vertex(int a, int b, int c) const { return lookup(vertex_keys_, triple_key(a, b, c)); }

int FaceLattice::find_edge(int a, int b) const { return lookup(edge_keys_, pair_key(a, b)); }

void FaceLattice::finalize() {
  const int nf = num_facets();
  std::vector<int> index_of(labels.empty() ? 0 : labels.back() + 1, -1);
  for (int f = 0; f < nf; ++f) index_of[labels[f]] = f;
  auto facet_index = [&](int label) { return index_of[label]; };
  for (auto& v : vertices) v.edges = {-1, -1, -1};
  for (int e = 0; e < num_edges(); ++e) {
    for (int end : edges[e].vertices) {
      auto& slots = vertices[end].edges;
      for (int& s : slots) {
        if (s < 0) {
          s = e;
          break;
        }
      }
    }
  }

  // Neighbour lists.
  std::vector<int> degree(nf + 1, 0);
  for (const auto& e : edges) {
    ++degree[facet_index(e.facets[0])];
    ++degree[facet_index(e.facets[1])];
  }
  neighbor_start_.assign(nf + 1, 0);
  for (int f = 0; f < nf; ++f) neighbor_start_[f + 1] = neighbor_start_[f] + degree[f];
  neighbor_data_.assign(neighbor_start_[nf], -1);
  std::vector<int> fill(neighbor_start_.begin(), neighbor_start_.end() - 1);
  for (const auto& e : edges) {
    const int a = facet_index(e.facets[0]), b = facet_index(e.facets[1]);
    neighbor_data_[fill[a]++] = e.facets[1];
    neighbor_data_[fill[b]++] = e.facets[0];
  }

  // Vertex cycles: a facet with k edges has k vertices.
  cycle_start_ = neighbor_start_;
  cycle_data_.assign(cycle_start_[nf], -1);
  std::vector<int> first(nf, -1);
  for (int v = 0; v < num_vertices(); ++v)
    for (int label : vertices[v].facets) {
      const int f = facet_index(label);
      if (first[f] < 0) first[f] = v;
    }
  for (int f = 0; f < nf; ++f) {
    const int label = labels[f];
    int v = first[f], prev_edge = -1, out = cycle_start_[f];
    const int stop = cycle_start_[f + 1];
    while (v >= 0 && out < stop) {
      cycle_data_[out++] = v;
      int next_edge = -1;
      for (int e : vertices[v].edges) {
        if (e < 0 || e == prev_edge) continue;
        if (edges[e].facets[0] == label || edges[e].facets[1] == label) {
          next_edge = e;
          break;
        }
      }
      if (next_edge < 0) break;
      const auto& ev = edges[next_edge].vertices;
      v = ev[0] == v ? ev[1] : ev[0];
      prev_edge = next_edge;
      if (v == first[f]) break;
    }
  }

  vertex_keys_.clear();
  vertex_keys_.reserve(vertices.size());
  for (int v = 0; v < num_vertices(); ++v) {
    const auto& f = vertices[v].facets;
    vertex_keys_.emplace_back(triple_key(f[0], f[1], f[2]), v);
  }
  std::sort(vertex_keys_.begin(), vertex_keys_.end());
  edge_keys_.clear();
  edge_keys_.reserve(edges.size());
  for (int e = 0; e < num_edges(); ++e) edge_keys_.emplace_back(pair_key(edges[e].facets[0], edges[e].facets[1]), e);
  std::sort(edge_keys_.begin(), edge_keys_.end());
}

std::size_t FaceLattice::storage_bytes() const {
  return vertices.size() * sizeof(LatticeVertex) + edges.size() * sizeof(LatticeEdge) +
         (labels.size() + cycle_start_.size() + cycle_data_.size() + neighbor_start_.size() +
          neighbor_data_.size()) * sizeof(int) +
         (vertex_keys_.size() + edge_keys_.size()) * sizeof(std::pair<std::uint64_t, int>);
}

FaceLattice build_lattice(const Dome& d, std::span<const int> edge_labels, bool check_degenerate) {
  const int n = static_cast<int>(edge_labels.size());
  const int floor = d.floor_label();
  FaceLattice lat;
  lat.labels.assign(edge_labels.begin(), edge_labels.end());
  lat.labels.push_back(floor);
  if (n < 3) throw GeometryError(ErrorCode::kUnbounded, "fewer than three edge facets");
  lat.vertices.reserve(2 * n);
  lat.edges.reserve(3 * n);

  auto sorted3 = [](int a, int b, int c) {
    std::array<int, 3> f{a, b, c};
    std::sort(f.begin(), f.end());
    return f;
  };
  auto sorted2 = [](int a, int b) { return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a}; };
  auto add_vertex = [&](const Vec3& p, int a, int b, int c) {
    lat.vertices.push_back({p, sorted3(a, b, c), {-1, -1, -1}});
    return static_cast<int>(lat.vertices.size()) - 1;
  };
  auto add_edge = [&](int fa, int fb, int va, int vb) { lat.edges.push_back({sorted2(fa, fb), {va, vb}}); };

  // Floor corners: corner k joins edges k and k+1.
  std::vector<int> origin(n);
  for (int k = 0; k < n; ++k) {
    const int a = edge_labels[k], b = edge_labels[(k + 1) % n];
    const Vec3 p = facet_point(d, a, b, floor);
    origin[k] = add_vertex(Vec3(p.x(), p.y(), 0.0), a, b, floor);
  }
  for (int k = 0; k < n; ++k) add_edge(edge_labels[k], floor, origin[(k + n - 1) % n], origin[k]);

  std::vector<int> prev(n), next(n), stamp(n, 0);
  for (int k = 0; k < n; ++k) {
    prev[k] = (k + n - 1) % n;
    next[k] = (k + 1) % n;
  }
  using Event = std::tuple<double, int, int>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  auto schedule = [&](int k) {
    ++stamp[k];
    const Vec3 x = facet_point(d, edge_labels[prev[k]], edge_labels[k], edge_labels[next[k]]);
    events.emplace(x.z(), k, stamp[k]);
  };
  for (int k = 0; k < n; ++k) schedule(k);

  const double tight = d.tol.abs * std::max(1.0, d.scale);
  int active = n;
  while (active > 3) {
    auto [time, k, s] = events.top();
    events.pop();
    if (s != stamp[k]) continue;
    const int p = prev[k], q = next[k];
    const int lp = edge_labels[p], lk = edge_labels[k], lq = edge_labels[q];
    const Vec3 x = facet_point(d, lp, lk, lq);
    if (check_degenerate) {
      for (int other : {edge_labels[prev[p]], edge_labels[next[q]]}) {
        if (std::abs(d.slack(other, x)) <= tight)
          throw GeometryError(ErrorCode::kDegenerateVertex, "four facets meet at one vertex");
      }
    }
    const int v = add_vertex(x, lp, lk, lq);
    // origin[j] is the moving corner between edge j and next[j].
    add_edge(lp, lk, origin[p], v);
    add_edge(lk, lq, origin[k], v);
    next[p] = q;
    prev[q] = p;
    origin[p] = v;
    stamp[k] = -1;
    --active;
    schedule(p);
    schedule(q);
  }

  int a = 0;
  while (stamp[a] < 0) ++a;
  const int b = next[a], c = next[b];
  const int la = edge_labels[a], lb = edge_labels[b], lc = edge_labels[c];
  const Vec3 apex = facet_point(d, la, lb, lc);
  const int top = add_vertex(apex, la, lb, lc);
  add_edge(la, lb, origin[a], top);
  add_edge(lb, lc, origin[b], top);
  add_edge(lc, la, origin[c], top);

  lat.finalize();
  return lat;
}

FaceLattice face_lattice(const Dome& d) {
  std::vector<int> labels(d.size());
  for (int i = 0; i < d.size(); ++i) labels[i] = i;
  return build_lattice(d, labels, true);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double angle_of(const Vec2& n) {
  double a = std::atan2(n.y(), n.x());
  return a < 0 ? a + kTwoPi : a;
}

std::vector<Halfspace> dome_rows(const Dome& d) {
  std::vector<Halfspace> rows;
  rows.reserve(d.size() + 1);
  for (int i = 0; i <= d.size(); ++i) rows.push_back(d.halfspace(i));
  return rows;
}

// Picks facets among `active` (edge labels tight at a point of the dome)
// whose normals strictly surround the origin. Empty when they do not.
std::vector<int> surrounding(const Dome& d, std::vector<int> active) {
  if (active.size() < 3) return {};
  std::sort(active.begin(), active.end(), [&](int x, int y) {
    return angle_of(d.base.normals[x]) < angle_of(d.base.normals[y]);
  });
  const double base_angle = angle_of(d.base.normals[active[0]]);
  const double tiny = 1e-12;
  int below = -1, above = -1, opposite = -1;
  double below_phi = -1, above_phi = 10;
  for (std::size_t k = 1; k < active.size(); ++k) {
    double phi = angle_of(d.base.normals[active[k]]) - base_angle;
    if (phi < 0) phi += kTwoPi;
    if (std::abs(phi - std::numbers::pi) <= tiny) {
      if (opposite < 0) opposite = active[k];
    } else if (phi < std::numbers::pi) {
      if (phi > below_phi) below_phi = phi, below = active[k];
    } else if (phi < above_phi) {
      above_phi = phi, above = active[k];
    }
  }
  if (below < 0 || above < 0) return {};
  if (above_phi - below_phi < std::numbers::pi - tiny) return {active[0], below, above};
  if (opposite >= 0) return {active[0], below, opposite, above};
  return {};
}

}  // namespace

BoundedCore bounded_core(const Dome& d) {
  // Start from the floor and minimize its normal, i.e. maximize height.
  const std::vector<Halfspace> rows = dome_rows(d);
  LpOptions opt;
  opt.tol = d.tol;
  const LpResult top = small_lp(3, rows, Vec3(0, 0, 1), opt);
  if (!top.optimal()) throw GeometryError(ErrorCode::kUnbounded, "dome has no highest point");
  const double eps = d.eps();

  std::vector<int> active;
  for (int i = 0; i < d.size(); ++i)
    if (d.slack(i, top.point) <= eps) active.push_back(i);

  std::vector<int> core = surrounding(d, active);
  if (core.empty()) {
    // The top is a ridge: two opposite facets hold it, and each end of the
    // ridge contributes one more facet.
    std::sort(active.begin(), active.end());
    const Vec2 u = d.base.normals[active.front()];
    int back = -1;
    for (int i : active)
      if (d.base.normals[i].dot(u) < 0) {
        back = i;
        break;
      }
    core = {active.front()};
    if (back >= 0) core.push_back(back);
    const Vec2 w(-u.y(), u.x());
    std::vector<Halfspace> ridge = rows;
    ridge.push_back({Vec3(0, 0, -1), -(top.value - eps)});
    for (double s : {1.0, -1.0}) {
      const LpResult end = small_lp(3, ridge, Vec3(s * w.x(), s * w.y(), 0.0), opt);
      if (!end.optimal()) continue;
      for (int i = 0; i < d.size(); ++i) {
        if (std::find(core.begin(), core.end(), i) != core.end()) continue;
        if (d.slack(i, end.point) <= 4 * eps && s * d.base.normals[i].dot(w) > 0) {
          core.push_back(i);
          break;
        }
      }
    }
  }
  std::sort(core.begin(), core.end());
  core.erase(std::unique(core.begin(), core.end()), core.end());
  core.push_back(d.floor_label());
  return {core};
}

}  // namespace potato
