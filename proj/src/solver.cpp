#include "potato/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace potato {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Halfspace root_row(const Dome& d, int i, int n, double offset) {
  const Vec2& a = d.base.normals[i];
  return {Vec3(a.x(), a.y(), 2.0 * n - 1.0), offset};
}

double apex_height(const Hierarchy& h, QueryStats* stats) { return lp_max(h, Vec3::UnitZ(), stats).value; }

// f_i at height t <= M_i, clamped into the dome so a t at the apex never
// lands just outside it.
double eval_fi_at(const Hierarchy& h, int i, double t, int n, double apex, QueryStats* stats) {
  const Dome& d = h.dome;
  const Vec2& a = d.base.normals[i];
  const Vec3 c(-a.x(), -a.y(), 0.0);
  double height = std::clamp(t, 0.0, apex);
  LpResult r = lp_max_section(h, {Vec3::UnitZ(), height}, c, stats);
  if (!r.optimal()) r = lp_max_section(h, {Vec3::UnitZ(), std::max(0.0, apex - d.eps())}, c, stats);
  if (!r.optimal()) throw GeometryError(ErrorCode::kInfeasible, "empty section at t=" + std::to_string(t));
  return d.offsets[i] + r.value - (2.0 * n - 1.0) * t;
}

// Root of f_i on the dome, then recomputed from its basis on the unperturbed
// offsets.
double root_of(const Hierarchy& h, int i, int n, QueryStats* stats) {
  const Dome& d = h.dome;
  const LpResult r = lp_max_constrained(h, Vec3::UnitZ(), root_row(d, i, n, d.offsets[i]), stats);
  if (!r.optimal()) throw GeometryError(ErrorCode::kInfeasible, "root LP of facet " + std::to_string(i));
  if (d.perturbation == 0.0 || r.basis.size() != 3) return r.value;
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  for (int k = 0; k < 3; ++k) {
    const int label = r.basis[k];
    Halfspace row;
    if (label == kQueryLabel) {
      row = root_row(d, i, n, d.base.offsets[i]);
    } else {
      row = d.halfspace(label);
      row.offset = d.is_floor(label) ? 0.0 : d.base.offsets[label];
    }
    m.row(k) = row.normal.transpose();
    rhs[k] = row.offset;
  }
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible()) return r.value;
  const Vec3 x = lu.solve(rhs);
  if (!x.allFinite() || std::abs(x.z() - r.value) > 1e4 * d.perturbation + d.eps()) return r.value;
  return x.z();
}

double qualification_bound(const Dome& d, int n) { return d.eps() + 1e3 * n * d.perturbation; }

// max_j (normal . x_j) for each normal, normals sorted counterclockwise.
std::vector<double> support_sweep(const std::vector<Vec2>& pts, const std::vector<Vec2>& normals) {
  std::vector<double> out(normals.size());
  const int k = static_cast<int>(pts.size());
  if (k == 0) return out;
  int j = 0;
  for (int s = 1; s < k; ++s)
    if (normals[0].dot(pts[s]) > normals[0].dot(pts[j])) j = s;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    for (int steps = 0; steps < k && normals[i].dot(pts[(j + 1) % k]) >= normals[i].dot(pts[j]); ++steps)
      j = (j + 1) % k;
    out[i] = normals[i].dot(pts[j]);
  }
  return out;
}

}  // namespace

double eval_fi(const Hierarchy& h, int i, double t, int n, QueryStats* stats) {
  const double m_i = facet_max_t(h, i, stats);
  if (t > m_i + h.dome.eps() || t < -h.dome.eps())
    throw GeometryError(ErrorCode::kOutOfRange, "t=" + std::to_string(t) + " outside [0, M_i]");
  return eval_fi_at(h, i, t, n, apex_height(h, stats), stats);
}

double root_lp(const Hierarchy& h, int i, int n, QueryStats* stats) {
  const double m_i = facet_max_t(h, i, stats);
  const double f = eval_fi_at(h, i, m_i, n, apex_height(h, stats), stats);
  if (f > qualification_bound(h.dome, n))
    throw GeometryError(ErrorCode::kNotQualified, "f_" + std::to_string(i) + "(M_i) = " + std::to_string(f));
  return root_of(h, i, n, stats);
}

Solution solve(const HPolygon& input, int n, const SolveOptions& options) {
  if (n < 1) throw GeometryError(ErrorCode::kInvalidPieceCount, "n=" + std::to_string(n));
  const auto t0 = Clock::now();
  const Polygon p = canonicalize(input, options.tol);
  Dome d = build_dome(p.h, options.tol);
  if (options.perturb) d = perturb(d, options.seed);
  const Hierarchy h = build_hierarchy(d, bounded_core(d));

  Solution s;
  s.n = n;
  s.stats.m = p.size();
  s.stats.depth = h.depth();
  s.stats.hierarchy_vertices = h.total_vertices();
  s.stats.build_ms = ms_since(t0);
  const auto t1 = Clock::now();

  QueryStats& qs = s.stats.queries;
  const int m = p.size();
  const double apex = apex_height(h, &qs);
  const double bound = qualification_bound(d, n);
  s.diagnostics.resize(m);
  for (int i = 0; i < m; ++i) {
    FacetDiagnostic& g = s.diagnostics[i];
    g.max_t = facet_max_t(h, i, &qs);
    g.f_at_max = eval_fi_at(h, i, g.max_t, n, apex, &qs);
    g.qualifies = g.f_at_max <= bound;
  }
  if (std::none_of(s.diagnostics.begin(), s.diagnostics.end(), [](const FacetDiagnostic& g) { return g.qualifies; })) {
    int best = 0;
    for (int i = 1; i < m; ++i)
      if (s.diagnostics[i].f_at_max < s.diagnostics[best].f_at_max) best = i;
    s.diagnostics[best].qualifies = true;
  }
  const double tie = options.tol.bound(d.scale);
  for (int i = 0; i < m; ++i) {
    FacetDiagnostic& g = s.diagnostics[i];
    if (!g.qualifies) continue;
    g.root = root_of(h, i, n, &qs);
    if (s.winner < 0 || *g.root < s.rho - tie) {
      s.winner = i;
      s.rho = *g.root;
    }
  }
  s.direction = p.h.normals[s.winner];
  s.cuts = place_cuts(p.h, s.rho, s.direction, n);
  s.stats.solve_ms = ms_since(t1);
  if (options.verify) s.verification = verify_solution(p.h, n, s);
  return s;
}

std::vector<Cut> place_cuts(const HPolygon& p, double rho, const Vec2& v, int n) {
  const std::vector<Vec2> inner = inner_vertices(p, rho);
  double lo = std::numeric_limits<double>::infinity();
  for (const Vec2& x : inner) lo = std::min(lo, v.dot(x));
  const double s_min = lo - rho;
  std::vector<Cut> cuts;
  for (int j = 1; j < n; ++j) cuts.push_back({v, s_min + 2.0 * rho * j});
  return cuts;
}

VerificationReport check_solution(const HPolygon& p, int n, double rho, const std::vector<Cut>& cuts) {
  VerificationReport rep;
  const Polygon canon = canonicalize(p);
  const HPolygon& hp = canon.h;
  const double bound = 1e-8 * diameter(canon.v);

  const std::vector<Vec2> inner = inner_vertices(hp, rho);
  if (!inner.empty()) {
    VPolygon iv{inner};
    rep.width_residual = min_width(iv).width + 2.0 * rho - 2.0 * n * rho;
    rep.width_ok = std::abs(rep.width_residual) <= bound;

    const std::vector<double> hi = support_sweep(inner, hp.normals);
    // min along a_i is -max along -a_i; sweep the negated normals in angle order.
    const int m = hp.size();
    std::vector<int> order(m);
    for (int k = 0; k < m; ++k) order[k] = k;
    std::vector<double> angle(m);
    for (int k = 0; k < m; ++k) angle[k] = std::atan2(-hp.normals[k].y(), -hp.normals[k].x());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return angle[a] < angle[b]; });
    std::vector<Vec2> neg_sorted;
    for (int k : order) neg_sorted.push_back(-hp.normals[k]);
    const std::vector<double> lo_neg = support_sweep(inner, neg_sorted);
    rep.min_f = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      const int i = order[k];
      const double width_i = hi[i] + lo_neg[k];
      rep.min_f = std::min(rep.min_f, width_i - 2.0 * (n - 1) * rho);
    }
    rep.f_ok = std::abs(rep.min_f) <= bound;
  } else {
    rep.width_residual = std::numeric_limits<double>::infinity();
    rep.min_f = -std::numeric_limits<double>::infinity();
  }

  std::vector<Cut> sorted = cuts;
  std::sort(sorted.begin(), sorted.end(), [](const Cut& a, const Cut& b) { return a.offset < b.offset; });
  bool parallel = static_cast<int>(sorted.size()) == n - 1;
  for (const Cut& c : sorted) parallel &= c.normal.isApprox(sorted.front().normal, 1e-12);
  rep.max_piece_inradius = -std::numeric_limits<double>::infinity();
  for (int j = 0; parallel && j < n; ++j) {
    std::vector<Vec2> normals = hp.normals;
    std::vector<double> offsets = hp.offsets;
    if (j > 0) {
      normals.push_back(-sorted[j - 1].normal);
      offsets.push_back(-sorted[j - 1].offset);
    }
    if (j < n - 1) {
      normals.push_back(sorted[j].normal);
      offsets.push_back(sorted[j].offset);
    }
    const double r = inscribed_circle(normals, offsets).radius;
    rep.piece_inradii.push_back(r);
    rep.max_piece_inradius = std::max(rep.max_piece_inradius, r);
  }
  rep.pieces_ok = parallel && rep.max_piece_inradius >= rho - bound;
  for (double r : rep.piece_inradii) rep.pieces_ok &= r <= rho + bound;
  return rep;
}

VerificationReport verify_solution(const HPolygon& p, int n, const Solution& s) {
  const VerificationReport rep = check_solution(p, n, s.rho, s.cuts);
  if (!rep.width_ok)
    throw GeometryError(ErrorCode::kVerificationFailed, "width clause, residual " + std::to_string(rep.width_residual));
  if (!rep.pieces_ok)
    throw GeometryError(ErrorCode::kVerificationFailed,
                        "piece clause, max inradius " + std::to_string(rep.max_piece_inradius));
  if (!rep.f_ok) throw GeometryError(ErrorCode::kVerificationFailed, "f clause, min f " + std::to_string(rep.min_f));
  return rep;
}

}  // namespace potato
