// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "potato/lp_query.hpp"
#include "potato/oracle.hpp"
#include "potato/solver.hpp"
#include "support.hpp"

using namespace potato;
using namespace potato::testing;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

constexpr Tolerance kTight{1e-15, 1e-14};

struct Instance {
  HPolygon p;
  int n;
  Solution s;
};

// Every solved instance feeds criteria 3 and 4.
std::deque<Instance> g_solved;

const Solution& record(const HPolygon& p, int n, const Solution& s) {
  g_solved.push_back({p, n, s});
  return g_solved.back().s;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

void report(int k, const std::string& title, const Outcome& o, bool& all) {
  std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", k, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  all &= o.pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Some row of p parallel to v has an f that vanishes at rho.
bool direction_ok(const HPolygon& p, int n, double rho, const Vec2& v, double d) {
  for (int i = 0; i < p.size(); ++i) {
    if ((p.normals[i] - v).norm() > 1e-9) continue;
    try {
      if (std::abs(oracle_fi(p, i, rho, n)) <= 1e-8 * d) return true;
    } catch (const GeometryError&) {
    }
  }
  return false;
}

Outcome closed_forms() {
  Outcome o;
  double worst = 0;
  const auto t0 = Clock::now();
  const HPolygon sq = unit_square(), tri = triangle(), hex = hexagon();
  for (int n = 1; n <= 8; ++n) {
    const std::pair<const HPolygon*, double> cases[] = {
        {&sq, 1.0 / (2 * n)}, {&tri, (kSqrt3 / 2) / (2 * n + 1)}, {&hex, kSqrt3 / (2 * n)}};
    for (const auto& [p, want] : cases) {
      const double rho = record(*p, n, solve(*p, n)).rho;
      worst = std::max(worst, std::abs(rho - want) / want);
    }
  }
  const double ms = ms_since(t0);
  o.pass = worst <= 1e-9 && ms < 1000;
  o.detail = fmt("24 instances, max rel err %.2e (<= 1e-9), %.0f ms (< 1000)", worst, ms);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const int sizes[] = {8, 16, 32, 64, 128, 256};
  double worst = 0;
  int bad_v = 0;
  const auto t0 = Clock::now();
  for (int k = 0; k < 500; ++k) {
    const int m = sizes[k % 6];
    const int n = 1 + (k / 6) % 8;
    const HPolygon p = random_polygon(m, 1000 + k, static_cast<PolygonModel>(k % 3));
    const Solution& s = record(p, n, solve(p, n));
    const OracleSolution ref = oracle_solve(p, n);
    worst = std::max(worst, std::abs(s.rho - ref.rho) / ref.rho);
    const double d = diam(p);
    if ((s.direction - ref.direction).norm() > 1e-12 && !direction_ok(p, n, ref.rho, s.direction, d)) ++bad_v;
  }
  const double ms = ms_since(t0);
  o.pass = worst <= 1e-8 && bad_v == 0 && ms < 300000;
  o.detail = fmt("500 instances, max rel err %.2e (<= 1e-8), %d direction mismatches, %.1f s (< 300)", worst, bad_v,
                 ms / 1000);
  return o;
}

Outcome self_consistency() {
  Outcome o;
  double worst = 0;
  for (const Instance& in : g_solved) {
    const double d = diam(in.p);
    const std::vector<Vec2> pts = inner_vertices(in.p, in.s.rho, kTight);
    const double w = pts.size() < 2 ? 0.0 : min_width(VPolygon{pts}).width;
    const double resid = std::abs(w + 2 * in.s.rho - 2 * in.n * in.s.rho) / d;
    worst = std::max(worst, resid);
  }
  o.pass = worst <= 1e-8;
  o.detail = fmt("%zu instances, max |width + 2rho - 2n rho| / diam %.2e (<= 1e-8)", g_solved.size(), worst);
  return o;
}

Outcome piece_optimality() {
  Outcome o;
  double worst_over = 0, worst_gap = 0;
  int wrong_count = 0;
  for (const Instance& in : g_solved) {
    const double d = diam(in.p);
    const Vec2 v = in.s.direction;
    std::vector<double> radii;
    for (int j = 0; j < in.n; ++j) {
      std::vector<Vec2> normals = in.p.normals;
      std::vector<double> offsets = in.p.offsets;
      if (j > 0) normals.push_back(-v), offsets.push_back(-in.s.cuts[j - 1].offset);
      if (j + 1 < in.n) normals.push_back(v), offsets.push_back(in.s.cuts[j].offset);
      radii.push_back(inscribed_circle(normals, offsets).radius);
    }
    if (static_cast<int>(in.s.cuts.size()) != in.n - 1) ++wrong_count;
    const double top = *std::max_element(radii.begin(), radii.end());
    worst_over = std::max(worst_over, (top - in.s.rho) / d);
    worst_gap = std::max(worst_gap, std::abs(top - in.s.rho) / d);
  }
  o.pass = worst_gap <= 1e-8 && worst_over <= 1e-8 && wrong_count == 0;
  o.detail = fmt("%zu instances, max |max inradius - rho| / diam %.2e, max excess %.2e (<= 1e-8), %d bad cut counts",
                 g_solved.size(), worst_gap, worst_over, wrong_count);
  return o;
}

Outcome lp_queries() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  int total = 0, bad = 0, status_bad = 0;
  double worst = 0;
  auto compare = [&](const LpResult& a, const LpResult& b, double scale) {
    ++total;
    if (a.status != b.status) return void(++status_bad);
    if (!a.optimal()) return;
    const double err = std::abs(a.value - b.value) / std::max({std::abs(a.value), std::abs(b.value), scale});
    worst = std::max(worst, err);
    if (err > 1e-9) ++bad;
  };
  for (int dome = 0; dome < 25; ++dome) {
    const int m = 16 << (dome % 5);
    const Hierarchy h = make_hierarchy(random_polygon(m, 3000 + dome, static_cast<PolygonModel>(dome % 3)), true, dome);
    const std::vector<Halfspace> rows = dome_rows(h.dome);
    const LpResult top = small_lp(3, rows, Vec3::UnitZ());
    const Vec3 inside(top.point.x(), top.point.y(), 0.5 * top.point.z());
    const double scale = h.dome.scale;
    for (int q = 0; q < 134; ++q) {
      const Vec3 c = random_direction(rng);
      compare(lp_max(h, c), small_lp(3, rows, c), scale);

      Vec3 n = random_direction(rng);
      if (q % 4 == 0) n = Vec3::UnitZ();
      const double off = n.dot(inside) + (u(rng) - 0.5) * 0.3 * scale;
      std::vector<Halfspace> sec = rows;
      sec.push_back({n, off});
      sec.push_back({-n, -off});
      compare(lp_max_section(h, {n, off}, c), small_lp(3, sec, c), scale);

      std::vector<Halfspace> con = rows;
      con.push_back({n, off});
      compare(lp_max_constrained(h, c, {n, off}), small_lp(3, con, c), scale);
    }
  }
  o.pass = total >= 10000 && bad == 0 && status_bad == 0;
  o.detail = fmt("%d queries, max rel err %.2e (<= 1e-9), %d value and %d status disagreements", total, worst, bad,
                 status_bad);
  return o;
}

Outcome envelopes() {
  Outcome o;
  constexpr double kSectionC = 1.0, kSolveC = 1.0;  // with log base 2
  double section_ratio = 0, solve_ratio = 0, depth_excess = -1e9, storage = 0;
  double big_ms = 0;
  std::mt19937_64 rng(8);
  std::vector<double> solve_ms;
  for (int e = 6; e <= 16; ++e) {
    const int m = 1 << e;
    const double lg = e;

    const Hierarchy h = make_hierarchy(random_polygon(m, 4000 + e), true, e);
    const LpResult top = lp_max(h, Vec3::UnitZ());
    for (int q = 0; q < 100; ++q) {
      Vec3 n = random_direction(rng);
      if (q % 2 == 0) n = Vec3::UnitZ();
      const double off = n.dot(Vec3(top.point.x(), top.point.y(), 0.5 * top.point.z()));
      QueryStats st;
      lp_max_section(h, {n, off}, random_direction(rng), &st);
      section_ratio = std::max(section_ratio, st.vertex_inspections / (lg * lg * lg));
    }

    const HPolygon reg = regular_h(m);
    std::vector<double> runs;
    for (int r = 0; r < (e >= 12 ? 3 : 1); ++r) {
      SolveOptions opt;
      opt.verify = false;
      const auto t0 = Clock::now();
      const Solution s = solve(reg, 2, opt);
      const double wall = ms_since(t0);
      runs.push_back(s.stats.solve_ms);
      if (e == 16) big_ms = std::max(big_ms, wall);
      solve_ratio = std::max(solve_ratio, s.stats.queries.vertex_inspections / (m * std::pow(lg, 4)));
      depth_excess = std::max(depth_excess, s.stats.depth - (std::log(m) / std::log(1.2) + 2));
      storage = std::max(storage, static_cast<double>(s.stats.hierarchy_vertices) / m);
    }
    std::sort(runs.begin(), runs.end());
    solve_ms.push_back(runs[runs.size() / 2]);
  }
  double time_ratio = 0;
  for (int e = 12; e + 2 <= 16; e += 2) time_ratio = std::max(time_ratio, solve_ms[e + 2 - 6] / solve_ms[e - 6]);
  o.pass = section_ratio <= kSectionC && solve_ratio <= kSolveC && depth_excess <= 0 && storage <= 12 &&
           big_ms < 10000 && time_ratio < 6;
  o.detail = fmt(
      "section/log^3 %.3f (<= %.0f), solve/(m log^4) %.2e (<= %.0f), depth - bound %.1f (<= 0), storage %.2f m "
      "(<= 12), 65536-gon %.0f ms (< 10000), solve_ms(4m)/solve_ms(m) %.2f (< 6)",
      section_ratio, kSectionC, solve_ratio, kSolveC, depth_excess, storage, big_ms, time_ratio);
  return o;
}

Outcome invariance() {
  Outcome o;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  int bad_rigid = 0, bad_scale = 0, bad_mono = 0;
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const HPolygon p = random_polygon(10 + 3 * k, 5000 + k, static_cast<PolygonModel>(k % 3));
    const int n = 1 + k % 6;
    const double d = diam(p);
    const Solution& base = record(p, n, solve(p, n));
    const double angle = 3.14159 * u(rng);
    const Vec2 shift(10 * u(rng), 10 * u(rng));
    const HPolygon moved_p = transform(p, angle, shift);
    const Solution& moved = record(moved_p, n, solve(moved_p, n));
    worst = std::max(worst, std::abs(moved.rho - base.rho) / base.rho);
    const Vec2 back = Eigen::Rotation2Dd(-angle) * moved.direction;
    if (std::abs(moved.rho - base.rho) > 1e-9 * base.rho ||
        ((back - base.direction).norm() > 1e-9 && !direction_ok(p, n, base.rho, back, d)))
      ++bad_rigid;
    for (double lambda : {0.1, 3.0, 1000.0}) {
      const HPolygon sp = transform(p, 0, Vec2::Zero(), lambda);
      const Solution& scaled = record(sp, n, solve(sp, n));
      const double err = std::abs(scaled.rho - lambda * base.rho) / (lambda * base.rho);
      worst = std::max(worst, err);
      if (err > 1e-9 || ((scaled.direction - base.direction).norm() > 1e-9 &&
                         !direction_ok(p, n, base.rho, scaled.direction, d)))
        ++bad_scale;
    }
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 8; ++j) {
      const double rho = solve(p, j).rho;
      if (!(rho < prev)) ++bad_mono;
      prev = rho;
    }
  }
  o.pass = bad_rigid == 0 && bad_scale == 0 && bad_mono == 0;
  o.detail = fmt("50 instances, max rel err %.2e (<= 1e-9), %d rigid, %d scale, %d monotonicity failures", worst,
                 bad_rigid, bad_scale, bad_mono);
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  bool all = true;
  report(1, "closed forms", guarded(closed_forms), all);
  report(2, "oracle equivalence", guarded(oracle_equivalence), all);
  report(7, "invariance", guarded(invariance), all);
  report(3, "self-consistency", guarded(self_consistency), all);
  report(4, "piece optimality", guarded(piece_optimality), all);
  report(5, "LP queries", guarded(lp_queries), all);
  report(6, "complexity envelopes", guarded(envelopes), all);
  return all ? 0 : 1;
}
