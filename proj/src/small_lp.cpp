#include "potato/small_lp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace potato {
namespace {

constexpr int kBoxId = -1;
constexpr double kDegenerateRow = 1e-14;

struct Row {
  std::array<double, 3> a{};
  double b = 0.0;
  int id = kBoxId;
};

enum class Sub { kOk, kInfeasible };

struct Solver {
  Tolerance tol;
  double box = 1.0;

  double slack_bound(double b) const { return tol.bound(std::max(1.0, std::abs(b))); }

  // Scales a row to unit normal over the first k coordinates. Returns false for
  // rows with a vanishing normal; `trivial` then tells whether 0 <= b holds.
  static bool normalize(Row& r, int k, double eps, bool& trivial) {
    double n = 0.0;
    for (int j = 0; j < k; ++j) n += r.a[j] * r.a[j];
    n = std::sqrt(n);
    if (n <= kDegenerateRow) {
      trivial = r.b >= -eps;
      return false;
    }
    for (int j = 0; j < k; ++j) r.a[j] /= n;
    r.b /= n;
    return true;
  }

  Sub solve1(const std::vector<Row>& rows, double c, std::array<double, 3>& x,
             std::vector<int>& basis) const {
    double lo = -box, hi = box;
    int lo_id = kBoxId, hi_id = kBoxId;
    for (const Row& r : rows) {
      const double a = r.a[0];
      if (std::abs(a) <= kDegenerateRow) {
        if (r.b < -slack_bound(r.b)) return Sub::kInfeasible;
        continue;
      }
      const double v = r.b / a;
      if (a > 0) {
        if (v < hi || (v == hi && r.id >= 0 && (hi_id < 0 || r.id < hi_id))) {
          hi = v;
          hi_id = r.id;
        }
      } else {
        if (v > lo || (v == lo && r.id >= 0 && (lo_id < 0 || r.id < lo_id))) {
          lo = v;
          lo_id = r.id;
        }
      }
    }
    if (lo > hi + slack_bound(std::max(std::abs(lo), std::abs(hi)))) return Sub::kInfeasible;
    basis.clear();
    if (c > 0) {
      x[0] = std::max(hi, lo);
      if (hi_id >= 0) basis.push_back(hi_id);
    } else {
      x[0] = lo;
      if (lo_id >= 0) basis.push_back(lo_id);
    }
    return Sub::kOk;
  }

  Sub solve(int k, const std::vector<Row>& rows, const std::array<double, 3>& c,
            std::array<double, 3>& x, std::vector<int>& basis) const {
    if (k == 1) return solve1(rows, c[0], x, basis);

    for (int j = 0; j < k; ++j) x[j] = c[j] > 0 ? box : -box;
    basis.clear();

    std::vector<Row> sub;
    std::vector<int> sub_basis;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      double ax = 0.0;
      for (int j = 0; j < k; ++j) ax += r.a[j] * x[j];
      if (ax <= r.b + slack_bound(r.b)) continue;

      // The optimum moves onto r's boundary: eliminate its largest coordinate.
      int p = 0;
      for (int j = 1; j < k; ++j)
        if (std::abs(r.a[j]) > std::abs(r.a[p])) p = j;
      const double ap = r.a[p];

      auto project = [&](const Row& h) {
        Row out;
        int q = 0;
        const double f = h.a[p] / ap;
        for (int j = 0; j < k; ++j) {
          if (j == p) continue;
          out.a[q++] = h.a[j] - f * r.a[j];
        }
        out.b = h.b - f * r.b;
        out.id = h.id;
        return out;
      };

      sub.clear();
      sub.reserve(i + 2);
      // The eliminated coordinate keeps its box through the projection.
      for (double s : {1.0, -1.0}) {
        Row bx;
        bx.a[p] = s;
        bx.b = box;
        sub.push_back(project(bx));
      }
      for (std::size_t h = 0; h < i; ++h) sub.push_back(project(rows[h]));

      std::vector<Row> kept;
      kept.reserve(sub.size());
      for (Row& s : sub) {
        bool trivial = true;
        if (normalize(s, k - 1, slack_bound(s.b), trivial)) {
          kept.push_back(s);
        } else if (!trivial) {
          return Sub::kInfeasible;
        }
      }

      std::array<double, 3> sub_c{};
      {
        int q = 0;
        const double f = c[p] / ap;
        for (int j = 0; j < k; ++j) {
          if (j == p) continue;
          sub_c[q++] = c[j] - f * r.a[j];
        }
      }
      std::array<double, 3> y{};
      if (solve(k - 1, kept, sub_c, y, sub_basis) == Sub::kInfeasible) return Sub::kInfeasible;

      double rest = r.b;
      int q = 0;
      for (int j = 0; j < k; ++j) {
        if (j == p) continue;
        x[j] = y[q];
        rest -= r.a[j] * y[q];
        ++q;
      }
      x[p] = rest / ap;
      basis.assign(1, r.id);
      for (int id : sub_basis)
        if (id >= 0 && id != r.id) basis.push_back(id);
    }
    return Sub::kOk;
  }
};

}  // namespace

LpResult small_lp(int dim, std::span<const Halfspace> constraints, const Vec3& objective,
                  const LpOptions& options) {
  LpResult result;
  if (dim < 1 || dim > 3) {
    result.status = LpStatus::kInfeasible;
    return result;
  }

  std::vector<int> order(constraints.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  std::shuffle(order.begin(), order.end(), rng);

  double max_offset = 1.0;
  std::vector<Row> rows;
  rows.reserve(constraints.size());
  Solver solver{options.tol, 1.0};
  for (int idx : order) {
    Row r;
    for (int j = 0; j < dim; ++j) r.a[j] = constraints[idx].normal[j];
    r.b = constraints[idx].offset;
    r.id = idx;
    bool trivial = true;
    if (!Solver::normalize(r, dim, solver.slack_bound(r.b), trivial)) {
      if (!trivial) return result;
      continue;
    }
    max_offset = std::max(max_offset, std::abs(r.b));
    rows.push_back(r);
  }

  std::array<double, 3> c{};
  for (int j = 0; j < dim; ++j) c[j] = objective[j];

  auto run = [&](double box, std::array<double, 3>& x, std::vector<int>& basis) {
    solver.box = box;
    return solver.solve(dim, rows, c, x, basis);
  };

  const double box = options.box > 0 ? options.box : 1e6 * max_offset;
  std::array<double, 3> x{};
  std::vector<int> basis;
  if (run(box, x, basis) == Sub::kInfeasible) return result;

  auto value_of = [&](const std::array<double, 3>& p) {
    double v = 0.0;
    for (int j = 0; j < dim; ++j) v += c[j] * p[j];
    return v;
  };

  result.status = LpStatus::kOptimal;
  bool touches_box = false;
  for (int j = 0; j < dim; ++j) touches_box |= std::abs(x[j]) >= 0.5 * box;
  if (touches_box) {
    std::array<double, 3> wide{};
    std::vector<int> wide_basis;
    if (run(16.0 * box, wide, wide_basis) == Sub::kOk &&
        value_of(wide) > value_of(x) + options.tol.bound(std::abs(value_of(x)))) {
      result.status = LpStatus::kUnbounded;
    }
  }
  for (int j = 0; j < dim; ++j) result.point[j] = x[j];
  result.value = value_of(x);
  std::sort(basis.begin(), basis.end());
  result.basis = std::move(basis);
  return result;
}

}  // namespace potato
