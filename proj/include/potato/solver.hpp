#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "potato/hierarchy.hpp"
#include "potato/lp_query.hpp"

namespace potato {

struct FacetDiagnostic {
  double max_t = 0.0;       // M_i, the highest point of facet i
  double f_at_max = 0.0;    // f_i(M_i)
  bool qualifies = false;
  std::optional<double> root;
};

// v . x = offset
struct Cut {
  Vec2 normal = Vec2::Zero();
  double offset = 0.0;
};

struct VerificationReport {
  double width_residual = 0.0;  // width(inner_rho) + 2 rho - 2 n rho
  std::vector<double> piece_inradii;
  double max_piece_inradius = 0.0;
  double min_f = 0.0;  // min_i f_i(rho)
  bool width_ok = false;
  bool pieces_ok = false;
  bool f_ok = false;

  bool passed() const { return width_ok && pieces_ok && f_ok; }
};

struct SolveStats {
  int m = 0;
  int depth = 0;
  std::size_t hierarchy_vertices = 0;
  QueryStats queries;
  double build_ms = 0.0;
  double solve_ms = 0.0;  // everything after the hierarchy is built
};

struct Solution {
  double rho = 0.0;
  Vec2 direction = Vec2::Zero();
  int winner = -1;
  int n = 1;
  std::vector<Cut> cuts;
  std::vector<FacetDiagnostic> diagnostics;
  VerificationReport verification;
  SolveStats stats;
};

struct SolveOptions {
  bool perturb = true;
  std::uint64_t seed = 0;
  Tolerance tol;
  bool verify = true;
};

// b_i - min_{A x <= b - t} A_i . x - (2n - 1) t, on the dome's own offsets.
// Throws OutOfRange when t is above facet i.
double eval_fi(const Hierarchy& h, int i, double t, int n, QueryStats* stats = nullptr);

// Largest t with f_i(t) >= 0 (the root of f_i). Throws NotQualified unless
// f_i(M_i) <= 0 up to tolerance.
double root_lp(const Hierarchy& h, int i, int n, QueryStats* stats = nullptr);

// P is canonicalized first; facet indices refer to the canonical rows.
Solution solve(const HPolygon& p, int n, const SolveOptions& options = {});

std::vector<Cut> place_cuts(const HPolygon& p, double rho, const Vec2& v, int n);

// Evaluates the three checks without throwing. Bounds are 1e-8 * diameter.
VerificationReport check_solution(const HPolygon& p, int n, double rho, const std::vector<Cut>& cuts);

// Throws VerificationFailed naming the first failed check.
VerificationReport verify_solution(const HPolygon& p, int n, const Solution& s);

}  // namespace potato
