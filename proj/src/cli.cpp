#include "potato/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "potato/oracle.hpp"

namespace potato::cli {
namespace {

using nlohmann::json;

std::string num(double v) {
  if (!std::isfinite(v)) return v > 0 ? "1e999" : (v < 0 ? "-1e999" : "null");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

std::string vec(const Vec2& v) { return "[" + num(v.x()) + ", " + num(v.y()) + "]"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError(ErrorCode::kMalformedInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw GeometryError(ErrorCode::kMalformedInput, std::string(what) + " must be a number");
  return j.get<double>();
}

Vec2 pair(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw GeometryError(ErrorCode::kMalformedInput, std::string(what) + " must be [x, y]");
  return {number(j[0], what), number(j[1], what)};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw GeometryError(ErrorCode::kMalformedInput, e.what());
  }
}

std::string report_json(const VerificationReport& r, const std::string& indent) {
  std::string s = "{\n";
  s += indent + "  \"width_check\": " + num(r.width_residual) + ",\n";
  s += indent + "  \"width_ok\": " + (r.width_ok ? "true" : "false") + ",\n";
  s += indent + "  \"piece_inradii\": [";
  for (std::size_t k = 0; k < r.piece_inradii.size(); ++k) s += (k ? ", " : "") + num(r.piece_inradii[k]);
  s += "],\n";
  s += indent + "  \"max_piece_inradius\": " + num(r.max_piece_inradius) + ",\n";
  s += indent + "  \"pieces_ok\": " + (r.pieces_ok ? "true" : "false") + ",\n";
  s += indent + "  \"min_f\": " + num(r.min_f) + ",\n";
  s += indent + "  \"f_ok\": " + (r.f_ok ? "true" : "false") + "\n";
  s += indent + "}";
  return s;
}

HPolygon regular_polygon(int m) {
  HPolygon p;
  for (int k = 0; k < m; ++k) {
    const double a = 2.0 * std::numbers::pi * k / m;
    p.normals.emplace_back(std::cos(a), std::sin(a));
    p.offsets.push_back(1.0);
  }
  return p;
}

// Endpoints of the chord v . x = c of a counterclockwise polygon.
std::vector<Vec2> chord(const std::vector<Vec2>& poly, const Vec2& v, double c) {
  std::vector<Vec2> out;
  const int k = static_cast<int>(poly.size());
  for (int a = 0; a < k && out.size() < 2; ++a) {
    const Vec2& p = poly[a];
    const Vec2& q = poly[(a + 1) % k];
    const double sp = v.dot(p) - c, sq = v.dot(q) - c;
    if ((sp < 0) != (sq < 0)) out.push_back(p + (q - p) * (sp / (sp - sq)));
  }
  return out;
}

int fail(std::ostream& err, int code, const std::string& msg) {
  err << "potato: " << msg << "\n";
  return code;
}

int exit_code(const GeometryError& e) {
  switch (e.code()) {
    case ErrorCode::kMalformedInput:
    case ErrorCode::kEmptyInterior:
    case ErrorCode::kUnbounded:
    case ErrorCode::kInvalidPieceCount:
      return 2;
    case ErrorCode::kVerificationFailed:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

Input parse_input(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw GeometryError(ErrorCode::kMalformedInput, "top level must be an object");
  const bool has_v = doc.contains("vertices"), has_h = doc.contains("halfplanes");
  if (has_v == has_h) throw GeometryError(ErrorCode::kMalformedInput, "exactly one of vertices/halfplanes required");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw GeometryError(ErrorCode::kMalformedInput, "n must be an integer");
  Input in;
  in.n = doc["n"].get<int>();
  if (in.n < 1) throw GeometryError(ErrorCode::kMalformedInput, "n must be at least 1");
  if (has_v) {
    const json& vs = doc["vertices"];
    if (!vs.is_array()) throw GeometryError(ErrorCode::kMalformedInput, "vertices must be a list");
    VPolygon v;
    for (const json& p : vs) v.vertices.push_back(pair(p, "vertex"));
    if (v.size() < 3) throw GeometryError(ErrorCode::kMalformedInput, "need at least three vertices");
    in.polygon = canonicalize(VPolygon{convex_hull(v.vertices)}).h;
  } else {
    const json& hs = doc["halfplanes"];
    if (!hs.is_array()) throw GeometryError(ErrorCode::kMalformedInput, "halfplanes must be a list");
    HPolygon h;
    for (const json& row : hs) {
      if (!row.is_object() || !row.contains("normal") || !row.contains("offset"))
        throw GeometryError(ErrorCode::kMalformedInput, "halfplane needs normal and offset");
      h.normals.push_back(pair(row["normal"], "normal"));
      h.offsets.push_back(number(row["offset"], "offset"));
      if (h.normals.back().norm() == 0.0) throw GeometryError(ErrorCode::kMalformedInput, "zero normal");
    }
    in.polygon = canonicalize(h).h;
  }
  return in;
}

std::string solution_json(const Solution& s, double wall_ms) {
  std::string o = "{\n";
  o += "  \"rho\": " + num(s.rho) + ",\n";
  o += "  \"direction\": " + vec(s.direction) + ",\n";
  o += "  \"winner_facet\": " + std::to_string(s.winner) + ",\n";
  o += "  \"n\": " + std::to_string(s.n) + ",\n";
  o += "  \"cuts\": [";
  for (std::size_t k = 0; k < s.cuts.size(); ++k)
    o += std::string(k ? "," : "") + "\n    {\"normal\": " + vec(s.cuts[k].normal) + ", \"offset\": " + num(s.cuts[k].offset) + "}";
  o += s.cuts.empty() ? "],\n" : "\n  ],\n";
  o += "  \"verification\": " + report_json(s.verification, "  ") + ",\n";
  const QueryStats& q = s.stats.queries;
  o += "  \"stats\": {\n";
  o += "    \"m\": " + std::to_string(s.stats.m) + ",\n";
  o += "    \"depth\": " + std::to_string(s.stats.depth) + ",\n";
  o += "    \"hierarchy_vertices\": " + std::to_string(s.stats.hierarchy_vertices) + ",\n";
  o += "    \"lp_queries\": " + std::to_string(q.queries) + ",\n";
  o += "    \"levels_visited\": " + std::to_string(q.levels_visited) + ",\n";
  o += "    \"facet_subproblems\": " + std::to_string(q.facet_subproblems) + ",\n";
  o += "    \"vertex_inspections\": " + std::to_string(q.vertex_inspections) + ",\n";
  o += "    \"build_ms\": " + num(s.stats.build_ms) + ",\n";
  o += "    \"solve_ms\": " + num(s.stats.solve_ms) + ",\n";
  o += "    \"wall_ms\": " + num(wall_ms) + "\n";
  o += "  }\n}\n";
  return o;
}

std::string solution_svg(const HPolygon& p, const Solution& s) {
  const Polygon poly = canonicalize(p);
  const auto& pts = poly.v.vertices;
  double x0 = pts[0].x(), x1 = x0, y0 = pts[0].y(), y1 = y0;
  for (const Vec2& q : pts) {
    x0 = std::min(x0, q.x());
    x1 = std::max(x1, q.x());
    y0 = std::min(y0, q.y());
    y1 = std::max(y1, q.y());
  }
  const double diam = diameter(poly.v);
  const double span = std::max(x1 - x0, y1 - y0);
  const double margin = 0.04 * span;
  const double size = 800.0;
  const double k = size / (span + 2 * margin);
  auto X = [&](double x) { return num((x - x0 + margin) * k); };
  auto Y = [&](double y) { return num((y1 - y + margin) * k); };
  const std::string stroke = num(0.004 * diam * k);
  auto path = [&](const std::vector<Vec2>& v) {
    std::string d;
    for (std::size_t a = 0; a < v.size(); ++a) d += (a ? " L " : "M ") + X(v[a].x()) + " " + Y(v[a].y());
    return d + " Z";
  };

  std::string o = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num((x1 - x0 + 2 * margin) * k) +
                  "\" height=\"" + num((y1 - y0 + 2 * margin) * k) + "\">\n";
  o += "  <path id=\"polygon\" d=\"" + path(pts) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"" + stroke + "\"/>\n";
  const std::vector<Vec2> inner = inner_vertices(poly.h, s.rho);
  if (inner.size() >= 2)
    o += "  <path id=\"inner\" d=\"" + path(inner) + "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"" +
         num(0.02 * diam * k) + "\" stroke-width=\"" + stroke + "\"/>\n";
  for (const Cut& c : s.cuts) {
    const std::vector<Vec2> ends = chord(pts, c.normal, c.offset);
    if (ends.size() < 2) continue;
    o += "  <line class=\"cut\" x1=\"" + X(ends[0].x()) + "\" y1=\"" + Y(ends[0].y()) + "\" x2=\"" + X(ends[1].x()) +
         "\" y2=\"" + Y(ends[1].y()) + "\" stroke=\"red\" stroke-width=\"" + stroke + "\"/>\n";
  }
  // Incircles of the two fattest pieces.
  std::vector<std::pair<double, Vec2>> pieces;
  for (int j = 0; j < s.n; ++j) {
    std::vector<Vec2> normals = poly.h.normals;
    std::vector<double> offsets = poly.h.offsets;
    if (j > 0) {
      normals.push_back(-s.cuts[j - 1].normal);
      offsets.push_back(-s.cuts[j - 1].offset);
    }
    if (j < s.n - 1 && j < static_cast<int>(s.cuts.size())) {
      normals.push_back(s.cuts[j].normal);
      offsets.push_back(s.cuts[j].offset);
    }
    const Incircle c = inscribed_circle(normals, offsets);
    pieces.emplace_back(c.radius, c.center);
  }
  std::stable_sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; j < pieces.size() && j < 2; ++j)
    o += "  <circle class=\"incircle\" cx=\"" + X(pieces[j].second.x()) + "\" cy=\"" + Y(pieces[j].second.y()) +
         "\" r=\"" + num(s.rho * k) + "\" fill=\"none\" stroke=\"blue\" stroke-width=\"" + stroke + "\"/>\n";
  o += "</svg>\n";
  return o;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Critical radius and optimal parallel cuts of a convex polygon"};
  app.require_subcommand(1);

  std::string in_path, out_path, svg_path, m_list;
  std::uint64_t seed = 0;
  double tolerance = Tolerance{}.rel;
  int repeats = 1, bench_n = 2;

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve an instance and print the result as JSON");
  solve_cmd->add_option("input", in_path)->required();
  solve_cmd->add_option("--svg", svg_path, "also write a drawing");
  solve_cmd->add_option("--seed", seed, "perturbation seed");
  solve_cmd->add_option("--tolerance", tolerance, "relative tolerance");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force reference solve");
  oracle_cmd->add_option("input", in_path)->required();

  CLI::App* verify_cmd = app.add_subcommand("verify", "check a result file against its input");
  verify_cmd->add_option("input", in_path)->required();
  verify_cmd->add_option("result", out_path)->required();

  CLI::App* bench_cmd = app.add_subcommand("bench", "time regular polygons, CSV output");
  bench_cmd->add_option("--m-list", m_list, "comma separated sizes")->required();
  bench_cmd->add_option("--repeats", repeats, "runs per size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--n", bench_n, "piece count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(err, 2, e.what());
  }

  try {
    if (*solve_cmd) {
      const auto t0 = std::chrono::steady_clock::now();
      const Input in = parse_input(read_file(in_path));
      SolveOptions opt;
      opt.seed = seed;
      opt.tol.rel = tolerance;
      opt.verify = false;
      Solution s = solve(in.polygon, in.n, opt);
      s.verification = check_solution(in.polygon, in.n, s.rho, s.cuts);
      const double wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      out << solution_json(s, wall);
      if (!svg_path.empty()) {
        std::ofstream svg(svg_path);
        if (!svg) return fail(err, 1, "cannot write " + svg_path);
        svg << solution_svg(in.polygon, s);
      }
      if (!s.verification.passed()) return fail(err, 3, "solution failed verification");
      return 0;
    }
    if (*oracle_cmd) {
      const Input in = parse_input(read_file(in_path));
      const OracleSolution o = oracle_solve(in.polygon, in.n);
      out << "{\n  \"rho\": " << num(o.rho) << ",\n  \"direction\": " << vec(o.direction)
          << ",\n  \"winner_facet\": " << o.winner << "\n}\n";
      return 0;
    }
    if (*verify_cmd) {
      const Input in = parse_input(read_file(in_path));
      const json doc = parse_json(read_file(out_path));
      if (!doc.is_object() || !doc.contains("rho") || !doc.contains("cuts") || !doc["cuts"].is_array())
        throw GeometryError(ErrorCode::kMalformedInput, "result needs rho and cuts");
      const double rho = number(doc["rho"], "rho");
      std::vector<Cut> cuts;
      for (const json& c : doc["cuts"]) {
        if (!c.is_object() || !c.contains("normal") || !c.contains("offset"))
          throw GeometryError(ErrorCode::kMalformedInput, "cut needs normal and offset");
        cuts.push_back({pair(c["normal"], "normal"), number(c["offset"], "offset")});
      }
      const VerificationReport r = check_solution(in.polygon, in.n, rho, cuts);
      out << report_json(r, "") << "\n";
      if (!r.passed()) return fail(err, 3, "verification failed");
      return 0;
    }
    if (*bench_cmd) {
      std::vector<int> sizes;
      std::stringstream ss(m_list);
      for (std::string tok; std::getline(ss, tok, ',');) {
        try {
          sizes.push_back(std::stoi(tok));
        } catch (const std::exception&) {
          return fail(err, 2, "bad --m-list entry '" + tok + "'");
        }
        if (sizes.back() < 3) return fail(err, 2, "sizes must be at least 3");
      }
      out << "m,build_ms,solve_ms,lp_queries,vertex_inspections\n";
      for (int m : sizes) {
        for (int r = 0; r < repeats; ++r) {
          SolveOptions opt;
          opt.verify = false;
          const Solution s = solve(regular_polygon(m), bench_n, opt);
          out << m << "," << num(s.stats.build_ms) << "," << num(s.stats.solve_ms) << "," << s.stats.queries.queries
              << "," << s.stats.queries.vertex_inspections << "\n";
        }
      }
      return 0;
    }
  } catch (const GeometryError& e) {
    return fail(err, exit_code(e), e.what());
  } catch (const std::exception& e) {
    return fail(err, 1, e.what());
  }
  return 1;
}

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace potato::cli
