#pragma once

#include <iosfwd>
#include <string>

#include "potato/solver.hpp"

namespace potato::cli {

struct Input {
  HPolygon polygon;
  int n = 1;
};

// Parses the input document. Throws GeometryError(MalformedInput).
Input parse_input(const std::string& text);

std::string solution_json(const Solution& s, double wall_ms);

// Polygon outline, inner body at rho (dashed), cuts clipped to the polygon and
// circles of radius rho in the two pieces with the largest inradius.
std::string solution_svg(const HPolygon& p, const Solution& s);

// Exit codes: 0 ok, 1 internal error, 2 malformed input, 3 failed verification.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace potato::cli
