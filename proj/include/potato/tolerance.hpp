#pragma once

#include <algorithm>
#include <cmath>

namespace potato {

// Every comparison of reals in the library goes through one of these.
struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-9;

  double bound(double magnitude) const { return abs + rel * std::abs(magnitude); }

  bool near(double a, double b, double scale) const {
    return std::abs(a - b) <= bound(std::max({std::abs(a), std::abs(b), scale}));
  }
  // a <= b up to tolerance at the given length scale.
  bool leq(double a, double b, double scale) const { return a <= b + bound(scale); }
  bool less(double a, double b, double scale) const { return a < b - bound(scale); }

  int sign(double v, double scale) const {
    const double e = bound(scale);
    return v > e ? 1 : (v < -e ? -1 : 0);
  }
};

}  // namespace potato
