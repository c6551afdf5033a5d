#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "santalo/grid_function.hpp"

namespace testutil {

inline santalo::Axis axis(double lo, double hi, int steps) {
  santalo::Axis a;
  a.lo = lo;
  a.hi = hi;
  a.steps = steps;
  return a;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Random convex function on [-1, 1]: quadratic plus a few kinks plus a tilt.
struct RandomConvex1D {
  double a, b;
  std::vector<double> c, t;
  explicit RandomConvex1D(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    a = 2.0 * u(rng);
    b = 2.0 * u(rng) - 1.0;
    for (int k = 0; k < 3; ++k) {
      c.push_back(u(rng));
      t.push_back(1.6 * u(rng) - 0.8);
    }
  }
  double operator()(double x) const {
    double v = 0.5 * a * x * x + b * x;
    for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * std::abs(x - t[k]);
    return v;
  }
};

// Composite Simpson in long double over [lo, hi], with extra breakpoints
// where the integrand has kinks; each piece gets `panels` panels.
template <class G>
double simpson(G&& g, std::vector<double> breaks, double lo, double hi, int panels = 20000) {
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  long double total = 0.0L;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = std::max(lo, breaks[k]), b = std::min(hi, breaks[k + 1]);
    if (!(b > a)) continue;
    const long double h = (static_cast<long double>(b) - a) / (2 * panels);
    long double s = 0.0L;
    for (int i = 0; i <= 2 * panels; ++i) {
      // Endpoints are nudged inside so one-sided data at kinks is used.
      const double eps = 1e-13 * (b - a);
      const double x = std::clamp(static_cast<double>(a + i * h), a + eps, b - eps);
      const long double w = (i == 0 || i == 2 * panels) ? 1 : (i % 2 ? 4 : 2);
      s += w * static_cast<long double>(g(x));
    }
    total += s * h / 3.0L;
  }
  return static_cast<double>(total);
}

}  // namespace testutil
