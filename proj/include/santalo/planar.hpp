#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace santalo {

struct Point2 {
  double x, y;
};

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Counter-clockwise convex hull (Andrew's monotone chain).
inline std::vector<Point2> convex_hull(std::vector<Point2> p) {
  std::sort(p.begin(), p.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  if (p.size() < 3) return p;
  std::vector<Point2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

inline bool inside_hull(const std::vector<Point2>& h, const Point2& q, double tol) {
  if (h.size() == 1) return std::abs(q.x - h[0].x) <= tol && std::abs(q.y - h[0].y) <= tol;
  if (h.size() == 2) {
    const double len = std::hypot(h[1].x - h[0].x, h[1].y - h[0].y);
    if (std::abs(cross(h[0], h[1], q)) > tol * len) return false;
    const double t = ((q.x - h[0].x) * (h[1].x - h[0].x) +
                      (q.y - h[0].y) * (h[1].y - h[0].y)) / (len * len);
    return t >= -tol && t <= 1.0 + tol;
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Point2& a = h[i];
    const Point2& b = h[(i + 1) % h.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (cross(a, b, q) < -tol * len) return false;
  }
  return true;
}

}  // namespace santalo
