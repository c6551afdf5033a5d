#include "santalo/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "santalo/errors.hpp"
#include "santalo/lower_hull.hpp"

namespace santalo {

namespace {

// Outward-decay rates at both ends of a grid line: the slope of the
// extension when the end node is finite; 0 marks a closed end.
struct LineEnds {
  double left_rate = 0.0;   // -s_L, must be > 0 for integrability
  double right_rate = 0.0;  // s_R
  bool left_open = false, right_open = false;
  bool degenerate = false;  // finite end but no slope to extend with
};

LineEnds line_ends(const double* x, const double* f, std::size_t n) {
  HullConjugate<double> hc(x, f, n);
  LineEnds e;
  if (hc.empty()) return e;
  e.left_open = std::isfinite(f[0]);
  e.right_open = std::isfinite(f[n - 1]);
  if ((e.left_open || e.right_open) && !hc.has_slopes()) {
    e.degenerate = true;
    return e;
  }
  if (e.left_open) e.left_rate = -hc.first_slope();
  if (e.right_open) e.right_rate = hc.last_slope();
  return e;
}

std::vector<double> nodes(const Axis& a) {
  std::vector<double> x(static_cast<std::size_t>(a.steps));
  for (int i = 0; i < a.steps; ++i) x[static_cast<std::size_t>(i)] = a.node(i);
  return x;
}

double finite_min(const GridFunction& f) {
  double m = kInf;
  for (Eigen::Index k = 0; k < f.size(); ++k) m = std::min(m, f[k]);
  return m;
}

struct Parts {
  double bulk = 0.0;
  double coarse = 0.0;  // same rule on every other node
  bool coarse_valid = false;
  double tail = 0.0;
  bool divergent = false;
  double needed_rate = 0.0;  // smallest decay rate among open ends
  Array* nodes = nullptr;    // optional per-node share of bulk + tail
  void put(Eigen::Index k, double w) {
    if (nodes) (*nodes)(k) += w;
  }
};

void too_small(const GridFunction& f, const Parts& p) {
  std::ostringstream os;
  os.precision(6);
  const double extra =
      (std::log(p.tail / (1e-6 * p.bulk)) + 5.0) / std::max(p.needed_rate, 1e-3);
  os << "extrapolated tail " << p.tail << " exceeds 1e-6 of the bulk " << p.bulk
     << "; suggested bounds:";
  for (const auto& a : f.axes()) os << " [" << a.lo - extra << ", " << a.hi + extra << "]";
  throw GridTooSmall(os.str());
}

Parts parts_1d(const GridFunction& f, double shift, Array* node_weights) {
  const auto x = nodes(f.axis(0));
  const std::size_t n = x.size();
  const double h = f.axis(0).spacing();
  Parts p;
  p.nodes = node_weights;
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = exp_neg(f[static_cast<Eigen::Index>(i)] - shift);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (std::isfinite(f[static_cast<Eigen::Index>(i)]) &&
        std::isfinite(f[static_cast<Eigen::Index>(i + 1)])) {
      p.bulk += 0.5 * h * (e[i] + e[i + 1]);
      p.put(static_cast<Eigen::Index>(i), 0.5 * h * e[i]);
      p.put(static_cast<Eigen::Index>(i + 1), 0.5 * h * e[i + 1]);
    }
  // Richardson-style estimate on the pairs of cells that are fully finite.
  double diff = 0.0;
  for (std::size_t i = 0; i + 2 < n; i += 2) {
    const auto k = static_cast<Eigen::Index>(i);
    if (!std::isfinite(f[k]) || !std::isfinite(f[k + 1]) || !std::isfinite(f[k + 2]))
      continue;
    const double fine = 0.5 * h * (e[i] + 2.0 * e[i + 1] + e[i + 2]);
    const double coarse = h * (e[i] + e[i + 2]);
    diff += fine - coarse;
  }
  p.coarse = p.bulk - diff;
  p.coarse_valid = n >= 5;
  const LineEnds ends = line_ends(x.data(), f.values().data(), n);
  if (ends.degenerate) return p;
  p.needed_rate = kInf;
  if (ends.left_open) {
    if (ends.left_rate <= 0.0) p.divergent = true;
    else {
      p.tail += e[0] / ends.left_rate;
      p.put(0, e[0] / ends.left_rate);
    }
    p.needed_rate = std::min(p.needed_rate, ends.left_rate);
  }
  if (ends.right_open) {
    if (ends.right_rate <= 0.0) p.divergent = true;
    else {
      p.tail += e[n - 1] / ends.right_rate;
      p.put(static_cast<Eigen::Index>(n - 1), e[n - 1] / ends.right_rate);
    }
    p.needed_rate = std::min(p.needed_rate, ends.right_rate);
  }
  return p;
}

Parts parts_2d(const GridFunction& f, double shift, Array* node_weights) {
  const int n0 = f.steps(0), n1 = f.steps(1);
  const double h0 = f.axis(0).spacing(), h1 = f.axis(1).spacing();
  const auto x0 = nodes(f.axis(0));
  const auto x1 = nodes(f.axis(1));
  Parts p;
  p.nodes = node_weights;
  Array e(f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) e(k) = exp_neg(f[k] - shift);
  auto fin = [&](int i, int j) { return std::isfinite(f.at(i, j)); };
  auto ev = [&](int i, int j) { return e(f.index(i, j)); };

  for (int j = 0; j + 1 < n1; ++j)
    for (int i = 0; i + 1 < n0; ++i)
      if (fin(i, j) && fin(i + 1, j) && fin(i, j + 1) && fin(i + 1, j + 1)) {
        const double q = 0.25 * h0 * h1;
        p.bulk += q * (ev(i, j) + ev(i + 1, j) + ev(i, j + 1) + ev(i + 1, j + 1));
        if (p.nodes) {
          p.put(f.index(i, j), q * ev(i, j));
          p.put(f.index(i + 1, j), q * ev(i + 1, j));
          p.put(f.index(i, j + 1), q * ev(i, j + 1));
          p.put(f.index(i + 1, j + 1), q * ev(i + 1, j + 1));
        }
      }
  double diff = 0.0;
  for (int j = 0; j + 2 < n1; j += 2)
    for (int i = 0; i + 2 < n0; i += 2) {
      bool ok = true;
      double w = 0.0, fine = 0.0;
      for (int dj = 0; dj <= 2 && ok; ++dj)
        for (int di = 0; di <= 2 && ok; ++di) {
          ok = fin(i + di, j + dj);
          const double wt = (di == 1 ? 2.0 : 1.0) * (dj == 1 ? 2.0 : 1.0);
          if (ok) fine += wt * ev(i + di, j + dj);
        }
      if (!ok) continue;
      fine *= 0.25 * h0 * h1;
      w = h0 * h1 * (ev(i, j) + ev(i + 2, j) + ev(i, j + 2) + ev(i + 2, j + 2));
      diff += fine - w;
    }
  p.coarse = p.bulk - diff;
  p.coarse_valid = n0 >= 5 && n1 >= 5;

  // Row ends extend along axis 0, column ends along axis 1.
  std::vector<LineEnds> rows(static_cast<std::size_t>(n1)), cols(static_cast<std::size_t>(n0));
  std::vector<double> buf;
  for (int j = 0; j < n1; ++j)
    rows[static_cast<std::size_t>(j)] =
        line_ends(x0.data(), f.values().data() + static_cast<std::ptrdiff_t>(j) * n0,
                  static_cast<std::size_t>(n0));
  for (int i = 0; i < n0; ++i) {
    buf.resize(static_cast<std::size_t>(n1));
    for (int j = 0; j < n1; ++j) buf[static_cast<std::size_t>(j)] = f.at(i, j);
    cols[static_cast<std::size_t>(i)] = line_ends(x1.data(), buf.data(), buf.size());
  }
  p.needed_rate = kInf;
  auto rate_ok = [&](double r) {
    if (r <= 0.0) p.divergent = true;
    p.needed_rate = std::min(p.needed_rate, r);
    return r > 0.0;
  };
  // Edge strips: trapezoid along the edge of e/rate.
  for (int side = 0; side < 2; ++side) {
    const int i = side == 0 ? 0 : n0 - 1;
    for (int j = 0; j + 1 < n1; ++j) {
      if (!fin(i, j) || !fin(i, j + 1)) continue;
      const auto& a = rows[static_cast<std::size_t>(j)];
      const auto& b = rows[static_cast<std::size_t>(j + 1)];
      if (a.degenerate || b.degenerate) continue;
      const double ra = side == 0 ? a.left_rate : a.right_rate;
      const double rb = side == 0 ? b.left_rate : b.right_rate;
      if (rate_ok(ra) && rate_ok(rb)) {
        p.tail += 0.5 * h1 * (ev(i, j) / ra + ev(i, j + 1) / rb);
        p.put(f.index(i, j), 0.5 * h1 * ev(i, j) / ra);
        p.put(f.index(i, j + 1), 0.5 * h1 * ev(i, j + 1) / rb);
      }
    }
    const int j = side == 0 ? 0 : n1 - 1;
    for (int ii = 0; ii + 1 < n0; ++ii) {
      if (!fin(ii, j) || !fin(ii + 1, j)) continue;
      const auto& a = cols[static_cast<std::size_t>(ii)];
      const auto& b = cols[static_cast<std::size_t>(ii + 1)];
      if (a.degenerate || b.degenerate) continue;
      const double ra = side == 0 ? a.left_rate : a.right_rate;
      const double rb = side == 0 ? b.left_rate : b.right_rate;
      if (rate_ok(ra) && rate_ok(rb)) {
        p.tail += 0.5 * h0 * (ev(ii, j) / ra + ev(ii + 1, j) / rb);
        p.put(f.index(ii, j), 0.5 * h0 * ev(ii, j) / ra);
        p.put(f.index(ii + 1, j), 0.5 * h0 * ev(ii + 1, j) / rb);
      }
    }
  }
  // Corner quadrants.
  for (int ci = 0; ci < 2; ++ci)
    for (int cj = 0; cj < 2; ++cj) {
      const int i = ci == 0 ? 0 : n0 - 1;
      const int j = cj == 0 ? 0 : n1 - 1;
      if (!fin(i, j)) continue;
      const auto& r = rows[static_cast<std::size_t>(j)];
      const auto& c = cols[static_cast<std::size_t>(i)];
      if (r.degenerate || c.degenerate) continue;
      const double r0 = ci == 0 ? r.left_rate : r.right_rate;
      const double r1 = cj == 0 ? c.left_rate : c.right_rate;
      if (rate_ok(r0) && rate_ok(r1)) {
        p.tail += ev(i, j) / (r0 * r1);
        p.put(f.index(i, j), ev(i, j) / (r0 * r1));
      }
    }
  return p;
}

}  // namespace

Estimate log_integrate_exp_neg(const GridFunction& f) {
  const double shift = finite_min(f);
  const Parts p = f.dim() == 1 ? parts_1d(f, shift, nullptr) : parts_2d(f, shift, nullptr);
  if (p.divergent) return {kInf, 0.0};
  const double total = p.bulk + p.tail;
  if (total <= 0.0) return {-kInf, 0.0};
  if (p.tail > 1e-6 * p.bulk) too_small(f, p);
  const double rel = p.coarse_valid ? std::abs(p.bulk - p.coarse) / 3.0 / total : 0.0;
  return {std::log(total) - shift, rel};
}

NodeWeights exp_neg_node_weights(const GridFunction& f) {
  NodeWeights out;
  out.shift = finite_min(f);
  out.weights = Array::Zero(f.size());
  const Parts p = f.dim() == 1 ? parts_1d(f, out.shift, &out.weights)
                               : parts_2d(f, out.shift, &out.weights);
  if (p.divergent) throw InvalidDensity("e^{-f} is not integrable");
  if (p.bulk + p.tail <= 0.0) throw InvalidDensity("e^{-f} integrates to 0");
  if (p.tail > 1e-6 * p.bulk) too_small(f, p);
  return out;
}

Estimate integrate_exp_neg(const GridFunction& f) {
  const Estimate l = log_integrate_exp_neg(f);
  if (l.value == kInf) return {kInf, 0.0};
  const double v = std::exp(l.value);
  return {v, v * l.est_error};
}

}  // namespace santalo
