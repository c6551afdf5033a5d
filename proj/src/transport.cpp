#include "santalo/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "santalo/errors.hpp"
#include "santalo/legendre.hpp"

namespace santalo {

namespace {

constexpr Eigen::Index kMaxAtoms = 512;

void check_marginal(const Vector& w, const char* name) {
  if (w.size() == 0 || w.size() > kMaxAtoms)
    throw SolverError(std::string(name) + " must have 1 to 512 entries");
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (!(w(i) >= 0.0)) throw InvalidMeasure(std::string(name) + " has a negative entry");
  if (std::abs(w.sum() - 1.0) > 1e-10)
    throw InvalidMeasure(std::string(name) + " must sum to 1");
}

// Spanning-tree basis of the transportation problem.
class TransportSimplex {
public:
  TransportSimplex(const Vector& supply, const Vector& demand, const Matrix& cost)
      : m_(static_cast<int>(supply.size())), n_(static_cast<int>(demand.size())), c_(cost) {
    basic_.assign(static_cast<std::size_t>(m_ * n_), -1);
    northwest_corner(supply, demand);
    tol_ = 1e-12 * (1.0 + cost.cwiseAbs().maxCoeff());
  }

  int run() {
    int iterations = 0, degenerate_streak = 0;
    const int limit = 50 * (m_ + n_) * std::max(m_, n_) + 1000;
    while (true) {
      potentials();
      int ei = -1, ej = -1;
      double best = -tol_;
      const bool bland = degenerate_streak > 2 * (m_ + n_);
      for (int i = 0; i < m_ && !(bland && ei >= 0); ++i)
        for (int j = 0; j < n_; ++j) {
          if (is_basic(i, j)) continue;
          const double r = c_(i, j) - u_[static_cast<std::size_t>(i)] - v_[static_cast<std::size_t>(j)];
          if (r < best) {
            best = r;
            ei = i;
            ej = j;
            if (bland) break;
          }
        }
      if (ei < 0) return iterations;
      if (++iterations > limit) throw SolverError("network simplex iteration limit reached");
      const double theta = pivot(ei, ej);
      degenerate_streak = theta <= 0.0 ? degenerate_streak + 1 : 0;
    }
  }

  Matrix plan() const {
    Matrix p = Matrix::Zero(m_, n_);
    for (std::size_t k = 0; k < cells_.size(); ++k)
      p(cells_[k].first, cells_[k].second) = std::max(0.0, flow_[k]);
    return p;
  }

private:
  bool is_basic(int i, int j) const { return basic_[static_cast<std::size_t>(i * n_ + j)] >= 0; }

  void add_cell(int i, int j, double q) {
    basic_[static_cast<std::size_t>(i * n_ + j)] = static_cast<int>(cells_.size());
    cells_.emplace_back(i, j);
    flow_.push_back(q);
  }

  void northwest_corner(const Vector& supply, const Vector& demand) {
    std::vector<double> s(supply.data(), supply.data() + m_);
    std::vector<double> d(demand.data(), demand.data() + n_);
    int i = 0, j = 0;
    while (static_cast<int>(cells_.size()) < m_ + n_ - 1) {
      const auto si = static_cast<std::size_t>(i), dj = static_cast<std::size_t>(j);
      const double q = std::max(0.0, std::min(s[si], d[dj]));
      add_cell(i, j, q);
      s[si] -= q;
      d[dj] -= q;
      if (i == m_ - 1) ++j;
      else if (j == n_ - 1) ++i;
      else if (s[si] <= d[dj]) ++i;
      else ++j;
    }
    if (cells_.empty()) add_cell(0, 0, 1.0);  // 1 x 1 problem
  }

  // Node ids: rows 0..m-1, columns m..m+n-1.
  void build_adjacency() {
    adj_.assign(static_cast<std::size_t>(m_ + n_), {});
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      adj_[static_cast<std::size_t>(cells_[k].first)].push_back(static_cast<int>(k));
      adj_[static_cast<std::size_t>(m_ + cells_[k].second)].push_back(static_cast<int>(k));
    }
  }

  void potentials() {
    build_adjacency();
    u_.assign(static_cast<std::size_t>(m_), 0.0);
    v_.assign(static_cast<std::size_t>(n_), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int k : adj_[static_cast<std::size_t>(node)]) {
        const auto [i, j] = cells_[static_cast<std::size_t>(k)];
        const int other = node < m_ ? m_ + j : i;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        if (node < m_)
          v_[static_cast<std::size_t>(j)] = c_(i, j) - u_[static_cast<std::size_t>(i)];
        else
          u_[static_cast<std::size_t>(i)] = c_(i, j) - v_[static_cast<std::size_t>(j)];
        stack.push_back(other);
      }
    }
  }

  // Enters cell (ei, ej); returns the step length.
  double pivot(int ei, int ej) {
    // Tree path from row ei to column ej.
    std::vector<int> parent_edge(static_cast<std::size_t>(m_ + n_), -2);
    std::vector<int> queue{ei};
    parent_edge[static_cast<std::size_t>(ei)] = -1;
    const int target = m_ + ej;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int node = queue[q];
      if (node == target) break;
      for (int k : adj_[static_cast<std::size_t>(node)]) {
        const auto [i, j] = cells_[static_cast<std::size_t>(k)];
        const int other = node < m_ ? m_ + j : i;
        if (parent_edge[static_cast<std::size_t>(other)] != -2) continue;
        parent_edge[static_cast<std::size_t>(other)] = k;
        queue.push_back(other);
      }
    }
    std::vector<int> path;  // from the column end back to the row
    for (int node = target; node != ei;) {
      const int k = parent_edge[static_cast<std::size_t>(node)];
      path.push_back(k);
      const auto [i, j] = cells_[static_cast<std::size_t>(k)];
      node = node < m_ ? m_ + j : i;
    }
    // Cells at even positions from the column end lose mass.
    double theta = kInf;
    int leave = -1;
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const int k = path[t];
      if (flow_[static_cast<std::size_t>(k)] < theta ||
          (flow_[static_cast<std::size_t>(k)] == theta && k < leave)) {
        theta = flow_[static_cast<std::size_t>(k)];
        leave = k;
      }
    }
    for (std::size_t t = 0; t < path.size(); ++t) {
      const auto k = static_cast<std::size_t>(path[t]);
      flow_[k] += (t % 2 == 0) ? -theta : theta;
    }
    const auto lk = static_cast<std::size_t>(leave);
    basic_[static_cast<std::size_t>(cells_[lk].first * n_ + cells_[lk].second)] = -1;
    cells_[lk] = {ei, ej};
    flow_[lk] = theta;
    basic_[static_cast<std::size_t>(ei * n_ + ej)] = leave;
    return theta;
  }

  int m_, n_;
  const Matrix& c_;
  double tol_;
  std::vector<std::pair<int, int>> cells_;
  std::vector<double> flow_;
  std::vector<int> basic_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> u_, v_;
};

void same_dim(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() != b.dim()) throw DimensionError("measures live in different dimensions");
}

// Deterministic argument order so that symmetric functionals are computed
// by the same floating-point operations either way round.
bool should_swap(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.weight(i) != b.weight(i)) return a.weight(i) > b.weight(i);
    for (int d = 0; d < a.dim(); ++d)
      if (a.atoms()(i, d) != b.atoms()(i, d)) return a.atoms()(i, d) > b.atoms()(i, d);
  }
  return false;
}

template <class Cost>
TransportResult lp_with(const DiscreteMeasure& a, const DiscreteMeasure& b, Cost cost,
                        double sign) {
  same_dim(a, b);
  if (should_swap(a, b)) {
    TransportResult r = lp_with(b, a, cost, sign);
    r.coupling.plan.transposeInPlace();
    return r;
  }
  Matrix c(a.size(), b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) c(i, j) = sign * cost(a.atom(i), b.atom(j));
  TransportResult r = solve_transport(a.weights(), b.weights(), c);
  r.value *= sign;
  return r;
}

double dot_cost(const Vector& x, const Vector& y) { return x.dot(y); }
double sq_cost(const Vector& x, const Vector& y) { return (x - y).squaredNorm(); }

template <class Cost>
TransportResult monotone_with(const DiscreteMeasure& a, const DiscreteMeasure& b, Cost cost) {
  if (should_swap(a, b)) {
    TransportResult r = monotone_with(b, a, cost);
    r.coupling.plan.transposeInPlace();
    return r;
  }
  TransportResult r = monotone_coupling(a, b);
  double v = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j)
      if (r.coupling.plan(i, j) > 0.0) v += r.coupling.plan(i, j) * cost(a.atom(i), b.atom(j));
  r.value = v;
  return r;
}

}  // namespace

TransportResult solve_transport(const Vector& supply, const Vector& demand,
                                const Matrix& cost) {
  check_marginal(supply, "supply");
  check_marginal(demand, "demand");
  if (cost.rows() != supply.size() || cost.cols() != demand.size())
    throw DimensionError("cost matrix shape does not match the marginals");
  if (!cost.allFinite()) throw InvalidParameter("costs must be finite");
  TransportSimplex simplex(supply, demand, cost);
  TransportResult r;
  r.iterations = simplex.run();
  r.coupling.plan = simplex.plan();
  r.value = (r.coupling.plan.array() * cost.array()).sum();
  return r;
}

TransportResult monotone_coupling(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  same_dim(a, b);
  if (a.dim() != 1) throw DimensionError("the monotone coupling is one-dimensional");
  auto order = [](const DiscreteMeasure& mu) {
    std::vector<Eigen::Index> o(static_cast<std::size_t>(mu.size()));
    std::iota(o.begin(), o.end(), 0);
    std::sort(o.begin(), o.end(), [&](Eigen::Index p, Eigen::Index q) {
      return mu.atoms()(p, 0) < mu.atoms()(q, 0);
    });
    return o;
  };
  const auto oa = order(a), ob = order(b);
  TransportResult r;
  r.coupling.plan = Matrix::Zero(a.size(), b.size());
  std::size_t p = 0, q = 0;
  double ra = a.weight(oa[0]), rb = b.weight(ob[0]);
  while (p < oa.size() && q < ob.size()) {
    const double mass = std::min(ra, rb);
    r.coupling.plan(oa[p], ob[q]) += mass;
    ra -= mass;
    rb -= mass;
    if (ra <= rb) {
      if (++p < oa.size()) ra = a.weight(oa[p]);
    } else {
      if (++q < ob.size()) rb = b.weight(ob[q]);
    }
  }
  return r;
}

TransportResult max_correlation_cost(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  same_dim(a, b);
  if (a.dim() == 1) return monotone_with(a, b, dot_cost);
  return lp_with(a, b, dot_cost, -1.0);
}

TransportResult max_correlation_cost_lp(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return lp_with(a, b, dot_cost, -1.0);
}

TransportResult w2_squared(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  same_dim(a, b);
  if (a.dim() == 1) return monotone_with(a, b, sq_cost);
  return lp_with(a, b, sq_cost, 1.0);
}

TransportResult w2_squared_lp(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return lp_with(a, b, sq_cost, 1.0);
}

CheckReport tw_identity_check(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const double t = max_correlation_cost_lp(a, b).value;
  const double w = w2_squared_lp(a, b).value;
  const double lhs = t + 0.5 * w;
  const double rhs = 0.5 * a.second_moment() + 0.5 * b.second_moment();
  CheckReport r = CheckReport::identity(
      "tw_identity", lhs, rhs, 1e-9,
      {"maximal correlation and quadratic Wasserstein cost: T = m2/2 + m2/2 - W2^2/2"});
  r.add("T", t).add("W2_squared", w);
  return r;
}

std::string to_string(KStatus s) {
  switch (s) {
    case KStatus::ok: return "ok";
    case KStatus::not_centered: return "not_centered";
    case KStatus::hyperplane_supported: return "hyperplane_supported";
  }
  return "ok";
}

KStatus validate_for_K(const DiscreteMeasure& nu) {
  if (nu.barycenter().norm() >= 1e-10) return KStatus::not_centered;
  if (nu.affine_dim(1e-10) < nu.dim()) return KStatus::hyperplane_supported;
  return KStatus::ok;
}

double kantorovich_gap(const GridFunction& f, const DiscreteMeasure& a,
                       const DiscreteMeasure& b) {
  same_dim(a, b);
  if (f.dim() != a.dim()) throw DimensionError("function and measures differ in dimension");
  double lhs = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double v = f.interpolate(a.atom(i));
    if (!std::isfinite(v)) throw DomainError("an atom of the first measure is outside dom f");
    lhs += a.weight(i) * v;
  }
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    const double v = conjugate_at(f, b.atom(j));
    if (!std::isfinite(v)) throw DomainError("an atom of the second measure is outside dom f*");
    lhs += b.weight(j) * v;
  }
  return lhs - max_correlation_cost(a, b).value;
}

GaussianMeasure GaussianMeasure::standard(int n) {
  return {Vector::Zero(n), Vector::Ones(n)};
}

double relative_entropy_gaussian(const GaussianMeasure& g) {
  if (g.mean.size() != g.sigma.size()) throw DimensionError("mean and sigma sizes differ");
  double h = 0.0;
  for (Eigen::Index i = 0; i < g.sigma.size(); ++i) {
    const double s = g.sigma(i);
    if (!(s > 0.0)) throw InvalidParameter("standard deviations must be positive");
    h += -std::log(s) + 0.5 * (s * s - 1.0) + 0.5 * g.mean(i) * g.mean(i);
  }
  return h;
}

double w2_squared(const GaussianMeasure& a, const GaussianMeasure& b) {
  if (a.dim() != b.dim()) throw DimensionError("Gaussians in different dimensions");
  return (a.mean - b.mean).squaredNorm() + (a.sigma - b.sigma).squaredNorm();
}

GValue g_functional(const GaussianMeasure& a, const GaussianMeasure& b) {
  return {relative_entropy_gaussian(a) + relative_entropy_gaussian(b) - 0.5 * w2_squared(a, b),
          false};
}

GValue g_functional(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  same_dim(a, b);
  return {kInf, true};
}

}  // namespace santalo
