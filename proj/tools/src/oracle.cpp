#include "congest/cli/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "congest/error.hpp"

namespace congest::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Route {
  std::vector<EdgeId> edges;
  int pair = 0;
};

struct Pair {
  int row = 0;  // index into sources
  int col = 0;  // index into targets
  double mass = 0.0;  // fixed-plan mode only
};

void enumerate_paths(const Network& net, NodeId source, NodeId target, int pair,
                     std::size_t cap, std::vector<Route>& out) {
  if (source == target) {
    out.push_back({{}, pair});
    return;
  }
  std::vector<char> on_path(net.num_nodes(), 0);
  std::vector<EdgeId> stack;
  std::function<void(NodeId)> walk = [&](NodeId n) {
    if (n == target) {
      out.push_back({stack, pair});
      if (out.size() > cap) {
        throw Error(ErrorKind::kTooLarge,
                    "more than " + std::to_string(cap) + " simple paths");
      }
      return;
    }
    on_path[n] = 1;
    for (const Incidence& inc : net.neighbors(n)) {
      if (on_path[inc.node]) continue;
      stack.push_back(inc.edge);
      walk(inc.node);
      stack.pop_back();
    }
    on_path[n] = 0;
  };
  walk(source);
}

// Objective over edge flows, written out directly from the model parameters.
class PathObjective {
 public:
  PathObjective(const Problem& problem, std::vector<Route> routes)
      : net_(problem.network), routes_(std::move(routes)) {
    const CongestionModel& m = problem.model;
    q_ = m.q();
    c0_ = m.c0();
    k_ = m.mode() == CongestionMode::kSocialCost ? m.a() : m.a() / m.q();
    cell_ = problem.discretization == Discretization::kCell;
  }

  double value(const std::vector<double>& x) const {
    const auto f = edge_flows(x);
    double total = 0.0;
    if (cell_) {
      const auto z = cell_densities(f);
      for (std::size_t n = 0; n < z.size(); ++n) total += net_.area(n) * h(z[n]);
    } else {
      for (std::size_t e = 0; e < f.size(); ++e) {
        const Edge& edge = net_.edge(e);
        total += edge.length * edge.width * h(f[e] / edge.width);
      }
    }
    return total;
  }

  // d value / d x_p for every route.
  std::vector<double> gradient(const std::vector<double>& x) const {
    const auto f = edge_flows(x);
    std::vector<double> per_edge(f.size());
    if (cell_) {
      const auto z = cell_densities(f);
      for (std::size_t e = 0; e < f.size(); ++e) {
        const Edge& edge = net_.edge(e);
        per_edge[e] = 0.5 * edge.length * (h_prime(z[edge.u]) + h_prime(z[edge.v]));
      }
    } else {
      for (std::size_t e = 0; e < f.size(); ++e) {
        const Edge& edge = net_.edge(e);
        per_edge[e] = edge.length * h_prime(f[e] / edge.width);
      }
    }
    std::vector<double> g(routes_.size(), 0.0);
    for (std::size_t p = 0; p < routes_.size(); ++p) {
      for (EdgeId e : routes_[p].edges) g[p] += per_edge[e];
    }
    return g;
  }

 private:
  double h(double z) const { return k_ * std::pow(z, q_) + c0_ * z; }
  double h_prime(double z) const {
    return k_ * q_ * std::pow(z, q_ - 1.0) + c0_;
  }

  std::vector<double> edge_flows(const std::vector<double>& x) const {
    std::vector<double> f(net_.num_edges(), 0.0);
    for (std::size_t p = 0; p < routes_.size(); ++p) {
      for (EdgeId e : routes_[p].edges) f[e] += x[p];
    }
    return f;
  }

  std::vector<double> cell_densities(const std::vector<double>& f) const {
    std::vector<double> z(net_.num_nodes(), 0.0);
    for (std::size_t e = 0; e < f.size(); ++e) {
      const Edge& edge = net_.edge(e);
      z[edge.u] += 0.5 * edge.length * f[e];
      z[edge.v] += 0.5 * edge.length * f[e];
    }
    for (std::size_t n = 0; n < z.size(); ++n) {
      z[n] = std::max(0.0, z[n]) / net_.area(n);
    }
    return z;
  }

  const Network& net_;
  std::vector<Route> routes_;
  double q_ = 2.0;
  double c0_ = 0.0;
  double k_ = 1.0;
  bool cell_ = true;
};

// tau with sum_k max(0, v_k - tau) = mass.
double threshold(std::vector<double> v, double mass) {
  std::sort(v.begin(), v.end(), std::greater<>());
  double running = 0.0;
  double tau = v.front() - mass;
  for (std::size_t k = 0; k < v.size(); ++k) {
    running += v[k];
    const double t = (running - mass) / static_cast<double>(k + 1);
    if (k + 1 == v.size() || v[k + 1] <= t) {
      tau = t;
      break;
    }
  }
  return tau;
}

// Euclidean projection onto {x >= 0, row sums = a, column sums = b}, where
// each route belongs to one (row, column) cell. Rows alone when `cols` is
// empty. Dual block ascent, warm-started from the previous duals.
class Projector {
 public:
  Projector(const std::vector<Route>& routes, const std::vector<Pair>& pairs,
            std::vector<double> rows, std::vector<double> cols)
      : routes_(routes), pairs_(pairs), a_(std::move(rows)), b_(std::move(cols)),
        alpha_(a_.size(), 0.0), beta_(b_.size(), 0.0) {}

  std::vector<double> operator()(const std::vector<double>& y) {
    std::vector<double> x(y.size());
    const double scale = std::accumulate(a_.begin(), a_.end(), 0.0);
    double best_err = kInf;
    int stalled = 0;
    for (int sweep = 0; sweep < 100000; ++sweep) {
      solve_side(y, /*rows=*/true);
      if (b_.empty()) break;
      solve_side(y, /*rows=*/false);
      // Columns are now exact; stop once rows are too.
      std::vector<double> sums(a_.size(), 0.0);
      for (std::size_t p = 0; p < y.size(); ++p) {
        sums[row(p)] += std::max(0.0, y[p] - alpha_[row(p)] - beta_[col(p)]);
      }
      double err = 0.0;
      for (std::size_t i = 0; i < a_.size(); ++i) err += std::abs(sums[i] - a_[i]);
      if (err <= 1e-15 * scale) break;
      // Rounding floor: no progress for a while.
      if (err < best_err) {
        best_err = err;
        stalled = 0;
      } else if (++stalled == 20) {
        break;
      }
    }
    for (std::size_t p = 0; p < y.size(); ++p) {
      const double shift = alpha_[row(p)] + (b_.empty() ? 0.0 : beta_[col(p)]);
      x[p] = std::max(0.0, y[p] - shift);
    }
    return x;
  }

 private:
  int row(std::size_t p) const {
    return b_.empty() ? routes_[p].pair : pairs_[routes_[p].pair].row;
  }
  int col(std::size_t p) const { return pairs_[routes_[p].pair].col; }

  void solve_side(const std::vector<double>& y, bool rows) {
    const auto& mass = rows ? a_ : b_;
    std::vector<std::vector<double>> groups(mass.size());
    for (std::size_t p = 0; p < y.size(); ++p) {
      if (rows) {
        groups[row(p)].push_back(y[p] - (b_.empty() ? 0.0 : beta_[col(p)]));
      } else {
        groups[col(p)].push_back(y[p] - alpha_[row(p)]);
      }
    }
    auto& dual = rows ? alpha_ : beta_;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      dual[g] = threshold(std::move(groups[g]), mass[g]);
    }
  }

  const std::vector<Route>& routes_;
  const std::vector<Pair>& pairs_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

// min sum gamma_ij c_ij over couplings of a and b, by successive shortest
// augmenting paths on the bipartite residual graph.
double min_cost_coupling(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<std::vector<double>>& c) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<double> supply = a;
  std::vector<double> demand = b;
  std::vector<std::vector<double>> flow(m, std::vector<double>(n, 0.0));
  // Nodes: rows 0..m-1, columns m..m+n-1.
  while (true) {
    std::vector<double> dist(m + n, kInf);
    std::vector<int> prev(m + n, -1);
    for (std::size_t i = 0; i < m; ++i) {
      if (supply[i] > 0.0) dist[i] = 0.0;
    }
    for (std::size_t round = 0; round < m + n; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (dist[i] < kInf && c[i][j] < kInf && dist[i] + c[i][j] < dist[m + j]) {
            dist[m + j] = dist[i] + c[i][j];
            prev[m + j] = static_cast<int>(i);
            changed = true;
          }
          if (flow[i][j] > 0.0 && dist[m + j] < kInf &&
              dist[m + j] - c[i][j] < dist[i]) {
            dist[i] = dist[m + j] - c[i][j];
            prev[i] = static_cast<int>(m + j);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    int sink = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (demand[j] > 0.0 && dist[m + j] < kInf &&
          (sink < 0 || dist[m + j] < dist[sink])) {
        sink = static_cast<int>(m + j);
      }
    }
    if (sink < 0) break;
    double amount = demand[sink - m];
    int node = sink;
    while (prev[node] >= 0) {
      const int p = prev[node];
      if (node < static_cast<int>(m)) amount = std::min(amount, flow[node][p - m]);
      node = p;
    }
    amount = std::min(amount, supply[node]);
    if (!(amount > 0.0)) break;
    supply[node] -= amount;
    demand[sink - m] -= amount;
    node = sink;
    while (prev[node] >= 0) {
      const int p = prev[node];
      if (node >= static_cast<int>(m)) {
        flow[p][node - m] += amount;
      } else {
        flow[node][p - m] -= amount;
      }
      node = p;
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (flow[i][j] > 0.0) total += flow[i][j] * c[i][j];
    }
  }
  return total;
}

double dot(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s;
}

}  // namespace

OracleResult brute_force_optimum(const Problem& problem,
                                 const OracleLimits& limits) {
  problem.validate();
  const Network& net = problem.network;
  if (net.num_nodes() > limits.max_nodes) {
    throw Error(ErrorKind::kTooLarge,
                "oracle handles at most " + std::to_string(limits.max_nodes) +
                    " nodes, got " + std::to_string(net.num_nodes()));
  }

  std::vector<NodeId> sources;
  std::vector<NodeId> targets;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<Pair> pairs;
  const auto index_of = [](std::vector<NodeId>& nodes, std::vector<double>& mass,
                           NodeId n) {
    const auto it = std::find(nodes.begin(), nodes.end(), n);
    if (it != nodes.end()) return static_cast<int>(it - nodes.begin());
    nodes.push_back(n);
    mass.push_back(0.0);
    return static_cast<int>(nodes.size() - 1);
  };
  if (problem.fixed_plan) {
    for (const PlanEntry& e : problem.fixed_plan->entries()) {
      const int i = index_of(sources, a, e.source);
      const int j = index_of(targets, b, e.target);
      a[i] += e.mass;
      b[j] += e.mass;
      pairs.push_back({i, j, e.mass});
    }
  } else {
    for (const auto& [n, mass] : problem.mu0.weights()) {
      if (mass > 0.0) a[index_of(sources, a, n)] += mass;
    }
    for (const auto& [n, mass] : problem.mu1.weights()) {
      if (mass > 0.0) b[index_of(targets, b, n)] += mass;
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
      for (std::size_t j = 0; j < targets.size(); ++j) {
        pairs.push_back({static_cast<int>(i), static_cast<int>(j), 0.0});
      }
    }
  }
  if (sources.size() > limits.max_atoms || targets.size() > limits.max_atoms) {
    throw Error(ErrorKind::kTooLarge,
                "oracle handles at most " + std::to_string(limits.max_atoms) +
                    " atoms per marginal");
  }

  std::vector<Route> routes;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    enumerate_paths(net, sources[pairs[k].row], targets[pairs[k].col],
                    static_cast<int>(k), limits.max_paths, routes);
  }

  std::vector<int> per_pair(pairs.size(), 0);
  for (const Route& r : routes) ++per_pair[r.pair];
  const double total = std::accumulate(a.begin(), a.end(), 0.0);
  std::vector<double> x(routes.size());
  for (std::size_t p = 0; p < routes.size(); ++p) {
    const Pair& pr = pairs[routes[p].pair];
    const double pair_mass = problem.fixed_plan ? pr.mass : a[pr.row] * b[pr.col] / total;
    x[p] = pair_mass / per_pair[routes[p].pair];
  }

  std::vector<double> pair_mass;
  for (const Pair& pr : pairs) pair_mass.push_back(pr.mass);
  Projector project = problem.fixed_plan
                          ? Projector(routes, pairs, pair_mass, {})
                          : Projector(routes, pairs, a, b);
  const PathObjective objective(problem, routes);

  // Lower bound from convexity: F(x) + min over feasible y of <grad, y - x>.
  const auto lower_bound = [&](const std::vector<double>& at, double value,
                               const std::vector<double>& grad) {
    std::vector<double> cheapest(pairs.size(), kInf);
    for (std::size_t p = 0; p < routes.size(); ++p) {
      cheapest[routes[p].pair] = std::min(cheapest[routes[p].pair], grad[p]);
    }
    double linear = 0.0;
    if (problem.fixed_plan) {
      for (std::size_t k = 0; k < pairs.size(); ++k) linear += pairs[k].mass * cheapest[k];
    } else {
      std::vector<std::vector<double>> c(sources.size(),
                                         std::vector<double>(targets.size(), kInf));
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        c[pairs[k].row][pairs[k].col] = cheapest[k];
      }
      linear = min_cost_coupling(a, b, c);
    }
    return value + linear - dot(grad, at);
  };

  OracleResult result;
  result.num_paths = routes.size();
  std::vector<double> prev = x;
  double fx = objective.value(x);
  double best_lb = -kInf;
  double step_l = 1.0;
  double t = 1.0;
  for (int it = 0; it < limits.max_iters; ++it) {
    result.iterations = it + 1;
    const auto grad_x = objective.gradient(x);
    best_lb = std::max(best_lb, lower_bound(x, fx, grad_x));
    result.residual = fx - best_lb;
    if (result.residual <= limits.tol * std::max(std::abs(fx), 1e-300)) break;

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    std::vector<double> y(x.size());
    for (std::size_t p = 0; p < x.size(); ++p) {
      y[p] = x[p] + (t - 1.0) / t_next * (x[p] - prev[p]);
    }
    y = project(y);
    const double fy = objective.value(y);
    const auto grad_y = objective.gradient(y);

    std::vector<double> candidate;
    double fc = 0.0;
    while (true) {
      std::vector<double> z(y.size());
      for (std::size_t p = 0; p < y.size(); ++p) z[p] = y[p] - grad_y[p] / step_l;
      candidate = project(z);
      fc = objective.value(candidate);
      double model = fy;
      double dist2 = 0.0;
      for (std::size_t p = 0; p < y.size(); ++p) {
        const double d = candidate[p] - y[p];
        model += grad_y[p] * d;
        dist2 += d * d;
      }
      model += 0.5 * step_l * dist2;
      if (fc <= model + 1e-15 * std::abs(model) || step_l > 1e30) break;
      step_l *= 2.0;
    }
    step_l *= 0.9;

    if (fc > fx && t > 1.0) {
      // Momentum overshot; restart from the current point.
      t = 1.0;
      prev = x;
      continue;
    }
    prev = std::move(x);
    x = std::move(candidate);
    fx = fc;
    t = t_next;
  }
  result.value = fx;
  return result;
}

}  // namespace congest::cli
