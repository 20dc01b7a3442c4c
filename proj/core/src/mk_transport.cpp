#include "congest/mk_transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "congest/error.hpp"

namespace congest {

namespace {

class TransportSimplex {
 public:
  explicit TransportSimplex(const TransportProblem& p)
      : m_(static_cast<int>(p.supply.size())),
        n_(static_cast<int>(p.demand.size())),
        cost_(p.cost),
        row_cells_(m_),
        col_cells_(n_),
        basic_(static_cast<std::size_t>(m_) * n_, 0),
        u_(m_),
        v_(n_) {
    double scale = 1.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    tolerance_ = 1e-12 * scale;
    northwest_corner(p.supply, p.demand);
  }

  TransportSolution run() {
    const long max_pivots = 50L * m_ * n_ + 1000;
    int degenerate_streak = 0;
    int pivots = 0;
    while (true) {
      compute_potentials();
      const bool bland = degenerate_streak >= kDegenerateLimit;
      const auto entering = bland ? first_negative() : most_negative();
      if (entering.row < 0) break;
      if (++pivots > max_pivots) {
        throw Error(ErrorKind::kInternal, "transportation simplex did not terminate");
      }
      const double step = pivot(entering.row, entering.col);
      degenerate_streak = step > 0.0 ? 0 : degenerate_streak + 1;
    }
    TransportSolution out;
    out.basis = cells_;
    out.u = u_;
    out.v = v_;
    out.pivots = pivots;
    for (const BasicCell& c : cells_) out.value += c.flow * at(c.row, c.col);
    return out;
  }

 private:
  static constexpr int kDegenerateLimit = 50;

  struct Candidate {
    int row = -1;
    int col = -1;
  };

  double at(int i, int j) const {
    return cost_[static_cast<std::size_t>(i) * n_ + j];
  }
  char& is_basic(int i, int j) {
    return basic_[static_cast<std::size_t>(i) * n_ + j];
  }

  void add_cell(int i, int j, double x) {
    const int id = static_cast<int>(cells_.size());
    cells_.push_back({i, j, x});
    row_cells_[i].push_back(id);
    col_cells_[j].push_back(id);
    is_basic(i, j) = 1;
  }

  void northwest_corner(std::vector<double> s, std::vector<double> d) {
    int i = 0;
    int j = 0;
    while (true) {
      const double x = std::max(0.0, std::min(s[i], d[j]));
      add_cell(i, j, x);
      s[i] -= x;
      d[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i < m_ - 1 && (j == n_ - 1 || s[i] <= d[j])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Tree nodes: rows are 0..m-1, columns m..m+n-1.
  void compute_potentials() {
    std::vector<char> done(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<int> queue{0};
    u_[0] = 0.0;
    done[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int node = queue[head];
      if (node < m_) {
        for (int id : row_cells_[node]) {
          const BasicCell& c = cells_[id];
          if (done[m_ + c.col]) continue;
          v_[c.col] = at(c.row, c.col) - u_[c.row];
          done[m_ + c.col] = 1;
          queue.push_back(m_ + c.col);
        }
      } else {
        const int col = node - m_;
        for (int id : col_cells_[col]) {
          const BasicCell& c = cells_[id];
          if (done[c.row]) continue;
          u_[c.row] = at(c.row, c.col) - v_[c.col];
          done[c.row] = 1;
          queue.push_back(c.row);
        }
      }
    }
  }

  double reduced(int i, int j) const { return at(i, j) - u_[i] - v_[j]; }

  Candidate most_negative() {
    Candidate best;
    double best_r = -tolerance_;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (is_basic(i, j)) continue;
        const double r = reduced(i, j);
        if (r < best_r) {
          best_r = r;
          best = {i, j};
        }
      }
    }
    return best;
  }

  Candidate first_negative() {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (!is_basic(i, j) && reduced(i, j) < -tolerance_) return {i, j};
      }
    }
    return {};
  }

  // Unique tree path from column node `col` back to row node `row`, as basis
  // cell ids starting at the cell incident to `col`.
  std::vector<int> tree_path(int row, int col) {
    const int total = m_ + n_;
    std::vector<int> via(static_cast<std::size_t>(total), -1);
    std::vector<char> seen(static_cast<std::size_t>(total), 0);
    std::vector<int> queue{row};
    seen[row] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[m_ + col]; ++head) {
      const int node = queue[head];
      const auto& incident = node < m_ ? row_cells_[node] : col_cells_[node - m_];
      for (int id : incident) {
        const BasicCell& c = cells_[id];
        const int other = node < m_ ? m_ + c.col : c.row;
        if (seen[other]) continue;
        seen[other] = 1;
        via[other] = id;
        queue.push_back(other);
      }
    }
    std::vector<int> path;
    for (int node = m_ + col; node != row;) {
      const int id = via[node];
      path.push_back(id);
      const BasicCell& c = cells_[id];
      node = node < m_ ? m_ + c.col : c.row;
    }
    return path;
  }

  static void erase_id(std::vector<int>& ids, int id) {
    ids.erase(std::find(ids.begin(), ids.end(), id));
  }

  double pivot(int row, int col) {
    const std::vector<int> path = tree_path(row, col);
    // Cells at even positions lose flow, odd positions gain it.
    int leaving = path[0];
    for (std::size_t k = 2; k < path.size(); k += 2) {
      const BasicCell& c = cells_[path[k]];
      const BasicCell& best = cells_[leaving];
      if (c.flow < best.flow ||
          (c.flow == best.flow &&
           (c.row < best.row || (c.row == best.row && c.col < best.col)))) {
        leaving = path[k];
      }
    }
    const double step = cells_[leaving].flow;
    for (std::size_t k = 0; k < path.size(); ++k) {
      BasicCell& c = cells_[path[k]];
      c.flow = k % 2 == 0 ? c.flow - step : c.flow + step;
    }
    replace_cell(leaving, row, col, step);
    return step;
  }

  void replace_cell(int id, int row, int col, double flow) {
    BasicCell& old = cells_[id];
    is_basic(old.row, old.col) = 0;
    erase_id(row_cells_[old.row], id);
    erase_id(col_cells_[old.col], id);
    old = {row, col, flow};
    row_cells_[row].push_back(id);
    col_cells_[col].push_back(id);
    is_basic(row, col) = 1;
  }

  int m_;
  int n_;
  const std::vector<double>& cost_;
  std::vector<BasicCell> cells_;
  std::vector<std::vector<int>> row_cells_;
  std::vector<std::vector<int>> col_cells_;
  std::vector<char> basic_;
  std::vector<double> u_;
  std::vector<double> v_;
  double tolerance_ = 1e-12;
};

}  // namespace

TransportSolution solve_transport(const TransportProblem& problem) {
  const auto m = problem.supply.size();
  const auto n = problem.demand.size();
  if (m == 0 || n == 0) {
    throw Error(ErrorKind::kZeroMass, "transport problem with empty support");
  }
  if (problem.cost.size() != m * n) {
    throw Error(ErrorKind::kInvalidArgument, "cost matrix has the wrong size");
  }
  for (double c : problem.cost) {
    if (!std::isfinite(c)) {
      throw Error(ErrorKind::kInfiniteCost, "transport cost is not finite");
    }
  }
  return TransportSimplex(problem).run();
}

MKSolution solve_mk(const CostFn& cost, const DiscreteMeasure& mu0,
                    const DiscreteMeasure& mu1) {
  const DiscreteMeasure src = mu0.truncated(kSupportTruncation);
  const DiscreteMeasure dst = mu1.truncated(kSupportTruncation);
  require_balanced(src, dst);

  TransportProblem p;
  std::vector<NodeId> rows;
  std::vector<NodeId> cols;
  for (const auto& [x, m] : src.weights()) {
    rows.push_back(x);
    p.supply.push_back(m);
  }
  for (const auto& [y, m] : dst.weights()) {
    cols.push_back(y);
    p.demand.push_back(m);
  }
  p.cost.reserve(rows.size() * cols.size());
  for (NodeId x : rows) {
    for (NodeId y : cols) {
      const double c = cost(x, y);
      if (!std::isfinite(c)) {
        throw Error(ErrorKind::kInfiniteCost,
                    "infinite cost between " + std::to_string(x) + " and " +
                        std::to_string(y));
      }
      p.cost.push_back(c);
    }
  }

  const TransportSolution sol = solve_transport(p);
  MKSolution out;
  std::vector<PlanEntry> entries;
  for (const BasicCell& c : sol.basis) {
    if (c.flow > 0.0) entries.push_back({rows[c.row], cols[c.col], c.flow});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  out.plan = TransportPlan(std::move(entries));
  out.value = sol.value;
  for (std::size_t i = 0; i < rows.size(); ++i) out.u[rows[i]] = sol.u[i];
  for (std::size_t j = 0; j < cols.size(); ++j) out.v[cols[j]] = sol.v[j];
  return out;
}

}  // namespace congest
