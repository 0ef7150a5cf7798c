#pragma once

// Transportation simplex on a dense balanced rows x cols problem.
//
// The basis is a spanning tree of the bipartite row/column graph with
// rows + cols - 1 cells. The entering cell is the most negative reduced cost
// (first in row-major order on ties); after a run of rows + cols degenerate
// pivots the entering rule falls back to Bland's smallest-index rule until
// the objective moves again, which rules out cycling. The leaving cell is
// always the smallest index among ties, so the returned vertex is a
// deterministic function of the input. Templated on the scalar so the same
// pivoting runs in double and in exact rationals.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace wbp::detail {

template <class Scalar>
struct SimplexOutcome {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Scalar> flow;  // row-major
  std::vector<char> basic;   // row-major
  std::vector<Scalar> u;     // row potentials, u[root_row] = 0
  std::vector<Scalar> v;     // column potentials
  Scalar objective{};
  std::size_t pivots = 0;
  /// Some non-basic cell with zero reduced cost admits a pivot of positive
  /// step, so the optimal plan is not unique.
  bool alternative_optimum = false;

  const Scalar& flow_at(std::size_t i, std::size_t j) const { return flow[i * cols + j]; }
};

template <class Scalar>
class TransportSimplex {
 public:
  TransportSimplex(std::size_t rows, std::size_t cols, std::span<const Scalar> supply,
                   std::span<const Scalar> demand, std::span<const Scalar> cost,
                   std::size_t root_row, Scalar cost_tol, Scalar mass_tol)
      : rows_(rows),
        cols_(cols),
        cost_(cost),
        root_row_(root_row),
        cost_tol_(cost_tol),
        mass_tol_(mass_tol),
        flow_(rows * cols, Scalar(0)),
        basic_(rows * cols, 0),
        u_(rows, Scalar(0)),
        v_(cols, Scalar(0)) {
    if (rows == 0 || cols == 0 || supply.size() != rows || demand.size() != cols ||
        cost.size() != rows * cols || root_row >= rows) {
      throw std::invalid_argument("transportation problem has inconsistent dimensions");
    }
    northwest_corner(supply, demand);
  }

  SimplexOutcome<Scalar> run(std::size_t max_pivots = 10'000'000) {
    std::size_t pivots = 0;
    std::size_t degenerate_run = 0;
    for (;;) {
      compute_potentials();
      const bool bland = degenerate_run >= rows_ + cols_;
      std::optional<std::size_t> entering;
      Scalar best{};
      for (std::size_t cell = 0; cell < rows_ * cols_; ++cell) {
        if (basic_[cell]) continue;
        Scalar reduced = reduced_cost(cell);
        if (reduced < -cost_tol_ && (!entering || reduced < best)) {
          entering = cell;
          best = reduced;
          if (bland) break;
        }
      }
      if (!entering) break;
      if (++pivots > max_pivots) throw std::runtime_error("transportation simplex pivot limit exceeded");
      if (pivot(*entering) > mass_tol_) {
        degenerate_run = 0;
      } else {
        ++degenerate_run;
      }
    }

    SimplexOutcome<Scalar> out;
    out.rows = rows_;
    out.cols = cols_;
    out.pivots = pivots;
    out.alternative_optimum = detect_alternative_optimum();
    out.objective = Scalar(0);
    for (std::size_t cell = 0; cell < rows_ * cols_; ++cell) {
      if (flow_[cell] < Scalar(0)) flow_[cell] = Scalar(0);
      out.objective += flow_[cell] * cost_[cell];
    }
    out.flow = std::move(flow_);
    out.basic = std::move(basic_);
    out.u = std::move(u_);
    out.v = std::move(v_);
    return out;
  }

 private:
  std::size_t row_node(std::size_t i) const { return i; }
  std::size_t col_node(std::size_t j) const { return rows_ + j; }

  Scalar reduced_cost(std::size_t cell) const {
    const std::size_t i = cell / cols_;
    const std::size_t j = cell % cols_;
    return Scalar(cost_[cell] - u_[i] - v_[j]);
  }

  void northwest_corner(std::span<const Scalar> supply, std::span<const Scalar> demand) {
    basis_.clear();
    std::vector<Scalar> s(supply.begin(), supply.end());
    std::vector<Scalar> d(demand.begin(), demand.end());
    std::size_t i = 0;
    std::size_t j = 0;
    for (;;) {
      Scalar f = s[i] < d[j] ? s[i] : d[j];
      if (f < Scalar(0)) f = Scalar(0);
      const std::size_t cell = i * cols_ + j;
      flow_[cell] = f;
      basic_[cell] = 1;
      basis_.push_back(cell);
      s[i] -= f;
      d[j] -= f;
      if (i + 1 == rows_ && j + 1 == cols_) break;
      if (i + 1 == rows_) {
        ++j;
      } else if (j + 1 == cols_) {
        ++i;
      } else if (s[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void build_adjacency() {
    adjacency_.assign(rows_ + cols_, {});
    std::sort(basis_.begin(), basis_.end());
    for (std::size_t cell : basis_) {
      const std::size_t i = cell / cols_;
      const std::size_t j = cell % cols_;
      adjacency_[row_node(i)].push_back(cell);
      adjacency_[col_node(j)].push_back(cell);
    }
  }

  void compute_potentials() {
    build_adjacency();
    std::vector<char> seen(rows_ + cols_, 0);
    std::vector<std::size_t> queue{row_node(root_row_)};
    seen[row_node(root_row_)] = 1;
    u_[root_row_] = Scalar(0);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      for (std::size_t cell : adjacency_[node]) {
        const std::size_t i = cell / cols_;
        const std::size_t j = cell % cols_;
        if (node < rows_) {
          if (seen[col_node(j)]) continue;
          v_[j] = cost_[cell] - u_[i];
          seen[col_node(j)] = 1;
          queue.push_back(col_node(j));
        } else {
          if (seen[row_node(i)]) continue;
          u_[i] = cost_[cell] - v_[j];
          seen[row_node(i)] = 1;
          queue.push_back(row_node(i));
        }
      }
    }
  }

  // Tree path from row i to column j, as the cells along it (first cell
  // touches row i, last touches column j). The adjacency must be current.
  std::vector<std::size_t> tree_path(std::size_t i, std::size_t j) const {
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> via(rows_ + cols_, none);
    std::vector<char> seen(rows_ + cols_, 0);
    std::vector<std::size_t> queue{row_node(i)};
    seen[row_node(i)] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[col_node(j)]; ++head) {
      const std::size_t node = queue[head];
      for (std::size_t cell : adjacency_[node]) {
        const std::size_t other =
            node < rows_ ? col_node(cell % cols_) : row_node(cell / cols_);
        if (seen[other]) continue;
        seen[other] = 1;
        via[other] = cell;
        queue.push_back(other);
      }
    }
    std::vector<std::size_t> path;
    std::size_t node = col_node(j);
    while (node != row_node(i)) {
      const std::size_t cell = via[node];
      path.push_back(cell);
      node = node < rows_ ? col_node(cell % cols_) : row_node(cell / cols_);
    }
    std::vector<std::size_t> forward(path.rbegin(), path.rend());
    return forward;
  }

  // Cells whose flow decreases when `entering` enters the basis.
  std::vector<std::size_t> decreasing_cells(std::size_t entering) const {
    const auto path = tree_path(entering / cols_, entering % cols_);
    std::vector<std::size_t> minus;
    for (std::size_t k = 0; k < path.size(); k += 2) minus.push_back(path[k]);
    return minus;
  }

  // Returns the step length theta.
  Scalar pivot(std::size_t entering) {
    const auto path = tree_path(entering / cols_, entering % cols_);
    Scalar theta{};
    std::optional<std::size_t> leaving;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const std::size_t cell = path[k];
      if (!leaving || flow_[cell] < theta || (flow_[cell] == theta && cell < *leaving)) {
        theta = flow_[cell];
        leaving = cell;
      }
    }
    if (theta < Scalar(0)) theta = Scalar(0);
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k % 2 == 0) {
        flow_[path[k]] -= theta;
      } else {
        flow_[path[k]] += theta;
      }
    }
    flow_[entering] = theta;
    flow_[*leaving] = Scalar(0);
    basic_[entering] = 1;
    basic_[*leaving] = 0;
    *std::find(basis_.begin(), basis_.end(), *leaving) = entering;
    return theta;
  }

  bool detect_alternative_optimum() {
    build_adjacency();
    for (std::size_t cell = 0; cell < rows_ * cols_; ++cell) {
      if (basic_[cell]) continue;
      Scalar reduced = reduced_cost(cell);
      if (reduced > cost_tol_ || reduced < -cost_tol_) continue;
      Scalar theta{};
      bool first = true;
      for (std::size_t m : decreasing_cells(cell)) {
        if (first || flow_[m] < theta) theta = flow_[m];
        first = false;
      }
      if (theta > mass_tol_) return true;
    }
    return false;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::span<const Scalar> cost_;
  std::size_t root_row_;
  Scalar cost_tol_;
  Scalar mass_tol_;
  std::vector<Scalar> flow_;
  std::vector<char> basic_;
  std::vector<std::size_t> basis_;
  std::vector<Scalar> u_;
  std::vector<Scalar> v_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

}  // namespace wbp::detail
