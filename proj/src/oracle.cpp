#include "wbp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wbp/error.hpp"

namespace wbp {

namespace {

// The (m+n) x (m+n) cost matrix with one boundary copy per point.
struct CopyMatrix {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> cost;
  std::optional<std::vector<Rational>> exact;

  std::size_t size() const { return m + n; }
};

std::optional<int> integer_exponent(double p) {
  if (p == std::floor(p) && p >= 1.0 && p <= 64.0) return static_cast<int>(p);
  return std::nullopt;
}

CopyMatrix build_copy_matrix(const MetricPair& pair, std::span<const Point> xs,
                             std::span<const Point> ys, double p) {
  CopyMatrix c;
  c.m = xs.size();
  c.n = ys.size();
  const std::size_t size = c.size();
  c.cost.assign(size * size, 0.0);
  const auto exponent = integer_exponent(p);
  std::vector<Rational> exact(size * size, Rational(0));
  bool exact_ok = exponent.has_value();

  auto set = [&](std::size_t i, std::size_t j, const Point& a, const Point& b) {
    c.cost[i * size + j] = std::pow(pair.distance(a, b), p);
    if (exact_ok) {
      auto value = pair.distance_pow_exact(a, b, *exponent);
      if (value) {
        exact[i * size + j] = std::move(*value);
      } else {
        exact_ok = false;
      }
    }
  };
  // Cells against a boundary copy. The projection is a rounded point, so its
  // distance is floored at the exact d(a, A)^p, which it equals whenever the
  // copy belongs to a itself.
  auto set_copy = [&](std::size_t i, std::size_t j, const Point& a, const Point& copy) {
    set(i, j, a, copy);
    const double gap = std::pow(pair.dist_to_boundary(a), p);
    double& cell = c.cost[i * size + j];
    if (cell < gap || pair.project_to_boundary(a) == copy) cell = gap;
    if (exact_ok) {
      auto floor = pair.boundary_distance_pow_exact(a, *exponent);
      if (!floor) {
        exact_ok = false;
      } else if (exact[i * size + j] < *floor || pair.project_to_boundary(a) == copy) {
        exact[i * size + j] = std::move(*floor);
      }
    }
  };

  for (std::size_t i = 0; i < c.m; ++i) {
    for (std::size_t j = 0; j < c.n; ++j) set(i, j, xs[i], ys[j]);
    for (std::size_t k = 0; k < c.m; ++k) set_copy(i, c.n + k, xs[i], pair.project_to_boundary(xs[k]));
  }
  for (std::size_t k = 0; k < c.n; ++k) {
    for (std::size_t j = 0; j < c.n; ++j) set_copy(c.m + k, j, ys[j], pair.project_to_boundary(ys[k]));
  }
  if (exact_ok) c.exact = std::move(exact);
  return c;
}

struct PermutationBest {
  double value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perm;
};

double permutation_cost(const CopyMatrix& c, std::span<const std::size_t> perm) {
  double total = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) total += c.cost[i * c.size() + perm[i]];
  return total;
}

// Visits every permutation whose first entry is `first`, in lexicographic order.
template <class Visit>
void for_each_permutation_with_prefix(std::size_t size, std::size_t first, Visit&& visit) {
  std::vector<std::size_t> perm;
  perm.push_back(first);
  for (std::size_t k = 0; k < size; ++k) {
    if (k != first) perm.push_back(k);
  }
  do {
    visit(std::span<const std::size_t>(perm));
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
}

OracleResult minimise_over_permutations(const CopyMatrix& c, Execution exec) {
  const std::size_t size = c.size();
  OracleResult result;
  if (size == 0) {
    result.value = 0.0;
    if (c.exact) result.exact_value = Rational(0);
    result.witness = "empty";
    return result;
  }

  std::vector<PermutationBest> per_prefix(size);
  for_each_index(exec, size, [&](std::size_t first) {
    PermutationBest& best = per_prefix[first];
    for_each_permutation_with_prefix(size, first, [&](std::span<const std::size_t> perm) {
      const double value = permutation_cost(c, perm);
      if (value < best.value) {
        best.value = value;
        best.perm.assign(perm.begin(), perm.end());
      }
    });
  });
  PermutationBest best;
  for (PermutationBest& candidate : per_prefix) {
    if (candidate.value < best.value) best = std::move(candidate);
  }

  if (c.exact) {
    // Rounding can reorder near-ties, so re-rank every permutation within a
    // small window of the floating minimum in exact arithmetic.
    const double window = best.value + 1e-9 * (1.0 + best.value);
    std::vector<std::pair<Rational, std::vector<std::size_t>>> exact_best(size);
    std::vector<char> has(size, 0);
    for_each_index(exec, size, [&](std::size_t first) {
      for_each_permutation_with_prefix(size, first, [&](std::span<const std::size_t> perm) {
        if (permutation_cost(c, perm) > window) return;
        Rational total = 0;
        for (std::size_t i = 0; i < size; ++i) total += (*c.exact)[i * size + perm[i]];
        if (!has[first] || total < exact_best[first].first) {
          exact_best[first] = {total, std::vector<std::size_t>(perm.begin(), perm.end())};
          has[first] = 1;
        }
      });
    });
    std::optional<std::size_t> winner;
    for (std::size_t f = 0; f < size; ++f) {
      if (has[f] && (!winner || exact_best[f].first < exact_best[*winner].first)) winner = f;
    }
    result.exact_value = exact_best[*winner].first;
    best.perm = exact_best[*winner].second;
    result.value = to_double(*result.exact_value);
  } else {
    result.value = best.value;
  }

  std::ostringstream witness;
  for (std::size_t i = 0; i < size; ++i) {
    result.assignment.emplace_back(i, best.perm[i]);
    const bool row_copy = i >= c.m;
    const bool col_copy = best.perm[i] >= c.n;
    if (!row_copy && !col_copy) {
      witness << "match x" << i << "-y" << best.perm[i] << "; ";
    } else if (!row_copy) {
      witness << "delete x" << i << "; ";
    } else if (!col_copy) {
      witness << "insert y" << best.perm[i] << "; ";
    }
  }
  result.witness = witness.str();
  if (result.witness.empty()) result.witness = "boundary only";
  return result;
}

// Union-find with rollback for spanning-tree enumeration.
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }

  void undo() {
    const std::size_t b = history_.back();
    history_.pop_back();
    size_[parent_[b]] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> history_;
};

class VertexEnumerator {
 public:
  VertexEnumerator(const CopyMatrix& c, std::vector<Rational> supply, std::vector<Rational> demand)
      : c_(c),
        size_(c.size()),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        uf_(2 * c.size()) {}

  OracleResult run() {
    OracleResult result;
    if (size_ == 0) {
      result.value = 0.0;
      result.exact_value = Rational(0);
      result.witness = "empty";
      return result;
    }
    search(0);
    if (c_.exact) {
      result.exact_value = best_exact_;
      result.value = to_double(best_exact_);
    } else {
      result.value = best_value_;
    }
    result.assignment = best_support_;
    std::ostringstream witness;
    witness << "vertex with " << best_support_.size() << " positive cells among " << trees_
            << " spanning trees";
    result.witness = witness.str();
    return result;
  }

 private:
  void search(std::size_t cell) {
    const std::size_t needed = 2 * size_ - 1;
    if (chosen_.size() == needed) {
      evaluate();
      return;
    }
    const std::size_t remaining = size_ * size_ - cell;
    if (remaining < needed - chosen_.size()) return;
    const std::size_t i = cell / size_;
    const std::size_t j = cell % size_;
    if (uf_.unite(i, size_ + j)) {
      chosen_.push_back(cell);
      search(cell + 1);
      chosen_.pop_back();
      uf_.undo();
    }
    search(cell + 1);
  }

  void evaluate() {
    ++trees_;
    // Peel leaves: a leaf's remaining amount fixes the flow on its only edge.
    const std::size_t nodes = 2 * size_;
    std::vector<Rational> remaining(nodes);
    for (std::size_t i = 0; i < size_; ++i) {
      remaining[i] = supply_[i];
      remaining[size_ + i] = demand_[i];
    }
    std::vector<std::size_t> degree(nodes, 0);
    for (std::size_t cell : chosen_) {
      ++degree[cell / size_];
      ++degree[size_ + cell % size_];
    }
    std::vector<char> used(chosen_.size(), 0);
    std::vector<Rational> flow(chosen_.size());
    for (std::size_t settled = 0; settled < chosen_.size(); ++settled) {
      bool progressed = false;
      for (std::size_t e = 0; e < chosen_.size() && !progressed; ++e) {
        if (used[e]) continue;
        const std::size_t row = chosen_[e] / size_;
        const std::size_t col = size_ + chosen_[e] % size_;
        std::size_t leaf = degree[row] == 1 ? row : (degree[col] == 1 ? col : nodes);
        if (leaf == nodes) continue;
        const std::size_t other = leaf == row ? col : row;
        flow[e] = remaining[leaf];
        if (flow[e] < 0) return;  // infeasible basis
        remaining[other] -= flow[e];
        remaining[leaf] = 0;
        --degree[row];
        --degree[col];
        used[e] = 1;
        progressed = true;
      }
      if (!progressed) return;
    }

    double value = 0.0;
    Rational exact = 0;
    for (std::size_t e = 0; e < chosen_.size(); ++e) {
      value += to_double(flow[e]) * c_.cost[chosen_[e]];
      if (c_.exact) exact += flow[e] * (*c_.exact)[chosen_[e]];
    }
    const bool better = c_.exact ? (!have_best_ || exact < best_exact_) : (value < best_value_);
    if (!better) return;
    have_best_ = true;
    best_value_ = value;
    best_exact_ = exact;
    best_support_.clear();
    for (std::size_t e = 0; e < chosen_.size(); ++e) {
      if (flow[e] > 0) best_support_.emplace_back(chosen_[e] / size_, chosen_[e] % size_);
    }
  }

  const CopyMatrix& c_;
  std::size_t size_;
  std::vector<Rational> supply_;
  std::vector<Rational> demand_;
  RollbackUnionFind uf_;
  std::vector<std::size_t> chosen_;
  std::size_t trees_ = 0;
  bool have_best_ = false;
  double best_value_ = std::numeric_limits<double>::infinity();
  Rational best_exact_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> best_support_;
};

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "p must be finite and >= 1");
}

}  // namespace

OracleResult brute_force_diagram(const PersistenceDiagram& sigma, const PersistenceDiagram& tau,
                                 double p, Execution exec) {
  require_exponent(p);
  if (!same_pair(sigma.pair_ptr(), tau.pair_ptr())) {
    throw Error(ErrorCode::pair_mismatch, "diagrams live on different metric pairs");
  }
  if (sigma.size() + tau.size() > kOracleDiagramLimit) {
    throw Error(ErrorCode::size_bound_exceeded,
                "oracle enumerates at most " + std::to_string(kOracleDiagramLimit) + " points");
  }
  const CopyMatrix c = build_copy_matrix(sigma.pair(), sigma.points(), tau.points(), p);
  return minimise_over_permutations(c, exec);
}

OracleResult brute_force_wb(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                            Execution exec) {
  require_exponent(p);
  if (!same_pair(mu.pair_ptr(), nu.pair_ptr())) {
    throw Error(ErrorCode::pair_mismatch, "measures live on different metric pairs");
  }
  auto points_of = [](const DiscreteMeasure& m) {
    std::vector<Point> pts;
    for (const Atom& a : m.atoms()) pts.push_back(a.point);
    return pts;
  };
  auto unit = [](const DiscreteMeasure& m) {
    return std::all_of(m.atoms().begin(), m.atoms().end(),
                       [](const Atom& a) { return a.mass == 1.0; });
  };
  const std::vector<Point> xs = points_of(mu);
  const std::vector<Point> ys = points_of(nu);
  const CopyMatrix c = build_copy_matrix(mu.pair(), xs, ys, p);

  if (unit(mu) && unit(nu) && xs.size() <= kOracleUnitAtomsLimit &&
      ys.size() <= kOracleUnitAtomsLimit) {
    return minimise_over_permutations(c, exec);
  }

  const double size = static_cast<double>(c.size());
  if (c.size() > 1 && std::pow(size, 2.0 * size - 2.0) > kOracleVertexLimit) {
    throw Error(ErrorCode::size_bound_exceeded,
                "vertex enumeration would visit more than 1e6 spanning trees");
  }
  std::vector<Rational> supply;
  std::vector<Rational> demand;
  for (const Atom& a : mu.atoms()) supply.push_back(to_rational(a.mass));
  for (const Atom& b : nu.atoms()) supply.push_back(to_rational(b.mass));
  for (const Atom& b : nu.atoms()) demand.push_back(to_rational(b.mass));
  for (const Atom& a : mu.atoms()) demand.push_back(to_rational(a.mass));
  return VertexEnumerator(c, std::move(supply), std::move(demand)).run();
}

}  // namespace wbp
