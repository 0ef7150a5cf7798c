#include "wbp/plan.hpp"

#include <cmath>
#include <map>

#include "wbp/error.hpp"

namespace wbp {

namespace {

using EndpointKey = std::pair<Point, Point>;

std::vector<PlanEntry> merge_entries(std::span<const PlanEntry> entries) {
  std::map<EndpointKey, double> merged;
  for (const PlanEntry& e : entries) merged[{e.source, e.target}] += e.mass;
  std::vector<PlanEntry> out;
  out.reserve(merged.size());
  for (auto& [key, mass] : merged) out.push_back({key.first, key.second, mass});
  return out;
}

}  // namespace

TransportPlan::TransportPlan(PairPtr pair, std::vector<PlanEntry> entries, double p)
    : pair_(std::move(pair)), entries_(std::move(entries)), p_(p) {
  if (!pair_) throw Error(ErrorCode::invalid_argument, "plan needs a metric pair");
  for (const PlanEntry& e : entries_) {
    if (!(e.mass > 0.0) || !std::isfinite(e.mass)) {
      throw Error(ErrorCode::non_positive_mass, "plan entry " + to_string(e.source) + " -> " +
                                                    to_string(e.target) + " has non-positive mass");
    }
    if (pair_->in_boundary(e.source) && pair_->in_boundary(e.target)) {
      throw Error(ErrorCode::invalid_argument, "plan entry " + to_string(e.source) + " -> " +
                                                   to_string(e.target) + " lies in A x A");
    }
  }
}

double cost(const TransportPlan& plan, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "p must be finite and >= 1");
  double total = 0.0;
  for (const PlanEntry& e : plan.entries()) {
    total += e.mass * std::pow(plan.pair().distance(e.source, e.target), p);
  }
  return total;
}

std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const TransportPlan& plan) {
  std::vector<Atom> first;
  std::vector<Atom> second;
  for (const PlanEntry& e : plan.entries()) {
    if (!plan.pair().in_boundary(e.source)) first.push_back({e.source, e.mass});
    if (!plan.pair().in_boundary(e.target)) second.push_back({e.target, e.mass});
  }
  return {DiscreteMeasure(plan.pair_ptr(), std::move(first)).canonical(),
          DiscreteMeasure(plan.pair_ptr(), std::move(second)).canonical()};
}

PlanParts decompose(const TransportPlan& plan) {
  std::vector<PlanEntry> interior;
  std::vector<PlanEntry> to_boundary;
  std::vector<PlanEntry> from_boundary;
  for (const PlanEntry& e : plan.entries()) {
    const bool source_on_a = plan.pair().in_boundary(e.source);
    const bool target_on_a = plan.pair().in_boundary(e.target);
    if (!source_on_a && !target_on_a) {
      interior.push_back(e);
    } else if (!source_on_a) {
      to_boundary.push_back(e);
    } else {
      from_boundary.push_back(e);
    }
  }
  const double p = plan.exponent();
  return {TransportPlan(plan.pair_ptr(), std::move(interior), p),
          TransportPlan(plan.pair_ptr(), std::move(to_boundary), p),
          TransportPlan(plan.pair_ptr(), std::move(from_boundary), p)};
}

GluedPlan glue(const TransportPlan& plan12, const TransportPlan& plan23) {
  if (!same_pair(plan12.pair_ptr(), plan23.pair_ptr())) {
    throw Error(ErrorCode::pair_mismatch, "glued plans live on different metric pairs");
  }
  const MetricPair& pair = plan12.pair();

  struct Flow {
    std::size_t index;
    double mass;
  };
  struct Middle {
    std::vector<Flow> incoming;
    std::vector<Flow> outgoing;
    double incoming_mass = 0.0;
    double outgoing_mass = 0.0;
  };
  std::map<Point, Middle> middles;

  GluedPlan glued{plan12.pair_ptr(), {}, {}, {}};

  const auto entries12 = plan12.entries();
  const auto entries23 = plan23.entries();
  for (std::size_t i = 0; i < entries12.size(); ++i) {
    const PlanEntry& e = entries12[i];
    if (pair.in_boundary(e.target)) {
      // (x, a) with a in A continues as (x, a, a).
      glued.triples.push_back({e.source, e.target, e.target, e.mass});
      glued.defect23.push_back({e.target, e.mass});
    } else {
      Middle& m = middles[e.target];
      m.incoming.push_back({i, e.mass});
      m.incoming_mass += e.mass;
    }
  }
  for (std::size_t j = 0; j < entries23.size(); ++j) {
    const PlanEntry& e = entries23[j];
    if (pair.in_boundary(e.source)) {
      glued.triples.push_back({e.source, e.source, e.target, e.mass});
      glued.defect12.push_back({e.source, e.mass});
    } else {
      Middle& m = middles[e.source];
      m.outgoing.push_back({j, e.mass});
      m.outgoing_mass += e.mass;
    }
  }

  for (const auto& [y, m] : middles) {
    if (std::abs(m.incoming_mass - m.outgoing_mass) > kMarginalTolerance) {
      throw Error(ErrorCode::marginal_mismatch,
                  "middle atom " + to_string(y) + " receives " + std::to_string(m.incoming_mass) +
                      " but emits " + std::to_string(m.outgoing_mass));
    }
    if (m.incoming.empty() || m.outgoing.empty()) continue;
    for (const Flow& in : m.incoming) {
      for (const Flow& out : m.outgoing) {
        double mass = in.mass * out.mass / m.incoming_mass;
        if (mass > 0.0) {
          glued.triples.push_back(
              {entries12[in.index].source, y, entries23[out.index].target, mass});
        }
      }
    }
  }
  return glued;
}

TransportPlan compose(const GluedPlan& glued) {
  std::vector<PlanEntry> raw;
  raw.reserve(glued.triples.size());
  for (const Triple& t : glued.triples) {
    if (glued.pair->in_boundary(t.first) && glued.pair->in_boundary(t.last)) continue;
    raw.push_back({t.first, t.last, t.mass});
  }
  return TransportPlan(glued.pair, merge_entries(raw));
}

std::vector<PlanEntry> project12(const GluedPlan& glued) {
  std::vector<PlanEntry> raw;
  raw.reserve(glued.triples.size());
  for (const Triple& t : glued.triples) raw.push_back({t.first, t.middle, t.mass});
  return merge_entries(raw);
}

std::vector<PlanEntry> project23(const GluedPlan& glued) {
  std::vector<PlanEntry> raw;
  raw.reserve(glued.triples.size());
  for (const Triple& t : glued.triples) raw.push_back({t.middle, t.last, t.mass});
  return merge_entries(raw);
}

std::vector<PlanEntry> with_defects(std::span<const PlanEntry> coupling,
                                    std::span<const DiagonalDefect> defects) {
  std::vector<PlanEntry> raw(coupling.begin(), coupling.end());
  for (const DiagonalDefect& d : defects) raw.push_back({d.point, d.point, d.mass});
  return merge_entries(raw);
}

bool same_coupling(std::span<const PlanEntry> a, std::span<const PlanEntry> b, double tol) {
  std::map<EndpointKey, double> diff;
  for (const PlanEntry& e : a) diff[{e.source, e.target}] += e.mass;
  for (const PlanEntry& e : b) diff[{e.source, e.target}] -= e.mass;
  for (const auto& [key, delta] : diff) {
    if (std::abs(delta) > tol) return false;
  }
  return true;
}

}  // namespace wbp
