#include "divstab/solver_hypergraph.hpp"

#include <random>
#include <stdexcept>

#include "divstab/choice.hpp"
#include "divstab/stability.hpp"

namespace divstab {
namespace {

struct Candidate {
  std::size_t edge;
  std::size_t witness;
};

}  // namespace

PivotChoice pivot(const Instance& inst, const std::vector<bool>& alive, const std::vector<Rational>& quotas,
                  std::uint64_t* rng_state) {
  std::optional<Rational> best;
  std::vector<Candidate> ties;
  for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
    std::vector<std::size_t> edges;
    std::vector<Rational> caps;
    for (std::size_t e : inst.incident(v)) {
      if (!alive[e]) continue;
      edges.push_back(e);
      caps.push_back(inst.capacity(e));
    }
    if (edges.empty()) continue;
    const auto chosen = apply_choice<Rational>(caps, quotas[v]).chosen;
    Rational local_min = chosen[0];
    for (const auto& value : chosen) {
      if (value < local_min) local_min = value;
    }
    if (best && local_min > *best) continue;
    if (!best || local_min < *best) {
      best = local_min;
      ties.clear();
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (chosen[k] == local_min) ties.push_back({edges[k], v});
    }
  }
  if (!best) throw std::invalid_argument("pivot on an instance without edges");

  std::size_t pick = 0;
  if (rng_state) {
    std::mt19937_64 rng(*rng_state);
    pick = static_cast<std::size_t>(rng() % ties.size());
    *rng_state = rng();
  } else {
    for (std::size_t k = 1; k < ties.size(); ++k) {
      const auto& a = inst.edge(ties[k].edge).id;
      const auto& b = inst.edge(ties[pick].edge).id;
      const auto& wa = inst.vertex(ties[k].witness).id;
      const auto& wb = inst.vertex(ties[pick].witness).id;
      if (a < b || (a == b && wa < wb)) pick = k;
    }
  }
  return PivotChoice{ties[pick].edge, *best, ties[pick].witness};
}

PivotChoice pivot(const Instance& inst) {
  std::vector<Rational> quotas;
  for (const auto& v : inst.vertices()) quotas.push_back(v.quota);
  return pivot(inst, std::vector<bool>(inst.num_edges(), true), quotas);
}

HypergraphResult solve_hypergraph(const Instance& inst, const PivotOptions& options) {
  std::vector<Rational> quotas;
  for (const auto& v : inst.vertices()) quotas.push_back(v.quota);
  std::vector<bool> alive(inst.num_edges(), true);
  std::vector<Rational> values(inst.num_edges());
  std::uint64_t rng_state = options.seed.value_or(0);

  HypergraphResult out;
  for (std::size_t remaining = inst.num_edges(); remaining > 0; --remaining) {
    const PivotChoice p = options.seed ? pivot(inst, alive, quotas, &rng_state) : pivot(inst, alive, quotas);
    values[p.edge] = p.value;
    alive[p.edge] = false;
    for (std::size_t v : inst.ends(p.edge)) {
      quotas[v] -= p.value;
      if (quotas[v] < 0) {
        throw InvariantViolation("quota of \"" + inst.vertex(v).id + "\" went negative at pivot \"" +
                                 inst.edge(p.edge).id + "\"");
      }
    }
    out.pivot_order.push_back(p.edge);
    ++out.steps;
  }
  out.x = Assignment::make(inst, std::move(values));
  if (!check_stability(inst, out.x).stable) throw InvariantViolation("hypergraph recursion produced an unstable assignment");
  return out;
}

}  // namespace divstab
