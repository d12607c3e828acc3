#include "divstab/solver_bipartite.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "divstab/choice.hpp"
#include "divstab/stability.hpp"

namespace divstab {
namespace {

Rational sum_over(std::span<const std::size_t> edges, std::span<const Rational> x) {
  Rational total(0);
  for (std::size_t e : edges) total += x[e];
  return total;
}

/// Number of edges of E_v at the maximum value, or 0 unless |x_v| == q(v).
std::size_t head_size(const Instance& inst, std::size_t v, std::span<const Rational> x) {
  const auto inc = inst.incident(v);
  if (inc.empty() || sum_over(inc, x) != inst.quota(v)) return 0;
  Rational top = x[inc[0]];
  for (std::size_t e : inc) {
    if (x[e] > top) top = x[e];
  }
  return static_cast<std::size_t>(std::count_if(inc.begin(), inc.end(), [&](std::size_t e) { return x[e] == top; }));
}

void check_invariant(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

/// Lemma-style checks between two consecutive iteration-start states.
void check_worker_monotonicity(const Instance& inst, const BipartiteLayout& layout, const BipartiteState& before,
                               const BipartiteState& after) {
  for (std::size_t j : layout.workers) {
    const LocalView now = local_view(inst, after.x, j);
    const LocalView then = local_view(inst, before.x, j);
    check_invariant(prefers(now, then),
                    "worker \"" + inst.vertex(j).id + "\" moved to a less preferred bundle");
  }
}

void check_locked_in_heads(const Instance& inst, const BipartiteLayout& layout, const BipartiteState& state) {
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    if (!state.locked[e]) continue;
    const std::size_t j = layout.worker_of[e];
    const Partition part = classify(local_view(inst, state.x, j));
    const bool in_head = std::find(part.head.begin(), part.head.end(), e) != part.head.end();
    check_invariant(part.fully_filling && in_head,
                    "locked edge \"" + inst.edge(e).id + "\" is not in the head of its worker");
  }
}

void check_param_monotonicity(const IterationParams& before, const IterationParams& after, bool non_positive) {
  for (std::size_t k = 0; k < before.locked.size(); ++k) {
    check_invariant(after.locked[k] >= before.locked[k], "a locked set shrank");
  }
  for (std::size_t k = 0; k < before.worker_head.size(); ++k) {
    check_invariant(after.worker_head[k] >= before.worker_head[k], "a worker head shrank");
  }
  check_invariant(after.filled_workers >= before.filled_workers, "the number of filled workers decreased");
  if (non_positive) {
    for (std::size_t k = 0; k < before.firm_head.size(); ++k) {
      check_invariant(after.firm_head[k] <= before.firm_head[k], "a firm head grew in a non-positive stretch");
    }
    check_invariant(after.bound_tail_edges >= before.bound_tail_edges,
                    "saturated tail edges decreased in a non-positive stretch");
  }
}

}  // namespace

std::string_view to_string(IterationClass cls) {
  switch (cls) {
    case IterationClass::positive: return "positive";
    case IterationClass::homogeneous: return "homogeneous";
    case IterationClass::boundary: return "boundary";
    case IterationClass::terminal: return "terminal";
    case IterationClass::aggregated: return "aggregated";
  }
  return "?";
}

BipartiteLayout BipartiteLayout::of(const Instance& inst) {
  if (inst.kind() != Kind::bipartite) throw std::invalid_argument("bipartite solver needs a bipartite instance");
  BipartiteLayout layout;
  for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
    (*inst.vertex(v).side == Side::firm ? layout.firms : layout.workers).push_back(v);
  }
  layout.firm_of.resize(inst.num_edges());
  layout.worker_of.resize(inst.num_edges());
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    const auto ends = inst.ends(e);
    const bool first_is_firm = *inst.vertex(ends[0]).side == Side::firm;
    layout.firm_of[e] = first_is_firm ? ends[0] : ends[1];
    layout.worker_of[e] = first_is_firm ? ends[1] : ends[0];
  }
  return layout;
}

BipartiteState BipartiteState::initial(const Instance& inst) {
  return BipartiteState{std::vector<Rational>(inst.num_edges()), std::vector<bool>(inst.num_edges(), false)};
}

std::vector<Rational> phase1(const Instance& inst, const BipartiteLayout& layout, std::span<const Rational> x,
                             const std::vector<bool>& locked) {
  std::vector<Rational> out(x.begin(), x.end());
  for (std::size_t i : layout.firms) {
    Rational residual = inst.quota(i);
    std::vector<std::size_t> free_edges;
    std::vector<Rational> caps;
    for (std::size_t e : inst.incident(i)) {
      if (locked[e]) {
        residual -= x[e];
      } else {
        free_edges.push_back(e);
        caps.push_back(inst.capacity(e));
      }
    }
    if (residual < 0) {
      throw InvariantViolation("firm \"" + inst.vertex(i).id + "\": locked values exceed the quota");
    }
    const CutResult<Rational> cut = apply_choice<Rational>(caps, residual);
    for (std::size_t k = 0; k < free_edges.size(); ++k) out[free_edges[k]] = cut.chosen[k];
  }
  return out;
}

Phase2Result phase2(const Instance& inst, const BipartiteLayout& layout, std::span<const Rational> x_tilde,
                    const std::vector<bool>& locked) {
  Phase2Result out{std::vector<Rational>(x_tilde.begin(), x_tilde.end()), locked, Rational(0)};
  for (std::size_t j : layout.workers) {
    const auto inc = inst.incident(j);
    std::vector<Rational> z;
    for (std::size_t e : inc) z.push_back(x_tilde[e]);
    const CutResult<Rational> cut = apply_choice<Rational>(z, inst.quota(j));
    if (!cut.height) continue;
    for (std::size_t k = 0; k < inc.size(); ++k) {
      if (cut.chosen[k] < z[k]) {
        out.decrement += z[k] - cut.chosen[k];
        out.x[inc[k]] = cut.chosen[k];
        out.locked[inc[k]] = true;
      }
    }
  }
  return out;
}

bool workers_within_quota(const Instance& inst, const BipartiteLayout& layout, std::span<const Rational> x) {
  return std::all_of(layout.workers.begin(), layout.workers.end(),
                     [&](std::size_t j) { return sum_over(inst.incident(j), x) <= inst.quota(j); });
}

IterationParams compute_params(const Instance& inst, const BipartiteLayout& layout,
                               std::span<const Rational> x_tilde, std::span<const Rational> x_prime,
                               const std::vector<bool>& locked) {
  IterationParams p;
  for (std::size_t i : layout.firms) {
    const auto inc = inst.incident(i);
    p.locked.push_back(static_cast<std::size_t>(std::count_if(inc.begin(), inc.end(), [&](std::size_t e) { return locked[e]; })));
    p.firm_head.push_back(head_size(inst, i, x_tilde));
  }
  for (std::size_t j : layout.workers) {
    const auto inc = inst.incident(j);
    const bool full = sum_over(inc, x_prime) == inst.quota(j);
    p.worker_head.push_back(head_size(inst, j, x_prime));
    if (full) ++p.filled_workers;
    std::optional<Rational> top;
    if (full && !inc.empty()) {
      top = x_prime[inc[0]];
      for (std::size_t e : inc) {
        if (x_prime[e] > *top) top = x_prime[e];
      }
    }
    for (std::size_t e : inc) {
      const bool in_tail = !top || x_prime[e] != *top;
      if (in_tail && x_prime[e] == inst.capacity(e)) ++p.bound_tail_edges;
    }
  }
  return p;
}

IterationClass classify_iteration(const IterationParams& before, const IterationParams& after) {
  bool positive = after.filled_workers > before.filled_workers;
  for (std::size_t k = 0; k < before.locked.size(); ++k) positive = positive || after.locked[k] > before.locked[k];
  for (std::size_t k = 0; k < before.worker_head.size(); ++k) {
    positive = positive || after.worker_head[k] > before.worker_head[k];
  }
  if (positive) return IterationClass::positive;
  return before == after ? IterationClass::homogeneous : IterationClass::boundary;
}

PlainStep plain_iteration(const Instance& inst, const BipartiteLayout& layout, const BipartiteState& state) {
  PlainStep step;
  step.x_tilde = phase1(inst, layout, state.x, state.locked);
  if (workers_within_quota(inst, layout, step.x_tilde)) {
    step.terminal = true;
    return step;
  }
  Phase2Result cut = phase2(inst, layout, step.x_tilde, state.locked);
  step.params = compute_params(inst, layout, step.x_tilde, cut.x, cut.locked);
  step.decrement = std::move(cut.decrement);
  step.next = BipartiteState{std::move(cut.x), std::move(cut.locked)};
  return step;
}

BipartiteResult solve_bipartite(const Instance& inst, const SolverOptions& options) {
  BipartiteLayout layout = BipartiteLayout::of(inst);
  if (options.order_seed) {
    std::mt19937_64 rng(*options.order_seed);
    std::shuffle(layout.firms.begin(), layout.firms.end(), rng);
    std::shuffle(layout.workers.begin(), layout.workers.end(), rng);
  }

  const std::size_t num_edges = inst.num_edges();
  const std::size_t breaker = 10 * num_edges * num_edges + 10;
  const std::size_t positive_budget = 2 * num_edges + layout.workers.size();

  SolverTrace trace;
  BipartiteState state = BipartiteState::initial(inst);
  IterationParams params = compute_params(inst, layout, state.x, state.x, state.locked);
  std::optional<IterationParams> before_big;  // params preceding the last applied big iteration
  bool in_non_positive_stretch = false;

  auto record = [&](IterationRecord rec) {
    if (options.record_trace) trace.iterations.push_back(std::move(rec));
  };

  while (true) {
    if (trace.total_iterations >= breaker) {
      std::ostringstream msg;
      msg << "iteration circuit breaker tripped after " << trace.total_iterations << " iterations (|E| = "
          << num_edges << ")";
      throw InvariantViolation(msg.str());
    }
    ++trace.total_iterations;
    ++trace.plain_iterations;

    PlainStep step = plain_iteration(inst, layout, state);
    if (step.terminal) {
      record(IterationRecord{trace.total_iterations, false, IterationClass::terminal, Rational(0), std::nullopt, {},
                             0, 0, 0});
      Assignment result = Assignment::make(inst, std::move(step.x_tilde));
      const StabilityReport report = check_stability(inst, result);
      if (!report.stable) {
        throw InvariantViolation("bipartite solver produced an unstable assignment");
      }
      return BipartiteResult{std::move(result), std::move(trace)};
    }

    const IterationClass cls = classify_iteration(params, step.params);
    if (cls == IterationClass::positive) ++trace.positive_iterations;
    if (before_big) {
      check_invariant(step.params != *before_big,
                      "no tracked parameter changed after a big iteration");
      before_big.reset();
    }
    if (options.check_invariants) {
      check_param_monotonicity(params, step.params, in_non_positive_stretch && cls != IterationClass::positive);
      check_worker_monotonicity(inst, layout, state, step.next);
      check_locked_in_heads(inst, layout, step.next);
      check_invariant(trace.positive_iterations <= positive_budget, "positive-iteration budget exceeded");
    }
    in_non_positive_stretch = cls != IterationClass::positive;

    {
      const auto locked_total = static_cast<std::size_t>(std::count(step.next.locked.begin(), step.next.locked.end(), true));
      record(IterationRecord{trace.total_iterations, false, cls, step.decrement, std::nullopt, {}, locked_total,
                             step.params.filled_workers, step.params.bound_tail_edges});
    }
    params = std::move(step.params);
    state = std::move(step.next);

    if (cls != IterationClass::homogeneous || !options.aggregate) continue;

    AggregateStep big = big_iteration(inst, layout, state);
    if (!big.applied) {
      ++trace.skipped_aggregations;
      continue;
    }
    if (trace.total_iterations >= breaker) continue;  // reported at the top of the loop
    ++trace.total_iterations;
    ++trace.big_iterations;
    if (options.check_invariants) {
      check_worker_monotonicity(inst, layout, state, big.next);
      check_locked_in_heads(inst, layout, big.next);
    }
    before_big = params;
    {
      const auto locked_total = static_cast<std::size_t>(std::count(big.next.locked.begin(), big.next.locked.end(), true));
      record(IterationRecord{trace.total_iterations, true, IterationClass::aggregated, Rational(0), big.xi,
                             big.binding, locked_total, params.filled_workers, params.bound_tail_edges});
    }
    state = std::move(big.next);
  }
}

}  // namespace divstab
