#include <algorithm>
#include <map>
#include <numeric>

#include "divstab/solver_bipartite.hpp"

namespace divstab {
namespace {

/// Solves a * s = rhs exactly; returns nullopt when a is singular.
std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  for (std::size_t k = 0; k < n; ++k) rhs[k] /= a[k][k];
  return rhs;
}

AggregateStep skip(const BipartiteState& state, std::string why) {
  AggregateStep out;
  out.next = state;
  out.binding = std::move(why);
  return out;
}

struct WorkerShape {
  bool full = false;
  Rational height;                  // head value when full
  std::vector<std::size_t> head;
  bool head_all_locked = true;
};

}  // namespace

StepBound max_step(std::span<const StepConstraint> constraints) {
  StepBound out;
  for (const auto& c : constraints) {
    if (c.rate <= 0) continue;
    Rational xi = (c.limit - c.value) / c.rate;
    if (xi < 0) xi = 0;
    if (!out.xi || xi < *out.xi) {
      out.xi = xi;
      out.binding = c.label;
    }
  }
  return out;
}

AggregateStep big_iteration(const Instance& inst, const BipartiteLayout& layout, const BipartiteState& state) {
  const auto& x = state.x;
  const auto& locked = state.locked;

  // Firms: underload and the free edges below capacity (they all sit at the
  // firm's water level after phase 1).
  std::map<std::size_t, std::size_t> active_index;  // firm vertex -> row
  std::vector<std::size_t> active;
  std::vector<std::vector<std::size_t>> free_head;  // per active row
  std::vector<Rational> underload;                  // per active row
  for (std::size_t i : layout.firms) {
    std::vector<std::size_t> level;
    for (std::size_t e : inst.incident(i)) {
      if (!locked[e] && x[e] < inst.capacity(e)) level.push_back(e);
    }
    if (level.empty()) continue;
    for (std::size_t e : level) {
      if (x[e] != x[level[0]]) return skip(state, "free edges of a firm are not level");
    }
    Rational total(0);
    for (std::size_t e : inst.incident(i)) total += x[e];
    active_index[i] = active.size();
    active.push_back(i);
    free_head.push_back(std::move(level));
    underload.push_back(inst.quota(i) - total);
  }

  std::vector<WorkerShape> shape(inst.num_vertices());
  for (std::size_t j : layout.workers) {
    const auto inc = inst.incident(j);
    Rational total(0);
    for (std::size_t e : inc) total += x[e];
    WorkerShape& w = shape[j];
    w.full = total == inst.quota(j) && !inc.empty();
    if (!w.full) continue;
    w.height = x[inc[0]];
    for (std::size_t e : inc) {
      if (x[e] > w.height) w.height = x[e];
    }
    for (std::size_t e : inc) {
      if (x[e] == w.height) {
        w.head.push_back(e);
        w.head_all_locked = w.head_all_locked && locked[e];
      }
    }
  }

  auto in_head = [&](std::size_t e) {
    const WorkerShape& w = shape[layout.worker_of[e]];
    return w.full && x[e] == w.height;
  };

  // (I - P) s = u, where P moves underload from a firm's free head edges into
  // worker tails and back out of worker heads to the firms owning them.
  const std::size_t n = active.size();
  std::vector<std::vector<Rational>> system(n, std::vector<Rational>(n));
  for (std::size_t row = 0; row < n; ++row) system[row][row] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    const Rational spread = Rational(1) / Rational(static_cast<long>(free_head[col].size()));
    for (std::size_t e : free_head[col]) {
      const WorkerShape& w = shape[layout.worker_of[e]];
      if (!w.full || in_head(e)) continue;
      const Rational share = spread / Rational(static_cast<long>(w.head.size()));
      for (std::size_t h : w.head) {
        auto it = active_index.find(layout.firm_of[h]);
        if (it != active_index.end()) system[it->second][col] -= share;
      }
    }
  }
  auto flow = solve_linear(std::move(system), underload);
  if (!flow) return skip(state, "singular underload transfer");

  std::vector<Rational> direction(inst.num_edges());
  for (std::size_t row = 0; row < n; ++row) {
    const Rational per_edge = (*flow)[row] / Rational(static_cast<long>(free_head[row].size()));
    for (std::size_t e : free_head[row]) direction[e] = per_edge;
  }
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    if (direction[e] > 0 && in_head(e)) return skip(state, "a free edge in a worker head would rise");
  }
  std::vector<Rational> tail_inflow(inst.num_vertices());
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    if (direction[e] > 0) tail_inflow[layout.worker_of[e]] += direction[e];
  }
  for (std::size_t j : layout.workers) {
    const WorkerShape& w = shape[j];
    if (!w.full || tail_inflow[j] == 0) continue;
    if (!w.head_all_locked) return skip(state, "an unlocked head edge would be cut");
    const Rational drop = tail_inflow[j] / Rational(static_cast<long>(w.head.size()));
    for (std::size_t h : w.head) direction[h] = -drop;
  }
  if (std::all_of(direction.begin(), direction.end(), [](const Rational& d) { return d == 0; })) {
    return skip(state, "no movement left in the regime");
  }

  std::vector<StepConstraint> constraints;
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    const std::string& id = inst.edge(e).id;
    if (direction[e] > 0) constraints.push_back({x[e], direction[e], inst.capacity(e), "capacity of " + id});
    if (direction[e] < 0) constraints.push_back({-x[e], -direction[e], Rational(0), "nonnegativity of " + id});
  }
  for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
    const WorkerShape& w = shape[v];
    const bool is_worker = *inst.vertex(v).side == Side::worker;
    if (is_worker && w.full) {
      if (tail_inflow[v] == 0) continue;
      // Tail edges must stay at or below the falling head.
      const Rational head_rate = tail_inflow[v] / Rational(static_cast<long>(w.head.size()));
      for (std::size_t e : inst.incident(v)) {
        if (x[e] == w.height) continue;
        constraints.push_back({x[e] - w.height, direction[e] + head_rate, Rational(0),
                               "head order at " + inst.vertex(v).id});
      }
      continue;
    }
    Rational total(0);
    Rational rate(0);
    for (std::size_t e : inst.incident(v)) {
      total += x[e];
      rate += direction[e];
    }
    constraints.push_back({total, rate, inst.quota(v), "quota of " + inst.vertex(v).id});
  }

  const StepBound bound = max_step(constraints);
  if (!bound.xi) throw InvariantViolation("unbounded homogeneous direction");
  if (*bound.xi == 0) return skip(state, "step blocked at once by " + bound.binding);

  AggregateStep out;
  out.applied = true;
  out.xi = *bound.xi;
  out.binding = bound.binding;
  out.next = state;
  for (std::size_t e = 0; e < inst.num_edges(); ++e) out.next.x[e] += out.xi * direction[e];
  out.direction = std::move(direction);
  return out;
}

}  // namespace divstab
