#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divstab/model.hpp"

namespace divstab {

/// Firm/worker split of a bipartite instance, by vertex and by edge.
struct BipartiteLayout {
  std::vector<std::size_t> firms;
  std::vector<std::size_t> workers;
  std::vector<std::size_t> firm_of;    // per edge
  std::vector<std::size_t> worker_of;  // per edge

  /// Throws std::invalid_argument for non-bipartite instances.
  static BipartiteLayout of(const Instance& inst);
};

/// Solver state at the start of an iteration: the current function x and the
/// locked sets L_i, stored as one flag per edge (each edge has one firm).
struct BipartiteState {
  std::vector<Rational> x;
  std::vector<bool> locked;

  static BipartiteState initial(const Instance& inst);
};

/// Counts tracked for the iteration classification.
struct IterationParams {
  std::vector<std::size_t> locked;       // |L_i| per firm
  std::vector<std::size_t> worker_head;  // h_j per worker, 0 unless fully filled
  std::size_t filled_workers = 0;        // Pi
  std::vector<std::size_t> firm_head;    // h'_i per firm, 0 unless fully filled after phase 1
  std::size_t bound_tail_edges = 0;      // rho

  friend bool operator==(const IterationParams&, const IterationParams&) = default;
};

enum class IterationClass { positive, homogeneous, boundary, terminal, aggregated };

std::string_view to_string(IterationClass cls);

/// Phase 1: each firm keeps its locked values and water-fills the rest from
/// the capacities up to the residual quota.
std::vector<Rational> phase1(const Instance& inst, const BipartiteLayout& layout, std::span<const Rational> x,
                             const std::vector<bool>& locked);

struct Phase2Result {
  std::vector<Rational> x;
  std::vector<bool> locked;
  Rational decrement;  // total amount removed by worker cuts
};

/// Phase 2: every worker over quota applies its choice function; each edge
/// that decreased joins its firm's locked set.
Phase2Result phase2(const Instance& inst, const BipartiteLayout& layout, std::span<const Rational> x_tilde,
                    const std::vector<bool>& locked);

bool workers_within_quota(const Instance& inst, const BipartiteLayout& layout, std::span<const Rational> x);

IterationParams compute_params(const Instance& inst, const BipartiteLayout& layout,
                               std::span<const Rational> x_tilde, std::span<const Rational> x_prime,
                               const std::vector<bool>& locked);

/// Positive: some |L_i| or h_j or Pi grew. Homogeneous: nothing changed.
/// Boundary: only h'_i or rho changed.
IterationClass classify_iteration(const IterationParams& before, const IterationParams& after);

struct PlainStep {
  std::vector<Rational> x_tilde;
  bool terminal = false;
  /// Filled when not terminal.
  BipartiteState next;
  IterationParams params;
  Rational decrement;
};

PlainStep plain_iteration(const Instance& inst, const BipartiteLayout& layout, const BipartiteState& state);

/// A constraint value + xi * rate <= limit on the step length xi.
struct StepConstraint {
  Rational value;
  Rational rate;
  Rational limit;
  std::string label;
};

struct StepBound {
  std::optional<Rational> xi;  // nullopt when nothing restricts xi
  std::string binding;
};

/// Largest xi >= 0 satisfying every constraint (ratio test).
StepBound max_step(std::span<const StepConstraint> constraints);

struct AggregateStep {
  bool applied = false;
  BipartiteState next;
  /// Step length along `direction`; 1 reaches the limit of the current
  /// homogeneous regime.
  Rational xi;
  std::vector<Rational> direction;
  std::string binding;  // constraint that became tight, or why nothing was applied
};

/// Aggregated ("big") iteration from a state reached by a homogeneous plain
/// iteration. While the locked sets, heads and saturated edges stay fixed,
/// the underload left at the firms propagates linearly: firms spread it evenly
/// over their free head edges, workers cut it evenly from their heads, and the
/// cut returns to the firms owning the head edges. The direction is the total
/// movement of that linear process, and xi is the largest step along it that
/// keeps capacities, quotas and every head ordering intact.
AggregateStep big_iteration(const Instance& inst, const BipartiteLayout& layout, const BipartiteState& state);

struct IterationRecord {
  std::size_t index = 0;
  bool big = false;
  IterationClass cls = IterationClass::positive;
  Rational decrement;           // phase-2 decrement (plain iterations)
  std::optional<Rational> xi;   // big iterations
  std::string binding;          // big iterations
  std::size_t locked_total = 0;
  std::size_t filled_workers = 0;
  std::size_t bound_tail_edges = 0;
};

struct SolverTrace {
  std::vector<IterationRecord> iterations;  // filled only when recording
  std::size_t total_iterations = 0;
  std::size_t plain_iterations = 0;
  std::size_t big_iterations = 0;
  std::size_t positive_iterations = 0;
  std::size_t skipped_aggregations = 0;
};

struct SolverOptions {
  bool record_trace = false;
  /// Re-check worker preference monotonicity, locked-edge-in-head, parameter
  /// monotonicity and the positive-iteration budget on every iteration.
  bool check_invariants = false;
  bool aggregate = true;
  /// Shuffles the per-vertex processing order (results must not change).
  std::optional<std::uint64_t> order_seed;
};

struct BipartiteResult {
  Assignment x;
  SolverTrace trace;
};

/// Iterates from x = 0, L = {} until phase 1 meets every worker quota.
/// Throws InvariantViolation on the iteration circuit breaker
/// (10 |E|^2 + 10), a failed internal assertion, or an unstable result.
BipartiteResult solve_bipartite(const Instance& inst, const SolverOptions& options = {});

}  // namespace divstab
