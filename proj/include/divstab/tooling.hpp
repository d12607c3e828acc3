#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divstab/model.hpp"

namespace divstab {

// ---- random instances -------------------------------------------------------

struct GenSpec {
  Kind kind = Kind::bipartite;
  std::size_t firms = 3;     // bipartite
  std::size_t workers = 3;   // bipartite
  std::size_t vertices = 4;  // graph / hypergraph
  double density = 0.5;      // edge probability per vertex pair (bipartite, graph)
  std::size_t hyperedges = 4;
  std::size_t max_arity = 3;
  /// Probability of adding a parallel copy of each generated edge.
  double parallel = 0.0;
  /// Capacities and quotas are drawn uniformly from the grid {k / denominator}
  /// within [min, max].
  long denominator = 1;
  long cap_min = 0;
  long cap_max = 4;
  long quota_min = 0;
  long quota_max = 6;
  std::uint64_t seed = 1;
};

/// Deterministic: the same spec always gives the same instance (and bytes).
/// Throws std::invalid_argument on an unusable spec.
Instance generate(const GenSpec& spec);

// ---- floating-point reference ----------------------------------------------

struct FloatSolveResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Plain two-phase iterations in binary64 with no aggregation, stopped when
/// the largest per-edge change drops below `tol` or after `max_iter`
/// iterations. Bipartite instances only.
FloatSolveResult reference_solve_float(const Instance& inst, double tol = 1e-13, std::size_t max_iter = 1000000);

// ---- uniqueness oracle ------------------------------------------------------

inline constexpr std::size_t kMaxEnumerationEdges = 4;

/// Every assignment on the grid {0, step, 2 step, ...} within the capacities
/// that passes the stability checker. Throws std::invalid_argument when the
/// instance has more than kMaxEnumerationEdges edges or step <= 0.
std::vector<Assignment> enumerate_stable_grid(const Instance& inst, const Rational& step);

// ---- cross-solver comparison -----------------------------------------------

struct SolverOutcome {
  std::string solver;
  std::optional<Assignment> exact;
  std::optional<std::vector<double>> approx;
  bool stable = false;
  bool converged = true;
  std::size_t iterations = 0;
  std::string error;
};

struct CompareOptions {
  double float_tol = 1e-13;
  std::size_t max_iter = 1000000;
  double agreement_tol = 1e-9;
};

struct CompareReport {
  bool agree = false;
  std::vector<SolverOutcome> outcomes;
  std::optional<double> max_float_deviation;  // absent when no float run converged
  std::vector<std::string> problems;
};

/// Runs every solver that applies to the instance kind and compares outputs:
/// exact solvers must match exactly and pass the checker, the float reference
/// must match within agreement_tol when it converged (non-convergence is a
/// skip, not a failure).
CompareReport compare(const Instance& inst, const CompareOptions& options = {});

}  // namespace divstab
