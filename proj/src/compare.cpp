#include <cmath>
#include <exception>

#include "divstab/solver_bipartite.hpp"
#include "divstab/solver_general.hpp"
#include "divstab/solver_hypergraph.hpp"
#include "divstab/stability.hpp"
#include "divstab/tooling.hpp"

namespace divstab {
namespace {

template <class Solve>
SolverOutcome run_exact(const Instance& inst, std::string name, Solve&& solve) {
  SolverOutcome outcome;
  outcome.solver = std::move(name);
  try {
    auto [x, iterations] = solve();
    outcome.iterations = iterations;
    outcome.stable = check_stability(inst, x).stable;
    outcome.exact = std::move(x);
  } catch (const std::exception& ex) {
    outcome.error = ex.what();
  }
  return outcome;
}

}  // namespace

CompareReport compare(const Instance& inst, const CompareOptions& options) {
  CompareReport report;
  switch (inst.kind()) {
    case Kind::bipartite:
      report.outcomes.push_back(run_exact(inst, "solve_bipartite", [&] {
        auto r = solve_bipartite(inst);
        return std::pair{std::move(r.x), r.trace.total_iterations};
      }));
      break;
    case Kind::graph:
      report.outcomes.push_back(run_exact(inst, "solve_general", [&] {
        auto r = solve_general(inst);
        return std::pair{std::move(r.x), r.trace.total_iterations};
      }));
      break;
    case Kind::hypergraph:
      break;
  }
  report.outcomes.push_back(run_exact(inst, "solve_hypergraph", [&] {
    auto r = solve_hypergraph(inst);
    return std::pair{std::move(r.x), r.steps};
  }));

  if (inst.kind() == Kind::bipartite) {
    SolverOutcome outcome;
    outcome.solver = "reference_float";
    try {
      FloatSolveResult r = reference_solve_float(inst, options.float_tol, options.max_iter);
      outcome.iterations = r.iterations;
      outcome.converged = r.converged;
      outcome.stable = check_stability_float(inst, r.x, options.agreement_tol).stable;
      outcome.approx = std::move(r.x);
    } catch (const std::exception& ex) {
      outcome.error = ex.what();
    }
    report.outcomes.push_back(std::move(outcome));
  }

  const SolverOutcome* first_exact = nullptr;
  for (const auto& o : report.outcomes) {
    if (!o.error.empty()) {
      report.problems.push_back(o.solver + " failed: " + o.error);
      continue;
    }
    if (o.exact) {
      if (!o.stable) report.problems.push_back(o.solver + " output is not stable");
      if (!first_exact) {
        first_exact = &o;
      } else if (!(*o.exact == *first_exact->exact)) {
        report.problems.push_back(o.solver + " disagrees with " + first_exact->solver);
      }
    }
  }
  for (const auto& o : report.outcomes) {
    if (!o.approx || !o.converged || !first_exact) continue;
    double deviation = 0.0;
    for (std::size_t e = 0; e < o.approx->size(); ++e) {
      deviation = std::max(deviation, std::abs((*o.approx)[e] - to_double((*first_exact->exact)[e])));
    }
    report.max_float_deviation = deviation;
    if (deviation > options.agreement_tol) {
      report.problems.push_back(o.solver + " deviates by " + std::to_string(deviation) + " from " +
                                first_exact->solver);
    }
  }
  report.agree = report.problems.empty();
  return report;
}

}  // namespace divstab
