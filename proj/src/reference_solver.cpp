#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "divstab/choice.hpp"
#include "divstab/tooling.hpp"

namespace divstab {

// Deliberately standalone: only the choice primitives are shared with the
// exact solver, so the two can serve as oracles for each other.
FloatSolveResult reference_solve_float(const Instance& inst, double tol, std::size_t max_iter) {
  if (inst.kind() != Kind::bipartite) throw std::invalid_argument("float reference needs a bipartite instance");
  if (!(tol > 0)) throw std::invalid_argument("float tolerance must be positive");

  const std::size_t ne = inst.num_edges();
  std::vector<double> cap(ne);
  for (std::size_t e = 0; e < ne; ++e) cap[e] = to_double(inst.capacity(e));
  std::vector<std::size_t> firms;
  std::vector<std::size_t> workers;
  for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
    (*inst.vertex(v).side == Side::firm ? firms : workers).push_back(v);
  }

  FloatSolveResult out;
  out.x.assign(ne, 0.0);
  std::vector<bool> frozen(ne, false);
  std::vector<double> raised(ne);

  for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
    raised = out.x;
    for (std::size_t i : firms) {
      double residual = to_double(inst.quota(i));
      std::vector<std::size_t> open;
      std::vector<double> caps;
      for (std::size_t e : inst.incident(i)) {
        if (frozen[e]) {
          residual -= out.x[e];
        } else {
          open.push_back(e);
          caps.push_back(cap[e]);
        }
      }
      residual = std::max(residual, 0.0);
      const auto filled = apply_choice<double>(caps, residual, tol).chosen;
      for (std::size_t k = 0; k < open.size(); ++k) raised[open[k]] = filled[k];
    }

    std::vector<double> next = raised;
    for (std::size_t j : workers) {
      const auto inc = inst.incident(j);
      std::vector<double> z;
      for (std::size_t e : inc) z.push_back(raised[e]);
      const auto cut = apply_choice<double>(z, to_double(inst.quota(j)), tol);
      if (!cut.height) continue;
      for (std::size_t k = 0; k < inc.size(); ++k) {
        next[inc[k]] = cut.chosen[k];
        if (cut.chosen[k] < z[k] - tol) frozen[inc[k]] = true;
      }
    }

    double change = 0.0;
    for (std::size_t e = 0; e < ne; ++e) change = std::max(change, std::abs(next[e] - out.x[e]));
    out.x = std::move(next);
    if (change < tol) {
      out.converged = true;
      return out;
    }
  }
  out.iterations = max_iter;
  return out;
}

}  // namespace divstab
