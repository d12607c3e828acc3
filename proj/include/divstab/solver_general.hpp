#pragma once

#include <cstddef>
#include <vector>

#include "divstab/model.hpp"
#include "divstab/solver_bipartite.hpp"

namespace divstab {

/// Bipartite double of a graph: every vertex v becomes v#1 (firm side) and
/// v#2 (worker side); every edge e = {u, v} becomes e#1 = u#1 v#2 and
/// e#2 = v#1 u#2.
struct DoubledInstance {
  Instance bipartite;
  /// Involution on doubled edges and on doubled vertices.
  std::vector<std::size_t> edge_sigma;
  std::vector<std::size_t> vertex_sigma;
  /// Projection of each doubled edge onto the original edge.
  std::vector<std::size_t> projection;
};

/// Throws std::invalid_argument unless inst.kind() == Kind::graph.
DoubledInstance double_instance(const Instance& inst);

/// Symmetric lift of a graph assignment onto the doubled instance.
std::vector<Rational> lift(const DoubledInstance& doubled, const Assignment& x);

struct GeneralResult {
  Assignment x;
  SolverTrace trace;  // of the bipartite solve on the double
};

/// Solves the doubled instance, checks that its solution is symmetric and
/// projects it back. Throws InvariantViolation if symmetry or stability fail.
GeneralResult solve_general(const Instance& inst, const SolverOptions& options = {});

}  // namespace divstab
