#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "divstab/model.hpp"

namespace divstab {

/// Why an edge is interesting (non-satiated) for one of its ends.
struct EndEvidence {
  std::string vertex;
  bool fully_filling = false;  // false means the head is empty by convention
  bool in_tail = false;
  bool below_capacity = false;
};

struct BlockingEdge {
  std::size_t edge = 0;
  std::string id;
  std::vector<EndEvidence> ends;
};

struct StabilityReport {
  bool rational = false;
  bool stable = false;
  std::vector<BlockingEdge> blocking;
  std::vector<std::string> irrational_vertices;
};

/// |x_v| <= q(v) at every vertex; returns the violating vertices.
std::pair<bool, std::vector<std::size_t>> is_rational(const Instance& inst, std::span<const Rational> x);

/// Edges that are non-satiated (in the tail and below capacity) at every end,
/// in edge-list order. Heads are recomputed from scratch. Throws
/// std::invalid_argument if x is not rational.
std::vector<std::size_t> blocking_edges(const Instance& inst, std::span<const Rational> x);

StabilityReport check_stability(const Instance& inst, const Assignment& x);

/// Same checks on a binary64 assignment with absolute tolerance `tol` for
/// every equality and inequality.
StabilityReport check_stability_float(const Instance& inst, std::span<const double> x, double tol);

}  // namespace divstab
