#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "divstab/model.hpp"

namespace divstab {

/// An edge whose stable value is forced: m is the smallest entry of any
/// vertex's capacity-restricted choice C_v(b|E_v), attained by `edge` at
/// `witness`.
struct PivotChoice {
  std::size_t edge = 0;
  Rational value;
  std::size_t witness = 0;
};

struct PivotOptions {
  /// When set, ties on the minimum are broken uniformly at random with this
  /// seed instead of lexicographically (edge id, then witness id).
  std::optional<std::uint64_t> seed;
};

/// Pivot over the remaining edges with the current quotas. `alive` flags the
/// edges still present. Throws std::invalid_argument if none are.
PivotChoice pivot(const Instance& inst, const std::vector<bool>& alive, const std::vector<Rational>& quotas,
                  std::uint64_t* rng_state = nullptr);

/// Pivot on the full instance with the original quotas.
PivotChoice pivot(const Instance& inst);

struct HypergraphResult {
  Assignment x;
  std::size_t steps = 0;
  std::vector<std::size_t> pivot_order;  // edges in the order they were fixed
};

/// Repeatedly fixes x(e0) = m at the pivot, removes e0 and lowers the quotas of
/// its ends by m. Accepts every kind; graphs and bipartite graphs are treated
/// as 2-uniform hypergraphs. Throws
/// InvariantViolation if a quota would go negative or the result is unstable.
HypergraphResult solve_hypergraph(const Instance& inst, const PivotOptions& options = {});

}  // namespace divstab
