#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "divstab/model.hpp"

namespace divstab {

/// The unique r >= 0 with sum_e min(r, values[e]) == target.
///
/// Sort-and-scan: after sorting ascending, the height lies in the first
/// segment k where prefix(k) + (n - k) * sorted[k] reaches the target, and
/// solves prefix(k) + (n - k) * r == target there. Requires
/// sum(values) > target >= 0.
template <class T>
T cut_height(std::span<const T> values, const T& target) {
  const T total = std::accumulate(values.begin(), values.end(), T(0));
  if (target < T(0) || !(total > target)) {
    throw std::invalid_argument("cut_height requires sum(values) > target >= 0");
  }
  std::vector<T> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  T prefix(0);
  const std::size_t n = sorted.size();
  for (std::size_t k = 0; k < n; ++k) {
    const T remaining = T(static_cast<long>(n - k));
    if (prefix + remaining * sorted[k] >= target) {
      return T((target - prefix) / remaining);
    }
    prefix += sorted[k];
  }
  // Unreachable: k = n - 1 gives prefix + sorted.back() == total > target.
  throw std::logic_error("cut_height scan fell through");
}

template <class T>
struct CutResult {
  std::vector<T> chosen;
  /// Present iff |z| exceeded the quota and a cut was applied.
  std::optional<T> height;
};

/// Diversifying choice on a bare vector: identity if sum(z) <= quota + slack,
/// otherwise min(r, z(e)) at the cutting height r. `slack` is zero for exact
/// scalars; the float reference passes its comparison tolerance.
template <class T>
CutResult<T> apply_choice(std::span<const T> z, const T& quota, const T& slack = T(0)) {
  CutResult<T> out;
  out.chosen.assign(z.begin(), z.end());
  const T total = std::accumulate(z.begin(), z.end(), T(0));
  if (total <= quota + slack) return out;
  const T r = cut_height<T>(z, quota);
  for (auto& value : out.chosen) {
    if (value > r) value = r;
  }
  out.height = r;
  return out;
}

/// Head/tail/at-bound split with positions local to the view (0..|E_v|-1).
struct LocalPartition {
  std::vector<std::size_t> head;
  std::vector<std::size_t> tail;
  std::vector<std::size_t> at_bound;
  bool fully_filling = false;
};

/// Classifies a rational (|z| <= q) bundle. `tol` is the equality tolerance
/// (zero in exact mode). Throws std::invalid_argument if |z| > q + tol.
template <class T>
LocalPartition classify_values(std::span<const T> z, std::span<const T> caps, const T& quota,
                               const T& tol = T(0)) {
  auto close = [&](const T& a, const T& b) {
    const T diff = a > b ? T(a - b) : T(b - a);
    return diff <= tol;
  };
  const T total = std::accumulate(z.begin(), z.end(), T(0));
  if (total > quota + tol) throw std::invalid_argument("classify requires a rational bundle (|z| <= q)");
  LocalPartition out;
  out.fully_filling = close(total, quota);
  std::optional<T> top;
  if (out.fully_filling && !z.empty()) top = *std::max_element(z.begin(), z.end());
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (top && close(z[k], *top)) {
      out.head.push_back(k);
    } else {
      out.tail.push_back(k);
    }
    if (close(z[k], caps[k])) out.at_bound.push_back(k);
  }
  return out;
}

/// Head/tail/at-bound split over instance edge indices.
struct Partition {
  std::vector<std::size_t> head;
  std::vector<std::size_t> tail;
  std::vector<std::size_t> at_bound;
  bool fully_filling = false;
};

CutResult<Rational> apply_choice(const LocalView& view);

/// Throws std::invalid_argument when the view is not rational (|z| > q).
Partition classify(const LocalView& view);

/// z_a is (revealed) preferred to z_b: C(z_a v z_b) == z_a. Cross-checked
/// against the closed-form tail comparison; a disagreement throws
/// InvariantViolation. Both views must share E_v, caps and quota and be
/// rational, else std::invalid_argument.
bool prefers(const LocalView& a, const LocalView& b);

/// C(z_a v z_b).
std::vector<Rational> join(const LocalView& a, const LocalView& b);

/// Componentwise max.
std::vector<Rational> componentwise_max(std::span<const Rational> a, std::span<const Rational> b);

}  // namespace divstab
