#include "divstab/choice.hpp"

namespace divstab {
namespace {

void require_same_domain(const LocalView& a, const LocalView& b) {
  if (a.edges != b.edges || a.caps != b.caps || a.quota != b.quota) {
    throw std::invalid_argument("local views over different edge sets");
  }
}

void require_rational(const LocalView& view) {
  if (assignment_size(view) > view.quota) throw std::invalid_argument("local view is not rational (|z| > q)");
}

}  // namespace

CutResult<Rational> apply_choice(const LocalView& view) {
  return apply_choice<Rational>(view.z, view.quota);
}

Partition classify(const LocalView& view) {
  const LocalPartition local = classify_values<Rational>(view.z, view.caps, view.quota);
  Partition out;
  out.fully_filling = local.fully_filling;
  for (std::size_t k : local.head) out.head.push_back(view.edges[k]);
  for (std::size_t k : local.tail) out.tail.push_back(view.edges[k]);
  for (std::size_t k : local.at_bound) out.at_bound.push_back(view.edges[k]);
  return out;
}

std::vector<Rational> componentwise_max(std::span<const Rational> a, std::span<const Rational> b) {
  std::vector<Rational> out(a.begin(), a.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (b[k] > out[k]) out[k] = b[k];
  }
  return out;
}

std::vector<Rational> join(const LocalView& a, const LocalView& b) {
  require_same_domain(a, b);
  require_rational(a);
  require_rational(b);
  const auto upper = componentwise_max(a.z, b.z);
  return apply_choice<Rational>(upper, a.quota).chosen;
}

bool prefers(const LocalView& a, const LocalView& b) {
  const bool by_definition = join(a, b) == a.z;

  const LocalPartition part = classify_values<Rational>(a.z, a.caps, a.quota);
  bool closed_form = true;
  if (part.fully_filling) {
    for (std::size_t k : part.tail) closed_form = closed_form && a.z[k] >= b.z[k];
  } else {
    for (std::size_t k = 0; k < a.z.size(); ++k) closed_form = closed_form && b.z[k] <= a.z[k];
  }
  if (closed_form != by_definition) {
    throw InvariantViolation("preference by C(z v z') disagrees with the tail characterization");
  }
  return by_definition;
}

}  // namespace divstab
