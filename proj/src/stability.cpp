#include "divstab/stability.hpp"

#include <numeric>
#include <stdexcept>

#include "divstab/choice.hpp"

namespace divstab {
namespace {

template <class T>
T to_scalar(const Rational& value);

template <>
Rational to_scalar<Rational>(const Rational& value) {
  return value;
}

template <>
double to_scalar<double>(const Rational& value) {
  return to_double(value);
}

template <class T>
std::vector<std::size_t> irrational_vertices(const Instance& inst, std::span<const T> x, const T& tol) {
  std::vector<std::size_t> bad;
  for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
    T total(0);
    for (std::size_t e : inst.incident(v)) total += x[e];
    if (total > to_scalar<T>(inst.quota(v)) + tol) bad.push_back(v);
  }
  return bad;
}

/// Per-vertex evidence for every incident edge, indexed [v][k] with k local.
template <class T>
std::vector<std::vector<EndEvidence>> interest_table(const Instance& inst, std::span<const T> x,
                                                     const T& tol) {
  std::vector<std::vector<EndEvidence>> table(inst.num_vertices());
  for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
    const auto inc = inst.incident(v);
    std::vector<T> z;
    std::vector<T> caps;
    for (std::size_t e : inc) {
      z.push_back(x[e]);
      caps.push_back(to_scalar<T>(inst.capacity(e)));
    }
    const LocalPartition part = classify_values<T>(z, caps, to_scalar<T>(inst.quota(v)), tol);
    table[v].resize(inc.size());
    for (std::size_t k = 0; k < inc.size(); ++k) {
      table[v][k].vertex = inst.vertex(v).id;
      table[v][k].fully_filling = part.fully_filling;
      table[v][k].below_capacity = true;
    }
    for (std::size_t k : part.tail) table[v][k].in_tail = true;
    for (std::size_t k : part.at_bound) table[v][k].below_capacity = false;
  }
  return table;
}

std::size_t local_position(const Instance& inst, std::size_t v, std::size_t e) {
  const auto inc = inst.incident(v);
  for (std::size_t k = 0; k < inc.size(); ++k) {
    if (inc[k] == e) return k;
  }
  throw std::logic_error("edge not incident to vertex");
}

template <class T>
std::vector<BlockingEdge> find_blocking(const Instance& inst, std::span<const T> x, const T& tol) {
  const auto table = interest_table<T>(inst, x, tol);
  std::vector<BlockingEdge> out;
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    BlockingEdge candidate{e, inst.edge(e).id, {}};
    bool blocks = true;
    for (std::size_t v : inst.ends(e)) {
      const EndEvidence& ev = table[v][local_position(inst, v, e)];
      blocks = blocks && ev.in_tail && ev.below_capacity;
      candidate.ends.push_back(ev);
    }
    if (blocks) out.push_back(std::move(candidate));
  }
  return out;
}

template <class T>
StabilityReport check(const Instance& inst, std::span<const T> x, const T& tol) {
  StabilityReport report;
  const auto bad = irrational_vertices<T>(inst, x, tol);
  for (std::size_t v : bad) report.irrational_vertices.push_back(inst.vertex(v).id);
  report.rational = bad.empty();
  if (report.rational) {
    report.blocking = find_blocking<T>(inst, x, tol);
    report.stable = report.blocking.empty();
  }
  return report;
}

}  // namespace

std::pair<bool, std::vector<std::size_t>> is_rational(const Instance& inst, std::span<const Rational> x) {
  auto bad = irrational_vertices<Rational>(inst, x, Rational(0));
  return {bad.empty(), std::move(bad)};
}

std::vector<std::size_t> blocking_edges(const Instance& inst, std::span<const Rational> x) {
  if (!is_rational(inst, x).first) throw std::invalid_argument("blocking_edges requires a rational assignment");
  std::vector<std::size_t> out;
  for (const auto& b : find_blocking<Rational>(inst, x, Rational(0))) out.push_back(b.edge);
  return out;
}

StabilityReport check_stability(const Instance& inst, const Assignment& x) {
  return check<Rational>(inst, x.values(), Rational(0));
}

StabilityReport check_stability_float(const Instance& inst, std::span<const double> x, double tol) {
  return check<double>(inst, x, tol);
}

}  // namespace divstab
