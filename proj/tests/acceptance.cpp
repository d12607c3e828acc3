// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "divstab/choice.hpp"
#include "divstab/solver_bipartite.hpp"
#include "divstab/solver_general.hpp"
#include "divstab/solver_hypergraph.hpp"
#include "divstab/stability.hpp"
#include "divstab/tooling.hpp"

using namespace divstab;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(std::string what) {
    ok = false;
    if (failures.size() < 5) failures.push_back(std::move(what));
  }
};

struct Criterion {
  int number;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> body;
};

Rational grid(std::mt19937_64& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> dist(lo * den, hi * den);
  Rational r(mpz_class(dist(rng)), mpz_class(den));
  r.canonicalize();
  return r;
}

std::vector<Rational> between(std::mt19937_64& rng, const std::vector<Rational>& lo, const std::vector<Rational>& hi) {
  std::vector<Rational> out;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: out.push_back(lo[k]); break;
      case 1: out.push_back(hi[k]); break;
      default: out.push_back(lo[k] + grid(rng, 0, 1, 12) * (hi[k] - lo[k]));
    }
  }
  return out;
}

std::vector<Rational> choose(const std::vector<Rational>& z, const Rational& quota) {
  return apply_choice<Rational>(z, quota).chosen;
}

Rational sum(const std::vector<Rational>& z) {
  Rational s(0);
  for (const auto& v : z) s += v;
  return s;
}

Outcome choice_laws() {
  Outcome out;
  std::mt19937_64 rng(20240901);
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    const long den = std::uniform_int_distribution<long>(1, 6)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 8)(rng);
    const Rational quota = grid(rng, 0, 12, den);
    std::vector<Rational> caps, z;
    for (std::size_t k = 0; k < n; ++k) {
      caps.push_back(grid(rng, 0, 5, den));
      Rational v = std::uniform_int_distribution<int>(0, 2)(rng) == 0 ? caps.back() : grid(rng, 0, 5, den);
      z.push_back(std::min(v, caps.back()));
    }
    const auto cz = choose(z, quota);
    const std::vector<Rational> zeros(n);
    const std::string tag = "view " + std::to_string(t);

    if (choose(between(rng, cz, z), quota) != cz) out.fail(tag + ": consistence");
    const auto lower = between(rng, zeros, z);
    const auto c_lower = choose(lower, quota);
    for (std::size_t k = 0; k < n; ++k) {
      if (std::min(cz[k], lower[k]) > c_lower[k]) out.fail(tag + ": persistence");
    }
    const auto other = between(rng, zeros, caps);
    if (choose(componentwise_max(z, other), quota) != choose(componentwise_max(cz, other), quota)) {
      out.fail(tag + ": stationarity");
    }
    if (choose(cz, quota) != cz) out.fail(tag + ": idempotence");
    if (sum(z) >= quota ? sum(cz) != quota : cz != z) out.fail(tag + ": quota filling");
  }
  out.detail = std::to_string(trials) + " views, |E_v| <= 8";
  return out;
}

GenSpec bipartite_spec(std::mt19937_64& rng, std::uint64_t seed) {
  GenSpec spec;
  spec.kind = Kind::bipartite;
  spec.firms = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
  spec.workers = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
  spec.density = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
  spec.parallel = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? 0.15 : 0.0;
  spec.denominator = std::uniform_int_distribution<long>(1, 6)(rng);
  spec.cap_min = std::uniform_int_distribution<long>(0, 1)(rng);
  spec.cap_max = spec.cap_min + std::uniform_int_distribution<long>(1, 8)(rng);
  spec.quota_min = std::uniform_int_distribution<long>(0, 2)(rng);
  spec.quota_max = spec.quota_min + std::uniform_int_distribution<long>(1, 10)(rng);
  spec.seed = seed;
  return spec;
}

/// Iteration accounting shared by criteria 2, 4, 5 and 6.
struct Accounting {
  std::size_t solved = 0;
  std::size_t max_positive_ratio_num = 0;
  std::vector<std::string> problems;

  void record(const Instance& inst, const SolverTrace& trace, const std::string& tag) {
    ++solved;
    std::size_t workers = 0;
    for (const auto& v : inst.vertices()) workers += v.side == Side::worker ? 1 : 0;
    const std::size_t edges = inst.num_edges();
    if (trace.positive_iterations > 2 * edges + workers) problems.push_back(tag + ": positive budget");
    if (trace.total_iterations > 10 * edges * edges + 10) problems.push_back(tag + ": iteration bound");
  }
};

Accounting accounting;

Outcome bipartite_stability() {
  Outcome out;
  std::mt19937_64 rng(2);
  std::size_t count = 0, big = 0, max_edges = 0;
  for (std::uint64_t seed = 1; count < 400; ++seed) {
    const Instance inst = generate(bipartite_spec(rng, seed));
    if (inst.num_edges() > 40) continue;
    ++count;
    max_edges = std::max(max_edges, inst.num_edges());
    const std::string tag = "seed " + std::to_string(seed);
    try {
      const BipartiteResult r = solve_bipartite(inst, {.check_invariants = true});
      if (!check_stability(inst, r.x).stable) out.fail(tag + ": unstable");
      big += r.trace.big_iterations;
      accounting.record(inst, r.trace, tag);
    } catch (const std::exception& ex) {
      out.fail(tag + ": " + ex.what());
      accounting.problems.push_back(tag + ": " + ex.what());
    }
  }
  out.detail = std::to_string(count) + " instances, up to " + std::to_string(max_edges) + " edges, " +
               std::to_string(big) + " big iterations";
  return out;
}

Assignment solve_any(const Instance& inst) {
  switch (inst.kind()) {
    case Kind::bipartite: return solve_bipartite(inst).x;
    case Kind::graph: return solve_general(inst).x;
    case Kind::hypergraph: return solve_hypergraph(inst).x;
  }
  return {};
}

Outcome uniqueness() {
  Outcome out;
  std::mt19937_64 rng(3);
  const Rational step(1, 4);
  std::size_t on_grid_count = 0, total = 0;
  for (std::uint64_t seed = 1; on_grid_count < 120 && seed < 5000; ++seed) {
    GenSpec spec;
    spec.kind = static_cast<Kind>(seed % 3);
    spec.firms = 1 + seed % 2;
    spec.workers = 2;
    spec.vertices = 3;
    spec.hyperedges = 1 + seed % 4;
    spec.density = 0.7;
    spec.denominator = 1 + static_cast<long>(seed % 2);
    spec.cap_max = 3;
    spec.quota_max = 4;
    spec.seed = seed;
    const Instance inst = generate(spec);
    if (inst.num_edges() == 0 || inst.num_edges() > kMaxEnumerationEdges) continue;
    ++total;
    const std::string tag = "seed " + std::to_string(seed);
    try {
      const Assignment x = solve_any(inst);
      const auto found = enumerate_stable_grid(inst, step);
      if (found.size() > 1) out.fail(tag + ": " + std::to_string(found.size()) + " stable grid points");
      const bool lies_on_grid =
          std::all_of(x.values().begin(), x.values().end(), [](const Rational& v) { return on_grid(v, 4); });
      if (!lies_on_grid) continue;
      ++on_grid_count;
      if (found.size() != 1 || found[0] != x) out.fail(tag + ": enumeration does not return the solver output");
    } catch (const std::exception& ex) {
      out.fail(tag + ": " + ex.what());
    }
  }
  if (on_grid_count < 100) out.fail("only " + std::to_string(on_grid_count) + " instances with on-grid output");
  out.detail = std::to_string(total) + " instances, " + std::to_string(on_grid_count) + " with output on the 1/4 grid";
  return out;
}

Outcome graph_agreement() {
  Outcome out;
  std::mt19937_64 rng(4);
  std::size_t count = 0;
  for (std::uint64_t seed = 1; count < 220; ++seed) {
    GenSpec spec;
    spec.kind = Kind::graph;
    spec.vertices = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
    spec.density = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
    spec.parallel = seed % 5 == 0 ? 0.2 : 0.0;
    spec.denominator = std::uniform_int_distribution<long>(1, 6)(rng);
    spec.cap_max = std::uniform_int_distribution<long>(1, 6)(rng);
    spec.quota_max = std::uniform_int_distribution<long>(1, 10)(rng);
    spec.seed = seed;
    const Instance inst = generate(spec);
    if (inst.num_edges() > 30) continue;
    ++count;
    const std::string tag = "seed " + std::to_string(seed);
    try {
      const GeneralResult g = solve_general(inst, {.check_invariants = true});
      const HypergraphResult h = solve_hypergraph(inst);
      if (g.x != h.x) out.fail(tag + ": solvers disagree");
      if (!check_stability(inst, g.x).stable || !check_stability(inst, h.x).stable) out.fail(tag + ": unstable");
      accounting.record(double_instance(inst).bipartite, g.trace, tag + " (doubled)");
    } catch (const std::exception& ex) {
      out.fail(tag + ": " + ex.what());
      accounting.problems.push_back(tag + ": " + ex.what());
    }
  }
  out.detail = std::to_string(count) + " graph instances";
  return out;
}

Outcome float_agreement() {
  Outcome out;
  std::mt19937_64 rng(5);
  std::size_t converged = 0, skipped = 0, big = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; converged < 300 && seed < 3000; ++seed) {
    // Larger and denser than criterion 2: aggregated steps show up here.
    GenSpec spec = bipartite_spec(rng, seed);
    spec.firms = std::uniform_int_distribution<std::size_t>(5, 10)(rng);
    spec.workers = std::uniform_int_distribution<std::size_t>(5, 10)(rng);
    spec.density = std::uniform_real_distribution<double>(0.6, 1.0)(rng);
    spec.denominator = std::uniform_int_distribution<long>(1, 12)(rng);
    const Instance inst = generate(spec);
    const std::string tag = "seed " + std::to_string(seed);
    try {
      const FloatSolveResult approx = reference_solve_float(inst, 1e-13, 1000000);
      if (!approx.converged) {
        ++skipped;
        continue;
      }
      ++converged;
      const BipartiteResult exact = solve_bipartite(inst, {.check_invariants = true});
      accounting.record(inst, exact.trace, tag);
      big += exact.trace.big_iterations;
      for (std::size_t e = 0; e < inst.num_edges(); ++e) {
        worst = std::max(worst, std::abs(approx.x[e] - to_double(exact.x[e])));
      }
    } catch (const std::exception& ex) {
      out.fail(tag + ": " + ex.what());
    }
  }
  if (worst > 1e-9) out.fail("max deviation " + std::to_string(worst));
  if (converged < 50) out.fail("only " + std::to_string(converged) + " converged float runs");
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu converged (%zu skipped), %zu big iterations, max |exact - float| = %.3g",
                converged, skipped, big, worst);
  out.detail = buf;
  return out;
}

Outcome iteration_accounting() {
  Outcome out;
  for (const auto& p : accounting.problems) out.fail(p);
  out.detail = std::to_string(accounting.solved) + " solves with invariant checks on";
  if (accounting.solved < 400) out.fail("too few accounted solves");
  return out;
}

Outcome hypergraph_recursion() {
  Outcome out;
  std::mt19937_64 rng(7);
  std::size_t count = 0;
  for (std::uint64_t seed = 1; count < 60; ++seed) {
    GenSpec spec;
    spec.kind = Kind::hypergraph;
    spec.vertices = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    spec.hyperedges = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    spec.max_arity = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    // Small integer grids make pivot ties common.
    spec.denominator = std::uniform_int_distribution<long>(1, 2)(rng);
    spec.cap_max = 3;
    spec.quota_max = 4;
    spec.parallel = 0.2;
    spec.seed = seed;
    const Instance inst = generate(spec);
    ++count;
    const std::string tag = "seed " + std::to_string(seed);
    try {
      const HypergraphResult base = solve_hypergraph(inst);
      if (base.steps != inst.num_edges()) out.fail(tag + ": step count");
      if (!check_stability(inst, base.x).stable) out.fail(tag + ": unstable");
      for (std::uint64_t s = 1; s <= 10; ++s) {
        const HypergraphResult r = solve_hypergraph(inst, {.seed = s * 1000003 + seed});
        if (r.x != base.x) out.fail(tag + ": tie-break changed the result");
        if (r.steps != inst.num_edges()) out.fail(tag + ": step count");
      }
    } catch (const std::exception& ex) {
      out.fail(tag + ": " + ex.what());
    }
  }
  out.detail = std::to_string(count) + " hypergraphs x 10 pivot seeds";
  return out;
}

Outcome degenerate_inputs() {
  Outcome out;
  std::size_t cases = 0;
  auto run = [&](const GenSpec& spec, const std::string& label) {
    const Instance inst = generate(spec);
    ++cases;
    try {
      const Assignment x = solve_any(inst);
      if (!check_stability(inst, x).stable) out.fail(label + ": unstable");
      if (inst.kind() != Kind::hypergraph && solve_hypergraph(inst).x != x) out.fail(label + ": recursion disagrees");
    } catch (const std::exception& ex) {
      out.fail(label + ": " + ex.what());
    }
  };
  for (Kind kind : {Kind::bipartite, Kind::graph, Kind::hypergraph}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const std::string k(to_string(kind));
      GenSpec spec;
      spec.kind = kind;
      spec.seed = seed;
      spec.density = 0.4;

      GenSpec zero_caps = spec;
      zero_caps.cap_max = 0;
      run(zero_caps, k + " zero capacities, seed " + std::to_string(seed));

      GenSpec zero_quotas = spec;
      zero_quotas.quota_max = 0;
      run(zero_quotas, k + " zero quotas, seed " + std::to_string(seed));

      GenSpec sparse = spec;
      sparse.firms = sparse.workers = 6;
      sparse.vertices = 8;
      sparse.density = 0.05;
      sparse.hyperedges = 1;
      run(sparse, k + " isolated vertices, seed " + std::to_string(seed));

      GenSpec parallel = spec;
      parallel.parallel = 1.0;
      run(parallel, k + " parallel edges, seed " + std::to_string(seed));

      GenSpec mixed = spec;
      mixed.cap_min = 0;
      mixed.cap_max = 1;
      mixed.quota_max = 1;
      mixed.parallel = 0.5;
      run(mixed, k + " mixed degenerate, seed " + std::to_string(seed));
    }
  }
  out.detail = std::to_string(cases) + " degenerate instances";
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "choice-function laws", 10, choice_laws},
      {2, "bipartite output stability", 60, bipartite_stability},
      {3, "uniqueness by grid enumeration", 120, uniqueness},
      {4, "graph cross-solver agreement", 60, graph_agreement},
      {5, "aggregation vs float reference", 120, float_agreement},
      {6, "iteration accounting", 1, iteration_accounting},
      {7, "hypergraph recursion", 60, hypergraph_recursion},
      {8, "degenerate inputs", 60, degenerate_inputs},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.body();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.limit_seconds) o.fail("runtime over the limit");
    all = all && o.ok;
    std::printf("[%s] %d %s: %s; %.2f s (limit %.0f s)\n", o.ok ? "PASS" : "FAIL", c.number, c.name.c_str(),
                o.detail.c_str(), seconds, c.limit_seconds);
    for (const auto& f : o.failures) std::printf("       %s\n", f.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
