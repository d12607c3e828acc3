#include <random>
#include <stdexcept>

#include "divstab/tooling.hpp"

namespace divstab {
namespace {

/// Bounded draws on top of mt19937_64, whose output sequence is fixed by the
/// standard (unlike the std distributions).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = rng_();
    } while (v >= limit);
    return v % n;
  }

  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

  Rational grid(long lo, long hi, long den) {
    const long span = (hi - lo) * den;
    const long k = lo * den + static_cast<long>(below(static_cast<std::uint64_t>(span) + 1));
    Rational r{mpz_class(k), mpz_class(den)};
    r.canonicalize();
    return r;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

Instance generate(const GenSpec& spec) {
  const std::size_t vertex_count =
      spec.kind == Kind::bipartite ? spec.firms + spec.workers : spec.vertices;
  if (vertex_count == 0 && spec.density > 0) throw std::invalid_argument("no vertices to place edges on");
  if (spec.density < 0 || spec.density > 1) throw std::invalid_argument("density must lie in [0, 1]");
  if (spec.parallel < 0 || spec.parallel > 1) throw std::invalid_argument("parallel probability must lie in [0, 1]");
  if (spec.denominator <= 0) throw std::invalid_argument("denominator must be positive");
  if (spec.cap_min < 0 || spec.cap_max < spec.cap_min || spec.quota_min < 0 || spec.quota_max < spec.quota_min) {
    throw std::invalid_argument("capacity/quota ranges must be nonnegative and ordered");
  }
  if (spec.kind == Kind::hypergraph && spec.hyperedges > 0 && (spec.max_arity == 0 || vertex_count == 0)) {
    throw std::invalid_argument("hyperedges need vertices and max_arity >= 1");
  }

  Draw draw(spec.seed);
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  auto add_vertex = [&](std::string id, std::optional<Side> side) {
    vertices.push_back(Vertex{std::move(id), side, draw.grid(spec.quota_min, spec.quota_max, spec.denominator)});
  };
  auto add_edge = [&](std::vector<std::string> ends) {
    const std::size_t copies = draw.chance(spec.parallel) ? 2 : 1;
    for (std::size_t c = 0; c < copies; ++c) {
      edges.push_back(Edge{"e" + std::to_string(edges.size() + 1), ends,
                           draw.grid(spec.cap_min, spec.cap_max, spec.denominator)});
    }
  };

  switch (spec.kind) {
    case Kind::bipartite:
      for (std::size_t i = 1; i <= spec.firms; ++i) add_vertex("f" + std::to_string(i), Side::firm);
      for (std::size_t j = 1; j <= spec.workers; ++j) add_vertex("w" + std::to_string(j), Side::worker);
      for (std::size_t i = 1; i <= spec.firms; ++i) {
        for (std::size_t j = 1; j <= spec.workers; ++j) {
          if (draw.chance(spec.density)) add_edge({"f" + std::to_string(i), "w" + std::to_string(j)});
        }
      }
      break;
    case Kind::graph:
      for (std::size_t v = 1; v <= spec.vertices; ++v) add_vertex("v" + std::to_string(v), std::nullopt);
      for (std::size_t u = 1; u <= spec.vertices; ++u) {
        for (std::size_t v = u + 1; v <= spec.vertices; ++v) {
          if (draw.chance(spec.density)) add_edge({"v" + std::to_string(u), "v" + std::to_string(v)});
        }
      }
      break;
    case Kind::hypergraph:
      for (std::size_t v = 1; v <= spec.vertices; ++v) add_vertex("v" + std::to_string(v), std::nullopt);
      for (std::size_t h = 0; h < spec.hyperedges; ++h) {
        const std::size_t max_arity = std::min(spec.max_arity, spec.vertices);
        const std::size_t arity = 1 + draw.below(max_arity);
        std::vector<std::size_t> pool(spec.vertices);
        for (std::size_t v = 0; v < pool.size(); ++v) pool[v] = v + 1;
        std::vector<std::string> ends;
        for (std::size_t k = 0; k < arity; ++k) {
          const std::size_t pick = k + draw.below(pool.size() - k);
          std::swap(pool[k], pool[pick]);
          ends.push_back("v" + std::to_string(pool[k]));
        }
        add_edge(std::move(ends));
      }
      break;
  }
  return Instance::build(spec.kind, std::move(vertices), std::move(edges));
}

}  // namespace divstab
