#include "divstab/solver_general.hpp"

#include <stdexcept>

#include "divstab/stability.hpp"

namespace divstab {

DoubledInstance double_instance(const Instance& inst) {
  if (inst.kind() != Kind::graph) throw std::invalid_argument("doubling needs a graph instance");
  const std::size_t nv = inst.num_vertices();
  const std::size_t ne = inst.num_edges();

  std::vector<Vertex> vertices;
  vertices.reserve(2 * nv);
  for (int copy = 1; copy <= 2; ++copy) {
    for (const Vertex& v : inst.vertices()) {
      vertices.push_back(Vertex{v.id + "#" + std::to_string(copy), copy == 1 ? Side::firm : Side::worker, v.quota});
    }
  }
  std::vector<Edge> edges;
  edges.reserve(2 * ne);
  DoubledInstance out{Instance::build(Kind::bipartite, {}, {}), {}, {}, {}};
  for (std::size_t e = 0; e < ne; ++e) {
    const Edge& edge = inst.edge(e);
    const std::string& u = edge.ends[0];
    const std::string& v = edge.ends[1];
    edges.push_back(Edge{edge.id + "#1", {u + "#1", v + "#2"}, edge.capacity});
    edges.push_back(Edge{edge.id + "#2", {v + "#1", u + "#2"}, edge.capacity});
    out.edge_sigma.push_back(2 * e + 1);
    out.edge_sigma.push_back(2 * e);
    out.projection.push_back(e);
    out.projection.push_back(e);
  }
  for (std::size_t v = 0; v < nv; ++v) out.vertex_sigma.push_back(v + nv);
  for (std::size_t v = 0; v < nv; ++v) out.vertex_sigma.push_back(v);
  out.bipartite = Instance::build(Kind::bipartite, std::move(vertices), std::move(edges));
  return out;
}

std::vector<Rational> lift(const DoubledInstance& doubled, const Assignment& x) {
  std::vector<Rational> out;
  out.reserve(doubled.projection.size());
  for (std::size_t e : doubled.projection) out.push_back(x[e]);
  return out;
}

GeneralResult solve_general(const Instance& inst, const SolverOptions& options) {
  const DoubledInstance doubled = double_instance(inst);
  BipartiteResult solved = solve_bipartite(doubled.bipartite, options);
  const auto values = solved.x.values();
  std::vector<Rational> projected(inst.num_edges());
  for (std::size_t e = 0; e < values.size(); ++e) {
    if (values[e] != values[doubled.edge_sigma[e]]) {
      throw InvariantViolation("doubled solution is not symmetric at edge \"" + doubled.bipartite.edge(e).id + "\"");
    }
    projected[doubled.projection[e]] = values[e];
  }
  Assignment x = Assignment::make(inst, std::move(projected));
  if (!check_stability(inst, x).stable) throw InvariantViolation("projected assignment is not stable");
  return GeneralResult{std::move(x), std::move(solved.trace)};
}

}  // namespace divstab
