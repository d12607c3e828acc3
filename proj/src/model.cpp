#include "divstab/model.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace divstab {
namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::ostringstream out;
  out << "invalid instance:";
  for (const auto& line : lines) out << "\n  " << line;
  return out.str();
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::bipartite: return "bipartite";
    case Kind::graph: return "graph";
    case Kind::hypergraph: return "hypergraph";
  }
  return "?";
}

std::optional<Kind> parse_kind(std::string_view text) {
  if (text == "bipartite") return Kind::bipartite;
  if (text == "graph") return Kind::graph;
  if (text == "hypergraph") return Kind::hypergraph;
  return std::nullopt;
}

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_lines(violations)), violations_(std::move(violations)) {}

Instance Instance::build(Kind kind, std::vector<Vertex> vertices, std::vector<Edge> edges) {
  std::vector<std::string> errors;
  Instance inst;
  inst.kind_ = kind;

  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const Vertex& vx = vertices[v];
    if (vx.id.empty()) errors.push_back("vertex #" + std::to_string(v) + ": empty id");
    if (!inst.vertex_index_.emplace(vx.id, v).second) {
      errors.push_back("duplicate vertex id \"" + vx.id + "\"");
    }
    if (vx.quota < 0) errors.push_back("vertex \"" + vx.id + "\": negative quota " + to_string(vx.quota));
    if (kind == Kind::bipartite && !vx.side) {
      errors.push_back("vertex \"" + vx.id + "\": bipartite vertex without side");
    }
    if (kind != Kind::bipartite && vx.side) {
      errors.push_back("vertex \"" + vx.id + "\": side label on a " + std::string(to_string(kind)) + " vertex");
    }
  }

  inst.ends_.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    const std::string where = "edge \"" + ed.id + "\"";
    if (ed.id.empty()) errors.push_back("edge #" + std::to_string(e) + ": empty id");
    if (!inst.edge_index_.emplace(ed.id, e).second) errors.push_back("duplicate edge id \"" + ed.id + "\"");
    if (ed.capacity < 0) errors.push_back(where + ": negative capacity " + to_string(ed.capacity));

    bool ends_known = true;
    for (const auto& end : ed.ends) {
      auto it = inst.vertex_index_.find(end);
      if (it == inst.vertex_index_.end()) {
        errors.push_back(where + ": unknown vertex \"" + end + "\"");
        ends_known = false;
      } else {
        inst.ends_[e].push_back(it->second);
      }
    }
    std::set<std::string> distinct(ed.ends.begin(), ed.ends.end());
    switch (kind) {
      case Kind::bipartite:
        if (ed.ends.size() != 2) {
          errors.push_back(where + ": bipartite edge must have exactly 2 ends");
        } else if (ends_known) {
          const auto& a = vertices[inst.ends_[e][0]];
          const auto& b = vertices[inst.ends_[e][1]];
          if (a.side && b.side && *a.side == *b.side) errors.push_back(where + ": edge within one part");
        }
        break;
      case Kind::graph:
        if (ed.ends.size() != 2) {
          errors.push_back(where + ": graph edge must have exactly 2 ends");
        } else if (distinct.size() != 2) {
          errors.push_back(where + ": loop (both ends are \"" + ed.ends[0] + "\")");
        }
        break;
      case Kind::hypergraph:
        if (ed.ends.empty()) {
          errors.push_back(where + ": hyperedge without ends");
        } else if (distinct.size() != ed.ends.size()) {
          errors.push_back(where + ": hyperedge with repeated ends");
        }
        break;
    }
  }

  if (!errors.empty()) throw ValidationError(std::move(errors));

  inst.incident_.resize(vertices.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (std::size_t v : inst.ends_[e]) inst.incident_[v].push_back(e);
  }
  inst.vertices_ = std::move(vertices);
  inst.edges_ = std::move(edges);
  return inst;
}

std::optional<std::size_t> Instance::find_vertex(std::string_view id) const {
  auto it = vertex_index_.find(std::string(id));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Instance::find_edge(std::string_view id) const {
  auto it = edge_index_.find(std::string(id));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

Assignment Assignment::make(const Instance& inst, std::vector<Rational> values) {
  std::vector<std::string> errors;
  if (values.size() != inst.num_edges()) {
    errors.push_back("assignment has " + std::to_string(values.size()) + " values, instance has " +
                     std::to_string(inst.num_edges()) + " edges");
    throw ValidationError(std::move(errors));
  }
  for (std::size_t e = 0; e < values.size(); ++e) {
    if (values[e] < 0) {
      errors.push_back("edge \"" + inst.edge(e).id + "\": negative value " + to_string(values[e]));
    } else if (values[e] > inst.capacity(e)) {
      errors.push_back("edge \"" + inst.edge(e).id + "\": value " + to_string(values[e]) +
                       " exceeds capacity " + to_string(inst.capacity(e)));
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return Assignment(std::move(values));
}

Assignment Assignment::from_map(const Instance& inst, const std::map<std::string, Rational>& values) {
  std::vector<std::string> errors;
  std::vector<Rational> dense(inst.num_edges());
  std::vector<bool> seen(inst.num_edges(), false);
  for (const auto& [id, value] : values) {
    auto e = inst.find_edge(id);
    if (!e) {
      errors.push_back("assignment names unknown edge \"" + id + "\"");
      continue;
    }
    dense[*e] = value;
    seen[*e] = true;
  }
  for (std::size_t e = 0; e < seen.size(); ++e) {
    if (!seen[e]) errors.push_back("assignment has no value for edge \"" + inst.edge(e).id + "\"");
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return make(inst, std::move(dense));
}

Assignment Assignment::zero(const Instance& inst) {
  return Assignment(std::vector<Rational>(inst.num_edges()));
}

LocalView local_view(const Instance& inst, std::span<const Rational> x, std::size_t v) {
  LocalView view;
  view.vertex = v;
  view.quota = inst.quota(v);
  for (std::size_t e : inst.incident(v)) {
    view.edges.push_back(e);
    view.caps.push_back(inst.capacity(e));
    view.z.push_back(x[e]);
  }
  return view;
}

LocalView local_view(const Instance& inst, const Assignment& x, std::string_view vertex_id) {
  auto v = inst.find_vertex(vertex_id);
  if (!v) throw std::out_of_range("unknown vertex \"" + std::string(vertex_id) + "\"");
  return local_view(inst, x.values(), *v);
}

Rational assignment_size(const LocalView& view) {
  return std::accumulate(view.z.begin(), view.z.end(), Rational(0));
}

}  // namespace divstab
