#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "divstab/rational.hpp"

namespace divstab {

enum class Kind { bipartite, graph, hypergraph };
enum class Side { firm, worker };

std::string_view to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view text);

struct Vertex {
  std::string id;
  std::optional<Side> side;
  Rational quota;
};

struct Edge {
  std::string id;
  std::vector<std::string> ends;
  Rational capacity;
};

/// Raised when an instance or assignment breaks a structural rule. Carries
/// every violation found, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A solver hit a state that its own invariants rule out.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Validated, immutable problem instance. Edges and vertices keep their input
/// order; all per-vertex edge lists follow the edge-list order.
class Instance {
 public:
  /// Validates and builds. Throws ValidationError listing every violation.
  static Instance build(Kind kind, std::vector<Vertex> vertices, std::vector<Edge> edges);

  Kind kind() const { return kind_; }
  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  const Rational& quota(std::size_t v) const { return vertices_[v].quota; }
  const Rational& capacity(std::size_t e) const { return edges_[e].capacity; }

  /// Incident edges of vertex v (E_v), in edge-list order.
  std::span<const std::size_t> incident(std::size_t v) const { return incident_[v]; }
  /// End vertices of edge e, in the order given in the input.
  std::span<const std::size_t> ends(std::size_t e) const { return ends_[e]; }

  std::optional<std::size_t> find_vertex(std::string_view id) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;

 private:
  Instance() = default;

  Kind kind_ = Kind::bipartite;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::vector<std::size_t>> ends_;
  std::unordered_map<std::string, std::size_t> vertex_index_;
  std::unordered_map<std::string, std::size_t> edge_index_;
};

/// Admissible assignment: one value per instance edge, 0 <= x(e) <= b(e).
/// Values are stored in instance edge order.
class Assignment {
 public:
  Assignment() = default;

  /// Checks admissibility and size; throws ValidationError otherwise.
  static Assignment make(const Instance& inst, std::vector<Rational> values);
  static Assignment from_map(const Instance& inst, const std::map<std::string, Rational>& values);
  static Assignment zero(const Instance& inst);

  std::span<const Rational> values() const { return values_; }
  const Rational& operator[](std::size_t e) const { return values_[e]; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  explicit Assignment(std::vector<Rational> values) : values_(std::move(values)) {}
  std::vector<Rational> values_;
};

/// One vertex's slice of an assignment: E_v, b|E_v, q(v) and z = x|E_v.
struct LocalView {
  std::size_t vertex = 0;
  std::vector<std::size_t> edges;
  std::vector<Rational> caps;
  Rational quota;
  std::vector<Rational> z;
};

LocalView local_view(const Instance& inst, std::span<const Rational> x, std::size_t v);
LocalView local_view(const Instance& inst, const Assignment& x, std::string_view vertex_id);

/// |z| for a local view.
Rational assignment_size(const LocalView& view);

}  // namespace divstab
