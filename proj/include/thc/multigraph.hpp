#pragma once

// Undirected labelled multigraphs with counter-distinguished loops: the
// secret topology a provider gets certified, plus the path machinery used
// when proving connectivity.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace thc {

using VertexId = std::string;
using LabelSet = std::vector<std::string>;  // sorted, unique

enum class ElementKind : std::uint8_t { vertex = 0, edge = 1 };

// Identifies one vertex or one edge instance. Edges are stored with u <= v;
// counter is 0 for ordinary edges and >= 1 for loops.
struct ElementKey {
  ElementKind kind = ElementKind::vertex;
  VertexId u;
  VertexId v;
  std::uint32_t counter = 0;

  static ElementKey vertex(VertexId id) { return {ElementKind::vertex, std::move(id), {}, 0}; }
  static ElementKey edge(VertexId a, VertexId b, std::uint32_t counter = 0);

  bool is_vertex() const { return kind == ElementKind::vertex; }
  bool is_loop() const { return kind == ElementKind::edge && counter != 0; }
  std::string describe() const;

  auto operator<=>(const ElementKey&) const = default;
};

class Multigraph;

// Accumulates vertices/edges and validates once in build().
class GraphBuilder {
 public:
  GraphBuilder& add_vertex(const VertexId& id, LabelSet labels = {});
  GraphBuilder& add_edge(const VertexId& u, const VertexId& v, LabelSet labels = {});
  // counter 0 means "next free counter at v".
  GraphBuilder& add_loop(const VertexId& v, LabelSet labels = {}, std::uint32_t counter = 0);
  GraphBuilder& add_boundary(const VertexId& id);

  // Throws InputError listing every violation found.
  Multigraph build() const;

 private:
  friend class Multigraph;
  std::map<VertexId, LabelSet> vertices_;
  std::vector<std::pair<ElementKey, LabelSet>> edges_;
  std::set<VertexId> boundary_;
  std::vector<std::string> problems_;
};

class Multigraph {
 public:
  Multigraph() = default;

  std::size_t vertex_count() const { return vertices_.size(); }
  // Edge instances, loops included.
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t dimension() const { return vertex_count() + edge_count(); }

  bool has_vertex(const VertexId& id) const { return vertices_.count(id) != 0; }
  bool has_element(const ElementKey& key) const;
  bool is_boundary(const VertexId& id) const { return boundary_.count(id) != 0; }
  const std::set<VertexId>& boundary() const { return boundary_; }

  const std::map<VertexId, LabelSet>& vertices() const { return vertices_; }
  const std::map<ElementKey, LabelSet>& edges() const { return edges_; }
  const LabelSet& labels(const ElementKey& key) const;

  // Non-loop neighbours, ascending.
  const std::vector<VertexId>& neighbours(const VertexId& id) const;
  bool adjacent(const VertexId& a, const VertexId& b) const;
  std::uint32_t loop_count(const VertexId& id) const;

  // Canonical order: vertices by id, then edges by (u, v, counter).
  std::vector<ElementKey> elements() const;

  GraphBuilder to_builder() const;

 private:
  friend class GraphBuilder;
  std::map<VertexId, LabelSet> vertices_;
  std::map<ElementKey, LabelSet> edges_;
  std::set<VertexId> boundary_;
  std::map<VertexId, std::vector<VertexId>> adjacency_;
  std::map<VertexId, std::uint32_t> loops_;
};

// One traversed edge instance, oriented in walking direction.
struct PathStep {
  VertexId from;
  VertexId to;
  std::uint32_t counter = 0;  // loop counter, 0 for ordinary edges

  ElementKey key() const { return ElementKey::edge(from, to, counter); }
  bool operator==(const PathStep&) const = default;
};

struct Path {
  VertexId source;
  VertexId terminal;
  std::vector<PathStep> steps;
  std::size_t real_length = 0;  // edges other than padding loops
  bool padded_at_source = false;  // padding loops lead instead of trail

  std::size_t padded_length() const { return steps.size(); }
};

// Checks every Path invariant against g; throws StructuralError on violation.
void validate_path(const Multigraph& g, const Path& p);

// Hop distances from `from` over non-loop edges.
std::map<VertexId, std::size_t> hop_distances(const Multigraph& g, const VertexId& from);

// Minimum-hop path ignoring loops; nullopt when disconnected. Throws
// InputError for unknown vertices and StructuralError when from == to.
std::optional<Path> shortest_path(const Multigraph& g, const VertexId& from, const VertexId& to);

// Weighted variant: the cost hook returns the cost of traversing {a, b}.
using EdgeCost = std::function<std::uint64_t(const VertexId&, const VertexId&)>;
std::optional<Path> cheapest_path(const Multigraph& g, const VertexId& from, const VertexId& to,
                                  const EdgeCost& cost);

// max over v in V, b in boundary of d(v, b).
std::size_t padding_target(const Multigraph& g);

// Copy of g with `loops` fresh loops on every boundary node.
Multigraph augment(const Multigraph& g, std::size_t loops);

enum class PadEnd { terminal, source };

// Extends an unpadded p to `length` steps with loops at its terminal
// (appended) or at its source (prepended).
Path pad_path(const Path& p, const Multigraph& augmented, std::size_t length, PadEnd end = PadEnd::terminal);

// JSON graph files (schema in docs/graph-format.md).
Multigraph graph_from_json(const std::string& text);
std::string graph_to_json(const Multigraph& g);
Multigraph load_graph(const std::string& path);
void save_graph(const std::string& path, const Multigraph& g);

// Hash of the canonical JSON encoding.
std::string graph_digest_hex(const Multigraph& g);

}  // namespace thc
