#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "irskg/property.hpp"

namespace irskg {

/// Graph-local identifier. The tag keeps vertex and edge ids apart.
template <typename Tag>
class Id {
 public:
  constexpr Id() = default;
  constexpr explicit Id(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const { return value_; }

  friend constexpr auto operator<=>(Id, Id) = default;

 private:
  std::uint64_t value_ = 0;
};

using VertexId = Id<struct VertexTag>;
using EdgeId = Id<struct EdgeTag>;

struct Vertex {
  VertexId id;
  std::string label;
  PropertyMap properties;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  EdgeId id;
  std::string label;
  VertexId src;
  VertexId dst;
  PropertyMap properties;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct UpsertResult {
  VertexId id;
  bool created = false;
};

/// In-memory labeled property multigraph.
///
/// Every vertex and edge has exactly one non-empty label and a key-ordered
/// property map. Parallel edges and self-loops are allowed. Ids are assigned
/// densely in insertion order and are never reused; iteration is always in
/// ascending id order.
///
/// Mutations need exclusive access. Const member functions never touch
/// mutable state, so concurrent readers are safe while no writer is active.
class PropertyGraph {
 public:
  VertexId add_vertex(std::string label, PropertyMap properties = {});

  /// Merges into the lowest-id vertex whose `identity_key` property equals
  /// the incoming value (incoming keys win), or adds a new vertex. The label
  /// of an existing vertex is kept.
  UpsertResult upsert_vertex(std::string label, std::string_view identity_key,
                             PropertyMap properties);

  EdgeId add_edge(VertexId src, VertexId dst, std::string label,
                  PropertyMap properties = {});

  void set_vertex_property(VertexId id, std::string key, PropertyValue value);
  void set_edge_property(EdgeId id, std::string key, PropertyValue value);

  /// Lowest-id vertex whose `key` property equals `value`.
  std::optional<VertexId> lookup_identity(std::string_view key,
                                          const PropertyValue& value);

  /// Endpoint incidences at `id`; a self-loop counts twice.
  std::size_t degree(VertexId id) const;

  /// Edges joining `a` and `b` in either direction, in insertion order.
  std::vector<EdgeId> edges_between(VertexId a, VertexId b) const;

  /// Edges touching `id`, each listed once, in insertion order.
  const std::vector<EdgeId>& incident_edges(VertexId id) const;

  /// Conjunctive filter. A value without a key matches any property.
  std::vector<VertexId> find_vertices(
      const std::optional<std::string>& label = std::nullopt,
      const std::optional<std::string>& key = std::nullopt,
      const std::optional<PropertyValue>& value = std::nullopt) const;

  bool has_vertex(VertexId id) const { return id.value() < vertices_.size(); }
  bool has_edge(EdgeId id) const { return id.value() < edges_.size(); }

  const Vertex& vertex(VertexId id) const;
  const Edge& edge(EdgeId id) const;

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return vertices_.empty(); }

  VertexId next_vertex_id() const { return VertexId{vertices_.size()}; }
  EdgeId next_edge_id() const { return EdgeId{edges_.size()}; }

  /// Re-checks the single-label law, property constraints and referential
  /// integrity. Throws Errc::IntegrityViolation.
  void check_integrity() const;

  /// Structural equality: same vertices and edges with the same ids.
  friend bool operator==(const PropertyGraph& a, const PropertyGraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  struct ValueHash {
    std::size_t operator()(const PropertyValue& v) const {
      return std::hash<PropertyValue>{}(v);
    }
  };
  using IdentityIndex = std::unordered_map<PropertyValue, VertexId, ValueHash>;

  Vertex& mutable_vertex(VertexId id);
  IdentityIndex& identity_index(std::string_view key);
  void index_new_vertex(const Vertex& v);
  void invalidate_index(std::string_view key);

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::size_t> degree_;
  // Lazily built per identity key; only touched by non-const members.
  std::unordered_map<std::string, IdentityIndex> identity_indexes_;
};

}  // namespace irskg

template <typename Tag>
struct std::hash<irskg::Id<Tag>> {
  std::size_t operator()(irskg::Id<Tag> id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value());
  }
};
