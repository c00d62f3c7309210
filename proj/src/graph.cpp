#include "irskg/graph.hpp"

#include <cmath>

#include "irskg/error.hpp"

namespace irskg {

namespace {

void check_label(const std::string& label) {
  if (label.empty()) throw Error(Errc::EmptyLabel, "label must be non-empty");
  if (!is_valid_utf8(label)) {
    throw Error(Errc::InvalidUtf8, "label is not valid UTF-8");
  }
}

void check_property(const std::string& key, const PropertyValue& value) {
  if (key.empty()) {
    throw Error(Errc::EmptyPropertyKey, "property keys must be non-empty");
  }
  if (!is_valid_utf8(key)) {
    throw Error(Errc::InvalidUtf8, "property key is not valid UTF-8");
  }
  if (const auto* text = as_text(value); text && !is_valid_utf8(*text)) {
    throw Error(Errc::InvalidUtf8, "value of '" + key + "' is not valid UTF-8");
  }
  if (const auto* real = std::get_if<double>(&value); real && !std::isfinite(*real)) {
    throw Error(Errc::NonFiniteFloat, "value of '" + key + "' is not finite");
  }
}

void check_properties(const PropertyMap& properties) {
  for (const auto& [key, value] : properties) check_property(key, value);
}

}  // namespace

VertexId PropertyGraph::add_vertex(std::string label, PropertyMap properties) {
  check_label(label);
  check_properties(properties);
  const VertexId id = next_vertex_id();
  vertices_.push_back(Vertex{id, std::move(label), std::move(properties)});
  incident_.emplace_back();
  degree_.push_back(0);
  index_new_vertex(vertices_.back());
  return id;
}

UpsertResult PropertyGraph::upsert_vertex(std::string label,
                                          std::string_view identity_key,
                                          PropertyMap properties) {
  const auto key_it = properties.find(identity_key);
  if (key_it == properties.end()) {
    throw Error(Errc::MissingIdentityKey,
                "properties lack identity key '" + std::string(identity_key) + "'");
  }
  if (const auto existing = lookup_identity(identity_key, key_it->second)) {
    check_properties(properties);
    for (auto& [key, value] : properties) {
      set_vertex_property(*existing, key, std::move(value));
    }
    return {*existing, false};
  }
  return {add_vertex(std::move(label), std::move(properties)), true};
}

EdgeId PropertyGraph::add_edge(VertexId src, VertexId dst, std::string label,
                               PropertyMap properties) {
  if (!has_vertex(src) || !has_vertex(dst)) {
    const VertexId missing = has_vertex(src) ? dst : src;
    throw Error(Errc::DanglingEndpoint,
                "edge endpoint " + std::to_string(missing.value()) + " does not exist");
  }
  check_label(label);
  check_properties(properties);
  const EdgeId id = next_edge_id();
  edges_.push_back(Edge{id, std::move(label), src, dst, std::move(properties)});
  incident_[src.value()].push_back(id);
  if (dst != src) incident_[dst.value()].push_back(id);
  degree_[src.value()] += 1;
  degree_[dst.value()] += 1;
  return id;
}

void PropertyGraph::set_vertex_property(VertexId id, std::string key,
                                        PropertyValue value) {
  check_property(key, value);
  Vertex& v = mutable_vertex(id);
  auto it = v.properties.find(key);
  if (it != v.properties.end() && it->second == value) return;
  if (identity_indexes_.contains(key)) invalidate_index(key);
  v.properties.insert_or_assign(std::move(key), std::move(value));
}

void PropertyGraph::set_edge_property(EdgeId id, std::string key,
                                      PropertyValue value) {
  if (!has_edge(id)) {
    throw Error(Errc::UnknownEdge, "no edge " + std::to_string(id.value()));
  }
  check_property(key, value);
  edges_[id.value()].properties.insert_or_assign(std::move(key), std::move(value));
}

std::optional<VertexId> PropertyGraph::lookup_identity(std::string_view key,
                                                       const PropertyValue& value) {
  const IdentityIndex& index = identity_index(key);
  if (auto it = index.find(value); it != index.end()) return it->second;
  return std::nullopt;
}

std::size_t PropertyGraph::degree(VertexId id) const {
  if (!has_vertex(id)) {
    throw Error(Errc::UnknownVertex, "no vertex " + std::to_string(id.value()));
  }
  return degree_[id.value()];
}

std::vector<EdgeId> PropertyGraph::edges_between(VertexId a, VertexId b) const {
  if (!has_vertex(a) || !has_vertex(b)) {
    const VertexId missing = has_vertex(a) ? b : a;
    throw Error(Errc::UnknownVertex, "no vertex " + std::to_string(missing.value()));
  }
  const auto& shorter = incident_[a.value()].size() <= incident_[b.value()].size()
                            ? incident_[a.value()]
                            : incident_[b.value()];
  std::vector<EdgeId> out;
  for (EdgeId e : shorter) {
    const Edge& edge = edges_[e.value()];
    if ((edge.src == a && edge.dst == b) || (edge.src == b && edge.dst == a)) {
      out.push_back(e);
    }
  }
  return out;
}

const std::vector<EdgeId>& PropertyGraph::incident_edges(VertexId id) const {
  if (!has_vertex(id)) {
    throw Error(Errc::UnknownVertex, "no vertex " + std::to_string(id.value()));
  }
  return incident_[id.value()];
}

std::vector<VertexId> PropertyGraph::find_vertices(
    const std::optional<std::string>& label, const std::optional<std::string>& key,
    const std::optional<PropertyValue>& value) const {
  std::vector<VertexId> out;
  for (const Vertex& v : vertices_) {
    if (label && v.label != *label) continue;
    if (key) {
      auto it = v.properties.find(*key);
      if (it == v.properties.end()) continue;
      if (value && it->second != *value) continue;
    } else if (value) {
      bool any = false;
      for (const auto& [k, pv] : v.properties) any = any || pv == *value;
      if (!any) continue;
    }
    out.push_back(v.id);
  }
  return out;
}

const Vertex& PropertyGraph::vertex(VertexId id) const {
  if (!has_vertex(id)) {
    throw Error(Errc::UnknownVertex, "no vertex " + std::to_string(id.value()));
  }
  return vertices_[id.value()];
}

const Edge& PropertyGraph::edge(EdgeId id) const {
  if (!has_edge(id)) {
    throw Error(Errc::UnknownEdge, "no edge " + std::to_string(id.value()));
  }
  return edges_[id.value()];
}

void PropertyGraph::check_integrity() const {
  auto fail = [](const std::string& what) {
    throw Error(Errc::IntegrityViolation, what);
  };
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vertex& v = vertices_[i];
    if (v.id.value() != i) fail("vertex id out of sequence at " + std::to_string(i));
    if (v.label.empty()) fail("vertex " + std::to_string(i) + " has no label");
    for (const auto& [k, pv] : v.properties) {
      if (k.empty()) fail("vertex " + std::to_string(i) + " has an empty key");
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id.value() != i) fail("edge id out of sequence at " + std::to_string(i));
    if (e.label.empty()) fail("edge " + std::to_string(i) + " has no label");
    if (!has_vertex(e.src) || !has_vertex(e.dst)) {
      fail("edge " + std::to_string(i) + " references a missing vertex");
    }
    for (const auto& [k, pv] : e.properties) {
      if (k.empty()) fail("edge " + std::to_string(i) + " has an empty key");
    }
  }
}

Vertex& PropertyGraph::mutable_vertex(VertexId id) {
  if (!has_vertex(id)) {
    throw Error(Errc::UnknownVertex, "no vertex " + std::to_string(id.value()));
  }
  return vertices_[id.value()];
}

PropertyGraph::IdentityIndex& PropertyGraph::identity_index(std::string_view key) {
  auto it = identity_indexes_.find(std::string(key));
  if (it != identity_indexes_.end()) return it->second;
  IdentityIndex index;
  for (const Vertex& v : vertices_) {
    if (auto p = v.properties.find(key); p != v.properties.end()) {
      index.emplace(p->second, v.id);
    }
  }
  return identity_indexes_.emplace(std::string(key), std::move(index)).first->second;
}

void PropertyGraph::index_new_vertex(const Vertex& v) {
  for (auto& [key, index] : identity_indexes_) {
    if (auto p = v.properties.find(key); p != v.properties.end()) {
      index.emplace(p->second, v.id);
    }
  }
}

void PropertyGraph::invalidate_index(std::string_view key) {
  identity_indexes_.erase(std::string(key));
}

}  // namespace irskg
