#pragma once

// Brute-force reference for the count/penalty pipeline. Reads only the raw
// vertex and edge records of a graph and re-derives everything by linear
// scans; it never calls degree(), matching_edges(), normalize_action() or
// any other library routine it is used to check.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "irskg/graph.hpp"
#include "irskg/rules.hpp"

namespace irskg::testing::oracle {

struct PlainEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::string label;
};

struct PlainGraph {
  std::vector<PropertyMap> vertex_props;
  std::vector<PlainEdge> edges;
};

inline PlainGraph flatten(const PropertyGraph& g) {
  PlainGraph out;
  for (const Vertex& v : g.vertices()) out.vertex_props.push_back(v.properties);
  for (const Edge& e : g.edges()) {
    out.edges.push_back({static_cast<std::size_t>(e.src.value()),
                         static_cast<std::size_t>(e.dst.value()), e.label});
  }
  return out;
}

inline std::vector<std::int64_t> degrees(const PlainGraph& g) {
  std::vector<std::int64_t> deg(g.vertex_props.size(), 0);
  for (std::size_t v = 0; v < deg.size(); ++v) {
    for (const PlainEdge& e : g.edges) {
      if (e.src == v) ++deg[v];
      if (e.dst == v) ++deg[v];
    }
  }
  return deg;
}

inline std::string canonical_verb(const std::string& verb) {
  std::string out;
  for (char c : verb) {
    if (c == '-') {
      out += '_';
    } else if (c >= 'a' && c <= 'z') {
      out += static_cast<char>(c - 32);
    } else {
      out += c;
    }
  }
  return out;
}

inline bool selects(const VertexSelector& s, const PropertyMap& props) {
  if (s.label_match != "*") {
    bool hit = false;
    for (const auto& [key, value] : props) {
      if ((key == "ip" || key == "ip_address") && std::holds_alternative<std::string>(value) &&
          std::get<std::string>(value) == s.label_match) {
        hit = true;
      }
    }
    if (!hit) return false;
  }
  for (const auto& [fk, fv] : s.property_filters) {
    bool hit = false;
    for (const auto& [key, value] : props) hit = hit || (key == fk && value == fv);
    if (!hit) return false;
  }
  return true;
}

// who / what / which.
inline bool rule_hits(const Rule& rule, const PlainGraph& g, std::size_t edge) {
  const PlainEdge& e = g.edges[edge];
  return selects(rule.source, g.vertex_props[e.src]) && e.label == canonical_verb(rule.action) &&
         selects(rule.target, g.vertex_props[e.dst]);
}

struct Expected {
  std::vector<std::int64_t> vertex_counts;
  std::vector<std::int64_t> edge_counts;
  std::set<std::size_t> penalized_vertices;
  std::set<std::size_t> penalized_edges;
};

inline Expected pipeline(const PlainGraph& g, const std::vector<Rule>& rules,
                         std::int64_t penalty) {
  Expected out;
  out.vertex_counts = degrees(g);
  for (const PlainEdge& e : g.edges) {
    out.edge_counts.push_back(out.vertex_counts[e.src] + out.vertex_counts[e.dst]);
  }
  for (const Rule& rule : rules) {
    if (rule.constraint != Constraint::deny) continue;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (rule_hits(rule, g, i)) {
        out.penalized_edges.insert(i);
        out.penalized_vertices.insert(g.edges[i].dst);
      }
    }
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (out.penalized_vertices.contains(g.edges[i].src) ||
        out.penalized_vertices.contains(g.edges[i].dst)) {
      out.penalized_edges.insert(i);
    }
  }
  for (std::size_t v : out.penalized_vertices) out.vertex_counts[v] = penalty;
  for (std::size_t e : out.penalized_edges) out.edge_counts[e] = penalty;
  return out;
}

}  // namespace irskg::testing::oracle
