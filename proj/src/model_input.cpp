#include "irskg/model_input.hpp"

#include <algorithm>

#include "irskg/error.hpp"

namespace irskg {

namespace {

std::uint64_t magnitude(std::int64_t v) {
  return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

const std::int64_t* find_count(const PropertyMap& props, const std::string& key) {
  auto it = props.find(key);
  return it == props.end() ? nullptr : as_int(it->second);
}

std::int64_t require_vertex_count(const PropertyGraph& g, VertexId id,
                                  const std::string& key) {
  const std::int64_t* count = find_count(g.vertex(id).properties, key);
  if (!count) {
    throw Error(Errc::MissingVertexCounts,
                "vertex " + std::to_string(id.value()) + " has no integer '" + key + "'");
  }
  return *count;
}

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

void TransformConfig::validate() const {
  if (penalty >= 0) {
    throw Error(Errc::InvalidConfig,
                "penalty must be negative, got " + std::to_string(penalty));
  }
  if (count_key.empty()) throw Error(Errc::InvalidConfig, "count key must be non-empty");
}

PropertyGraph compute_vertex_counts(const PropertyGraph& graph,
                                    const TransformConfig& config) {
  config.validate();
  PropertyGraph out = graph;
  for (const Vertex& v : graph.vertices()) {
    out.set_vertex_property(v.id, config.count_key,
                            static_cast<std::int64_t>(graph.degree(v.id)));
  }
  return out;
}

PropertyGraph compute_edge_counts(const PropertyGraph& annotated,
                                  const TransformConfig& config) {
  config.validate();
  PropertyGraph out = annotated;
  for (const Edge& e : annotated.edges()) {
    const std::int64_t total = require_vertex_count(annotated, e.src, config.count_key) +
                               require_vertex_count(annotated, e.dst, config.count_key);
    out.set_edge_property(e.id, config.count_key, total);
  }
  return out;
}

std::uint64_t max_abs_count(const PropertyGraph& annotated, const TransformConfig& config) {
  std::uint64_t max = 0;
  for (const Vertex& v : annotated.vertices()) {
    max = std::max(max, magnitude(require_vertex_count(annotated, v.id, config.count_key)));
  }
  for (const Edge& e : annotated.edges()) {
    const std::int64_t* count = find_count(e.properties, config.count_key);
    if (!count) {
      throw Error(Errc::MissingVertexCounts,
                  "edge " + std::to_string(e.id.value()) + " has no integer '" +
                      config.count_key + "'");
    }
    max = std::max(max, magnitude(*count));
  }
  return max;
}

ModelInputGraph apply_rule_constraints(const PropertyGraph& annotated,
                                       const std::vector<Rule>& rules,
                                       const TransformConfig& config) {
  config.validate();
  const std::uint64_t max = max_abs_count(annotated, config);
  if (magnitude(config.penalty) <= max) {
    throw Error(Errc::PenaltyTooSmall,
                "|penalty| " + std::to_string(magnitude(config.penalty)) +
                    " does not exceed the maximum |count| " + std::to_string(max));
  }

  std::vector<Rule> deny_rules;
  for (const Rule& r : rules) {
    if (r.constraint == Constraint::deny) deny_rules.push_back(r);
  }
  const auto matches = matching_edges(deny_rules, annotated);

  ModelInputGraph result{annotated, {}};
  for (const Rule& rule : deny_rules) {
    const auto& hits = matches.at(rule.id);
    if (hits.empty()) continue;
    PenaltyRecord record{rule.id, {}, hits};
    for (EdgeId e : hits) record.vertices.push_back(annotated.edge(e).dst);
    sort_unique(record.vertices);
    for (VertexId v : record.vertices) {
      const auto& incident = annotated.incident_edges(v);
      record.edges.insert(record.edges.end(), incident.begin(), incident.end());
    }
    sort_unique(record.edges);

    for (VertexId v : record.vertices) {
      result.graph.set_vertex_property(v, config.count_key, config.penalty);
    }
    for (EdgeId e : record.edges) {
      result.graph.set_edge_property(e, config.count_key, config.penalty);
    }
    result.provenance.push_back(std::move(record));
  }
  return result;
}

ModelInputGraph build_model_input(const PropertyGraph& sense_graph,
                                  const std::vector<Rule>& rules,
                                  const TransformConfig& config) {
  for (const Rule& rule : rules) {
    if (const auto meta = validate_meta(rule); !meta.ok()) {
      throw Error(Errc::InvalidRule, "rule '" + rule.id + "': " + meta.violations.front());
    }
  }
  const PropertyGraph vertex_counts = compute_vertex_counts(sense_graph, config);
  const PropertyGraph counted = compute_edge_counts(vertex_counts, config);
  return apply_rule_constraints(counted, rules, config);
}

}  // namespace irskg
