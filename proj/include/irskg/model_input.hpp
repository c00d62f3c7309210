#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irskg/graph.hpp"
#include "irskg/rules.hpp"

namespace irskg {

inline constexpr std::int64_t kDefaultPenalty = -1'000'000;

struct TransformConfig {
  std::int64_t penalty = kDefaultPenalty;
  std::string count_key = "count";

  /// Throws Errc::InvalidConfig unless penalty < 0 and count_key is non-empty.
  void validate() const;
};

/// Elements a single deny rule forced to the penalty value.
struct PenaltyRecord {
  std::string rule_id;
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;

  friend bool operator==(const PenaltyRecord&, const PenaltyRecord&) = default;
};

struct ModelInputGraph {
  PropertyGraph graph;
  std::vector<PenaltyRecord> provenance;

  friend bool operator==(const ModelInputGraph&, const ModelInputGraph&) = default;
};

/// count(v) = degree(v) on every vertex, overwriting any existing count.
PropertyGraph compute_vertex_counts(const PropertyGraph& graph,
                                    const TransformConfig& config = {});

/// count(e) = count(src) + count(dst). Throws Errc::MissingVertexCounts when
/// an endpoint has no integer count.
PropertyGraph compute_edge_counts(const PropertyGraph& annotated,
                                  const TransformConfig& config = {});

/// Largest |count| over all annotated vertices and edges.
std::uint64_t max_abs_count(const PropertyGraph& annotated, const TransformConfig& config);

/// For each deny rule, every matched edge and its target vertex take the
/// penalty count. A penalized vertex makes every edge touching it ignored
/// as well, so those edges take the penalty too. Allow rules change nothing.
///
/// Throws Errc::PenaltyTooSmall when |penalty| <= max_abs_count(annotated).
ModelInputGraph apply_rule_constraints(const PropertyGraph& annotated,
                                       const std::vector<Rule>& rules,
                                       const TransformConfig& config = {});

/// Vertex counts, edge counts, then rule penalties, on a copy of the input.
ModelInputGraph build_model_input(const PropertyGraph& sense_graph,
                                  const std::vector<Rule>& rules,
                                  const TransformConfig& config = {});

}  // namespace irskg
