#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "irskg/graph.hpp"

namespace irskg {

/// Property holding a record's original wire id when it differs from the
/// internal id assigned on import.
inline constexpr std::string_view kExternalIdKey = "_ext_id";

/// Writes one compact JSON object per line: all node records, then all
/// relationship records, each in ascending id order. Returns lines written.
///
///   {"type":"node","id":"0","labels":["IP1"],"properties":{...}}
///   {"type":"relationship","id":"0","label":"SYN","start":{...},"end":{...},
///    "properties":{...}}
///
/// Throws Errc::SinkWriteFailure if the stream goes bad.
std::size_t export_jsonl(const PropertyGraph& graph, std::ostream& sink);

std::string export_jsonl_string(const PropertyGraph& graph);

struct ImportWarning {
  std::size_t line = 0;
  std::string message;
};

/// Rebuilds a graph from node and relationship records.
///
/// Internal ids are assigned in record order. When a record's wire id differs
/// from its new internal id, the wire id is kept under `_ext_id` unless the
/// record already carries one. Relationship endpoints resolve by wire id and
/// may precede their nodes. Tolerated deviations, each reported as a warning:
/// a repeated "start" key standing in for "end", endpoint-ref properties that
/// disagree with the node record, and endpoint-ref properties absent from the
/// node (moved onto the relationship). Blank lines and a leading
/// `{"_format":"irskg-1"}` header are skipped.
PropertyGraph import_jsonl(std::istream& source,
                           std::vector<ImportWarning>* warnings = nullptr);

PropertyGraph import_jsonl_string(const std::string& text,
                                  std::vector<ImportWarning>* warnings = nullptr);

/// Exports to a sibling temp file and renames it over `path`.
void snapshot_save(const PropertyGraph& graph, const std::filesystem::path& path);

PropertyGraph snapshot_load(const std::filesystem::path& path,
                            std::vector<ImportWarning>* warnings = nullptr);

}  // namespace irskg
