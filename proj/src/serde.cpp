#include "irskg/serde.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "irskg/error.hpp"
#include "json_props.hpp"

namespace irskg {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kFormatTag = "irskg-1";

ordered_json endpoint_ref(const Vertex& v) {
  ordered_json ref;
  ref["id"] = std::to_string(v.id.value());
  ref["labels"] = ordered_json::array({v.label});
  ref["properties"] = detail::properties_to_json(v.properties);
  return ref;
}

// Finds keys of the outermost object. Returns (offset of opening quote, name).
std::vector<std::pair<std::size_t, std::string>> top_level_keys(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> keys;
  int depth = 0;
  bool in_string = false;
  std::size_t string_begin = 0;
  std::optional<std::pair<std::size_t, std::size_t>> candidate;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
        if (depth == 1) candidate = std::make_pair(string_begin, i);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        string_begin = i;
        candidate.reset();
        break;
      case '{':
      case '[':
        ++depth;
        candidate.reset();
        break;
      case '}':
      case ']':
        --depth;
        candidate.reset();
        break;
      case ':':
        if (depth == 1 && candidate) {
          keys.emplace_back(candidate->first,
                            std::string(text.substr(candidate->first + 1,
                                                    candidate->second - candidate->first - 1)));
        }
        candidate.reset();
        break;
      case ' ':
      case '\t':
        break;
      default:
        candidate.reset();
    }
  }
  return keys;
}

// Rewrites the second top-level "start" to "end" when "end" is absent.
bool repair_duplicate_start(std::string& line) {
  if (line.find("\"start\"") == line.rfind("\"start\"")) return false;
  std::vector<std::size_t> starts;
  for (const auto& [offset, name] : top_level_keys(line)) {
    if (name == "end") return false;
    if (name == "start") starts.push_back(offset);
  }
  if (starts.size() != 2) return false;
  line.replace(starts[1], 7, "\"end\"");
  return true;
}

std::string wire_id(const json& record, const char* what, std::size_t line) {
  auto it = record.find("id");
  if (it == record.end()) {
    throw Error(Errc::BadJson, std::string(what) + " has no id", line);
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return it->dump();
  throw Error(Errc::BadJson, std::string(what) + " id must be a string", line);
}

PropertyMap read_properties(const json& record, std::size_t line) {
  PropertyMap out;
  auto it = record.find("properties");
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_object()) throw Error(Errc::BadJson, "properties must be an object", line);
  for (const auto& [key, value] : it->items()) {
    auto pv = detail::property_from_json(value);
    if (!pv) {
      throw Error(Errc::UnsupportedValue,
                  "property '" + key + "' is not a string, integer, float or boolean",
                  line);
    }
    out.emplace(key, std::move(*pv));
  }
  return out;
}

struct PendingRelationship {
  std::size_t line = 0;
  std::string wire;
  std::string label;
  std::string start;
  std::string end;
  PropertyMap start_props;
  PropertyMap end_props;
  PropertyMap props;
};

class Importer {
 public:
  explicit Importer(std::vector<ImportWarning>* warnings) : warnings_(warnings) {}

  void feed(std::string line, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) return;
    const bool repaired = repair_duplicate_start(line);

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(Errc::BadJson, e.what(), line_no);
    }
    if (!record.is_object()) throw Error(Errc::BadJson, "record is not an object", line_no);
    const bool first = !seen_record_;
    seen_record_ = true;

    if (record.contains("_format")) {
      const json& tag = record["_format"];
      if (!first) throw Error(Errc::UnknownRecordType, "format header after data", line_no);
      if (!tag.is_string() || tag.get<std::string>() != kFormatTag) {
        throw Error(Errc::BadJson, "unsupported format " + tag.dump(), line_no);
      }
      return;
    }
    auto type = record.find("type");
    if (type == record.end() || !type->is_string()) {
      throw Error(Errc::UnknownRecordType, "record has no string \"type\"", line_no);
    }
    if (*type == "node") {
      node(record, line_no);
    } else if (*type == "relationship") {
      if (repaired) warn(line_no, "second \"start\" read as \"end\"");
      relationship(record, line_no);
    } else {
      throw Error(Errc::UnknownRecordType, "unknown record type " + type->dump(), line_no);
    }
  }

  PropertyGraph finish() {
    for (PendingRelationship& rel : pending_) resolve(rel);
    graph_.check_integrity();
    return std::move(graph_);
  }

 private:
  void warn(std::size_t line, std::string message) {
    if (warnings_) warnings_->push_back({line, std::move(message)});
  }

  static std::string read_label(const json& record, std::size_t line) {
    auto labels = record.find("labels");
    if (labels == record.end() || !labels->is_array() || labels->size() != 1 ||
        !(*labels)[0].is_string()) {
      throw Error(Errc::MultiLabel, "node must carry exactly one string label", line);
    }
    return (*labels)[0].get<std::string>();
  }

  void node(const json& record, std::size_t line) {
    std::string wire = wire_id(record, "node", line);
    std::string label = read_label(record, line);
    PropertyMap props = read_properties(record, line);
    if (node_ids_.contains(wire)) {
      throw Error(Errc::DuplicateExternalId, "node id \"" + wire + "\" repeated", line);
    }
    const VertexId id = graph_.next_vertex_id();
    if (wire != std::to_string(id.value()) && !props.contains(kExternalIdKey)) {
      props.emplace(std::string(kExternalIdKey), wire);
    }
    try {
      graph_.add_vertex(std::move(label), std::move(props));
    } catch (const Error& e) {
      throw Error(e.code(), e.message(), line);
    }
    node_ids_.emplace(std::move(wire), id);
  }

  void relationship(const json& record, std::size_t line) {
    PendingRelationship rel;
    rel.line = line;
    rel.wire = wire_id(record, "relationship", line);
    if (!relationship_ids_.insert(rel.wire).second) {
      throw Error(Errc::DuplicateExternalId,
                  "relationship id \"" + rel.wire + "\" repeated", line);
    }
    auto label = record.find("label");
    if (label == record.end() || !label->is_string()) {
      throw Error(Errc::MultiLabel, "relationship must carry one string label", line);
    }
    rel.label = label->get<std::string>();
    for (const char* side : {"start", "end"}) {
      auto ref = record.find(side);
      if (ref == record.end() || !ref->is_object()) {
        throw Error(Errc::DanglingEndpointRef,
                    std::string("relationship has no \"") + side + "\" object", line);
      }
      std::string target = wire_id(*ref, side, line);
      PropertyMap ref_props = read_properties(*ref, line);
      if (std::string_view(side) == "start") {
        rel.start = std::move(target);
        rel.start_props = std::move(ref_props);
      } else {
        rel.end = std::move(target);
        rel.end_props = std::move(ref_props);
      }
    }
    rel.props = read_properties(record, line);
    pending_.push_back(std::move(rel));
  }

  VertexId endpoint(const std::string& wire, std::size_t line) const {
    auto it = node_ids_.find(wire);
    if (it == node_ids_.end()) {
      throw Error(Errc::DanglingEndpointRef, "no node with id \"" + wire + "\"", line);
    }
    return it->second;
  }

  // Ref properties are redundant copies of the node's; anything the node
  // lacks belongs to the relationship.
  void reconcile(const PropertyMap& ref_props, VertexId node, PropertyMap& rel_props,
                 std::size_t line) {
    const PropertyMap& node_props = graph_.vertex(node).properties;
    for (const auto& [key, value] : ref_props) {
      auto it = node_props.find(key);
      if (it != node_props.end()) {
        if (it->second != value) {
          warn(line, "endpoint property '" + key + "' disagrees with node record");
        }
      } else if (!rel_props.contains(key)) {
        rel_props.emplace(key, value);
        warn(line, "endpoint property '" + key + "' moved onto relationship");
      }
    }
  }

  void resolve(PendingRelationship& rel) {
    const VertexId src = endpoint(rel.start, rel.line);
    const VertexId dst = endpoint(rel.end, rel.line);
    reconcile(rel.start_props, src, rel.props, rel.line);
    reconcile(rel.end_props, dst, rel.props, rel.line);
    const EdgeId id = graph_.next_edge_id();
    if (rel.wire != std::to_string(id.value()) && !rel.props.contains(kExternalIdKey)) {
      rel.props.emplace(std::string(kExternalIdKey), rel.wire);
    }
    try {
      graph_.add_edge(src, dst, std::move(rel.label), std::move(rel.props));
    } catch (const Error& e) {
      throw Error(e.code(), e.message(), rel.line);
    }
  }

  std::vector<ImportWarning>* warnings_;
  PropertyGraph graph_;
  std::unordered_map<std::string, VertexId> node_ids_;
  std::set<std::string> relationship_ids_;
  std::vector<PendingRelationship> pending_;
  bool seen_record_ = false;
};

}  // namespace

std::size_t export_jsonl(const PropertyGraph& graph, std::ostream& sink) {
  std::size_t lines = 0;
  auto emit = [&](const ordered_json& record) {
    sink << record.dump() << '\n';
    if (!sink) throw Error(Errc::SinkWriteFailure, "write failed after " +
                                                       std::to_string(lines) + " lines");
    ++lines;
  };
  for (const Vertex& v : graph.vertices()) {
    ordered_json record;
    record["type"] = "node";
    record["id"] = std::to_string(v.id.value());
    record["labels"] = ordered_json::array({v.label});
    record["properties"] = detail::properties_to_json(v.properties);
    emit(record);
  }
  for (const Edge& e : graph.edges()) {
    ordered_json record;
    record["type"] = "relationship";
    record["id"] = std::to_string(e.id.value());
    record["label"] = e.label;
    record["start"] = endpoint_ref(graph.vertex(e.src));
    record["end"] = endpoint_ref(graph.vertex(e.dst));
    record["properties"] = detail::properties_to_json(e.properties);
    emit(record);
  }
  sink.flush();
  if (!sink) throw Error(Errc::SinkWriteFailure, "flush failed");
  return lines;
}

std::string export_jsonl_string(const PropertyGraph& graph) {
  std::ostringstream out;
  export_jsonl(graph, out);
  return out.str();
}

PropertyGraph import_jsonl(std::istream& source, std::vector<ImportWarning>* warnings) {
  Importer importer(warnings);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) importer.feed(std::move(line), ++line_no);
  if (source.bad()) throw Error(Errc::IoFailure, "read failed", line_no);
  return importer.finish();
}

PropertyGraph import_jsonl_string(const std::string& text,
                                  std::vector<ImportWarning>* warnings) {
  std::istringstream in(text);
  return import_jsonl(in, warnings);
}

void snapshot_save(const PropertyGraph& graph, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, "cannot write " + tmp.string());
    try {
      export_jsonl(graph, out);
    } catch (const Error& e) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(Errc::IoFailure, e.message());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(Errc::IoFailure, "cannot replace " + path.string() + ": " + ec.message());
  }
}

PropertyGraph snapshot_load(const std::filesystem::path& path,
                            std::vector<ImportWarning>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  return import_jsonl(in, warnings);
}

}  // namespace irskg
