#include "irskg/rules.hpp"

#include <fstream>

#include "irskg/error.hpp"
#include "irskg/log_ingest.hpp"
#include "json_props.hpp"

namespace irskg {

using nlohmann::json;

namespace {

constexpr std::string_view kSourceFilterPrefix = "source.";
constexpr std::string_view kTargetFilterPrefix = "target.";

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known,
                         std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (std::string_view k : known) found = found || key == k;
    if (!found) {
      throw Error(Errc::UnknownKey,
                  "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

const json& require(const json& obj, const char* field, std::string_view where) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw Error(Errc::MissingField,
                std::string(field) + " missing from " + std::string(where));
  }
  return *it;
}

std::string require_string(const json& obj, const char* field, std::string_view where) {
  const json& value = require(obj, field, where);
  if (!value.is_string()) {
    throw Error(Errc::BadFieldType,
                std::string(field) + " in " + std::string(where) + " must be a string");
  }
  return value.get<std::string>();
}

PropertyMap parse_property_object(const json& obj, std::string_view where) {
  if (!obj.is_object()) {
    throw Error(Errc::BadFieldType, std::string(where) + " must be an object");
  }
  PropertyMap out;
  for (const auto& [key, value] : obj.items()) {
    auto pv = detail::property_from_json(value);
    if (!pv) {
      throw Error(Errc::BadFieldType,
                  "value of '" + key + "' in " + std::string(where) + " is not a scalar");
    }
    out.emplace(key, std::move(*pv));
  }
  return out;
}

std::string canonical_selector_label(std::string label) {
  if (lowercase(label) == "any") return std::string(kWildcard);
  return label;
}

VertexSelector parse_selector(const json& doc, const char* field) {
  if (doc.is_string()) return {canonical_selector_label(doc.get<std::string>()), {}};
  if (!doc.is_object()) {
    throw Error(Errc::BadFieldType,
                std::string(field) + " must be a string or {label, filters}");
  }
  reject_unknown_keys(doc, {"label", "filters"}, field);
  VertexSelector selector;
  selector.label_match = canonical_selector_label(require_string(doc, "label", field));
  if (auto it = doc.find("filters"); it != doc.end()) {
    selector.property_filters = parse_property_object(*it, std::string(field) + ".filters");
  }
  return selector;
}

json render_selector(const VertexSelector& selector) {
  if (selector.property_filters.empty()) return selector.label_match;
  json out;
  out["label"] = selector.label_match;
  out["filters"] = detail::properties_to_json(selector.property_filters);
  return out;
}

std::set<std::string> parse_string_set(const json& obj, const char* field,
                                       bool normalize) {
  const json& arr = require(obj, field, "template");
  if (!arr.is_array()) {
    throw Error(Errc::BadFieldType, std::string(field) + " must be an array of strings");
  }
  std::set<std::string> out;
  for (const json& item : arr) {
    if (!item.is_string()) {
      throw Error(Errc::BadFieldType,
                  std::string(field) + " must be an array of strings");
    }
    out.insert(normalize ? normalize_action(item.get<std::string>())
                         : item.get<std::string>());
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::BadJson, path.string() + ": " + e.what());
  }
}

bool is_reserved_edge_key(std::string_view key) {
  return key == "action" || key == "constraint" || key == "id" ||
         key.starts_with(kSourceFilterPrefix) || key.starts_with(kTargetFilterPrefix);
}

}  // namespace

std::string_view to_string(Constraint c) {
  return c == Constraint::allow ? "allow" : "deny";
}

std::optional<Constraint> parse_constraint(std::string_view text) {
  const std::string lower = lowercase(text);
  if (lower == "allow") return Constraint::allow;
  if (lower == "deny") return Constraint::deny;
  return std::nullopt;
}

Rule parse_rule(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::BadFieldType, "rule must be a JSON object");
  reject_unknown_keys(doc, {"id", "source", "target", "action", "constraint", "properties"},
                      "rule");
  Rule rule;
  rule.id = require_string(doc, "id", "rule");
  const std::string where = "rule " + rule.id;
  rule.source = parse_selector(require(doc, "source", where), "source");
  rule.target = parse_selector(require(doc, "target", where), "target");
  rule.action = normalize_action(require_string(doc, "action", where));

  const json& constraint = require(doc, "constraint", where);
  const auto parsed = constraint.is_string()
                          ? parse_constraint(constraint.get<std::string>())
                          : std::nullopt;
  if (!parsed) {
    throw Error(Errc::BadConstraint,
                "constraint " + constraint.dump() + " in " + where +
                    " is not \"allow\" or \"deny\"");
  }
  rule.constraint = *parsed;

  if (auto it = doc.find("properties"); it != doc.end()) {
    rule.extra_properties = parse_property_object(*it, where + " properties");
    for (const auto& [key, value] : rule.extra_properties) {
      if (is_reserved_edge_key(key)) {
        throw Error(Errc::BadFieldType,
                    "property '" + key + "' in " + where + " is reserved");
      }
    }
  }
  return rule;
}

std::vector<Rule> parse_rules_document(const json& doc) {
  if (!doc.is_object()) {
    throw Error(Errc::BadFieldType, "rule file must be a JSON object");
  }
  reject_unknown_keys(doc, {"rules"}, "rule file");
  const json& rules = require(doc, "rules", "rule file");
  if (!rules.is_array()) throw Error(Errc::BadFieldType, "\"rules\" must be an array");

  std::vector<Rule> out;
  std::set<std::string, std::less<>> seen;
  for (const json& item : rules) {
    Rule rule = parse_rule(item);
    if (!seen.insert(rule.id).second) {
      throw Error(Errc::DuplicateRuleId, "rule id '" + rule.id + "' appears twice");
    }
    out.push_back(std::move(rule));
  }
  return out;
}

std::vector<Rule> load_rules_file(const std::filesystem::path& path) {
  return parse_rules_document(read_json_file(path));
}

RuleTemplate parse_template(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::BadFieldType, "template must be a JSON object");
  reject_unknown_keys(
      doc, {"system_id", "allowed_actions", "allowed_constraints", "required_vertex_keys"},
      "template");
  RuleTemplate tmpl;
  tmpl.system_id = require_string(doc, "system_id", "template");
  tmpl.allowed_actions = parse_string_set(doc, "allowed_actions", true);
  if (tmpl.allowed_actions.empty()) {
    throw Error(Errc::BadFieldType, "allowed_actions must be non-empty");
  }
  for (const std::string& c : parse_string_set(doc, "allowed_constraints", false)) {
    auto parsed = parse_constraint(c);
    if (!parsed) {
      throw Error(Errc::BadConstraint, "template constraint \"" + c + "\" is invalid");
    }
    tmpl.allowed_constraints.insert(*parsed);
  }
  if (doc.contains("required_vertex_keys")) {
    tmpl.required_vertex_keys = parse_string_set(doc, "required_vertex_keys", false);
  }
  return tmpl;
}

RuleTemplate load_template_file(const std::filesystem::path& path) {
  return parse_template(read_json_file(path));
}

nlohmann::ordered_json render_rule(const Rule& rule) {
  nlohmann::ordered_json out;
  out["id"] = rule.id;
  out["source"] = render_selector(rule.source);
  out["target"] = render_selector(rule.target);
  out["action"] = rule.action;
  out["constraint"] = to_string(rule.constraint);
  if (!rule.extra_properties.empty()) {
    out["properties"] = detail::properties_to_json(rule.extra_properties);
  }
  return out;
}

void TemplateRegistry::add(RuleTemplate tmpl) {
  if (templates_.contains(tmpl.system_id)) {
    throw Error(Errc::DuplicateTemplate,
                "system '" + tmpl.system_id + "' already has a template");
  }
  std::string key = tmpl.system_id;
  templates_.emplace(std::move(key), std::move(tmpl));
}

const RuleTemplate* TemplateRegistry::find(std::string_view system_id) const {
  auto it = templates_.find(system_id);
  return it == templates_.end() ? nullptr : &it->second;
}

ValidationResult validate_meta(const Rule& rule) {
  ValidationResult result;
  auto& v = result.violations;
  if (rule.id.empty()) v.push_back("rule id is empty");
  if (rule.source.label_match.empty()) v.push_back("source selector is empty");
  if (rule.target.label_match.empty()) v.push_back("target selector is empty");
  if (rule.action.empty()) v.push_back("action is empty");
  for (const auto* selector : {&rule.source, &rule.target}) {
    const char* side = selector == &rule.source ? "source" : "target";
    for (const auto& [key, value] : selector->property_filters) {
      if (key.empty()) v.push_back(std::string(side) + " filter has an empty key");
    }
  }
  return result;
}

ValidationResult validate_rule(const Rule& rule, const RuleTemplate& tmpl) {
  ValidationResult result = validate_meta(rule);
  auto& v = result.violations;
  const std::string action = normalize_action(rule.action);
  if (!action.empty() && !tmpl.allowed_actions.contains(action)) {
    v.push_back("action " + action + " not allowed by template " + tmpl.system_id);
  }
  if (!tmpl.allowed_constraints.contains(rule.constraint)) {
    v.push_back("constraint " + std::string(to_string(rule.constraint)) +
                " not allowed by template " + tmpl.system_id);
  }
  for (const std::string& key : tmpl.required_vertex_keys) {
    if (!rule.source.property_filters.contains(key)) {
      v.push_back("source selector lacks required key '" + key + "'");
    }
    if (!rule.target.property_filters.contains(key)) {
      v.push_back("target selector lacks required key '" + key + "'");
    }
  }
  return result;
}

MaterializedRule rule_to_graph(const Rule& rule, PropertyGraph& graph) {
  if (const auto meta = validate_meta(rule); !meta.ok()) {
    throw Error(Errc::InvalidRule, "rule '" + rule.id + "': " + meta.violations.front());
  }
  const std::string key(kRuleIdentityKey);
  const VertexId src = graph
                           .upsert_vertex(std::string(kEndpointLabel), key,
                                          {{key, rule.source.label_match}})
                           .id;
  const VertexId dst = graph
                           .upsert_vertex(std::string(kEndpointLabel), key,
                                          {{key, rule.target.label_match}})
                           .id;

  PropertyMap props = rule.extra_properties;
  for (const auto& [k, value] : rule.source.property_filters) {
    props.insert_or_assign(std::string(kSourceFilterPrefix) + k, value);
  }
  for (const auto& [k, value] : rule.target.property_filters) {
    props.insert_or_assign(std::string(kTargetFilterPrefix) + k, value);
  }
  props.insert_or_assign("action", normalize_action(rule.action));
  props.insert_or_assign("constraint", std::string(to_string(rule.constraint)));
  props.insert_or_assign("id", rule.id);

  // Re-materializing the same rule updates its edge in place.
  const PropertyValue rule_id{rule.id};
  for (EdgeId e : graph.edges_between(src, dst)) {
    const Edge& edge = graph.edge(e);
    auto id_it = edge.properties.find("id");
    if (edge.src == src && edge.label == kRuleEdgeLabel &&
        id_it != edge.properties.end() && id_it->second == rule_id) {
      for (auto& [k, value] : props) graph.set_edge_property(e, k, std::move(value));
      return {src, e, dst};
    }
  }
  const EdgeId edge = graph.add_edge(src, dst, std::string(kRuleEdgeLabel), std::move(props));
  return {src, edge, dst};
}

bool selector_matches(const VertexSelector& selector, const Vertex& vertex) {
  if (!selector.is_wildcard()) {
    bool identity = false;
    for (const char* key : {"ip", "ip_address"}) {
      auto it = vertex.properties.find(key);
      if (it == vertex.properties.end()) continue;
      const std::string* text = as_text(it->second);
      identity = identity || (text && *text == selector.label_match);
    }
    if (!identity) return false;
  }
  for (const auto& [key, value] : selector.property_filters) {
    auto it = vertex.properties.find(key);
    if (it == vertex.properties.end() || it->second != value) return false;
  }
  return true;
}

bool match_rule(const Rule& rule, const PropertyGraph& graph, EdgeId edge_id) {
  const Edge& edge = graph.edge(edge_id);
  return edge.label == normalize_action(rule.action) &&
         selector_matches(rule.source, graph.vertex(edge.src)) &&
         selector_matches(rule.target, graph.vertex(edge.dst));
}

std::map<std::string, std::vector<EdgeId>> matching_edges(const std::vector<Rule>& rules,
                                                          const PropertyGraph& graph) {
  std::map<std::string, std::vector<EdgeId>> out;
  for (const Rule& rule : rules) {
    auto& hits = out[rule.id];
    hits.clear();
    const std::string action = normalize_action(rule.action);
    for (const Edge& edge : graph.edges()) {
      if (edge.label == action && selector_matches(rule.source, graph.vertex(edge.src)) &&
          selector_matches(rule.target, graph.vertex(edge.dst))) {
        hits.push_back(edge.id);
      }
    }
  }
  return out;
}

}  // namespace irskg
