#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "irskg/graph.hpp"

namespace irskg {

inline constexpr std::string_view kWildcard = "*";

/// Selects the "who" or "which" side of a rule: a literal address, or the
/// wildcard, plus conjunctive equality filters on vertex properties.
struct VertexSelector {
  std::string label_match;
  PropertyMap property_filters;

  bool is_wildcard() const { return label_match == kWildcard; }

  friend bool operator==(const VertexSelector&, const VertexSelector&) = default;
};

enum class Constraint { allow, deny };

std::string_view to_string(Constraint c);
std::optional<Constraint> parse_constraint(std::string_view text);

/// A rule of engagement: source -[action]-> target under a constraint.
struct Rule {
  std::string id;
  VertexSelector source;
  VertexSelector target;
  std::string action;
  Constraint constraint = Constraint::deny;
  PropertyMap extra_properties;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Per-system specialization of the rule meta-template.
struct RuleTemplate {
  std::string system_id;
  std::set<std::string> allowed_actions;
  std::set<std::string> required_vertex_keys;
  std::set<Constraint> allowed_constraints;
};

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Parsing. All parse failures throw irskg::Error.

/// One rule object. Canonicalizes "any" to "*" and normalizes the action.
Rule parse_rule(const nlohmann::json& doc);

/// A `{"rules":[...]}` document. Rejects duplicate ids and unknown keys.
std::vector<Rule> parse_rules_document(const nlohmann::json& doc);
std::vector<Rule> load_rules_file(const std::filesystem::path& path);

RuleTemplate parse_template(const nlohmann::json& doc);
RuleTemplate load_template_file(const std::filesystem::path& path);

/// Canonical JSON form of a rule; parse_rule(render_rule(r)) == r.
nlohmann::ordered_json render_rule(const Rule& rule);

/// Holds exactly one template per system id.
class TemplateRegistry {
 public:
  void add(RuleTemplate tmpl);
  const RuleTemplate* find(std::string_view system_id) const;
  std::size_t size() const { return templates_.size(); }

 private:
  std::map<std::string, RuleTemplate, std::less<>> templates_;
};

// Validation.

/// Structural two-vertex/one-edge checks that hold for every system.
ValidationResult validate_meta(const Rule& rule);

/// Meta checks plus the template's verb, constraint and key restrictions.
ValidationResult validate_rule(const Rule& rule, const RuleTemplate& tmpl);

// Graph interplay.

inline constexpr std::string_view kRuleEdgeLabel = "COMMUNICATES_TO";
inline constexpr std::string_view kRuleIdentityKey = "ip_address";

struct MaterializedRule {
  VertexId source;
  EdgeId edge;
  VertexId target;
};

/// Stores the rule as two NetworkEndpoint vertices keyed by `ip_address`
/// and one COMMUNICATES_TO edge carrying action, constraint and id.
MaterializedRule rule_to_graph(const Rule& rule, PropertyGraph& graph);

/// True when `vertex` satisfies the selector: wildcard, or `ip`/`ip_address`
/// equal to the literal, and every filter holding by equality.
bool selector_matches(const VertexSelector& selector, const Vertex& vertex);

bool match_rule(const Rule& rule, const PropertyGraph& graph, EdgeId edge);

/// Every rule id mapped to its matching edges in ascending id order.
std::map<std::string, std::vector<EdgeId>> matching_edges(
    const std::vector<Rule>& rules, const PropertyGraph& graph);

}  // namespace irskg
