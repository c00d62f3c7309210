#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "irskg/graph.hpp"
#include "irskg/log_ingest.hpp"
#include "irskg/rules.hpp"

namespace irskg::testing {

// Four-line TCP handshake log between two hosts,
// with trailing blanks on the first two lines.
inline const std::vector<std::string>& case_study_log() {
  static const std::vector<std::string> lines{
      "[2023-10-25 11:10:45] 192.168.1.100 -> 192.168.1.101: TCP SYN ",
      "[2023-10-25 11:10:46] 192.168.1.101 -> 192.168.1.100: TCP SYN-ACK ",
      "[2023-10-25 11:10:47] 192.168.1.100 -> 192.168.1.101: TCP ACK",
      "[2023-10-25 11:10:48] 192.168.1.101 -> 192.168.1.100: TCP ACK",
  };
  return lines;
}

inline constexpr const char* kRouterRuleId = "6ec4f95c-f4e3-4516-92c1-172cec275696";

// Deny any source from performing ADD on the router 10.10.10.10.
inline nlohmann::json router_rule_doc() {
  return nlohmann::json{{"id", kRouterRuleId},
                        {"source", "*"},
                        {"target", "10.10.10.10"},
                        {"action", "ADD"},
                        {"constraint", "deny"}};
}

inline Rule router_rule() { return parse_rule(router_rule_doc()); }

inline RuleTemplate permissive_template() {
  return parse_template(nlohmann::json{{"system_id", "network-infrastructure"},
                                       {"allowed_actions", {"ADD", "DELETE", "SYN"}},
                                       {"allowed_constraints", {"allow", "deny"}},
                                       {"required_vertex_keys", nlohmann::json::array()}});
}

inline PropertyGraph case_study_graph() {
  PropertyGraph g;
  ingest_lines(g, case_study_log());
  return g;
}

// Sense graph plus one ADD from 192.168.1.100 to the router.
inline PropertyGraph router_scenario_graph() {
  PropertyGraph g = case_study_graph();
  std::vector<std::string> extra{"[2023-10-25 11:11:02] 192.168.1.100 -> 10.10.10.10: TCP ADD"};
  ingest_lines(g, extra);
  return g;
}

}  // namespace irskg::testing
