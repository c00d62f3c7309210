#include "irskg/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "irskg/error.hpp"
#include "irskg/log_ingest.hpp"
#include "irskg/model_input.hpp"
#include "irskg/rules.hpp"
#include "irskg/serde.hpp"

namespace irskg {

namespace {

using nlohmann::ordered_json;

struct PipelineConfig {
  std::string identity_key = "ip";
  std::string label_policy = "indexed";
  std::string on_error = "skip";
  std::optional<std::int64_t> penalty;
  std::string in_path;
  std::string out_path;
  std::string rules_path;
  std::string template_path;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::int64_t parse_penalty(std::string_view text, std::string_view origin) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(std::string(origin) + ": \"" + std::string(text) +
                     "\" is not a 64-bit integer");
  }
  return value;
}

TransformConfig transform_config(const PipelineConfig& cfg) {
  TransformConfig config;
  if (cfg.penalty) {
    config.penalty = *cfg.penalty;
  } else if (const char* env = std::getenv("IRSKG_PENALTY"); env && *env) {
    config.penalty = parse_penalty(env, "IRSKG_PENALTY");
  }
  return config;
}

ordered_json report_json(const IngestReport& report) {
  ordered_json out;
  out["lines_read"] = report.lines_read;
  out["lines_rejected"] = report.lines_rejected;
  out["vertices_created"] = report.vertices_created;
  out["vertices_merged"] = report.vertices_merged;
  out["edges_created"] = report.edges_created;
  out["rejects"] = ordered_json::array();
  for (const IngestReject& r : report.rejects) {
    out["rejects"].push_back({{"line", r.line}, {"error", r.error}});
  }
  return out;
}

std::vector<std::uint64_t> raw_ids(const auto& ids) {
  std::vector<std::uint64_t> out;
  for (auto id : ids) out.push_back(id.value());
  return out;
}

int cmd_ingest(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  IngestOptions options;
  options.identity_key = cfg.identity_key;
  options.label_policy =
      cfg.label_policy == "constant" ? LabelPolicy::constant : LabelPolicy::indexed;
  options.on_error = cfg.on_error == "abort" ? OnError::abort : OnError::skip;

  std::ifstream in(cfg.in_path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + cfg.in_path);
  PropertyGraph graph;
  try {
    const IngestReport report = ingest_stream(graph, in, options);
    snapshot_save(graph, cfg.out_path);
    out << report_json(report).dump(2) << '\n';
    for (const IngestReject& r : report.rejects) {
      err << cfg.in_path << ':' << r.line << ": skipped: " << r.error << '\n';
    }
    return kExitOk;
  } catch (const IngestAborted& aborted) {
    ordered_json report = report_json(aborted.report());
    report["aborted_at_line"] = *aborted.line();
    out << report.dump(2) << '\n';
    err << cfg.in_path << ':' << *aborted.line() << ": aborted: " << aborted.message()
        << '\n';
    return kExitFailure;
  }
}

std::vector<Rule> load_rules(const std::string& path) {
  if (path.empty()) return {};
  return load_rules_file(path);
}

ordered_json validation_json(const std::vector<Rule>& rules,
                             const std::optional<RuleTemplate>& tmpl, std::size_t& failed) {
  ordered_json results = ordered_json::array();
  failed = 0;
  for (const Rule& rule : rules) {
    const ValidationResult v = tmpl ? validate_rule(rule, *tmpl) : validate_meta(rule);
    if (!v.ok()) ++failed;
    results.push_back({{"id", rule.id}, {"ok", v.ok()}, {"violations", v.violations}});
  }
  const std::size_t total = rules.size();
  ordered_json doc;
  doc["summary"] = failed == 0 ? std::to_string(total) + (total == 1 ? " rule ok" : " rules ok")
                               : std::to_string(failed) + " of " + std::to_string(total) +
                                     (total == 1 ? " rule failed" : " rules failed");
  doc["ok"] = total - failed;
  doc["failed"] = failed;
  if (tmpl) doc["template"] = tmpl->system_id;
  doc["results"] = std::move(results);
  return doc;
}

std::optional<RuleTemplate> load_template(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_template_file(path);
}

int cmd_rules_validate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<Rule> rules = load_rules(cfg.rules_path);
  const auto tmpl = load_template(cfg.template_path);
  std::size_t failed = 0;
  const ordered_json doc = validation_json(rules, tmpl, failed);
  out << doc.dump(2) << '\n';
  err << doc["summary"].get<std::string>() << '\n';
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_rules_apply(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<Rule> rules = load_rules(cfg.rules_path);
  const auto tmpl = load_template(cfg.template_path);
  std::size_t failed = 0;
  const ordered_json validation = validation_json(rules, tmpl, failed);
  if (failed != 0) {
    out << validation.dump(2) << '\n';
    err << "rules apply: " << validation["summary"].get<std::string>()
        << "; nothing applied\n";
    return kExitFailure;
  }

  PropertyGraph graph = snapshot_load(cfg.in_path);
  ordered_json applied = ordered_json::array();
  for (const Rule& rule : rules) {
    const MaterializedRule m = rule_to_graph(rule, graph);
    applied.push_back({{"id", rule.id},
                       {"source", m.source.value()},
                       {"edge", m.edge.value()},
                       {"target", m.target.value()}});
  }
  snapshot_save(graph, cfg.out_path);

  ordered_json doc;
  doc["applied"] = rules.size();
  doc["vertices"] = graph.vertex_count();
  doc["edges"] = graph.edge_count();
  doc["rules"] = std::move(applied);
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_transform(const PipelineConfig& cfg, std::ostream& out, std::ostream&) {
  const TransformConfig config = transform_config(cfg);
  const PropertyGraph sense = snapshot_load(cfg.in_path);
  const std::vector<Rule> rules = load_rules(cfg.rules_path);
  const ModelInputGraph model = build_model_input(sense, rules, config);
  snapshot_save(model.graph, cfg.out_path);

  ordered_json provenance = ordered_json::array();
  for (const PenaltyRecord& p : model.provenance) {
    provenance.push_back(
        {{"rule", p.rule_id}, {"vertices", raw_ids(p.vertices)}, {"edges", raw_ids(p.edges)}});
  }
  ordered_json doc;
  doc["penalty"] = config.penalty;
  doc["vertices"] = model.graph.vertex_count();
  doc["edges"] = model.graph.edge_count();
  doc["provenance"] = std::move(provenance);
  out << doc.dump(2) << '\n';
  return kExitOk;
}

ordered_json warnings_json(const std::vector<ImportWarning>& warnings) {
  ordered_json out = ordered_json::array();
  for (const ImportWarning& w : warnings) {
    out.push_back({{"line", w.line}, {"message", w.message}});
  }
  return out;
}

int cmd_import(const PipelineConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<ImportWarning> warnings;
  const PropertyGraph graph = snapshot_load(cfg.in_path, &warnings);
  snapshot_save(graph, cfg.out_path);
  ordered_json doc;
  doc["vertices"] = graph.vertex_count();
  doc["edges"] = graph.edge_count();
  doc["warnings"] = warnings_json(warnings);
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_export(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<ImportWarning> warnings;
  const PropertyGraph graph = snapshot_load(cfg.in_path, &warnings);
  for (const ImportWarning& w : warnings) {
    err << cfg.in_path << ':' << w.line << ": warning: " << w.message << '\n';
  }
  if (cfg.out_path.empty()) {
    export_jsonl(graph, out);
  } else {
    snapshot_save(graph, cfg.out_path);
  }
  return kExitOk;
}

int cmd_stats(const PipelineConfig& cfg, std::ostream& out, std::ostream&) {
  const PropertyGraph graph = snapshot_load(cfg.in_path);
  std::map<std::string, std::size_t> edge_labels;
  std::map<std::string, std::size_t> vertex_labels;
  for (const Edge& e : graph.edges()) ++edge_labels[e.label];
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  std::size_t total_degree = 0;
  for (const Vertex& v : graph.vertices()) {
    ++vertex_labels[v.label];
    const std::size_t d = graph.degree(v.id);
    min_degree = v.id.value() == 0 ? d : std::min(min_degree, d);
    max_degree = std::max(max_degree, d);
    total_degree += d;
  }
  ordered_json doc;
  doc["vertices"] = graph.vertex_count();
  doc["edges"] = graph.edge_count();
  doc["labels"] = edge_labels;
  doc["vertex_labels"] = vertex_labels;
  doc["degree"] = {
      {"min", min_degree},
      {"max", max_degree},
      {"mean", graph.empty() ? 0.0
                             : static_cast<double>(total_degree) /
                                   static_cast<double>(graph.vertex_count())}};
  if (vertex_labels.empty()) doc["vertex_labels"] = ordered_json::object();
  if (edge_labels.empty()) doc["labels"] = ordered_json::object();
  out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Security knowledge-graph pipeline: ingest flow logs, manage rules of "
               "engagement, and build model-input graphs.",
               "irskg"};
  app.require_subcommand(1);
  PipelineConfig cfg;

  auto existing = [](CLI::Option* opt) { return opt->check(CLI::ExistingFile); };

  auto* ingest = app.add_subcommand("ingest", "Parse flow logs into a graph snapshot");
  existing(ingest->add_option("--in", cfg.in_path, "Log file")->required());
  ingest->add_option("--out", cfg.out_path, "Snapshot to write")->required();
  ingest->add_option("--identity-key", cfg.identity_key, "Vertex identity property");
  ingest->add_option("--label-policy", cfg.label_policy, "Vertex labels")
      ->check(CLI::IsMember({"indexed", "constant"}));
  ingest->add_option("--on-error", cfg.on_error, "Bad line handling")
      ->check(CLI::IsMember({"skip", "abort"}));

  auto* rules = app.add_subcommand("rules", "Validate or apply rules of engagement");
  rules->require_subcommand(1);
  auto* validate = rules->add_subcommand("validate", "Check rules against a template");
  existing(validate->add_option("--rules", cfg.rules_path, "Rule file")->required());
  existing(validate->add_option("--template", cfg.template_path, "System template"));
  auto* apply = rules->add_subcommand("apply", "Store valid rules in a snapshot");
  existing(apply->add_option("--rules", cfg.rules_path, "Rule file")->required());
  existing(apply->add_option("--template", cfg.template_path, "System template"));
  existing(apply->add_option("--in", cfg.in_path, "Input snapshot")->required());
  apply->add_option("--out", cfg.out_path, "Snapshot to write")->required();

  auto* transform = app.add_subcommand("transform", "Build the model-input graph");
  existing(transform->add_option("--in", cfg.in_path, "Sense-graph snapshot")->required());
  existing(transform->add_option("--rules", cfg.rules_path, "Rule file"));
  transform->add_option("--out", cfg.out_path, "Snapshot to write")->required();
  transform->add_option("--penalty", cfg.penalty, "Penalty count (env IRSKG_PENALTY)");

  auto* import = app.add_subcommand("import", "Read a JSON-lines graph into a snapshot");
  existing(import->add_option("--in", cfg.in_path, "JSON-lines graph")->required());
  import->add_option("--out", cfg.out_path, "Snapshot to write")->required();

  auto* exporter = app.add_subcommand("export", "Write a snapshot as canonical JSON lines");
  existing(exporter->add_option("--in", cfg.in_path, "Snapshot")->required());
  exporter->add_option("--out", cfg.out_path, "Destination (default: stdout)");

  auto* stats = app.add_subcommand("stats", "Summarize a snapshot");
  existing(stats->add_option("--in", cfg.in_path, "Snapshot")->required());

  std::vector<const char*> argv{"irskg"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(cfg, out, err);
    if (validate->parsed()) return cmd_rules_validate(cfg, out, err);
    if (apply->parsed()) return cmd_rules_apply(cfg, out, err);
    if (transform->parsed()) return cmd_transform(cfg, out, err);
    if (import->parsed()) return cmd_import(cfg, out, err);
    if (exporter->parsed()) return cmd_export(cfg, out, err);
    if (stats->parsed()) return cmd_stats(cfg, out, err);
  } catch (const UsageError& e) {
    err << "irskg: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "irskg: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace irskg
