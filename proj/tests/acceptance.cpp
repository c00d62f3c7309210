// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "irskg/log_ingest.hpp"
#include "irskg/model_input.hpp"
#include "irskg/rules.hpp"
#include "irskg/serde.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/random_graphs.hpp"

namespace {

using namespace irskg;
namespace oracle = irskg::testing::oracle;
using Clock = std::chrono::steady_clock;

const std::filesystem::path kData = IRSKG_TEST_DATA_DIR;

// Collects the first few failure messages of a criterion.
struct Verdict {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::int64_t count_of(const PropertyMap& props) {
  const std::int64_t* v = as_int(props.at("count"));
  return v ? *v : std::numeric_limits<std::int64_t>::min();
}

void case_study_ingestion(Verdict& v) {
  const auto start = Clock::now();
  PropertyGraph g;
  const IngestReport report = ingest_lines(g, irskg::testing::case_study_log());
  const double elapsed = seconds_since(start);

  v.expect(report.lines_rejected == 0, "lines rejected");
  v.expect(g.vertex_count() == 2, "vertex count " + std::to_string(g.vertex_count()));
  v.expect(g.edge_count() == 4, "edge count " + std::to_string(g.edge_count()));
  const PropertyMap ip100{{"ip", "192.168.1.100"}};
  const PropertyMap ip101{{"ip", "192.168.1.101"}};
  if (g.vertex_count() == 2) {
    v.expect(g.vertex(VertexId{0}).properties == ip100, "vertex 0 is not 192.168.1.100");
    v.expect(g.vertex(VertexId{1}).properties == ip101, "vertex 1 is not 192.168.1.101");
  }
  const std::vector<std::string> labels{"SYN", "SYN_ACK", "ACK", "ACK"};
  const std::vector<std::string> times{"11:10:45", "11:10:46", "11:10:47", "11:10:48"};
  for (std::size_t i = 0; i < g.edge_count() && i < labels.size(); ++i) {
    const Edge& e = g.edges()[i];
    const bool forward = i % 2 == 0;
    v.expect(e.label == labels[i], "edge " + std::to_string(i) + " label " + e.label);
    v.expect(e.src == VertexId{forward ? 0u : 1u} && e.dst == VertexId{forward ? 1u : 0u},
             "edge " + std::to_string(i) + " direction");
    const PropertyMap expected{{"protocol", "TCP"},
                               {"time", times[i]},
                               {"time_date", std::int64_t{25}},
                               {"time_month", std::int64_t{10}},
                               {"time_year", std::int64_t{2023}}};
    v.expect(e.properties == expected, "edge " + std::to_string(i) + " properties");
  }
  v.expect(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
  v.detail = "2 vertices, 4 edges, " + std::to_string(elapsed * 1000.0) + " ms";
}

void count_transformation(Verdict& v) {
  const PropertyGraph g = irskg::testing::case_study_graph();
  const ModelInputGraph m = build_model_input(g, {});
  const oracle::Expected expected = oracle::pipeline(oracle::flatten(g), {}, kDefaultPenalty);
  for (const Vertex& vertex : m.graph.vertices()) {
    const std::int64_t c = count_of(vertex.properties);
    v.expect(c == 4, "vertex count " + std::to_string(c));
    v.expect(c == expected.vertex_counts[vertex.id.value()], "vertex disagrees with oracle");
  }
  for (const Edge& edge : m.graph.edges()) {
    const std::int64_t c = count_of(edge.properties);
    v.expect(c == 8, "edge count " + std::to_string(c));
    v.expect(c == expected.edge_counts[edge.id.value()], "edge disagrees with oracle");
  }
  v.detail = "vertex counts 4/4, edge counts 8 on all 4 edges";
}

void constraint_penalty(Verdict& v) {
  const PropertyGraph g = irskg::testing::router_scenario_graph();
  const std::vector<Rule> rules = load_rules_file(kData / "rule_r1.json");
  const ModelInputGraph m = build_model_input(g, rules);

  const auto router = g.find_vertices(std::nullopt, "ip", PropertyValue{"10.10.10.10"});
  const auto client = g.find_vertices(std::nullopt, "ip", PropertyValue{"192.168.1.100"});
  v.expect(router.size() == 1 && client.size() == 1, "scenario vertices missing");
  if (router.size() != 1 || client.size() != 1) return;

  const auto add_edges = g.edges_between(client[0], router[0]);
  v.expect(add_edges.size() == 1, "expected one ADD edge");
  v.expect(count_of(m.graph.vertex(router[0]).properties) == -1'000'000, "router count");
  for (EdgeId e : add_edges) {
    v.expect(count_of(m.graph.edge(e).properties) == -1'000'000, "ADD edge count");
  }
  const std::int64_t untouched = static_cast<std::int64_t>(g.degree(client[0]));
  v.expect(count_of(m.graph.vertex(client[0]).properties) == untouched,
           "192.168.1.100 count changed");
  v.detail = "router and ADD edge at -1000000, 192.168.1.100 keeps " + std::to_string(untouched);
}

void rule_round_trip(Verdict& v) {
  const std::vector<Rule> rules = load_rules_file(kData / "rule_r1.json");
  const RuleTemplate tmpl = load_template_file(kData / "template_network.json");
  PropertyGraph g;
  for (const Rule& r : rules) {
    v.expect(validate_meta(r).ok(), "meta validation failed");
    v.expect(validate_rule(r, tmpl).ok(), "template validation failed");
    rule_to_graph(r, g);
  }
  const std::string expected =
      R"({"type":"node","id":"0","labels":["NetworkEndpoint"],"properties":{"ip_address":"*"}})"
      "\n"
      R"({"type":"node","id":"1","labels":["NetworkEndpoint"],"properties":{"ip_address":"10.10.10.10"}})"
      "\n"
      R"({"type":"relationship","id":"0","label":"COMMUNICATES_TO",)"
      R"("start":{"id":"0","labels":["NetworkEndpoint"],"properties":{"ip_address":"*"}},)"
      R"("end":{"id":"1","labels":["NetworkEndpoint"],"properties":{"ip_address":"10.10.10.10"}},)"
      R"("properties":{"action":"ADD","constraint":"deny","id":"6ec4f95c-f4e3-4516-92c1-172cec275696"}})"
      "\n";
  const std::string actual = export_jsonl_string(g);
  v.expect(actual == expected, "export differs:\n" + actual);
  v.detail = "3 records byte-identical";
}

void handshake_lemma(Verdict& v) {
  irskg::testing::Rng rng(1);
  const int runs = 1000;
  for (int i = 0; i < runs; ++i) {
    const PropertyGraph g = irskg::testing::random_graph(rng, 15, 40);
    std::size_t total = 0;
    for (const Vertex& vertex : g.vertices()) total += g.degree(vertex.id);
    v.expect(total == 2 * g.edge_count(), "run " + std::to_string(i));
  }
  v.detail = std::to_string(runs) + " random multigraphs";
}

void edge_count_identity(Verdict& v) {
  irskg::testing::Rng rng(2);
  const int runs = 1000;
  std::size_t checked = 0;
  for (int i = 0; i < runs; ++i) {
    const PropertyGraph g = irskg::testing::random_graph(rng, 10, 25);
    const ModelInputGraph m = build_model_input(g, irskg::testing::random_rules(rng, 3));
    for (const Edge& e : m.graph.edges()) {
      const std::int64_t c = count_of(e.properties);
      if (c == kDefaultPenalty) continue;
      ++checked;
      v.expect(c == count_of(m.graph.vertex(e.src).properties) +
                        count_of(m.graph.vertex(e.dst).properties),
               "run " + std::to_string(i) + " edge " + std::to_string(e.id.value()));
    }
  }
  v.detail =
      std::to_string(runs) + " transforms, " + std::to_string(checked) + " non-penalized edges";
}

void penalty_dominance(Verdict& v) {
  irskg::testing::Rng rng(3);
  const int runs = 1000;
  for (int i = 0; i < runs; ++i) {
    const PropertyGraph g = irskg::testing::random_graph(rng, 10, 25);
    const auto rules = irskg::testing::random_rules(rng, 3);
    TransformConfig config;
    if (irskg::testing::coin(rng))
      config.penalty = -static_cast<std::int64_t>(2 * g.edge_count() * 2 + 1);
    const ModelInputGraph m = build_model_input(g, rules, config);
    std::set<std::uint64_t> penalized_v;
    std::set<std::uint64_t> penalized_e;
    for (const PenaltyRecord& p : m.provenance) {
      for (VertexId id : p.vertices) penalized_v.insert(id.value());
      for (EdgeId id : p.edges) penalized_e.insert(id.value());
    }
    for (const Vertex& vertex : m.graph.vertices()) {
      const std::int64_t c = count_of(vertex.properties);
      const bool penalized = penalized_v.contains(vertex.id.value());
      v.expect(penalized ? c == config.penalty : config.penalty < c,
               "run " + std::to_string(i) + " vertex " + std::to_string(vertex.id.value()));
    }
    for (const Edge& e : m.graph.edges()) {
      const std::int64_t c = count_of(e.properties);
      const bool penalized = penalized_e.contains(e.id.value());
      v.expect(penalized ? c == config.penalty : config.penalty < c,
               "run " + std::to_string(i) + " edge " + std::to_string(e.id.value()));
    }
  }
  v.detail = std::to_string(runs) + " transforms";
}

void serialization_round_trip(Verdict& v) {
  irskg::testing::Rng rng(4);
  const int runs = 1000;
  for (int i = 0; i < runs; ++i) {
    const PropertyGraph g = irskg::testing::random_graph(rng, 12, 30);
    const std::string text = export_jsonl_string(g);
    const PropertyGraph back = import_jsonl_string(text);
    v.expect(back == g, "run " + std::to_string(i) + " graph differs");
    v.expect(export_jsonl_string(back) == text, "run " + std::to_string(i) + " bytes differ");
  }
  v.detail = std::to_string(runs) + " random graphs";
}

void oracle_equivalence(Verdict& v) {
  irskg::testing::Rng rng(5);
  const int runs = 2000;
  for (int i = 0; i < runs; ++i) {
    const PropertyGraph g = irskg::testing::random_graph(rng, 10, 20);
    const auto rules = irskg::testing::random_rules(rng, 3);
    const oracle::Expected expected = oracle::pipeline(oracle::flatten(g), rules, kDefaultPenalty);
    const ModelInputGraph m = build_model_input(g, rules);
    for (const Vertex& vertex : m.graph.vertices()) {
      v.expect(count_of(vertex.properties) == expected.vertex_counts[vertex.id.value()],
               "run " + std::to_string(i) + " vertex " + std::to_string(vertex.id.value()));
    }
    for (const Edge& e : m.graph.edges()) {
      v.expect(count_of(e.properties) == expected.edge_counts[e.id.value()],
               "run " + std::to_string(i) + " edge " + std::to_string(e.id.value()));
    }
  }
  v.detail = std::to_string(runs) + " instances (<=10 vertices, <=20 edges, <=3 rules)";
}

void throughput(Verdict& v) {
  const std::size_t n = 100'000;
  std::ostringstream text;
  irskg::testing::Rng rng(6);
  for (std::size_t i = 0; i < n; ++i) {
    const auto octet = [&] { return std::to_string(irskg::testing::pick(rng, 256)); };
    text << "[2023-10-25 11:" << (10 + i % 50) << ':' << (10 + i % 50) << "] 10.0." << octet()
         << '.' << octet() << " -> 10.1." << octet() << '.' << octet() << ": TCP "
         << irskg::testing::kVerbPool[i % irskg::testing::kVerbPool.size()] << '\n';
  }
  std::istringstream in(text.str());
  PropertyGraph g;
  const auto start = Clock::now();
  const IngestReport report = ingest_stream(g, in);
  const double elapsed = seconds_since(start);
  v.expect(report.edges_created == n && report.lines_rejected == 0, "lines were rejected");
  v.expect(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
  v.detail = std::to_string(n) + " lines in " + std::to_string(elapsed) + " s";
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<void(Verdict&)> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "sample log ingestion", case_study_ingestion},
      {"AC2", "count transformation", count_transformation},
      {"AC3", "constraint penalty", constraint_penalty},
      {"AC4", "rule round trip", rule_round_trip},
      {"AC5a", "handshake lemma", handshake_lemma},
      {"AC5b", "edge count identity on non-penalized edges", edge_count_identity},
      {"AC5c", "penalty dominance", penalty_dominance},
      {"AC5d", "serialization round trip", serialization_round_trip},
      {"AC5e", "pipeline oracle equivalence", oracle_equivalence},
      {"AC6", "throughput", throughput},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    Verdict verdict;
    try {
      c.check(verdict);
    } catch (const std::exception& e) {
      verdict.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = verdict.failures.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.title;
    if (!verdict.detail.empty()) std::cout << " (" << verdict.detail << ')';
    std::cout << '\n';
    for (const std::string& f : verdict.failures) std::cout << "       " << f << '\n';
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " failed") << '\n';
  return failed == 0 ? 0 : 1;
}
