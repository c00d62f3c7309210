#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "irskg/error.hpp"
#include "irskg/graph.hpp"
#include "irskg/log_ingest.hpp"
#include "irskg/model_input.hpp"
#include "irskg/rules.hpp"
#include "irskg/serde.hpp"

namespace py = pybind11;
using namespace irskg;

namespace {

// bool must be checked before int: Python's bool subclasses int.
PropertyValue to_value(const py::handle& obj) {
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<std::int64_t>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  throw py::type_error("property values must be str, int, float or bool");
}

py::object from_value(const PropertyValue& value) {
  return std::visit([](const auto& v) -> py::object { return py::cast(v); }, value);
}

PropertyMap to_props(const py::dict& dict) {
  PropertyMap out;
  for (auto [key, value] : dict) out.emplace(key.cast<std::string>(), to_value(value));
  return out;
}

py::dict from_props(const PropertyMap& props) {
  py::dict out;
  for (const auto& [key, value] : props) out[py::str(key)] = from_value(value);
  return out;
}

py::dict vertex_dict(const Vertex& v) {
  py::dict out;
  out["id"] = v.id.value();
  out["label"] = v.label;
  out["properties"] = from_props(v.properties);
  return out;
}

py::dict edge_dict(const Edge& e) {
  py::dict out;
  out["id"] = e.id.value();
  out["label"] = e.label;
  out["src"] = e.src.value();
  out["dst"] = e.dst.value();
  out["properties"] = from_props(e.properties);
  return out;
}

template <typename IdT>
std::vector<std::uint64_t> raw(const std::vector<IdT>& ids) {
  std::vector<std::uint64_t> out;
  out.reserve(ids.size());
  for (IdT id : ids) out.push_back(id.value());
  return out;
}

py::dict report_dict(const IngestReport& r) {
  py::dict out;
  out["lines_read"] = r.lines_read;
  out["lines_rejected"] = r.lines_rejected;
  out["vertices_created"] = r.vertices_created;
  out["vertices_merged"] = r.vertices_merged;
  out["edges_created"] = r.edges_created;
  py::list rejects;
  for (const IngestReject& reject : r.rejects) {
    rejects.append(py::make_tuple(reject.line, reject.error));
  }
  out["rejects"] = rejects;
  return out;
}

nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::BadJson, e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_irskg, m) {
  m.doc() = "Labeled property graph store and model-input pipeline for security logs";

  py::register_exception<Error>(m, "IrskgError", PyExc_ValueError);

  py::class_<PropertyGraph>(m, "PropertyGraph")
      .def(py::init<>())
      .def("add_vertex",
           [](PropertyGraph& g, std::string label, const py::dict& props) {
             return g.add_vertex(std::move(label), to_props(props)).value();
           },
           py::arg("label"), py::arg("properties") = py::dict())
      .def("upsert_vertex",
           [](PropertyGraph& g, std::string label, const std::string& key,
              const py::dict& props) {
             const UpsertResult r = g.upsert_vertex(std::move(label), key, to_props(props));
             return py::make_tuple(r.id.value(), r.created);
           },
           py::arg("label"), py::arg("identity_key"), py::arg("properties"))
      .def("add_edge",
           [](PropertyGraph& g, std::uint64_t src, std::uint64_t dst, std::string label,
              const py::dict& props) {
             return g.add_edge(VertexId{src}, VertexId{dst}, std::move(label), to_props(props))
                 .value();
           },
           py::arg("src"), py::arg("dst"), py::arg("label"),
           py::arg("properties") = py::dict())
      .def("degree", [](const PropertyGraph& g, std::uint64_t v) { return g.degree(VertexId{v}); })
      .def("edges_between",
           [](const PropertyGraph& g, std::uint64_t a, std::uint64_t b) {
             return raw(g.edges_between(VertexId{a}, VertexId{b}));
           })
      .def("find_vertices",
           [](const PropertyGraph& g, std::optional<std::string> label,
              std::optional<std::string> key, const py::object& value) {
             std::optional<PropertyValue> v;
             if (!value.is_none()) v = to_value(value);
             return raw(g.find_vertices(label, key, v));
           },
           py::arg("label") = py::none(), py::arg("key") = py::none(),
           py::arg("value") = py::none())
      .def("vertex", [](const PropertyGraph& g, std::uint64_t v) {
        return vertex_dict(g.vertex(VertexId{v}));
      })
      .def("edge", [](const PropertyGraph& g, std::uint64_t e) {
        return edge_dict(g.edge(EdgeId{e}));
      })
      .def("vertices", [](const PropertyGraph& g) {
        py::list out;
        for (const Vertex& v : g.vertices()) out.append(vertex_dict(v));
        return out;
      })
      .def("edges", [](const PropertyGraph& g) {
        py::list out;
        for (const Edge& e : g.edges()) out.append(edge_dict(e));
        return out;
      })
      .def_property_readonly("vertex_count", &PropertyGraph::vertex_count)
      .def_property_readonly("edge_count", &PropertyGraph::edge_count)
      .def("__eq__", [](const PropertyGraph& a, const PropertyGraph& b) { return a == b; });

  m.def("normalize_action", &normalize_action, py::arg("action"));

  m.def("parse_log_line", [](const std::string& line) {
    const LogEvent e = parse_log_line(line);
    py::dict out;
    out["date"] = e.timestamp.date_string();
    out["time"] = e.timestamp.time_string();
    out["src_ip"] = e.src_ip.to_string();
    out["dst_ip"] = e.dst_ip.to_string();
    out["protocol"] = e.protocol;
    out["action"] = e.action;
    return out;
  });

  m.def("ingest_lines",
        [](PropertyGraph& g, const std::vector<std::string>& lines,
           const std::string& identity_key, const std::string& label_policy,
           const std::string& on_error) {
          IngestOptions options;
          options.identity_key = identity_key;
          options.label_policy =
              label_policy == "constant" ? LabelPolicy::constant : LabelPolicy::indexed;
          options.on_error = on_error == "abort" ? OnError::abort : OnError::skip;
          return report_dict(ingest_lines(g, lines, options));
        },
        py::arg("graph"), py::arg("lines"), py::arg("identity_key") = "ip",
        py::arg("label_policy") = "indexed", py::arg("on_error") = "skip");

  py::class_<Rule>(m, "Rule")
      .def_readonly("id", &Rule::id)
      .def_readonly("action", &Rule::action)
      .def_property_readonly("constraint",
                             [](const Rule& r) { return std::string(to_string(r.constraint)); })
      .def_property_readonly("source", [](const Rule& r) { return r.source.label_match; })
      .def_property_readonly("target", [](const Rule& r) { return r.target.label_match; })
      .def("to_json", [](const Rule& r) { return render_rule(r).dump(); });

  py::class_<RuleTemplate>(m, "RuleTemplate")
      .def_readonly("system_id", &RuleTemplate::system_id)
      .def_readonly("allowed_actions", &RuleTemplate::allowed_actions);

  m.def("parse_rules", [](const std::string& text) {
    return parse_rules_document(parse_json_text(text));
  });
  m.def("parse_template", [](const std::string& text) {
    return parse_template(parse_json_text(text));
  });
  m.def("validate_meta", [](const Rule& r) { return validate_meta(r).violations; });
  m.def("validate_rule",
        [](const Rule& r, const RuleTemplate& t) { return validate_rule(r, t).violations; });
  m.def("rule_to_graph", [](const Rule& r, PropertyGraph& g) {
    const MaterializedRule mr = rule_to_graph(r, g);
    return py::make_tuple(mr.source.value(), mr.edge.value(), mr.target.value());
  });
  m.def("match_rule", [](const Rule& r, const PropertyGraph& g, std::uint64_t e) {
    return match_rule(r, g, EdgeId{e});
  });
  m.def("matching_edges", [](const std::vector<Rule>& rules, const PropertyGraph& g) {
    std::map<std::string, std::vector<std::uint64_t>> out;
    for (const auto& [id, edges] : matching_edges(rules, g)) out[id] = raw(edges);
    return out;
  });

  m.def("build_model_input",
        [](const PropertyGraph& g, const std::vector<Rule>& rules, std::int64_t penalty,
           const std::string& count_key) {
          const ModelInputGraph model =
              build_model_input(g, rules, TransformConfig{penalty, count_key});
          py::list provenance;
          for (const PenaltyRecord& p : model.provenance) {
            py::dict rec;
            rec["rule"] = p.rule_id;
            rec["vertices"] = raw(p.vertices);
            rec["edges"] = raw(p.edges);
            provenance.append(rec);
          }
          return py::make_tuple(model.graph, provenance);
        },
        py::arg("graph"), py::arg("rules") = std::vector<Rule>{},
        py::arg("penalty") = kDefaultPenalty, py::arg("count_key") = "count");

  m.def("export_jsonl", [](const PropertyGraph& g) { return export_jsonl_string(g); });
  m.def("import_jsonl", [](const std::string& text) { return import_jsonl_string(text); });
  m.def("snapshot_save", [](const PropertyGraph& g, const std::string& path) {
    snapshot_save(g, path);
  });
  m.def("snapshot_load", [](const std::string& path) { return snapshot_load(path); });
}
