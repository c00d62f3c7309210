"""Labeled property graph store and model-input pipeline for security logs."""

from ._irskg import (
    IrskgError,
    PropertyGraph,
    Rule,
    RuleTemplate,
    build_model_input,
    export_jsonl,
    import_jsonl,
    ingest_lines,
    match_rule,
    matching_edges,
    normalize_action,
    parse_log_line,
    parse_rules,
    parse_template,
    rule_to_graph,
    snapshot_load,
    snapshot_save,
    validate_meta,
    validate_rule,
)

__all__ = [
    "IrskgError",
    "PropertyGraph",
    "Rule",
    "RuleTemplate",
    "build_model_input",
    "export_jsonl",
    "import_jsonl",
    "ingest_lines",
    "match_rule",
    "matching_edges",
    "normalize_action",
    "parse_log_line",
    "parse_rules",
    "parse_template",
    "rule_to_graph",
    "snapshot_load",
    "snapshot_save",
    "validate_meta",
    "validate_rule",
]
