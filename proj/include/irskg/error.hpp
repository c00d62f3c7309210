#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace irskg {

enum class Errc {
  // graph_core
  EmptyLabel,
  EmptyPropertyKey,
  InvalidUtf8,
  NonFiniteFloat,
  DanglingEndpoint,
  UnknownVertex,
  UnknownEdge,
  MissingIdentityKey,
  IntegrityViolation,
  // log_ingest
  MalformedTimestamp,
  MalformedIp,
  MalformedStructure,
  EmptyAction,
  AbortedAtLine,
  // rule_engine
  MissingField,
  BadFieldType,
  BadConstraint,
  DuplicateRuleId,
  DuplicateTemplate,
  UnknownKey,
  InvalidRule,
  // model_input
  InvalidConfig,
  MissingVertexCounts,
  PenaltyTooSmall,
  // serde_io
  BadJson,
  UnknownRecordType,
  UnsupportedValue,
  DanglingEndpointRef,
  MultiLabel,
  DuplicateExternalId,
  SinkWriteFailure,
  IoFailure,
};

std::string_view errc_name(Errc code);

/// Byte range inside a parsed input line.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
};

/// The single exception type thrown by the library.
///
/// Carries a machine-checkable code plus, where relevant, the 1-based input
/// line and the offending span within that line.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt,
        std::optional<Span> span = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<Span> span() const noexcept { return span_; }
  /// The message without the code and line decoration of what().
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
  std::optional<std::size_t> line_;
  std::optional<Span> span_;
};

}  // namespace irskg
