#include "irskg/error.hpp"

namespace irskg {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::EmptyLabel: return "EmptyLabel";
    case Errc::EmptyPropertyKey: return "EmptyPropertyKey";
    case Errc::InvalidUtf8: return "InvalidUtf8";
    case Errc::NonFiniteFloat: return "NonFiniteFloat";
    case Errc::DanglingEndpoint: return "DanglingEndpoint";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::UnknownEdge: return "UnknownEdge";
    case Errc::MissingIdentityKey: return "MissingIdentityKey";
    case Errc::IntegrityViolation: return "IntegrityViolation";
    case Errc::MalformedTimestamp: return "MalformedTimestamp";
    case Errc::MalformedIp: return "MalformedIp";
    case Errc::MalformedStructure: return "MalformedStructure";
    case Errc::EmptyAction: return "EmptyAction";
    case Errc::AbortedAtLine: return "AbortedAtLine";
    case Errc::MissingField: return "MissingField";
    case Errc::BadFieldType: return "BadFieldType";
    case Errc::BadConstraint: return "BadConstraint";
    case Errc::DuplicateRuleId: return "DuplicateRuleId";
    case Errc::DuplicateTemplate: return "DuplicateTemplate";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::InvalidRule: return "InvalidRule";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::MissingVertexCounts: return "MissingVertexCounts";
    case Errc::PenaltyTooSmall: return "PenaltyTooSmall";
    case Errc::BadJson: return "BadJson";
    case Errc::UnknownRecordType: return "UnknownRecordType";
    case Errc::UnsupportedValue: return "UnsupportedValue";
    case Errc::DanglingEndpointRef: return "DanglingEndpointRef";
    case Errc::MultiLabel: return "MultiLabel";
    case Errc::DuplicateExternalId: return "DuplicateExternalId";
    case Errc::SinkWriteFailure: return "SinkWriteFailure";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

namespace {

std::string decorate(Errc code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(errc_name(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message,
             std::optional<std::size_t> line, std::optional<Span> span)
    : std::runtime_error(decorate(code, message, line)),
      code_(code),
      message_(message),
      line_(line),
      span_(span) {}

}  // namespace irskg
