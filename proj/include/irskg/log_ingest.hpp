#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irskg/error.hpp"
#include "irskg/graph.hpp"

namespace irskg {

/// Calendar date-time with second precision. Always a valid date.
struct Timestamp {
  int year = 0;
  unsigned month = 0;
  unsigned day = 0;
  unsigned hour = 0;
  unsigned minute = 0;
  unsigned second = 0;

  std::string date_string() const;  // YYYY-MM-DD
  std::string time_string() const;  // HH:MM:SS

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

class Ipv4Address {
 public:
  Ipv4Address() = default;
  explicit Ipv4Address(std::array<std::uint8_t, 4> octets) : octets_(octets) {}

  /// Strict dotted quad: four decimal octets, no leading zeros, no padding.
  static bool parse(std::string_view text, Ipv4Address& out);

  std::string to_string() const;
  const std::array<std::uint8_t, 4>& octets() const { return octets_; }

  friend bool operator==(const Ipv4Address&, const Ipv4Address&) = default;

 private:
  std::array<std::uint8_t, 4> octets_{};
};

struct LogEvent {
  Timestamp timestamp;
  Ipv4Address src_ip;
  Ipv4Address dst_ip;
  std::string protocol;
  std::string action;

  friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

/// Parses `[YYYY-MM-DD HH:MM:SS] SRC -> DST: PROTO ACTION`.
///
/// Surrounding whitespace (including a trailing CR) is ignored. Errors carry
/// the span of the offending text relative to the untrimmed line.
LogEvent parse_log_line(std::string_view line);

/// Canonical rendering; inverse of parse_log_line up to surrounding space.
std::string format_log_line(const LogEvent& event);

/// Uppercases ASCII letters and maps '-' to '_': "SYN-ACK" -> "SYN_ACK".
std::string normalize_action(std::string_view action);

enum class LabelPolicy { indexed, constant };
enum class OnError { skip, abort };

inline constexpr std::string_view kEndpointLabel = "NetworkEndpoint";

/// Assigns labels to vertices discovered during ingestion: "IP<k>" with k the
/// 1-based discovery index, or the constant "NetworkEndpoint".
class LabelAllocator {
 public:
  explicit LabelAllocator(LabelPolicy policy = LabelPolicy::indexed,
                          std::uint64_t first_index = 1)
      : policy_(policy), next_index_(first_index) {}

  std::string next();

  LabelPolicy policy() const { return policy_; }

 private:
  LabelPolicy policy_;
  std::uint64_t next_index_;
};

struct IngestOptions {
  std::string identity_key = "ip";
  LabelPolicy label_policy = LabelPolicy::indexed;
  OnError on_error = OnError::skip;
};

struct EventApplication {
  EdgeId edge;
  unsigned vertices_created = 0;
  unsigned vertices_merged = 0;
};

/// Upserts both endpoints (keyed by `identity_key`) and appends one edge
/// labeled with the normalized action, carrying time, time_year, time_month,
/// time_date and protocol.
EventApplication event_to_graph(PropertyGraph& graph, const LogEvent& event,
                                LabelAllocator& labels,
                                std::string_view identity_key = "ip");

struct IngestReject {
  std::size_t line = 0;
  std::string error;

  friend bool operator==(const IngestReject&, const IngestReject&) = default;
};

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t lines_rejected = 0;
  std::size_t vertices_created = 0;
  std::size_t vertices_merged = 0;
  std::size_t edges_created = 0;
  std::vector<IngestReject> rejects;

  friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

/// Thrown under OnError::abort; the report covers everything up to and
/// including the failing line.
class IngestAborted : public Error {
 public:
  IngestAborted(std::size_t line, const std::string& reason, IngestReport report)
      : Error(Errc::AbortedAtLine, reason, line), report_(std::move(report)) {}

  const IngestReport& report() const { return report_; }

 private:
  IngestReport report_;
};

/// Ingests lines in order. Blank lines are ignored and not counted. Vertex
/// labels continue from the graph's current vertex count.
IngestReport ingest_lines(PropertyGraph& graph, std::span<const std::string> lines,
                          const IngestOptions& options = {});

IngestReport ingest_stream(PropertyGraph& graph, std::istream& in,
                           const IngestOptions& options = {});

}  // namespace irskg
