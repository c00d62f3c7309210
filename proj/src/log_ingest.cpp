#include "irskg/log_ingest.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace irskg {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\f\v";
constexpr std::string_view kArrow = " -> ";
constexpr std::string_view kColon = ": ";

bool is_digit(char c) { return c >= '0' && c <= '9'; }

template <typename T>
bool parse_fixed_digits(std::string_view text, T& out) {
  for (char c : text) {
    if (!is_digit(c)) return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

[[noreturn]] void fail(Errc code, const std::string& what, std::size_t offset,
                       std::size_t length) {
  throw Error(code, what + " at column " + std::to_string(offset + 1), std::nullopt,
              Span{offset, length});
}

// Layout is exactly "YYYY-MM-DD HH:MM:SS".
bool parse_timestamp(std::string_view text, Timestamp& ts) {
  if (text.size() != 19 || text[4] != '-' || text[7] != '-' || text[10] != ' ' ||
      text[13] != ':' || text[16] != ':') {
    return false;
  }
  if (!parse_fixed_digits(text.substr(0, 4), ts.year) ||
      !parse_fixed_digits(text.substr(5, 2), ts.month) ||
      !parse_fixed_digits(text.substr(8, 2), ts.day) ||
      !parse_fixed_digits(text.substr(11, 2), ts.hour) ||
      !parse_fixed_digits(text.substr(14, 2), ts.minute) ||
      !parse_fixed_digits(text.substr(17, 2), ts.second)) {
    return false;
  }
  const std::chrono::year_month_day date{std::chrono::year{ts.year},
                                         std::chrono::month{ts.month},
                                         std::chrono::day{ts.day}};
  return date.ok() && ts.hour < 24 && ts.minute < 60 && ts.second < 60;
}

std::string two_digits(unsigned v) {
  char buf[4];
  std::snprintf(buf, sizeof buf, "%02u", v % 100);
  return buf;
}

}  // namespace

std::string Timestamp::date_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

std::string Timestamp::time_string() const {
  return two_digits(hour) + ":" + two_digits(minute) + ":" + two_digits(second);
}

bool Ipv4Address::parse(std::string_view text, Ipv4Address& out) {
  std::array<std::uint8_t, 4> octets{};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i > 0) {
      if (pos >= text.size() || text[pos] != '.') return false;
      ++pos;
    }
    std::size_t end = pos;
    while (end < text.size() && is_digit(text[end])) ++end;
    const std::size_t len = end - pos;
    if (len == 0 || len > 3 || (len > 1 && text[pos] == '0')) return false;
    unsigned value = 0;
    parse_fixed_digits(text.substr(pos, len), value);
    if (value > 255) return false;
    octets[i] = static_cast<std::uint8_t>(value);
    pos = end;
  }
  if (pos != text.size()) return false;
  out = Ipv4Address{octets};
  return true;
}

std::string Ipv4Address::to_string() const {
  return std::to_string(octets_[0]) + "." + std::to_string(octets_[1]) + "." +
         std::to_string(octets_[2]) + "." + std::to_string(octets_[3]);
}

LogEvent parse_log_line(std::string_view line) {
  const std::size_t first = line.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) {
    fail(Errc::MalformedStructure, "empty line", 0, line.size());
  }
  const std::size_t last = line.find_last_not_of(kWhitespace);
  const std::string_view text = line.substr(first, last - first + 1);
  const std::size_t base = first;

  if (text.front() != '[') fail(Errc::MalformedStructure, "expected '['", base, 1);
  const std::size_t close = text.find(']');
  if (close == std::string_view::npos) {
    fail(Errc::MalformedStructure, "missing ']'", base, text.size());
  }

  LogEvent event;
  if (!parse_timestamp(text.substr(1, close - 1), event.timestamp)) {
    fail(Errc::MalformedTimestamp, "expected YYYY-MM-DD HH:MM:SS", base + 1, close - 1);
  }

  if (close + 1 >= text.size() || text[close + 1] != ' ') {
    fail(Errc::MalformedStructure, "expected ' ' after timestamp", base + close + 1, 1);
  }
  const std::size_t src_begin = close + 2;
  const std::size_t arrow = text.find(kArrow, src_begin);
  if (arrow == std::string_view::npos) {
    fail(Errc::MalformedStructure, "missing ' -> '", base + src_begin,
         text.size() - src_begin);
  }
  const std::size_t dst_begin = arrow + kArrow.size();
  const std::size_t colon = text.find(kColon, dst_begin);
  if (colon == std::string_view::npos) {
    fail(Errc::MalformedStructure, "missing ': '", base + dst_begin,
         text.size() - dst_begin);
  }

  if (!Ipv4Address::parse(text.substr(src_begin, arrow - src_begin), event.src_ip)) {
    fail(Errc::MalformedIp, "bad source address", base + src_begin, arrow - src_begin);
  }
  if (!Ipv4Address::parse(text.substr(dst_begin, colon - dst_begin), event.dst_ip)) {
    fail(Errc::MalformedIp, "bad destination address", base + dst_begin,
         colon - dst_begin);
  }

  const std::size_t proto_begin = colon + kColon.size();
  const std::string_view tail = text.substr(proto_begin);
  const std::size_t space = tail.find(' ');
  const std::string_view protocol = tail.substr(0, space);
  if (protocol.empty() || protocol.find_first_of(kWhitespace) != std::string_view::npos) {
    fail(Errc::MalformedStructure, "missing protocol", base + proto_begin, tail.size());
  }
  if (space == std::string_view::npos || space + 1 >= tail.size()) {
    fail(Errc::EmptyAction, "missing action", base + text.size(), 0);
  }
  const std::size_t action_begin = proto_begin + space + 1;
  const std::string_view action = tail.substr(space + 1);
  if (const std::size_t ws = action.find_first_of(kWhitespace);
      ws != std::string_view::npos) {
    if (ws == 0) fail(Errc::EmptyAction, "missing action", base + action_begin, 1);
    fail(Errc::MalformedStructure, "unexpected text after action",
         base + action_begin + ws, action.size() - ws);
  }
  event.protocol = std::string(protocol);
  event.action = std::string(action);
  return event;
}

std::string format_log_line(const LogEvent& event) {
  return "[" + event.timestamp.date_string() + " " + event.timestamp.time_string() +
         "] " + event.src_ip.to_string() + std::string(kArrow) +
         event.dst_ip.to_string() + std::string(kColon) + event.protocol + " " +
         event.action;
}

std::string normalize_action(std::string_view action) {
  std::string out(action);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    if (c == '-') c = '_';
  }
  return out;
}

std::string LabelAllocator::next() {
  if (policy_ == LabelPolicy::constant) return std::string(kEndpointLabel);
  return "IP" + std::to_string(next_index_++);
}

EventApplication event_to_graph(PropertyGraph& graph, const LogEvent& event,
                                LabelAllocator& labels, std::string_view identity_key) {
  EventApplication applied;
  auto endpoint = [&](const Ipv4Address& ip) {
    PropertyMap props{{std::string(identity_key), ip.to_string()}};
    if (auto existing = graph.lookup_identity(identity_key, props.begin()->second)) {
      ++applied.vertices_merged;
      return graph.upsert_vertex(graph.vertex(*existing).label, identity_key,
                                 std::move(props))
          .id;
    }
    ++applied.vertices_created;
    return graph.add_vertex(labels.next(), std::move(props));
  };
  const VertexId src = endpoint(event.src_ip);
  const VertexId dst = endpoint(event.dst_ip);

  const Timestamp& ts = event.timestamp;
  PropertyMap props{
      {"time", ts.time_string()},
      {"time_year", std::int64_t{ts.year}},
      {"time_month", std::int64_t{ts.month}},
      {"time_date", std::int64_t{ts.day}},
      {"protocol", event.protocol},
  };
  applied.edge = graph.add_edge(src, dst, normalize_action(event.action), std::move(props));
  return applied;
}

namespace {

class Ingestor {
 public:
  Ingestor(PropertyGraph& graph, const IngestOptions& options)
      : graph_(graph),
        options_(options),
        labels_(options.label_policy, graph.vertex_count() + 1) {}

  void feed(std::string_view line) {
    ++line_number_;
    if (line.find_first_not_of(kWhitespace) == std::string_view::npos) return;
    ++report_.lines_read;
    try {
      const LogEvent event = parse_log_line(line);
      const EventApplication applied =
          event_to_graph(graph_, event, labels_, options_.identity_key);
      report_.vertices_created += applied.vertices_created;
      report_.vertices_merged += applied.vertices_merged;
      ++report_.edges_created;
    } catch (const Error& e) {
      ++report_.lines_rejected;
      report_.rejects.push_back({line_number_, e.what()});
      if (options_.on_error == OnError::abort) {
        throw IngestAborted(line_number_, e.what(), report_);
      }
    }
  }

  IngestReport finish() { return std::move(report_); }

 private:
  PropertyGraph& graph_;
  const IngestOptions& options_;
  LabelAllocator labels_;
  std::size_t line_number_ = 0;
  IngestReport report_;
};

}  // namespace

IngestReport ingest_lines(PropertyGraph& graph, std::span<const std::string> lines,
                          const IngestOptions& options) {
  Ingestor ingestor(graph, options);
  for (const std::string& line : lines) ingestor.feed(line);
  return ingestor.finish();
}

IngestReport ingest_stream(PropertyGraph& graph, std::istream& in,
                           const IngestOptions& options) {
  Ingestor ingestor(graph, options);
  std::string line;
  while (std::getline(in, line)) ingestor.feed(line);
  return ingestor.finish();
}

}  // namespace irskg
