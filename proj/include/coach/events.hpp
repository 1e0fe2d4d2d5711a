#pragma once

// Append-only interaction log. One JSON object per line:
//   {"seq":N,"ts":"2026-01-05T08:00:00Z","trainee":"t0001","kind":"DailyReported","payload":{"v":1,...}}

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "coach/error.hpp"
#include "coach/serialization.hpp"

namespace coach {

inline constexpr int kPayloadVersion = 1;

enum class EventKind {
  TraineeCreated,
  AssessmentSubmitted,
  InitialGoalChosen,
  WeekPlanned,
  DailyScheduled,
  DailyReported,
  WeekClosed,
  RevisionApplied,
  ProposalMade,
  ProposalAnswered,
};

inline constexpr std::array<std::pair<EventKind, std::string_view>, 10> kEventKindNames{{
    {EventKind::TraineeCreated, "TraineeCreated"},
    {EventKind::AssessmentSubmitted, "AssessmentSubmitted"},
    {EventKind::InitialGoalChosen, "InitialGoalChosen"},
    {EventKind::WeekPlanned, "WeekPlanned"},
    {EventKind::DailyScheduled, "DailyScheduled"},
    {EventKind::DailyReported, "DailyReported"},
    {EventKind::WeekClosed, "WeekClosed"},
    {EventKind::RevisionApplied, "RevisionApplied"},
    {EventKind::ProposalMade, "ProposalMade"},
    {EventKind::ProposalAnswered, "ProposalAnswered"},
}};

inline std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kEventKindNames)
    if (kind == k) return name;
  return "?";
}

inline EventKind parse_event_kind(std::string_view s) {
  for (const auto& [kind, name] : kEventKindNames)
    if (name == s) return kind;
  fail(Errc::corrupt_log, "unknown event kind '" + std::string(s) + "'");
}

struct Event {
  std::int64_t seq = 0;
  std::string ts;  // ISO-8601 UTC
  std::string trainee;
  EventKind kind = EventKind::TraineeCreated;
  json payload = json::object();

  friend bool operator==(const Event&, const Event&) = default;
};

inline std::string format_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string utc_now() { return format_utc(std::chrono::system_clock::now()); }

/// Parses the "YYYY-MM-DDTHH:MM:SSZ" form written by format_utc().
inline std::chrono::system_clock::time_point parse_utc(const std::string& s) {
  std::tm tm{};
  const char* end = strptime(s.c_str(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  require(end != nullptr && *end == '\0', Errc::invalid_argument, "bad timestamp '" + s + "'");
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

inline std::string to_line(const Event& e) {
  const json j{{"seq", e.seq}, {"ts", e.ts}, {"trainee", e.trainee}, {"kind", to_string(e.kind)}, {"payload", e.payload}};
  return j.dump();
}

inline Event parse_event_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& ex) {
    fail(Errc::corrupt_log, std::string("unreadable log line: ") + ex.what());
  }
  try {
    Event e;
    e.seq = detail::get<std::int64_t>(j, "seq");
    e.ts = detail::get<std::string>(j, "ts");
    e.trainee = detail::get<std::string>(j, "trainee");
    e.kind = parse_event_kind(detail::get<std::string>(j, "kind"));
    e.payload = detail::field(j, "payload");
    require(e.payload.value("v", 0) == kPayloadVersion, Errc::corrupt_log,
            "unsupported payload version in event " + std::to_string(e.seq));
    return e;
  } catch (const CoachError& ex) {
    if (ex.code() == Errc::corrupt_log) throw;
    fail(Errc::corrupt_log, std::string("malformed log record: ") + ex.what());
  }
}

/// Line-oriented event file for one trainee.
class EventLogFile {
public:
  explicit EventLogFile(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }

  std::vector<Event> read_all() const {
    std::vector<Event> out;
    std::ifstream in(path_);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      out.push_back(parse_event_line(line));
    }
    return out;
  }

  /// Appends and flushes a batch; the batch reaches the OS before this returns.
  void append(std::span<const Event> batch) const {
    std::ofstream out(path_, std::ios::app);
    require(static_cast<bool>(out), Errc::io, "cannot open " + path_.string());
    for (const auto& e : batch) out << to_line(e) << '\n';
    out.flush();
    require(static_cast<bool>(out), Errc::io, "write failed for " + path_.string());
  }

private:
  std::filesystem::path path_;
};

}  // namespace coach
