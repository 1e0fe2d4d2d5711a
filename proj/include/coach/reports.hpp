#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "coach/error.hpp"

namespace coach {

enum class ReportStatus { Done, Almost, Nope };

enum class Reason { Forgot, NoTime, DontEnjoy, NotUseful, TooHard };

inline std::string_view to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::Done: return "done";
    case ReportStatus::Almost: return "almost";
    case ReportStatus::Nope: return "nope";
  }
  return "?";
}

inline ReportStatus parse_status(std::string_view s) {
  if (s == "done") return ReportStatus::Done;
  if (s == "almost") return ReportStatus::Almost;
  if (s == "nope") return ReportStatus::Nope;
  fail(Errc::invalid_argument, "unknown report status '" + std::string(s) + "'");
}

inline std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::Forgot: return "forgot";
    case Reason::NoTime: return "no_time";
    case Reason::DontEnjoy: return "dont_enjoy";
    case Reason::NotUseful: return "not_useful";
    case Reason::TooHard: return "too_hard";
  }
  return "?";
}

inline Reason parse_reason(std::string_view s) {
  for (Reason r : {Reason::Forgot, Reason::NoTime, Reason::DontEnjoy, Reason::NotUseful, Reason::TooHard})
    if (to_string(r) == s) return r;
  fail(Errc::invalid_argument, "unknown reason '" + std::string(s) + "'");
}

inline std::string_view reason_label(Reason r) {
  switch (r) {
    case Reason::Forgot: return "I forgot about it";
    case Reason::NoTime: return "I didn't have time";
    case Reason::DontEnjoy: return "I don't enjoy it";
    case Reason::NotUseful: return "I don't find it useful";
    case Reason::TooHard: return "It was too hard";
  }
  return "?";
}

inline constexpr int kMinRpe = 1;
inline constexpr int kMaxRpe = 5;
inline constexpr int kTargetRpe = 3;  // tired, but can still talk

/// Tiredness wording shown next to each point of the 1-5 exertion scale.
inline std::string_view rpe_label(int rpe) {
  switch (rpe) {
    case 1: return "Not tired at all";
    case 2: return "Little tired: breathing felt easy";
    case 3: return "Tired, but can still talk";
    case 4: return "Really tired: felt out of breath";
    case 5: return "So tired: had to stop";
    default: return "?";
  }
}

/// A trainee's report on one scheduled session. Exertion is reported only
/// for completed sessions, a reason only for missed ones.
struct DailyReport {
  int week_index = 1;
  int day_index = 0;  // 0..6 from the first day of the week
  ReportStatus status = ReportStatus::Done;
  std::optional<int> rpe;
  std::optional<Reason> reason;
  std::optional<int> self_efficacy;       // 1..5
  std::optional<int> affective_attitude;  // 1..5

  static DailyReport done(int week, int day, int rpe) { return {week, day, ReportStatus::Done, rpe, {}, {}, {}}; }
  static DailyReport missed(int week, int day, ReportStatus status, Reason why) {
    return {week, day, status, {}, why, {}, {}};
  }

  friend bool operator==(const DailyReport&, const DailyReport&) = default;
};

inline void validate(const DailyReport& r) {
  require(r.week_index >= 1, Errc::invalid_argument, "week_index must be positive");
  require(r.day_index >= 0 && r.day_index <= 6, Errc::invalid_argument, "day_index must be in 0..6");
  const bool done = r.status == ReportStatus::Done;
  require(r.rpe.has_value() == done, Errc::invalid_argument, "rpe is required for done reports and only for them");
  require(r.reason.has_value() != done, Errc::invalid_argument,
          "a reason is required for almost/nope reports and only for them");
  if (r.rpe) require(*r.rpe >= kMinRpe && *r.rpe <= kMaxRpe, Errc::invalid_argument, "rpe must be in 1..5");
  for (const auto& likert : {r.self_efficacy, r.affective_attitude})
    if (likert) require(*likert >= 1 && *likert <= 5, Errc::invalid_argument, "ratings must be in 1..5");
}

}  // namespace coach
