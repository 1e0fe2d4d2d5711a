#pragma once

// Placement of weekly sessions on days, rescheduling after misses and the
// rolling seven-day view.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "coach/catalog.hpp"
#include "coach/reports.hpp"

namespace coach {

inline constexpr int kDaysPerWeek = 7;

enum class DayStatus { Unreported, Done, Almost, Nope };

inline std::string_view to_string(DayStatus s) {
  switch (s) {
    case DayStatus::Unreported: return "unreported";
    case DayStatus::Done: return "done";
    case DayStatus::Almost: return "almost";
    case DayStatus::Nope: return "nope";
  }
  return "?";
}

inline DayStatus parse_day_status(std::string_view s) {
  for (DayStatus d : {DayStatus::Unreported, DayStatus::Done, DayStatus::Almost, DayStatus::Nope})
    if (to_string(d) == s) return d;
  fail(Errc::invalid_argument, "unknown day status '" + std::string(s) + "'");
}

inline DayStatus day_status(ReportStatus s) {
  switch (s) {
    case ReportStatus::Done: return DayStatus::Done;
    case ReportStatus::Almost: return DayStatus::Almost;
    case ReportStatus::Nope: return DayStatus::Nope;
  }
  return DayStatus::Unreported;
}

struct DayEntry {
  bool session = false;
  DayStatus status = DayStatus::Unreported;

  friend bool operator==(const DayEntry&, const DayEntry&) = default;
};

struct WeekSchedule {
  int week_index = 1;
  WeeklyGoal goal;
  std::array<DayEntry, kDaysPerWeek> days{};

  int session_count() const {
    return static_cast<int>(std::count_if(days.begin(), days.end(), [](const DayEntry& d) { return d.session; }));
  }
  int done_count() const {
    return static_cast<int>(
        std::count_if(days.begin(), days.end(), [](const DayEntry& d) { return d.status == DayStatus::Done; }));
  }

  friend bool operator==(const WeekSchedule&, const WeekSchedule&) = default;
};

/// Rest positions inside a run of `n_days` days holding `n_rest` rest days:
/// floor((2k + 1) * n_days / (2 * n_rest)) for k = 0 .. n_rest - 1.
inline std::vector<int> rest_positions(int n_days, int n_rest) {
  std::vector<int> out;
  for (int k = 0; k < n_rest; ++k) out.push_back((2 * k + 1) * n_days / (2 * n_rest));
  return out;
}

inline WeekSchedule plan_week(const WeeklyGoal& goal, int week_index) {
  require(is_valid(goal), Errc::invalid_argument, "goal outside the catalog");
  require(week_index >= 1, Errc::invalid_argument, "weeks are numbered from 1");
  WeekSchedule s{week_index, goal, {}};
  for (auto& d : s.days) d.session = true;
  for (int r : rest_positions(kDaysPerWeek, kDaysPerWeek - goal.frequency)) s.days[r].session = false;
  return s;
}

/// Redistributes the sessions still needed this week over the unreported
/// days after `today`. Days up to and including `today`, and any day that
/// already carries a report, are left as they are.
inline WeekSchedule reschedule(const WeekSchedule& schedule, int today) {
  require(today >= 0 && today < kDaysPerWeek, Errc::invalid_argument, "day index must be in 0..6");
  const int needed = schedule.goal.frequency - schedule.done_count();
  if (needed <= 0) return schedule;

  std::vector<int> open;
  for (int d = today + 1; d < kDaysPerWeek; ++d)
    if (schedule.days[d].status == DayStatus::Unreported) open.push_back(d);
  const int n = static_cast<int>(open.size());

  WeekSchedule out = schedule;
  for (int d : open) out.days[d].session = true;
  if (needed < n)
    for (int r : rest_positions(n, n - needed)) out.days[open[r]].session = false;
  return out;
}

/// Returns a copy of `schedule` with the report's outcome recorded.
inline WeekSchedule record_report(const WeekSchedule& schedule, const DailyReport& report) {
  validate(report);
  require(report.week_index == schedule.week_index, Errc::invalid_argument, "report is for a different week");
  const auto& day = schedule.days[report.day_index];
  require(day.session, Errc::conflict, "day " + std::to_string(report.day_index) + " is a rest day");
  require(day.status == DayStatus::Unreported, Errc::conflict,
          "day " + std::to_string(report.day_index) + " was already reported");
  WeekSchedule out = schedule;
  out.days[report.day_index].status = day_status(report.status);
  return out;
}

struct ViewDay {
  int week_index = 1;
  int day_index = 0;
  bool session = false;
  DayStatus status = DayStatus::Unreported;
  WeeklyGoal goal;  // the goal of the week this day belongs to

  friend bool operator==(const ViewDay&, const ViewDay&) = default;
};

/// Seven contiguous days starting at `today`: the rest of the current week
/// followed by the start of the next.
inline std::array<ViewDay, kDaysPerWeek> rolling_view(const WeekSchedule& current, const WeekSchedule& next,
                                                      int today) {
  require(today >= 0 && today < kDaysPerWeek, Errc::invalid_argument, "day index must be in 0..6");
  std::array<ViewDay, kDaysPerWeek> out{};
  for (int i = 0; i < kDaysPerWeek; ++i) {
    const int d = today + i;
    const auto& week = d < kDaysPerWeek ? current : next;
    const int idx = d % kDaysPerWeek;
    out[i] = {week.week_index, idx, week.days[idx].session, week.days[idx].status, week.goal};
  }
  return out;
}

}  // namespace coach
