#pragma once

// JSON mapping of the domain types, shared by the event log, the HTTP API
// and profile documents. Enums travel as their lower-case or catalog names.

#include <json.hpp>

#include "coach/assessment.hpp"
#include "coach/catalog.hpp"
#include "coach/daily_scheduler.hpp"
#include "coach/reports.hpp"
#include "coach/staircase.hpp"
#include "coach/weekly_planner.hpp"

namespace coach {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  require(j.is_object(), Errc::invalid_argument, std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  require(it != j.end() && !it->is_null(), Errc::invalid_argument, std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    fail(Errc::invalid_argument, std::string("bad field '") + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return get<T>(j, key);
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

}  // namespace detail

inline void to_json(json& j, const WeeklyGoal& g) {
  j = json{{"exercise", to_string(g.exercise)},
           {"duration_min", g.duration_min},
           {"frequency", g.frequency},
           {"met", met(g.exercise)},
           {"volume", volume(g)}};
}

inline void from_json(const json& j, WeeklyGoal& g) {
  g.exercise = parse_exercise(detail::get<std::string>(j, "exercise"));
  g.duration_min = detail::get<int>(j, "duration_min");
  g.frequency = detail::get<int>(j, "frequency");
  require(is_valid(g), Errc::invalid_argument, "goal outside the catalog: " + to_string(g));
}

inline void to_json(json& j, const StaircaseModel& m) {
  j = json{{"baseline", m.baseline}, {"target", m.target}, {"span", m.span}, {"offset", m.offset}, {"step", m.step}};
}

inline void from_json(const json& j, StaircaseModel& m) {
  m.baseline = detail::get<double>(j, "baseline");
  m.target = detail::get<double>(j, "target");
  m.span = detail::get<int>(j, "span");
  m.offset = detail::get<int>(j, "offset");
  m.step = detail::get<double>(j, "step");
  require(m.baseline <= m.target && m.span >= 1 && m.offset >= 0 && m.step >= 0, Errc::invalid_argument,
          "inconsistent staircase model");
}

inline void to_json(json& j, const ActivityAnswer& a) {
  j = json{{"duration_min", a.duration_min}, {"frequency", a.frequency}};
}

inline void from_json(const json& j, ActivityAnswer& a) {
  a.duration_min = detail::get_optional<double>(j, "duration_min").value_or(0.0);
  a.frequency = detail::get_optional<int>(j, "frequency").value_or(0);
}

inline void to_json(json& j, const AssessmentReport& r) {
  j = json{{"low", r.low}, {"moderate", r.moderate}, {"vigorous", r.vigorous}};
}

inline void from_json(const json& j, AssessmentReport& r) {
  require(j.is_object(), Errc::invalid_argument, "assessment must be an object");
  r = {};
  if (j.contains("low")) r.low = j.at("low").get<ActivityAnswer>();
  if (j.contains("moderate")) r.moderate = j.at("moderate").get<ActivityAnswer>();
  if (j.contains("vigorous")) r.vigorous = j.at("vigorous").get<ActivityAnswer>();
  validate(r);
}

inline void to_json(json& j, const FirstWeekChoiceSet& s) {
  j = json{{"exercise", to_string(s.exercise)},
           {"frequency", s.frequency},
           {"durations", s.durations},
           {"goals", s.goals}};
}

inline void from_json(const json& j, FirstWeekChoiceSet& s) {
  s.exercise = parse_exercise(detail::get<std::string>(j, "exercise"));
  s.frequency = detail::get<int>(j, "frequency");
  s.durations = detail::get<std::vector<int>>(j, "durations");
  s.goals = detail::get<std::vector<WeeklyGoal>>(j, "goals");
}

inline void to_json(json& j, const DailyReport& r) {
  j = json{{"week_index", r.week_index}, {"day_index", r.day_index}, {"status", to_string(r.status)}};
  detail::put_optional(j, "rpe", r.rpe);
  j["reason"] = r.reason ? json(to_string(*r.reason)) : json(nullptr);
  detail::put_optional(j, "self_efficacy", r.self_efficacy);
  detail::put_optional(j, "affective_attitude", r.affective_attitude);
}

inline void from_json(const json& j, DailyReport& r) {
  r.week_index = detail::get<int>(j, "week_index");
  r.day_index = detail::get<int>(j, "day_index");
  r.status = parse_status(detail::get<std::string>(j, "status"));
  r.rpe = detail::get_optional<int>(j, "rpe");
  const auto reason = detail::get_optional<std::string>(j, "reason");
  r.reason = reason ? std::optional(parse_reason(*reason)) : std::nullopt;
  r.self_efficacy = detail::get_optional<int>(j, "self_efficacy");
  r.affective_attitude = detail::get_optional<int>(j, "affective_attitude");
  validate(r);
}

inline void to_json(json& j, const WeekSummary& s) {
  json reasons = json::array();
  for (Reason r : s.reasons) reasons.push_back(to_string(r));
  j = json{{"goal", s.goal},
           {"done_count", s.done_count},
           {"scheduled", s.scheduled},
           {"completion", s.completion},
           {"reasons", reasons}};
  detail::put_optional(j, "mean_rpe", s.mean_rpe);
}

inline void from_json(const json& j, WeekSummary& s) {
  s.goal = detail::get<WeeklyGoal>(j, "goal");
  s.done_count = detail::get<int>(j, "done_count");
  s.scheduled = detail::get<int>(j, "scheduled");
  s.completion = detail::get<double>(j, "completion");
  s.mean_rpe = detail::get_optional<double>(j, "mean_rpe");
  s.reasons.clear();
  for (const auto& r : detail::get<std::vector<std::string>>(j, "reasons")) s.reasons.push_back(parse_reason(r));
}

inline void to_json(json& j, const WeekSchedule& s) {
  json days = json::array();
  for (int d = 0; d < kDaysPerWeek; ++d)
    days.push_back({{"day", d}, {"session", s.days[d].session}, {"status", to_string(s.days[d].status)}});
  j = json{{"week_index", s.week_index}, {"goal", s.goal}, {"days", days}};
}

inline void from_json(const json& j, WeekSchedule& s) {
  s.week_index = detail::get<int>(j, "week_index");
  s.goal = detail::get<WeeklyGoal>(j, "goal");
  const auto& days = detail::field(j, "days");
  require(days.is_array() && days.size() == kDaysPerWeek, Errc::invalid_argument, "a week has seven days");
  for (int d = 0; d < kDaysPerWeek; ++d) {
    s.days[d].session = detail::get<bool>(days[d], "session");
    s.days[d].status = parse_day_status(detail::get<std::string>(days[d], "status"));
  }
}

inline void to_json(json& j, const ViewDay& d) {
  j = json{{"week_index", d.week_index},
           {"day_index", d.day_index},
           {"session", d.session},
           {"status", to_string(d.status)},
           {"goal", d.session ? json(d.goal) : json(nullptr)}};
}

}  // namespace coach
