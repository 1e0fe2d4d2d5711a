#pragma once

// Rule-driven simulated trainees driven against a fresh Coach.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coach/engine.hpp"
#include "coach/serialization.hpp"

namespace coach {

/// How the trainee picks from the first-week choice list.
struct InitialChoiceRule {
  enum class Kind { Easiest, Hardest, StepsAboveEasiest };
  Kind kind = Kind::StepsAboveEasiest;
  int steps = 1;

  WeeklyGoal pick(const FirstWeekChoiceSet& set) const {
    require(!set.goals.empty(), Errc::invalid_argument, "empty choice set");
    const int last = static_cast<int>(set.goals.size()) - 1;
    switch (kind) {
      case Kind::Easiest: return set.goals.front();
      case Kind::Hardest: return set.goals.back();
      case Kind::StepsAboveEasiest: return set.goals[std::clamp(steps, 0, last)];
    }
    return set.goals.front();
  }

  friend bool operator==(const InitialChoiceRule&, const InitialChoiceRule&) = default;
};

/// Weekly behavior under one condition: share of sessions completed, exertion
/// reported on completed sessions and the reason given for the others.
struct Behavior {
  double compliance = 1.0;  // fraction of the goal's sessions done, rounded up
  int rpe = kTargetRpe;
  Reason miss_reason = Reason::NoTime;
  ReportStatus miss_status = ReportStatus::Nope;

  friend bool operator==(const Behavior&, const Behavior&) = default;
};

enum class NegotiationRule { AlwaysAgree, AlwaysDisagree, DisagreeOnIncrease, DisagreeOnDecrease };

inline std::string_view to_string(NegotiationRule r) {
  switch (r) {
    case NegotiationRule::AlwaysAgree: return "agree";
    case NegotiationRule::AlwaysDisagree: return "disagree";
    case NegotiationRule::DisagreeOnIncrease: return "disagree_on_increase";
    case NegotiationRule::DisagreeOnDecrease: return "disagree_on_decrease";
  }
  return "?";
}

inline NegotiationRule parse_negotiation_rule(std::string_view s) {
  for (auto r : {NegotiationRule::AlwaysAgree, NegotiationRule::AlwaysDisagree, NegotiationRule::DisagreeOnIncrease,
                 NegotiationRule::DisagreeOnDecrease})
    if (to_string(r) == s) return r;
  fail(Errc::invalid_argument, "unknown negotiation rule '" + std::string(s) + "'");
}

/// Simulated trainee. A goal "strains" the trainee when its session is longer
/// than `strain_above_duration` minutes or its intensity exceeds
/// `strain_above_met`; strained weeks follow `strained`, others `comfortable`.
struct TraineeProfile {
  std::string name;
  AssessmentReport assessment;
  InitialChoiceRule initial_choice;
  Behavior comfortable;
  std::optional<Behavior> strained;
  int strain_above_duration = kMaxDuration;
  double strain_above_met = 6.0;
  NegotiationRule negotiation = NegotiationRule::AlwaysAgree;

  bool strains(const WeeklyGoal& g) const {
    return strained && (g.duration_min > strain_above_duration || met(g.exercise) > strain_above_met + kVolumeEps);
  }
  const Behavior& behavior_for(const WeeklyGoal& g) const { return strains(g) ? *strained : comfortable; }
};

/// Built-in profiles: A (sedentary, compliant), B (sedentary, slow growth)
/// and C (walks 10 min three times a week, slow growth).
inline TraineeProfile builtin_profile(std::string_view name) {
  TraineeProfile p;
  p.name = std::string(name);
  const Behavior struggling{0.5, 4, Reason::TooHard, ReportStatus::Nope};
  if (name == "A") return p;
  if (name == "B" || name == "C") {
    p.strained = struggling;
    p.strain_above_duration = 20;
    p.strain_above_met = met(ExerciseType::Moderate);
    if (name == "C") p.assessment.moderate = {10, 3};
    return p;
  }
  fail(Errc::not_found, "unknown profile '" + std::string(name) + "'");
}

inline void from_json(const json& j, Behavior& b) {
  b = Behavior{};
  b.compliance = j.value("compliance", 1.0);
  b.rpe = j.value("rpe", kTargetRpe);
  if (j.contains("miss_reason")) b.miss_reason = parse_reason(j.at("miss_reason").get<std::string>());
  if (j.contains("miss_status")) b.miss_status = parse_status(j.at("miss_status").get<std::string>());
  require(b.compliance >= 0 && b.compliance <= 1, Errc::invalid_argument, "compliance must be in [0, 1]");
  require(b.rpe >= kMinRpe && b.rpe <= kMaxRpe, Errc::invalid_argument, "rpe must be in 1..5");
  require(b.miss_status != ReportStatus::Done, Errc::invalid_argument, "miss_status must be almost or nope");
}

/// Profile document, e.g.
///   {"name":"D","assessment":{"moderate":{"duration_min":10,"frequency":3}},
///    "initial_choice":"hardest","comfortable":{"rpe":2},
///    "strained":{"compliance":0.5,"rpe":4,"miss_reason":"too_hard"},
///    "strain_above_duration":20,"strain_above_met":3.0,"negotiation":"agree"}
/// "initial_choice" is "easiest", "hardest" or {"steps_above_easiest": k}.
inline TraineeProfile profile_from_json(const json& j) {
  try {
    require(j.is_object(), Errc::invalid_argument, "profile must be an object");
    TraineeProfile p;
    p.name = j.value("name", std::string("custom"));
    if (j.contains("assessment")) p.assessment = j.at("assessment").get<AssessmentReport>();
    if (j.contains("initial_choice")) {
      const auto& ic = j.at("initial_choice");
      if (ic.is_string() && ic == "easiest") p.initial_choice = {InitialChoiceRule::Kind::Easiest, 0};
      else if (ic.is_string() && ic == "hardest") p.initial_choice = {InitialChoiceRule::Kind::Hardest, 0};
      else if (ic.is_object() && ic.contains("steps_above_easiest"))
        p.initial_choice = {InitialChoiceRule::Kind::StepsAboveEasiest, ic.at("steps_above_easiest").get<int>()};
      else fail(Errc::invalid_argument, "bad initial_choice");
    }
    if (j.contains("comfortable")) p.comfortable = j.at("comfortable").get<Behavior>();
    if (j.contains("strained")) p.strained = j.at("strained").get<Behavior>();
    p.strain_above_duration = j.value("strain_above_duration", p.strain_above_duration);
    p.strain_above_met = j.value("strain_above_met", p.strain_above_met);
    if (j.contains("negotiation")) p.negotiation = parse_negotiation_rule(j.at("negotiation").get<std::string>());
    return p;
  } catch (const json::exception& e) {
    fail(Errc::invalid_argument, std::string("bad profile document: ") + e.what());
  }
}

struct WeekOutcome {
  int week = 1;
  WeeklyGoal goal;
  MetMinutes goal_volume = 0;
  MetMinutes performed_volume = 0;
  std::optional<double> mean_rpe;
  Revision revision = Revision::None;

  friend bool operator==(const WeekOutcome&, const WeekOutcome&) = default;
};

struct Trajectory {
  std::string profile;
  StaircaseModel initial_model;
  std::vector<WeekOutcome> weeks;
  std::vector<Event> events;
  CoachState final_state;
};

namespace detail {

// Synthetic clock: the program starts on a fixed Monday and advances a day per report.
inline std::string sim_timestamp(int week, int day) {
  using namespace std::chrono;
  const sys_days start = 2026y / January / 5;
  return format_utc(system_clock::time_point(start + days((week - 1) * kDaysPerWeek + day)));
}

inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Runs `weeks` weeks of the profile against a fresh engine. Which sessions a
/// partially compliant trainee skips is drawn from `seed`.
inline Trajectory simulate(const TraineeProfile& profile, int weeks, std::uint64_t seed, CoachConfig config = {}) {
  require(weeks >= 1, Errc::invalid_argument, "simulate at least one week");
  int now_week = 1, now_day = 0;
  Coach coach("sim-" + profile.name, config, [&] { return detail::sim_timestamp(now_week, now_day); });
  std::mt19937_64 rng(seed);

  coach.create(profile.name);
  const auto choices = coach.handle_assessment(profile.assessment);
  coach.handle_goal_choice(profile.initial_choice.pick(choices));

  Trajectory t;
  t.profile = profile.name;
  t.initial_model = *coach.state().model;

  for (int w = 1; w <= weeks; ++w) {
    now_week = w;
    const WeeklyGoal goal = *coach.state().committed_goal;
    const Behavior& b = profile.behavior_for(goal);
    const int target_done = static_cast<int>(std::ceil(b.compliance * goal.frequency - kVolumeEps));
    int done = 0;
    for (int d = 0; d < kDaysPerWeek; ++d) {
      now_day = d;
      const auto& sched = *coach.state().current_week;
      if (!sched.days[d].session || sched.days[d].status != DayStatus::Unreported) continue;
      int open_sessions = 0;
      for (int k = d; k < kDaysPerWeek; ++k)
        if (sched.days[k].session && sched.days[k].status == DayStatus::Unreported) ++open_sessions;
      const double p_done = static_cast<double>(target_done - done) / open_sessions;
      if (detail::unit_draw(rng) < p_done) {
        coach.handle_daily_report(DailyReport::done(w, d, b.rpe));
        ++done;
      } else {
        coach.handle_daily_report(DailyReport::missed(w, d, b.miss_status, b.miss_reason));
      }
    }
    now_day = kDaysPerWeek - 1;
    const Proposal proposal = coach.close_week();
    const WeekRecord& rec = coach.state().history.back();
    t.weeks.push_back({w, rec.goal, volume(rec.goal), rec.performed_volume, rec.summary.mean_rpe, rec.revision});

    if (proposal.direction != Direction::Stay) {
      bool agree = true;
      switch (profile.negotiation) {
        case NegotiationRule::AlwaysAgree: break;
        case NegotiationRule::AlwaysDisagree: agree = false; break;
        case NegotiationRule::DisagreeOnIncrease: agree = proposal.direction != Direction::Increase; break;
        case NegotiationRule::DisagreeOnDecrease: agree = proposal.direction != Direction::Decrease; break;
      }
      coach.handle_proposal_response(agree ? Answer::Agree : Answer::Disagree);
    }
  }
  t.events = coach.events();
  t.final_state = coach.state();
  return t;
}

inline std::string format_number(double v, int precision = 2) {
  std::ostringstream os;
  if (std::abs(v - std::round(v)) < 1e-9) os << static_cast<long long>(std::llround(v));
  else os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

/// Comma-separated trajectory table with a header row.
inline void write_csv(std::ostream& os, const Trajectory& t) {
  os << "week,goal_type,duration,frequency,goal_volume,performed_volume,mean_rpe,revision\n";
  for (const auto& w : t.weeks) {
    os << w.week << ',' << to_string(w.goal.exercise) << ',' << w.goal.duration_min << ',' << w.goal.frequency << ','
       << format_number(w.goal_volume) << ',' << format_number(w.performed_volume) << ','
       << (w.mean_rpe ? format_number(*w.mean_rpe) : std::string()) << ',' << to_string(w.revision) << '\n';
  }
}

}  // namespace coach
