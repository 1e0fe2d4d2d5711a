#pragma once

// Event-sourced coaching engine for one trainee.
//
// Every operation validates its input against the current state, builds the
// events it implies, folds them into a copy of the state with the same
// apply() used by replay(), hands the batch to the sink, and only then adopts
// the new state. A sink that throws leaves the engine untouched.
//
// One Coach instance is single-threaded; callers serialize access per trainee.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coach/assessment.hpp"
#include "coach/catalog.hpp"
#include "coach/daily_scheduler.hpp"
#include "coach/events.hpp"
#include "coach/reports.hpp"
#include "coach/serialization.hpp"
#include "coach/staircase.hpp"
#include "coach/weekly_planner.hpp"

namespace coach {

enum class Phase { New, Assessed, Active, Maintenance };
enum class Direction { Increase, Decrease, Stay };
enum class Answer { Agree, Disagree };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::New: return "new";
    case Phase::Assessed: return "assessed";
    case Phase::Active: return "active";
    case Phase::Maintenance: return "maintenance";
  }
  return "?";
}

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Increase: return "increase";
    case Direction::Decrease: return "decrease";
    case Direction::Stay: return "stay";
  }
  return "?";
}

inline Direction parse_direction(std::string_view s) {
  for (Direction d : {Direction::Increase, Direction::Decrease, Direction::Stay})
    if (to_string(d) == s) return d;
  fail(Errc::invalid_argument, "unknown direction '" + std::string(s) + "'");
}

inline std::string_view to_string(Answer a) { return a == Answer::Agree ? "agree" : "disagree"; }

inline Answer parse_answer(std::string_view s) {
  if (s == "agree") return Answer::Agree;
  if (s == "disagree") return Answer::Disagree;
  fail(Errc::invalid_argument, "answer must be 'agree' or 'disagree'");
}

inline Direction direction_between(const WeeklyGoal& previous, const WeeklyGoal& proposed) {
  const double diff = volume(proposed) - volume(previous);
  if (diff > kVolumeEps) return Direction::Increase;
  if (diff < -kVolumeEps) return Direction::Decrease;
  return Direction::Stay;
}

struct Proposal {
  int week_index = 1;  // the week the proposed goal is for
  WeeklyGoal proposed_goal;
  WeeklyGoal previous_goal;
  Direction direction = Direction::Stay;
  MetMinutes capability = 0;  // modeled capability for week_index
  std::optional<Answer> response;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

struct WeekRecord {
  int week_index = 1;
  WeeklyGoal goal;
  MetMinutes capability = 0;
  WeekSummary summary;
  MetMinutes performed_volume = 0;
  Revision revision = Revision::None;
  std::optional<Proposal> proposal;  // what the coach offered for the following week

  friend bool operator==(const WeekRecord&, const WeekRecord&) = default;
};

struct CoachConfig {
  int revision_delta = 1;  // weeks per change-step / shift
  MetMinutes target = kAhaTarget;
};

struct CoachState {
  std::string trainee_id;
  std::string display_name;
  Phase phase = Phase::New;
  std::optional<AssessmentReport> assessment;
  MetMinutes baseline = 0;
  std::optional<FirstWeekChoiceSet> choices;
  std::optional<StaircaseModel> model;
  std::optional<WeekSchedule> current_week;
  std::vector<DailyReport> week_reports;
  std::optional<WeeklyGoal> committed_goal;
  MetMinutes committed_capability = 0;
  std::string week_started_at;
  bool week_closed = false;
  std::optional<Proposal> pending_proposal;
  std::vector<WeekRecord> history;
  std::int64_t last_seq = 0;

  bool coaching() const { return phase == Phase::Active || phase == Phase::Maintenance; }

  friend bool operator==(const CoachState&, const CoachState&) = default;
};

inline void to_json(json& j, const Proposal& p) {
  j = json{{"week_index", p.week_index},
           {"proposed_goal", p.proposed_goal},
           {"previous_goal", p.previous_goal},
           {"direction", to_string(p.direction)},
           {"capability", p.capability},
           {"response", p.response ? json(to_string(*p.response)) : json(nullptr)}};
}

inline void from_json(const json& j, Proposal& p) {
  p.week_index = detail::get<int>(j, "week_index");
  p.proposed_goal = detail::get<WeeklyGoal>(j, "proposed_goal");
  p.previous_goal = detail::get<WeeklyGoal>(j, "previous_goal");
  p.direction = parse_direction(detail::get<std::string>(j, "direction"));
  p.capability = detail::get<double>(j, "capability");
  const auto r = detail::get_optional<std::string>(j, "response");
  p.response = r ? std::optional(parse_answer(*r)) : std::nullopt;
}

inline void to_json(json& j, const WeekRecord& r) {
  j = json{{"week_index", r.week_index},
           {"goal", r.goal},
           {"capability", r.capability},
           {"summary", r.summary},
           {"performed_volume", r.performed_volume},
           {"revision", to_string(r.revision)},
           {"proposal", r.proposal ? json(*r.proposal) : json(nullptr)}};
}

inline void from_json(const json& j, WeekRecord& r) {
  r.week_index = detail::get<int>(j, "week_index");
  r.goal = detail::get<WeeklyGoal>(j, "goal");
  r.capability = detail::get<double>(j, "capability");
  r.summary = detail::get<WeekSummary>(j, "summary");
  r.performed_volume = detail::get<double>(j, "performed_volume");
  r.revision = parse_revision(detail::get<std::string>(j, "revision"));
  r.proposal = detail::get_optional<Proposal>(j, "proposal");
}

/// Folds one event into the state. This is the only place state changes.
inline void apply(CoachState& s, const Event& e) {
  const json& p = e.payload;
  try {
    if (s.trainee_id.empty()) s.trainee_id = e.trainee;
    require(e.trainee == s.trainee_id, Errc::corrupt_log, "event for another trainee: " + e.trainee);
    switch (e.kind) {
      case EventKind::TraineeCreated:
        s.display_name = p.value("name", std::string{});
        break;
      case EventKind::AssessmentSubmitted:
        s.assessment = detail::get<AssessmentReport>(p, "report");
        s.baseline = detail::get<double>(p, "baseline");
        s.choices = detail::get<FirstWeekChoiceSet>(p, "choices");
        s.phase = Phase::Assessed;
        break;
      case EventKind::InitialGoalChosen:
        s.model = detail::get<StaircaseModel>(p, "model");
        break;
      case EventKind::WeekPlanned:
        s.committed_goal = detail::get<WeeklyGoal>(p, "goal");
        s.committed_capability = detail::get<double>(p, "capability");
        s.phase = detail::get<bool>(p, "maintenance") ? Phase::Maintenance : Phase::Active;
        s.week_reports.clear();
        s.week_closed = false;
        s.pending_proposal.reset();
        s.week_started_at = e.ts;
        break;
      case EventKind::DailyScheduled:
        s.current_week = detail::get<WeekSchedule>(p, "schedule");
        break;
      case EventKind::DailyReported: {
        const auto r = detail::get<DailyReport>(p, "report");
        require(s.current_week.has_value(), Errc::corrupt_log, "report before any week was planned");
        s.current_week = record_report(*s.current_week, r);
        s.week_reports.push_back(r);
        break;
      }
      case EventKind::WeekClosed:
        s.history.push_back(detail::get<WeekRecord>(p, "record"));
        s.week_closed = true;
        break;
      case EventKind::RevisionApplied:
        s.model = detail::get<StaircaseModel>(p, "model");
        break;
      case EventKind::ProposalMade:
        s.pending_proposal = detail::get<Proposal>(p, "proposal");
        if (!s.history.empty()) s.history.back().proposal = s.pending_proposal;
        break;
      case EventKind::ProposalAnswered: {
        require(s.pending_proposal.has_value(), Errc::corrupt_log, "answer without a proposal");
        s.pending_proposal->response = parse_answer(detail::get<std::string>(p, "answer"));
        s.model = detail::get<StaircaseModel>(p, "model");
        if (!s.history.empty()) s.history.back().proposal = s.pending_proposal;
        break;
      }
    }
  } catch (const CoachError& ex) {
    if (ex.code() == Errc::corrupt_log) throw;
    fail(Errc::corrupt_log, "event " + std::to_string(e.seq) + " (" + std::string(to_string(e.kind)) +
                                "): " + ex.what());
  }
  s.last_seq = e.seq;
}

/// Rebuilds a trainee's state from the log. Sequence numbers must run 1, 2, 3, ...
inline CoachState replay(std::span<const Event> events) {
  CoachState s;
  std::int64_t expected = 1;
  for (const auto& e : events) {
    require(e.seq == expected, Errc::corrupt_log,
            "expected event " + std::to_string(expected) + ", found " + std::to_string(e.seq));
    apply(s, e);
    ++expected;
  }
  return s;
}

class Coach {
public:
  using Clock = std::function<std::string()>;
  using Sink = std::function<void(std::span<const Event>)>;

  explicit Coach(std::string trainee_id, CoachConfig config = {}, Clock clock = utc_now)
      : config_(config), clock_(std::move(clock)) {
    require(!trainee_id.empty(), Errc::invalid_argument, "trainee id must not be empty");
    require(config_.revision_delta >= 1, Errc::invalid_argument, "revision delta must be at least one week");
    state_.trainee_id = std::move(trainee_id);
  }

  static Coach restore(std::vector<Event> events, CoachConfig config = {}, Clock clock = utc_now) {
    require(!events.empty(), Errc::corrupt_log, "cannot restore from an empty log");
    Coach c(events.front().trainee, config, std::move(clock));
    c.state_ = replay(events);
    c.log_ = std::move(events);
    return c;
  }

  void set_sink(Sink sink) { sink_ = std::move(sink); }
  void set_clock(Clock clock) { clock_ = std::move(clock); }

  const CoachState& state() const { return state_; }
  const std::vector<Event>& events() const { return log_; }
  const CoachConfig& config() const { return config_; }

  void create(const std::string& display_name) {
    require(log_.empty(), Errc::invalid_state, "trainee already exists");
    commit({{EventKind::TraineeCreated, {{"name", display_name}}}});
  }

  FirstWeekChoiceSet handle_assessment(const AssessmentReport& report) {
    require(state_.phase == Phase::New, Errc::invalid_state, "trainee was already assessed");
    const MetMinutes c0 = baseline_capability(report);
    auto choices = first_week_choices(c0);
    commit({{EventKind::AssessmentSubmitted, {{"report", report}, {"baseline", c0}, {"choices", choices}}}});
    return choices;
  }

  void handle_goal_choice(const WeeklyGoal& chosen) {
    require(state_.phase == Phase::Assessed, Errc::invalid_state, "goal choice requires a fresh assessment");
    require(state_.choices->contains(chosen), Errc::invalid_argument, "goal " + to_string(chosen) + " was not offered");
    const auto model = initialize_model(state_.baseline, chosen, config_.target);
    const MetMinutes cap = capability_at(model, 1);
    const bool maintenance = reaches_target(cap);
    const WeeklyGoal goal = model.maintenance() ? target_goal(config_.target) : chosen;
    commit({{EventKind::InitialGoalChosen,
             {{"chosen", chosen}, {"goal", goal}, {"model", model}, {"projected_weeks", model.span}}},
            week_planned(1, goal, cap, maintenance),
            {EventKind::DailyScheduled, {{"schedule", plan_week(goal, 1)}}}});
  }

  void handle_daily_report(const DailyReport& report) {
    require(state_.coaching(), Errc::invalid_state, "no active program");
    require(!state_.week_closed, Errc::invalid_state, "the week is closed; answer the proposal first");
    validate(report);
    require(report.week_index == state_.current_week->week_index, Errc::invalid_argument,
            "report is for week " + std::to_string(report.week_index) + " but the current week is " +
                std::to_string(state_.current_week->week_index));
    const auto recorded = record_report(*state_.current_week, report);
    std::vector<PendingEvent> batch{{EventKind::DailyReported, {{"report", report}}}};
    if (report.status != ReportStatus::Done) {
      const auto moved = reschedule(recorded, report.day_index);
      if (moved != recorded) batch.push_back({EventKind::DailyScheduled, {{"schedule", moved}}});
    }
    commit(std::move(batch));
  }

  Proposal close_week() {
    require(state_.coaching() && state_.current_week, Errc::invalid_state, "no planned week to close");
    require(!state_.week_closed, Errc::invalid_state, "week already closed");
    const auto& week = *state_.current_week;
    const WeeklyGoal goal = *state_.committed_goal;

    const auto summary = summarize_week(state_.week_reports, goal);
    Revision rev = decide_revision(summary);
    if (state_.phase == Phase::Maintenance && rev != Revision::Regress) rev = Revision::None;
    const auto model = apply_revision(*state_.model, rev, config_.revision_delta);

    const int next_week = week.week_index + 1;
    const MetMinutes next_cap = capability_at(model, next_week);
    const WeeklyGoal next_goal = goal_for(next_cap, goal, state_.committed_capability);

    Proposal proposal{next_week, next_goal, goal, direction_between(goal, next_goal), next_cap, std::nullopt};
    WeekRecord record{week.week_index,
                      goal,
                      state_.committed_capability,
                      summary,
                      summary.done_count * met(goal.exercise) * goal.duration_min,
                      rev,
                      std::nullopt};

    std::vector<PendingEvent> batch{{EventKind::WeekClosed, {{"record", record}}}};
    if (rev != Revision::None)
      batch.push_back({EventKind::RevisionApplied,
                       {{"revision", to_string(rev)}, {"model", model}, {"noop", model == *state_.model}}});
    batch.push_back({EventKind::ProposalMade, {{"proposal", proposal}}});
    if (proposal.direction == Direction::Stay) {
      batch.push_back(week_planned(next_week, next_goal, next_cap, in_maintenance_after(next_cap)));
      batch.push_back({EventKind::DailyScheduled, {{"schedule", plan_week(next_goal, next_week)}}});
    }
    commit(std::move(batch));
    return proposal;
  }

  void handle_proposal_response(Answer answer) {
    require(state_.pending_proposal.has_value(), Errc::invalid_state, "no pending proposal");
    const Proposal& p = *state_.pending_proposal;
    StaircaseModel model = *state_.model;
    WeeklyGoal goal = p.proposed_goal;
    MetMinutes cap = p.capability;
    if (answer == Answer::Disagree) {
      // Delay the staircase so the modeled capability matches the goal kept.
      goal = p.previous_goal;
      model = shift(model, config_.revision_delta);
      cap = capability_at(model, p.week_index);
    }
    commit({{EventKind::ProposalAnswered, {{"answer", to_string(answer)}, {"goal", goal}, {"model", model}}},
            week_planned(p.week_index, goal, cap, in_maintenance_after(cap)),
            {EventKind::DailyScheduled, {{"schedule", plan_week(goal, p.week_index)}}}});
  }

  /// Goal the coach expects for the week after the current one: the pending
  /// proposal if there is one, else the current model's projection.
  WeeklyGoal projected_next_goal() const {
    require(state_.coaching(), Errc::invalid_state, "no active program");
    if (state_.pending_proposal) return state_.pending_proposal->proposed_goal;
    const MetMinutes cap = capability_at(*state_.model, state_.current_week->week_index + 1);
    return goal_for(cap, *state_.committed_goal, state_.committed_capability);
  }

  std::array<ViewDay, kDaysPerWeek> rolling_view(int today) const {
    require(state_.coaching(), Errc::invalid_state, "no active program");
    const auto& cur = *state_.current_week;
    return coach::rolling_view(cur, plan_week(projected_next_goal(), cur.week_index + 1), today);
  }

private:
  struct PendingEvent {
    EventKind kind;
    json payload;
  };

  bool reaches_target(MetMinutes cap) const { return cap >= config_.target - kVolumeEps; }

  bool in_maintenance_after(MetMinutes cap) const {
    return state_.phase == Phase::Maintenance || reaches_target(cap);
  }

  WeeklyGoal goal_for(MetMinutes cap, const WeeklyGoal& previous, MetMinutes previous_cap) const {
    if (reaches_target(cap)) return target_goal(config_.target);
    return select_goal(cap, previous, previous_cap);
  }

  static PendingEvent week_planned(int week, const WeeklyGoal& goal, MetMinutes cap, bool maintenance) {
    return {EventKind::WeekPlanned,
            {{"week_index", week}, {"goal", goal}, {"capability", cap}, {"maintenance", maintenance}}};
  }

  void commit(std::vector<PendingEvent> pending) {
    CoachState next = state_;
    std::vector<Event> batch;
    batch.reserve(pending.size());
    const std::string ts = clock_();
    for (auto& pe : pending) {
      pe.payload["v"] = kPayloadVersion;
      Event e{next.last_seq + 1, ts, state_.trainee_id, pe.kind, std::move(pe.payload)};
      apply(next, e);
      batch.push_back(std::move(e));
    }
    if (sink_) sink_(batch);
    state_ = std::move(next);
    log_.insert(log_.end(), batch.begin(), batch.end());
  }

  CoachConfig config_;
  Clock clock_;
  Sink sink_;
  CoachState state_;
  std::vector<Event> log_;
};

}  // namespace coach
