#pragma once

// Line-oriented terminal session over a TraineeStore. Every answer is
// committed through the engine as soon as it is accepted, so quitting or
// hitting end-of-input at any prompt loses nothing.

#include <algorithm>
#include <cctype>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "coach/service.hpp"

namespace coach {

namespace session_detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// Splits on commas and whitespace.
inline std::vector<std::string> words(const std::string& line) {
  std::string cleaned = lower(line);
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::optional<int> to_int(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) return {};
  if (s.size() > 6) return {};
  return std::stoi(s);
}

inline std::optional<double> to_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  return {};
}

inline std::optional<Reason> to_reason(const std::vector<std::string>& w, std::size_t from) {
  std::string joined;
  for (std::size_t i = from; i < w.size(); ++i) joined += (joined.empty() ? "" : "_") + w[i];
  if (joined.empty()) return {};
  if (auto n = to_int(joined); n && *n >= 1 && *n <= 5) return static_cast<Reason>(*n - 1);
  try {
    return parse_reason(joined);
  } catch (const CoachError&) {
    return {};
  }
}

}  // namespace session_detail

class Session {
public:
  Session(std::istream& in, std::ostream& out, TraineeStore& store) : in_(in), out_(out), store_(store) {}

  /// Runs until the trainee quits or input ends. Returns the trainee id, which
  /// is created on first use when `trainee_id` is empty.
  std::string run(std::string trainee_id) {
    if (trainee_id.empty()) {
      const auto name = ask("Your name: ");
      if (!name) return bye({});
      trainee_id = store_.create(*name);
      out_ << "Your trainee id is " << trainee_id << ". Use it to resume later.\n";
    }
    require(store_.exists(trainee_id), Errc::not_found, "no trainee '" + trainee_id + "'");
    id_ = trainee_id;
    while (true) {
      const CoachState s = store_.with(id_, [](Coach& c) { return c.state(); });
      bool more = false;
      if (s.phase == Phase::New) more = assessment();
      else if (s.phase == Phase::Assessed) more = choice(s);
      else if (s.pending_proposal) more = negotiation(*s.pending_proposal);
      else more = week(s);
      if (!more) return bye(id_);
    }
  }

private:
  std::optional<std::string> ask(const std::string& prompt) {
    out_ << prompt << std::flush;
    std::string line;
    if (!std::getline(in_, line)) {
      out_ << '\n';
      return std::nullopt;
    }
    return line;
  }

  std::string bye(const std::string& id) {
    out_ << "Progress saved. Bye.\n";
    return id;
  }

  bool assessment() {
    out_ << "Tell me about your physical activity in a typical week.\n"
            "Answer with minutes per session and sessions per week, e.g. '20 3', or 0 for none.\n";
    const char* questions[] = {"Light activity (e.g. slow walking): ", "Moderate activity (e.g. brisk walking): ",
                               "Vigorous activity (e.g. running): "};
    AssessmentReport report;
    ActivityAnswer* answers[] = {&report.low, &report.moderate, &report.vigorous};
    for (int i = 0; i < 3; ++i) {
      while (true) {
        const auto line = ask(questions[i]);
        if (!line) return false;
        const auto w = session_detail::words(*line);
        if (w.size() == 1 && session_detail::to_number(w[0]) == 0.0) {
          *answers[i] = {};
          break;
        }
        if (w.size() == 2) {
          const auto d = session_detail::to_number(w[0]);
          const auto f = session_detail::to_int(w[1]);
          if (d && f && *f <= kDaysPerWeek) {
            *answers[i] = {*d, *f};
            break;
          }
        }
        out_ << "Please enter two numbers (minutes and times per week) or 0.\n";
      }
    }
    store_.with(id_, [&](Coach& c) { c.handle_assessment(report); });
    return true;
  }

  bool choice(const CoachState& s) {
    const auto& goals = s.choices->goals;
    out_ << "Pick your goal for the first week:\n";
    const MetMinutes target = store_.with(id_, [](Coach& c) { return c.config().target; });
    for (std::size_t i = 0; i < goals.size(); ++i) {
      const auto model = initialize_model(s.baseline, goals[i], target);
      out_ << "  " << i + 1 << ") " << describe(goals[i]) << "  (about " << model.span
           << " weeks to the weekly target)\n";
    }
    while (true) {
      const auto line = ask("Choice number: ");
      if (!line) return false;
      const auto n = session_detail::to_int(session_detail::lower(*line));
      if (n && *n >= 1 && *n <= static_cast<int>(goals.size())) {
        store_.with(id_, [&](Coach& c) { c.handle_goal_choice(goals[*n - 1]); });
        const auto st = store_.with(id_, [](Coach& c) { return c.state(); });
        out_ << "Great. The coach expects you to reach the target in about " << st.model->span << " weeks.\n";
        return true;
      }
      out_ << "Enter a number between 1 and " << goals.size() << ".\n";
    }
  }

  static std::string describe(const WeeklyGoal& g) {
    std::ostringstream os;
    os << info(g.exercise).name << " walk, " << g.duration_min << " min x " << g.frequency << " days/week ("
       << volume(g) << " MET-min)";
    return os.str();
  }

  void show_week(const WeekSchedule& w) {
    out_ << "\nWeek " << w.week_index << ": " << describe(w.goal) << "\n";
    for (int d = 0; d < kDaysPerWeek; ++d) {
      out_ << "  day " << d + 1 << ": ";
      if (!w.days[d].session) out_ << "rest";
      else out_ << "walk " << w.goal.duration_min << " min [" << to_string(w.days[d].status) << "]";
      out_ << '\n';
    }
    out_ << "  progress: " << w.done_count() << "/" << w.goal.frequency << " sessions\n";
  }

  bool week(const CoachState& s) {
    const auto& w = *s.current_week;
    show_week(w);
    // Resume after the last reported day.
    int cursor = 0;
    for (int d = 0; d < kDaysPerWeek; ++d)
      if (w.days[d].status != DayStatus::Unreported) cursor = d + 1;
    while (cursor < kDaysPerWeek && !w.days[cursor].session) ++cursor;
    if (cursor >= kDaysPerWeek) {
      const Proposal p = store_.with(id_, [](Coach& c) { return c.close_week(); });
      report_proposal(p);
      return true;
    }
    return report_day(w, cursor);
  }

  bool report_day(const WeekSchedule& w, int day) {
    const std::string prompt = "Day " + std::to_string(day + 1) + " (" + std::string(to_string(w.goal.exercise)) +
                               ", " + std::to_string(w.goal.duration_min) +
                               " min): done / almost / nope, or 'close' to end the week, 'quit' to stop: ";
    while (true) {
      const auto line = ask(prompt);
      if (!line) return false;
      const auto wds = session_detail::words(*line);
      if (wds.empty()) continue;
      if (wds[0] == "quit" || wds[0] == "exit") return false;
      if (wds[0] == "close") {
        const Proposal p = store_.with(id_, [](Coach& c) { return c.close_week(); });
        report_proposal(p);
        return true;
      }
      std::optional<DailyReport> report;
      if (wds[0] == "done" || wds[0] == "did") {
        std::optional<int> rpe;
        for (std::size_t i = 1; i < wds.size() && !rpe; ++i) rpe = session_detail::to_int(wds[i]);
        if (!rpe) rpe = ask_rpe();
        if (!rpe) return false;
        if (*rpe < kMinRpe || *rpe > kMaxRpe) {
          out_ << "Tiredness must be between 1 and 5.\n";
          continue;
        }
        report = DailyReport::done(w.week_index, day, *rpe);
      } else if (wds[0] == "almost" || wds[0] == "nope") {
        auto reason = session_detail::to_reason(wds, 1);
        if (!reason && wds.size() == 1) {
          reason = ask_reason();
          if (!reason) return false;
        }
        if (!reason) {
          out_ << "Unknown reason.\n";
          continue;
        }
        report = DailyReport::missed(w.week_index, day, parse_status(wds[0]), *reason);
      } else {
        out_ << "Please answer done, almost or nope.\n";
        continue;
      }
      try {
        store_.with(id_, [&](Coach& c) { c.handle_daily_report(*report); });
      } catch (const CoachError& e) {
        out_ << "Could not record that: " << e.what() << '\n';
        continue;
      }
      return true;
    }
  }

  std::optional<int> ask_rpe() {
    out_ << "How tired did you feel?\n";
    for (int r = kMinRpe; r <= kMaxRpe; ++r) out_ << "  " << r << ") " << rpe_label(r) << '\n';
    while (true) {
      const auto line = ask("Tiredness (1-5): ");
      if (!line) return std::nullopt;
      const auto n = session_detail::to_int(session_detail::lower(*line));
      if (n && *n >= kMinRpe && *n <= kMaxRpe) return n;
      out_ << "Enter a number between 1 and 5.\n";
    }
  }

  std::optional<Reason> ask_reason() {
    out_ << "What got in the way?\n";
    for (int r = 0; r < 5; ++r) out_ << "  " << r + 1 << ") " << reason_label(static_cast<Reason>(r)) << '\n';
    while (true) {
      const auto line = ask("Reason (1-5): ");
      if (!line) return std::nullopt;
      if (auto r = session_detail::to_reason(session_detail::words(*line), 0)) return r;
      out_ << "Enter a number between 1 and 5.\n";
    }
  }

  void report_proposal(const Proposal& p) {
    out_ << "\nWeek closed. Next week the coach suggests " << describe(p.proposed_goal);
    switch (p.direction) {
      case Direction::Increase: out_ << ", a step up"; break;
      case Direction::Decrease: out_ << ", a step down"; break;
      case Direction::Stay: out_ << ", the same as this week"; break;
    }
    out_ << ".\n";
  }

  bool negotiation(const Proposal& p) {
    out_ << "Proposed for week " << p.week_index << ": " << describe(p.proposed_goal) << " (was "
         << describe(p.previous_goal) << ")\n";
    while (true) {
      const auto line = ask("Agree? (agree / disagree): ");
      if (!line) return false;
      const auto w = session_detail::words(*line);
      if (w.empty()) continue;
      std::optional<Answer> answer;
      if (w[0] == "agree" || w[0] == "yes" || w[0] == "y") answer = Answer::Agree;
      if (w[0] == "disagree" || w[0] == "no" || w[0] == "n") answer = Answer::Disagree;
      if (w[0] == "quit" || w[0] == "exit") return false;
      if (!answer) {
        out_ << "Please answer agree or disagree.\n";
        continue;
      }
      store_.with(id_, [&](Coach& c) { c.handle_proposal_response(*answer); });
      return true;
    }
  }

  std::istream& in_;
  std::ostream& out_;
  TraineeStore& store_;
  std::string id_;
};

inline std::string run_session(std::istream& in, std::ostream& out, TraineeStore& store, std::string trainee_id = {}) {
  return Session(in, out, store).run(std::move(trainee_id));
}

}  // namespace coach
