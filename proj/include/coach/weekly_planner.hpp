#pragma once

// End-of-week evidence, model revisions and next-week goal selection.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coach/catalog.hpp"
#include "coach/reports.hpp"
#include "coach/staircase.hpp"

namespace coach {

struct WeekSummary {
  WeeklyGoal goal;
  int done_count = 0;
  int scheduled = 0;
  double completion = 0;  // done_count / scheduled
  std::optional<double> mean_rpe;
  std::vector<Reason> reasons;  // multiset, sorted

  bool has_reason(Reason r) const { return std::find(reasons.begin(), reasons.end(), r) != reasons.end(); }

  friend bool operator==(const WeekSummary&, const WeekSummary&) = default;
};

enum class Revision { None, Regress, Progress, Shift };

inline std::string_view to_string(Revision r) {
  switch (r) {
    case Revision::None: return "none";
    case Revision::Regress: return "regress";
    case Revision::Progress: return "progress";
    case Revision::Shift: return "shift";
  }
  return "?";
}

inline Revision parse_revision(std::string_view s) {
  for (Revision r : {Revision::None, Revision::Regress, Revision::Progress, Revision::Shift})
    if (to_string(r) == s) return r;
  fail(Errc::invalid_argument, "unknown revision '" + std::string(s) + "'");
}

// Revision thresholds.
inline constexpr double kRegressBelowCompletion = 0.5;
inline constexpr double kProgressMinCompletion = 0.75;
inline constexpr double kRegressMinRpe = 4.0;
inline constexpr double kProgressMaxRpe = 2.0;

/// Aggregates one week's reports against its goal. Days without a report
/// count as neither done nor reasoned.
inline WeekSummary summarize_week(std::span<const DailyReport> reports, const WeeklyGoal& goal) {
  WeekSummary s;
  s.goal = goal;
  s.scheduled = goal.frequency;
  std::array<bool, 7> seen{};
  double rpe_sum = 0;
  for (const auto& r : reports) {
    validate(r);
    require(!seen[r.day_index], Errc::conflict, "two reports for day " + std::to_string(r.day_index));
    seen[r.day_index] = true;
    if (r.status == ReportStatus::Done) {
      ++s.done_count;
      rpe_sum += *r.rpe;
    } else {
      s.reasons.push_back(*r.reason);
    }
  }
  if (s.done_count > 0) s.mean_rpe = rpe_sum / s.done_count;
  s.done_count = std::min(s.done_count, s.scheduled);
  s.completion = static_cast<double>(s.done_count) / s.scheduled;
  std::sort(s.reasons.begin(), s.reasons.end());
  return s;
}

/// Revision rule, checked in priority order Regress > Progress > Shift.
inline Revision decide_revision(const WeekSummary& s) {
  const double c = s.completion;
  const bool strained = (s.mean_rpe && *s.mean_rpe >= kRegressMinRpe) || s.has_reason(Reason::TooHard);
  if (c < kRegressBelowCompletion || strained) return Revision::Regress;
  if (c >= kProgressMinCompletion && s.mean_rpe && *s.mean_rpe <= kProgressMaxRpe) return Revision::Progress;
  if (c < kProgressMinCompletion && s.has_reason(Reason::NoTime)) return Revision::Shift;
  return Revision::None;
}

/// Regress flattens and delays, Progress steepens (no-op at span 1), Shift only delays.
inline StaircaseModel apply_revision(const StaircaseModel& m, Revision rev, int delta = 1) {
  switch (rev) {
    case Revision::Regress: return shift(change_step(m, delta), delta);
    case Revision::Progress: return m.span - delta >= 1 ? change_step(m, -delta) : m;
    case Revision::Shift: return shift(m, delta);
    case Revision::None: return m;
  }
  return m;
}

/// Maps modeled capability to a weekly goal.
///
/// With `previous_capability` absent this is the first week: `previous` is the
/// trainee's own pick and the candidate closest to it in volume wins (easier
/// on ties). Otherwise equal capability keeps `previous`, falling capability
/// forbids goals harder than `previous`, rising capability forbids easier
/// ones, and the easiest survivor is chosen. An empty survivor set falls back
/// to `previous`.
inline WeeklyGoal select_goal(MetMinutes capability, const std::optional<WeeklyGoal>& previous,
                              const std::optional<MetMinutes>& previous_capability) {
  const auto candidates = enumerate_combos(capability);
  if (!previous) {
    require(!candidates.empty(), Errc::invalid_argument,
            "no feasible goal for capability " + std::to_string(capability));
    return candidates.front();
  }
  if (!previous_capability) {
    if (candidates.empty()) return *previous;
    if (std::find(candidates.begin(), candidates.end(), *previous) != candidates.end()) return *previous;
    const double want = volume(*previous);
    // Candidates are ascending, so strict < keeps the easier goal on ties.
    auto best = candidates.front();
    for (const auto& g : candidates)
      if (std::abs(volume(g) - want) < std::abs(volume(best) - want) - kVolumeEps) best = g;
    return best;
  }

  const double diff = capability - *previous_capability;
  if (std::abs(diff) <= kVolumeEps) return *previous;
  for (const auto& g : candidates) {
    const bool rejected = diff < 0 ? harder_than(g, *previous) : harder_than(*previous, g);
    if (!rejected) return g;
  }
  return *previous;
}

}  // namespace coach
