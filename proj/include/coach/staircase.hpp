#pragma once

// Staircase hypothesis of weekly aerobic capability growth.

#include <algorithm>

#include "coach/catalog.hpp"
#include "coach/error.hpp"

namespace coach {

/// Capability floor `baseline` before the program, rising in uniform weekly
/// steps of height `step` after `offset` weeks until it reaches `target`.
///
/// A freshly initialized model carries the step height implied by the
/// trainee's first-week choice; every change_step() re-derives it as
/// (target - baseline) / span.
struct StaircaseModel {
  MetMinutes baseline = 0;
  MetMinutes target = kAhaTarget;
  int span = 1;
  int offset = 0;
  MetMinutes step = 0;

  /// Model whose step height is derived from its span. A baseline at or
  /// above target yields the flat maintenance model (span 1, step 0).
  static StaircaseModel uniform(MetMinutes baseline, MetMinutes target, int span, int offset = 0) {
    require(baseline >= 0 && target >= 0, Errc::invalid_argument, "capabilities must be non-negative");
    require(offset >= 0, Errc::invalid_argument, "offset must be non-negative");
    if (baseline >= target) return {target, target, 1, offset, 0};
    require(span >= 1, Errc::invalid_argument, "span must be at least one week");
    return {baseline, target, span, offset, (target - baseline) / span};
  }

  bool maintenance() const { return baseline >= target; }

  friend bool operator==(const StaircaseModel&, const StaircaseModel&) = default;
};

inline MetMinutes capability_at(const StaircaseModel& m, int week) {
  require(week >= 1, Errc::invalid_argument, "weeks are numbered from 1");
  if (m.maintenance()) return m.target;
  const int steps = std::max(0, week - m.offset);
  return std::min(m.target, m.baseline + m.step * steps);
}

/// Lengthens (delta > 0) or shortens (delta < 0) the staircase span.
inline StaircaseModel change_step(const StaircaseModel& m, int delta) {
  require(m.span + delta >= 1, Errc::invalid_argument, "span cannot drop below one week");
  if (delta == 0) return m;
  StaircaseModel out = m;
  out.span = m.span + delta;
  out.step = m.maintenance() ? 0.0 : (m.target - m.baseline) / out.span;
  return out;
}

/// Delays the staircase by `delta` weeks without touching its slope.
inline StaircaseModel shift(const StaircaseModel& m, int delta) {
  require(delta >= 0, Errc::invalid_argument, "shift must be non-negative");
  StaircaseModel out = m;
  out.offset += delta;
  return out;
}

}  // namespace coach
