#pragma once

// Walking exercise catalog, weekly goal tuples and the volume arithmetic
// that every other module speaks in (MET-minutes per week).

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coach/error.hpp"

namespace coach {

/// Weekly exercise volume in MET-minutes.
using MetMinutes = double;

/// Long-term weekly target every program climbs toward.
inline constexpr MetMinutes kAhaTarget = 750.0;

inline constexpr int kMinDuration = 5;
inline constexpr int kMaxDuration = 30;
inline constexpr int kDurationStep = 5;
inline constexpr int kMinFrequency = 3;
inline constexpr int kMaxFrequency = 5;

// Tolerance for comparisons of derived MET-minute quantities.
inline constexpr double kVolumeEps = 1e-9;

// Declaration order is the intensity order; code relies on it.
enum class ExerciseType : std::uint8_t { Moderate, IntervalA, IntervalB, Brisk };

struct ExerciseInfo {
  ExerciseType type;
  int met_tenths;  // intensity in tenths of a MET, exact
  std::string_view name;
  std::string_view description;

  constexpr double met() const { return met_tenths / 10.0; }
};

inline constexpr std::array<ExerciseInfo, 4> kExercises{{
    {ExerciseType::Moderate, 30, "Moderate", "Walk at a normal, comfortable pace"},
    {ExerciseType::IntervalA, 36, "IntervalA", "Repeat 4 min moderate walking then 1 min brisk walking"},
    {ExerciseType::IntervalB, 48, "IntervalB", "Repeat 2 min moderate walking then 3 min brisk walking"},
    {ExerciseType::Brisk, 60, "Brisk", "Fast walk while pumping the arms"},
}};

constexpr const ExerciseInfo& info(ExerciseType t) { return kExercises[static_cast<std::size_t>(t)]; }

inline double met(ExerciseType t) { return info(t).met(); }

inline std::string_view to_string(ExerciseType t) { return info(t).name; }

inline ExerciseType parse_exercise(std::string_view s) {
  for (const auto& e : kExercises)
    if (e.name == s) return e.type;
  fail(Errc::invalid_argument, "unknown exercise type '" + std::string(s) + "'");
}

/// One week's prescription: exercise type, minutes per session and sessions per week.
///
/// The defaulted ordering is lexicographic on (exercise, duration, frequency),
/// which coincides with the difficulty order used by harder_than().
struct WeeklyGoal {
  ExerciseType exercise = ExerciseType::Moderate;
  int duration_min = kMinDuration;
  int frequency = kMinFrequency;

  friend auto operator<=>(const WeeklyGoal&, const WeeklyGoal&) = default;
};

inline bool is_valid(const WeeklyGoal& g) {
  return g.duration_min % kDurationStep == 0 && g.duration_min >= kMinDuration &&
         g.duration_min <= kMaxDuration && g.frequency >= kMinFrequency && g.frequency <= kMaxFrequency;
}

inline std::string to_string(const WeeklyGoal& g) {
  return std::string(to_string(g.exercise)) + " " + std::to_string(g.duration_min) + " min x" +
         std::to_string(g.frequency);
}

inline WeeklyGoal make_goal(ExerciseType e, int duration_min, int frequency) {
  WeeklyGoal g{e, duration_min, frequency};
  require(is_valid(g), Errc::invalid_argument, "goal outside the catalog: " + to_string(g));
  return g;
}

inline MetMinutes volume(const WeeklyGoal& g) {
  // Integer product in tenths keeps every catalog volume exact.
  return static_cast<double>(info(g.exercise).met_tenths * g.duration_min * g.frequency) / 10.0;
}

/// Strict difficulty order: intensity first, then duration, then frequency.
inline bool harder_than(const WeeklyGoal& a, const WeeklyGoal& b) {
  const int ai = info(a.exercise).met_tenths, bi = info(b.exercise).met_tenths;
  return (ai > bi) || (ai == bi && a.duration_min > b.duration_min) ||
         (ai == bi && a.duration_min == b.duration_min && a.frequency > b.frequency);
}

/// All 72 catalog goals, easiest first.
inline std::vector<WeeklyGoal> goal_space() {
  std::vector<WeeklyGoal> out;
  out.reserve(kExercises.size() * 6 * 3);
  for (const auto& e : kExercises)
    for (int d = kMinDuration; d <= kMaxDuration; d += kDurationStep)
      for (int f = kMinFrequency; f <= kMaxFrequency; ++f) out.push_back({e.type, d, f});
  return out;
}

/// Session length that delivers `capability` at the given intensity and
/// frequency, rounded to the nearest multiple of 5 minutes (ties round up).
/// May fall outside the catalog range.
inline int nearest_duration(MetMinutes capability, ExerciseType e, int frequency) {
  const double exact = capability * 10.0 / (info(e).met_tenths * frequency);
  const double steps = std::floor(exact / kDurationStep + 0.5 + kVolumeEps);
  return static_cast<int>(steps) * kDurationStep;
}

/// Every catalog goal whose rounded duration delivers `capability`,
/// deduplicated and sorted easiest first. Empty when nothing fits.
inline std::vector<WeeklyGoal> enumerate_combos(MetMinutes capability) {
  require(capability >= 0, Errc::invalid_argument, "capability must be non-negative");
  std::vector<WeeklyGoal> out;
  for (const auto& e : kExercises) {
    for (int f = kMinFrequency; f <= kMaxFrequency; ++f) {
      const int d = nearest_duration(capability, e.type, f);
      if (d >= kMinDuration && d <= kMaxDuration) out.push_back({e.type, d, f});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Easiest catalog goal at or above `target` volume; the hardest goal when none reaches it.
inline WeeklyGoal target_goal(MetMinutes target = kAhaTarget) {
  for (const auto& g : goal_space())
    if (volume(g) >= target - kVolumeEps) return g;
  return {ExerciseType::Brisk, kMaxDuration, kMaxFrequency};
}

}  // namespace coach
