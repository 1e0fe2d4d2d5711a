#pragma once

// Baseline assessment from the activity questionnaire, first-week goal
// choices and staircase initialization.

#include <algorithm>
#include <cmath>
#include <vector>

#include "coach/catalog.hpp"
#include "coach/staircase.hpp"

namespace coach {

// Questionnaire category intensities in METs.
inline constexpr double kLowActivityMet = 3.0;
inline constexpr double kModerateActivityMet = 5.0;
inline constexpr double kVigorousActivityMet = 8.0;

/// Smallest representable weekly goal, (Moderate, 5, 3). Floors the initial step height.
inline constexpr MetMinutes kMinStepHeight = 45.0;

struct ActivityAnswer {
  double duration_min = 0;  // per session
  int frequency = 0;        // sessions per week

  friend bool operator==(const ActivityAnswer&, const ActivityAnswer&) = default;
};

struct AssessmentReport {
  ActivityAnswer low;
  ActivityAnswer moderate;
  ActivityAnswer vigorous;

  friend bool operator==(const AssessmentReport&, const AssessmentReport&) = default;
};

inline void validate(const AssessmentReport& r) {
  for (const auto* a : {&r.low, &r.moderate, &r.vigorous}) {
    require(a->duration_min >= 0 && std::isfinite(a->duration_min), Errc::invalid_argument,
            "assessment durations must be non-negative");
    require(a->frequency >= 0, Errc::invalid_argument, "assessment frequencies must be non-negative");
  }
}

inline MetMinutes baseline_capability(const AssessmentReport& r) {
  validate(r);
  return kLowActivityMet * r.low.duration_min * r.low.frequency +
         kModerateActivityMet * r.moderate.duration_min * r.moderate.frequency +
         kVigorousActivityMet * r.vigorous.duration_min * r.vigorous.frequency;
}

/// Goals offered for week one: one exercise and frequency, durations rising in
/// 5-minute increments up to the catalog maximum.
struct FirstWeekChoiceSet {
  ExerciseType exercise = ExerciseType::Moderate;
  int frequency = kMinFrequency;
  std::vector<int> durations;
  std::vector<WeeklyGoal> goals;

  bool contains(const WeeklyGoal& g) const { return std::find(goals.begin(), goals.end(), g) != goals.end(); }

  friend bool operator==(const FirstWeekChoiceSet&, const FirstWeekChoiceSet&) = default;
};

inline FirstWeekChoiceSet first_week_choices(MetMinutes baseline) {
  require(baseline >= 0, Errc::invalid_argument, "baseline must be non-negative");
  auto reaches = [&](ExerciseType e, int d, int f) { return volume({e, d, f}) >= baseline - kVolumeEps; };

  FirstWeekChoiceSet set;
  const auto lowest = std::find_if(kExercises.begin(), kExercises.end(), [&](const ExerciseInfo& e) {
    return reaches(e.type, kMaxDuration, kMaxFrequency);
  });
  if (lowest == kExercises.end()) {
    // Above the catalog ceiling: only the hardest goal is offered.
    set.exercise = ExerciseType::Brisk;
    set.frequency = kMaxFrequency;
    set.durations = {kMaxDuration};
  } else {
    // A zero baseline lands on (Moderate, 5, 3) here.
    set.exercise = lowest->type;
    int base_d = kMaxDuration, base_f = kMaxFrequency;
    bool found = false;
    for (int d = kMinDuration; d <= kMaxDuration && !found; d += kDurationStep) {
      for (int f = kMinFrequency; f <= kMaxFrequency; ++f) {
        if (reaches(set.exercise, d, f)) {
          base_d = d;
          base_f = f;
          found = true;
          break;
        }
      }
    }
    set.frequency = base_f;
    for (int d = base_d; d <= kMaxDuration; d += kDurationStep) set.durations.push_back(d);
  }
  for (int d : set.durations) set.goals.push_back({set.exercise, d, set.frequency});
  return set;
}

/// Staircase implied by the trainee's first-week pick. The first step is the
/// gap between the chosen volume and the baseline (at least kMinStepHeight);
/// the span is the number of such steps needed to reach `target`, rounded up.
inline StaircaseModel initialize_model(MetMinutes baseline, const WeeklyGoal& chosen,
                                       MetMinutes target = kAhaTarget) {
  require(first_week_choices(baseline).contains(chosen), Errc::invalid_argument,
          "goal " + to_string(chosen) + " was not offered");
  if (baseline >= target) return StaircaseModel::uniform(baseline, target, 1);
  const MetMinutes step = std::max(volume(chosen) - baseline, kMinStepHeight);
  const int span = std::max(1, static_cast<int>(std::ceil((target - baseline) / step - kVolumeEps)));
  return {baseline, target, span, 0, step};
}

}  // namespace coach
