#pragma once

#include <array>
#include <vector>

#include "granet/decision.hpp"
#include "granet/interval.hpp"

// Built-in pursuit demo: a chaser must pick which of two prey to go for.
// Distances are reported by eight sensor nodes covering 10 m segments
// (sensors 1..4 watch the band where prey 1 can be, sensors 5..8 the band of
// prey 2). The chaser runs 30 m/s, prey speeds lie anywhere in (20, 25) m/s,
// so the closing speed is the interval (5, 10) and a distance granule d maps
// to the time-to-catch granule (d.lo / 10, d.hi / 5).
//
// The expected_* values below are the known-good outputs of this scenario;
// the `example` CLI command recomputes everything and self-checks against
// them.
namespace granet::predator_prey {

inline const Interval kPrey1Distance{10.0, 50.0};
inline const Interval kPrey2Distance{30.0, 70.0};
inline const Interval kClosingSpeed{5.0, 10.0};
constexpr double kSegmentMeters = 10.0;
constexpr int kSensorCount = 8;

/// Distance granule -> time-to-catch granule (division by the positive
/// closing-speed interval).
inline Interval time_to_catch(const Interval& distance) {
  return Interval(distance.lo / kClosingSpeed.hi, distance.hi / kClosingSpeed.lo);
}

/// Forecast with no sensor data: both prey anywhere in their bands.
inline Forecast baseline_forecast() {
  return {time_to_catch(kPrey1Distance), time_to_catch(kPrey2Distance)};
}

inline Interval prey1_segment(int j) {
  return Interval(10.0 + kSegmentMeters * j, 20.0 + kSegmentMeters * j);
}

inline Interval prey2_segment(int j) {
  return Interval(30.0 + kSegmentMeters * j, 40.0 + kSegmentMeters * j);
}

/// All 16 joint detection outcomes (4 segments per prey); sensors one-hot.
/// Row order: prey-2 segment outer, prey-1 segment inner.
inline std::vector<Hypothesis<int>> hypotheses() {
  auto domain = make_domain(std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
  std::vector<Hypothesis<int>> out;
  out.reserve(16);
  for (int j2 = 0; j2 < 4; ++j2) {
    for (int j1 = 0; j1 < 4; ++j1) {
      std::vector<int> readings(kSensorCount, 0);
      readings[j1] = 1;
      readings[4 + j2] = 1;
      Hypothesis<int> h;
      h.signature = make_signature(domain, readings);
      h.forecast = {time_to_catch(prey1_segment(j1)), time_to_catch(prey2_segment(j2))};
      h.decision = select_action(h.forecast);
      h.weight = 1.0;
      out.push_back(std::move(h));
    }
  }
  return out;
}

struct ExpectedRow {
  std::array<int, 8> readings;
  Interval box1, box2;  // distance granules
  Interval f1, f2;      // time-to-catch granules
  int action;           // 1-based
  double unc;           // two decimals
};

inline const std::vector<ExpectedRow>& expected_rows() {
  static const std::vector<ExpectedRow> rows = {
      {{1, 0, 0, 0, 1, 0, 0, 0}, {10, 20}, {30, 40}, {1, 4}, {3, 8}, 1, 0.07},
      {{0, 1, 0, 0, 1, 0, 0, 0}, {20, 30}, {30, 40}, {2, 6}, {3, 8}, 1, 0.45},
      {{0, 0, 1, 0, 1, 0, 0, 0}, {30, 40}, {30, 40}, {3, 8}, {3, 8}, 1, 1.00},
      {{0, 0, 0, 1, 1, 0, 0, 0}, {40, 50}, {30, 40}, {4, 10}, {3, 8}, 2, 0.53},
      {{1, 0, 0, 0, 0, 1, 0, 0}, {10, 20}, {40, 50}, {1, 4}, {4, 10}, 1, 0.00},
      {{0, 1, 0, 0, 0, 1, 0, 0}, {20, 30}, {40, 50}, {2, 6}, {4, 10}, 1, 0.17},
      {{0, 0, 1, 0, 0, 1, 0, 0}, {30, 40}, {40, 50}, {3, 8}, {4, 10}, 1, 0.53},
      {{0, 0, 0, 1, 0, 1, 0, 0}, {40, 50}, {40, 50}, {4, 10}, {4, 10}, 1, 1.00},
      {{1, 0, 0, 0, 0, 0, 1, 0}, {10, 20}, {50, 60}, {1, 4}, {5, 12}, 1, 0.00},
      {{0, 1, 0, 0, 0, 0, 1, 0}, {20, 30}, {50, 60}, {2, 6}, {5, 12}, 1, 0.04},
      {{0, 0, 1, 0, 0, 0, 1, 0}, {30, 40}, {50, 60}, {3, 8}, {5, 12}, 1, 0.26},
      {{0, 0, 0, 1, 0, 0, 1, 0}, {40, 50}, {50, 60}, {4, 10}, {5, 12}, 1, 0.60},
      {{1, 0, 0, 0, 0, 0, 0, 1}, {10, 20}, {60, 70}, {1, 4}, {6, 14}, 1, 0.00},
      {{0, 1, 0, 0, 0, 0, 0, 1}, {20, 30}, {60, 70}, {2, 6}, {6, 14}, 1, 0.00},
      {{0, 0, 1, 0, 0, 0, 0, 1}, {30, 40}, {60, 70}, {3, 8}, {6, 14}, 1, 0.10},
      {{0, 0, 0, 1, 0, 0, 0, 1}, {40, 50}, {60, 70}, {4, 10}, {6, 14}, 1, 0.33},
  };
  return rows;
}

// Known-good scalars and the tolerances the self-check applies to them.
constexpr double kExpectedProbFirstBetter = 0.755;
constexpr double kProbTolerance = 0.005;
constexpr double kExpectedBaselineUnc = 0.49;
constexpr double kBaselineUncTolerance = 0.01;
constexpr double kExpectedMeanHypUnc = 0.32;
constexpr double kMeanHypUncTolerance = 0.01;
constexpr double kExpectedUncDecrease = 0.17;
constexpr double kUncDecreaseTolerance = 0.015;
constexpr double kRowUncTolerance = 0.005;
inline const std::array<int, 8> kExpectedExhaustive = {1, 2, 3, 4, 5, 6, 7, 8};
inline const std::array<int, 2> kExpectedMinimum = {4, 5};

}  // namespace granet::predator_prey
