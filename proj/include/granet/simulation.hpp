#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "granet/tracking.hpp"

namespace granet {

struct SimConfig {
  Grid grid{200, 200};
  Segment sink_start{160, 160};
  Segment target_start{66, 66};
  MotionParams params{4, 2};
  TrackerConfig tracker{};
  std::uint64_t seed = 1;
  int max_steps = 0;  // 0 derives a generous bound from the initial distance
  MessageAccounting accounting{};
};

struct SimConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// All violations at once, empty when the config is runnable.
inline std::vector<std::string> validate(const SimConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.grid.width < 2 || cfg.grid.height < 2)
    out.push_back("grid must be at least 2x2 segments");
  else {
    if (!cfg.grid.contains(cfg.sink_start)) out.push_back("sink start outside the grid");
    if (!cfg.grid.contains(cfg.target_start)) out.push_back("target start outside the grid");
  }
  if (cfg.sink_start == cfg.target_start)
    out.push_back("sink and target must start on distinct segments");
  if (cfg.params.vp < 0) out.push_back("target speed vp must be >= 0");
  if (cfg.params.v <= cfg.params.vp) out.push_back("sink speed v must exceed target speed vp");
  if (cfg.grid.width <= 2 * cfg.params.vp || cfg.grid.height <= 2 * cfg.params.vp)
    out.push_back("grid must be wider and taller than 2*vp so the target can always move");
  if (cfg.max_steps < 0) out.push_back("max_steps must be positive (or 0 for the default)");
  if (cfg.tracker.algorithm < 1 || cfg.tracker.algorithm > 5)
    out.push_back("algorithm must be 1..5");
  if (!(cfg.tracker.alpha >= 0.0 && cfg.tracker.alpha <= 1.0))
    out.push_back("alpha must lie in [0, 1]");
  if (!(cfg.tracker.beta >= 0.0)) out.push_back("beta must be >= 0");
  if (!(cfg.tracker.gamma > 0.0)) out.push_back("gamma must be > 0");
  const bool wants_minimum = cfg.tracker.strategy == SelectionStrategy::Minimum;
  if (cfg.tracker.algorithm == 4 && !wants_minimum)
    out.push_back("algorithm 4 requires the minimum strategy");
  if (cfg.tracker.algorithm != 4 && wants_minimum)
    out.push_back("the minimum strategy is only valid for algorithm 4");
  return out;
}

inline int default_max_steps(const SimConfig& cfg) {
  const int d0 = manhattan(cfg.sink_start, cfg.target_start);
  const int closing = std::max(1, cfg.params.v - cfg.params.vp);
  return std::max(1, 50 * d0 / closing);
}

struct RunResult {
  bool caught = false;
  int time_to_catch = 0;  // steps elapsed when caught
  MetricsLedger ledger;
  std::vector<Segment> sink_trajectory;    // length = steps elapsed + 1
  std::vector<Segment> target_trajectory;  // same length
  std::vector<MetricsLedger> ledger_by_step;
  long long activations = 0;  // tracker-side activation tally (cross-check)
  int contract_violations = 0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

namespace detail {

// The target is a persistent random walker: it keeps its heading and turns
// with this probability per step (also whenever the heading would leave the
// grid), drawing the new heading uniformly from the feasible directions.
// Trajectories then show the straight runs, loops and reversals seen in
// real tracks instead of pure diffusion.
constexpr double kTurnProbability = 0.05;

inline Segment move_target(const Segment& t, std::optional<Direction>& heading,
                           const MotionParams& params, const Grid& grid,
                           std::mt19937_64& rng) {
  std::array<Direction, 4> feasible{};
  std::size_t n = 0;
  for (Direction d : kDirections) {
    if (grid.contains(displaced(t, d, params.vp))) feasible[n++] = d;
  }
  // at least one direction per axis always has room since the grid exceeds
  // 2*vp each way
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool keep = heading.has_value() && unit(rng) >= kTurnProbability &&
                    grid.contains(displaced(t, *heading, params.vp));
  if (!keep) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    heading = feasible[pick(rng)];
  }
  return displaced(t, *heading, params.vp);
}

inline void check_soundness(const TrackerState& st, const Segment& target) {
  const int alg = st.cfg.algorithm;
  if ((alg == 1 || alg == 2 || alg == 5) && st.target_node != target)
    throw std::logic_error("tracker lost the target node");
  if (alg >= 3 && !st.belief.contains(target))
    throw std::logic_error("true target position left the belief region");
}

}  // namespace detail

/// Seeded discrete-time run: the target walks randomly, the tracker steps,
/// the run ends on a catch or after max_steps. Fully deterministic for a
/// given (config, seed) within one build.
inline RunResult run_simulation(const SimConfig& cfg) {
  const auto problems = validate(cfg);
  if (!problems.empty()) {
    std::string msg = "invalid simulation config:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw SimConfigError(msg);
  }

  TrackerState st(cfg.tracker, cfg.params, cfg.grid, cfg.accounting, cfg.sink_start,
                  cfg.target_start);
  std::mt19937_64 rng(cfg.seed);
  Segment target = cfg.target_start;
  std::optional<Direction> heading;

  RunResult rr;
  rr.sink_trajectory.push_back(st.sink);
  rr.target_trajectory.push_back(target);
  rr.ledger_by_step.push_back(rr.ledger);

  const int limit = cfg.max_steps > 0 ? cfg.max_steps : default_max_steps(cfg);
  for (int step = 1; step <= limit; ++step) {
    target = detail::move_target(target, heading, cfg.params, cfg.grid, rng);
    step_tracker(st, target, rr.ledger);
    detail::check_soundness(st, target);

    rr.sink_trajectory.push_back(st.sink);
    rr.target_trajectory.push_back(target);
    rr.ledger_by_step.push_back(rr.ledger);

    if (path_covers(st.last_sink_path, target)) {
      rr.caught = true;
      rr.time_to_catch = step;
      break;
    }
  }
  rr.activations = st.activations;
  rr.contract_violations = st.contract_violations;
  return rr;
}

struct MetricStats {
  double mean = 0.0;
  double sd = 0.0;

  friend bool operator==(const MetricStats&, const MetricStats&) = default;
};

struct BatchStats {
  int n = 0;
  int caught = 0;  // runs that reached the target; only they enter the
                   // time-to-catch statistics
  MetricStats time_to_catch;
  MetricStats hop_count;
  MetricStats active_time;
  MetricStats deliveries_to_sink;

  friend bool operator==(const BatchStats&, const BatchStats&) = default;
};

namespace detail {

inline MetricStats stats_of(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, std::sqrt(std::max(0.0, var))};
}

}  // namespace detail

/// n seeded runs with seeds base_seed, base_seed + 1, ... Runs execute on a
/// small worker pool; the reduction is ordered by run index, so the result
/// does not depend on scheduling.
inline BatchStats run_batch(const SimConfig& cfg, int n, std::uint64_t base_seed) {
  if (n < 1) throw SimConfigError("run_batch: replication count must be >= 1");
  {
    const auto problems = validate(cfg);
    if (!problems.empty()) {
      std::string msg = "invalid simulation config:";
      for (const auto& p : problems) msg += "\n  - " + p;
      throw SimConfigError(msg);
    }
  }

  std::vector<RunResult> results(static_cast<std::size_t>(n));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));

  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      SimConfig mine = cfg;
      mine.seed = base_seed + static_cast<std::uint64_t>(i);
      results[static_cast<std::size_t>(i)] = run_simulation(mine);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  BatchStats out;
  out.n = n;
  std::vector<double> ttc, hops, active, deliveries;
  for (const RunResult& r : results) {
    if (r.caught) {
      out.caught += 1;
      ttc.push_back(static_cast<double>(r.time_to_catch));
    }
    hops.push_back(static_cast<double>(r.ledger.hop_count));
    active.push_back(static_cast<double>(r.ledger.active_time));
    deliveries.push_back(static_cast<double>(r.ledger.deliveries_to_sink));
  }
  out.time_to_catch = detail::stats_of(ttc);
  out.hop_count = detail::stats_of(hops);
  out.active_time = detail::stats_of(active);
  out.deliveries_to_sink = detail::stats_of(deliveries);
  return out;
}

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  BatchStats stats;
};

/// Cartesian alpha x beta x gamma sweep, run_batch per cell. Row order:
/// alpha outermost, gamma innermost.
inline std::vector<SweepCell> sweep(const SimConfig& cfg, const std::vector<double>& alphas,
                                    const std::vector<double>& betas,
                                    const std::vector<double>& gammas, int n,
                                    std::uint64_t base_seed) {
  if (alphas.empty() || betas.empty() || gammas.empty())
    throw SimConfigError("sweep: every parameter axis needs at least one value");
  std::vector<SweepCell> out;
  out.reserve(alphas.size() * betas.size() * gammas.size());
  for (double a : alphas) {
    for (double b : betas) {
      for (double g : gammas) {
        SimConfig cell = cfg;
        cell.tracker.alpha = a;
        cell.tracker.beta = b;
        cell.tracker.gamma = g;
        out.push_back({a, b, g, run_batch(cell, n, base_seed)});
      }
    }
  }
  return out;
}

}  // namespace granet
