#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "granet/decision.hpp"
#include "granet/grid.hpp"
#include "granet/interval.hpp"

namespace granet {

/// Movement directions in tie-break order. Action indices of a direction
/// forecast follow this order, so select_action's smallest-index rule breaks
/// direction ties as N, S, E, W.
enum class Direction : int { North = 0, South = 1, East = 2, West = 3 };

inline constexpr std::array<Direction, 4> kDirections = {
    Direction::North, Direction::South, Direction::East, Direction::West};

inline constexpr std::pair<int, int> direction_vector(Direction d) {
  switch (d) {
    case Direction::North: return {0, 1};
    case Direction::South: return {0, -1};
    case Direction::East: return {1, 0};
    default: return {-1, 0};
  }
}

inline Segment displaced(const Segment& s, Direction d, int k) {
  const auto [dx, dy] = direction_vector(d);
  return {s.x + dx * k, s.y + dy * k};
}

inline int manhattan(const Segment& a, const Segment& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

struct MotionParams {
  int v = 4;   // sink speed, segments per step
  int vp = 2;  // target speed
};

/// Crisp set of segments that may hold the target right now. Cells stay
/// sorted and unique; the true target position is inside at all times.
struct BeliefRegion {
  std::vector<Segment> cells;
  bool anchor_known = false;  // singleton fresh from an observation

  bool contains(const Segment& s) const {
    return std::binary_search(cells.begin(), cells.end(), s);
  }
  std::size_t area() const { return cells.size(); }
};

inline BeliefRegion make_region(std::vector<Segment> cells, bool anchor_known) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (cells.empty())
    throw std::invalid_argument("BeliefRegion: cells must be non-empty");
  return {std::move(cells), anchor_known};
}

enum class SelectionStrategy { Exhaustive, Minimum };

struct TrackerConfig {
  int algorithm = 5;  // 1..5
  double alpha = 0.15;
  double beta = 2.0;
  double gamma = 1.3;
  SelectionStrategy strategy = SelectionStrategy::Exhaustive;
};

/// Predicted time-to-catch granule per movement direction (N, S, E, W).
struct DirectionForecast {
  std::array<Interval, 4> by_direction;
  double dist_mid = 0.0;  // midpoint of the sink-to-region distance interval
  int horizon = 0;        // prediction horizon in steps

  Forecast as_forecast() const {
    return Forecast(by_direction.begin(), by_direction.end());
  }
};

/// One target move: vp segments along one axis. Out-of-grid moves drop out.
inline BeliefRegion propagate_region(const BeliefRegion& r, const MotionParams& params,
                                     const Grid& grid) {
  if (r.cells.empty())
    throw std::invalid_argument("propagate_region: empty region");
  std::vector<Segment> next;
  next.reserve(r.cells.size() * 4);
  for (const Segment& c : r.cells) {
    for (Direction d : kDirections) {
      const Segment m = displaced(c, d, params.vp);
      if (grid.contains(m)) next.push_back(m);
    }
  }
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  if (next.empty())
    throw std::logic_error("propagate_region: motion parameters trap the target");
  return {std::move(next), false};
}

/// Folds a sensor sweep into the region: a detection pins it to one cell,
/// silence removes the probed cells. An emptied region is a contract
/// violation (reported, region kept) since the strategies always probe
/// inside the region while the target is inside it too.
inline BeliefRegion shrink_region(const BeliefRegion& r, const std::optional<Segment>& detected,
                                  const std::vector<Segment>& probed,
                                  bool* contract_violation = nullptr) {
  if (detected) {
    if (std::find(probed.begin(), probed.end(), *detected) == probed.end())
      throw std::invalid_argument("shrink_region: detection outside the probed set");
    return make_region({*detected}, true);
  }
  if (probed.empty()) return r;  // no information
  std::vector<Segment> sorted_probed = probed;
  std::sort(sorted_probed.begin(), sorted_probed.end());
  std::vector<Segment> remaining;
  remaining.reserve(r.cells.size());
  std::set_difference(r.cells.begin(), r.cells.end(), sorted_probed.begin(),
                      sorted_probed.end(), std::back_inserter(remaining));
  if (remaining.empty()) {
    if (contract_violation) *contract_violation = true;
    return r;
  }
  return {std::move(remaining), false};
}

/// Per-run cache of the offset patterns reachable in exactly k target moves,
/// plus scratch space for region sweeps. Not shared across runs, so no
/// synchronization is needed.
class ReachCache {
 public:
  explicit ReachCache(int vp) : vp_(vp) { levels_.push_back({Segment{0, 0}}); }

  int vp() const { return vp_; }

  const std::vector<Segment>& offsets(int steps) {
    while (static_cast<int>(levels_.size()) <= steps) {
      const std::vector<Segment>& prev = levels_.back();
      std::vector<Segment> next;
      next.reserve(prev.size() * 4);
      for (const Segment& o : prev) {
        for (Direction d : kDirections) next.push_back(displaced(o, d, vp_));
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      levels_.push_back(std::move(next));
    }
    return levels_[static_cast<std::size_t>(steps)];
  }

  // grid-sized mark buffer with a stamp token so it never needs clearing
  std::vector<int>& marks(const Grid& grid, int& token) {
    const std::size_t need = static_cast<std::size_t>(grid.node_count());
    if (marks_.size() < need) marks_.assign(need, 0);
    token = ++token_;
    return marks_;
  }

 private:
  int vp_;
  std::vector<std::vector<Segment>> levels_;
  std::vector<int> marks_;
  int token_ = 0;
};

/// Cells reachable from the region in exactly `steps` target moves,
/// clipped to the grid. Equals `steps` stepwise propagations: on a
/// rectangle wider and taller than 2*vp any in-grid endpoint of an
/// unbounded move sequence is also reachable through in-grid cells.
inline std::vector<Segment> region_reach(const BeliefRegion& r, int steps,
                                         ReachCache& cache, const Grid& grid) {
  if (steps == 0) return r.cells;
  const std::vector<Segment>& offs = cache.offsets(steps);

  if (r.cells.size() == 1) {
    const Segment c = r.cells.front();
    std::vector<Segment> out;
    out.reserve(offs.size());
    for (const Segment& o : offs) {
      const Segment s{c.x + o.x, c.y + o.y};
      if (grid.contains(s)) out.push_back(s);  // offset order keeps this sorted
    }
    return out;
  }

  int token = 0;
  std::vector<int>& mark = cache.marks(grid, token);
  int min_x = INT_MAX, max_x = INT_MIN, min_y = INT_MAX, max_y = INT_MIN;
  for (const Segment& c : r.cells) {
    for (const Segment& o : offs) {
      const int x = c.x + o.x;
      const int y = c.y + o.y;
      if (x < 0 || y < 0 || x >= grid.width || y >= grid.height) continue;
      mark[static_cast<std::size_t>(x) * grid.height + y] = token;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  std::vector<Segment> out;
  for (int x = min_x; x <= max_x; ++x) {
    for (int y = min_y; y <= max_y; ++y) {
      if (mark[static_cast<std::size_t>(x) * grid.height + y] == token)
        out.push_back({x, y});
    }
  }
  return out;
}

/// Time-to-catch granules for the four candidate sink headings. The sink is
/// projected h = floor(gamma * sqrt(dist_mid)) steps ahead (at least 1,
/// clamped to the grid); the region is rolled forward h moves; the residual
/// distance closes at v - vp per step, and the horizon h is added to both
/// ends, which never changes the chosen direction.
inline DirectionForecast forecast_directions(const Segment& sink, const BeliefRegion& r,
                                             const TrackerConfig& cfg,
                                             const MotionParams& params, const Grid& grid,
                                             ReachCache& cache) {
  grid.require(sink, "forecast_directions sink");
  if (r.cells.empty())
    throw std::invalid_argument("forecast_directions: empty region");

  int d_lo = INT_MAX, d_hi = INT_MIN;
  for (const Segment& c : r.cells) {
    const int d = manhattan(sink, c);
    d_lo = std::min(d_lo, d);
    d_hi = std::max(d_hi, d);
  }

  DirectionForecast out;
  out.dist_mid = 0.5 * (d_lo + d_hi);
  out.horizon = std::max(1, static_cast<int>(std::floor(cfg.gamma * std::sqrt(out.dist_mid))));

  const std::vector<Segment> reach = region_reach(r, out.horizon, cache, grid);
  std::array<Segment, 4> projected;
  for (std::size_t i = 0; i < 4; ++i) {
    Segment p = displaced(sink, kDirections[i], out.horizon * params.v);
    p.x = std::clamp(p.x, 0, grid.width - 1);
    p.y = std::clamp(p.y, 0, grid.height - 1);
    projected[i] = p;
  }

  std::array<int, 4> lo{};
  std::array<int, 4> hi{};
  lo.fill(INT_MAX);
  hi.fill(INT_MIN);
  for (const Segment& c : reach) {
    for (std::size_t i = 0; i < 4; ++i) {
      const int d = manhattan(projected[i], c);
      lo[i] = std::min(lo[i], d);
      hi[i] = std::max(hi[i], d);
    }
  }

  // closing speed is v+vp at best (target approaching) and v-vp at worst
  // (target fleeing); the spread feeds the decision uncertainty
  const double fast = params.v + params.vp;
  const double slow = params.v - params.vp;
  for (std::size_t i = 0; i < 4; ++i)
    out.by_direction[i] =
        Interval(out.horizon + lo[i] / fast, out.horizon + hi[i] / slow);
  return out;
}

inline DirectionForecast forecast_directions(const Segment& sink, const BeliefRegion& r,
                                             const TrackerConfig& cfg,
                                             const MotionParams& params, const Grid& grid) {
  ReachCache cache(params.vp);
  return forecast_directions(sink, r, cfg, params, grid, cache);
}

/// One hypothesis per region cell: that cell detects (reading 1), every
/// other region cell stays silent. The forecast and decision are what the
/// sink would conclude from that outcome.
inline std::vector<Hypothesis<Segment>> hypotheses_for_region(
    const Segment& sink, const BeliefRegion& r, const TrackerConfig& cfg,
    const MotionParams& params, const Grid& grid, ReachCache& cache) {
  auto domain = std::make_shared<const std::vector<Segment>>(r.cells);
  std::vector<Hypothesis<Segment>> out;
  out.reserve(r.cells.size());
  for (const Segment& c : r.cells) {
    Hypothesis<Segment> h;
    h.signature.domain = domain;
    h.signature.nonzero = {{c, 1}};
    const BeliefRegion single{{c}, true};
    h.forecast = forecast_directions(sink, single, cfg, params, grid, cache).as_forecast();
    h.decision = select_action(h.forecast);
    h.weight = 1.0;
    out.push_back(std::move(h));
  }
  return out;
}

inline std::vector<Hypothesis<Segment>> hypotheses_for_region(
    const Segment& sink, const BeliefRegion& r, const TrackerConfig& cfg,
    const MotionParams& params, const Grid& grid) {
  ReachCache cache(params.vp);
  return hypotheses_for_region(sink, r, cfg, params, grid, cache);
}

/// Collect new readings when the expected uncertainty drop beats alpha or
/// the sink is close relative to the region's side length.
inline bool collection_trigger(const Decision& baseline, const DirectionForecast& fc,
                               const BeliefRegion& r,
                               const std::vector<Hypothesis<Segment>>& hyps,
                               const TrackerConfig& cfg) {
  if (expected_unc_decrease(baseline, hyps) > cfg.alpha) return true;
  return fc.dist_mid / std::sqrt(static_cast<double>(r.area())) < cfg.beta;
}

/// Mutable per-run tracker state. Owned by exactly one simulation run.
struct TrackerState {
  TrackerConfig cfg;
  MotionParams params;
  Grid grid;
  MessageAccounting acct;

  Segment sink;
  Segment target_node;  // latest in-network detection (algorithms 1, 2, 5)
  Segment beacon;       // rendezvous node (algorithms 2 and 5)
  BeliefRegion belief;  // sink-side region

  std::vector<Segment> last_sink_path;  // traversed this step, start inclusive
  long long activations = 0;            // independent tally of sensor wake-ups
  int contract_violations = 0;

  ReachCache reach;

  TrackerState(const TrackerConfig& cfg_, const MotionParams& params_, const Grid& grid_,
               const MessageAccounting& acct_, const Segment& sink_start,
               const Segment& target_start)
      : cfg(cfg_),
        params(params_),
        grid(grid_),
        acct(acct_),
        sink(sink_start),
        target_node(target_start),
        beacon(target_start),
        belief(make_region({target_start}, true)),
        last_sink_path{sink_start},
        reach(params_.vp) {}
};

namespace detail {

inline bool closes_in(const Segment& from, Direction dir, const Segment& goal) {
  return manhattan(displaced(from, dir, 1), goal) < manhattan(from, goal);
}

// Pursuit move toward a known goal cell: up to `steps` unit segments along
// a shortest Manhattan path, starting with the first distance-reducing
// direction in N, S, E, W order and bending onto the other axis once that
// leg stops closing in. Halts on the goal cell. A single-direction move
// would strand the sink two segments off on each axis (speed 4 can never
// resolve a (2,2) residue), so the path may turn once within a step.
inline Segment pursue(const Grid& grid, const Segment& from, int steps, const Segment& goal,
                      std::vector<Segment>& path) {
  path.clear();
  path.push_back(from);
  Segment cur = from;
  std::optional<Direction> leg;
  for (int i = 0; i < steps && cur != goal; ++i) {
    if (!leg || !closes_in(cur, *leg, goal)) {
      leg.reset();
      for (Direction d : kDirections) {
        if (closes_in(cur, d, goal)) {
          leg = d;
          break;
        }
      }
      if (!leg) break;
    }
    const Segment next = displaced(cur, *leg, 1);
    if (!grid.contains(next)) break;  // cannot happen for an in-grid goal
    cur = next;
    path.push_back(cur);
  }
  return cur;
}

inline void move_sink_pursuit(TrackerState& st, const Segment& goal) {
  st.sink = pursue(st.grid, st.sink, st.params.v, goal, st.last_sink_path);
}

inline int region_distance(const Segment& s, const BeliefRegion& r) {
  int best = INT_MAX;
  for (const Segment& c : r.cells) best = std::min(best, manhattan(s, c));
  return best;
}

// Move for the forecast-steered algorithms: up to v unit segments along the
// decided heading. Only in the endgame (believed region within one move)
// may the walk bend onto the other axis once the current leg stops closing
// on the region; without that a sink at full speed trails a fleeing target
// one row off forever. Far from the region the heading is followed as
// decided.
inline void move_sink_tracking(TrackerState& st, Direction chosen) {
  std::vector<Segment>& path = st.last_sink_path;
  path.clear();
  path.push_back(st.sink);
  Segment cur = st.sink;
  Direction leg = chosen;
  for (int i = 0; i < st.params.v; ++i) {
    const int here = region_distance(cur, st.belief);
    auto closes = [&](Direction d) {
      const Segment next = displaced(cur, d, 1);
      return st.grid.contains(next) && region_distance(next, st.belief) < here;
    };
    if (here > 0 && here <= st.params.v && !closes(leg)) {
      for (Direction d : kDirections) {
        if (closes(d)) {
          leg = d;
          break;
        }
      }
    }
    const Segment next = displaced(cur, leg, 1);
    if (!st.grid.contains(next)) break;
    cur = next;
    path.push_back(cur);
  }
  st.sink = cur;
}

// Per-step in-network detection: the previous target node wakes the cells
// the target can have moved to. Detection is guaranteed because the
// candidate set is exactly the reachable set. Locally issued wake-ups are
// neighbor broadcasts, so only the detection report back to the issuing
// node costs hops; with local_activation off the sink issues them like a
// regular collection.
inline Segment innetwork_detect(TrackerState& st, const Segment& target_now,
                                MetricsLedger& ledger) {
  const BeliefRegion candidates =
      propagate_region(make_region({st.target_node}, true), st.params, st.grid);
  const Segment querier = st.acct.local_activation ? st.target_node : st.sink;
  MessageAccounting acct = st.acct;
  if (st.acct.local_activation) acct.count_queries = false;
  st.activations += static_cast<long long>(candidates.cells.size());
  const auto hit = query_sensors(st.grid, querier, candidates.cells, target_now, acct, ledger);
  if (!hit)
    throw std::logic_error("in-network detection lost the target");
  st.target_node = *hit;
  return *hit;
}

}  // namespace detail

/// Full-precision tracking: detect every step, report to the sink, move the
/// sink straight at the target node.
inline void step_algorithm_1(TrackerState& st, const Segment& target_now,
                             MetricsLedger& ledger) {
  const Segment node = detail::innetwork_detect(st, target_now, ledger);
  st.belief = make_region({node}, true);
  report_to_sink(st.grid, node, st.sink, ledger);
  detail::move_sink_pursuit(st, node);
}

/// Beacon relay: detections go to the beacon node; the sink walks to the
/// beacon and only there learns the fresh target node, which becomes the
/// next beacon. Reaching the beacon mid-move does not forfeit the rest of
/// the move: the sink carries on toward the freshly learned node. The
/// handover is co-located (no hops) and counts one delivery per step.
inline void step_algorithm_2(TrackerState& st, const Segment& target_now,
                             MetricsLedger& ledger) {
  const Segment node = detail::innetwork_detect(st, target_now, ledger);
  st.belief = make_region({node}, true);
  report_to_beacon(st.grid, node, st.beacon, ledger);

  std::vector<Segment> path{st.sink};
  int budget = st.params.v;
  bool delivered = false;
  for (;;) {
    std::vector<Segment> leg;
    st.sink = detail::pursue(st.grid, st.sink, budget, st.beacon, leg);
    budget -= static_cast<int>(leg.size()) - 1;
    path.insert(path.end(), leg.begin() + 1, leg.end());
    if (st.sink != st.beacon) break;
    if (!delivered) {
      ledger.deliveries_to_sink += 1;  // co-located handover, no hops
      delivered = true;
    }
    if (st.beacon == st.target_node) break;  // already holds the fresh node
    st.beacon = st.target_node;
    if (budget <= 0) break;
  }
  st.last_sink_path = std::move(path);
}

namespace detail {

// Shared body of algorithms 3 and 4: model-driven belief, collection only
// when triggered, sink steered by the time-to-catch forecast.
inline void step_selective_collection(TrackerState& st, const Segment& target_now,
                                      MetricsLedger& ledger) {
  st.belief = propagate_region(st.belief, st.params, st.grid);
  DirectionForecast fc =
      forecast_directions(st.sink, st.belief, st.cfg, st.params, st.grid, st.reach);
  Decision decision = select_action(fc.as_forecast());
  const auto hyps =
      hypotheses_for_region(st.sink, st.belief, st.cfg, st.params, st.grid, st.reach);

  if (collection_trigger(decision, fc, st.belief, hyps, st.cfg)) {
    const std::set<Segment> chosen = st.cfg.strategy == SelectionStrategy::Minimum
                                         ? select_sensors_minimum(hyps)
                                         : select_sensors_exhaustive(hyps);
    const std::vector<Segment> probed(chosen.begin(), chosen.end());
    st.activations += static_cast<long long>(probed.size());
    const auto hit = query_sensors(st.grid, st.sink, probed, target_now, st.acct, ledger);
    if (hit) ledger.deliveries_to_sink += 1;
    bool violated = false;
    st.belief = shrink_region(st.belief, hit, probed, &violated);
    if (violated) st.contract_violations += 1;

    fc = forecast_directions(st.sink, st.belief, st.cfg, st.params, st.grid, st.reach);
    decision = select_action(fc.as_forecast());
  }

  move_sink_tracking(st, static_cast<Direction>(decision.action));
}

}  // namespace detail

/// Uncertainty-triggered collection with the exhaustive strategy.
inline void step_algorithm_3(TrackerState& st, const Segment& target_now,
                             MetricsLedger& ledger) {
  detail::step_selective_collection(st, target_now, ledger);
}

/// Uncertainty-triggered collection probing only the minimum sensor set;
/// silence shrinks the region by set difference.
inline void step_algorithm_4(TrackerState& st, const Segment& target_now,
                             MetricsLedger& ledger) {
  detail::step_selective_collection(st, target_now, ledger);
}

/// Beacon-assisted selective tracking: the network tracks the target into
/// the beacon every step; the sink pulls the location from the beacon only
/// when the trigger fires.
inline void step_algorithm_5(TrackerState& st, const Segment& target_now,
                             MetricsLedger& ledger) {
  const Segment node = detail::innetwork_detect(st, target_now, ledger);
  report_to_beacon(st.grid, node, st.beacon, ledger);

  st.belief = propagate_region(st.belief, st.params, st.grid);
  DirectionForecast fc =
      forecast_directions(st.sink, st.belief, st.cfg, st.params, st.grid, st.reach);
  Decision decision = select_action(fc.as_forecast());
  const auto hyps =
      hypotheses_for_region(st.sink, st.belief, st.cfg, st.params, st.grid, st.reach);

  if (collection_trigger(decision, fc, st.belief, hyps, st.cfg)) {
    request_from_beacon(st.grid, st.sink, st.beacon, ledger);
    st.belief = make_region({st.target_node}, true);
    st.beacon = st.target_node;
    fc = forecast_directions(st.sink, st.belief, st.cfg, st.params, st.grid, st.reach);
    decision = select_action(fc.as_forecast());
  }

  detail::move_sink_tracking(st, static_cast<Direction>(decision.action));
}

inline void step_tracker(TrackerState& st, const Segment& target_now, MetricsLedger& ledger) {
  switch (st.cfg.algorithm) {
    case 1: step_algorithm_1(st, target_now, ledger); break;
    case 2: step_algorithm_2(st, target_now, ledger); break;
    case 3: step_algorithm_3(st, target_now, ledger); break;
    case 4: step_algorithm_4(st, target_now, ledger); break;
    case 5: step_algorithm_5(st, target_now, ledger); break;
    default:
      throw std::invalid_argument("step_tracker: algorithm must be 1..5");
  }
}

/// Catch rule: the target's segment lies on the sink's traversed path this
/// step (start inclusive, so starting on the target counts).
inline bool path_covers(const std::vector<Segment>& path, const Segment& s) {
  return std::find(path.begin(), path.end(), s) != path.end();
}

}  // namespace granet
