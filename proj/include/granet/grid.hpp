#pragma once

#include <compare>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace granet {

/// One square segment of the monitored field; a single sensor node covers it.
struct Segment {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(const Segment&, const Segment&) = default;
  friend constexpr auto operator<=>(const Segment&, const Segment&) = default;
};

/// Rectangular field of width x height segments, 4-neighbor connectivity.
struct Grid {
  int width = 0;
  int height = 0;

  Grid() = default;
  Grid(int w, int h) : width(w), height(h) {
    if (w < 2 || h < 2)
      throw std::invalid_argument("Grid: needs at least 2x2 segments");
  }

  bool contains(const Segment& s) const {
    return s.x >= 0 && s.x < width && s.y >= 0 && s.y < height;
  }

  long long node_count() const { return 1LL * width * height; }

  void require(const Segment& s, const char* role) const {
    if (!contains(s))
      throw std::invalid_argument(std::string("segment out of grid: ") + role);
  }

  /// Shortest-path hops between two segments. On an obstacle-free 4-grid the
  /// shortest path is the Manhattan distance.
  int hop_distance(const Segment& a, const Segment& b) const {
    require(a, "hop_distance lhs");
    require(b, "hop_distance rhs");
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
  }
};

/// Cumulative cost counters for one simulation run.
struct MetricsLedger {
  long long hop_count = 0;
  long long active_time = 0;
  long long deliveries_to_sink = 0;

  friend bool operator==(const MetricsLedger&, const MetricsLedger&) = default;
};

struct MessageAccounting {
  /// Charge hops for activation queries and absence replies of sink-issued
  /// collections, not just for detection reports.
  bool count_queries = true;
  /// Per-step activations are neighbor wake-ups issued by the previous
  /// target node (only the detection report back costs hops); when off, the
  /// sink issues them like a regular collection.
  bool local_activation = true;
};

/// Activates the target sensors and reports which one (if any) detected the
/// truth segment. Every activated sensor costs one unit of active time. Hop
/// accounting: with count_queries, a query plus a reply per activated sensor
/// (detection or absence); otherwise only the detecting node's reply.
inline std::optional<Segment> query_sensors(const Grid& grid, const Segment& querier,
                                            const std::vector<Segment>& targets,
                                            const Segment& truth,
                                            const MessageAccounting& acct,
                                            MetricsLedger& ledger) {
  grid.require(querier, "query_sensors querier");
  for (const Segment& s : targets) grid.require(s, "query_sensors target");

  std::optional<Segment> hit;
  for (const Segment& s : targets) {
    ledger.active_time += 1;
    const int d = grid.hop_distance(querier, s);
    if (acct.count_queries) {
      ledger.hop_count += 2 * d;
    } else if (s == truth) {
      ledger.hop_count += d;
    }
    if (s == truth) hit = s;
  }
  return hit;
}

/// Target node pushes the fresh location to the beacon node.
inline void report_to_beacon(const Grid& grid, const Segment& target_node,
                             const Segment& beacon, MetricsLedger& ledger) {
  ledger.hop_count += grid.hop_distance(target_node, beacon);
}

/// Sink asks the beacon for the stored target location (request + reply).
inline void request_from_beacon(const Grid& grid, const Segment& sink,
                                const Segment& beacon, MetricsLedger& ledger) {
  ledger.hop_count += 2 * grid.hop_distance(sink, beacon);
  ledger.deliveries_to_sink += 1;
}

/// A node reports the target location straight to the sink.
inline void report_to_sink(const Grid& grid, const Segment& source,
                           const Segment& sink, MetricsLedger& ledger) {
  ledger.hop_count += grid.hop_distance(source, sink);
  ledger.deliveries_to_sink += 1;
}

}  // namespace granet
