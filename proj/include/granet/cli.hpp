#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "granet/predator_prey.hpp"
#include "granet/simulation.hpp"

// Command layer shared by the granet binary and the tests: experiment
// descriptions, the demo self-check and the CSV/JSON writers.
namespace granet::cli {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitIo = 3;

/// Declarative description of one command invocation. Serialized into every
/// output so results can be reproduced from the artifact alone.
struct ExperimentSpec {
  std::string command;  // example | run | compare | sweep
  SimConfig config;
  std::vector<double> alphas;  // sweep axes; empty falls back to the config value
  std::vector<double> betas;
  std::vector<double> gammas;
  int runs = 100;
  std::string out_path;  // empty writes to the stream
  std::string format;    // csv | json | empty for the command default
};

inline std::string fmt(double v) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 10);
  return std::string(buf.data(), res.ptr);
}

inline const char* strategy_name(SelectionStrategy s) {
  return s == SelectionStrategy::Minimum ? "minimum" : "exhaustive";
}

inline nlohmann::json to_json(const SimConfig& c) {
  return nlohmann::json{
      {"grid", {{"width", c.grid.width}, {"height", c.grid.height}}},
      {"sink", {c.sink_start.x, c.sink_start.y}},
      {"target", {c.target_start.x, c.target_start.y}},
      {"v", c.params.v},
      {"vp", c.params.vp},
      {"algorithm", c.tracker.algorithm},
      {"alpha", c.tracker.alpha},
      {"beta", c.tracker.beta},
      {"gamma", c.tracker.gamma},
      {"strategy", strategy_name(c.tracker.strategy)},
      {"seed", c.seed},
      {"max_steps", c.max_steps},
      {"count_queries", c.accounting.count_queries},
  };
}

inline nlohmann::json to_json(const ExperimentSpec& s) {
  return nlohmann::json{
      {"command", s.command}, {"config", to_json(s.config)}, {"alphas", s.alphas},
      {"betas", s.betas},     {"gammas", s.gammas},          {"runs", s.runs},
      {"out", s.out_path},    {"format", s.format},
  };
}

inline nlohmann::json to_json(const MetricsLedger& l) {
  return nlohmann::json{{"hop_count", l.hop_count},
                        {"active_time", l.active_time},
                        {"deliveries_to_sink", l.deliveries_to_sink}};
}

namespace detail {

inline nlohmann::json trajectory_json(const std::vector<Segment>& t) {
  nlohmann::json out = nlohmann::json::array();
  for (const Segment& s : t) out.push_back({s.x, s.y});
  return out;
}

inline bool write_file(const std::string& path, const std::string& body,
                       std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << body) || !f.flush()) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

// CSV tables carry their experiment echo in a sidecar so the table itself
// stays schema-stable.
inline bool emit(const ExperimentSpec& spec, const std::string& body,
                 std::ostream& out, std::ostream& err) {
  if (spec.out_path.empty()) {
    out << body;
    return true;
  }
  if (!write_file(spec.out_path, body, err)) return false;
  const bool is_json = !body.empty() && body.front() == '{';
  if (!is_json) {
    nlohmann::json meta{{"version", 1}, {"experiment", to_json(spec)}};
    return write_file(spec.out_path + ".meta.json", meta.dump(2) + "\n", err);
  }
  return true;
}

inline void stats_columns(std::ostringstream& row, const BatchStats& s) {
  row << s.n << ',' << s.caught << ',' << fmt(s.time_to_catch.mean) << ','
      << fmt(s.time_to_catch.sd) << ',' << fmt(s.hop_count.mean) << ','
      << fmt(s.hop_count.sd) << ',' << fmt(s.active_time.mean) << ','
      << fmt(s.active_time.sd) << ',' << fmt(s.deliveries_to_sink.mean) << ','
      << fmt(s.deliveries_to_sink.sd);
}

constexpr const char* kStatsHeader =
    "runs,caught,time_to_catch_mean,time_to_catch_sd,hop_count_mean,hop_count_sd,"
    "active_time_mean,active_time_sd,deliveries_mean,deliveries_sd";

inline nlohmann::json stats_json(const BatchStats& s) {
  return nlohmann::json{
      {"runs", s.n},
      {"caught", s.caught},
      {"time_to_catch", {{"mean", s.time_to_catch.mean}, {"sd", s.time_to_catch.sd}}},
      {"hop_count", {{"mean", s.hop_count.mean}, {"sd", s.hop_count.sd}}},
      {"active_time", {{"mean", s.active_time.mean}, {"sd", s.active_time.sd}}},
      {"deliveries_to_sink",
       {{"mean", s.deliveries_to_sink.mean}, {"sd", s.deliveries_to_sink.sd}}},
  };
}

}  // namespace detail

/// Runs the built-in pursuit demo, prints the full decision table and the
/// derived scalars, and self-checks everything against the known-good
/// fixture. Any deviation beyond tolerance is reported and the command
/// exits with kExitMismatch.
inline int cmd_example(std::ostream& out) {
  namespace pp = granet::predator_prey;
  std::vector<std::string> mismatches;
  auto check = [&](const std::string& what, double got, double want, double tol) {
    if (std::abs(got - want) > tol) {
      std::ostringstream ss;
      ss << what << ": got " << fmt(got) << ", expected " << fmt(want) << " +/- "
         << fmt(tol);
      mismatches.push_back(ss.str());
    }
  };

  const auto hyps = pp::hypotheses();
  const auto& rows = pp::expected_rows();

  out << "Pursuit demo: two prey in 10 m sensor segments, chaser 30 m/s, prey 20-25 m/s\n";
  const Forecast base = pp::baseline_forecast();
  out << "Baseline granules: F(1) = (" << fmt(base[0].lo) << ", " << fmt(base[0].hi)
      << ") s, F(2) = (" << fmt(base[1].lo) << ", " << fmt(base[1].hi) << ") s\n\n";
  out << " #   readings           granule 1   granule 2   F(1)      F(2)      a*  UNC\n";

  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto& h = hyps[i];
    const auto& r = rows[i];

    std::ostringstream readings;
    readings << '(';
    for (int s = 1; s <= pp::kSensorCount; ++s)
      readings << h.signature.reading(s) << (s < pp::kSensorCount ? "," : ")");

    auto iv = [](const Interval& v) {
      std::ostringstream ss;
      ss << '(' << fmt(v.lo) << ',' << fmt(v.hi) << ')';
      return ss.str();
    };

    out << std::setw(2) << i + 1 << "   " << readings.str() << "  " << std::setw(10)
        << std::left << iv(r.box1) << "  " << std::setw(10) << iv(r.box2) << "  "
        << std::setw(8) << iv(h.forecast[0]) << "  " << std::setw(8)
        << iv(h.forecast[1]) << "  " << h.decision.action + 1 << "   "
        << std::right << std::fixed << std::setprecision(2)
        << h.decision.uncertainty.value << "\n";
    out.unsetf(std::ios::floatfield);

    std::ostringstream tag;
    tag << "row " << i + 1;
    if (h.forecast[0] != r.f1) mismatches.push_back(tag.str() + ": F(1) interval");
    if (h.forecast[1] != r.f2) mismatches.push_back(tag.str() + ": F(2) interval");
    if (static_cast<int>(h.decision.action) + 1 != r.action)
      mismatches.push_back(tag.str() + ": selected action");
    check(tag.str() + " UNC", h.decision.uncertainty.value, r.unc, pp::kRowUncTolerance);
  }

  const double p = prob_leq(base[0], base[1]).value;
  const Decision baseline = select_action(base);
  const double mean_unc = mean_hypothesis_uncertainty(hyps).value;
  const double delta = expected_unc_decrease(baseline, hyps);

  out << "\nP[F(1) <= F(2)] = " << fmt(p) << "\n";
  out << "UNC(1, no data) = " << fmt(baseline.uncertainty.value) << "\n";
  out << "mean hypothesis UNC = " << fmt(mean_unc) << "\n";
  out << "expected UNC decrease = " << fmt(delta) << "\n";

  check("P[F(1) <= F(2)]", p, pp::kExpectedProbFirstBetter, pp::kProbTolerance);
  if (baseline.action != 0) mismatches.push_back("baseline action: expected 1");
  check("UNC(1, no data)", baseline.uncertainty.value, pp::kExpectedBaselineUnc,
        pp::kBaselineUncTolerance);
  check("mean hypothesis UNC", mean_unc, pp::kExpectedMeanHypUnc,
        pp::kMeanHypUncTolerance);
  check("expected UNC decrease", delta, pp::kExpectedUncDecrease,
        pp::kUncDecreaseTolerance);

  auto print_set = [&](const char* label, const std::set<int>& s) {
    out << label << " {";
    bool first = true;
    for (int id : s) {
      out << (first ? "" : ",") << id;
      first = false;
    }
    out << "}\n";
  };
  const auto exhaustive = select_sensors_exhaustive(hyps);
  const auto minimum = select_sensors_minimum(hyps);
  print_set("exhaustive sensor selection:", exhaustive);
  print_set("minimum sensor selection:", minimum);

  if (exhaustive != std::set<int>(pp::kExpectedExhaustive.begin(),
                                  pp::kExpectedExhaustive.end()))
    mismatches.push_back("exhaustive selection: expected {1..8}");
  if (minimum != std::set<int>(pp::kExpectedMinimum.begin(), pp::kExpectedMinimum.end()))
    mismatches.push_back("minimum selection: expected {4,5}");

  if (mismatches.empty()) {
    out << "self-check: all values within tolerance\n";
    return kExitOk;
  }
  out << "self-check FAILED:\n";
  for (const auto& m : mismatches) out << "  " << m << "\n";
  return kExitMismatch;
}

/// One simulation run. JSON result document by default; --format csv writes
/// the per-step trajectory table instead.
inline int cmd_run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  RunResult r;
  try {
    r = run_simulation(spec.config);
  } catch (const SimConfigError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }

  const std::string format = spec.format.empty() ? "json" : spec.format;
  std::string body;
  if (format == "csv") {
    std::ostringstream csv;
    csv << "step,sink_x,sink_y,target_x,target_y,hop_count,active_time\n";
    for (std::size_t i = 0; i < r.sink_trajectory.size(); ++i) {
      csv << i << ',' << r.sink_trajectory[i].x << ',' << r.sink_trajectory[i].y << ','
          << r.target_trajectory[i].x << ',' << r.target_trajectory[i].y << ','
          << r.ledger_by_step[i].hop_count << ',' << r.ledger_by_step[i].active_time
          << "\n";
    }
    body = csv.str();
  } else {
    nlohmann::json doc{
        {"version", 1},
        {"experiment", to_json(spec)},
        {"result",
         {{"caught", r.caught},
          {"time_to_catch", r.time_to_catch},
          {"ledger", to_json(r.ledger)},
          {"sink_trajectory", detail::trajectory_json(r.sink_trajectory)},
          {"target_trajectory", detail::trajectory_json(r.target_trajectory)}}},
    };
    body = doc.dump(2) + "\n";
  }
  return detail::emit(spec, body, out, err) ? kExitOk : kExitIo;
}

/// Five algorithms x target speeds 1..3, `runs` replications per cell.
inline int cmd_compare(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::pair<int, int>, BatchStats>> cells;
  try {
    for (int alg = 1; alg <= 5; ++alg) {
      for (int vp = 1; vp <= 3; ++vp) {
        SimConfig cfg = spec.config;
        cfg.tracker.algorithm = alg;
        cfg.tracker.strategy =
            alg == 4 ? SelectionStrategy::Minimum : SelectionStrategy::Exhaustive;
        cfg.params.vp = vp;
        cells.push_back({{alg, vp}, run_batch(cfg, spec.runs, spec.config.seed)});
      }
    }
  } catch (const SimConfigError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }

  const std::string format = spec.format.empty() ? "csv" : spec.format;
  std::string body;
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [key, stats] : cells) {
      nlohmann::json row = detail::stats_json(stats);
      row["algorithm"] = key.first;
      row["vp"] = key.second;
      rows.push_back(std::move(row));
    }
    body = nlohmann::json{{"version", 1}, {"experiment", to_json(spec)}, {"rows", rows}}
               .dump(2) +
           "\n";
  } else {
    std::ostringstream csv;
    csv << "algorithm,vp," << detail::kStatsHeader << "\n";
    for (const auto& [key, stats] : cells) {
      std::ostringstream row;
      row << key.first << ',' << key.second << ',';
      detail::stats_columns(row, stats);
      csv << row.str() << "\n";
    }
    body = csv.str();
  }
  return detail::emit(spec, body, out, err) ? kExitOk : kExitIo;
}

/// Cartesian alpha x beta x gamma sweep at the configured algorithm.
inline int cmd_sweep(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  const std::vector<double> alphas =
      spec.alphas.empty() ? std::vector<double>{spec.config.tracker.alpha} : spec.alphas;
  const std::vector<double> betas =
      spec.betas.empty() ? std::vector<double>{spec.config.tracker.beta} : spec.betas;
  const std::vector<double> gammas =
      spec.gammas.empty() ? std::vector<double>{spec.config.tracker.gamma} : spec.gammas;

  std::vector<SweepCell> cells;
  try {
    cells = sweep(spec.config, alphas, betas, gammas, spec.runs, spec.config.seed);
  } catch (const SimConfigError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }

  const std::string format = spec.format.empty() ? "csv" : spec.format;
  std::string body;
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepCell& c : cells) {
      nlohmann::json row = detail::stats_json(c.stats);
      row["alpha"] = c.alpha;
      row["beta"] = c.beta;
      row["gamma"] = c.gamma;
      rows.push_back(std::move(row));
    }
    body = nlohmann::json{{"version", 1}, {"experiment", to_json(spec)}, {"rows", rows}}
               .dump(2) +
           "\n";
  } else {
    std::ostringstream csv;
    csv << "alpha,beta,gamma," << detail::kStatsHeader << "\n";
    for (const SweepCell& c : cells) {
      std::ostringstream row;
      row << fmt(c.alpha) << ',' << fmt(c.beta) << ',' << fmt(c.gamma) << ',';
      detail::stats_columns(row, c.stats);
      csv << row.str() << "\n";
    }
    body = csv.str();
  }
  return detail::emit(spec, body, out, err) ? kExitOk : kExitIo;
}

}  // namespace granet::cli
