#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "granet/cli.hpp"

namespace {

using granet::cli::ExperimentSpec;

granet::Segment parse_segment(const std::string& text, const char* flag) {
  int x = 0, y = 0;
  char comma = 0;
  std::istringstream ss(text);
  if (!(ss >> x >> comma >> y) || comma != ',' || !ss.eof())
    throw CLI::ValidationError(flag, "expected x,y");
  return {x, y};
}

granet::Grid parse_grid(const std::string& text) {
  int w = 0, h = 0;
  char cross = 0;
  std::istringstream ss(text);
  if (!(ss >> w >> cross >> h) || (cross != 'x' && cross != 'X') || !ss.eof())
    throw CLI::ValidationError("--grid", "expected WxH");
  if (w < 2 || h < 2) throw CLI::ValidationError("--grid", "needs at least 2x2 segments");
  return granet::Grid(w, h);
}

// Axis syntax: a comma list "0.05,0.15,0.3" or a range "0.5:3.0:0.1".
std::vector<double> parse_axis(const std::string& text, const char* flag) {
  std::vector<double> out;
  if (text.empty()) throw CLI::ValidationError(flag, "axis must not be empty");
  try {
    if (text.find(':') != std::string::npos) {
      std::istringstream ss(text);
      std::string lo_s, hi_s, step_s;
      if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
          !std::getline(ss, step_s))
        throw CLI::ValidationError(flag, "expected lo:hi:step");
      const double lo = std::stod(lo_s);
      const double hi = std::stod(hi_s);
      const double step = std::stod(step_s);
      if (step <= 0.0 || hi < lo) throw CLI::ValidationError(flag, "expected lo:hi:step");
      for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
    } else {
      std::istringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
      }
    }
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError(flag, "malformed number");
  } catch (const std::out_of_range&) {
    throw CLI::ValidationError(flag, "number out of range");
  }
  if (out.empty()) throw CLI::ValidationError(flag, "axis must not be empty");
  return out;
}

struct Options {
  int alg = 5;
  int vp = 2;
  int v = 4;
  double alpha = 0.15;
  double beta = 2.0;
  double gamma = 1.3;
  std::string strategy;
  std::uint64_t seed = 1;
  int runs = 100;
  std::string grid = "200x200";
  std::string sink = "160,160";
  std::string target = "66,66";
  int max_steps = 0;
  std::string count_queries = "on";
  std::string out;
  std::string format;
  std::string alpha_axis, beta_axis, gamma_axis;
};

void add_sim_flags(CLI::App* cmd, Options& o, bool with_alg) {
  if (with_alg) cmd->add_option("--alg", o.alg, "tracking algorithm 1..5")->default_val(5);
  cmd->add_option("--vp", o.vp, "target speed, segments per step");
  cmd->add_option("--v", o.v, "sink speed, segments per step");
  cmd->add_option("--strategy", o.strategy, "exhaustive|minimum (default per algorithm)");
  cmd->add_option("--seed", o.seed, "base random seed");
  cmd->add_option("--grid", o.grid, "field size WxH in segments");
  cmd->add_option("--sink", o.sink, "sink start x,y");
  cmd->add_option("--target", o.target, "target start x,y");
  cmd->add_option("--max-steps", o.max_steps, "step limit (0 = automatic)");
  cmd->add_option("--count-queries", o.count_queries,
                  "on|off: charge hops for collection queries and absence replies");
  cmd->add_option("--out", o.out, "write output to this path instead of stdout");
  cmd->add_option("--format", o.format, "csv|json");
}

ExperimentSpec build_spec(const std::string& command, const Options& o) {
  ExperimentSpec spec;
  spec.command = command;
  spec.config.grid = parse_grid(o.grid);
  spec.config.sink_start = parse_segment(o.sink, "--sink");
  spec.config.target_start = parse_segment(o.target, "--target");
  spec.config.params = {o.v, o.vp};
  spec.config.tracker.algorithm = o.alg;
  spec.config.tracker.alpha = o.alpha;
  spec.config.tracker.beta = o.beta;
  spec.config.tracker.gamma = o.gamma;
  if (o.strategy.empty()) {
    spec.config.tracker.strategy = o.alg == 4 ? granet::SelectionStrategy::Minimum
                                              : granet::SelectionStrategy::Exhaustive;
  } else if (o.strategy == "exhaustive") {
    spec.config.tracker.strategy = granet::SelectionStrategy::Exhaustive;
  } else if (o.strategy == "minimum") {
    spec.config.tracker.strategy = granet::SelectionStrategy::Minimum;
  } else {
    throw CLI::ValidationError("--strategy", "expected exhaustive or minimum");
  }
  spec.config.seed = o.seed;
  spec.config.max_steps = o.max_steps;
  if (o.count_queries == "on") {
    spec.config.accounting.count_queries = true;
  } else if (o.count_queries == "off") {
    spec.config.accounting.count_queries = false;
  } else {
    throw CLI::ValidationError("--count-queries", "expected on or off");
  }
  spec.runs = o.runs;
  spec.out_path = o.out;
  if (!o.format.empty() && o.format != "csv" && o.format != "json")
    throw CLI::ValidationError("--format", "expected csv or json");
  spec.format = o.format;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"granet: uncertainty-driven selective sensing on a sensor grid"};
  app.require_subcommand(1);

  Options o;

  CLI::App* example =
      app.add_subcommand("example", "run the built-in pursuit demo and self-check it");

  CLI::App* run = app.add_subcommand("run", "one seeded tracking run");
  add_sim_flags(run, o, true);
  run->add_option("--alpha", o.alpha, "uncertainty-decrease threshold");
  run->add_option("--beta", o.beta, "distance threshold");
  run->add_option("--gamma", o.gamma, "prediction horizon parameter");

  CLI::App* compare =
      app.add_subcommand("compare", "all five algorithms at target speeds 1..3");
  add_sim_flags(compare, o, false);
  compare->add_option("--runs", o.runs, "replications per cell");
  compare->add_option("--alpha", o.alpha, "uncertainty-decrease threshold");
  compare->add_option("--beta", o.beta, "distance threshold");
  compare->add_option("--gamma", o.gamma, "prediction horizon parameter");

  CLI::App* swp = app.add_subcommand("sweep", "batch runs over alpha/beta/gamma axes");
  add_sim_flags(swp, o, true);
  swp->add_option("--runs", o.runs, "replications per cell");
  swp->add_option("--alpha", o.alpha_axis, "axis: comma list or lo:hi:step");
  swp->add_option("--beta", o.beta_axis, "axis: comma list or lo:hi:step");
  swp->add_option("--gamma", o.gamma_axis, "axis: comma list or lo:hi:step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? granet::cli::kExitOk : granet::cli::kExitValidation;
  }

  try {
    if (example->parsed()) return granet::cli::cmd_example(std::cout);
    if (run->parsed())
      return granet::cli::cmd_run(build_spec("run", o), std::cout, std::cerr);
    if (compare->parsed())
      return granet::cli::cmd_compare(build_spec("compare", o), std::cout, std::cerr);
    if (swp->parsed()) {
      ExperimentSpec spec = build_spec("sweep", o);
      if (swp->count("--alpha")) spec.alphas = parse_axis(o.alpha_axis, "--alpha");
      if (swp->count("--beta")) spec.betas = parse_axis(o.beta_axis, "--beta");
      if (swp->count("--gamma")) spec.gammas = parse_axis(o.gamma_axis, "--gamma");
      return granet::cli::cmd_sweep(spec, std::cout, std::cerr);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return granet::cli::kExitValidation;
  } catch (const granet::SimConfigError& e) {
    std::cerr << e.what() << "\n";
    return granet::cli::kExitValidation;
  }
  return granet::cli::kExitValidation;
}
