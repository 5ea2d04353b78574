// Copyright 2026 The efgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "efgraph/catalog.hpp"
#include "efgraph/error.hpp"
#include "efgraph/evaluation.hpp"
#include "efgraph/solve.hpp"

namespace efg::cli {

namespace {

struct GameFlags {
  std::string game;
  std::string algo = "cfr";
  std::string traversal;
  int iters = 1000;
  std::uint64_t seed = 0;
};

void add_game_flags(CLI::App* cmd, GameFlags& flags, int default_iters) {
  flags.iters = default_iters;
  cmd->add_option("--game", flags.game, "kuhn, leduc, rps or file:<path>")->required();
  cmd->add_option("--algo", flags.algo, "cfr, cfr+, es-cfr or os-cfr")->capture_default_str();
  cmd->add_option("--traversal", flags.traversal, "enumerate, external or outcome");
  cmd->add_option("--iters", flags.iters, "number of updates")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", flags.seed, "random seed")->capture_default_str();
}

SolveOptions to_options(const GameFlags& flags) {
  SolveOptions options;
  options.algorithm = flags.algo;
  if (!flags.traversal.empty()) {
    try {
      options.traversal = parse_traversal(flags.traversal);
    } catch (const Error& e) {
      throw Error(fmt::format("--traversal: {}", e.what()));
    }
  }
  options.iterations = flags.iters;
  options.seed = flags.seed;
  try {
    resolve_run_config(options);
  } catch (const Error& e) {
    throw Error(fmt::format("--algo: {}", e.what()));
  }
  return options;
}

std::shared_ptr<const GameTree> load(const std::string& spec) {
  try {
    return std::make_shared<const GameTree>(load_game(spec));
  } catch (const ParseError& e) {
    throw Error(fmt::format("{}: {}", spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec,
                            e.what()));
  } catch (const GameError& e) {
    throw Error(fmt::format("--game {}: {}", spec, e.what()));
  } catch (const Error& e) {
    throw Error(fmt::format("--game: {}", e.what()));
  }
}

// Writes to `path` or to `out` when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) : stream_(&out) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error(fmt::format("--out: cannot open '{}' for writing", path));
    stream_ = file_.get();
  }
  std::ostream& stream() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

StrategyMode parse_mode(const std::string& mode) {
  if (mode == "avg") return StrategyMode::kAvgIterate;
  if (mode == "last") return StrategyMode::kLastIterate;
  throw Error(fmt::format("--mode: unknown mode '{}' (expected avg or last)", mode));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample(std::span<const double> probs, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  int last = 0;
  for (int a = 0; a < static_cast<int>(probs.size()); ++a) {
    if (probs[a] <= 0.0) continue;
    last = a;
    acc += probs[a];
    if (u < acc) return a;
  }
  return last;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::string format_payoffs(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += fmt::format("{}P{} {:g}", i ? " " : "", i + 1, values[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------

void cmd_solve(const GameFlags& flags, int eval_every, const std::string& out_path,
               bool wall_clock, std::ostream& out) {
  SolveOptions options = to_options(flags);
  options.eval_every = eval_every;
  auto tree = load(flags.game);
  Sink sink(out_path, out);
  sink.stream() << trace_header() << '\n';
  const SolveResult result = solve(tree, options, [&](const TraceRow& row) {
    spdlog::info("iteration {} avg {:.6g} last {:.6g}", row.iteration, row.exploitability_avg,
                 row.exploitability_last);
    sink.stream() << format_trace_row(row, wall_clock) << '\n';
  });
  sink.stream().flush();
  if (sink.to_file()) out << format_trace_row(result.trace.back(), wall_clock) << '\n';
}

void cmd_dump(const GameFlags& flags, int player, const std::string& mode,
              const std::string& out_path, std::ostream& out) {
  const StrategyMode strategy_mode = parse_mode(mode);
  SolveOptions options = to_options(flags);
  options.evaluate = false;
  auto tree = load(flags.game);
  if (player < 0 || player > tree->num_players) {
    throw Error(fmt::format("--player: {} is not a player of this game (0..{})", player,
                            tree->num_players));
  }
  const SolveResult result = solve(tree, options);
  const StrategyTable table =
      extract_strategy_table(*result.env, result.config.algorithm.strategy, strategy_mode, player);
  Sink sink(out_path, out);
  sink.stream() << table.to_csv();
}

void cmd_interact(const GameFlags& flags, const std::string& strategy_path, int human,
                  std::istream& in, std::ostream& out) {
  auto tree = load(flags.game);
  if (human < 1 || human > tree->num_players) {
    throw Error(fmt::format("--player: {} is not a player of this game (1..{})", human,
                            tree->num_players));
  }
  BehavioralProfile machine;
  if (!strategy_path.empty()) {
    std::ifstream file(strategy_path, std::ios::binary);
    if (!file) throw Error(fmt::format("--strategy: cannot open '{}'", strategy_path));
    std::stringstream buffer;
    buffer << file.rdbuf();
    try {
      machine = profile_from_csv(*tree, buffer.str());
    } catch (const Error& e) {
      throw Error(fmt::format("{}: {}", strategy_path, e.what()));
    }
  } else {
    SolveOptions options = to_options(flags);
    options.evaluate = false;
    const SolveResult result = solve(tree, options);
    machine = result.env->current_profile(result.config.algorithm.strategy,
                                          StrategyMode::kAvgIterate);
  }

  std::mt19937_64 rng(flags.seed);
  std::vector<double> totals(tree->num_players, 0.0);
  int episodes = 0;
  bool quit = false;
  out << fmt::format("you are P{}; enter an action label, or q to quit\n", human);
  while (!quit) {
    out << fmt::format("-- episode {}\n", episodes + 1);
    int node = 0;
    while (!quit && !tree->nodes[node].is_terminal()) {
      const GameNode& h = tree->nodes[node];
      if (h.is_chance()) {
        node = h.children[sample(h.chance_probs, rng)];
        continue;
      }
      const Infoset& s = tree->infosets[h.infoset];
      if (h.player != human) {
        const int a = sample(machine[s.id], rng);
        out << fmt::format("P{} plays {}\n", h.player, h.actions[a]);
        node = h.children[a];
        continue;
      }
      std::string labels;
      for (const auto& label : h.actions) labels += " " + label;
      out << fmt::format("{} actions:{}\n", s.name, labels);
      while (true) {
        out << "> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) {
          out << '\n';
          quit = true;
          break;
        }
        const std::string token = trim(line);
        if (token == "q" || token == "quit") {
          quit = true;
          break;
        }
        const auto it = std::find(h.actions.begin(), h.actions.end(), token);
        if (it == h.actions.end()) {
          out << fmt::format("illegal action '{}'; choose one of:{}\n", token, labels);
          continue;
        }
        node = h.children[it - h.actions.begin()];
        break;
      }
    }
    if (quit) break;
    const GameNode& z = tree->nodes[node];
    for (int i = 0; i < tree->num_players; ++i) totals[i] += z.payoffs[i];
    ++episodes;
    out << fmt::format("end {}: {}\n", z.name, format_payoffs(z.payoffs));
    out << fmt::format("totals: {}\n", format_payoffs(totals));
  }
  out << fmt::format("session over after {} episode{}\n", episodes, episodes == 1 ? "" : "s");
  out << fmt::format("totals: {}\n", format_payoffs(totals));
}

void cmd_bench(const GameFlags& flags, int repeats, std::ostream& out) {
  if (repeats < 1) throw Error("--repeats: must be at least 1");
  SolveOptions options = to_options(flags);
  options.evaluate = false;
  auto tree = load(flags.game);
  std::vector<double> times;
  out << "repeat,wall_ms,iterations_per_second\n";
  for (int r = 0; r < repeats; ++r) {
    options.seed = flags.seed + static_cast<std::uint64_t>(r);
    const SolveResult result = solve(tree, options);
    times.push_back(result.wall_ms);
    const double rate = result.wall_ms > 0 ? flags.iters * 1000.0 / result.wall_ms : 0.0;
    out << fmt::format("{},{:.3f},{:.1f}\n", r + 1, result.wall_ms, rate);
  }
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const double rate = median > 0 ? flags.iters * 1000.0 / median : 0.0;
  out << fmt::format("summary: min {:.3f} ms, median {:.3f} ms, max {:.3f} ms, {:.1f} iterations/s\n",
                     sorted.front(), median, sorted.back(), rate);
}

void configure_logging() {
  static const bool done = [] {
    auto logger = spdlog::stderr_logger_st("efg");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    return true;
  }();
  (void)done;
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("EFG_LOG")) level = spdlog::level::from_str(env);
  spdlog::set_level(level);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  configure_logging();

  CLI::App app{"Tabular extensive-form game solver", "efg"};
  app.require_subcommand(1);

  GameFlags solve_flags;
  int eval_every = 0;
  std::string solve_out;
  bool no_wall_clock = false;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run an algorithm and write a convergence trace");
  add_game_flags(solve_cmd, solve_flags, 1000);
  solve_cmd->add_option("--eval-every", eval_every, "evaluation interval (0: first and last only)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--out", solve_out, "trace file (default: standard output)");
  solve_cmd->add_flag("--no-wall-clock", no_wall_clock, "write 0 in the wall_ms column");

  GameFlags dump_flags;
  int dump_player = 1;
  std::string dump_mode = "avg";
  std::string dump_out;
  CLI::App* dump_cmd = app.add_subcommand("dump", "print a strategy table as CSV");
  add_game_flags(dump_cmd, dump_flags, 0);
  dump_cmd->add_option("--player", dump_player, "player (0: all)")->capture_default_str();
  dump_cmd->add_option("--mode", dump_mode, "avg or last")->capture_default_str();
  dump_cmd->add_option("--out", dump_out, "output file (default: standard output)");

  GameFlags interact_flags;
  int human = 1;
  std::string strategy_path;
  CLI::App* interact_cmd = app.add_subcommand("interact", "play against a computed strategy");
  add_game_flags(interact_cmd, interact_flags, 1000);
  interact_cmd->add_option("--player", human, "the human's player index")->capture_default_str();
  interact_cmd->add_option("--strategy", strategy_path, "strategy CSV written by dump");

  GameFlags bench_flags;
  int repeats = 3;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time repeated runs without evaluation");
  add_game_flags(bench_cmd, bench_flags, 1000);
  bench_cmd->add_option("--repeats", repeats, "number of runs")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*solve_cmd) cmd_solve(solve_flags, eval_every, solve_out, !no_wall_clock, out);
    if (*dump_cmd) cmd_dump(dump_flags, dump_player, dump_mode, dump_out, out);
    if (*interact_cmd) cmd_interact(interact_flags, strategy_path, human, in, out);
    if (*bench_cmd) cmd_bench(bench_flags, repeats, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace efg::cli
