// beepsim: experiments over the noisy-beep broadcast simulation.
//
// Subcommands: gen-codes, round-trial, sweep, tune, matching, localbcast.
// Records go to --out as CSV or JSON lines with the config echoed in the
// header; human-readable summaries go to stderr.  Exit codes: 0 success,
// 1 usage/config error, 2 acceptance-target miss.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beepsim/codes.hpp"
#include "beepsim/engine.hpp"
#include "beepsim/graph.hpp"
#include "beepsim/harness.hpp"
#include "beepsim/local_broadcast.hpp"
#include "beepsim/matching.hpp"
#include "beepsim/rng.hpp"
#include "beepsim/simcast.hpp"

namespace {

using beepsim::derive;
using beepsim::stream_tag;
using beepsim::codes::BitString;
namespace codes = beepsim::codes;
namespace net = beepsim::net;
namespace sim = beepsim::sim;
namespace proto = beepsim::proto;
namespace harness = beepsim::harness;

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kTargetMiss = 2;

struct CommonOpts {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t jobs = 1;
  std::string out = "-";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "Base seed; every trial derives its own substream");
  cmd->add_option("--trials", o.trials, "Number of trials");
  cmd->add_option("--jobs", o.jobs, "Worker threads (records stay in trial order)")
      ->check(CLI::Range(1, 512));
  cmd->add_option("--out", o.out, "Record output path, '-' for stdout");
  cmd->add_option("--format", o.format, "Record format")
      ->check(CLI::IsMember({"csv", "json"}));
}

// Record sink: a file or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

using Config = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void add_common_echo(Config& cfg, const std::string& subcommand, const CommonOpts& o) {
  cfg.emplace_back("subcommand", subcommand);
  cfg.emplace_back("seed", std::to_string(o.seed));
  cfg.emplace_back("trials", std::to_string(o.trials));
  cfg.emplace_back("jobs", std::to_string(o.jobs));
  cfg.emplace_back("format", o.format);
}

std::string rate_line(const harness::SuccessStats& s) {
  std::ostringstream os;
  os << s.successes << "/" << s.trials << " = " << s.rate << " +- " << s.standard_error;
  return os.str();
}

// ---------------------------------------------------------------- gen-codes

struct GenCodesOpts {
  std::string family;
  std::size_t a = 8;
  double delta = 1.0 / 3.0;
  double cdelta = 0.0;  // 0 = use the analytical minimum 12*(1-2*delta)^-2
  std::size_t k = 8;
  double c = 6.0;
  std::string mode = "empirical";
  std::uint64_t seed = 7;
  std::size_t trials = 10000;
  double max_violation = -1.0;  // < 0 = informational only
};

int run_gen_codes(const GenCodesOpts& o) {
  codes::Mode mode = codes::mode_from_name(o.mode);
  if (o.family == "distance") {
    double cdelta = o.cdelta;
    if (cdelta <= 0.0) cdelta = 12.0 / ((1.0 - 2.0 * o.delta) * (1.0 - 2.0 * o.delta));
    auto params = codes::DistanceCodeParams::make(o.a, o.delta, cdelta, mode);
    codes::DistanceCode code(params, o.seed);
    std::cout << code.manifest() << "\n";
    codes::DistanceVerifyResult vr;
    if (o.a <= 14) {
      vr = codes::verify_distance_code(code);
    } else {
      std::cerr << "exhaustive distance verification refused: a=" << o.a
                << " exceeds cap 14 (would need 2^" << o.a
                << " codewords); falling back to " << o.trials << " sampled pairs\n";
      vr = codes::sample_min_distance(code, o.trials, derive(o.seed, stream_tag("pairs")));
    }
    std::cout << "min_distance=" << vr.min_distance
              << " required=" << params.delta * static_cast<double>(params.b)
              << " pairs_checked=" << vr.pairs_checked << " pass=" << (vr.pass ? 1 : 0)
              << "\n";
    return vr.pass ? kOk : kTargetMiss;
  }

  auto params = codes::BeepCodeParams::make(o.a, o.k, o.c, mode);
  codes::BeepCode code(params, o.seed);
  std::cout << code.manifest() << "\n";
  double rate =
      codes::estimate_beep_violation_rate(code, o.trials, derive(o.seed, stream_tag("violation")));
  std::cout << "violation_rate=" << rate << " trials=" << o.trials
            << " intersect_threshold=" << params.intersect_threshold() << "\n";
  if (o.max_violation >= 0.0 && rate > o.max_violation) {
    std::cerr << "violation rate " << rate << " exceeds target " << o.max_violation << "\n";
    return kTargetMiss;
  }
  return kOk;
}

// -------------------------------------------------------------- round-trial

struct RoundTrialOpts {
  CommonOpts common;
  std::string graph = "rand:n=32,dcap=6,p=0.15";
  double eps = 0.0;
  double gamma = 1.0;
  double ceps = 2.0;
  std::string mode = "empirical";
  std::string policy = "restricted";
  bool check_condition = false;
  double min_success = -1.0;
};

harness::RoundTrialConfig make_round_config(const RoundTrialOpts& o) {
  harness::RoundTrialConfig cfg;
  cfg.graph = harness::parse_graph_spec(o.graph);
  cfg.eps = o.eps;
  cfg.gamma = o.gamma;
  cfg.c_eps = o.ceps;
  cfg.mode = codes::mode_from_name(o.mode);
  cfg.policy = harness::policy_from_name(o.policy);
  cfg.check_condition = o.check_condition;
  cfg.seed = o.common.seed;
  return cfg;
}

int run_round_trial(const RoundTrialOpts& o) {
  harness::RoundTrialConfig cfg = make_round_config(o);
  sim::SimParams params = harness::round_trial_params(cfg);

  Config echo;
  add_common_echo(echo, "round-trial", o.common);
  echo.emplace_back("graph", cfg.graph.name);
  echo.emplace_back("n", std::to_string(cfg.graph.n));
  echo.emplace_back("delta", std::to_string(cfg.graph.delta_bound));
  echo.emplace_back("eps", fmt(o.eps));
  echo.emplace_back("gamma", fmt(o.gamma));
  echo.emplace_back("c_eps", fmt(o.ceps));
  echo.emplace_back("mode", o.mode);
  echo.emplace_back("policy", o.policy);
  echo.emplace_back("check_condition", o.check_condition ? "1" : "0");
  echo.emplace_back("L", std::to_string(params.L));
  echo.emplace_back("beep_rounds_per_round", std::to_string(params.rounds_per_simulated_round()));

  Output out(o.common.out);
  harness::RecordWriter writer(out.stream(), harness::format_from_name(o.common.format), echo);

  std::vector<char> condition_held(o.common.trials, 0);
  auto records = harness::run_trials(
      o.common.trials, o.common.jobs, [&cfg, &condition_held](std::size_t i) {
        auto full = harness::run_round_trial_full(cfg, i);
        condition_held[i] = full.result.intersection_condition.value_or(false) ? 1 : 0;
        return full.record;
      });

  std::size_t ok = 0;
  for (const auto& rec : records) {
    writer.write(rec);
    if (rec.set_decode_ok.value_or(false) && rec.msg_decode_ok.value_or(false)) ++ok;
  }
  auto stats = harness::success_stats(ok, records.size());
  std::cerr << "round-trial: success " << rate_line(stats) << " | rounds/trial "
            << params.rounds_per_simulated_round();
  if (o.check_condition) {
    std::size_t held = 0;
    for (char c : condition_held) held += (c != 0);
    std::cerr << " | condition " << held << "/" << records.size();
  }
  std::cerr << "\n";
  if (o.min_success >= 0.0 && !records.empty() && stats.rate < o.min_success) {
    std::cerr << "success rate " << stats.rate << " below target " << o.min_success << "\n";
    return kTargetMiss;
  }
  return kOk;
}

// -------------------------------------------------------------------- sweep

struct SweepOpts {
  CommonOpts common;
  std::vector<std::size_t> n_list{16};
  std::vector<std::size_t> delta_list{2, 4, 8};
  std::vector<double> eps_list{0.0};
  std::vector<double> ceps_list{2.0};
  double gamma = 1.0;
  std::string mode = "empirical";
  std::string policy = "restricted";
  std::size_t max_cells = 64;
  double min_success = -1.0;
};

template <typename T>
std::string join_list(const std::vector<T>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

int run_sweep(const SweepOpts& o) {
  std::size_t cells =
      o.n_list.size() * o.delta_list.size() * o.eps_list.size() * o.ceps_list.size();
  if (cells == 0) throw std::invalid_argument("sweep grid is empty");
  if (cells > o.max_cells) {
    std::cerr << "sweep grid has " << cells << " cells, over the cap of " << o.max_cells
              << " (raise --max-cells to allow)\n";
    return kUsageError;
  }
  for (std::size_t n : o.n_list) {
    for (std::size_t d : o.delta_list) {
      if (2 * d > n) {
        std::cerr << "cell n=" << n << " delta=" << d
                  << " impossible: the bipartite instance needs n >= 2*delta\n";
        return kUsageError;
      }
    }
  }

  Config echo;
  add_common_echo(echo, "sweep", o.common);
  echo.emplace_back("n", join_list(o.n_list));
  echo.emplace_back("delta", join_list(o.delta_list));
  echo.emplace_back("eps", join_list(o.eps_list));
  echo.emplace_back("c_eps", join_list(o.ceps_list));
  echo.emplace_back("gamma", fmt(o.gamma));
  echo.emplace_back("mode", o.mode);
  echo.emplace_back("policy", o.policy);

  Output out(o.common.out);
  harness::RecordWriter writer(out.stream(), harness::format_from_name(o.common.format), echo);

  int exit_code = kOk;
  std::int64_t global_trial = 0;
  std::size_t cell_index = 0;
  for (std::size_t n : o.n_list) {
    for (std::size_t d : o.delta_list) {
      for (double eps : o.eps_list) {
        for (double ceps : o.ceps_list) {
          std::ostringstream gspec;
          gspec << "hard:d=" << d << ",n=" << n;
          harness::RoundTrialConfig cfg;
          cfg.graph = harness::parse_graph_spec(gspec.str());
          cfg.eps = eps;
          cfg.gamma = o.gamma;
          cfg.c_eps = ceps;
          cfg.mode = codes::mode_from_name(o.mode);
          cfg.policy = harness::policy_from_name(o.policy);
          cfg.seed = derive(o.common.seed, stream_tag("cell"), cell_index++);
          sim::SimParams params = harness::round_trial_params(cfg);
          std::size_t expected_rounds = params.rounds_per_simulated_round();

          auto records = harness::run_trials(
              o.common.trials, o.common.jobs,
              [&cfg](std::size_t i) { return harness::run_round_trial(cfg, i); });
          std::size_t ok = 0;
          for (auto& rec : records) {
            if (rec.rounds_used != expected_rounds) {
              std::cerr << "internal error: cell n=" << n << " delta=" << d << " eps=" << eps
                        << " c_eps=" << ceps << " trial " << rec.trial << " used "
                        << rec.rounds_used.value_or(0) << " beep rounds, expected "
                        << expected_rounds << "\n";
              return kTargetMiss;
            }
            rec.trial = global_trial++;
            writer.write(rec);
            if (rec.set_decode_ok.value_or(false) && rec.msg_decode_ok.value_or(false)) ++ok;
          }
          auto stats = harness::success_stats(ok, records.size());
          std::cerr << "sweep n=" << n << " delta=" << d << " eps=" << eps
                    << " c_eps=" << ceps << ": success " << rate_line(stats)
                    << " rounds=" << expected_rounds << "\n";
          if (o.min_success >= 0.0 && !records.empty() && stats.rate < o.min_success) {
            exit_code = kTargetMiss;
          }
        }
      }
    }
  }
  if (exit_code == kTargetMiss) {
    std::cerr << "at least one cell fell below the success target " << o.min_success << "\n";
  }
  return exit_code;
}

// -------------------------------------------------------------------- tune

struct TuneOpts {
  std::string graph = "rand:n=32,dcap=6,p=0.15";
  double eps = 0.05;
  double gamma = 1.0;
  std::string mode = "empirical";
  std::string policy = "restricted";
  double target = 0.95;
  std::size_t trials = 200;
  long long cap = 64;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

int run_tune(const TuneOpts& o) {
  if (o.target > 1.0) {
    std::cerr << "target " << o.target << " unreachable: success rates cannot exceed 1\n";
    return kTargetMiss;
  }
  harness::RoundTrialConfig cfg;
  cfg.graph = harness::parse_graph_spec(o.graph);
  cfg.eps = o.eps;
  cfg.gamma = o.gamma;
  cfg.mode = codes::mode_from_name(o.mode);
  cfg.policy = harness::policy_from_name(o.policy);
  cfg.seed = o.seed;

  auto result = harness::tune_constant(o.target, o.cap, [&](long long c) {
    double rate = harness::round_trial_success_rate(cfg, c, o.trials, o.jobs);
    std::cerr << "tune probe c_eps=" << c << ": rate=" << rate << "\n";
    return rate;
  });
  std::cout << "c_eps=" << result.c << " achieved=" << result.achieved
            << " target=" << o.target << " reached=" << (result.reached ? 1 : 0)
            << " trials_per_probe=" << o.trials << " eps=" << o.eps << " graph="
            << cfg.graph.name << "\n";
  if (!result.reached) {
    std::cerr << "target " << o.target << " unreachable within c_eps cap " << o.cap
              << "; best c_eps=" << result.c << " rate=" << result.achieved << "\n";
    return kTargetMiss;
  }
  return kOk;
}

// ----------------------------------------------------------------- matching

struct MatchingOpts {
  CommonOpts common;
  std::string graph = "rand:n=16,dcap=15,p=0.25";
  std::string via = "native";
  double eps = 0.05;
  double ceps = 2.0;
  std::string mode = "empirical";
  std::string policy = "restricted";
  double min_verified = -1.0;
};

int run_matching(const MatchingOpts& o) {
  harness::GraphSpec spec = harness::parse_graph_spec(o.graph);
  bool via_beeps = (o.via == "beeps");
  codes::Mode mode = codes::mode_from_name(o.mode);
  sim::CandidatePolicy policy = harness::policy_from_name(o.policy);

  Config echo;
  add_common_echo(echo, "matching", o.common);
  echo.emplace_back("graph", spec.name);
  echo.emplace_back("n", std::to_string(spec.n));
  echo.emplace_back("delta", std::to_string(spec.delta_bound));
  echo.emplace_back("via", o.via);
  if (via_beeps) {
    echo.emplace_back("eps", fmt(o.eps));
    echo.emplace_back("c_eps", fmt(o.ceps));
    echo.emplace_back("mode", o.mode);
    echo.emplace_back("policy", o.policy);
  }

  Output out(o.common.out);
  harness::RecordWriter writer(out.stream(), harness::format_from_name(o.common.format), echo);

  auto body = [&](std::size_t i) {
    auto start = std::chrono::steady_clock::now();
    std::uint64_t trial_seed = derive(o.common.seed, stream_tag("trial"), i);
    net::Graph g = spec.build(spec.randomized ? derive(trial_seed, stream_tag("graph")) : 0);
    proto::NodeProgram prog = proto::maximal_matching_program(g);
    std::uint64_t program_seed = derive(trial_seed, stream_tag("prog"));
    std::size_t cap = proto::matching_iteration_cap(g.n());
    std::size_t t_max = 2 + 4 * (cap + 1);

    std::vector<std::unique_ptr<proto::NodeProcess>> procs;
    sim::ProgramRun run;
    harness::TrialRecord rec;
    if (via_beeps) {
      sim::SimParams params = sim::SimParams::make_with_length(
          spec.n, spec.delta_bound, prog.message_bits, o.eps, o.ceps, mode);
      net::NoiseChannel channel(o.eps, derive(trial_seed, stream_tag("noise")));
      sim::TrialSeeds seeds{derive(trial_seed, stream_tag("beep")),
                            derive(trial_seed, stream_tag("dist")),
                            derive(trial_seed, stream_tag("tags"))};
      run = sim::run_broadcast_program(g, prog, program_seed, procs, t_max, params, channel,
                                       seeds, policy);
      rec.eps = o.eps;
      rec.gamma = params.gamma;
      rec.c_eps = o.ceps;
      rec.mode = o.mode;
      rec.candidate_policy = o.policy;
      rec.rounds_used = run.beep_rounds;
      rec.msg_decode_ok = run.all_rounds_ok;  // every simulated round fully decoded
      rec.collision_flag = run.tag_collision;
      rec.ambiguity_count = run.ambiguity_count;
    } else {
      run = sim::run_native_broadcast(g, prog, program_seed, procs, t_max);
      rec.rounds_used = run.program_rounds;
    }
    proto::MatchingOutput result = proto::extract_matching_output(procs);
    proto::MatchVerify verify = proto::verify_matching(g, result);

    rec.trial = static_cast<std::int64_t>(i);
    rec.seed = trial_seed;
    rec.n = static_cast<std::int64_t>(g.n());
    rec.delta = static_cast<std::int64_t>(spec.delta_bound);
    rec.verified = verify.pass;
    rec.iterations =
        run.program_rounds >= 1 ? (run.program_rounds - 1) / 4 : 0;
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return std::make_pair(rec, result.capped);
  };

  std::vector<harness::TrialRecord> records(o.common.trials);
  std::vector<char> capped(o.common.trials, 0);
  {
    auto wrapped = [&](std::size_t i) {
      auto [rec, was_capped] = body(i);
      capped[i] = was_capped ? 1 : 0;
      return rec;
    };
    records = harness::run_trials(o.common.trials, o.common.jobs, wrapped);
  }

  std::size_t verified = 0;
  std::uint64_t iter_sum = 0;
  std::size_t capped_count = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    writer.write(records[i]);
    verified += records[i].verified.value_or(false) ? 1 : 0;
    iter_sum += records[i].iterations.value_or(0);
    capped_count += capped[i];
  }
  auto stats = harness::success_stats(verified, records.size());
  std::cerr << "matching[" << o.via << "]: verified " << rate_line(stats) << " | capped "
            << capped_count << "/" << records.size();
  if (!records.empty()) {
    std::cerr << " | mean_iterations "
              << static_cast<double>(iter_sum) / static_cast<double>(records.size());
  }
  std::cerr << "\n";
  if (o.min_verified >= 0.0 && !records.empty() && stats.rate < o.min_verified) {
    std::cerr << "verified rate " << stats.rate << " below target " << o.min_verified << "\n";
    return kTargetMiss;
  }
  return kOk;
}

// --------------------------------------------------------------- localbcast

struct LocalBcastOpts {
  CommonOpts common;
  std::string graph = "rand:n=16,dcap=4,p=0.3";
  std::size_t payload_bits = 8;
  std::string via = "native";
  double eps = 0.0;
  double ceps = 2.0;
  std::string mode = "empirical";
  std::string policy = "restricted";
  std::size_t width = 0;  // 0 = no budget check
  double min_verified = -1.0;
};

int run_localbcast(const LocalBcastOpts& o) {
  harness::GraphSpec spec = harness::parse_graph_spec(o.graph);
  bool via_beeps = (o.via == "beeps");
  codes::Mode mode = codes::mode_from_name(o.mode);
  sim::CandidatePolicy policy = harness::policy_from_name(o.policy);
  std::size_t delta_cap = std::max<std::size_t>(1, spec.delta_bound);

  // Wire width the one-exchange protocol needs at this graph size.
  net::Graph probe = spec.build(0);
  std::size_t id_bits = beepsim::proto::id_field_bits(probe);
  std::size_t wire_bits = sim::congest_wrapper_bits(id_bits, id_bits + o.payload_bits);
  if (o.width != 0 && wire_bits > o.width) {
    std::cerr << "payload of " << o.payload_bits << " bits needs " << wire_bits
              << "-bit messages (sender id + addressing), over the --width budget of "
              << o.width << "; payload chunking is not supported\n";
    return kUsageError;
  }

  Config echo;
  add_common_echo(echo, "localbcast", o.common);
  echo.emplace_back("graph", spec.name);
  echo.emplace_back("n", std::to_string(spec.n));
  echo.emplace_back("delta", std::to_string(delta_cap));
  echo.emplace_back("payload_bits", std::to_string(o.payload_bits));
  echo.emplace_back("wire_bits", std::to_string(wire_bits));
  echo.emplace_back("via", o.via);
  if (via_beeps) {
    echo.emplace_back("eps", fmt(o.eps));
    echo.emplace_back("c_eps", fmt(o.ceps));
    echo.emplace_back("mode", o.mode);
    echo.emplace_back("policy", o.policy);
  }

  Output out(o.common.out);
  harness::RecordWriter writer(out.stream(), harness::format_from_name(o.common.format), echo);

  std::atomic<bool> structural_failure{false};
  auto body = [&](std::size_t i) {
    auto start = std::chrono::steady_clock::now();
    std::uint64_t trial_seed = derive(o.common.seed, stream_tag("trial"), i);
    net::Graph g = spec.build(spec.randomized ? derive(trial_seed, stream_tag("graph")) : 0);
    auto task = proto::LocalBroadcastTask::random(g, o.payload_bits,
                                                  derive(trial_seed, stream_tag("task")));
    proto::NodeProgram prog = proto::local_broadcast_program(g, task, delta_cap, id_bits);
    std::uint64_t program_seed = derive(trial_seed, stream_tag("prog"));
    std::size_t t_max = 1 + delta_cap + 2;

    std::vector<std::unique_ptr<proto::NodeProcess>> procs;
    sim::ProgramRun run;
    harness::TrialRecord rec;
    if (via_beeps) {
      sim::SimParams params = sim::SimParams::make_with_length(
          spec.n, delta_cap, prog.message_bits, o.eps, o.ceps, mode);
      net::NoiseChannel channel(o.eps, derive(trial_seed, stream_tag("noise")));
      sim::TrialSeeds seeds{derive(trial_seed, stream_tag("beep")),
                            derive(trial_seed, stream_tag("dist")),
                            derive(trial_seed, stream_tag("tags"))};
      run = sim::run_broadcast_program(g, prog, program_seed, procs, t_max, params, channel,
                                       seeds, policy);
      rec.eps = o.eps;
      rec.gamma = params.gamma;
      rec.c_eps = o.ceps;
      rec.mode = o.mode;
      rec.candidate_policy = o.policy;
      rec.rounds_used = run.beep_rounds;
      rec.msg_decode_ok = run.all_rounds_ok;
      rec.collision_flag = run.tag_collision;
      rec.ambiguity_count = run.ambiguity_count;
    } else {
      run = sim::run_native_broadcast(g, prog, program_seed, procs, t_max);
      rec.rounds_used = run.program_rounds;
    }
    if (run.program_rounds != 1 + delta_cap) structural_failure = true;

    std::vector<proto::Inbox> inboxes;
    inboxes.reserve(procs.size());
    for (const auto& p : procs) inboxes.push_back(proto::extract_inbox(*p));
    bool ok = proto::verify_local_broadcast(g, task, inboxes);

    rec.trial = static_cast<std::int64_t>(i);
    rec.seed = trial_seed;
    rec.n = static_cast<std::int64_t>(g.n());
    rec.delta = static_cast<std::int64_t>(delta_cap);
    rec.verified = ok;
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return rec;
  };

  auto records = harness::run_trials(o.common.trials, o.common.jobs, body);
  std::size_t verified = 0;
  for (const auto& rec : records) {
    writer.write(rec);
    verified += rec.verified.value_or(false) ? 1 : 0;
  }
  auto stats = harness::success_stats(verified, records.size());
  std::cerr << "localbcast[" << o.via << "]: verified " << rate_line(stats)
            << " | broadcast rounds/trial " << (1 + delta_cap) << "\n";
  if (structural_failure) {
    std::cerr << "internal error: wrapper did not use exactly 1 + T*delta broadcast rounds\n";
    return kTargetMiss;
  }
  if (o.min_verified >= 0.0 && !records.empty() && stats.rate < o.min_verified) {
    std::cerr << "verified rate " << stats.rate << " below target " << o.min_verified << "\n";
    return kTargetMiss;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy-beep broadcast simulation experiments"};
  app.require_subcommand(1);
  int rc = kOk;

  GenCodesOpts gen;
  auto* gen_cmd = app.add_subcommand("gen-codes", "Generate a code and verify/estimate its law");
  gen_cmd->add_option("--family", gen.family, "Code family")
      ->required()
      ->check(CLI::IsMember({"distance", "beep"}));
  gen_cmd->add_option("--a", gen.a, "Payload bits");
  gen_cmd->add_option("--delta", gen.delta, "Required relative distance (distance family)");
  gen_cmd->add_option("--cdelta", gen.cdelta,
                      "Length multiplier; 0 = analytical minimum (distance family)");
  gen_cmd->add_option("--k", gen.k, "Superimposition set size (beep family)");
  gen_cmd->add_option("--c", gen.c, "Sparsity constant (beep family)");
  gen_cmd->add_option("--mode", gen.mode, "Constant regime")
      ->check(CLI::IsMember({"theory", "empirical"}));
  gen_cmd->add_option("--seed", gen.seed, "Code seed");
  gen_cmd->add_option("--trials", gen.trials, "Monte Carlo samples / sampled pairs");
  gen_cmd->add_option("--max-violation", gen.max_violation,
                      "Fail (exit 2) when the beep violation rate exceeds this");
  gen_cmd->callback([&] { rc = run_gen_codes(gen); });

  RoundTrialOpts rt;
  auto* rt_cmd = app.add_subcommand("round-trial", "Seeded single-round simulation trials");
  add_common(rt_cmd, rt.common);
  rt_cmd->add_option("--graph", rt.graph, "Graph spec or file");
  rt_cmd->add_option("--eps", rt.eps, "Channel noise")->check(CLI::Range(0.0, 0.499999));
  rt_cmd->add_option("--gamma", rt.gamma, "Message length multiplier");
  rt_cmd->add_option("--ceps", rt.ceps, "Constant multiplier c_eps");
  rt_cmd->add_option("--mode", rt.mode)->check(CLI::IsMember({"theory", "empirical"}));
  rt_cmd->add_option("--policy", rt.policy)
      ->check(CLI::IsMember({"restricted", "exhaustive"}));
  rt_cmd->add_flag("--check-condition", rt.check_condition,
                   "Also evaluate the per-instance intersection condition");
  rt_cmd->add_option("--min-success", rt.min_success, "Exit 2 when success rate falls below");
  rt_cmd->callback([&] { rc = run_round_trial(rt); });

  SweepOpts sw;
  sw.common.trials = 20;  // per cell
  auto* sw_cmd = app.add_subcommand("sweep", "Cartesian sweep over n/delta/eps/c_eps");
  add_common(sw_cmd, sw.common);
  sw_cmd->add_option("--n", sw.n_list, "Node counts")->delimiter(',');
  sw_cmd->add_option("--delta", sw.delta_list, "Degree bounds")->delimiter(',');
  sw_cmd->add_option("--eps", sw.eps_list, "Noise levels")->delimiter(',');
  sw_cmd->add_option("--ceps", sw.ceps_list, "Constant multipliers")->delimiter(',');
  sw_cmd->add_option("--gamma", sw.gamma, "Message length multiplier");
  sw_cmd->add_option("--mode", sw.mode)->check(CLI::IsMember({"theory", "empirical"}));
  sw_cmd->add_option("--policy", sw.policy)
      ->check(CLI::IsMember({"restricted", "exhaustive"}));
  sw_cmd->add_option("--max-cells", sw.max_cells, "Refuse grids larger than this");
  sw_cmd->add_option("--min-success", sw.min_success,
                     "Exit 2 when any cell's success rate falls below");
  sw_cmd->callback([&] { rc = run_sweep(sw); });

  TuneOpts tn;
  auto* tn_cmd = app.add_subcommand("tune", "Smallest integer c_eps reaching a success target");
  tn_cmd->add_option("--graph", tn.graph, "Graph spec or file");
  tn_cmd->add_option("--eps", tn.eps, "Channel noise")->check(CLI::Range(0.0, 0.499999));
  tn_cmd->add_option("--gamma", tn.gamma, "Message length multiplier");
  tn_cmd->add_option("--mode", tn.mode)->check(CLI::IsMember({"theory", "empirical"}));
  tn_cmd->add_option("--policy", tn.policy)
      ->check(CLI::IsMember({"restricted", "exhaustive"}));
  tn_cmd->add_option("--target", tn.target, "Success-rate target in [0, 1]");
  tn_cmd->add_option("--trials", tn.trials, "Trials per probe");
  tn_cmd->add_option("--cap", tn.cap, "Largest c_eps to consider");
  tn_cmd->add_option("--seed", tn.seed, "Base seed");
  tn_cmd->add_option("--jobs", tn.jobs, "Worker threads")->check(CLI::Range(1, 512));
  tn_cmd->callback([&] { rc = run_tune(tn); });

  MatchingOpts mt;
  auto* mt_cmd = app.add_subcommand("matching", "Maximal matching, native or over beeps");
  add_common(mt_cmd, mt.common);
  mt_cmd->add_option("--graph", mt.graph, "Graph spec or file");
  auto* mt_via = mt_cmd->add_option("--via", mt.via, "Execution layer")
                     ->check(CLI::IsMember({"native", "beeps"}));
  auto* mt_native = mt_cmd->add_flag_callback("--native", [&mt] { mt.via = "native"; },
                                              "Shorthand for --via native");
  auto* mt_beeps = mt_cmd->add_flag_callback("--beeps", [&mt] { mt.via = "beeps"; },
                                             "Shorthand for --via beeps");
  mt_native->excludes(mt_via)->excludes(mt_beeps);
  mt_beeps->excludes(mt_via);
  mt_cmd->add_option("--eps", mt.eps, "Channel noise (beeps)")->check(CLI::Range(0.0, 0.499999));
  mt_cmd->add_option("--ceps", mt.ceps, "Constant multiplier (beeps)");
  mt_cmd->add_option("--mode", mt.mode)->check(CLI::IsMember({"theory", "empirical"}));
  mt_cmd->add_option("--policy", mt.policy)
      ->check(CLI::IsMember({"restricted", "exhaustive"}));
  mt_cmd->add_option("--min-verified", mt.min_verified,
                     "Exit 2 when verified rate falls below");
  mt_cmd->callback([&] { rc = run_matching(mt); });

  LocalBcastOpts lb;
  auto* lb_cmd = app.add_subcommand("localbcast", "Per-neighbor payload delivery task");
  add_common(lb_cmd, lb.common);
  lb_cmd->add_option("--graph", lb.graph, "Graph spec or file");
  lb_cmd->add_option("--payload-bits", lb.payload_bits, "Payload bits per neighbor")
      ->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  auto* lb_via = lb_cmd->add_option("--via", lb.via, "Execution layer")
                     ->check(CLI::IsMember({"native", "beeps"}));
  auto* lb_native = lb_cmd->add_flag_callback("--native", [&lb] { lb.via = "native"; },
                                              "Shorthand for --via native");
  auto* lb_beeps = lb_cmd->add_flag_callback("--beeps", [&lb] { lb.via = "beeps"; },
                                             "Shorthand for --via beeps");
  lb_native->excludes(lb_via)->excludes(lb_beeps);
  lb_beeps->excludes(lb_via);
  lb_cmd->add_option("--eps", lb.eps, "Channel noise (beeps)")->check(CLI::Range(0.0, 0.499999));
  lb_cmd->add_option("--ceps", lb.ceps, "Constant multiplier (beeps)");
  lb_cmd->add_option("--mode", lb.mode)->check(CLI::IsMember({"theory", "empirical"}));
  lb_cmd->add_option("--policy", lb.policy)
      ->check(CLI::IsMember({"restricted", "exhaustive"}));
  lb_cmd->add_option("--width", lb.width,
                     "Per-message bit budget; refuse when the task needs more (0 = off)");
  lb_cmd->add_option("--min-verified", lb.min_verified,
                     "Exit 2 when verified rate falls below");
  lb_cmd->callback([&] { rc = run_localbcast(lb); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints the message / help text
    return code == 0 ? 0 : kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return rc;
}
