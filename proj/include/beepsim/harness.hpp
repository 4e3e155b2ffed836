#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beepsim/graph.hpp"
#include "beepsim/simcast.hpp"

// Experiment plumbing shared by the command-line tool and the tests:
// a fixed trial-record schema with CSV/JSON writers, a deterministic
// parallel trial runner, graph-source specs, and the constant tuner.

namespace beepsim::harness {

enum class Format { kCsv, kJson };

std::string format_name(Format format);
Format format_from_name(const std::string& name);

std::string policy_name(sim::CandidatePolicy policy);
sim::CandidatePolicy policy_from_name(const std::string& name);

// One row per trial.  The schema is shared by every subcommand; fields a
// subcommand does not produce stay null (empty CSV cell / JSON null).
struct TrialRecord {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  std::int64_t delta = 0;
  double eps = 0.0;
  double gamma = 0.0;
  double c_eps = 0.0;
  std::string mode;              // "theory" | "empirical"
  std::string candidate_policy;  // "restricted" | "exhaustive"
  std::optional<std::uint64_t> rounds_used;
  std::optional<bool> set_decode_ok;
  std::optional<bool> msg_decode_ok;
  std::optional<bool> collision_flag;
  std::optional<std::uint64_t> ambiguity_count;
  std::optional<bool> verified;          // matching / local broadcast verdict
  std::optional<std::uint64_t> iterations;  // matching iterations to halt
  double wall_ms = 0.0;  // excluded from reproducibility comparisons
};

// Column list, comma-joined, in emission order (wall_ms last).
const std::string& record_header();

// Serialized forms.  Doubles use shortest round-trip formatting so equal
// configs produce byte-identical bodies.
std::string to_csv_row(const TrialRecord& rec);
std::string to_json_line(const TrialRecord& rec);

// Emits the config echo + header immediately, then one line per record.
// CSV: "# schema=1", one "# key=value" per config entry, the column header,
// then rows.  JSON: a {"schema":1,"config":{...}} line, then one object per
// record.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, Format format,
               const std::vector<std::pair<std::string, std::string>>& config);

  void write(const TrialRecord& rec);
  std::size_t written() const { return written_; }

 private:
  std::ostream& out_;
  Format format_;
  std::size_t written_ = 0;
};

// Runs body(0..trials-1) on up to `jobs` threads; results come back in
// trial order regardless of scheduling.  body must depend only on its index.
std::vector<TrialRecord> run_trials(std::size_t trials, std::size_t jobs,
                                    const std::function<TrialRecord(std::size_t)>& body);

// A graph source: either a fixed instance or a per-seed generator.
//
// Accepted specs:
//   k<d><d>        complete bipartite K_{d,d} (equal halves, e.g. "k44")
//   hard:d=D[,n=N] K_{D,D} plus isolated nodes up to N (default N = 2D)
//   rand:n=N,dcap=D,p=P   degree-capped G(N, P), fresh per trial seed
//   path<n> | cycle<n> | empty<n>
//   anything else: path to a graph file
struct GraphSpec {
  std::string name;         // normalized form of the spec
  bool randomized = false;  // true when build() varies with the seed
  std::size_t n = 0;        // node count every built instance has
  std::size_t delta_bound = 0;  // degree bound every built instance respects
  std::function<net::Graph(std::uint64_t seed)> build;
};

GraphSpec parse_graph_spec(const std::string& spec);

// One seeded single-round experiment: build the graph (fresh per trial for
// randomized specs), give every node a uniform message, simulate the round.
struct RoundTrialConfig {
  GraphSpec graph;
  double eps = 0.0;
  double gamma = 1.0;
  double c_eps = 2.0;
  codes::Mode mode = codes::Mode::kEmpirical;
  sim::CandidatePolicy policy = sim::CandidatePolicy::kRestricted;
  bool check_condition = false;
  std::uint64_t seed = 1;
};

// Parameters the config resolves to (sized by the spec's n / degree bound).
sim::SimParams round_trial_params(const RoundTrialConfig& config);

struct RoundTrialOutcome {
  TrialRecord record;      // success columns filled, wall_ms measured
  sim::RoundResult result; // full per-node detail (incl. condition check)
};

RoundTrialOutcome run_round_trial_full(const RoundTrialConfig& config, std::size_t trial);
TrialRecord run_round_trial(const RoundTrialConfig& config, std::size_t trial);

// Fraction of `trials` round trials that fully decode (set and messages) at
// integer constant c.  Trials for distinct c use disjoint seed substreams.
double round_trial_success_rate(const RoundTrialConfig& config, long long c,
                                std::size_t trials, std::size_t jobs);

struct SuccessStats {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double standard_error = 0.0;  // sqrt(p(1-p)/trials)
};

SuccessStats success_stats(std::size_t successes, std::size_t trials);

// Smallest integer constant c >= 1 with success_at(c) >= target: doubling
// until a passing c is seen, then integer bisection.  Evaluations are
// memoized; `probes` records each distinct (c, rate) measured.  When no
// c <= c_cap passes, `reached` is false and `c` holds the best rate seen.
struct TuneResult {
  long long c = 0;
  double achieved = 0.0;
  bool reached = false;
  std::vector<std::pair<long long, double>> probes;
};

TuneResult tune_constant(double target, long long c_cap,
                         const std::function<double(long long)>& success_at);

}  // namespace beepsim::harness
