#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "beepsim/bitstring.hpp"
#include "beepsim/graph.hpp"
#include "beepsim/program.hpp"

// Randomized maximal matching over anonymous broadcast.
//
// Per iteration, every node samples a value x(e) for each edge it owns (it
// owns the edges where it is the higher-ID endpoint) and the protocol runs
// four broadcast rounds: Propose (owner announces its minimum edge), Reply
// (the other endpoint accepts the smallest incident proposal if it beats its
// own), Confirm (the owner, on hearing a Reply for its proposal and having
// sent no Reply itself, joins the matching), and a Confirm relay (the
// replier joins and re-announces so second neighborhoods can prune).  A
// preliminary round broadcasts IDs so nodes learn their incident edges.

namespace beepsim::proto {

struct MatchingLayout {
  std::size_t id_bits = 0;
  std::size_t x_bits = 0;
  std::size_t total_bits() const { return 2 + 2 * id_bits + x_bits; }

  // tag(2) + two ids + x value sized for [n^9]; honors oversized custom ids.
  static MatchingLayout for_graph(const net::Graph& g);
  static MatchingLayout for_n(std::size_t n);
};

// Uniform sample range for x values: min(n^9, 2^63).
std::uint64_t x_value_range(std::size_t n);

enum class MatchTag : std::uint64_t { kNoop = 0, kPropose = 1, kReply = 2, kConfirm = 3 };

struct MatchMessage {
  MatchTag tag = MatchTag::kNoop;
  std::uint64_t hi = 0;  // owner (higher-ID) endpoint
  std::uint64_t lo = 0;
  std::uint64_t x = 0;

  BitString encode(const MatchingLayout& layout) const;
  static MatchMessage decode(const BitString& wire, const MatchingLayout& layout);
};

// Deterministic function of (seed, iteration, edge): both the program and
// any offline check recompute identical x values.
std::uint64_t sample_x(std::uint64_t program_seed, std::size_t iteration, std::uint64_t hi,
                       std::uint64_t lo, std::uint64_t range);

// The per-node process.  Outputs: matched partner id (or none) plus the
// iteration that matched it (for the per-iteration independence check).
class MatchingProcess : public NodeProcess {
 public:
  MatchingProcess(std::uint64_t own_id, std::size_t n, MatchingLayout layout,
                  std::size_t iteration_cap, std::uint64_t program_seed);

  RoundAction on_round(const std::vector<BitString>& received) override;

  std::optional<std::uint64_t> partner() const { return partner_; }
  std::optional<std::size_t> matched_iteration() const { return matched_iteration_; }
  bool x_collision_seen() const { return x_collision_seen_; }
  // True when the node gave up at the iteration cap with live edges left.
  bool capped() const { return capped_; }

 private:
  void start_iteration();
  RoundAction propose_or_noop();
  void apply_removals(const MatchMessage& msg);
  BitString noop() const;

  std::uint64_t own_id_;
  std::size_t n_;
  MatchingLayout layout_;
  std::size_t iteration_cap_;
  std::uint64_t seed_;

  std::size_t step_ = 0;
  std::size_t iteration_ = 0;
  std::vector<std::uint64_t> neighbors_;             // ids, ascending
  std::vector<std::uint64_t> edges_;                 // live incident edges (other endpoint id)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> owned_x_;  // (other endpoint, x) this iter
  std::optional<std::uint64_t> proposed_lo_;
  std::uint64_t proposed_x_ = 0;
  std::optional<std::uint64_t> reply_hi_;            // owner of the edge we replied to
  std::uint64_t reply_x_ = 0;
  bool will_confirm_ = false;
  bool will_relay_ = false;
  std::optional<std::uint64_t> partner_;
  std::optional<std::size_t> matched_iteration_;
  bool x_collision_seen_ = false;
  bool capped_ = false;
};

// Program factory.  iteration cap: 4 * ceil(log2 n) (>= 1).
NodeProgram maximal_matching_program(const net::Graph& g);
std::size_t matching_iteration_cap(std::size_t n);

struct MatchingOutput {
  // Per node: matched partner id, or nullopt.
  std::vector<std::optional<std::uint64_t>> partner;
  std::vector<std::optional<std::size_t>> matched_iteration;
  bool x_collision = false;
  bool capped = false;  // some node hit the iteration cap with live edges
};

MatchingOutput extract_matching_output(
    const std::vector<std::unique_ptr<NodeProcess>>& processes);

struct MatchVerify {
  bool symmetry = false;    // partner pointers are mutual
  bool edges_exist = false; // every matched pair is an actual edge
  bool maximality = false;  // no edge with both endpoints unmatched
  bool pass = false;
};

MatchVerify verify_matching(const net::Graph& g, const MatchingOutput& out);

// Matched pairs as (u, v) index pairs, u < v.
std::vector<std::pair<int, int>> matching_edges(const net::Graph& g, const MatchingOutput& out);

// Independent maximality/matching check on an explicit edge set.
bool brute_force_maximal_check(const net::Graph& g,
                               const std::vector<std::pair<int, int>>& edge_set);

// Per-iteration independence: no two edges matched in the same iteration
// share an endpoint.
bool iterations_independent(const net::Graph& g, const MatchingOutput& out);

// Centralized reference process: every edge draws x, strict local minima
// join, matched endpoints drop out.  removed_per_iteration[i] counts edges
// deleted in iteration i (matched edges included).
struct LubyResult {
  std::vector<std::pair<int, int>> matching;
  std::vector<std::size_t> removed_per_iteration;
  std::vector<std::size_t> live_before_iteration;
  std::size_t iterations = 0;
};

LubyResult luby_matching_oracle(const net::Graph& g, std::uint64_t seed);

}  // namespace beepsim::proto
