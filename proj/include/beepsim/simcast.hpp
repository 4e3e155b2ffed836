#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "beepsim/codes.hpp"
#include "beepsim/engine.hpp"
#include "beepsim/graph.hpp"
#include "beepsim/program.hpp"

// Simulation of one Broadcast CONGEST round on the noisy beep channel.
//
// Every node draws a fresh random tag r_v, beeps the beep codeword C(r_v)
// for b_beep rounds (phase 1), then beeps the combined codeword CD(r_v, m_v)
// for another b_beep rounds (phase 2).  Receivers decode the set of tags in
// their closed neighborhood from the phase-1 superimposition, then recover
// each sender's message by nearest-codeword decoding of the phase-2 bits at
// that sender's codeword positions.

namespace beepsim::sim {

using codes::BitString;
using codes::Mode;

// Smallest constant multiplier for which the analysis of the noisy decoder
// goes through at noise level epsilon (ceiling of the max of the five
// analytical constraints).  Requires 0 < epsilon < 1/2.
long long min_c_epsilon(double epsilon);

struct SimParams {
  // Inputs.
  std::size_t n = 0;      // network size the parameters are sized for
  std::size_t delta = 0;  // max degree bound the codes must tolerate
  double gamma = 1.0;     // message length multiplier: L = ceil(gamma*log2 n)
  double epsilon = 0.0;   // channel noise level
  double c_eps = 1.0;     // constant multiplier
  Mode mode = Mode::kEmpirical;

  // Derived.
  std::size_t L = 0;       // message bits per simulated round
  std::size_t a_beep = 0;  // beep-code payload bits, round(c_eps * L)
  std::size_t b_dist = 0;  // distance codeword length == beep codeword weight
  std::size_t b_beep = 0;  // beep codeword length (one phase's round count)
  double tau_set = 0.0;    // phase-1 inclusion threshold, ((2eps+1)/4) * w

  std::size_t rounds_per_simulated_round() const { return 2 * b_beep; }

  codes::BeepCodeParams beep_params() const;
  codes::DistanceCodeParams dist_params() const;

  static SimParams make(std::size_t n, std::size_t delta, double gamma, double epsilon,
                        double c_eps, Mode mode);
  // Same derivation but with the message width pinned directly.
  static SimParams make_with_length(std::size_t n, std::size_t delta, std::size_t L,
                                    double epsilon, double c_eps, Mode mode);
};

enum class CandidatePolicy {
  kExhaustive,  // range over every payload (refused above the width caps)
  kRestricted,  // range over a caller-supplied candidate list
};

inline constexpr std::size_t kExhaustiveSetCap = 20;   // max a_beep for exhaustive set decode
inline constexpr std::size_t kExhaustiveMsgCap = 20;   // max L for exhaustive message decode

// Phase-1 decoder: all candidate tags r whose codeword is "present" in the
// heard superimposition x_tilde, i.e. intersect_count(C(r), NOT x_tilde) <
// tau_set.  Returns tags in increasing order.
std::vector<BitString> decode_neighbor_set(const BitString& x_tilde, const codes::BeepCode& code,
                                           double tau_set, CandidatePolicy policy,
                                           std::span<const BitString> candidates = {});

struct MessageDecode {
  BitString message;
  std::size_t distance = 0;
  bool ambiguous = false;  // another candidate achieved the same distance
};

// Phase-2 decoder: extract y_tilde at C(r)'s 1-positions and return the
// message whose distance codeword is Hamming-nearest; ties break toward the
// numerically smallest payload and set `ambiguous`.
MessageDecode decode_message(const BitString& y_tilde, const BitString& r,
                             const codes::BeepCode& beep, const codes::DistanceCode& dist,
                             CandidatePolicy policy,
                             std::span<const BitString> candidates = {});

struct DecodedSender {
  BitString tag;      // decoded r
  BitString message;  // decoded payload for that r
  bool ambiguous = false;
};

struct NodeRoundOutcome {
  std::vector<BitString> decoded_set;        // sorted tags
  std::vector<DecodedSender> decoded;        // one entry per decoded tag
  bool set_ok = false;                       // decoded_set == true closed-neighborhood tags
  bool messages_ok = false;                  // every true sender's message recovered exactly
  bool self_ok = false;                      // informational: own tag+message decoded
};

struct RoundResult {
  std::vector<NodeRoundOutcome> nodes;   // indexed by node; inactive nodes left empty
  std::vector<BitString> tags;           // r_v actually drawn this round
  std::size_t beep_rounds_used = 0;      // always 2*b_beep
  bool set_decode_ok = false;            // AND over active nodes
  bool msg_decode_ok = false;
  bool tag_collision = false;            // two active nodes drew the same r
  std::size_t ambiguity_count = 0;
  // Low-interference condition: for every active node v and every candidate
  // tag r, C(r) does not 5a-intersect the OR of the other codewords heard at
  // v.  Filled only when requested (see simulate_round options).
  std::optional<bool> intersection_condition;
};

struct TrialSeeds {
  std::uint64_t beep_code = 0;
  std::uint64_t dist_code = 0;
  std::uint64_t tag_draw = 0;  // substream for the per-round r_v draws
};

struct RoundContext {
  const SimParams& params;
  const codes::BeepCode& beep;
  const codes::DistanceCode& dist;
  CandidatePolicy policy = CandidatePolicy::kRestricted;
  bool check_condition = false;  // also evaluate the intersection condition
};

// Core round step: messages[v] == nullopt means node v transmits nothing
// this round (it neither beeps nor counts toward ground truth as a sender).
// decode_mask selects which nodes decode (nullptr = all); flags are computed
// over decoding nodes.  Advances `run` by exactly 2*b_beep beep rounds.
RoundResult simulate_round(net::BeepRun& run, const RoundContext& ctx,
                           const std::vector<std::optional<BitString>>& messages,
                           std::uint64_t tag_seed,
                           const std::vector<bool>* decode_mask = nullptr);

// One-shot form: builds codes from seeds and a fresh engine.
RoundResult simulate_broadcast_round(const net::Graph& g, const std::vector<BitString>& messages,
                                     const SimParams& params, const net::NoiseChannel& channel,
                                     const TrialSeeds& seeds,
                                     CandidatePolicy policy = CandidatePolicy::kRestricted,
                                     bool check_condition = false);

struct ProgramRun {
  std::size_t program_rounds = 0;          // broadcast rounds executed
  std::size_t beep_rounds = 0;             // total beep rounds consumed
  std::vector<bool> round_ok;              // per executed round: full decode success
  bool all_rounds_ok = true;
  bool terminated = false;                 // all nodes halted before the cap
  bool tag_collision = false;
  std::size_t ambiguity_count = 0;
};

// Runs a node program with every broadcast round simulated over beeps.
// Processes are created from program.make with the given program_seed;
// outputs are read back by the caller through the processes vector.
ProgramRun run_broadcast_program(const net::Graph& g, const proto::NodeProgram& program,
                                 std::uint64_t program_seed,
                                 std::vector<std::unique_ptr<proto::NodeProcess>>& processes,
                                 std::size_t t_max, const SimParams& params,
                                 const net::NoiseChannel& channel, const TrialSeeds& seeds,
                                 CandidatePolicy policy = CandidatePolicy::kRestricted);

// Reference driver: identical semantics with lossless closed-neighborhood
// delivery and no beeping.  Differential oracle for the simulated driver.
ProgramRun run_native_broadcast(const net::Graph& g, const proto::NodeProgram& program,
                                std::uint64_t program_seed,
                                std::vector<std::unique_ptr<proto::NodeProcess>>& processes,
                                std::size_t t_max);

// Broadcast-side adapter for one CONGEST node: one ID round, then each
// CONGEST round expands into delta broadcast rounds carrying
// <noop flag, dest id, inner message> pairs in ascending-neighbor-ID order
// (padded with no-ops).  Total broadcast rounds: 1 + T*delta.
class CongestWrapperProcess : public proto::NodeProcess {
 public:
  CongestWrapperProcess(std::unique_ptr<proto::CongestNode> inner, std::uint64_t own_id,
                        std::size_t delta_cap, std::size_t id_bits, std::size_t inner_bits,
                        std::size_t total_rounds);

  proto::RoundAction on_round(const std::vector<BitString>& received) override;

  proto::CongestNode& inner() { return *inner_; }
  const proto::CongestNode& inner() const { return *inner_; }

 private:
  void absorb(const std::vector<BitString>& received);

  std::unique_ptr<proto::CongestNode> inner_;
  std::uint64_t own_id_;
  std::size_t delta_cap_, id_bits_, inner_bits_, rounds_;
  std::size_t step_ = 0;
  std::vector<std::uint64_t> neighbors_;
  std::map<std::uint64_t, BitString> pending_;
  std::vector<BitString> buffer_;
};

// Program form of the adapter above.
proto::NodeProgram congest_over_broadcast(const proto::CongestProgram& inner,
                                          std::size_t delta_cap, std::size_t id_bits);

// Message width the wrapper needs: 1 + id_bits + inner width.
std::size_t congest_wrapper_bits(std::size_t id_bits, std::size_t inner_bits);

}  // namespace beepsim::sim
