#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "beepsim/bitstring.hpp"
#include "beepsim/graph.hpp"

// The noisy beep-round engine.
//
// In one round every node either beeps or listens; node v's pre-noise bit is
// 1 iff v itself beeped or at least one neighbor beeped (closed
// neighborhood).  The received bit is then flipped independently with
// probability epsilon — including a beeper's own heard 1, unless the channel
// is configured with self_knowledge.

namespace beepsim::net {

class NoiseChannel {
 public:
  NoiseChannel() = default;
  // self_known: a node that beeps hears its own 1 noiselessly.
  NoiseChannel(double eps, std::uint64_t s, bool self_known = false);

  double epsilon() const { return epsilon_; }
  std::uint64_t seed() const { return seed_; }
  bool self_knowledge() const { return self_knowledge_; }

  // Noise flip for the given (node, round) slot.  Flips for distinct slots
  // come from disjoint substreams, so transcripts replay identically no
  // matter in which order rounds are computed.  epsilon == 0 consumes no
  // randomness at all (noiseless runs are seed independent).
  bool flip(int node, std::size_t round) const;

 private:
  double epsilon_ = 0.0;
  std::uint64_t seed_ = 0;
  bool self_knowledge_ = false;
  std::uint64_t key_ = 0;
  std::uint64_t threshold_ = 0;
};

struct Transcript {
  struct Round {
    BitString actions;   // bit v = node v beeped
    BitString received;  // bit v = node v heard 1 (post noise)
  };
  std::vector<Round> rounds;

  std::size_t length() const { return rounds.size(); }
  // One line per round: "t | actions | received".
  void dump(std::ostream& out) const;
};

// One simulation run: owns the global round counter and (optionally) the
// transcript.  All multi-round drivers funnel through this so round indices
// used for noise keying never collide.
class BeepRun {
 public:
  BeepRun(const Graph& g, NoiseChannel channel, bool record_transcript = false,
          std::size_t start_round = 0);

  // actions bit v = beep; returns the post-noise received bits.
  BitString run_round(const BitString& actions);

  // schedules[v] = per-round beep plan for node v (all equal length);
  // returns what each node heard over those rounds.
  std::vector<BitString> run_schedule(const std::vector<BitString>& schedules);

  std::size_t rounds_used() const { return next_round_; }
  const Transcript& transcript() const { return transcript_; }
  const Graph& graph() const { return graph_; }
  const NoiseChannel& channel() const { return channel_; }

 private:
  const Graph& graph_;
  NoiseChannel channel_;
  bool record_;
  std::size_t next_round_ = 0;
  Transcript transcript_;
};

// Single-shot conveniences with an explicit round index / start round.
BitString run_beep_round(const Graph& g, const BitString& actions, const NoiseChannel& channel,
                         std::size_t round_index);
std::vector<BitString> run_schedule(const Graph& g, const std::vector<BitString>& schedules,
                                    const NoiseChannel& channel, std::size_t start_round);

}  // namespace beepsim::net
