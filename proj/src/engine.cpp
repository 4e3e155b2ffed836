#include "beepsim/engine.hpp"

#include <ostream>
#include <stdexcept>

#include "beepsim/rng.hpp"

namespace beepsim::net {

namespace {
constexpr std::uint64_t kNoiseTag = stream_tag("noise");
}

NoiseChannel::NoiseChannel(double eps, std::uint64_t s, bool self_known)
    : epsilon_(eps), seed_(s), self_knowledge_(self_known) {
  if (!(eps >= 0.0 && eps < 0.5)) {
    throw std::invalid_argument("noise level must lie in [0, 1/2)");
  }
  key_ = derive(s, kNoiseTag);
  threshold_ = bernoulli_threshold(eps);
}

bool NoiseChannel::flip(int node, std::size_t round) const {
  if (epsilon_ <= 0.0) return false;
  std::uint64_t h = mix64(key_ + kGolden * static_cast<std::uint64_t>(node) +
                          0xC2B2AE3D27D4EB4Full * static_cast<std::uint64_t>(round));
  return h < threshold_;
}

void Transcript::dump(std::ostream& out) const {
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    out << t << " | " << rounds[t].actions.to_string() << " | "
        << rounds[t].received.to_string() << '\n';
  }
}

BeepRun::BeepRun(const Graph& g, NoiseChannel channel, bool record_transcript,
                 std::size_t start_round)
    : graph_(g), channel_(channel), record_(record_transcript), next_round_(start_round) {}

BitString BeepRun::run_round(const BitString& actions) {
  BitString received = run_beep_round(graph_, actions, channel_, next_round_);
  if (record_) transcript_.rounds.push_back({actions, received});
  ++next_round_;
  return received;
}

std::vector<BitString> BeepRun::run_schedule(const std::vector<BitString>& schedules) {
  std::size_t n = graph_.n();
  if (schedules.size() != n) {
    throw std::invalid_argument("schedule must cover every node exactly once");
  }
  std::size_t len = n == 0 ? 0 : schedules[0].length();
  for (const auto& s : schedules) {
    if (s.length() != len) throw std::invalid_argument("schedules must share one length");
  }

  // Word-parallel closed-neighborhood OR, then per-(node, round) noise.
  std::vector<BitString> heard(n);
  for (std::size_t v = 0; v < n; ++v) {
    BitString pre = schedules[v];
    for (int u : graph_.neighbors(static_cast<int>(v))) pre.or_with(schedules[u]);
    if (channel_.epsilon() > 0.0) {
      bool self_clean = channel_.self_knowledge();
      for (std::size_t t = 0; t < len; ++t) {
        if (self_clean && schedules[v].bit(t)) continue;
        if (channel_.flip(static_cast<int>(v), next_round_ + t)) {
          pre.set_bit(t, !pre.bit(t));
        }
      }
    }
    heard[v] = std::move(pre);
  }

  if (record_) {
    for (std::size_t t = 0; t < len; ++t) {
      Transcript::Round round;
      round.actions = BitString(n);
      round.received = BitString(n);
      for (std::size_t v = 0; v < n; ++v) {
        round.actions.set_bit(v, schedules[v].bit(t));
        round.received.set_bit(v, heard[v].bit(t));
      }
      transcript_.rounds.push_back(std::move(round));
    }
  }
  next_round_ += len;
  return heard;
}

BitString run_beep_round(const Graph& g, const BitString& actions, const NoiseChannel& channel,
                         std::size_t round_index) {
  if (actions.length() != g.n()) {
    throw std::invalid_argument("actions must cover every node exactly once");
  }
  BitString received(g.n());
  for (std::size_t v = 0; v < g.n(); ++v) {
    bool beeped = actions.bit(v);
    bool pre = beeped;
    if (!pre) {
      for (int u : g.neighbors(static_cast<int>(v))) {
        if (actions.bit(u)) {
          pre = true;
          break;
        }
      }
    }
    bool value = pre;
    if (!(channel.self_knowledge() && beeped) && channel.flip(static_cast<int>(v), round_index)) {
      value = !value;
    }
    received.set_bit(v, value);
  }
  return received;
}

std::vector<BitString> run_schedule(const Graph& g, const std::vector<BitString>& schedules,
                                    const NoiseChannel& channel, std::size_t start_round) {
  BeepRun run(g, channel, false, start_round);
  return run.run_schedule(schedules);
}

}  // namespace beepsim::net
