#include "beepsim/simcast.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "beepsim/rng.hpp"

namespace beepsim::sim {

long long min_c_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("min_c_epsilon requires epsilon in (0, 1/2)");
  }
  double e = epsilon;
  double one_m2e = 1.0 - 2.0 * e;
  double inv = 1.0 / (4.0 * e) - 0.5;
  double terms[5] = {
      (6.0 / e) / (inv * inv),
      54.0 / (one_m2e * one_m2e * e) + 5.0,
      60.0 / one_m2e,
      30.0 / (e * one_m2e),
      6.0 / std::pow((1.0 - e) * one_m2e / (e * (7.0 - 2.0 * e)), 2.0),
  };
  double worst = *std::max_element(terms, terms + 5);
  return static_cast<long long>(std::ceil(worst - 1e-9));
}

namespace {

std::size_t ceil_log2(std::size_t n) {
  std::size_t bits = 0;
  std::size_t value = 1;
  while (value < n) {
    value *= 2;
    ++bits;
  }
  return bits;
}

std::size_t derive_length(double gamma, std::size_t n) {
  if (n == 0) throw std::invalid_argument("network size must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  double raw = gamma * std::log2(static_cast<double>(n));
  auto L = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::max<std::size_t>(1, L);
}

}  // namespace

codes::BeepCodeParams SimParams::beep_params() const {
  return codes::BeepCodeParams::make(a_beep, delta + 1, c_eps, mode);
}

codes::DistanceCodeParams SimParams::dist_params() const {
  // The distance codeword must be exactly as long as the beep codeword's
  // weight so the combined encode lines up; the multiplier is b_dist / L.
  return codes::DistanceCodeParams::make(L, 1.0 / 3.0,
                                         static_cast<double>(b_dist) / static_cast<double>(L),
                                         mode);
}

SimParams SimParams::make(std::size_t n, std::size_t delta, double gamma, double epsilon,
                          double c_eps, Mode mode) {
  SimParams p = make_with_length(n, delta, derive_length(gamma, n), epsilon, c_eps, mode);
  p.gamma = gamma;
  return p;
}

SimParams SimParams::make_with_length(std::size_t n, std::size_t delta, std::size_t L,
                                      double epsilon, double c_eps, Mode mode) {
  if (L == 0) throw std::invalid_argument("message width must be >= 1");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("epsilon must lie in [0, 1/2)");
  }
  if (!(c_eps > 0.0)) throw std::invalid_argument("c_eps must be > 0");
  if (mode == Mode::kTheory) {
    long long bound = min_c_epsilon(epsilon);  // throws for epsilon == 0
    if (c_eps + 1e-9 < static_cast<double>(bound)) {
      throw std::invalid_argument("theory mode requires c_eps >= " + std::to_string(bound));
    }
  }
  SimParams p;
  p.n = n;
  p.delta = delta;
  p.epsilon = epsilon;
  p.c_eps = c_eps;
  p.mode = mode;
  p.L = L;
  p.gamma = n > 1 ? static_cast<double>(L) / std::log2(static_cast<double>(n))
                  : static_cast<double>(L);
  double a_raw = c_eps * static_cast<double>(L);
  p.a_beep = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(a_raw)));
  auto beep = codes::BeepCodeParams::make(p.a_beep, delta + 1, c_eps, mode);
  p.b_beep = beep.b;
  p.b_dist = beep.w;  // keeps weight(beep codeword) == distance codeword length exact
  p.tau_set = (2.0 * epsilon + 1.0) / 4.0 * static_cast<double>(beep.w);
  if (!(p.tau_set > 0.0 && p.tau_set < static_cast<double>(beep.w))) {
    throw std::invalid_argument("derived tau_set fell outside (0, w)");
  }
  p.dist_params();  // validates the distance-side constraints
  return p;
}

std::vector<BitString> decode_neighbor_set(const BitString& x_tilde, const codes::BeepCode& code,
                                           double tau_set, CandidatePolicy policy,
                                           std::span<const BitString> candidates) {
  const auto& cp = code.params();
  if (x_tilde.length() != cp.b) {
    throw std::invalid_argument("heard string length must equal codeword length");
  }
  BitString not_x = bit_not(x_tilde);
  std::vector<BitString> out;
  if (policy == CandidatePolicy::kExhaustive) {
    if (cp.a > kExhaustiveSetCap) {
      throw std::invalid_argument("exhaustive set decode refused: a=" + std::to_string(cp.a) +
                                  " exceeds cap " + std::to_string(kExhaustiveSetCap));
    }
    for (std::uint64_t r = 0; r < (1ull << cp.a); ++r) {
      BitString tag = BitString::from_u64(r, cp.a);
      if (static_cast<double>(intersect_count(code.codeword(tag), not_x)) < tau_set) {
        out.push_back(std::move(tag));
      }
    }
    return out;  // ascending by construction
  }
  std::set<BitString> unique(candidates.begin(), candidates.end());
  for (const BitString& tag : unique) {
    if (tag.length() != cp.a) throw std::invalid_argument("candidate tag width mismatch");
    if (static_cast<double>(intersect_count(code.codeword(tag), not_x)) < tau_set) {
      out.push_back(tag);
    }
  }
  return out;
}

MessageDecode decode_message(const BitString& y_tilde, const BitString& r,
                             const codes::BeepCode& beep, const codes::DistanceCode& dist,
                             CandidatePolicy policy, std::span<const BitString> candidates) {
  BitString y_sub = codes::extract_subsequence(y_tilde, beep.codeword(r));
  const auto& dp = dist.params();
  if (y_sub.length() != dp.b) {
    throw std::invalid_argument("extracted subsequence length must equal distance codeword length");
  }
  MessageDecode best;
  bool have = false;
  auto consider = [&](const BitString& m) {
    std::size_t d = codes::hamming_distance(dist.codeword(m), y_sub);
    if (!have || d < best.distance) {
      best.message = m;
      best.distance = d;
      best.ambiguous = false;
      have = true;
    } else if (d == best.distance) {
      best.ambiguous = true;  // tie: keep the numerically smaller (earlier) payload
    }
  };
  if (policy == CandidatePolicy::kExhaustive) {
    if (dp.a > kExhaustiveMsgCap) {
      throw std::invalid_argument("exhaustive message decode refused: L=" + std::to_string(dp.a) +
                                  " exceeds cap " + std::to_string(kExhaustiveMsgCap));
    }
    for (std::uint64_t m = 0; m < (1ull << dp.a); ++m) consider(BitString::from_u64(m, dp.a));
  } else {
    std::set<BitString> unique(candidates.begin(), candidates.end());
    if (unique.empty()) throw std::invalid_argument("restricted decode needs candidates");
    for (const BitString& m : unique) {
      if (m.length() != dp.a) throw std::invalid_argument("candidate message width mismatch");
      consider(m);
    }
  }
  return best;
}

RoundResult simulate_round(net::BeepRun& run, const RoundContext& ctx,
                           const std::vector<std::optional<BitString>>& messages,
                           std::uint64_t tag_seed, const std::vector<bool>* decode_mask) {
  const net::Graph& g = run.graph();
  const SimParams& p = ctx.params;
  std::size_t n = g.n();
  if (messages.size() != n) throw std::invalid_argument("one message slot per node required");
  if (decode_mask && decode_mask->size() != n) {
    throw std::invalid_argument("decode mask must cover every node");
  }

  RoundResult result;
  result.nodes.resize(n);
  result.tags.resize(n);

  std::vector<bool> active(n, false);
  std::vector<BitString> beep_cw(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!messages[v].has_value()) continue;
    if (messages[v]->length() != p.L) {
      throw std::invalid_argument("message width must equal L=" + std::to_string(p.L));
    }
    active[v] = true;
    result.tags[v] = codes::random_bits(p.a_beep, derive(tag_seed, stream_tag("tag"), v));
    beep_cw[v] = ctx.beep.codeword(result.tags[v]);
  }

  // Phase 1: beep C(r_v); phase 2: beep CD(r_v, m_v).  Silent nodes hold
  // all-zero schedules (they listen but never beep).
  std::vector<BitString> phase1(n), phase2(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (active[v]) {
      phase1[v] = beep_cw[v];
      phase2[v] = codes::combine_codewords(beep_cw[v], ctx.dist.codeword(*messages[v]));
    } else {
      phase1[v] = BitString(p.b_beep);
      phase2[v] = BitString(p.b_beep);
    }
  }
  std::vector<BitString> heard1 = run.run_schedule(phase1);
  std::vector<BitString> heard2 = run.run_schedule(phase2);
  result.beep_rounds_used = 2 * p.b_beep;

  // Candidate universe for restricted decoding: tags actually in the air.
  std::vector<BitString> tag_universe;
  std::vector<BitString> message_universe;
  for (std::size_t v = 0; v < n; ++v) {
    if (active[v]) {
      tag_universe.push_back(result.tags[v]);
      message_universe.push_back(*messages[v]);
    }
  }
  {
    std::set<BitString> distinct(tag_universe.begin(), tag_universe.end());
    result.tag_collision = distinct.size() != tag_universe.size();
  }

  bool use_exhaustive_msgs =
      ctx.policy == CandidatePolicy::kExhaustive && p.L <= kExhaustiveMsgCap;

  result.set_decode_ok = true;
  result.msg_decode_ok = true;
  bool condition = true;
  double cond_threshold = ctx.beep.params().intersect_threshold();

  for (std::size_t v = 0; v < n; ++v) {
    if (decode_mask && !(*decode_mask)[v]) continue;
    NodeRoundOutcome& node = result.nodes[v];

    // Ground truth: active closed-neighborhood senders.
    std::vector<std::size_t> senders;
    if (active[v]) senders.push_back(v);
    for (int u : g.neighbors(static_cast<int>(v))) {
      if (active[u]) senders.push_back(u);
    }
    std::set<BitString> truth_tags;
    for (std::size_t u : senders) truth_tags.insert(result.tags[u]);

    node.decoded_set = decode_neighbor_set(heard1[v], ctx.beep, p.tau_set, ctx.policy,
                                           std::span<const BitString>(tag_universe));
    node.set_ok = std::equal(node.decoded_set.begin(), node.decoded_set.end(), truth_tags.begin(),
                             truth_tags.end());

    for (const BitString& tag : node.decoded_set) {
      MessageDecode md =
          use_exhaustive_msgs
              ? decode_message(heard2[v], tag, ctx.beep, ctx.dist, CandidatePolicy::kExhaustive)
              : decode_message(heard2[v], tag, ctx.beep, ctx.dist, CandidatePolicy::kRestricted,
                               std::span<const BitString>(message_universe));
      if (md.ambiguous) ++result.ambiguity_count;
      node.decoded.push_back({tag, md.message, md.ambiguous});
    }

    auto decoded_message_for = [&](const BitString& tag) -> const BitString* {
      for (const auto& d : node.decoded) {
        if (d.tag == tag) return &d.message;
      }
      return nullptr;
    };
    node.messages_ok = true;
    for (std::size_t u : senders) {
      const BitString* m = decoded_message_for(result.tags[u]);
      if (m == nullptr || *m != *messages[u]) node.messages_ok = false;
    }
    if (active[v]) {
      const BitString* own = decoded_message_for(result.tags[v]);
      node.self_ok = own != nullptr && *own == *messages[v];
    }

    result.set_decode_ok = result.set_decode_ok && node.set_ok;
    result.msg_decode_ok = result.msg_decode_ok && node.messages_ok;

    if (ctx.check_condition) {
      // For every candidate tag: its codeword must not threshold-intersect
      // the OR of the *other* codewords audible at v.
      std::vector<const BitString*> heard_cws;
      for (std::size_t u : senders) heard_cws.push_back(&beep_cw[u]);
      BitString all_or = BitString(p.b_beep);
      for (auto* cw : heard_cws) all_or.or_with(*cw);
      auto check_tag = [&](const BitString& tag, const BitString& cw) {
        bool is_heard = truth_tags.count(tag) > 0;
        if (!is_heard) {
          if (codes::intersects(cw, all_or, cond_threshold)) condition = false;
          return;
        }
        BitString others(p.b_beep);
        for (std::size_t u : senders) {
          if (result.tags[u] != tag) others.or_with(beep_cw[u]);
        }
        if (codes::intersects(cw, others, cond_threshold)) condition = false;
      };
      if (ctx.policy == CandidatePolicy::kExhaustive && p.a_beep <= kExhaustiveSetCap) {
        for (std::uint64_t rv = 0; rv < (1ull << p.a_beep); ++rv) {
          BitString tag = BitString::from_u64(rv, p.a_beep);
          check_tag(tag, ctx.beep.codeword(tag));
        }
      } else {
        std::set<BitString> unique(tag_universe.begin(), tag_universe.end());
        for (const BitString& tag : unique) check_tag(tag, ctx.beep.codeword(tag));
      }
    }
  }
  if (ctx.check_condition) result.intersection_condition = condition;
  return result;
}

RoundResult simulate_broadcast_round(const net::Graph& g, const std::vector<BitString>& messages,
                                     const SimParams& params, const net::NoiseChannel& channel,
                                     const TrialSeeds& seeds, CandidatePolicy policy,
                                     bool check_condition) {
  if (messages.size() != g.n()) throw std::invalid_argument("one message per node required");
  codes::BeepCode beep(params.beep_params(), seeds.beep_code);
  codes::DistanceCode dist(params.dist_params(), seeds.dist_code);
  net::BeepRun run(g, channel);
  RoundContext ctx{params, beep, dist, policy, check_condition};
  std::vector<std::optional<BitString>> slots(messages.begin(), messages.end());
  return simulate_round(run, ctx, slots, seeds.tag_draw);
}

namespace {

struct StepOutcome {
  std::vector<std::optional<BitString>> outgoing;
  bool all_halted = true;
};

// Polls every running process for its next action.
StepOutcome step_processes(std::vector<std::unique_ptr<proto::NodeProcess>>& processes,
                           std::vector<bool>& halted,
                           const std::vector<std::vector<BitString>>& received,
                           std::size_t message_bits) {
  StepOutcome out;
  out.outgoing.resize(processes.size());
  for (std::size_t v = 0; v < processes.size(); ++v) {
    if (halted[v]) continue;
    proto::RoundAction action = processes[v]->on_round(received[v]);
    if (action.halt) {
      halted[v] = true;
      continue;
    }
    out.all_halted = false;
    if (action.message.has_value()) {
      if (action.message->length() != message_bits) {
        throw std::runtime_error("program emitted message of wrong width");
      }
      out.outgoing[v] = std::move(action.message);
    }
  }
  return out;
}

}  // namespace

ProgramRun run_broadcast_program(const net::Graph& g, const proto::NodeProgram& program,
                                 std::uint64_t program_seed,
                                 std::vector<std::unique_ptr<proto::NodeProcess>>& processes,
                                 std::size_t t_max, const SimParams& params,
                                 const net::NoiseChannel& channel, const TrialSeeds& seeds,
                                 CandidatePolicy policy) {
  if (program.message_bits != params.L) {
    throw std::invalid_argument("program message width " + std::to_string(program.message_bits) +
                                " != simulation L " + std::to_string(params.L));
  }
  std::size_t n = g.n();
  processes.clear();
  for (std::size_t v = 0; v < n; ++v) {
    processes.push_back(program.make(static_cast<int>(v), g.id(static_cast<int>(v)), program_seed));
  }
  codes::BeepCode beep(params.beep_params(), seeds.beep_code);
  codes::DistanceCode dist(params.dist_params(), seeds.dist_code);
  net::BeepRun run(g, channel);
  RoundContext ctx{params, beep, dist, policy, false};

  ProgramRun stats;
  std::vector<bool> halted(n, false);
  std::vector<std::vector<BitString>> received(n);
  for (std::size_t t = 0; t < t_max; ++t) {
    StepOutcome step = step_processes(processes, halted, received, params.L);
    if (step.all_halted) {
      stats.terminated = true;
      break;
    }
    std::vector<bool> decoding(n);
    for (std::size_t v = 0; v < n; ++v) decoding[v] = !halted[v];
    RoundResult round =
        simulate_round(run, ctx, step.outgoing, derive(seeds.tag_draw, stream_tag("round"), t),
                       &decoding);
    bool ok = round.set_decode_ok && round.msg_decode_ok;
    stats.round_ok.push_back(ok);
    stats.all_rounds_ok = stats.all_rounds_ok && ok;
    stats.tag_collision = stats.tag_collision || round.tag_collision;
    stats.ambiguity_count += round.ambiguity_count;
    ++stats.program_rounds;
    for (std::size_t v = 0; v < n; ++v) {
      received[v].clear();
      if (halted[v]) continue;
      for (const auto& d : round.nodes[v].decoded) received[v].push_back(d.message);
      std::sort(received[v].begin(), received[v].end());
    }
  }
  if (!stats.terminated) {
    // One final poll so programs that halt exactly at the cap are seen.
    StepOutcome step = step_processes(processes, halted, received, params.L);
    stats.terminated = step.all_halted;
  }
  stats.beep_rounds = run.rounds_used();
  return stats;
}

ProgramRun run_native_broadcast(const net::Graph& g, const proto::NodeProgram& program,
                                std::uint64_t program_seed,
                                std::vector<std::unique_ptr<proto::NodeProcess>>& processes,
                                std::size_t t_max) {
  std::size_t n = g.n();
  processes.clear();
  for (std::size_t v = 0; v < n; ++v) {
    processes.push_back(program.make(static_cast<int>(v), g.id(static_cast<int>(v)), program_seed));
  }
  ProgramRun stats;
  std::vector<bool> halted(n, false);
  std::vector<std::vector<BitString>> received(n);
  for (std::size_t t = 0; t < t_max; ++t) {
    StepOutcome step = step_processes(processes, halted, received, program.message_bits);
    if (step.all_halted) {
      stats.terminated = true;
      break;
    }
    stats.round_ok.push_back(true);
    ++stats.program_rounds;
    for (std::size_t v = 0; v < n; ++v) {
      received[v].clear();
      if (halted[v]) continue;
      if (step.outgoing[v].has_value()) received[v].push_back(*step.outgoing[v]);
      for (int u : g.neighbors(static_cast<int>(v))) {
        if (step.outgoing[u].has_value()) received[v].push_back(*step.outgoing[u]);
      }
      std::sort(received[v].begin(), received[v].end());
    }
  }
  if (!stats.terminated) {
    StepOutcome step = step_processes(processes, halted, received, program.message_bits);
    stats.terminated = step.all_halted;
  }
  return stats;
}

CongestWrapperProcess::CongestWrapperProcess(std::unique_ptr<proto::CongestNode> inner,
                                             std::uint64_t own_id, std::size_t delta_cap,
                                             std::size_t id_bits, std::size_t inner_bits,
                                             std::size_t total_rounds)
    : inner_(std::move(inner)),
      own_id_(own_id),
      delta_cap_(delta_cap),
      id_bits_(id_bits),
      inner_bits_(inner_bits),
      rounds_(total_rounds) {
  if (id_bits_ < 64 && (own_id_ >> id_bits_) != 0) {
    throw std::invalid_argument("node id does not fit in id field");
  }
}

proto::RoundAction CongestWrapperProcess::on_round(const std::vector<BitString>& received) {
    std::size_t width = 1 + id_bits_ + inner_bits_;
    if (step_ == 0) {
      ++step_;
      // ID round: a non-noop pair addressed to ourselves; receivers read the
      // dest field to learn our id.
      BitString msg(width);
      write_field(msg, 1, id_bits_, own_id_);
      return {msg, false};
    }
    std::size_t slot = step_ - 1;  // broadcast slots after the ID round
    std::size_t block = slot / delta_cap_;
    std::size_t j = slot % delta_cap_;
    ++step_;

    if (j == 0) {
      if (block == 0) {
        // `received` is the ID round: collect neighbor ids.
        std::vector<std::uint64_t> ids;
        bool self_seen = false;
        for (const auto& msg : received) {
          std::uint64_t id = read_field(msg, 1, id_bits_);
          if (id == own_id_ && !self_seen) {
            self_seen = true;
            continue;
          }
          ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        neighbors_ = std::move(ids);
        if (neighbors_.size() > delta_cap_) {
          throw std::runtime_error("node degree exceeds the wrapper's delta bound");
        }
      } else {
        absorb(received);
        inner_->receive(block - 1, std::move(buffer_));
        buffer_.clear();
        if (block == rounds_) return {std::nullopt, true};  // all T rounds done
      }
      pending_ = inner_->send(block);
      for (const auto& [dest, msg] : pending_) {
        if (msg.length() != inner_bits_) {
          throw std::runtime_error("inner program emitted message of wrong width");
        }
        if (!std::binary_search(neighbors_.begin(), neighbors_.end(), dest)) {
          throw std::runtime_error("inner program addressed a non-neighbor");
        }
      }
    } else {
      absorb(received);
    }

    BitString msg(width);
    if (j < neighbors_.size()) {
      std::uint64_t dest = neighbors_[j];
      auto it = pending_.find(dest);
      if (it != pending_.end()) {
        write_field(msg, 1, id_bits_, dest);
        for (std::size_t i = 0; i < inner_bits_; ++i) {
          if (it->second.bit(i)) msg.set_bit(1 + id_bits_ + i, true);
        }
        return {msg, false};
      }
    }
    msg.set_bit(0, true);  // no-op pad
    return {msg, false};
}

void CongestWrapperProcess::absorb(const std::vector<BitString>& received) {
  for (const auto& msg : received) {
    if (msg.bit(0)) continue;  // no-op
    if (read_field(msg, 1, id_bits_) != own_id_) continue;
    BitString inner_msg(inner_bits_);
    for (std::size_t i = 0; i < inner_bits_; ++i) {
      if (msg.bit(1 + id_bits_ + i)) inner_msg.set_bit(i, true);
    }
    buffer_.push_back(std::move(inner_msg));
  }
  std::sort(buffer_.begin(), buffer_.end());
}

std::size_t congest_wrapper_bits(std::size_t id_bits, std::size_t inner_bits) {
  return 1 + id_bits + inner_bits;
}

proto::NodeProgram congest_over_broadcast(const proto::CongestProgram& inner,
                                          std::size_t delta_cap, std::size_t id_bits) {
  if (delta_cap == 0) throw std::invalid_argument("wrapper requires delta bound >= 1");
  proto::NodeProgram program;
  program.message_bits = congest_wrapper_bits(id_bits, inner.message_bits);
  proto::CongestFactory make_inner = inner.make;
  std::size_t inner_bits = inner.message_bits;
  std::size_t rounds = inner.rounds;
  program.make = [make_inner, delta_cap, id_bits, inner_bits, rounds](
                     int node, std::uint64_t id, std::uint64_t seed) {
    return std::make_unique<CongestWrapperProcess>(make_inner(node, id, seed), id, delta_cap,
                                                   id_bits, inner_bits, rounds);
  };
  return program;
}

}  // namespace beepsim::sim
