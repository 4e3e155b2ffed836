#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "beepsim/bitstring.hpp"

// Node-program abstraction for broadcast protocols.
//
// A program is instantiated once per node.  The driver calls on_round with
// the message multiset heard in the previous round (empty on the first
// call); the process returns the payload to broadcast this round, or halts.
// Delivery is anonymous: received multisets carry no sender identity, and
// they are sorted so simulated and native executions see identical input.
// Programs that need sender identity must embed IDs in their payloads.

namespace beepsim::proto {

struct RoundAction {
  // Payload to broadcast this round; nullopt = stay silent but keep running.
  std::optional<BitString> message;
  // True ends the node's participation (nothing is broadcast this round).
  bool halt = false;
};

class NodeProcess {
 public:
  virtual ~NodeProcess() = default;
  virtual RoundAction on_round(const std::vector<BitString>& received) = 0;
};

// Factory signature: (node index, node id, program seed) -> process.
using ProcessFactory =
    std::function<std::unique_ptr<NodeProcess>(int node, std::uint64_t id, std::uint64_t seed)>;

struct NodeProgram {
  ProcessFactory make;
  std::size_t message_bits = 0;  // exact payload width every message must have
};

// Synchronous CONGEST-style node: sends (dest id -> message) maps, receives
// the multiset of messages addressed to it.  Used by the broadcast wrapper.
class CongestNode {
 public:
  virtual ~CongestNode() = default;
  // Messages to send in CONGEST round `t` (at most one per neighbor).
  virtual std::map<std::uint64_t, BitString> send(std::size_t t) = 0;
  // Messages addressed to this node in round `t`, sorted.
  virtual void receive(std::size_t t, const std::vector<BitString>& messages) = 0;
  virtual bool done() const = 0;
};

using CongestFactory =
    std::function<std::unique_ptr<CongestNode>(int node, std::uint64_t id, std::uint64_t seed)>;

struct CongestProgram {
  CongestFactory make;
  std::size_t message_bits = 0;  // inner CONGEST message width
  std::size_t rounds = 0;        // fixed CONGEST round budget T
};

}  // namespace beepsim::proto
