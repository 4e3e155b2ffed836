#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "beepsim/graph.hpp"
#include "beepsim/program.hpp"
#include "beepsim/simcast.hpp"

// Local broadcast: every node holds one fixed payload per neighbor and must
// deliver each payload to its addressee in a single message exchange.  The
// task runs as a one-round CONGEST program; composing it with the broadcast
// wrapper exercises the full CONGEST-over-beeps stack.  Messages carry the
// sender id alongside the payload because delivery is anonymous.

namespace beepsim::proto {

struct LocalBroadcastTask {
  std::size_t payload_bits = 0;
  // payloads[v] maps a neighbor's id to the payload node v owes that neighbor.
  std::vector<std::map<std::uint64_t, BitString>> payloads;

  // Independent uniform payloads for every directed edge.
  static LocalBroadcastTask random(const net::Graph& g, std::size_t payload_bits,
                                   std::uint64_t seed);
};

// What each node should end up holding: sender id -> payload addressed to it.
using Inbox = std::map<std::uint64_t, BitString>;

// Ground truth per node, straight from the task table.
std::vector<Inbox> expected_inboxes(const net::Graph& g, const LocalBroadcastTask& task);

// One-round CONGEST node: sends <sender id, payload> to each neighbor, then
// records everything addressed to it.
class LocalBroadcastNode : public CongestNode {
 public:
  LocalBroadcastNode(std::uint64_t own_id, std::size_t id_bits, std::size_t payload_bits,
                     std::map<std::uint64_t, BitString> outgoing);

  std::map<std::uint64_t, BitString> send(std::size_t t) override;
  void receive(std::size_t t, const std::vector<BitString>& messages) override;
  bool done() const override { return done_; }

  const Inbox& inbox() const { return inbox_; }

 private:
  std::uint64_t own_id_;
  std::size_t id_bits_, payload_bits_;
  std::map<std::uint64_t, BitString> outgoing_;
  Inbox inbox_;
  bool done_ = false;
};

// Field width that covers every id in the graph (>= 1).
std::size_t id_field_bits(const net::Graph& g);

// CONGEST form: T = 1, message width id_bits + payload_bits.
CongestProgram local_broadcast_congest(const net::Graph& g, const LocalBroadcastTask& task,
                                       std::size_t id_bits);

// Same task lowered onto the broadcast layer via the CONGEST wrapper.
NodeProgram local_broadcast_program(const net::Graph& g, const LocalBroadcastTask& task,
                                    std::size_t delta_cap, std::size_t id_bits);

// Pulls the inbox back out of a finished process tree (wrapper or bare node).
const Inbox& extract_inbox(const NodeProcess& process);
const Inbox& extract_inbox(const CongestNode& node);

// True iff every node's inbox matches the ground truth exactly.
bool verify_local_broadcast(const net::Graph& g, const LocalBroadcastTask& task,
                            const std::vector<Inbox>& inboxes);

}  // namespace beepsim::proto
