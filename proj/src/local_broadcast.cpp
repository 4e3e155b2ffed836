#include "beepsim/local_broadcast.hpp"

#include <bit>
#include <stdexcept>

#include "beepsim/rng.hpp"

namespace beepsim::proto {

LocalBroadcastTask LocalBroadcastTask::random(const net::Graph& g, std::size_t payload_bits,
                                              std::uint64_t seed) {
  if (payload_bits == 0) throw std::invalid_argument("payload width must be positive");
  LocalBroadcastTask task;
  task.payload_bits = payload_bits;
  task.payloads.resize(g.n());
  for (int v = 0; v < g.n(); ++v) {
    for (int u : g.neighbors(v)) {
      std::uint64_t key =
          derive(seed, stream_tag("localbcast"), g.ids()[v], g.ids()[u]);
      task.payloads[v][g.ids()[u]] = codes::random_bits(payload_bits, key);
    }
  }
  return task;
}

std::vector<Inbox> expected_inboxes(const net::Graph& g, const LocalBroadcastTask& task) {
  std::vector<Inbox> inboxes(g.n());
  for (int v = 0; v < g.n(); ++v) {
    for (int u : g.neighbors(v)) {
      inboxes[u][g.ids()[v]] = task.payloads[v].at(g.ids()[u]);
    }
  }
  return inboxes;
}

LocalBroadcastNode::LocalBroadcastNode(std::uint64_t own_id, std::size_t id_bits,
                                       std::size_t payload_bits,
                                       std::map<std::uint64_t, BitString> outgoing)
    : own_id_(own_id),
      id_bits_(id_bits),
      payload_bits_(payload_bits),
      outgoing_(std::move(outgoing)) {
  if (id_bits_ == 0 || id_bits_ > 64) throw std::invalid_argument("bad id field width");
  if (std::bit_width(own_id_) > static_cast<int>(id_bits_)) {
    throw std::invalid_argument("own id does not fit the id field");
  }
}

std::map<std::uint64_t, BitString> LocalBroadcastNode::send(std::size_t t) {
  std::map<std::uint64_t, BitString> out;
  if (t != 0) return out;
  for (const auto& [dest, payload] : outgoing_) {
    BitString msg(id_bits_ + payload_bits_);
    write_field(msg, 0, id_bits_, own_id_);
    for (std::size_t i = 0; i < payload_bits_; ++i) {
      if (payload.bit(i)) msg.set_bit(id_bits_ + i, true);
    }
    out.emplace(dest, std::move(msg));
  }
  return out;
}

void LocalBroadcastNode::receive(std::size_t t, const std::vector<BitString>& messages) {
  if (t != 0) return;
  for (const auto& msg : messages) {
    if (msg.length() != id_bits_ + payload_bits_) {
      throw std::invalid_argument("local broadcast message has the wrong width");
    }
    std::uint64_t sender = read_field(msg, 0, id_bits_);
    BitString payload(payload_bits_);
    for (std::size_t i = 0; i < payload_bits_; ++i) {
      if (msg.bit(id_bits_ + i)) payload.set_bit(i, true);
    }
    inbox_[sender] = std::move(payload);
  }
  done_ = true;
}

std::size_t id_field_bits(const net::Graph& g) {
  std::uint64_t max_id = 1;
  for (std::uint64_t id : g.ids()) max_id |= id;
  return static_cast<std::size_t>(std::bit_width(max_id));
}

CongestProgram local_broadcast_congest(const net::Graph& g, const LocalBroadcastTask& task,
                                       std::size_t id_bits) {
  if (static_cast<int>(task.payloads.size()) != g.n()) {
    throw std::invalid_argument("task does not match the graph");
  }
  if (id_bits < id_field_bits(g)) {
    throw std::invalid_argument("id field too narrow for this graph");
  }
  CongestProgram program;
  program.message_bits = id_bits + task.payload_bits;
  program.rounds = 1;
  std::size_t payload_bits = task.payload_bits;
  auto table = task.payloads;
  program.make = [table, id_bits, payload_bits](int node, std::uint64_t id, std::uint64_t)
      -> std::unique_ptr<CongestNode> {
    return std::make_unique<LocalBroadcastNode>(id, id_bits, payload_bits,
                                                table[static_cast<std::size_t>(node)]);
  };
  return program;
}

NodeProgram local_broadcast_program(const net::Graph& g, const LocalBroadcastTask& task,
                                    std::size_t delta_cap, std::size_t id_bits) {
  return sim::congest_over_broadcast(local_broadcast_congest(g, task, id_bits), delta_cap,
                                     id_bits);
}

const Inbox& extract_inbox(const CongestNode& node) {
  const auto* bcast = dynamic_cast<const LocalBroadcastNode*>(&node);
  if (bcast == nullptr) throw std::invalid_argument("node is not a local broadcast node");
  return bcast->inbox();
}

const Inbox& extract_inbox(const NodeProcess& process) {
  const auto* wrapper = dynamic_cast<const sim::CongestWrapperProcess*>(&process);
  if (wrapper == nullptr) throw std::invalid_argument("process is not a congest wrapper");
  return extract_inbox(wrapper->inner());
}

bool verify_local_broadcast(const net::Graph& g, const LocalBroadcastTask& task,
                            const std::vector<Inbox>& inboxes) {
  if (inboxes.size() != static_cast<std::size_t>(g.n())) return false;
  auto expected = expected_inboxes(g, task);
  for (int v = 0; v < g.n(); ++v) {
    if (inboxes[static_cast<std::size_t>(v)] != expected[static_cast<std::size_t>(v)]) {
      return false;
    }
  }
  return true;
}

}  // namespace beepsim::proto
