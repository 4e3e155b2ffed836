#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

// Undirected simple graphs with stable node indices 0..n-1 and (optionally
// overridden) node IDs.  Adjacency lists are kept sorted so iteration order,
// and therefore every downstream simulation, is deterministic.

namespace beepsim::net {

class Graph {
 public:
  // Edges as (u, v) index pairs; rejects self loops, duplicates, range errors.
  static Graph make(std::size_t n, std::vector<std::pair<int, int>> edges,
                    std::vector<std::uint64_t> ids = {});

  std::size_t n() const { return adj_.size(); }
  std::size_t m() const { return edges_.size(); }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  std::size_t degree(int v) const { return adj_.at(v).size(); }
  std::size_t max_degree() const { return max_degree_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }  // u < v, sorted
  bool has_edge(int u, int v) const;

  std::uint64_t id(int v) const { return ids_.at(v); }
  const std::vector<std::uint64_t>& ids() const { return ids_; }
  bool default_ids() const;      // ids are exactly 0..n-1
  int index_of_id(std::uint64_t id) const;  // -1 when absent

  // Text form: "n m" (or "n m ids") header, optional ID line, then one
  // "u v" line per edge.  parse() reports the offending line on error.
  static Graph parse(const std::string& text);
  std::string to_text() const;

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::uint64_t> ids_;
  std::size_t max_degree_ = 0;
};

// Erdos-Renyi style instance: each pair independently with probability
// edge_prob, then edges dropped deterministically (descending (u,v) order)
// at nodes whose degree exceeds delta_cap.
Graph gen_random_graph(std::size_t n, std::size_t delta_cap, double edge_prob,
                       std::uint64_t seed);

// Complete bipartite K_{delta,delta} on nodes 0..2*delta-1 plus n-2*delta
// isolated nodes.
Graph gen_hard_instance(std::size_t delta, std::size_t n);

Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph empty_graph(std::size_t n);

// Replaces IDs with distinct uniform draws from [0, id_bound).
Graph assign_random_ids(const Graph& g, std::uint64_t id_bound, std::uint64_t seed);

Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

}  // namespace beepsim::net
