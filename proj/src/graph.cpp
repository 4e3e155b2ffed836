#include "beepsim/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "beepsim/rng.hpp"

namespace beepsim::net {

Graph Graph::make(std::size_t n, std::vector<std::pair<int, int>> edges,
                  std::vector<std::uint64_t> ids) {
  Graph g;
  g.adj_.resize(n);
  if (ids.empty()) {
    g.ids_.resize(n);
    for (std::size_t v = 0; v < n; ++v) g.ids_[v] = v;
  } else {
    if (ids.size() != n) throw std::invalid_argument("id list must have n entries");
    std::set<std::uint64_t> distinct(ids.begin(), ids.end());
    if (distinct.size() != n) throw std::invalid_argument("node ids must be distinct");
    g.ids_ = std::move(ids);
  }
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(u) + "," +
                                  std::to_string(v) + ")");
    }
    if (u == v) throw std::invalid_argument("self loop at node " + std::to_string(u));
    auto e = std::minmax(u, v);
    if (!seen.insert({e.first, e.second}).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.first) + "," +
                                  std::to_string(e.second) + ")");
    }
  }
  g.edges_.assign(seen.begin(), seen.end());
  for (auto [u, v] : g.edges_) {
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& nbrs : g.adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    g.max_degree_ = std::max(g.max_degree_, nbrs.size());
  }
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto& nbrs = adj_.at(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

bool Graph::default_ids() const {
  for (std::size_t v = 0; v < ids_.size(); ++v) {
    if (ids_[v] != v) return false;
  }
  return true;
}

int Graph::index_of_id(std::uint64_t id) const {
  for (std::size_t v = 0; v < ids_.size(); ++v) {
    if (ids_[v] == id) return static_cast<int>(v);
  }
  return -1;
}

Graph Graph::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') return true;
    }
    return false;
  };
  auto fail = [&](const std::string& msg) -> std::runtime_error {
    return std::runtime_error("graph parse error at line " + std::to_string(lineno) + ": " + msg);
  };

  if (!next_line()) throw fail("missing header");
  std::istringstream header(line);
  long long n = -1, m = -1;
  std::string ids_flag;
  if (!(header >> n >> m) || n < 0 || m < 0) throw fail("header must be 'n m' or 'n m ids'");
  bool has_ids = static_cast<bool>(header >> ids_flag);
  if (has_ids && ids_flag != "ids") throw fail("unexpected header token '" + ids_flag + "'");

  std::vector<std::uint64_t> ids;
  if (has_ids) {
    if (!next_line()) throw fail("missing id line");
    std::istringstream idin(line);
    std::uint64_t id;
    while (idin >> id) ids.push_back(id);
    if (ids.size() != static_cast<std::size_t>(n)) throw fail("expected n ids");
  }

  std::vector<std::pair<int, int>> edges;
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) throw fail("expected " + std::to_string(m) + " edges, got " +
                                 std::to_string(i));
    std::istringstream ein(line);
    int u, v;
    if (!(ein >> u >> v)) throw fail("edge line must be 'u v'");
    edges.emplace_back(u, v);
  }
  try {
    return Graph::make(static_cast<std::size_t>(n), std::move(edges), std::move(ids));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("graph parse error: ") + e.what());
  }
}

std::string Graph::to_text() const {
  std::ostringstream out;
  out << n() << ' ' << m();
  if (!default_ids()) {
    out << " ids\n";
    for (std::size_t v = 0; v < n(); ++v) out << ids_[v] << (v + 1 == n() ? "" : " ");
  }
  out << '\n';
  for (auto [u, v] : edges_) out << u << ' ' << v << '\n';
  return out.str();
}

Graph gen_random_graph(std::size_t n, std::size_t delta_cap, double edge_prob,
                       std::uint64_t seed) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0,1]");
  }
  CounterRng rng(derive(seed, stream_tag("random-graph")));
  std::vector<std::pair<int, int>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.uniform01() < edge_prob) edges.emplace_back(u, v);
    }
  }
  // Enforce the degree cap deterministically: walk edges in descending
  // (u, v) order and drop any edge still incident to an over-cap node.
  std::vector<std::size_t> deg(n, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  std::sort(edges.begin(), edges.end());
  std::vector<std::pair<int, int>> kept;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    auto [u, v] = *it;
    if (deg[u] > delta_cap || deg[v] > delta_cap) {
      --deg[u];
      --deg[v];
    } else {
      kept.push_back(*it);
    }
  }
  return Graph::make(n, std::move(kept));
}

Graph gen_hard_instance(std::size_t delta, std::size_t n) {
  if (delta == 0) throw std::invalid_argument("hard instance requires delta >= 1");
  if (n < 2 * delta) throw std::invalid_argument("hard instance requires n >= 2*delta");
  std::vector<std::pair<int, int>> edges;
  for (std::size_t u = 0; u < delta; ++u) {
    for (std::size_t v = delta; v < 2 * delta; ++v) edges.emplace_back(u, v);
  }
  return Graph::make(n, std::move(edges));
}

Graph path_graph(std::size_t n) {
  std::vector<std::pair<int, int>> edges;
  for (std::size_t v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::make(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle requires n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (std::size_t v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  edges.emplace_back(0, n - 1);
  return Graph::make(n, std::move(edges));
}

Graph empty_graph(std::size_t n) { return Graph::make(n, {}); }

Graph assign_random_ids(const Graph& g, std::uint64_t id_bound, std::uint64_t seed) {
  if (id_bound < g.n()) throw std::invalid_argument("id bound smaller than node count");
  CounterRng rng(derive(seed, stream_tag("random-ids")));
  std::set<std::uint64_t> drawn;
  while (drawn.size() < g.n()) drawn.insert(rng.below(id_bound));
  // Assign the distinct draws in a deterministic but seed-dependent order.
  std::vector<std::uint64_t> pool(drawn.begin(), drawn.end());
  for (std::size_t i = pool.size(); i > 1; --i) {
    std::swap(pool[i - 1], pool[rng.below(i)]);
  }
  return Graph::make(g.n(), g.edges(), std::move(pool));
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Graph::parse(buf.str());
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out << g.to_text();
}

}  // namespace beepsim::net
