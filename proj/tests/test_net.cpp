#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <vector>

#include "beepsim/engine.hpp"
#include "beepsim/graph.hpp"
#include "beepsim/rng.hpp"

using beepsim::codes::BitString;
namespace net = beepsim::net;
namespace codes = beepsim::codes;

TEST_CASE("graph construction validates edges and ids") {
  CHECK_THROWS_AS(net::Graph::make(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(net::Graph::make(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(net::Graph::make(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(net::Graph::make(2, {}, {7}), std::invalid_argument);
  CHECK_THROWS_AS(net::Graph::make(2, {}, {7, 7}), std::invalid_argument);

  net::Graph g = net::Graph::make(4, {{2, 1}, {0, 1}});
  CHECK(g.n() == 4);
  CHECK(g.m() == 2);
  CHECK(g.neighbors(1) == std::vector<int>{0, 2});
  CHECK(g.edges() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(g.max_degree() == 2);
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.default_ids());
  CHECK(g.index_of_id(3) == 3);
  CHECK(g.index_of_id(9) == -1);
}

TEST_CASE("graph text form round trips") {
  net::Graph g = net::Graph::make(3, {{0, 1}, {1, 2}}, {10, 20, 30});
  net::Graph back = net::Graph::parse(g.to_text());
  CHECK(back.n() == 3);
  CHECK(back.edges() == g.edges());
  CHECK(back.ids() == g.ids());

  net::Graph plain = net::Graph::parse("3 1\n0 2\n");
  CHECK(plain.m() == 1);
  CHECK(plain.default_ids());

  CHECK_THROWS_WITH_AS(net::Graph::parse("2 1\n0 5\n"),
                       doctest::Contains("out of range"), std::runtime_error);
  CHECK_THROWS_WITH_AS(net::Graph::parse("2 2\n0 1\n"),
                       doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("fixed generators have the promised shapes") {
  net::Graph p = net::path_graph(4);
  CHECK(p.m() == 3);
  CHECK(p.max_degree() == 2);
  net::Graph c = net::cycle_graph(5);
  CHECK(c.m() == 5);
  for (int v = 0; v < 5; ++v) CHECK(c.degree(v) == 2);
  CHECK(net::empty_graph(6).m() == 0);

  net::Graph hard = net::gen_hard_instance(3, 8);
  CHECK(hard.n() == 8);
  CHECK(hard.m() == 9);  // K_{3,3}
  for (int v = 0; v < 6; ++v) CHECK(hard.degree(v) == 3);
  for (int v = 6; v < 8; ++v) CHECK(hard.degree(v) == 0);
  CHECK(hard.has_edge(0, 3));
  CHECK_FALSE(hard.has_edge(0, 1));  // no edges within a side
  CHECK_FALSE(hard.has_edge(3, 4));
  CHECK_THROWS_AS(net::gen_hard_instance(3, 5), std::invalid_argument);
}

TEST_CASE("random graphs respect the degree cap and the seed") {
  net::Graph a = net::gen_random_graph(24, 5, 0.4, 1);
  net::Graph b = net::gen_random_graph(24, 5, 0.4, 1);
  net::Graph c = net::gen_random_graph(24, 5, 0.4, 2);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
  CHECK(a.max_degree() <= 5);
  CHECK(net::gen_random_graph(16, 15, 0.0, 3).m() == 0);
  CHECK(net::gen_random_graph(8, 7, 1.0, 3).m() == 28);  // complete under a loose cap
}

TEST_CASE("random ids are distinct, bounded, deterministic") {
  net::Graph g = net::path_graph(6);
  net::Graph withIds = net::assign_random_ids(g, 1000, 4);
  CHECK(withIds.ids() == net::assign_random_ids(g, 1000, 4).ids());
  std::set<std::uint64_t> distinct(withIds.ids().begin(), withIds.ids().end());
  CHECK(distinct.size() == 6);
  for (std::uint64_t id : withIds.ids()) CHECK(id < 1000);
  CHECK_FALSE(withIds.default_ids());
}

TEST_CASE("graph files round trip") {
  auto path = std::filesystem::temp_directory_path() / "beepsim_graph_test.txt";
  net::Graph g = net::gen_random_graph(10, 4, 0.5, 9);
  net::save_graph(g, path.string());
  net::Graph back = net::load_graph(path.string());
  CHECK(back.edges() == g.edges());
  CHECK(back.ids() == g.ids());
  std::filesystem::remove(path);
  CHECK_THROWS(net::load_graph(path.string()));
}

TEST_CASE("noiseless channel never flips and ignores its seed") {
  net::NoiseChannel zero(0.0, 123);
  for (int v = 0; v < 4; ++v) {
    for (std::size_t t = 0; t < 50; ++t) CHECK_FALSE(zero.flip(v, t));
  }
}

TEST_CASE("noise flips are per-slot deterministic with the right rate") {
  net::NoiseChannel ch(0.2, 7);
  net::NoiseChannel same(0.2, 7);
  std::size_t flips = 0;
  std::size_t slots = 20000;
  for (std::size_t t = 0; t < slots; ++t) {
    CHECK(ch.flip(3, t) == same.flip(3, t));
    flips += ch.flip(3, t) ? 1 : 0;
  }
  double rate = static_cast<double>(flips) / static_cast<double>(slots);
  CHECK(rate > 0.18);  // ~7 sigma slack around 0.2
  CHECK(rate < 0.22);
  CHECK(ch.epsilon() == 0.2);
  CHECK_FALSE(ch.self_knowledge());
}

TEST_CASE("a beep round ORs the closed neighborhood then applies noise") {
  net::Graph g = net::gen_random_graph(20, 19, 0.2, 5);
  net::NoiseChannel ch(0.3, 11);
  for (std::size_t round = 0; round < 10; ++round) {
    BitString actions = codes::random_bits(20, beepsim::derive(99, round));
    BitString heard = net::run_beep_round(g, actions, ch, round);
    for (int v = 0; v < 20; ++v) {
      bool truth = actions.bit(v);
      for (int u : g.neighbors(v)) truth = truth || actions.bit(u);
      bool expected = truth != ch.flip(v, round);
      CHECK(heard.bit(v) == expected);
    }
  }
}

TEST_CASE("self knowledge keeps a beeper's own slot clean") {
  net::Graph g = net::empty_graph(3);
  net::NoiseChannel noisy(0.49, 3, true);
  BitString actions = BitString::from_string("101");
  bool flipped_listener = false;
  for (std::size_t round = 0; round < 200; ++round) {
    BitString heard = net::run_beep_round(g, actions, noisy, round);
    CHECK(heard.bit(0));  // beeper hears itself noiselessly
    CHECK(heard.bit(2));
    flipped_listener = flipped_listener || heard.bit(1);
  }
  CHECK(flipped_listener);  // the silent node still sees noise
}

TEST_CASE("noiseless runs are seed independent") {
  net::Graph g = net::cycle_graph(8);
  std::vector<BitString> schedules;
  for (int v = 0; v < 8; ++v) schedules.push_back(codes::random_bits(16, 40 + v));
  auto heard1 = net::run_schedule(g, schedules, net::NoiseChannel(0.0, 1), 0);
  auto heard2 = net::run_schedule(g, schedules, net::NoiseChannel(0.0, 999), 0);
  CHECK(heard1 == heard2);
}

TEST_CASE("schedules equal a sequence of single rounds") {
  net::Graph g = net::gen_random_graph(12, 11, 0.3, 8);
  net::NoiseChannel ch(0.25, 21);
  std::vector<BitString> schedules;
  for (int v = 0; v < 12; ++v) schedules.push_back(codes::random_bits(9, 70 + v));

  net::BeepRun run(g, ch);
  auto heard = run.run_schedule(schedules);
  CHECK(run.rounds_used() == 9);

  for (std::size_t t = 0; t < 9; ++t) {
    BitString actions(12);
    for (int v = 0; v < 12; ++v) actions.set_bit(v, schedules[v].bit(t));
    BitString expected = net::run_beep_round(g, actions, ch, t);
    for (int v = 0; v < 12; ++v) CHECK(heard[v].bit(t) == expected.bit(v));
  }
}

TEST_CASE("beep runs advance a shared round counter and can record") {
  net::Graph g = net::path_graph(3);
  net::NoiseChannel ch(0.1, 2);
  net::BeepRun run(g, ch, true);
  run.run_round(BitString::from_string("100"));
  run.run_round(BitString::from_string("001"));
  CHECK(run.rounds_used() == 2);
  CHECK(run.transcript().length() == 2);
  CHECK(run.transcript().rounds[0].actions == BitString::from_string("100"));

  // A run started later must replay the same noise slots as a longer run.
  net::BeepRun shifted(g, ch, false, 1);
  BitString again = shifted.run_round(BitString::from_string("001"));
  CHECK(again == run.transcript().rounds[1].received);

  std::ostringstream dump;
  run.transcript().dump(dump);
  CHECK(dump.str().find("0 | ") != std::string::npos);
}
