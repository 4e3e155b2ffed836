// Python bindings for the core simulation operations.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>
#include <vector>

#include "beepsim/codes.hpp"
#include "beepsim/engine.hpp"
#include "beepsim/graph.hpp"
#include "beepsim/local_broadcast.hpp"
#include "beepsim/matching.hpp"
#include "beepsim/rng.hpp"
#include "beepsim/simcast.hpp"

namespace py = pybind11;

using beepsim::codes::BitString;
namespace codes = beepsim::codes;
namespace net = beepsim::net;
namespace sim = beepsim::sim;
namespace proto = beepsim::proto;

namespace {

// Matching run plus the flags a caller needs to judge it.
struct MatchingRun {
  proto::MatchingOutput output;
  std::size_t program_rounds = 0;
  std::size_t beep_rounds = 0;
  bool all_rounds_ok = true;
};

MatchingRun run_matching_native(const net::Graph& g, std::uint64_t seed) {
  proto::NodeProgram prog = proto::maximal_matching_program(g);
  std::size_t cap = proto::matching_iteration_cap(g.n());
  std::vector<std::unique_ptr<proto::NodeProcess>> procs;
  sim::ProgramRun run = sim::run_native_broadcast(g, prog, seed, procs, 2 + 4 * (cap + 1));
  return {proto::extract_matching_output(procs), run.program_rounds, 0, true};
}

MatchingRun run_matching_over_beeps(const net::Graph& g, std::uint64_t seed, double eps,
                                    double c_eps, codes::Mode mode) {
  proto::NodeProgram prog = proto::maximal_matching_program(g);
  std::size_t cap = proto::matching_iteration_cap(g.n());
  sim::SimParams params = sim::SimParams::make_with_length(
      g.n(), g.max_degree(), prog.message_bits, eps, c_eps, mode);
  net::NoiseChannel channel(eps, beepsim::derive(seed, beepsim::stream_tag("noise")));
  sim::TrialSeeds seeds{beepsim::derive(seed, beepsim::stream_tag("beep")),
                        beepsim::derive(seed, beepsim::stream_tag("dist")),
                        beepsim::derive(seed, beepsim::stream_tag("tags"))};
  std::vector<std::unique_ptr<proto::NodeProcess>> procs;
  sim::ProgramRun run = sim::run_broadcast_program(
      g, prog, seed, procs, 2 + 4 * (cap + 1), params, channel, seeds,
      sim::CandidatePolicy::kRestricted);
  return {proto::extract_matching_output(procs), run.program_rounds, run.beep_rounds,
          run.all_rounds_ok};
}

// Local broadcast through the CONGEST wrapper; returns (verified, rounds).
std::pair<bool, std::size_t> run_local_broadcast_native(const net::Graph& g,
                                                        std::size_t payload_bits,
                                                        std::uint64_t seed) {
  std::size_t delta_cap = std::max<std::size_t>(1, g.max_degree());
  std::size_t id_bits = proto::id_field_bits(g);
  auto task = proto::LocalBroadcastTask::random(g, payload_bits, seed);
  proto::NodeProgram prog = proto::local_broadcast_program(g, task, delta_cap, id_bits);
  std::vector<std::unique_ptr<proto::NodeProcess>> procs;
  sim::ProgramRun run = sim::run_native_broadcast(g, prog, seed, procs, delta_cap + 3);
  std::vector<proto::Inbox> inboxes;
  for (const auto& p : procs) inboxes.push_back(proto::extract_inbox(*p));
  return {proto::verify_local_broadcast(g, task, inboxes), run.program_rounds};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Noisy-beep broadcast simulation core";

  // ----------------------------------------------------------- bit strings
  py::class_<BitString>(m, "BitString")
      .def(py::init<>())
      .def(py::init<std::size_t>(), py::arg("length"))
      .def_static("from_string", &BitString::from_string, py::arg("bits"))
      .def_static("from_u64", &BitString::from_u64, py::arg("value"), py::arg("length"))
      .def("__len__", &BitString::length)
      .def("bit", &BitString::bit, py::arg("pos"))
      .def("set_bit", &BitString::set_bit, py::arg("pos"), py::arg("value"))
      .def("weight", &BitString::weight)
      .def("to_string", &BitString::to_string)
      .def("to_u64", &BitString::to_u64)
      .def("__eq__", [](const BitString& a, const BitString& b) { return a == b; })
      .def("__lt__", [](const BitString& a, const BitString& b) { return a < b; })
      .def("__hash__",
           [](const BitString& s) { return py::hash(py::str(s.to_string())); })
      .def("__repr__",
           [](const BitString& s) { return "BitString('" + s.to_string() + "')"; });

  m.def("hamming_distance", &codes::hamming_distance);
  m.def("intersect_count", &codes::intersect_count);
  m.def(
      "superimpose",
      [](const std::vector<BitString>& set, std::size_t length) {
        return codes::superimpose(set, length);
      },
      py::arg("strings"), py::arg("length"));
  m.def("random_bits", &codes::random_bits, py::arg("length"), py::arg("key"));

  // ----------------------------------------------------------------- codes
  py::enum_<codes::Mode>(m, "Mode")
      .value("THEORY", codes::Mode::kTheory)
      .value("EMPIRICAL", codes::Mode::kEmpirical);

  py::class_<codes::DistanceCodeParams>(m, "DistanceCodeParams")
      .def_static("make", &codes::DistanceCodeParams::make, py::arg("a"), py::arg("delta"),
                  py::arg("c_delta"), py::arg("mode"))
      .def_readonly("a", &codes::DistanceCodeParams::a)
      .def_readonly("delta", &codes::DistanceCodeParams::delta)
      .def_readonly("c_delta", &codes::DistanceCodeParams::c_delta)
      .def_readonly("b", &codes::DistanceCodeParams::b);

  py::class_<codes::DistanceCode>(m, "DistanceCode")
      .def(py::init<codes::DistanceCodeParams, std::uint64_t>(), py::arg("params"),
           py::arg("seed"))
      .def("codeword",
           py::overload_cast<std::uint64_t>(&codes::DistanceCode::codeword, py::const_),
           py::arg("payload"))
      .def("codeword",
           py::overload_cast<const BitString&>(&codes::DistanceCode::codeword, py::const_),
           py::arg("payload"))
      .def("manifest", &codes::DistanceCode::manifest)
      .def_property_readonly("params", &codes::DistanceCode::params);

  py::class_<codes::BeepCodeParams>(m, "BeepCodeParams")
      .def_static("make", &codes::BeepCodeParams::make, py::arg("a"), py::arg("k"),
                  py::arg("c"), py::arg("mode"))
      .def("intersect_threshold", &codes::BeepCodeParams::intersect_threshold)
      .def_readonly("a", &codes::BeepCodeParams::a)
      .def_readonly("k", &codes::BeepCodeParams::k)
      .def_readonly("c", &codes::BeepCodeParams::c)
      .def_readonly("b", &codes::BeepCodeParams::b)
      .def_readonly("w", &codes::BeepCodeParams::w);

  py::class_<codes::BeepCode>(m, "BeepCode")
      .def(py::init<codes::BeepCodeParams, std::uint64_t>(), py::arg("params"),
           py::arg("seed"))
      .def("codeword", py::overload_cast<std::uint64_t>(&codes::BeepCode::codeword, py::const_),
           py::arg("payload"))
      .def("codeword",
           py::overload_cast<const BitString&>(&codes::BeepCode::codeword, py::const_),
           py::arg("payload"))
      .def("manifest", &codes::BeepCode::manifest)
      .def_property_readonly("params", &codes::BeepCode::params);

  py::class_<codes::DistanceVerifyResult>(m, "DistanceVerifyResult")
      .def_readonly("min_distance", &codes::DistanceVerifyResult::min_distance)
      .def_readonly("pairs_checked", &codes::DistanceVerifyResult::pairs_checked)
      .def_readonly("passed", &codes::DistanceVerifyResult::pass);

  m.def("verify_distance_code", &codes::verify_distance_code, py::arg("code"),
        py::arg("a_max") = 14);
  m.def("sample_min_distance", &codes::sample_min_distance, py::arg("code"), py::arg("trials"),
        py::arg("seed"));
  m.def("estimate_beep_violation_rate", &codes::estimate_beep_violation_rate, py::arg("code"),
        py::arg("trials"), py::arg("seed"));
  m.def("combine_codewords", &codes::combine_codewords);
  m.def("combined_encode", &codes::combined_encode);
  m.def("extract_subsequence", &codes::extract_subsequence);

  // ---------------------------------------------------------------- graphs
  py::class_<net::Graph>(m, "Graph")
      .def_static("make", &net::Graph::make, py::arg("n"), py::arg("edges"),
                  py::arg("ids") = std::vector<std::uint64_t>{})
      .def_static("parse", &net::Graph::parse, py::arg("text"))
      .def("to_text", &net::Graph::to_text)
      .def_property_readonly("n", &net::Graph::n)
      .def_property_readonly("m", &net::Graph::m)
      .def("neighbors", &net::Graph::neighbors, py::arg("v"))
      .def("degree", &net::Graph::degree, py::arg("v"))
      .def("max_degree", &net::Graph::max_degree)
      .def("edges", &net::Graph::edges)
      .def("has_edge", &net::Graph::has_edge, py::arg("u"), py::arg("v"))
      .def("ids", &net::Graph::ids);

  m.def("gen_random_graph", &net::gen_random_graph, py::arg("n"), py::arg("delta_cap"),
        py::arg("edge_prob"), py::arg("seed"));
  m.def("gen_hard_instance", &net::gen_hard_instance, py::arg("delta"), py::arg("n"));
  m.def("path_graph", &net::path_graph);
  m.def("cycle_graph", &net::cycle_graph);
  m.def("empty_graph", &net::empty_graph);

  // ---------------------------------------------------------------- engine
  py::class_<net::NoiseChannel>(m, "NoiseChannel")
      .def(py::init<double, std::uint64_t, bool>(), py::arg("eps"), py::arg("seed"),
           py::arg("self_knowledge") = false)
      .def_property_readonly("epsilon", &net::NoiseChannel::epsilon);

  m.def("run_beep_round", &net::run_beep_round, py::arg("graph"), py::arg("actions"),
        py::arg("channel"), py::arg("round_index"));

  // --------------------------------------------------------- round protocol
  m.def("min_c_epsilon", &sim::min_c_epsilon, py::arg("epsilon"));

  py::enum_<sim::CandidatePolicy>(m, "CandidatePolicy")
      .value("EXHAUSTIVE", sim::CandidatePolicy::kExhaustive)
      .value("RESTRICTED", sim::CandidatePolicy::kRestricted);

  py::class_<sim::SimParams>(m, "SimParams")
      .def_static("make", &sim::SimParams::make, py::arg("n"), py::arg("delta"),
                  py::arg("gamma"), py::arg("epsilon"), py::arg("c_eps"), py::arg("mode"))
      .def_static("make_with_length", &sim::SimParams::make_with_length, py::arg("n"),
                  py::arg("delta"), py::arg("L"), py::arg("epsilon"), py::arg("c_eps"),
                  py::arg("mode"))
      .def("rounds_per_simulated_round", &sim::SimParams::rounds_per_simulated_round)
      .def_readonly("n", &sim::SimParams::n)
      .def_readonly("delta", &sim::SimParams::delta)
      .def_readonly("gamma", &sim::SimParams::gamma)
      .def_readonly("epsilon", &sim::SimParams::epsilon)
      .def_readonly("c_eps", &sim::SimParams::c_eps)
      .def_readonly("L", &sim::SimParams::L)
      .def_readonly("a_beep", &sim::SimParams::a_beep)
      .def_readonly("b_dist", &sim::SimParams::b_dist)
      .def_readonly("b_beep", &sim::SimParams::b_beep)
      .def_readonly("tau_set", &sim::SimParams::tau_set);

  py::class_<sim::TrialSeeds>(m, "TrialSeeds")
      .def(py::init([](std::uint64_t beep, std::uint64_t dist, std::uint64_t tags) {
             return sim::TrialSeeds{beep, dist, tags};
           }),
           py::arg("beep_code"), py::arg("dist_code"), py::arg("tag_draw"));

  py::class_<sim::DecodedSender>(m, "DecodedSender")
      .def_readonly("tag", &sim::DecodedSender::tag)
      .def_readonly("message", &sim::DecodedSender::message)
      .def_readonly("ambiguous", &sim::DecodedSender::ambiguous);

  py::class_<sim::NodeRoundOutcome>(m, "NodeRoundOutcome")
      .def_readonly("decoded_set", &sim::NodeRoundOutcome::decoded_set)
      .def_readonly("decoded", &sim::NodeRoundOutcome::decoded)
      .def_readonly("set_ok", &sim::NodeRoundOutcome::set_ok)
      .def_readonly("messages_ok", &sim::NodeRoundOutcome::messages_ok);

  py::class_<sim::RoundResult>(m, "RoundResult")
      .def_readonly("nodes", &sim::RoundResult::nodes)
      .def_readonly("tags", &sim::RoundResult::tags)
      .def_readonly("beep_rounds_used", &sim::RoundResult::beep_rounds_used)
      .def_readonly("set_decode_ok", &sim::RoundResult::set_decode_ok)
      .def_readonly("msg_decode_ok", &sim::RoundResult::msg_decode_ok)
      .def_readonly("tag_collision", &sim::RoundResult::tag_collision)
      .def_readonly("ambiguity_count", &sim::RoundResult::ambiguity_count)
      .def_readonly("intersection_condition", &sim::RoundResult::intersection_condition);

  m.def("simulate_broadcast_round", &sim::simulate_broadcast_round, py::arg("graph"),
        py::arg("messages"), py::arg("params"), py::arg("channel"), py::arg("seeds"),
        py::arg("policy") = sim::CandidatePolicy::kRestricted,
        py::arg("check_condition") = false);

  m.def("congest_wrapper_bits", &sim::congest_wrapper_bits, py::arg("id_bits"),
        py::arg("inner_bits"));

  // -------------------------------------------------------------- protocols
  py::class_<proto::MatchingOutput>(m, "MatchingOutput")
      .def_readonly("partner", &proto::MatchingOutput::partner)
      .def_readonly("matched_iteration", &proto::MatchingOutput::matched_iteration)
      .def_readonly("x_collision", &proto::MatchingOutput::x_collision)
      .def_readonly("capped", &proto::MatchingOutput::capped);

  py::class_<proto::MatchVerify>(m, "MatchVerify")
      .def_readonly("symmetry", &proto::MatchVerify::symmetry)
      .def_readonly("edges_exist", &proto::MatchVerify::edges_exist)
      .def_readonly("maximality", &proto::MatchVerify::maximality)
      .def_readonly("passed", &proto::MatchVerify::pass);

  py::class_<MatchingRun>(m, "MatchingRun")
      .def_readonly("output", &MatchingRun::output)
      .def_readonly("program_rounds", &MatchingRun::program_rounds)
      .def_readonly("beep_rounds", &MatchingRun::beep_rounds)
      .def_readonly("all_rounds_ok", &MatchingRun::all_rounds_ok);

  m.def("run_matching_native", &run_matching_native, py::arg("graph"), py::arg("seed"));
  m.def("run_matching_over_beeps", &run_matching_over_beeps, py::arg("graph"), py::arg("seed"),
        py::arg("eps"), py::arg("c_eps"), py::arg("mode") = codes::Mode::kEmpirical);
  m.def("verify_matching", &proto::verify_matching, py::arg("graph"), py::arg("output"));
  m.def("matching_edges", &proto::matching_edges, py::arg("graph"), py::arg("output"));
  m.def("brute_force_maximal_check", &proto::brute_force_maximal_check, py::arg("graph"),
        py::arg("edge_set"));

  py::class_<proto::LubyResult>(m, "LubyResult")
      .def_readonly("matching", &proto::LubyResult::matching)
      .def_readonly("removed_per_iteration", &proto::LubyResult::removed_per_iteration)
      .def_readonly("live_before_iteration", &proto::LubyResult::live_before_iteration)
      .def_readonly("iterations", &proto::LubyResult::iterations);

  m.def("luby_matching_oracle", &proto::luby_matching_oracle, py::arg("graph"),
        py::arg("seed"));

  m.def("run_local_broadcast_native", &run_local_broadcast_native, py::arg("graph"),
        py::arg("payload_bits"), py::arg("seed"));
}
