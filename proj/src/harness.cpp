#include "beepsim/harness.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "beepsim/rng.hpp"

namespace beepsim::harness {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form (what the JSON serializer emits), so CSV
// and JSON agree and equal configs yield byte-identical bodies.
std::string num(double x) { return json(x).dump(); }

std::string cell(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string cell(const std::optional<bool>& v) {
  return v ? std::string(*v ? "1" : "0") : std::string();
}

json to_json(const TrialRecord& r) {
  json j;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["eps"] = r.eps;
  j["gamma"] = r.gamma;
  j["c_eps"] = r.c_eps;
  j["mode"] = r.mode;
  j["candidate_policy"] = r.candidate_policy;
  auto opt = [&j](const char* key, const auto& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  opt("rounds_used", r.rounds_used);
  opt("set_decode_ok", r.set_decode_ok);
  opt("msg_decode_ok", r.msg_decode_ok);
  opt("collision_flag", r.collision_flag);
  opt("ambiguity_count", r.ambiguity_count);
  opt("verified", r.verified);
  opt("iterations", r.iterations);
  j["wall_ms"] = r.wall_ms;
  return j;
}

}  // namespace

std::string format_name(Format format) {
  return format == Format::kCsv ? "csv" : "json";
}

Format format_from_name(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw std::invalid_argument("unknown output format: " + name);
}

std::string policy_name(sim::CandidatePolicy policy) {
  return policy == sim::CandidatePolicy::kRestricted ? "restricted" : "exhaustive";
}

sim::CandidatePolicy policy_from_name(const std::string& name) {
  if (name == "restricted") return sim::CandidatePolicy::kRestricted;
  if (name == "exhaustive") return sim::CandidatePolicy::kExhaustive;
  throw std::invalid_argument("unknown candidate policy: " + name);
}

const std::string& record_header() {
  static const std::string header =
      "trial,seed,n,delta,eps,gamma,c_eps,mode,candidate_policy,rounds_used,"
      "set_decode_ok,msg_decode_ok,collision_flag,ambiguity_count,verified,"
      "iterations,wall_ms";
  return header;
}

std::string to_csv_row(const TrialRecord& r) {
  std::ostringstream row;
  row << r.trial << ',' << r.seed << ',' << r.n << ',' << r.delta << ',' << num(r.eps) << ','
      << num(r.gamma) << ',' << num(r.c_eps) << ',' << r.mode << ',' << r.candidate_policy
      << ',' << cell(r.rounds_used) << ',' << cell(r.set_decode_ok) << ','
      << cell(r.msg_decode_ok) << ',' << cell(r.collision_flag) << ','
      << cell(r.ambiguity_count) << ',' << cell(r.verified) << ',' << cell(r.iterations) << ','
      << num(r.wall_ms);
  return row.str();
}

std::string to_json_line(const TrialRecord& r) { return to_json(r).dump(); }

RecordWriter::RecordWriter(std::ostream& out, Format format,
                           const std::vector<std::pair<std::string, std::string>>& config)
    : out_(out), format_(format) {
  if (format_ == Format::kCsv) {
    out_ << "# schema=1\n";
    for (const auto& [key, value] : config) out_ << "# " << key << '=' << value << '\n';
    out_ << record_header() << '\n';
  } else {
    json header;
    header["schema"] = 1;
    json cfg = json::object();
    for (const auto& [key, value] : config) cfg[key] = value;
    header["config"] = cfg;
    out_ << header.dump() << '\n';
  }
}

void RecordWriter::write(const TrialRecord& rec) {
  out_ << (format_ == Format::kCsv ? to_csv_row(rec) : to_json_line(rec)) << '\n';
  ++written_;
}

std::vector<TrialRecord> run_trials(std::size_t trials, std::size_t jobs,
                                    const std::function<TrialRecord(std::size_t)>& body) {
  std::vector<TrialRecord> records(trials);
  if (trials == 0) return records;
  jobs = std::max<std::size_t>(1, std::min(jobs, trials));
  if (jobs == 1) {
    for (std::size_t i = 0; i < trials; ++i) records[i] = body(i);
    return records;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        records[i] = body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  if (!all_digits(s)) throw std::invalid_argument("bad " + what + " in graph spec: " + s);
  return static_cast<std::size_t>(std::stoull(s));
}

// "k=v,k=v" tail of a generator spec.
std::map<std::string, std::string> parse_kv(const std::string& tail, const std::string& spec) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(tail);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("bad key=value pair in graph spec: " + spec);
    }
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

GraphSpec fixed_spec(std::string name, net::Graph g) {
  GraphSpec out;
  out.name = std::move(name);
  out.randomized = false;
  out.n = g.n();
  out.delta_bound = g.max_degree();
  out.build = [graph = std::move(g)](std::uint64_t) { return graph; };
  return out;
}

}  // namespace

GraphSpec parse_graph_spec(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("empty graph spec");

  if (spec.rfind("hard:", 0) == 0) {
    auto kv = parse_kv(spec.substr(5), spec);
    if (!kv.count("d")) throw std::invalid_argument("hard spec needs d=: " + spec);
    std::size_t d = parse_size(kv.at("d"), "d");
    std::size_t n = kv.count("n") ? parse_size(kv.at("n"), "n") : 2 * d;
    return fixed_spec(spec, net::gen_hard_instance(d, n));
  }
  if (spec.rfind("rand:", 0) == 0) {
    auto kv = parse_kv(spec.substr(5), spec);
    for (const char* key : {"n", "dcap", "p"}) {
      if (!kv.count(key)) {
        throw std::invalid_argument(std::string("rand spec needs ") + key + "=: " + spec);
      }
    }
    std::size_t n = parse_size(kv.at("n"), "n");
    std::size_t dcap = parse_size(kv.at("dcap"), "dcap");
    double p = std::stod(kv.at("p"));
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("rand spec needs p in [0,1]");
    GraphSpec out;
    out.name = spec;
    out.randomized = true;
    out.n = n;
    out.delta_bound = dcap;
    out.build = [n, dcap, p](std::uint64_t seed) {
      return net::gen_random_graph(n, dcap, p, seed);
    };
    return out;
  }
  if (spec[0] == 'k' && all_digits(spec.substr(1))) {
    std::string digits = spec.substr(1);
    if (digits.size() % 2 != 0 ||
        digits.substr(0, digits.size() / 2) != digits.substr(digits.size() / 2)) {
      throw std::invalid_argument("k spec must name equal halves, e.g. k44: " + spec);
    }
    std::size_t d = parse_size(digits.substr(0, digits.size() / 2), "d");
    return fixed_spec(spec, net::gen_hard_instance(d, 2 * d));
  }
  for (const auto& [prefix, make] :
       {std::pair<std::string, net::Graph (*)(std::size_t)>{"path", net::path_graph},
        {"cycle", net::cycle_graph},
        {"empty", net::empty_graph}}) {
    if (spec.rfind(prefix, 0) == 0 && all_digits(spec.substr(prefix.size()))) {
      return fixed_spec(spec, make(parse_size(spec.substr(prefix.size()), "n")));
    }
  }
  if (!std::filesystem::exists(spec)) {
    throw std::invalid_argument("graph spec is neither a generator nor a readable file: " +
                                spec);
  }
  return fixed_spec(spec, net::load_graph(spec));
}

sim::SimParams round_trial_params(const RoundTrialConfig& config) {
  return sim::SimParams::make(config.graph.n, config.graph.delta_bound, config.gamma,
                              config.eps, config.c_eps, config.mode);
}

RoundTrialOutcome run_round_trial_full(const RoundTrialConfig& config, std::size_t trial) {
  auto start = std::chrono::steady_clock::now();
  std::uint64_t trial_seed =
      derive(config.seed, stream_tag("trial"), static_cast<std::uint64_t>(trial));
  net::Graph g =
      config.graph.build(config.graph.randomized ? derive(trial_seed, stream_tag("graph")) : 0);
  sim::SimParams params = round_trial_params(config);

  std::vector<codes::BitString> messages;
  messages.reserve(g.n());
  for (std::size_t v = 0; v < g.n(); ++v) {
    messages.push_back(codes::random_bits(params.L, derive(trial_seed, stream_tag("msg"), v)));
  }
  net::NoiseChannel channel(config.eps, derive(trial_seed, stream_tag("noise")));
  sim::TrialSeeds seeds{derive(trial_seed, stream_tag("beep")),
                        derive(trial_seed, stream_tag("dist")),
                        derive(trial_seed, stream_tag("tags"))};

  RoundTrialOutcome out;
  out.result = sim::simulate_broadcast_round(g, messages, params, channel, seeds, config.policy,
                                             config.check_condition);

  TrialRecord& rec = out.record;
  rec.trial = static_cast<std::int64_t>(trial);
  rec.seed = trial_seed;
  rec.n = static_cast<std::int64_t>(g.n());
  rec.delta = static_cast<std::int64_t>(config.graph.delta_bound);
  rec.eps = config.eps;
  rec.gamma = config.gamma;
  rec.c_eps = config.c_eps;
  rec.mode = codes::mode_name(config.mode);
  rec.candidate_policy = policy_name(config.policy);
  rec.rounds_used = out.result.beep_rounds_used;
  rec.set_decode_ok = out.result.set_decode_ok;
  rec.msg_decode_ok = out.result.msg_decode_ok;
  rec.collision_flag = out.result.tag_collision;
  rec.ambiguity_count = out.result.ambiguity_count;
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start)
                    .count();
  return out;
}

TrialRecord run_round_trial(const RoundTrialConfig& config, std::size_t trial) {
  return run_round_trial_full(config, trial).record;
}

double round_trial_success_rate(const RoundTrialConfig& config, long long c,
                                std::size_t trials, std::size_t jobs) {
  if (trials == 0) return 0.0;
  RoundTrialConfig probe = config;
  probe.c_eps = static_cast<double>(c);
  probe.seed = derive(config.seed, stream_tag("tune"), static_cast<std::uint64_t>(c));
  auto records = run_trials(trials, jobs, [&probe](std::size_t i) {
    return run_round_trial(probe, i);
  });
  std::size_t ok = 0;
  for (const auto& rec : records) {
    if (rec.set_decode_ok.value_or(false) && rec.msg_decode_ok.value_or(false)) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(trials);
}

SuccessStats success_stats(std::size_t successes, std::size_t trials) {
  SuccessStats stats;
  stats.successes = successes;
  stats.trials = trials;
  if (trials == 0) return stats;
  stats.rate = static_cast<double>(successes) / static_cast<double>(trials);
  stats.standard_error =
      std::sqrt(stats.rate * (1.0 - stats.rate) / static_cast<double>(trials));
  return stats;
}

TuneResult tune_constant(double target, long long c_cap,
                         const std::function<double(long long)>& success_at) {
  if (!(target >= 0.0 && target <= 1.0)) {
    throw std::invalid_argument("tuning target must be a rate in [0, 1]");
  }
  if (c_cap < 1) throw std::invalid_argument("tuning cap must be >= 1");

  TuneResult result;
  std::map<long long, double> seen;
  auto eval = [&](long long c) {
    auto it = seen.find(c);
    if (it != seen.end()) return it->second;
    double rate = success_at(c);
    seen.emplace(c, rate);
    result.probes.emplace_back(c, rate);
    return rate;
  };

  // Doubling phase: find the first passing power of two (or hit the cap).
  long long lo = 0;  // largest known-failing c (0 = none yet)
  long long hi = -1;
  for (long long c = 1;; c *= 2) {
    if (c > c_cap) c = c_cap;
    double rate = eval(c);
    if (rate >= target) {
      hi = c;
      break;
    }
    lo = c;
    if (c == c_cap) break;
  }

  if (hi < 0) {
    // Nothing passed: report the best rate seen (smallest c on ties).
    result.reached = false;
    result.c = result.probes.front().first;
    result.achieved = result.probes.front().second;
    for (const auto& [c, rate] : result.probes) {
      if (rate > result.achieved) {
        result.c = c;
        result.achieved = rate;
      }
    }
    return result;
  }

  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (eval(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.reached = true;
  result.c = hi;
  result.achieved = seen.at(hi);
  return result;
}

}  // namespace beepsim::harness
