#include "beepsim/codes.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "beepsim/rng.hpp"

namespace beepsim::codes {

namespace {

constexpr std::uint64_t kDistTag = stream_tag("distance-code");
constexpr std::uint64_t kBeepTag = stream_tag("beep-code");

std::size_t round_positive(double x, const char* what) {
  double r = std::llround(x);
  if (r < 1.0) throw std::invalid_argument(std::string(what) + " rounds below 1");
  return static_cast<std::size_t>(r);
}

// Stream key for one codeword: hash the payload bits into the code's seed so
// every payload gets its own substream.
std::uint64_t payload_key(std::uint64_t seed, std::uint64_t family_tag, const BitString& payload) {
  std::uint64_t h = derive(seed, family_tag, payload.length());
  for (std::uint64_t w : payload.words()) h = derive(h, w);
  return h;
}

}  // namespace

std::string mode_name(Mode mode) { return mode == Mode::kTheory ? "theory" : "empirical"; }

Mode mode_from_name(const std::string& name) {
  if (name == "theory") return Mode::kTheory;
  if (name == "empirical") return Mode::kEmpirical;
  throw std::invalid_argument("unknown mode: " + name + " (expected theory|empirical)");
}

DistanceCodeParams DistanceCodeParams::make(std::size_t a, double delta, double c_delta,
                                            Mode mode) {
  if (a == 0) throw std::invalid_argument("distance code requires a >= 1");
  if (!(delta > 0.0 && delta < 0.5)) {
    throw std::invalid_argument("distance code requires delta in (0, 1/2)");
  }
  if (!(c_delta > 0.0)) throw std::invalid_argument("distance code requires c_delta > 0");
  if (mode == Mode::kTheory) {
    double bound = 12.0 / ((1.0 - 2.0 * delta) * (1.0 - 2.0 * delta));
    if (c_delta + 1e-9 < bound) {
      throw std::invalid_argument("theory mode requires c_delta >= 12*(1-2*delta)^-2 = " +
                                  std::to_string(bound));
    }
  }
  DistanceCodeParams p;
  p.a = a;
  p.delta = delta;
  p.c_delta = c_delta;
  p.b = round_positive(c_delta * static_cast<double>(a), "distance codeword length");
  p.mode = mode;
  return p;
}

DistanceCode::DistanceCode(DistanceCodeParams params, std::uint64_t seed)
    : params_(params), seed_(seed) {}

BitString DistanceCode::codeword(const BitString& payload) const {
  if (payload.length() != params_.a) {
    throw std::invalid_argument("distance code payload must have exactly a bits");
  }
  return random_bits(params_.b, payload_key(seed_, kDistTag, payload));
}

BitString DistanceCode::codeword(std::uint64_t payload) const {
  return codeword(BitString::from_u64(payload, params_.a));
}

std::string DistanceCode::manifest() const {
  std::ostringstream out;
  out << "family=distance a=" << params_.a << " k=- c=" << params_.c_delta << " b=" << params_.b
      << " w=- delta=" << params_.delta << " mode=" << mode_name(params_.mode)
      << " seed=" << seed_;
  return out.str();
}

BeepCodeParams BeepCodeParams::make(std::size_t a, std::size_t k, double c, Mode mode) {
  if (a == 0) throw std::invalid_argument("beep code requires a >= 1");
  if (k == 0) throw std::invalid_argument("beep code requires k >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("beep code requires c > 0");
  if (mode == Mode::kTheory && (c != std::floor(c) || c < 1.0)) {
    throw std::invalid_argument("theory mode requires integral c >= 1");
  }
  BeepCodeParams p;
  p.a = a;
  p.k = k;
  p.c = c;
  p.mode = mode;
  p.b = round_positive(c * c * static_cast<double>(k) * static_cast<double>(a),
                       "beep codeword length");
  p.w = round_positive(static_cast<double>(p.b) / (c * static_cast<double>(k)),
                       "beep codeword weight");
  if (p.w > p.b) p.w = p.b;
  return p;
}

BeepCode::BeepCode(BeepCodeParams params, std::uint64_t seed) : params_(params), seed_(seed) {}

BitString BeepCode::codeword(const BitString& payload) const {
  if (payload.length() != params_.a) {
    throw std::invalid_argument("beep code payload must have exactly a bits");
  }
  // Uniform weight-w string via a lazy partial Fisher-Yates shuffle of
  // [0, b): only the first w draws are materialized, so cost is O(w).
  CounterRng rng(payload_key(seed_, kBeepTag, payload));
  BitString out(params_.b);
  std::unordered_map<std::size_t, std::size_t> displaced;
  displaced.reserve(params_.w * 2);
  for (std::size_t i = 0; i < params_.w; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(params_.b - i));
    auto it_j = displaced.find(j);
    std::size_t value_j = it_j == displaced.end() ? j : it_j->second;
    auto it_i = displaced.find(i);
    std::size_t value_i = it_i == displaced.end() ? i : it_i->second;
    displaced[j] = value_i;
    out.set_bit(value_j, true);
  }
  return out;
}

BitString BeepCode::codeword(std::uint64_t payload) const {
  return codeword(BitString::from_u64(payload, params_.a));
}

std::string BeepCode::manifest() const {
  std::ostringstream out;
  out << "family=beep a=" << params_.a << " k=" << params_.k << " c=" << params_.c
      << " b=" << params_.b << " w=" << params_.w << " mode=" << mode_name(params_.mode)
      << " seed=" << seed_;
  return out.str();
}

DistanceVerifyResult verify_min_distance(std::span<const BitString> codewords, double required) {
  DistanceVerifyResult res;
  if (codewords.size() < 2) {
    res.min_distance = codewords.empty() ? 0 : codewords[0].length();
    res.pass = true;
    return res;
  }
  res.min_distance = codewords[0].length() + 1;
  for (std::size_t i = 0; i < codewords.size(); ++i) {
    for (std::size_t j = i + 1; j < codewords.size(); ++j) {
      std::size_t d = hamming_distance(codewords[i], codewords[j]);
      if (d < res.min_distance) res.min_distance = d;
      ++res.pairs_checked;
    }
  }
  res.pass = static_cast<double>(res.min_distance) >= required;
  return res;
}

DistanceVerifyResult verify_distance_code(const DistanceCode& code, std::size_t a_max) {
  const auto& p = code.params();
  if (p.a > a_max || p.a > 63) {
    throw std::invalid_argument("exhaustive distance verification refused: a=" +
                                std::to_string(p.a) + " exceeds cap " + std::to_string(a_max));
  }
  std::vector<BitString> codewords;
  codewords.reserve(1ull << p.a);
  for (std::uint64_t m = 0; m < (1ull << p.a); ++m) codewords.push_back(code.codeword(m));
  return verify_min_distance(codewords, p.delta * static_cast<double>(p.b));
}

DistanceVerifyResult sample_min_distance(const DistanceCode& code, std::size_t trials,
                                         std::uint64_t seed) {
  const auto& p = code.params();
  if (p.a > 63) throw std::invalid_argument("sampled distance check requires a <= 63");
  if (p.a < 1) throw std::invalid_argument("sampled distance check requires a >= 1");
  if (trials == 0) throw std::invalid_argument("sampled distance check requires trials >= 1");
  std::uint64_t space = 1ull << p.a;
  CounterRng rng(derive(seed, stream_tag("dist-sample")));
  DistanceVerifyResult result;
  result.min_distance = p.b + 1;
  for (std::size_t t = 0; t < trials; ++t) {
    std::uint64_t x = rng.below(space);
    std::uint64_t y = rng.below(space - 1);
    if (y >= x) ++y;  // uniform over payloads != x
    std::size_t d = hamming_distance(code.codeword(x), code.codeword(y));
    result.min_distance = std::min(result.min_distance, d);
    ++result.pairs_checked;
  }
  result.pass =
      static_cast<double>(result.min_distance) >= p.delta * static_cast<double>(p.b);
  return result;
}

double estimate_beep_violation_rate(const BeepCode& code, std::size_t trials, std::uint64_t seed) {
  const auto& p = code.params();
  if (trials == 0) throw std::invalid_argument("violation estimate requires trials >= 1");
  // Need k distinct payloads plus one more outside the set.
  if (p.a < 64 && (1ull << p.a) <= p.k) {
    throw std::invalid_argument("payload space too small for k+1 distinct payloads");
  }
  double threshold = p.intersect_threshold();
  std::size_t violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng(derive(seed, stream_tag("beep-violation"), t));
    std::set<BitString> chosen;
    while (chosen.size() < p.k + 1) {
      chosen.insert(random_bits(p.a, rng.next()));
    }
    // The last (numerically largest) payload plays the outsider r; the
    // specific choice is immaterial since all were drawn symmetrically.
    auto it = chosen.begin();
    BitString orred(p.b);
    for (std::size_t i = 0; i < p.k; ++i, ++it) orred.or_with(code.codeword(*it));
    BitString outside = code.codeword(*it);
    if (intersects(orred, outside, threshold)) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(trials);
}

BitString combine_codewords(const BitString& beep_cw, const BitString& dist_cw) {
  if (beep_cw.weight() != dist_cw.length()) {
    throw std::invalid_argument("combined encode requires weight(beep) == length(dist)");
  }
  BitString out(beep_cw.length());
  std::size_t i = 0;
  for (std::size_t pos : one_positions(beep_cw)) {
    if (dist_cw.bit(i++)) out.set_bit(pos, true);
  }
  return out;
}

BitString combined_encode(const BeepCode& beep, const DistanceCode& dist, const BitString& r,
                          const BitString& m) {
  return combine_codewords(beep.codeword(r), dist.codeword(m));
}

BitString extract_subsequence(const BitString& y, const BitString& mask) {
  if (y.length() != mask.length()) {
    throw std::invalid_argument("extract_subsequence requires equal lengths");
  }
  auto positions = one_positions(mask);
  BitString out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (y.bit(positions[i])) out.set_bit(i, true);
  }
  return out;
}

}  // namespace beepsim::codes
