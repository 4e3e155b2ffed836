#pragma once

#include <cstdint>
#include <string>

#include "beepsim/bitstring.hpp"

// Randomized code families used by the beep-round simulation.
//
// Distance code (a, delta): maps a-bit payloads to b = c_delta*a bit words;
// a good instance has pairwise Hamming distance >= delta*b.  Codewords are
// uniformly random strings.
//
// Beep code (a, k, c): maps a-bit payloads to b = c^2*k*a bit words of exact
// weight w = b/(c*k) = c*a.  A good instance has the union-free style
// property that the OR of any k codewords does not (5b/(c^2 k))-intersect any
// codeword outside the set.  Codewords are uniformly random weight-w strings.
//
// Both families are sampled from a seed; codewords are recomputed on demand
// (generator parameters, never stored codeword tables).

namespace beepsim::codes {

enum class Mode {
  kTheory,     // enforce the analytical constant lower bounds
  kEmpirical,  // any constants; derived sizes rounded and recorded
};

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct DistanceCodeParams {
  std::size_t a = 0;      // payload bits
  double delta = 0.0;     // required relative distance, in (0, 1/2)
  double c_delta = 0.0;   // length multiplier
  std::size_t b = 0;      // codeword length, round(c_delta * a)
  Mode mode = Mode::kEmpirical;

  // Validates ranges; in theory mode requires c_delta >= 12*(1-2*delta)^-2.
  static DistanceCodeParams make(std::size_t a, double delta, double c_delta, Mode mode);
};

class DistanceCode {
 public:
  DistanceCode(DistanceCodeParams params, std::uint64_t seed);

  const DistanceCodeParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  BitString codeword(const BitString& payload) const;
  BitString codeword(std::uint64_t payload) const;  // payload width = params().a (a <= 64)

  std::string manifest() const;

 private:
  DistanceCodeParams params_;
  std::uint64_t seed_;
};

struct BeepCodeParams {
  std::size_t a = 0;  // payload bits
  std::size_t k = 0;  // superimposition set size the code must tolerate
  double c = 0.0;     // sparsity parameter (codeword density 1/(c*k))
  std::size_t b = 0;  // codeword length, round(c^2 * k * a)
  std::size_t w = 0;  // exact codeword weight, round(b / (c*k))
  Mode mode = Mode::kEmpirical;

  // Threshold in the violation property: 5*b/(c^2*k) (= 5a for integral c).
  double intersect_threshold() const { return 5.0 * static_cast<double>(b) / (c * c * static_cast<double>(k)); }

  static BeepCodeParams make(std::size_t a, std::size_t k, double c, Mode mode);
};

class BeepCode {
 public:
  BeepCode(BeepCodeParams params, std::uint64_t seed);

  const BeepCodeParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  BitString codeword(const BitString& payload) const;
  BitString codeword(std::uint64_t payload) const;

  std::string manifest() const;

 private:
  BeepCodeParams params_;
  std::uint64_t seed_;
};

struct DistanceVerifyResult {
  std::size_t min_distance = 0;
  std::size_t pairs_checked = 0;
  bool pass = false;
};

// Exhaustive pairwise minimum distance of an explicit codeword list.
DistanceVerifyResult verify_min_distance(std::span<const BitString> codewords, double required);

// Checks all 2^a codeword pairs of `code`; refuses when a > a_max.
DistanceVerifyResult verify_distance_code(const DistanceCode& code, std::size_t a_max = 14);

// Sampled stand-in when the exhaustive check is infeasible: minimum distance
// over `trials` uniformly drawn distinct payload pairs (a <= 63).
DistanceVerifyResult sample_min_distance(const DistanceCode& code, std::size_t trials,
                                         std::uint64_t seed);

// Monte Carlo estimate of the beep-code violation rate: fraction of sampled
// (S, r) with |S| = k, r outside S, where the OR of S's codewords
// intersect_threshold()-intersects codeword(r).  Exact checking is
// exponential, so an estimator is all we offer.
double estimate_beep_violation_rate(const BeepCode& code, std::size_t trials, std::uint64_t seed);

// Writes dist_cw into the 1-positions of beep_cw: result bit j is 1 iff j is
// the i-th 1 of beep_cw and dist_cw bit i is 1.  Requires
// weight(beep_cw) == length(dist_cw).
BitString combine_codewords(const BitString& beep_cw, const BitString& dist_cw);

// Combined codeword CD(r, m) for the two-phase schedule.
BitString combined_encode(const BeepCode& beep, const DistanceCode& dist, const BitString& r,
                          const BitString& m);

// Bits of y at the 1-positions of mask, in order: the inverse side of
// combine_codewords (extract_subsequence(combine(c, d), c) == d).
BitString extract_subsequence(const BitString& y, const BitString& mask);

}  // namespace beepsim::codes
