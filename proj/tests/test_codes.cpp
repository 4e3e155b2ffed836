#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "beepsim/codes.hpp"
#include "beepsim/rng.hpp"

using beepsim::codes::BitString;
namespace codes = beepsim::codes;
using codes::Mode;

TEST_CASE("mode names round trip") {
  CHECK(codes::mode_name(Mode::kTheory) == "theory");
  CHECK(codes::mode_name(Mode::kEmpirical) == "empirical");
  CHECK(codes::mode_from_name("theory") == Mode::kTheory);
  CHECK_THROWS_AS(codes::mode_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("distance params validate ranges and the analytic bound") {
  auto p = codes::DistanceCodeParams::make(8, 1.0 / 3.0, 108.0, Mode::kTheory);
  CHECK(p.b == 864);  // round(108 * 8)
  // 12*(1-2/3)^-2 = 108: anything below fails in theory mode.
  CHECK_THROWS_AS(codes::DistanceCodeParams::make(8, 1.0 / 3.0, 107.9, Mode::kTheory),
                  std::invalid_argument);
  CHECK_NOTHROW(codes::DistanceCodeParams::make(8, 1.0 / 3.0, 2.0, Mode::kEmpirical));
  CHECK_THROWS_AS(codes::DistanceCodeParams::make(8, 0.5, 108.0, Mode::kEmpirical),
                  std::invalid_argument);
  CHECK_THROWS_AS(codes::DistanceCodeParams::make(8, 0.0, 108.0, Mode::kEmpirical),
                  std::invalid_argument);
  CHECK_THROWS_AS(codes::DistanceCodeParams::make(0, 0.25, 20.0, Mode::kEmpirical),
                  std::invalid_argument);
}

TEST_CASE("distance codewords are deterministic in (seed, payload)") {
  auto p = codes::DistanceCodeParams::make(6, 0.25, 4.0, Mode::kEmpirical);
  codes::DistanceCode code(p, 11);
  codes::DistanceCode same(p, 11);
  codes::DistanceCode other(p, 12);
  CHECK(code.codeword(5) == same.codeword(5));
  CHECK(code.codeword(5) != other.codeword(5));
  CHECK(code.codeword(5).length() == p.b);
  CHECK(code.codeword(5) == code.codeword(BitString::from_u64(5, 6)));
  CHECK_THROWS_AS(code.codeword(BitString::from_u64(5, 7)), std::invalid_argument);
  CHECK(code.manifest() ==
        "family=distance a=6 k=- c=4 b=24 w=- delta=0.25 mode=empirical seed=11");
}

TEST_CASE("exhaustive pair check computes the true minimum distance") {
  std::vector<BitString> words{
      BitString::from_string("000000"), BitString::from_string("111000"),
      BitString::from_string("000111"), BitString::from_string("110011")};
  auto res = codes::verify_min_distance(words, 3.0);
  CHECK(res.min_distance == 3);
  CHECK(res.pairs_checked == 6);
  CHECK(res.pass);
  CHECK_FALSE(codes::verify_min_distance(words, 3.5).pass);
}

TEST_CASE("exhaustive distance verification enforces the payload cap") {
  auto p = codes::DistanceCodeParams::make(15, 0.25, 4.0, Mode::kEmpirical);
  codes::DistanceCode code(p, 1);
  CHECK_THROWS_AS(codes::verify_distance_code(code), std::invalid_argument);
  CHECK_NOTHROW(codes::verify_distance_code(code, 15));
}

TEST_CASE("sampled distance estimate never reports below the true minimum") {
  auto p = codes::DistanceCodeParams::make(6, 1.0 / 3.0, 12.0, Mode::kEmpirical);
  codes::DistanceCode code(p, 3);
  auto exact = codes::verify_distance_code(code);
  auto sampled = codes::sample_min_distance(code, 2000, 9);
  CHECK(sampled.pairs_checked == 2000);
  CHECK(sampled.min_distance >= exact.min_distance);
}

TEST_CASE("beep params derive length and weight from (a, k, c)") {
  auto p = codes::BeepCodeParams::make(8, 8, 6.0, Mode::kEmpirical);
  CHECK(p.b == 2304);  // 36 * 8 * 8
  CHECK(p.w == 48);    // 2304 / 48
  CHECK(p.intersect_threshold() == doctest::Approx(40.0));  // 5a for integral c
  CHECK_THROWS_AS(codes::BeepCodeParams::make(8, 8, 2.5, Mode::kTheory),
                  std::invalid_argument);  // theory mode needs integral c
  CHECK_NOTHROW(codes::BeepCodeParams::make(8, 8, 2.5, Mode::kEmpirical));
  CHECK_THROWS_AS(codes::BeepCodeParams::make(0, 8, 6.0, Mode::kEmpirical),
                  std::invalid_argument);
  CHECK_THROWS_AS(codes::BeepCodeParams::make(8, 0, 6.0, Mode::kEmpirical),
                  std::invalid_argument);
}

TEST_CASE("beep codewords have exact weight and are keyed by payload") {
  auto p = codes::BeepCodeParams::make(10, 4, 3.0, Mode::kEmpirical);
  codes::BeepCode code(p, 77);
  std::set<BitString> seen;
  for (std::uint64_t payload = 0; payload < 32; ++payload) {
    BitString cw = code.codeword(payload);
    CHECK(cw.length() == p.b);
    CHECK(cw.weight() == p.w);
    seen.insert(cw);
  }
  CHECK(seen.size() == 32);  // no collisions among these payloads
  CHECK(code.codeword(7) == codes::BeepCode(p, 77).codeword(7));
  CHECK(code.manifest() == "family=beep a=10 k=4 c=3 b=360 w=30 mode=empirical seed=77");
}

TEST_CASE("violation-rate estimate is a deterministic rate") {
  auto p = codes::BeepCodeParams::make(6, 4, 3.0, Mode::kEmpirical);
  codes::BeepCode code(p, 5);
  double r1 = codes::estimate_beep_violation_rate(code, 500, 13);
  double r2 = codes::estimate_beep_violation_rate(code, 500, 13);
  CHECK(r1 == r2);
  CHECK(r1 >= 0.0);
  CHECK(r1 <= 1.0);
  CHECK_THROWS_AS(codes::estimate_beep_violation_rate(code, 0, 13), std::invalid_argument);
}

TEST_CASE("combining writes the distance word into the mask's one-positions") {
  BitString beep_cw = BitString::from_string("010101");
  BitString dist_cw = BitString::from_string("101");
  CHECK(codes::combine_codewords(beep_cw, dist_cw).to_string() == "010001");
  CHECK_THROWS_AS(codes::combine_codewords(beep_cw, BitString::from_string("10")),
                  std::invalid_argument);
}

TEST_CASE("extract_subsequence inverts combine_codewords") {
  auto bp = codes::BeepCodeParams::make(6, 3, 2.0, Mode::kEmpirical);
  codes::BeepCode beep(bp, 21);
  auto dp = codes::DistanceCodeParams::make(6, 0.25, static_cast<double>(bp.w) / 6.0,
                                            Mode::kEmpirical);
  REQUIRE(dp.b == bp.w);
  codes::DistanceCode dist(dp, 22);
  for (std::uint64_t r = 0; r < 8; ++r) {
    for (std::uint64_t msg = 0; msg < 8; ++msg) {
      BitString cw = beep.codeword(r);
      BitString dw = dist.codeword(msg);
      BitString combined = codes::combined_encode(beep, dist, BitString::from_u64(r, 6),
                                                  BitString::from_u64(msg, 6));
      CHECK(combined == codes::combine_codewords(cw, dw));
      CHECK(codes::extract_subsequence(combined, cw) == dw);
    }
  }
}

TEST_CASE("extracting at a mask keeps mask-position order") {
  BitString y = BitString::from_string("110010");
  BitString mask = BitString::from_string("101011");
  // Mask ones at positions 0,2,4,5 -> bits of y there: 1,0,1,0.
  CHECK(codes::extract_subsequence(y, mask).to_string() == "1010");
}
