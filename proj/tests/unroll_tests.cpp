#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qubomc/unroll.hpp"

using namespace qubomc;
using btor2::Model;

namespace {

std::string fixture(const std::string & name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

Model load(const std::string & name) { return btor2::parse_file(fixture(name)); }

const Word & state_word(const Frame & frame, btor2::Nid nid) {
  return std::get<Word>(frame.state_values.at(nid));
}

}  // namespace

TEST_CASE("counter3 frame 0 folds to constants") {
  Model m = load("counter3.btor2");
  Translation t = translate(m, 0);
  const Frame & f0 = t.frames[0];
  const Word & counter = state_word(f0, 4);
  REQUIRE(counter.all_const());
  CHECK(counter.const_value() == 0);
  CHECK(f0.bad_bits.at(10) == Bit::zero());
  CHECK(t.bqm.num_vars() == 0);
}

TEST_CASE("guess4 frame 0 allocates exactly the four input variables") {
  Model m = load("guess4.btor2");
  Translation t = translate(m, 0);
  const Frame & f0 = t.frames[0];
  REQUIRE(f0.input_words.count(3));
  const Word & guess = f0.input_words.at(3);
  CHECK(guess.width() == 4);
  for (const Bit & b : guess.bits) CHECK(!b.is_const());
  CHECK(!f0.bad_bits.at(6).is_const()); // the eq-circuit output
  CHECK(t.or_output == f0.bad_bits.at(6));
}

TEST_CASE("uninitialized states become fresh variable words") {
  Model m = btor2::parse(
      "1 sort bitvec 5\n"
      "2 state 1 s\n"
      "3 sort bitvec 1\n"
      "4 constd 1 0\n"
      "5 eq 3 2 4\n"
      "6 bad 5\n");
  Translation t = translate(m, 0);
  const Word & s = state_word(t.frames[0], 2);
  CHECK(s.width() == 5);
  for (const Bit & b : s.bits) CHECK(!b.is_const());
  CHECK(t.bqm.num_vars() >= 5);
}

TEST_CASE("counter3 folds completely at every bound") {
  Model m = load("counter3.btor2");
  SUBCASE("bound 7 is unconditionally bad") {
    Translation t = translate(m, 7);
    CHECK(t.bqm.num_vars() == 0);
    CHECK(t.bqm.offset() == 0);
    CHECK(t.frames[7].bad_bits.at(10) == Bit::one());
    CHECK(t.or_output == Bit::one());
  }
  SUBCASE("bound 6 is unconditionally clean") {
    Translation t = translate(m, 6);
    CHECK(t.bqm.num_vars() == 0);
    CHECK(t.bqm.offset() == 1); // violated pin at default strength
    CHECK(t.or_output == Bit::zero());
  }
  SUBCASE("pin strength is configurable") {
    UnrollOptions opts;
    opts.pin_strength = 5;
    Translation t = translate(m, 6, opts);
    CHECK(t.bqm.offset() == 5);
  }
}

TEST_CASE("itestep converges to a constant number of variables per frame") {
  // the initialized counter starts fully constant; bits turn symbolic one by
  // one until the per-frame circuit shape stabilizes
  Model m = load("itestep.btor2");
  Translation t = translate(m, 12);
  REQUIRE(t.stats.size() == 13);
  uint64_t steady = t.stats[4].new_vars;
  CHECK(steady > 0);
  for (size_t i = 4; i < t.stats.size(); ++i) CHECK(t.stats[i].new_vars == steady);
}

TEST_CASE("free-start toggle adds a constant number of variables per frame") {
  Model m = load("toggle_free.btor2");
  Translation t = translate(m, 16);
  uint64_t per_frame = t.stats[1].new_vars;
  CHECK(per_frame > 0);
  for (size_t i = 2; i < t.stats.size(); ++i) CHECK(t.stats[i].new_vars == per_frame);
}

TEST_CASE("memoization blasts a shared next expression once per frame") {
  Model m = btor2::parse(
      "1 sort bitvec 4\n"
      "2 state 1 a\n"
      "3 state 1 b\n"
      "4 add 1 2 3\n"
      "5 next 1 2 4\n"
      "6 next 1 3 4\n");
  Translation t = translate(m, 1);
  const Word & a1 = state_word(t.frames[1], 2);
  const Word & b1 = state_word(t.frames[1], 3);
  CHECK(a1.bits == b1.bits); // identical variables, not equivalent copies

  // one ripple adder for width 4 stays below 8 * w variables even though two
  // next expressions reference it
  CHECK(t.stats[1].new_vars <= 8 * 4);
}

TEST_CASE("states without a next carry their word unchanged") {
  Model m = btor2::parse(
      "1 sort bitvec 3\n"
      "2 state 1 frozen\n"
      "3 state 1 counting\n"
      "4 inc 1 3\n"
      "5 next 1 3 4\n");
  Translation t = translate(m, 2);
  CHECK(state_word(t.frames[0], 2).bits == state_word(t.frames[2], 2).bits);
}

TEST_CASE("guess4 at bound 0: ground energy 0 exactly at input 10") {
  Model m = load("guess4.btor2");
  Translation t = translate(m, 0);
  ForwardEvaluator eval(t.bqm);
  REQUIRE(eval.free_vars().size() == 4);
  int zeros = 0;
  uint64_t zero_value = 99;
  for (uint64_t v = 0; v < 16; ++v) {
    std::vector<uint8_t> bits(4);
    for (int i = 0; i < 4; ++i) bits[i] = uint8_t((v >> i) & 1);
    int64_t e = t.bqm.evaluate_energy(eval.evaluate(bits));
    if (e == 0) {
      ++zeros;
      zero_value = v;
    } else {
      CHECK(e >= 1);
    }
  }
  CHECK(zeros == 1);
  CHECK(zero_value == 10);
}

TEST_CASE("decode_witness reads the per-step inputs back") {
  Model m = load("guess4.btor2");
  Translation t = translate(m, 0);
  Assignment a = assignment_for_inputs(t, { { { 3, btor2::BitVec(4, 10) } } });
  CHECK(t.bqm.evaluate_energy(a) == 0);
  auto witness = decode_witness(t, a);
  REQUIRE(witness.size() == 1);
  CHECK(witness[0].at(3).bits == 10);

  // a witness decoded from a ground assignment replays in the simulator
  auto flags = btor2::eval_bads(m, btor2::initial_state(m), witness[0]);
  CHECK(flags.at(6));
}

TEST_CASE("models without inputs decode to empty witnesses") {
  Model m = load("counter3.btor2");
  Translation t = translate(m, 7);
  auto witness = decode_witness(t, {});
  REQUIRE(witness.size() == 8);
  for (const auto & step : witness) CHECK(step.empty());
}

TEST_CASE("frame chaining: toggle frame words advance through the mux circuit") {
  Model m = load("toggle.btor2");
  Translation t = translate(m, 3);
  // state word of frame 0 is the constant 0 init; frames beyond carry vars
  CHECK(state_word(t.frames[0], 2).bits[0] == Bit::zero());
  for (size_t i = 1; i < t.frames.size(); ++i) CHECK(!state_word(t.frames[i], 2).bits[0].is_const());
  // bad bit is exactly the state bit of its frame
  for (size_t i = 0; i < t.frames.size(); ++i)
    CHECK(t.frames[i].bad_bits.at(9) == state_word(t.frames[i], 2).bits[0]);
}

TEST_CASE("monotone offset: larger bounds never raise the ground energy") {
  for (const char * name : { "toggle.btor2", "twobad.btor2", "itestep.btor2" }) {
    Model m = load(name);
    int64_t prev = -1;
    for (uint64_t n = 0; n <= 6; ++n) {
      Translation t = translate(m, n);
      ForwardEvaluator eval(t.bqm);
      size_t k = eval.free_vars().size();
      REQUIRE(k <= 14);
      int64_t best = -1;
      for (uint64_t v = 0; v < (uint64_t(1) << k); ++v) {
        std::vector<uint8_t> bits(k);
        for (size_t i = 0; i < k; ++i) bits[i] = uint8_t((v >> i) & 1);
        int64_t e = t.bqm.evaluate_energy(eval.evaluate(bits));
        if (best < 0 || e < best) best = e;
      }
      if (prev >= 0) CHECK(best <= prev);
      prev = best;
    }
  }
}

TEST_CASE("array expansion limit is a configuration error") {
  Model m = load("mem4.btor2");
  UnrollOptions opts;
  opts.array_index_limit = 1; // mem4 uses a 2-bit index
  CHECK_THROWS_WITH_AS(translate(m, 1, opts), doctest::Contains("expansion limit"), QubomcError);
}

TEST_CASE("memgrow per-frame variable growth is at most linear") {
  Model m = load("memgrow.btor2");
  Translation t = translate(m, 12);
  // new variables per frame grow while fresh words enter the image, then
  // saturate; deltas never grow faster than a fixed linear slope
  uint64_t prev = t.stats[1].new_vars;
  uint64_t max_delta = 0;
  for (size_t i = 2; i < t.stats.size(); ++i) {
    uint64_t cur = t.stats[i].new_vars;
    uint64_t delta = cur > prev ? cur - prev : 0;
    max_delta = std::max(max_delta, delta);
    prev = cur;
  }
  CHECK(max_delta <= 64); // bounded slope, i.e. at most linear growth
  // saturation: the image has 8 words, so growth stops by frame 9
  CHECK(t.stats[11].new_vars == t.stats[12].new_vars);
}
