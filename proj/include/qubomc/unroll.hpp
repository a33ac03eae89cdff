#ifndef QUBOMC_UNROLL_HPP
#define QUBOMC_UNROLL_HPP

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "qubomc/bitblast.hpp"
#include "qubomc/bqm.hpp"
#include "qubomc/btor2.hpp"

namespace qubomc {

using StateValue = std::variant<Word, MemoryImage>;

// One unrolled copy of the model. State words of frame i+1 are exactly the
// blasted `next` outputs over frame i; input words hold fresh variables
// allocated in the frame that first references them.
struct Frame {
  uint64_t step = 0;
  std::map<btor2::Nid, StateValue> state_values;
  std::map<btor2::Nid, Word> input_words;
  std::map<btor2::Nid, Bit> bad_bits;
  // Per-frame blasting memo: every combinational nid is blasted at most once
  // per frame, shared between bad conditions and next expressions.
  std::map<btor2::Nid, StateValue> memo;
};

struct FrameStats {
  uint64_t step = 0;
  uint64_t new_vars = 0;
  uint64_t cumulative_vars = 0;
  uint64_t nonconstant_pc_flags = 0; // 1-bit states whose symbol starts with "pc-"
  uint64_t nonconstant_bads = 0;
};

struct UnrollOptions {
  int64_t pin_strength = 1;
  uint32_t array_index_limit = 12; // max index width expanded to 2^k words
};

struct Translation {
  Bqm bqm;
  std::vector<Frame> frames; // length n+1
  Bit or_output = Bit::zero();
  std::vector<FrameStats> stats; // per frame; excludes the final OR reduction
  uint64_t or_reduction_vars = 0;
  UnrollOptions options;
};

// Unroll `model` for `n` transitions into one QUBO: frames 0..n, an OR over
// every frame's bad bits, and that OR output pinned to 1. Ground energy is 0
// exactly when some input drives some bad condition within n transitions.
Translation translate(const btor2::Model & model, uint64_t n,
                      const UnrollOptions & options = {});

// Concrete per-step input values read back from a solved assignment. Only
// inputs that were materialized in some frame appear.
std::vector<btor2::InputMap> decode_witness(const Translation & translation,
                                            const Assignment & assignment);

// Fix the input variables of every frame to the given values (inputs that a
// frame materialized but the caller did not provide default to 0), complete
// the assignment functionally, and return it. The residual energy of the
// result is the sum of violated pin penalties.
Assignment assignment_for_inputs(const Translation & translation,
                                 const std::vector<btor2::InputMap> & inputs);

}  // namespace qubomc

#endif
