#ifndef QUBOMC_FORMATS_HPP
#define QUBOMC_FORMATS_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qubomc/solve.hpp"
#include "qubomc/unroll.hpp"

namespace qubomc {

// Serialized QUBO: coefficients, the gate trace (for forward validation)
// and the metadata mapping (step, input nid, bit) -> variable. Writing is
// canonical; write(read(write(x))) is byte-identical.
struct QuboFile {
  Bqm bqm;
  uint64_t steps = 0; // number of frames (bound + 1)
  std::map<std::pair<uint64_t, int64_t>, std::vector<Bit>> input_words;
  Bit or_output = Bit::zero();
  std::map<std::pair<uint64_t, int64_t>, Bit> bad_bits;
};

QuboFile make_qubo_file(const Translation & translation);

void write_qubo_file(std::ostream & out, const QuboFile & file);
QuboFile read_qubo_file(std::istream & in);
QuboFile read_qubo_file_path(const std::string & path);
void write_qubo_file_path(const std::string & path, const QuboFile & file);

// Forward-complete an assignment from per-step input values; unlisted free
// variables default to 0.
Assignment qubo_assignment_for_inputs(const QuboFile & file,
                                      const std::vector<btor2::InputMap> & inputs);

std::vector<btor2::InputMap> qubo_decode_witness(const QuboFile & file,
                                                 const Assignment & assignment);

// ---------------------------------------------------------------------------

struct WitnessFile {
  uint64_t bound = 0;
  std::optional<int> expected_bad; // label number, e.g. 8 for b8
  // per step: input nid -> (width, value)
  std::vector<std::map<int64_t, std::pair<uint32_t, uint64_t>>> steps;
};

WitnessFile make_witness_file(uint64_t bound, const std::vector<btor2::InputMap> & inputs,
                              std::optional<int> expected_bad);

std::vector<btor2::InputMap> witness_inputs(const WitnessFile & witness);

void write_witness_file(std::ostream & out, const WitnessFile & witness);
WitnessFile read_witness_file(std::istream & in);
WitnessFile read_witness_file_path(const std::string & path);
void write_witness_file_path(const std::string & path, const WitnessFile & witness);

// ---------------------------------------------------------------------------

// Per-step growth report: step, new_vars, cumulative_vars, nonconstant_pc_flags.
void write_stats_csv(std::ostream & out, const Translation & translation);

}  // namespace qubomc

#endif
