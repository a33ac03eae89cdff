#ifndef QUBOMC_SOLVE_HPP
#define QUBOMC_SOLVE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qubomc/bqm.hpp"
#include "qubomc/unroll.hpp"

namespace qubomc {

struct SolveResult {
  int64_t best_energy = 0;
  Assignment best_assignment;
  uint64_t samples_taken = 0;
  uint64_t seed = 0;
};

// Enumerates all 2^k assignments and returns the global minimum; ties break
// to the lexicographically smallest assignment (variable 0 first).
SolveResult solve_exhaustive(const Bqm & model, uint32_t var_limit = 24);

struct AnnealParams {
  uint64_t sweeps = 1000;
  uint64_t restarts = 8;
  double initial_temperature = 4.0;
  double final_temperature = 0.05;
  uint64_t seed = 0;
};

// Single-spin-flip Metropolis with a geometric cooling schedule. Restarts
// are independent; a fixed seed gives a bit-identical result.
SolveResult solve_anneal(const Bqm & model, const AnnealParams & params);

// Minimum forward energy over every combination of free-variable values
// (free variables are the model inputs; gate outputs are completed
// functionally). Zero is reported iff the true ground energy is zero.
SolveResult solve_input_scan(const Bqm & model, uint64_t enumeration_limit = uint64_t(1) << 20);

struct ValidationResult {
  int64_t energy = 0;
  bool simulator_bad = false;
  uint64_t simulator_bad_step = 0;
  bool agrees = false; // (energy == 0) <=> simulator reaches bad within n
};

// Fix the unrolled model's input variables to `inputs`, complete the
// assignment functionally and evaluate; run the simulator on the same
// inputs and compare.
ValidationResult validate_on_input(const btor2::Model & model, const Translation & translation,
                                   const std::vector<btor2::InputMap> & inputs);

enum class QubitStatus { Determined, Approximated, Superposition, Undetermined };

struct QubitReport {
  std::map<Var, QubitStatus> status;
  std::map<Var, int> known_value; // Determined/Approximated qubits
  uint64_t evaluations = 0;
  bool enumeration_complete = false;
};

// Classify every variable by enumerating input assignments through forward
// evaluation, spending at most `budget` evaluations. Input variables are
// always in superposition. A variable seen with a single value is
// Determined when the enumeration completed and Approximated otherwise;
// seen with both values it is in Superposition; unseen (budget 0) it is
// Undetermined.
QubitReport classify_qubits(const Translation & translation, uint64_t budget);

struct AdvantagePoint {
  uint64_t bound = 0;
  uint64_t total_qubits = 0;       // |Q_n|: variables minus determined ones
  uint64_t undetermined_qubits = 0; // |Q_n|_T: approximated + undetermined
};

struct AdvantageResult {
  bool has_advantage = false;
  bool negative = false;
  std::string note;
  int64_t transitions = 0; // n
  int64_t qubits = 0;      // q = C - |Q_i|
  uint64_t base_index = 0; // i
  std::vector<AdvantagePoint> points;
};

// Quantum-advantage metric: unrolls the model for bounds 0..max_n, removes
// determined qubits, finds the first i with |Q_i|_T = 0 and |Q_{i+1}|_T > 0
// and the largest n with |Q_{i+n}| <= C < |Q_{i+n+1}|. Reports a negative
// advantage when the capacity C is exhausted before any undetermined qubit
// appears.
AdvantageResult compute_quantum_advantage(const btor2::Model & model, uint64_t capacity,
                                          uint64_t budget, uint64_t max_n,
                                          const UnrollOptions & options = {});

}  // namespace qubomc

#endif
