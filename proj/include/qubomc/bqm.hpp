#ifndef QUBOMC_BQM_HPP
#define QUBOMC_BQM_HPP

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "qubomc/common.hpp"

namespace qubomc {

using Var = uint32_t;

// A bit of a blasted word: either a known constant or a QUBO variable.
class Bit {
 public:
  Bit() : code_(0) {}
  static Bit constant(bool v) { Bit b; b.code_ = v ? 1 : 0; return b; }
  static Bit zero() { return constant(false); }
  static Bit one() { return constant(true); }
  static Bit var(Var v) { Bit b; b.code_ = int64_t(v) + 2; return b; }

  bool is_const() const { return code_ < 2; }
  bool const_value() const { return code_ == 1; }
  Var var_id() const { return Var(code_ - 2); }

  bool operator==(const Bit & o) const = default;

 private:
  int64_t code_;
};

enum class Gate { Not, And, Nand, Or, Inhibit, Xor };

const char * gate_name(Gate g);

// One gate appended to the model. `anc` is used by XOR only.
struct GateRec {
  Gate kind;
  Bit a;
  Bit b;   // unused for NOT
  Var out = 0;
  Var anc = 0;
  bool has_anc = false;
};

// Division/remainder witness variables: quotient and remainder words are
// free in the QUBO but functionally determined during forward evaluation
// (RISC-V convention when the divisor evaluates to zero).
struct DivRec {
  std::vector<Bit> dividend;
  std::vector<Bit> divisor;
  std::vector<Var> quotient;
  std::vector<Var> remainder;
};

using TraceItem = std::variant<GateRec, DivRec>;

using Assignment = std::vector<uint8_t>; // indexed by Var, values 0/1

// Binary quadratic model over {0,1} variables with exact integer
// coefficients. The model is a sum of nonnegative penalty terms: each gate
// contributes a polynomial that is 0 exactly on assignments satisfying the
// gate relation and >= 1 otherwise; pins contribute strength * (bit wrong).
class Bqm {
 public:
  // Fresh variable not produced by any gate (model input / free word).
  Var new_free_var();

  // Deserialization hooks: allocate a variable with an explicit produced
  // flag and append a prebuilt trace record.
  Var new_var(bool produced);
  void append_trace(TraceItem item) { trace_.push_back(std::move(item)); }

  size_t num_vars() const { return linear_.size(); }
  int64_t offset() const { return offset_; }
  const std::vector<int64_t> & linear() const { return linear_; }
  const std::map<std::pair<Var, Var>, int64_t> & quadratic() const { return quadratic_; }
  const std::vector<TraceItem> & trace() const { return trace_; }

  // True for variables that are gate outputs, XOR ancillas, or
  // division/remainder witnesses; everything else is free.
  bool is_produced(Var v) const { return produced_[v]; }
  std::vector<Var> free_vars() const;

  // Emit a logic gate. Constant inputs fold with no new variables or
  // penalty; a single constant input of a binary gate simplifies to a wire,
  // a constant, or a NOT gate. Otherwise allocates the output variable
  // (plus one ancilla for XOR), appends the penalty polynomial and records
  // the gate in the trace.
  Bit emit_not(Bit a);
  Bit emit_gate(Gate kind, Bit a, Bit b);

  // Constrain `bit` to `value`. Constants fold (a contradiction adds
  // `strength` to the offset, making the model permanently infeasible).
  void pin_bit(Bit bit, bool value, int64_t strength = 1);

  // Raw coefficient access (used by tests and serialization).
  void add_offset(int64_t c) { offset_ += c; }
  void add_linear(Var v, int64_t c);
  void add_quadratic(Var u, Var v, int64_t c);

  // Exact energy; `assignment` must cover all allocated variables.
  int64_t evaluate_energy(const Assignment & assignment) const;

  // Record a division constraint's witness variables (see DivRec).
  void record_div(DivRec rec) { trace_.push_back(std::move(rec)); }

 private:
  Var new_produced_var();

  int64_t offset_ = 0;
  std::vector<int64_t> linear_;
  std::map<std::pair<Var, Var>, int64_t> quadratic_;
  std::vector<bool> produced_;
  std::vector<TraceItem> trace_;
};

// Compute every gate output functionally in trace order, starting from the
// given free-variable values (XOR ancillas take their penalty-minimizing
// value; division witnesses follow the RISC-V convention). The result
// zeroes every gate penalty, so the residual model energy is exactly the
// sum of violated pin penalties.
Assignment forward_assignment(const Bqm & model, const std::map<Var, int> & free_values);

// Reusable forward evaluator for enumeration loops.
class ForwardEvaluator {
 public:
  explicit ForwardEvaluator(const Bqm & model);

  const std::vector<Var> & free_vars() const { return free_vars_; }

  // free_bits[i] corresponds to free_vars()[i].
  const Assignment & evaluate(const std::vector<uint8_t> & free_bits);

 private:
  const Bqm & model_;
  std::vector<Var> free_vars_;
  Assignment scratch_;
};

}  // namespace qubomc

#endif
