#ifndef QUBOMC_BTOR2_HPP
#define QUBOMC_BTOR2_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qubomc/common.hpp"

namespace qubomc::btor2 {

using Nid = int64_t;

enum class NodeKind {
  // sorts
  Sort,
  // constants
  Zero,
  One,
  Constd,
  Const,
  Consth,
  // combinational
  Add,
  Sub,
  Mul,
  Udiv,
  Urem,
  Ult,
  Ulte,
  Ugt,
  Ugte,
  Eq,
  Neq,
  And,
  Not,
  Ite,
  Uext,
  Slice,
  Inc,
  Dec,
  Read,
  Write,
  // sequential
  State,
  Init,
  Next,
  Input,
  Bad,
};

const char * node_kind_name(NodeKind kind);

struct SortInfo {
  bool is_array = false;
  uint32_t width = 0;       // bitvec width (element width for arrays)
  uint32_t index_width = 0; // arrays only
};

struct Node {
  Nid nid = 0;
  NodeKind kind = NodeKind::Sort;
  Nid sort = 0;                  // 0 for `bad` (always 1-bit) and `sort`
  std::vector<Nid> operands;     // nid references
  std::vector<int64_t> literals; // uext amount, slice bounds, constd value
  std::string constant;          // raw text for const/consth
  std::string symbol;
  SortInfo sort_info;            // resolved sort of this node's value
};

// Parsed model: nid-ordered node table plus the sequential structure.
struct Model {
  std::map<Nid, Node> nodes;
  std::vector<Nid> states;
  std::vector<Nid> inputs;
  std::vector<Nid> bads;
  std::map<Nid, Nid> init_of; // state nid -> value nid
  std::map<Nid, Nid> next_of; // state nid -> value nid

  const Node & node(Nid nid) const;
  const SortInfo & sort_of(Nid nid) const { return node(nid).sort_info; }
};

Model parse(const std::string & text);
Model parse_file(const std::string & path);

// Canonical text form; parse(print(m)) is structurally identical to m.
std::string print(const Model & model);

// ---------------------------------------------------------------------------
// Concrete simulation

struct BitVec {
  uint32_t width = 1;
  uint64_t bits = 0;

  BitVec() = default;
  BitVec(uint32_t w, uint64_t value) : width(w), bits(value & mask_of_width(w)) {
    if (w == 0 || w > 64) throw QubomcError("btor2: bitvec width out of range");
  }
  bool operator==(const BitVec & o) const = default;
};

struct ArrayVal {
  uint32_t index_width = 0;
  uint32_t elem_width = 0;
  std::map<uint64_t, uint64_t> data; // unwritten indices read as 0

  uint64_t get(uint64_t index) const {
    auto it = data.find(index);
    return it == data.end() ? 0 : it->second;
  }
  bool operator==(const ArrayVal & o) const = default;
};

using Value = std::variant<BitVec, ArrayVal>;

struct SimState {
  std::map<Nid, Value> assignment; // one entry per state nid
  uint64_t step = 0;
};

using InputMap = std::map<Nid, BitVec>;

// Reference semantics for the combinational word operators (unsigned modular
// arithmetic; udiv/urem by zero follow the RISC-V convention: quotient is
// all-ones, remainder is the dividend).
uint64_t eval_binop(NodeKind kind, uint32_t width, uint64_t a, uint64_t b);

// Initial state: init values applied, uninitialized bitvec states 0,
// arrays zeroed.
SimState initial_state(const Model & model);

struct StepResult {
  SimState next;
  std::map<Nid, bool> bad_flags; // evaluated on the pre-transition state
};

StepResult step_model(const Model & model, const SimState & state,
                      const InputMap & inputs);

// Bad flags of `state` under `inputs` without advancing.
std::map<Nid, bool> eval_bads(const Model & model, const SimState & state,
                              const InputMap & inputs);

// ---------------------------------------------------------------------------
// Brute-force reachability oracle

struct ValueDomain {
  std::vector<uint64_t> values; // candidate values, ascending
};

// Per-input candidate values; inputs absent from the map range over their
// full 2^width domain. Uninitialized bitvec states are enumerated the same
// way as inputs (they are free in the unrolled encoding).
using InputDomain = std::map<Nid, ValueDomain>;

struct Witness {
  std::vector<InputMap> inputs; // steps 0..n
  uint64_t first_bad_step = 0;
  std::map<Nid, bool> bad_flags; // flags at first_bad_step
};

struct BruteForceOptions {
  uint64_t enumeration_limit = uint64_t(1) << 20;
};

// Exhaustively simulates every input sequence for bounds 0..n (bad checked
// at steps 0..n inclusive) and returns all witnesses achieving the earliest
// bad step, in enumeration order.
std::vector<Witness> brute_force_reachability(const Model & model, uint64_t n,
                                              const InputDomain & domain = {},
                                              const BruteForceOptions & opts = {});

}  // namespace qubomc::btor2

#endif
