#include "qubomc/bqm.hpp"

#include <algorithm>

namespace qubomc {

namespace {

[[noreturn]] void fail(const std::string & msg) { throw QubomcError("bqm: " + msg); }

bool gate_truth(Gate kind, bool x, bool y) {
  switch (kind) {
    case Gate::Not: return !x;
    case Gate::And: return x && y;
    case Gate::Nand: return !(x && y);
    case Gate::Or: return x || y;
    case Gate::Inhibit: return !x && y;
    case Gate::Xor: return x != y;
  }
  return false;
}

}  // namespace

const char * gate_name(Gate g) {
  switch (g) {
    case Gate::Not: return "NOT";
    case Gate::And: return "AND";
    case Gate::Nand: return "NAND";
    case Gate::Or: return "OR";
    case Gate::Inhibit: return "INHIBIT";
    case Gate::Xor: return "XOR";
  }
  return "?";
}

Var Bqm::new_free_var() {
  linear_.push_back(0);
  produced_.push_back(false);
  return Var(linear_.size() - 1);
}

Var Bqm::new_var(bool produced) {
  linear_.push_back(0);
  produced_.push_back(produced);
  return Var(linear_.size() - 1);
}

Var Bqm::new_produced_var() {
  linear_.push_back(0);
  produced_.push_back(true);
  return Var(linear_.size() - 1);
}

std::vector<Var> Bqm::free_vars() const {
  std::vector<Var> out;
  for (Var v = 0; v < produced_.size(); ++v)
    if (!produced_[v]) out.push_back(v);
  return out;
}

void Bqm::add_linear(Var v, int64_t c) {
  if (v >= linear_.size()) fail("linear coefficient for unallocated variable");
  linear_[v] += c;
}

void Bqm::add_quadratic(Var u, Var v, int64_t c) {
  if (u == v) fail("quadratic term must pair two distinct variables");
  if (u > v) std::swap(u, v);
  if (v >= linear_.size()) fail("quadratic coefficient for unallocated variable");
  quadratic_[{ u, v }] += c;
}

Bit Bqm::emit_not(Bit a) {
  if (a.is_const()) return Bit::constant(!a.const_value());
  Var x = a.var_id();
  Var y = new_produced_var();
  // NOT(x) = y: 2 - 2x - 2y + 4xy
  add_offset(2);
  add_linear(x, -2);
  add_linear(y, -2);
  add_quadratic(x, y, 4);
  trace_.push_back(GateRec{ Gate::Not, a, Bit::zero(), y, 0, false });
  return Bit::var(y);
}

Bit Bqm::emit_gate(Gate kind, Bit a, Bit b) {
  if (kind == Gate::Not) return emit_not(a);

  if (a.is_const() && b.is_const())
    return Bit::constant(gate_truth(kind, a.const_value(), b.const_value()));

  // One constant input simplifies to a wire, a constant, or a NOT gate.
  if (a.is_const() || b.is_const()) {
    bool c = a.is_const() ? a.const_value() : b.const_value();
    Bit other = a.is_const() ? b : a;
    bool const_is_a = a.is_const();
    switch (kind) {
      case Gate::And: return c ? other : Bit::zero();
      case Gate::Nand: return c ? emit_not(other) : Bit::one();
      case Gate::Or: return c ? Bit::one() : other;
      case Gate::Xor: return c ? emit_not(other) : other;
      case Gate::Inhibit:
        // INHIBIT(x, y) = AND(NOT x, y)
        if (const_is_a) return c ? Bit::zero() : other;
        return c ? emit_not(a) : Bit::zero();
      default: break;
    }
  }

  Var x = a.var_id();
  Var y = b.var_id();
  if (x == y) {
    switch (kind) {
      case Gate::And: return a;
      case Gate::Or: return a;
      case Gate::Nand: return emit_not(a);
      case Gate::Xor: return Bit::zero();
      case Gate::Inhibit: return Bit::zero();
      default: break;
    }
  }

  Var z = new_produced_var();
  switch (kind) {
    case Gate::And:
      // AND(x, y) = z: 6z + 2xy - 4xz - 4yz
      add_linear(z, 6);
      add_quadratic(x, y, 2);
      add_quadratic(x, z, -4);
      add_quadratic(y, z, -4);
      break;
    case Gate::Nand:
      // NAND(x, y) = z: 3 - 2x - 2y - 3z + xy + 2xz + 2yz
      add_offset(3);
      add_linear(x, -2);
      add_linear(y, -2);
      add_linear(z, -3);
      add_quadratic(x, y, 1);
      add_quadratic(x, z, 2);
      add_quadratic(y, z, 2);
      break;
    case Gate::Or:
      // OR(x, y) = z: x + y + z + xy - 2xz - 2yz
      add_linear(x, 1);
      add_linear(y, 1);
      add_linear(z, 1);
      add_quadratic(x, y, 1);
      add_quadratic(x, z, -2);
      add_quadratic(y, z, -2);
      break;
    case Gate::Inhibit:
      // AND(NOT x, y) = z: y + z - xy + 2xz - 2yz
      add_linear(y, 1);
      add_linear(z, 1);
      add_quadratic(x, y, -1);
      add_quadratic(x, z, 2);
      add_quadratic(y, z, -2);
      break;
    case Gate::Xor: {
      // XOR(x, y) = z with ancilla a = AND(x, y); penalty (x + y - z - 2a)^2
      Var anc = new_produced_var();
      add_linear(x, 1);
      add_linear(y, 1);
      add_linear(z, 1);
      add_linear(anc, 4);
      add_quadratic(x, y, 2);
      add_quadratic(x, z, -2);
      add_quadratic(y, z, -2);
      add_quadratic(x, anc, -4);
      add_quadratic(y, anc, -4);
      add_quadratic(z, anc, 4);
      trace_.push_back(GateRec{ Gate::Xor, a, b, z, anc, true });
      return Bit::var(z);
    }
    default:
      fail("unexpected gate kind");
  }
  trace_.push_back(GateRec{ kind, a, b, z, 0, false });
  return Bit::var(z);
}

void Bqm::pin_bit(Bit bit, bool value, int64_t strength) {
  if (strength <= 0) fail("pin strength must be positive");
  if (bit.is_const()) {
    if (bit.const_value() != value) add_offset(strength);
    return;
  }
  Var x = bit.var_id();
  if (value) {
    // strength * (1 - x)
    add_offset(strength);
    add_linear(x, -strength);
  } else {
    add_linear(x, strength);
  }
}

int64_t Bqm::evaluate_energy(const Assignment & assignment) const {
  if (assignment.size() < num_vars()) fail("assignment does not cover all variables");
  int64_t e = offset_;
  for (Var v = 0; v < linear_.size(); ++v)
    if (assignment[v]) e += linear_[v];
  for (const auto & [key, c] : quadratic_)
    if (assignment[key.first] && assignment[key.second]) e += c;
  return e;
}

namespace {

uint64_t word_value(const std::vector<Bit> & bits, const Assignment & a) {
  uint64_t v = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    bool bit = bits[i].is_const() ? bits[i].const_value() : a[bits[i].var_id()] != 0;
    if (bit) v |= uint64_t(1) << i;
  }
  return v;
}

void run_trace(const Bqm & model, Assignment & a) {
  auto bit_of = [&](const Bit & b) -> bool {
    return b.is_const() ? b.const_value() : a[b.var_id()] != 0;
  };
  for (const TraceItem & item : model.trace()) {
    if (std::holds_alternative<GateRec>(item)) {
      const GateRec & g = std::get<GateRec>(item);
      bool x = bit_of(g.a);
      bool y = g.kind == Gate::Not ? false : bit_of(g.b);
      a[g.out] = gate_truth(g.kind, x, y) ? 1 : 0;
      if (g.has_anc) a[g.anc] = (x && y) ? 1 : 0; // carry minimizes the XOR penalty
    } else {
      const DivRec & d = std::get<DivRec>(item);
      uint64_t dividend = word_value(d.dividend, a);
      uint64_t divisor = word_value(d.divisor, a);
      uint64_t q, r;
      if (divisor == 0) {
        q = mask_of_width(uint32_t(d.quotient.size()));
        r = dividend;
      } else {
        q = dividend / divisor;
        r = dividend % divisor;
      }
      for (size_t i = 0; i < d.quotient.size(); ++i) a[d.quotient[i]] = (q >> i) & 1;
      for (size_t i = 0; i < d.remainder.size(); ++i) a[d.remainder[i]] = (r >> i) & 1;
    }
  }
}

}  // namespace

Assignment forward_assignment(const Bqm & model, const std::map<Var, int> & free_values) {
  Assignment a(model.num_vars(), 0);
  for (Var v = 0; v < model.num_vars(); ++v) {
    if (model.is_produced(v)) continue;
    auto it = free_values.find(v);
    if (it == free_values.end())
      fail("missing free variable " + std::to_string(v));
    a[v] = it->second ? 1 : 0;
  }
  run_trace(model, a);
  return a;
}

ForwardEvaluator::ForwardEvaluator(const Bqm & model)
    : model_(model), free_vars_(model.free_vars()), scratch_(model.num_vars(), 0) {}

const Assignment & ForwardEvaluator::evaluate(const std::vector<uint8_t> & free_bits) {
  if (free_bits.size() != free_vars_.size()) fail("free bit vector size mismatch");
  for (size_t i = 0; i < free_vars_.size(); ++i) scratch_[free_vars_[i]] = free_bits[i];
  run_trace(model_, scratch_);
  return scratch_;
}

}  // namespace qubomc
