#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "qubomc/bqm.hpp"

using namespace qubomc;

namespace {

bool truth(Gate kind, bool x, bool y) {
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

// Independent penalty check for one freshly emitted gate, enumerating every
// assignment of its variables. For XOR, minimizes over the ancilla.
void check_gate_penalty(Gate kind) {
  int arity = kind == Gate::Not ? 1 : 2;
  Bqm m;
  Var x = m.new_free_var();
  Var y = arity == 2 ? m.new_free_var() : x;
  Bit out = arity == 1 ? m.emit_not(Bit::var(x)) : m.emit_gate(kind, Bit::var(x), Bit::var(y));
  REQUIRE(!out.is_const());

  size_t k = m.num_vars();
  REQUIRE(k <= 4);
  for (uint64_t bits = 0; bits < (uint64_t(1) << k); ++bits) {
    Assignment a(k);
    for (size_t i = 0; i < k; ++i) a[i] = uint8_t((bits >> i) & 1);
    bool xv = a[x] != 0;
    bool yv = arity == 2 ? a[y] != 0 : false;
    bool zv = a[out.var_id()] != 0;
    bool satisfied = truth(kind, xv, yv) == zv;
    if (kind == Gate::Xor) {
      // the relation holds iff some ancilla value reaches penalty 0
      Assignment b = a;
      const GateRec & g = std::get<GateRec>(m.trace().back());
      b[g.anc] = 0;
      int64_t e0 = m.evaluate_energy(b);
      b[g.anc] = 1;
      int64_t e1 = m.evaluate_energy(b);
      int64_t best = std::min(e0, e1);
      if (satisfied)
        CHECK(best == 0);
      else
        CHECK(best >= 1);
    } else {
      int64_t e = m.evaluate_energy(a);
      if (satisfied)
        CHECK(e == 0);
      else
        CHECK(e >= 1);
    }
  }
}

}  // namespace

TEST_CASE("gate penalties are 0 exactly on satisfying assignments") {
  for (Gate g : { Gate::Not, Gate::And, Gate::Nand, Gate::Or, Gate::Inhibit, Gate::Xor })
    check_gate_penalty(g);
}

TEST_CASE("NOT uses the exact polynomial 2 - 2x - 2y + 4xy") {
  Bqm m;
  Var x = m.new_free_var();
  Bit out = m.emit_not(Bit::var(x));
  Var y = out.var_id();
  CHECK(m.offset() == 2);
  CHECK(m.linear()[x] == -2);
  CHECK(m.linear()[y] == -2);
  CHECK(m.quadratic().at({ x, y }) == 4);

  CHECK(m.evaluate_energy({ 0, 1 }) == 0);
  CHECK(m.evaluate_energy({ 1, 0 }) == 0);
  CHECK(m.evaluate_energy({ 0, 0 }) == 2);
  CHECK(m.evaluate_energy({ 1, 1 }) == 2);
}

TEST_CASE("AND uses the exact polynomial 6z + 2xy - 4xz - 4yz") {
  Bqm m;
  Var x = m.new_free_var();
  Var y = m.new_free_var();
  Bit out = m.emit_gate(Gate::And, Bit::var(x), Bit::var(y));
  Var z = out.var_id();
  CHECK(m.offset() == 0);
  CHECK(m.linear()[z] == 6);
  CHECK(m.quadratic().at({ x, y }) == 2);
  CHECK(m.quadratic().at({ x, z }) == -4);
  CHECK(m.quadratic().at({ y, z }) == -4);

  CHECK(m.evaluate_energy({ 1, 1, 1 }) == 0);
  CHECK(m.evaluate_energy({ 1, 1, 0 }) == 2);
}

TEST_CASE("constant folding allocates nothing") {
  Bqm m;
  for (Gate g : { Gate::And, Gate::Nand, Gate::Or, Gate::Inhibit, Gate::Xor }) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        Bit out = m.emit_gate(g, Bit::constant(a), Bit::constant(b));
        REQUIRE(out.is_const());
        CHECK(out.const_value() == truth(g, a, b));
      }
    }
  }
  CHECK(m.emit_not(Bit::zero()) == Bit::one());
  CHECK(m.num_vars() == 0);
  CHECK(m.offset() == 0);
  CHECK(m.evaluate_energy({}) == 0);
}

TEST_CASE("one constant input simplifies to a wire, constant, or NOT") {
  Bqm m;
  Var x = m.new_free_var();
  Bit vx = Bit::var(x);
  CHECK(m.emit_gate(Gate::And, Bit::one(), vx) == vx);
  CHECK(m.emit_gate(Gate::And, vx, Bit::zero()) == Bit::zero());
  CHECK(m.emit_gate(Gate::Or, Bit::zero(), vx) == vx);
  CHECK(m.emit_gate(Gate::Or, vx, Bit::one()) == Bit::one());
  CHECK(m.emit_gate(Gate::Xor, Bit::zero(), vx) == vx);
  CHECK(m.emit_gate(Gate::Inhibit, Bit::zero(), vx) == vx);
  CHECK(m.emit_gate(Gate::Inhibit, Bit::one(), vx) == Bit::zero());
  CHECK(m.emit_gate(Gate::Inhibit, vx, Bit::zero()) == Bit::zero());
  CHECK(m.num_vars() == 1); // nothing emitted so far
  Bit n = m.emit_gate(Gate::Xor, Bit::one(), vx);
  CHECK(m.num_vars() == 2); // one NOT gate
  CHECK(!n.is_const());
}

TEST_CASE("pin_bit examples") {
  Bqm m;
  SUBCASE("pinning a satisfied constant is a no-op") {
    m.pin_bit(Bit::one(), true);
    CHECK(m.offset() == 0);
  }
  SUBCASE("pinning a contradicted constant raises the offset") {
    m.pin_bit(Bit::zero(), true, 1);
    CHECK(m.offset() == 1);
  }
  SUBCASE("pinning a variable adds the linear penalty") {
    Var x = m.new_free_var();
    m.pin_bit(Bit::var(x), true);
    CHECK(m.offset() == 1);
    CHECK(m.linear()[x] == -1);
    CHECK(m.evaluate_energy({ 1 }) == 0);
    CHECK(m.evaluate_energy({ 0 }) == 1);
  }
}

TEST_CASE("forward assignment computes gate outputs") {
  Bqm m;
  Var x = m.new_free_var();
  Var y = m.new_free_var();
  Bit out = m.emit_gate(Gate::And, Bit::var(x), Bit::var(y));
  Assignment a = forward_assignment(m, { { x, 1 }, { y, 1 } });
  CHECK(a[out.var_id()] == 1);
  CHECK(m.evaluate_energy(a) == 0);
  Assignment b = forward_assignment(m, { { x, 1 }, { y, 0 } });
  CHECK(b[out.var_id()] == 0);
  CHECK(m.evaluate_energy(b) == 0);
  CHECK_THROWS_WITH_AS(forward_assignment(m, { { x, 1 } }), doctest::Contains("missing free"),
                       QubomcError);
}

TEST_CASE("additivity: total energy is the sum of per-gate penalties plus pins") {
  Bqm m;
  Var a = m.new_free_var();
  Var b = m.new_free_var();
  Bit n1 = m.emit_gate(Gate::Xor, Bit::var(a), Bit::var(b));
  Bit n2 = m.emit_gate(Gate::Or, n1, Bit::var(a));
  m.pin_bit(n2, true, 3);

  auto xor_p = [](int x, int y, int z, int anc) {
    int s = x + y - z - 2 * anc;
    return s * s;
  };
  auto or_p = [](int x, int y, int z) { return x + y + z + x * y - 2 * x * z - 2 * y * z; };

  const GateRec & gx = std::get<GateRec>(m.trace()[0]);
  const GateRec & go = std::get<GateRec>(m.trace()[1]);
  size_t k = m.num_vars();
  for (uint64_t bits = 0; bits < (uint64_t(1) << k); ++bits) {
    Assignment v(k);
    for (size_t i = 0; i < k; ++i) v[i] = uint8_t((bits >> i) & 1);
    int64_t expect = xor_p(v[a], v[b], v[gx.out], v[gx.anc]) +
                     or_p(v[gx.out], v[a], v[go.out]) + 3 * (1 - v[go.out]);
    CHECK(m.evaluate_energy(v) == expect);
    CHECK(m.evaluate_energy(v) >= 0);
  }
}

TEST_CASE("identical construction sequences produce identical models") {
  auto build = [] {
    Bqm m;
    Var a = m.new_free_var();
    Var b = m.new_free_var();
    Bit x = m.emit_gate(Gate::Nand, Bit::var(a), Bit::var(b));
    Bit y = m.emit_gate(Gate::Xor, x, Bit::var(a));
    m.pin_bit(y, false, 2);
    return m;
  };
  Bqm m1 = build();
  Bqm m2 = build();
  CHECK(m1.num_vars() == m2.num_vars());
  CHECK(m1.offset() == m2.offset());
  CHECK(m1.linear() == m2.linear());
  CHECK(m1.quadratic() == m2.quadratic());
}

TEST_CASE("energy evaluation requires full coverage") {
  Bqm m;
  m.new_free_var();
  CHECK_THROWS_WITH_AS(m.evaluate_energy({}), doctest::Contains("cover"), QubomcError);
}

TEST_CASE("same-variable binary gates simplify without self-pairing") {
  Bqm m;
  Var x = m.new_free_var();
  Bit vx = Bit::var(x);
  CHECK(m.emit_gate(Gate::And, vx, vx) == vx);
  CHECK(m.emit_gate(Gate::Or, vx, vx) == vx);
  CHECK(m.emit_gate(Gate::Xor, vx, vx) == Bit::zero());
  CHECK(m.emit_gate(Gate::Inhibit, vx, vx) == Bit::zero());
  CHECK(m.num_vars() == 1);
  Bit n = m.emit_gate(Gate::Nand, vx, vx);
  CHECK(!n.is_const()); // NOT x
  for (const auto & [key, c] : m.quadratic()) CHECK(key.first != key.second);
}
