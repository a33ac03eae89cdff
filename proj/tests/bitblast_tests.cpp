#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qubomc/bitblast.hpp"
#include "qubomc/btor2.hpp"

using namespace qubomc;
using btor2::NodeKind;

namespace {

uint64_t word_value(const Word & w, const Assignment & a) {
  uint64_t v = 0;
  for (size_t i = 0; i < w.bits.size(); ++i) {
    bool set = w.bits[i].is_const() ? w.bits[i].const_value() : a[w.bits[i].var_id()] != 0;
    if (set) v |= uint64_t(1) << i;
  }
  return v;
}

std::map<Var, int> word_inputs(const Word & w, uint64_t value) {
  std::map<Var, int> m;
  for (size_t i = 0; i < w.bits.size(); ++i)
    if (!w.bits[i].is_const()) m[w.bits[i].var_id()] = int((value >> i) & 1);
  return m;
}

void merge(std::map<Var, int> & into, const std::map<Var, int> & from) {
  for (auto & [k, v] : from) into[k] = v;
}

// Test-side trace walk: computes gate outputs functionally but leaves the
// division witnesses at their seeded values, so wrong (q, r) probes can be
// scored. (forward_assignment would overwrite them.)
Assignment complete_gates(const Bqm & m, const std::map<Var, int> & seed) {
  Assignment a(m.num_vars(), 0);
  for (auto & [v, val] : seed) a[v] = uint8_t(val);
  auto bit_of = [&](const Bit & b) { return b.is_const() ? b.const_value() : a[b.var_id()] != 0; };
  for (const TraceItem & item : m.trace()) {
    if (!std::holds_alternative<GateRec>(item)) continue;
    const GateRec & g = std::get<GateRec>(item);
    bool x = bit_of(g.a);
    bool y = g.kind == Gate::Not ? false : bit_of(g.b);
    bool out;
    switch (g.kind) {
      case Gate::Not: out = !x; break;
      case Gate::And: out = x && y; break;
      case Gate::Nand: out = !(x && y); break;
      case Gate::Or: out = x || y; break;
      case Gate::Inhibit: out = !x && y; break;
      case Gate::Xor: out = x != y; break;
      default: out = false; break;
    }
    a[g.out] = out ? 1 : 0;
    if (g.has_anc) a[g.anc] = (x && y) ? 1 : 0;
  }
  return a;
}

}  // namespace

TEST_CASE("eq of equal constant words folds to one with no variables") {
  Bqm m;
  Bit out = blast::eq(m, const_word(5, 3), const_word(5, 3));
  CHECK(out == Bit::one());
  CHECK(m.num_vars() == 0);
  CHECK(blast::eq(m, const_word(5, 3), const_word(4, 3)) == Bit::zero());
}

TEST_CASE("add of a free word and constant 1 matches the reference") {
  Bqm m;
  Word x = free_word(m, 3);
  Word sum = blast::add(m, x, const_word(1, 3));
  for (uint64_t v = 0; v < 8; ++v) {
    Assignment a = forward_assignment(m, word_inputs(x, v));
    CHECK(word_value(sum, a) == ((v + 1) & 7));
    CHECK(m.evaluate_energy(a) == 0);
  }
  Assignment a3 = forward_assignment(m, word_inputs(x, 3));
  CHECK(word_value(sum, a3) == 4);
}

TEST_CASE("slice shares bits and allocates nothing") {
  Bqm m;
  Word x = free_word(m, 32);
  size_t before = m.num_vars();
  Word s = blast::slice(x, 2, 0);
  CHECK(m.num_vars() == before);
  CHECK(s.width() == 3);
  CHECK(s.bits[0] == x.bits[0]);
  CHECK(s.bits[2] == x.bits[2]);
  CHECK_THROWS_WITH_AS(blast::slice(x, 32, 0), doctest::Contains("slice bounds"), QubomcError);
}

TEST_CASE("uext appends constant zero bits") {
  Bqm m;
  Word x = free_word(m, 4);
  Word e = blast::uext(x, 4);
  CHECK(e.width() == 8);
  CHECK(e.bits[7] == Bit::zero());
  CHECK(m.num_vars() == 4);
}

TEST_CASE("word operators match simulator semantics exhaustively (w = 2..4)") {
  using Binary = std::pair<NodeKind, Word (*)(Bqm &, const Word &, const Word &)>;
  const Binary word_ops[] = {
    { NodeKind::Add, blast::add }, { NodeKind::Sub, blast::sub },
    { NodeKind::Mul, blast::mul }, { NodeKind::And, blast::and_word },
  };
  using Compare = std::pair<NodeKind, Bit (*)(Bqm &, const Word &, const Word &)>;
  const Compare cmp_ops[] = {
    { NodeKind::Ult, blast::ult },   { NodeKind::Ulte, blast::ulte },
    { NodeKind::Ugt, blast::ugt },   { NodeKind::Ugte, blast::ugte },
    { NodeKind::Eq, blast::eq },     { NodeKind::Neq, blast::neq },
  };

  for (uint32_t w = 2; w <= 4; ++w) {
    uint64_t count = uint64_t(1) << w;
    for (const auto & [kind, fn] : word_ops) {
      Bqm m;
      Word x = free_word(m, w);
      Word y = free_word(m, w);
      Word out = fn(m, x, y);
      for (uint64_t a = 0; a < count; ++a) {
        for (uint64_t b = 0; b < count; ++b) {
          std::map<Var, int> in = word_inputs(x, a);
          merge(in, word_inputs(y, b));
          Assignment full = forward_assignment(m, in);
          CHECK(word_value(out, full) == btor2::eval_binop(kind, w, a, b));
          CHECK(m.evaluate_energy(full) == 0);
        }
      }
    }
    for (const auto & [kind, fn] : cmp_ops) {
      Bqm m;
      Word x = free_word(m, w);
      Word y = free_word(m, w);
      Bit out = fn(m, x, y);
      for (uint64_t a = 0; a < count; ++a) {
        for (uint64_t b = 0; b < count; ++b) {
          std::map<Var, int> in = word_inputs(x, a);
          merge(in, word_inputs(y, b));
          Assignment full = forward_assignment(m, in);
          uint64_t got = out.is_const() ? out.const_value() : full[out.var_id()];
          CHECK(got == btor2::eval_binop(kind, w, a, b));
        }
      }
    }
  }
}

TEST_CASE("inc and dec match modular add and sub by one") {
  for (uint32_t w = 2; w <= 4; ++w) {
    Bqm m;
    Word x = free_word(m, w);
    Word up = blast::inc(m, x);
    Word down = blast::dec(m, x);
    for (uint64_t a = 0; a < (uint64_t(1) << w); ++a) {
      Assignment full = forward_assignment(m, word_inputs(x, a));
      CHECK(word_value(up, full) == ((a + 1) & mask_of_width(w)));
      CHECK(word_value(down, full) == ((a - 1) & mask_of_width(w)));
    }
  }
}

TEST_CASE("ite multiplexes per bit") {
  Bqm m;
  Var c = m.new_free_var();
  Word x = free_word(m, 3);
  Word y = free_word(m, 3);
  Word out = blast::ite(m, Bit::var(c), x, y);
  for (int cv = 0; cv < 2; ++cv) {
    for (uint64_t a = 0; a < 8; ++a) {
      for (uint64_t b = 0; b < 8; ++b) {
        std::map<Var, int> in = word_inputs(x, a);
        merge(in, word_inputs(y, b));
        in[c] = cv;
        Assignment full = forward_assignment(m, in);
        CHECK(word_value(out, full) == (cv ? a : b));
      }
    }
  }
}

TEST_CASE("udiv/urem fold constant operands") {
  Bqm m;
  auto [q, r] = blast::udiv_urem(m, const_word(7, 4), const_word(2, 4));
  CHECK(q.all_const());
  CHECK(r.all_const());
  CHECK(q.const_value() == 3);
  CHECK(r.const_value() == 1);
  CHECK(m.num_vars() == 0);
}

TEST_CASE("udiv/urem constraints pick out the exact quotient and remainder") {
  // free dividend, constant divisor 3, width 3: for each dividend value the
  // unique zero-energy (q, r) completion is (x / 3, x % 3)
  Bqm m;
  Word x = free_word(m, 3);
  auto [q, r] = blast::udiv_urem(m, x, const_word(3, 3));
  for (uint64_t a = 0; a < 8; ++a) {
    int zero_count = 0;
    for (uint64_t qv = 0; qv < 8; ++qv) {
      for (uint64_t rv = 0; rv < 8; ++rv) {
        std::map<Var, int> in = word_inputs(x, a);
        merge(in, word_inputs(q, qv));
        merge(in, word_inputs(r, rv));
        int64_t e = m.evaluate_energy(complete_gates(m, in));
        bool expect_zero = (qv * 3 + rv == a) && (rv < 3);
        if (expect_zero) {
          CHECK(e == 0);
          ++zero_count;
        } else {
          CHECK(e >= 1);
        }
      }
    }
    CHECK(zero_count == 1);
  }

  // the functional forward pass lands on the same completion
  for (uint64_t a = 0; a < 8; ++a) {
    Assignment full = forward_assignment(m, word_inputs(x, a));
    CHECK(word_value(q, full) == a / 3);
    CHECK(word_value(r, full) == a % 3);
    CHECK(m.evaluate_energy(full) == 0);
  }
}

TEST_CASE("udiv/urem by constant zero is infeasible") {
  Bqm m;
  Word x = free_word(m, 3);
  blast::udiv_urem(m, x, const_word(0, 3));
  // every assignment of the free variables keeps energy >= 1
  ForwardEvaluator eval(m);
  size_t k = eval.free_vars().size();
  int64_t best = -1;
  for (uint64_t bits = 0; bits < (uint64_t(1) << k); ++bits) {
    std::vector<uint8_t> free_bits(k);
    for (size_t i = 0; i < k; ++i) free_bits[i] = uint8_t((bits >> i) & 1);
    int64_t e = m.evaluate_energy(eval.evaluate(free_bits));
    if (best < 0 || e < best) best = e;
  }
  CHECK(best >= 1);
}

TEST_CASE("memory reads select the addressed word") {
  Bqm m;
  MemoryImage image;
  for (uint64_t a = 0; a < 4; ++a) image.push_back({ a, const_word((a + 1) * 10, 8) });
  Word addr = free_word(m, 2);
  Word out = blast::read(m, image, addr);
  for (uint64_t a = 0; a < 4; ++a) {
    Assignment full = forward_assignment(m, word_inputs(addr, a));
    CHECK(word_value(out, full) == (a + 1) * 10);
  }
}

TEST_CASE("constant-address memory access collapses") {
  Bqm m;
  MemoryImage image;
  for (uint64_t a = 0; a < 4; ++a) image.push_back({ a, const_word(a, 8) });
  size_t before = m.num_vars();
  Word r = blast::read(m, image, const_word(2, 2));
  CHECK(m.num_vars() == before);
  CHECK(r.const_value() == 2);

  Word value = free_word(m, 8);
  before = m.num_vars();
  MemoryImage written = blast::write(m, image, const_word(1, 2), value);
  CHECK(m.num_vars() == before); // no comparator variables
  CHECK(written[1].word.bits == value.bits);
  CHECK(written[0].word.bits == image[0].word.bits);
}

TEST_CASE("symbolic write touches every entry through a mux") {
  Bqm m;
  MemoryImage image;
  for (uint64_t a = 0; a < 4; ++a) image.push_back({ a, const_word(0, 4) });
  Word addr = free_word(m, 2);
  Word value = free_word(m, 4);
  MemoryImage written = blast::write(m, image, addr, value);
  for (uint64_t av = 0; av < 4; ++av) {
    for (uint64_t vv = 0; vv < 16; ++vv) {
      std::map<Var, int> in = word_inputs(addr, av);
      merge(in, word_inputs(value, vv));
      Assignment full = forward_assignment(m, in);
      for (uint64_t p = 0; p < 4; ++p)
        CHECK(word_value(written[p].word, full) == (p == av ? vv : 0));
    }
  }
}

TEST_CASE("reads outside the image are constant zero") {
  Bqm m;
  MemoryImage image{ { 0, const_word(9, 4) } };
  Word r = blast::read(m, image, const_word(3, 2));
  CHECK(r.all_const());
  CHECK(r.const_value() == 0);
}

TEST_CASE("qubit budget stays within the documented envelopes") {
  // linear ops <= 8w, mul and division <= 8w^2 + 8w, memory <= 8mw per call
  for (uint32_t w = 2; w <= 8; w += 3) {
    Bqm m;
    Word x = free_word(m, w);
    Word y = free_word(m, w);
    size_t base = m.num_vars();
    blast::add(m, x, y);
    CHECK(m.num_vars() - base <= 8 * w);
    base = m.num_vars();
    blast::ult(m, x, y);
    CHECK(m.num_vars() - base <= 8 * w);
    base = m.num_vars();
    blast::eq(m, x, y);
    CHECK(m.num_vars() - base <= 8 * w);
    base = m.num_vars();
    blast::mul(m, x, y);
    CHECK(m.num_vars() - base <= 8 * w * w + 8 * w);
    base = m.num_vars();
    blast::udiv_urem(m, x, y);
    CHECK(m.num_vars() - base <= 8 * (2 * w) * (2 * w) + 16 * w);
  }
  // memory: m entries, width w, symbolic address
  Bqm m;
  uint32_t w = 4, entries = 8;
  MemoryImage image;
  for (uint64_t a = 0; a < entries; ++a) image.push_back({ a, const_word(a, w) });
  Word addr = free_word(m, 3);
  size_t base = m.num_vars();
  blast::read(m, image, addr);
  CHECK(m.num_vars() - base <= 8 * entries * w);
}
