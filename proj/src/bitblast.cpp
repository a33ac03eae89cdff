#include "qubomc/bitblast.hpp"

#include <algorithm>

namespace qubomc {

namespace {

[[noreturn]] void fail(const std::string & msg) { throw QubomcError("bitblast: " + msg); }

void require_same_width(const Word & a, const Word & b, const char * op) {
  if (a.width() != b.width())
    fail(std::string(op) + ": operand widths differ (" + std::to_string(a.width()) +
         " vs " + std::to_string(b.width()) + ")");
}

}  // namespace

bool Word::all_const() const {
  return std::all_of(bits.begin(), bits.end(), [](const Bit & b) { return b.is_const(); });
}

uint64_t Word::const_value() const {
  uint64_t v = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i].is_const()) fail("const_value on a non-constant word");
    if (bits[i].const_value()) v |= uint64_t(1) << i;
  }
  return v;
}

Word const_word(uint64_t value, uint32_t width) {
  Word w;
  w.bits.reserve(width);
  for (uint32_t i = 0; i < width; ++i)
    w.bits.push_back(Bit::constant(i < 64 && ((value >> i) & 1)));
  return w;
}

Word free_word(Bqm & model, uint32_t width) {
  Word w;
  w.bits.reserve(width);
  for (uint32_t i = 0; i < width; ++i) w.bits.push_back(Bit::var(model.new_free_var()));
  return w;
}

namespace blast {

AddResult add_full(Bqm & m, const Word & a, const Word & b, Bit carry_in) {
  require_same_width(a, b, "add");
  Word sum;
  sum.bits.reserve(a.width());
  Bit carry = carry_in;
  for (uint32_t i = 0; i < a.width(); ++i) {
    Bit half = m.emit_gate(Gate::Xor, a.bits[i], b.bits[i]);
    sum.bits.push_back(m.emit_gate(Gate::Xor, half, carry));
    Bit c1 = m.emit_gate(Gate::And, a.bits[i], b.bits[i]);
    Bit c2 = m.emit_gate(Gate::And, half, carry);
    carry = m.emit_gate(Gate::Or, c1, c2);
  }
  return { std::move(sum), carry };
}

Word add(Bqm & m, const Word & a, const Word & b) {
  return add_full(m, a, b, Bit::zero()).sum;
}

Word not_word(Bqm & m, const Word & a) {
  Word out;
  out.bits.reserve(a.width());
  for (const Bit & bit : a.bits) out.bits.push_back(m.emit_not(bit));
  return out;
}

Word sub(Bqm & m, const Word & a, const Word & b) {
  // a - b = a + ~b + 1
  return add_full(m, a, not_word(m, b), Bit::one()).sum;
}

Word inc(Bqm & m, const Word & a) { return add(m, a, const_word(1, a.width())); }

Word dec(Bqm & m, const Word & a) { return sub(m, a, const_word(1, a.width())); }

Word and_word(Bqm & m, const Word & a, const Word & b) {
  require_same_width(a, b, "and");
  Word out;
  out.bits.reserve(a.width());
  for (uint32_t i = 0; i < a.width(); ++i)
    out.bits.push_back(m.emit_gate(Gate::And, a.bits[i], b.bits[i]));
  return out;
}

Bit ult(Bqm & m, const Word & a, const Word & b) {
  require_same_width(a, b, "ult");
  // a < b iff a + ~b + 1 borrows, i.e. the carry out is 0.
  Bit carry = add_full(m, a, not_word(m, b), Bit::one()).carry_out;
  return m.emit_not(carry);
}

Bit ulte(Bqm & m, const Word & a, const Word & b) { return m.emit_not(ult(m, b, a)); }
Bit ugt(Bqm & m, const Word & a, const Word & b) { return ult(m, b, a); }
Bit ugte(Bqm & m, const Word & a, const Word & b) { return m.emit_not(ult(m, a, b)); }

Bit eq(Bqm & m, const Word & a, const Word & b) {
  require_same_width(a, b, "eq");
  Bit acc = Bit::one();
  for (uint32_t i = 0; i < a.width(); ++i) {
    Bit diff = m.emit_gate(Gate::Xor, a.bits[i], b.bits[i]);
    acc = m.emit_gate(Gate::And, acc, m.emit_not(diff));
  }
  return acc;
}

Bit neq(Bqm & m, const Word & a, const Word & b) { return m.emit_not(eq(m, a, b)); }

Bit mux(Bqm & m, Bit c, Bit x, Bit y) {
  if (x == y) return x;
  if (c.is_const()) return c.const_value() ? x : y;
  if (x.is_const() && y.is_const()) {
    // distinct constants: mux(c, 1, 0) = c, mux(c, 0, 1) = NOT c
    return x.const_value() ? c : m.emit_not(c);
  }
  Bit t = m.emit_gate(Gate::And, c, x);
  Bit e = m.emit_gate(Gate::Inhibit, c, y);
  return m.emit_gate(Gate::Or, t, e);
}

Word ite(Bqm & m, Bit c, const Word & x, const Word & y) {
  require_same_width(x, y, "ite");
  Word out;
  out.bits.reserve(x.width());
  for (uint32_t i = 0; i < x.width(); ++i) out.bits.push_back(mux(m, c, x.bits[i], y.bits[i]));
  return out;
}

Word uext(const Word & a, uint32_t amount) {
  Word out = a;
  for (uint32_t i = 0; i < amount; ++i) out.bits.push_back(Bit::zero());
  return out;
}

Word slice(const Word & a, uint32_t u, uint32_t l) {
  if (l > u || u >= a.width()) fail("slice bounds out of range");
  Word out;
  out.bits.assign(a.bits.begin() + l, a.bits.begin() + u + 1);
  return out;
}

Word mul(Bqm & m, const Word & a, const Word & b) {
  require_same_width(a, b, "mul");
  uint32_t w = a.width();
  // Shift-and-add over w partial products; bits beyond w are discarded
  // (modular semantics).
  Word acc;
  acc.bits.reserve(w);
  for (uint32_t i = 0; i < w; ++i) acc.bits.push_back(m.emit_gate(Gate::And, a.bits[i], b.bits[0]));
  for (uint32_t j = 1; j < w; ++j) {
    Word addend, upper;
    for (uint32_t i = j; i < w; ++i) {
      addend.bits.push_back(m.emit_gate(Gate::And, a.bits[i - j], b.bits[j]));
      upper.bits.push_back(acc.bits[i]);
    }
    Word summed = add(m, upper, addend);
    for (uint32_t i = j; i < w; ++i) acc.bits[i] = summed.bits[i - j];
  }
  return acc;
}

std::pair<Word, Word> udiv_urem(Bqm & m, const Word & dividend, const Word & divisor) {
  require_same_width(dividend, divisor, "udiv");
  uint32_t w = dividend.width();

  if (dividend.all_const() && divisor.all_const() && divisor.const_value() != 0) {
    uint64_t a = dividend.const_value();
    uint64_t b = divisor.const_value();
    return { const_word(a / b, w), const_word(a % b, w) };
  }

  // The witnesses look free to a solver but are computed by the division
  // record during forward evaluation.
  Word quotient, remainder;
  for (uint32_t i = 0; i < w; ++i) quotient.bits.push_back(Bit::var(m.new_var(true)));
  for (uint32_t i = 0; i < w; ++i) remainder.bits.push_back(Bit::var(m.new_var(true)));

  DivRec rec;
  rec.dividend = dividend.bits;
  rec.divisor = divisor.bits;
  for (const Bit & bit : quotient.bits) rec.quotient.push_back(bit.var_id());
  for (const Bit & bit : remainder.bits) rec.remainder.push_back(bit.var_id());
  m.record_div(std::move(rec));

  // quotient * divisor + remainder computed exactly at width 2w, then the
  // upper bits are pinned to 0 and the lower bits pinned equal to the
  // dividend.
  Word q2 = uext(quotient, w);
  Word b2 = uext(divisor, w);
  Word r2 = uext(remainder, w);
  Word product = mul(m, q2, b2);
  Word total = add(m, product, r2);
  for (uint32_t i = w; i < 2 * w; ++i) m.pin_bit(total.bits[i], false);
  for (uint32_t i = 0; i < w; ++i) {
    Bit diff = m.emit_gate(Gate::Xor, total.bits[i], dividend.bits[i]);
    m.pin_bit(diff, false);
  }
  m.pin_bit(ult(m, remainder, divisor), true);

  return { std::move(quotient), std::move(remainder) };
}

Word read(Bqm & m, const MemoryImage & memory, const Word & address) {
  if (address.all_const()) {
    uint64_t a = address.const_value();
    for (const MemEntry & e : memory)
      if (e.address == a) return e.word;
    // Unmapped constant address reads as zero (memory is zeroed).
    uint32_t w = memory.empty() ? 1 : memory.front().word.width();
    return const_word(0, w);
  }
  if (memory.empty()) fail("read from an empty memory image with symbolic address");
  uint32_t w = memory.front().word.width();
  Word acc = const_word(0, w);
  for (const MemEntry & e : memory) {
    Bit hit = eq(m, address, const_word(e.address, address.width()));
    acc = ite(m, hit, e.word, acc);
  }
  return acc;
}

MemoryImage write(Bqm & m, const MemoryImage & memory, const Word & address,
                  const Word & value) {
  MemoryImage out = memory;
  if (address.all_const()) {
    uint64_t a = address.const_value();
    for (MemEntry & e : out) {
      if (e.address == a) {
        e.word = value;
        return out;
      }
    }
    // New constant address: insert keeping ascending order.
    MemEntry entry{ a, value };
    out.insert(std::upper_bound(out.begin(), out.end(), entry,
                                [](const MemEntry & x, const MemEntry & y) {
                                  return x.address < y.address;
                                }),
               std::move(entry));
    return out;
  }
  for (MemEntry & e : out) {
    Bit hit = eq(m, address, const_word(e.address, address.width()));
    e.word = ite(m, hit, value, e.word);
  }
  return out;
}

}  // namespace blast

}  // namespace qubomc
