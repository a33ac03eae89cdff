#ifndef QUBOMC_BITBLAST_HPP
#define QUBOMC_BITBLAST_HPP

#include <cstdint>
#include <vector>

#include "qubomc/bqm.hpp"

namespace qubomc {

// Bit-blasted value of a bitvector node. Bit 0 is least significant.
struct Word {
  std::vector<Bit> bits;

  uint32_t width() const { return uint32_t(bits.size()); }
  bool all_const() const;
  uint64_t const_value() const; // requires all_const()
};

Word const_word(uint64_t value, uint32_t width);
Word free_word(Bqm & model, uint32_t width);

// Expanded array contents: one word per address, ascending and distinct.
struct MemEntry {
  uint64_t address = 0;
  Word word;
};
using MemoryImage = std::vector<MemEntry>;

namespace blast {

struct AddResult {
  Word sum;
  Bit carry_out;
};

AddResult add_full(Bqm & m, const Word & a, const Word & b, Bit carry_in);

Word add(Bqm & m, const Word & a, const Word & b);
Word sub(Bqm & m, const Word & a, const Word & b);
Word inc(Bqm & m, const Word & a);
Word dec(Bqm & m, const Word & a);
Word mul(Bqm & m, const Word & a, const Word & b);
Word and_word(Bqm & m, const Word & a, const Word & b);
Word not_word(Bqm & m, const Word & a);

Bit ult(Bqm & m, const Word & a, const Word & b);
Bit ulte(Bqm & m, const Word & a, const Word & b);
Bit ugt(Bqm & m, const Word & a, const Word & b);
Bit ugte(Bqm & m, const Word & a, const Word & b);
Bit eq(Bqm & m, const Word & a, const Word & b);
Bit neq(Bqm & m, const Word & a, const Word & b);

// Per-bit mux: (c AND x) OR (NOT c AND y).
Bit mux(Bqm & m, Bit c, Bit x, Bit y);
Word ite(Bqm & m, Bit c, const Word & x, const Word & y);

Word uext(const Word & a, uint32_t amount);          // zero cost
Word slice(const Word & a, uint32_t u, uint32_t l);  // zero cost, shares bits

// Quotient and remainder as free words constrained by
// quotient * divisor + remainder = dividend (computed at doubled width with
// the overflow bits pinned to 0) and remainder < divisor pinned true. With a
// constant zero divisor the constraints are unsatisfiable.
std::pair<Word, Word> udiv_urem(Bqm & m, const Word & dividend, const Word & divisor);

// Memory access over an expanded image. A fully constant address collapses
// to a direct access with no comparator variables; a symbolic address costs
// one equality comparator and one word mux per entry. Reads of addresses
// outside the image yield constant 0 (zeroed memory); writes outside the
// image are dropped.
Word read(Bqm & m, const MemoryImage & memory, const Word & address);
MemoryImage write(Bqm & m, const MemoryImage & memory, const Word & address,
                  const Word & value);

}  // namespace blast

}  // namespace qubomc

#endif
