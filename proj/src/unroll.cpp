#include "qubomc/unroll.hpp"

#include <algorithm>

namespace qubomc {

using btor2::Model;
using btor2::Nid;
using btor2::Node;
using btor2::NodeKind;

namespace {

[[noreturn]] void fail(const std::string & msg) { throw QubomcError("unroll: " + msg); }

// Blasts combinational expressions over one frame; the memo lives in the
// frame so all users of a frame share it.
class FrameBlaster {
 public:
  FrameBlaster(const Model & model, Bqm & bqm, Frame & frame)
      : model_(model), bqm_(bqm), frame_(frame) {}

  const StateValue & blast(Nid nid) {
    auto it = frame_.memo.find(nid);
    if (it != frame_.memo.end()) return it->second;
    StateValue v = compute(model_.node(nid));
    return frame_.memo.emplace(nid, std::move(v)).first->second;
  }

  Word blast_word(Nid nid) {
    const StateValue & v = blast(nid);
    if (!std::holds_alternative<Word>(v)) fail("expected a bitvector node");
    return std::get<Word>(v);
  }

  Bit blast_bit(Nid nid) {
    Word w = blast_word(nid);
    if (w.width() != 1) fail("expected a 1-bit node");
    return w.bits[0];
  }

 private:
  StateValue compute(const Node & node) {
    uint32_t w = node.sort_info.width;
    switch (node.kind) {
      case NodeKind::Zero: return const_word(0, w);
      case NodeKind::One: return const_word(1, w);
      case NodeKind::Constd:
        return const_word(uint64_t(node.literals[0]) & mask_of_width(w), w);
      case NodeKind::Const:
      case NodeKind::Consth: {
        // Reuse the simulator's constant semantics via a 0-ary evaluation.
        uint64_t bits = 0;
        int base = node.kind == NodeKind::Const ? 2 : 16;
        for (char c : node.constant) {
          int digit = c <= '9' ? c - '0' : (c | 0x20) - 'a' + 10;
          bits = bits * base + uint64_t(digit);
        }
        return const_word(bits & mask_of_width(w), w);
      }
      case NodeKind::State: {
        auto it = frame_.state_values.find(node.nid);
        if (it == frame_.state_values.end())
          fail("state nid " + std::to_string(node.nid) + " has no frame value");
        return it->second;
      }
      case NodeKind::Input: {
        auto it = frame_.input_words.find(node.nid);
        if (it != frame_.input_words.end()) return it->second;
        Word fresh = free_word(bqm_, w);
        frame_.input_words.emplace(node.nid, fresh);
        return fresh;
      }
      case NodeKind::Add: return blast::add(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1]));
      case NodeKind::Sub: return blast::sub(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1]));
      case NodeKind::Mul: return blast::mul(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1]));
      case NodeKind::Udiv:
        return blast::udiv_urem(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1])).first;
      case NodeKind::Urem:
        return blast::udiv_urem(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1])).second;
      case NodeKind::Ult: return one_bit(blast::ult(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1])));
      case NodeKind::Ulte: return one_bit(blast::ulte(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1])));
      case NodeKind::Ugt: return one_bit(blast::ugt(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1])));
      case NodeKind::Ugte: return one_bit(blast::ugte(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1])));
      case NodeKind::Eq: return one_bit(blast::eq(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1])));
      case NodeKind::Neq: return one_bit(blast::neq(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1])));
      case NodeKind::And: return blast::and_word(bqm_, blast_word(node.operands[0]), blast_word(node.operands[1]));
      case NodeKind::Not: return blast::not_word(bqm_, blast_word(node.operands[0]));
      case NodeKind::Inc: return blast::inc(bqm_, blast_word(node.operands[0]));
      case NodeKind::Dec: return blast::dec(bqm_, blast_word(node.operands[0]));
      case NodeKind::Ite:
        return blast::ite(bqm_, blast_bit(node.operands[0]), blast_word(node.operands[1]),
                          blast_word(node.operands[2]));
      case NodeKind::Uext: return blast::uext(blast_word(node.operands[0]), uint32_t(node.literals[0]));
      case NodeKind::Slice:
        return blast::slice(blast_word(node.operands[0]), uint32_t(node.literals[0]),
                            uint32_t(node.literals[1]));
      case NodeKind::Read: {
        const StateValue & mem = blast(node.operands[0]);
        if (!std::holds_alternative<MemoryImage>(mem)) fail("read expects an array node");
        return blast::read(bqm_, std::get<MemoryImage>(mem), blast_word(node.operands[1]));
      }
      case NodeKind::Write: {
        const StateValue & mem = blast(node.operands[0]);
        if (!std::holds_alternative<MemoryImage>(mem)) fail("write expects an array node");
        return blast::write(bqm_, std::get<MemoryImage>(mem), blast_word(node.operands[1]),
                            blast_word(node.operands[2]));
      }
      default:
        fail(std::string("cannot blast node kind '") + btor2::node_kind_name(node.kind) + "'");
    }
  }

  static StateValue one_bit(Bit b) {
    Word w;
    w.bits.push_back(b);
    return w;
  }

  const Model & model_;
  Bqm & bqm_;
  Frame & frame_;
};

bool is_pc_flag(const Node & node) {
  return node.symbol.rfind("pc-", 0) == 0;
}

void blast_bads(const Model & model, Bqm & bqm, Frame & frame) {
  FrameBlaster blaster(model, bqm, frame);
  for (Nid b : model.bads)
    frame.bad_bits.emplace(b, blaster.blast_bit(model.node(b).operands[0]));
}

FrameStats finish_stats(const Model & model, const Bqm & bqm, const Frame & frame,
                        size_t vars_before) {
  FrameStats st;
  st.step = frame.step;
  st.new_vars = bqm.num_vars() - vars_before;
  st.cumulative_vars = bqm.num_vars();
  for (Nid s : model.states) {
    const Node & node = model.node(s);
    if (node.sort_info.is_array || node.sort_info.width != 1 || !is_pc_flag(node)) continue;
    const auto & value = frame.state_values.at(s);
    if (!std::get<Word>(value).bits[0].is_const()) ++st.nonconstant_pc_flags;
  }
  for (const auto & [nid, bit] : frame.bad_bits)
    if (!bit.is_const()) ++st.nonconstant_bads;
  return st;
}

uint64_t expanded_entries(const btor2::SortInfo & sort, const UnrollOptions & options) {
  if (sort.index_width > options.array_index_limit)
    fail("array index width " + std::to_string(sort.index_width) +
         " exceeds the expansion limit (" + std::to_string(options.array_index_limit) + ")");
  return uint64_t(1) << sort.index_width;
}

Frame build_initial_frame(const Model & model, Bqm & bqm, const UnrollOptions & options) {
  Frame frame;
  frame.step = 0;
  for (Nid s : model.states) {
    const Node & node = model.node(s);
    const btor2::SortInfo & sort = node.sort_info;
    auto init = model.init_of.find(s);
    if (sort.is_array) {
      // Arrays expand over the full address range; uninitialized or
      // zero-initialized entries are constant zero words.
      uint64_t entries = expanded_entries(sort, options);
      uint64_t broadcast = 0;
      if (init != model.init_of.end()) {
        Frame scratch;
        FrameBlaster blaster(model, bqm, scratch);
        Word w = blaster.blast_word(init->second);
        if (!w.all_const()) fail("array init value must be constant");
        broadcast = w.const_value();
      }
      MemoryImage image;
      image.reserve(entries);
      for (uint64_t a = 0; a < entries; ++a)
        image.push_back({ a, const_word(broadcast, sort.width) });
      frame.state_values.emplace(s, std::move(image));
    } else if (init != model.init_of.end()) {
      FrameBlaster blaster(model, bqm, frame);
      frame.state_values.emplace(s, blaster.blast_word(init->second));
    } else {
      frame.state_values.emplace(s, free_word(bqm, sort.width));
    }
  }
  blast_bads(model, bqm, frame);
  return frame;
}

Frame advance_frame(const Model & model, Bqm & bqm, Frame & prev) {
  Frame next;
  next.step = prev.step + 1;
  // All next expressions are blasted over the previous frame and committed
  // simultaneously; states without a next keep their words.
  FrameBlaster blaster(model, bqm, prev);
  for (Nid s : model.states) {
    auto it = model.next_of.find(s);
    if (it == model.next_of.end())
      next.state_values.emplace(s, prev.state_values.at(s));
    else
      next.state_values.emplace(s, blaster.blast(it->second));
  }
  blast_bads(model, bqm, next);
  return next;
}

}  // namespace

Translation translate(const Model & model, uint64_t n, const UnrollOptions & options) {
  Translation t;
  t.options = options;

  size_t before = 0;
  t.frames.push_back(build_initial_frame(model, t.bqm, options));
  t.stats.push_back(finish_stats(model, t.bqm, t.frames.back(), before));

  for (uint64_t i = 1; i <= n; ++i) {
    before = t.bqm.num_vars();
    t.frames.push_back(advance_frame(model, t.bqm, t.frames[i - 1]));
    t.stats.push_back(finish_stats(model, t.bqm, t.frames.back(), before));
  }

  // Balanced OR tree over every frame's bad bits, then pin the output true.
  size_t vars_before_or = t.bqm.num_vars();
  std::vector<Bit> pending;
  for (const Frame & frame : t.frames)
    for (const auto & [nid, bit] : frame.bad_bits) pending.push_back(bit);

  if (pending.empty()) {
    t.or_output = Bit::zero();
  } else {
    while (pending.size() > 1) {
      std::vector<Bit> merged;
      for (size_t i = 0; i + 1 < pending.size(); i += 2)
        merged.push_back(t.bqm.emit_gate(Gate::Or, pending[i], pending[i + 1]));
      if (pending.size() % 2) merged.push_back(pending.back());
      pending.swap(merged);
    }
    t.or_output = pending[0];
  }
  t.bqm.pin_bit(t.or_output, true, options.pin_strength);
  t.or_reduction_vars = t.bqm.num_vars() - vars_before_or;
  return t;
}

std::vector<btor2::InputMap> decode_witness(const Translation & translation,
                                            const Assignment & assignment) {
  if (assignment.size() < translation.bqm.num_vars())
    fail("assignment does not cover the model");
  std::vector<btor2::InputMap> result;
  result.reserve(translation.frames.size());
  for (const Frame & frame : translation.frames) {
    btor2::InputMap step;
    for (const auto & [nid, word] : frame.input_words) {
      uint64_t v = 0;
      for (size_t i = 0; i < word.bits.size(); ++i) {
        const Bit & bit = word.bits[i];
        bool set = bit.is_const() ? bit.const_value() : assignment[bit.var_id()] != 0;
        if (set) v |= uint64_t(1) << i;
      }
      step.emplace(nid, btor2::BitVec(uint32_t(word.bits.size()), v));
    }
    result.push_back(std::move(step));
  }
  return result;
}

Assignment assignment_for_inputs(const Translation & translation,
                                 const std::vector<btor2::InputMap> & inputs) {
  std::map<Var, int> free_values;
  for (size_t step = 0; step < translation.frames.size(); ++step) {
    const Frame & frame = translation.frames[step];
    for (const auto & [nid, word] : frame.input_words) {
      uint64_t value = 0;
      if (step < inputs.size()) {
        auto it = inputs[step].find(nid);
        if (it != inputs[step].end()) {
          if (it->second.width != word.width()) fail("witness input width mismatch");
          value = it->second.bits;
        }
      }
      for (size_t i = 0; i < word.bits.size(); ++i)
        if (!word.bits[i].is_const())
          free_values[word.bits[i].var_id()] = int((value >> i) & 1);
    }
  }
  // Uninitialized state words are free as well; default them to 0 unless the
  // caller pinned them through the step-0 input map keyed by the state nid.
  for (const auto & [nid, value] : translation.frames[0].state_values) {
    if (!std::holds_alternative<Word>(value)) continue;
    const Word & word = std::get<Word>(value);
    uint64_t v = 0;
    if (!inputs.empty()) {
      auto it = inputs[0].find(nid);
      if (it != inputs[0].end()) v = it->second.bits;
    }
    for (size_t i = 0; i < word.bits.size(); ++i) {
      const Bit & bit = word.bits[i];
      if (!bit.is_const() && !translation.bqm.is_produced(bit.var_id()))
        free_values.emplace(bit.var_id(), int((v >> i) & 1));
    }
  }
  return forward_assignment(translation.bqm, free_values);
}

}  // namespace qubomc
