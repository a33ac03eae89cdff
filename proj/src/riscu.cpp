#include "qubomc/riscu.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace qubomc::riscu {

namespace {

[[noreturn]] void fail(const std::string & msg) { throw QubomcError("asm: " + msg); }

const std::array<const char *, 32> kRegisterNames = {
  "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2", "s0", "s1", "a0",
  "a1",   "a2", "a3", "a4", "a5", "a6", "a7", "s2", "s3", "s4", "s5",
  "s6",   "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"
};

constexpr int kRegSp = 2;
constexpr int kRegGp = 3;
constexpr int kRegRa = 1;
constexpr int kRegA0 = 10;
constexpr int kRegA1 = 11;
constexpr int kRegA2 = 12;
constexpr int kRegA7 = 17;

constexpr uint32_t kSyscallExit = 93;
constexpr uint32_t kSyscallRead = 63;
constexpr uint32_t kSyscallWrite = 64;
constexpr uint32_t kSyscallOpenat = 56;
constexpr uint32_t kSyscallBrk = 214;

int register_index(const std::string & name) {
  for (int i = 0; i < 32; ++i)
    if (name == kRegisterNames[i]) return i;
  if (name == "fp") return 8;
  if (name.size() >= 2 && name[0] == 'x') {
    int idx = 0;
    for (size_t i = 1; i < name.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
      idx = idx * 10 + (name[i] - '0');
    }
    if (idx < 32) return idx;
  }
  return -1;
}

uint32_t next_page(uint32_t addr) { return ((addr - 1) / 4096 + 1) * 4096; }

}  // namespace

const char * opcode_name(Opcode op) {
  switch (op) {
    case Opcode::Lui: return "lui";
    case Opcode::Addi: return "addi";
    case Opcode::Lw: return "lw";
    case Opcode::Sw: return "sw";
    case Opcode::Add: return "add";
    case Opcode::Sub: return "sub";
    case Opcode::Mul: return "mul";
    case Opcode::Divu: return "divu";
    case Opcode::Remu: return "remu";
    case Opcode::Sltu: return "sltu";
    case Opcode::Beq: return "beq";
    case Opcode::Jal: return "jal";
    case Opcode::Jalr: return "jalr";
    case Opcode::Ecall: return "ecall";
  }
  return "?";
}

const char * bad_description(int bad_id) {
  switch (bad_id) {
    case 0: return "invalid syscall id";
    case 1: return "non-zero exit code";
    case 2: return "division by zero";
    case 3: return "remainder by zero";
    case 4: return "word-unaligned memory access";
    case 6: return "memory access below data segment";
    case 7: return "memory access in between data and heap segments";
    case 8: return "memory access in between current heap and stack segments";
    case 9: return "memory access in between allowed and current end of heap segment";
    case 10: return "memory access in between current and allowed start of stack segment";
    case 11: return "memory access above stack segment";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Assembler

namespace {

struct AsmLine {
  size_t line_no = 0;
  std::string mnemonic;
  std::vector<std::string> operands;
};

struct PendingTarget {
  size_t instr_index = 0;
  size_t operand = 0;
  std::string label;
  std::optional<int64_t> offset; // instruction-count offset, when given
  size_t line_no = 0;
};

int64_t parse_immediate(const std::string & tok, size_t line_no) {
  if (tok.size() >= 3 && tok.front() == '\'' && tok.back() == '\'')
    return static_cast<unsigned char>(tok[1]);
  try {
    size_t used = 0;
    int64_t v = std::stoll(tok, &used, 0); // handles decimal, 0x..., negatives
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    fail("line " + std::to_string(line_no) + ": malformed immediate '" + tok + "'");
  }
}

void check_range(int64_t v, int64_t lo, int64_t hi, const char * what, size_t line_no) {
  if (v < lo || v > hi)
    fail("line " + std::to_string(line_no) + ": " + what + " " + std::to_string(v) +
         " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// Splits "imm(reg)" into its parts.
void parse_mem_operand(const std::string & tok, size_t line_no, int64_t & imm, int & reg) {
  auto open = tok.find('(');
  auto close = tok.find(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    fail("line " + std::to_string(line_no) + ": expected imm(reg), got '" + tok + "'");
  std::string imm_part = tok.substr(0, open);
  imm = imm_part.empty() ? 0 : parse_immediate(imm_part, line_no);
  reg = register_index(tok.substr(open + 1, close - open - 1));
  if (reg < 0) fail("line " + std::to_string(line_no) + ": unknown register in '" + tok + "'");
}

int parse_register(const std::string & tok, size_t line_no) {
  int r = register_index(tok);
  if (r < 0) fail("line " + std::to_string(line_no) + ": unknown register '" + tok + "'");
  return r;
}

}  // namespace

Program assemble(const std::string & text) {
  Program program;
  std::map<std::string, size_t> code_labels; // label -> instruction index
  std::vector<PendingTarget> pending;
  uint64_t heap_words = 0;
  uint64_t stack_words = 0;

  enum class Section { Code, Data } section = Section::Code;

  std::istringstream in(text);
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // comments: ';', '#', and '//'
    for (const char * marker : { ";", "#", "//" }) {
      auto pos = raw.find(marker);
      if (pos != std::string::npos) raw.erase(pos);
    }
    // labels (possibly several) at line start
    std::string rest = raw;
    for (;;) {
      size_t start = rest.find_first_not_of(" \t");
      if (start == std::string::npos) { rest.clear(); break; }
      size_t colon = rest.find(':');
      size_t word_end = rest.find_first_of(" \t", start);
      if (colon != std::string::npos && (word_end == std::string::npos || colon < word_end)) {
        std::string label = rest.substr(start, colon - start);
        if (label.empty()) fail("line " + std::to_string(line_no) + ": empty label");
        if (section != Section::Code)
          fail("line " + std::to_string(line_no) + ": labels are only supported in code");
        if (code_labels.count(label))
          fail("line " + std::to_string(line_no) + ": duplicate label '" + label + "'");
        code_labels[label] = program.code.size();
        rest = rest.substr(colon + 1);
        continue;
      }
      break;
    }

    std::istringstream ls(rest);
    std::string mnemonic;
    if (!(ls >> mnemonic)) continue;

    std::string tail;
    std::getline(ls, tail);
    std::vector<std::string> ops;
    {
      std::string cur;
      for (char c : tail) {
        if (c == ',') { ops.push_back(cur); cur.clear(); }
        else cur += c;
      }
      ops.push_back(cur);
      for (auto & o : ops) {
        size_t a = o.find_first_not_of(" \t");
        size_t b = o.find_last_not_of(" \t");
        o = a == std::string::npos ? "" : o.substr(a, b - a + 1);
      }
      while (!ops.empty() && ops.back().empty()) ops.pop_back();
      for (const auto & o : ops)
        if (o.empty()) fail("line " + std::to_string(line_no) + ": empty operand");
    }

    if (mnemonic == ".code") { section = Section::Code; continue; }
    if (mnemonic == ".data") { section = Section::Data; continue; }
    if (mnemonic == ".heap" || mnemonic == ".stack") {
      if (ops.size() != 1) fail("line " + std::to_string(line_no) + ": " + mnemonic + " takes one word count");
      int64_t words = parse_immediate(ops[0], line_no);
      check_range(words, 0, 1 << 20, "allowance", line_no);
      (mnemonic == ".heap" ? heap_words : stack_words) = uint64_t(words);
      continue;
    }
    if (mnemonic == ".word") {
      if (section != Section::Data) fail("line " + std::to_string(line_no) + ": .word outside .data");
      if (ops.empty()) fail("line " + std::to_string(line_no) + ": .word needs a value");
      for (const auto & o : ops) {
        int64_t v = parse_immediate(o, line_no);
        program.data_words.push_back(uint32_t(uint64_t(v)));
      }
      continue;
    }
    if (mnemonic[0] == '.') fail("line " + std::to_string(line_no) + ": unknown directive " + mnemonic);
    if (section != Section::Code)
      fail("line " + std::to_string(line_no) + ": instruction in .data section");

    auto expect_ops = [&](size_t n) {
      if (ops.size() != n)
        fail("line " + std::to_string(line_no) + ": " + mnemonic + " expects " +
             std::to_string(n) + " operands");
    };

    // branch/jump target: "label", "int", or "int[label]"
    auto parse_target = [&](const std::string & tok, size_t operand_idx) {
      PendingTarget t;
      t.instr_index = program.code.size();
      t.operand = operand_idx;
      t.line_no = line_no;
      auto bracket = tok.find('[');
      if (bracket != std::string::npos) {
        if (tok.back() != ']') fail("line " + std::to_string(line_no) + ": malformed target '" + tok + "'");
        t.offset = parse_immediate(tok.substr(0, bracket), line_no);
        t.label = tok.substr(bracket + 1, tok.size() - bracket - 2);
      } else if (!tok.empty() &&
                 (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-')) {
        t.offset = parse_immediate(tok, line_no);
      } else {
        t.label = tok;
      }
      pending.push_back(t);
    };

    Instruction ins;
    if (mnemonic == "lui") {
      expect_ops(2);
      ins.op = Opcode::Lui;
      ins.rd = uint8_t(parse_register(ops[0], line_no));
      int64_t imm = parse_immediate(ops[1], line_no);
      check_range(imm, -(int64_t(1) << 19), (int64_t(1) << 20) - 1, "lui immediate", line_no);
      ins.imm = int32_t(imm);
    } else if (mnemonic == "addi") {
      expect_ops(3);
      ins.op = Opcode::Addi;
      ins.rd = uint8_t(parse_register(ops[0], line_no));
      ins.rs1 = uint8_t(parse_register(ops[1], line_no));
      int64_t imm = parse_immediate(ops[2], line_no);
      check_range(imm, -2048, 2047, "addi immediate", line_no);
      ins.imm = int32_t(imm);
    } else if (mnemonic == "lw") {
      expect_ops(2);
      ins.op = Opcode::Lw;
      ins.rd = uint8_t(parse_register(ops[0], line_no));
      int64_t imm;
      int reg;
      parse_mem_operand(ops[1], line_no, imm, reg);
      check_range(imm, -2048, 2047, "lw offset", line_no);
      ins.rs1 = uint8_t(reg);
      ins.imm = int32_t(imm);
    } else if (mnemonic == "sw") {
      expect_ops(2);
      ins.op = Opcode::Sw;
      ins.rs2 = uint8_t(parse_register(ops[0], line_no));
      int64_t imm;
      int reg;
      parse_mem_operand(ops[1], line_no, imm, reg);
      check_range(imm, -2048, 2047, "sw offset", line_no);
      ins.rs1 = uint8_t(reg);
      ins.imm = int32_t(imm);
    } else if (mnemonic == "add" || mnemonic == "sub" || mnemonic == "mul" ||
               mnemonic == "divu" || mnemonic == "remu" || mnemonic == "sltu") {
      expect_ops(3);
      ins.op = mnemonic == "add"   ? Opcode::Add
               : mnemonic == "sub" ? Opcode::Sub
               : mnemonic == "mul" ? Opcode::Mul
               : mnemonic == "divu" ? Opcode::Divu
               : mnemonic == "remu" ? Opcode::Remu
                                     : Opcode::Sltu;
      ins.rd = uint8_t(parse_register(ops[0], line_no));
      ins.rs1 = uint8_t(parse_register(ops[1], line_no));
      ins.rs2 = uint8_t(parse_register(ops[2], line_no));
    } else if (mnemonic == "beq") {
      expect_ops(3);
      ins.op = Opcode::Beq;
      ins.rs1 = uint8_t(parse_register(ops[0], line_no));
      ins.rs2 = uint8_t(parse_register(ops[1], line_no));
      parse_target(ops[2], 2);
    } else if (mnemonic == "jal") {
      expect_ops(2);
      ins.op = Opcode::Jal;
      ins.rd = uint8_t(parse_register(ops[0], line_no));
      parse_target(ops[1], 1);
    } else if (mnemonic == "jalr") {
      expect_ops(2);
      ins.op = Opcode::Jalr;
      ins.rd = uint8_t(parse_register(ops[0], line_no));
      int64_t imm;
      int reg;
      parse_mem_operand(ops[1], line_no, imm, reg);
      ins.rs1 = uint8_t(reg);
      ins.imm = int32_t(imm);
      if (ins.rd != 0 || ins.imm != 0 || ins.rs1 != kRegRa)
        fail("line " + std::to_string(line_no) +
             ": only 'jalr zero,0(ra)' is supported (rd update unsupported)");
    } else if (mnemonic == "ecall") {
      expect_ops(0);
      ins.op = Opcode::Ecall;
    } else {
      fail("line " + std::to_string(line_no) + ": unknown mnemonic '" + mnemonic + "'");
    }
    program.code.push_back(ins);
  }

  if (program.code.empty()) fail("no instructions");

  // Resolve branch/jump targets to byte offsets.
  for (const PendingTarget & t : pending) {
    int64_t instr_offset;
    if (!t.label.empty()) {
      auto it = code_labels.find(t.label);
      if (it == code_labels.end())
        fail("line " + std::to_string(t.line_no) + ": undefined label '" + t.label + "'");
      instr_offset = int64_t(it->second) - int64_t(t.instr_index);
      if (t.offset && *t.offset != instr_offset)
        fail("line " + std::to_string(t.line_no) + ": target offset " +
             std::to_string(*t.offset) + " disagrees with label '" + t.label + "' (" +
             std::to_string(instr_offset) + ")");
    } else {
      instr_offset = *t.offset;
    }
    int64_t byte_offset = instr_offset * 4;
    Instruction & ins = program.code[t.instr_index];
    if (ins.op == Opcode::Beq)
      check_range(byte_offset, -4096, 4094, "beq offset", t.line_no);
    else
      check_range(byte_offset, -(int64_t(1) << 20), (int64_t(1) << 20) - 2, "jal offset", t.line_no);
    ins.imm = int32_t(byte_offset);
  }

  // Segment layout. An empty data segment gets one zero pad word so the
  // default access address (start of data) stays inside a valid segment.
  if (program.data_words.empty()) program.data_words.push_back(0);
  Layout & lay = program.layout;
  lay.code_end = lay.code_start + uint32_t(4 * program.code.size());
  lay.data_start = next_page(lay.code_end);
  lay.data_end = lay.data_start + uint32_t(4 * program.data_words.size());
  lay.heap_start = next_page(lay.data_end);
  lay.allowed_heap_end = lay.heap_start + uint32_t(4 * heap_words);
  lay.allowed_stack_start = lay.sp_boot - uint32_t(4 * stack_words);
  lay.gp_boot = lay.data_end;
  if (lay.allowed_heap_end >= lay.allowed_stack_start)
    fail("heap allowance overlaps the stack");
  program.entry = lay.code_start;
  return program;
}

Program assemble_file(const std::string & path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return assemble(ss.str());
}

std::string disassemble(const Program & program) {
  std::ostringstream out;
  char buf[64];
  for (size_t i = 0; i < program.code.size(); ++i) {
    const Instruction & ins = program.code[i];
    uint32_t pc = program.layout.code_start + uint32_t(4 * i);
    std::snprintf(buf, sizeof buf, "0x%x: ", pc);
    out << buf << opcode_name(ins.op);
    switch (ins.op) {
      case Opcode::Lui:
        out << ' ' << kRegisterNames[ins.rd] << ',' << ins.imm;
        break;
      case Opcode::Addi:
        out << ' ' << kRegisterNames[ins.rd] << ',' << kRegisterNames[ins.rs1] << ',' << ins.imm;
        break;
      case Opcode::Lw:
        out << ' ' << kRegisterNames[ins.rd] << ',' << ins.imm << '(' << kRegisterNames[ins.rs1] << ')';
        break;
      case Opcode::Sw:
        out << ' ' << kRegisterNames[ins.rs2] << ',' << ins.imm << '(' << kRegisterNames[ins.rs1] << ')';
        break;
      case Opcode::Add:
      case Opcode::Sub:
      case Opcode::Mul:
      case Opcode::Divu:
      case Opcode::Remu:
      case Opcode::Sltu:
        out << ' ' << kRegisterNames[ins.rd] << ',' << kRegisterNames[ins.rs1] << ','
            << kRegisterNames[ins.rs2];
        break;
      case Opcode::Beq:
        out << ' ' << kRegisterNames[ins.rs1] << ',' << kRegisterNames[ins.rs2] << ','
            << ins.imm / 4;
        break;
      case Opcode::Jal:
        out << ' ' << kRegisterNames[ins.rd] << ',' << ins.imm / 4;
        break;
      case Opcode::Jalr:
        out << ' ' << kRegisterNames[ins.rd] << ',' << ins.imm << '(' << kRegisterNames[ins.rs1] << ')';
        break;
      case Opcode::Ecall:
        break;
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Emulator

namespace {

bool in_materialized_memory(const Layout & lay, uint32_t addr) {
  return (addr >= lay.data_start && addr < lay.data_end) ||
         (addr >= lay.heap_start && addr < lay.allowed_heap_end) ||
         (addr >= lay.allowed_stack_start && addr <= lay.highest);
}

struct Flows {
  uint32_t access;
  uint32_t division;
  uint32_t remainder;
  bool ecall_active = false;
};

Flows compute_flows(const Program & program, const MachineState & st,
                    const Instruction * instr) {
  Flows f{ program.layout.data_start, 1, 1, false };
  if (!instr) return f;
  switch (instr->op) {
    case Opcode::Lw:
      if (instr->rd != 0) f.access = st.regs[instr->rs1] + uint32_t(instr->imm);
      break;
    case Opcode::Sw:
      f.access = st.regs[instr->rs1] + uint32_t(instr->imm);
      break;
    case Opcode::Divu:
      if (instr->rd != 0) f.division = st.regs[instr->rs2];
      break;
    case Opcode::Remu:
      if (instr->rd != 0) f.remainder = st.regs[instr->rs2];
      break;
    case Opcode::Ecall: {
      f.ecall_active = true;
      uint32_t a7 = st.regs[kRegA7];
      if (a7 == kSyscallRead || a7 == kSyscallWrite || a7 == kSyscallOpenat)
        f.access = st.regs[kRegA1];
      break;
    }
    default:
      break;
  }
  return f;
}

// Bad conditions in label order; first hit wins.
int check_bads(const Program & program, const MachineState & st, const Flows & f) {
  const Layout & lay = program.layout;
  uint32_t a7 = st.regs[kRegA7];
  if (f.ecall_active && a7 != kSyscallExit && a7 != kSyscallRead && a7 != kSyscallWrite &&
      a7 != kSyscallOpenat && a7 != kSyscallBrk)
    return 0;
  if (f.ecall_active && a7 == kSyscallExit && st.regs[kRegA0] != 0) return 1;
  if (f.division == 0) return 2;
  if (f.remainder == 0) return 3;
  if ((f.access & 3) != 0) return 4;
  if (f.access < lay.data_start) return 6;
  if (f.access >= lay.data_end && f.access < lay.heap_start) return 7;
  if (f.access >= st.brk && f.access < st.regs[kRegSp]) return 8;
  if (f.access >= lay.allowed_heap_end && f.access < st.brk) return 9;
  if (f.access >= st.regs[kRegSp] && f.access < lay.allowed_stack_start) return 10;
  if (f.access > lay.highest) return 11;
  return -1;
}

}  // namespace

Outcome emulate(const Program & program, const std::vector<uint8_t> & input,
                uint64_t step_limit) {
  const Layout & lay = program.layout;
  MachineState st;
  st.pc = program.entry;
  st.regs[kRegSp] = lay.sp_boot;
  st.regs[kRegGp] = lay.gp_boot;
  st.brk = lay.heap_start;
  for (size_t i = 0; i < program.data_words.size(); ++i)
    if (program.data_words[i] != 0)
      st.memory[lay.data_start + uint32_t(4 * i)] = program.data_words[i];

  Outcome out;
  auto next_input_word = [&](uint32_t count) {
    uint32_t word = 0;
    for (uint32_t i = 0; i < count; ++i) {
      uint8_t byte = st.input_pos < input.size() ? input[st.input_pos] : 0;
      ++st.input_pos;
      word |= uint32_t(byte) << (8 * i);
    }
    return word;
  };

  for (uint64_t step = 0; step < step_limit; ++step) {
    const Instruction * instr = nullptr;
    if (st.mode == MachineState::Mode::Normal && st.pc >= lay.code_start &&
        st.pc < lay.code_end && st.pc % 4 == 0)
      instr = &program.code[(st.pc - lay.code_start) / 4];

    Flows flows = compute_flows(program, st, instr);
    int bad = check_bads(program, st, flows);
    if (bad >= 0) {
      out.kind = Outcome::Kind::Bad;
      out.bad_id = bad;
      out.bad_step = step;
      out.steps = step;
      return out;
    }

    switch (st.mode) {
      case MachineState::Mode::KernelRead: {
        uint32_t a0 = st.regs[kRegA0];
        uint32_t a2 = st.regs[kRegA2];
        if (st.regs[kRegA7] == kSyscallRead && a0 < a2) {
          uint32_t inc = std::min<uint32_t>(4, a2 - a0);
          uint32_t addr = st.regs[kRegA1] + a0;
          uint32_t word = next_input_word(inc);
          // The model materializes only segment words; writes elsewhere
          // vanish there, so they vanish here as well.
          if (in_materialized_memory(lay, addr)) {
            if (word) st.memory[addr] = word;
            else st.memory.erase(addr);
          }
          st.regs[kRegA0] = a0 + inc;
        } else {
          st.kernel_mode = false;
          st.mode = MachineState::Mode::KernelLeave;
        }
        break;
      }
      case MachineState::Mode::KernelLeave:
        st.mode = MachineState::Mode::Normal;
        st.pc = st.resume_pc;
        break;
      case MachineState::Mode::Normal: {
        if (!instr) break; // control left the code segment; model idles too
        ++out.instructions;
        const Instruction & ins = *instr;
        auto set_rd = [&](uint32_t v) {
          if (ins.rd != 0) st.regs[ins.rd] = v;
        };
        switch (ins.op) {
          case Opcode::Lui: set_rd(uint32_t(ins.imm) << 12); st.pc += 4; break;
          case Opcode::Addi: set_rd(st.regs[ins.rs1] + uint32_t(ins.imm)); st.pc += 4; break;
          case Opcode::Lw: {
            if (ins.rd != 0) {
              uint32_t addr = st.regs[ins.rs1] + uint32_t(ins.imm);
              auto it = st.memory.find(addr);
              set_rd(it == st.memory.end() ? 0 : it->second);
            }
            st.pc += 4;
            break;
          }
          case Opcode::Sw: {
            uint32_t addr = st.regs[ins.rs1] + uint32_t(ins.imm);
            uint32_t v = st.regs[ins.rs2];
            if (in_materialized_memory(lay, addr)) {
              if (v) st.memory[addr] = v;
              else st.memory.erase(addr);
            }
            st.pc += 4;
            break;
          }
          case Opcode::Add: set_rd(st.regs[ins.rs1] + st.regs[ins.rs2]); st.pc += 4; break;
          case Opcode::Sub: set_rd(st.regs[ins.rs1] - st.regs[ins.rs2]); st.pc += 4; break;
          case Opcode::Mul: set_rd(st.regs[ins.rs1] * st.regs[ins.rs2]); st.pc += 4; break;
          case Opcode::Divu:
            // Division by zero raised b2 above.
            set_rd(st.regs[ins.rs2] == 0 ? ~uint32_t(0) : st.regs[ins.rs1] / st.regs[ins.rs2]);
            st.pc += 4;
            break;
          case Opcode::Remu:
            set_rd(st.regs[ins.rs2] == 0 ? st.regs[ins.rs1] : st.regs[ins.rs1] % st.regs[ins.rs2]);
            st.pc += 4;
            break;
          case Opcode::Sltu:
            set_rd(st.regs[ins.rs1] < st.regs[ins.rs2] ? 1 : 0);
            st.pc += 4;
            break;
          case Opcode::Beq:
            st.pc = st.regs[ins.rs1] == st.regs[ins.rs2] ? st.pc + uint32_t(ins.imm) : st.pc + 4;
            break;
          case Opcode::Jal:
            set_rd(st.pc + 4);
            st.pc += uint32_t(ins.imm);
            break;
          case Opcode::Jalr:
            st.pc = st.regs[kRegRa] & ~uint32_t(1);
            break;
          case Opcode::Ecall: {
            uint32_t a7 = st.regs[kRegA7];
            st.resume_pc = st.pc + 4;
            if (a7 == kSyscallExit) {
              out.kind = Outcome::Kind::Exit;
              out.exit_code = st.regs[kRegA0];
              out.steps = step;
              return out;
            } else if (a7 == kSyscallRead) {
              st.regs[kRegA0] = 0;
              st.kernel_mode = true;
              st.mode = MachineState::Mode::KernelRead;
            } else if (a7 == kSyscallWrite) {
              st.regs[kRegA0] = st.regs[kRegA2];
              st.mode = MachineState::Mode::KernelLeave;
            } else if (a7 == kSyscallOpenat) {
              st.regs[kRegA0] = st.fd_bump + 1;
              st.fd_bump += 1;
              st.mode = MachineState::Mode::KernelLeave;
            } else { // brk; invalid ids raised b0 above
              uint32_t a0 = st.regs[kRegA0];
              bool valid = st.brk <= a0 && a0 < st.regs[kRegSp] && (a0 & 3) == 0;
              if (valid)
                st.brk = a0;
              else
                st.regs[kRegA0] = st.brk;
              st.mode = MachineState::Mode::KernelLeave;
            }
            break;
          }
        }
        break;
      }
    }
    out.steps = step + 1;
  }
  out.kind = Outcome::Kind::StepLimit;
  return out;
}

// ---------------------------------------------------------------------------
// Translator

namespace {

using btor2::Nid;

class Emitter {
 public:
  void comment(const std::string & text) { out_ << "; " << text << '\n'; }
  void blank() { out_ << '\n'; }

  Nid fixed(Nid nid, const std::string & rest) {
    out_ << nid << ' ' << rest << '\n';
    return nid;
  }

  Nid emit(const std::string & rest) {
    Nid nid = next_++;
    out_ << nid << ' ' << rest << '\n';
    return nid;
  }

  std::string take() { return std::move(out_).str(); }

 private:
  std::ostringstream out_;
  Nid next_ = 100;
};

std::string dec(uint64_t v) { return std::to_string(v); }
std::string hex(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%x", v);
  return buf;
}

struct ControlEdge {
  enum class Kind { Plain, Beq, CallReturn, Ecall } kind = Kind::Plain;
  uint32_t from_pc = 0;
  Nid condition = 0; // beq: eq/neq nid; call return: link constant nid
};

struct InstrInfo {
  bool reachable = false;
  Nid flag = 0;
  Nid beq_eq = 0;
  Nid beq_neq = 0;
  Nid link = 0;
};

}  // namespace

BeatorOutput translate(const Program & program) {
  const Layout & lay = program.layout;
  BeatorOutput result;
  BeatorInfo & info = result.info;
  info.layout = lay;
  Emitter e;

  auto instr_at = [&](uint32_t pc) -> const Instruction & {
    return program.code[(pc - lay.code_start) / 4];
  };
  auto in_code = [&](uint32_t pc) {
    return pc >= lay.code_start && pc < lay.code_end && pc % 4 == 0;
  };

  // --- static reachability from the entry point
  std::set<uint32_t> reachable;
  {
    std::vector<uint32_t> work{ program.entry };
    while (!work.empty()) {
      uint32_t pc = work.back();
      work.pop_back();
      if (!in_code(pc) || reachable.count(pc)) continue;
      reachable.insert(pc);
      const Instruction & ins = instr_at(pc);
      switch (ins.op) {
        case Opcode::Beq:
          work.push_back(pc + uint32_t(ins.imm));
          work.push_back(pc + 4);
          break;
        case Opcode::Jal:
          work.push_back(pc + uint32_t(ins.imm));
          if (ins.rd != 0) work.push_back(pc + 4); // call returns via jalr
          break;
        case Opcode::Jalr:
          break;
        default:
          work.push_back(pc + 4);
          break;
      }
    }
  }

  // --- physical memory map: data, allowed heap, allowed stack
  std::vector<std::pair<uint32_t, uint32_t>> memory_words; // (vaddr, boot value)
  {
    uint32_t v = lay.data_start;
    for (;;) {
      if (v == lay.data_end) v = lay.heap_start;
      if (v == lay.allowed_heap_end) v = lay.allowed_stack_start;
      if (v > lay.highest || v < lay.data_start) break;
      uint32_t value = 0;
      if (v >= lay.data_start && v < lay.data_end)
        value = program.data_words[(v - lay.data_start) / 4];
      memory_words.push_back({ v, value });
      v += 4;
    }
  }
  uint32_t phys_bits = 1;
  while ((uint64_t(1) << phys_bits) < memory_words.size()) ++phys_bits;

  // --- header
  e.comment("generated from " + dec(program.code.size()) + " instructions, " +
            dec(memory_words.size()) + " memory words");
  e.fixed(1, "sort bitvec 1 ; Boolean");
  e.fixed(2, "sort bitvec 32 ; 32-bit machine word");
  e.fixed(6, "sort bitvec " + dec(phys_bits) + " ; physical address space");
  e.blank();
  e.fixed(10, "zero 1");
  e.fixed(11, "one 1");
  e.blank();
  e.fixed(20, "zero 2");
  e.fixed(21, "one 2");
  e.fixed(22, "constd 2 2");
  e.fixed(23, "constd 2 3");
  e.fixed(24, "constd 2 4");
  e.blank();
  e.comment("start of data segment: " + hex(lay.data_start));
  e.fixed(30, "constd 2 " + dec(lay.data_start));
  e.comment("end of data segment: " + hex(lay.data_end));
  e.fixed(31, "constd 2 " + dec(lay.data_end));
  e.comment("start of heap segment: " + hex(lay.heap_start));
  e.fixed(32, "constd 2 " + dec(lay.heap_start));
  e.comment("current end of heap segment (boot program break): " + hex(lay.heap_start));
  e.fixed(33, "constd 2 " + dec(lay.heap_start));
  e.comment("allowed end of heap segment: " + hex(lay.allowed_heap_end));
  e.fixed(34, "constd 2 " + dec(lay.allowed_heap_end));
  e.comment("allowed start of stack segment: " + hex(lay.allowed_stack_start));
  e.fixed(35, "constd 2 " + dec(lay.allowed_stack_start));
  e.blank();
  e.comment("highest address in the 32-bit virtual address space");
  e.fixed(50, "constd 2 4294967292");
  e.blank();
  e.comment("kernel-mode flag");
  Nid kernel = e.fixed(60, "state 1 kernel-mode");
  e.fixed(61, "init 1 60 10 kernel-mode");
  Nid not_kernel = e.fixed(62, "not 1 60");
  info.kernel_mode_nid = kernel;
  e.blank();
  e.comment("unsigned-extended inputs for byte-wise reading");
  e.fixed(71, "sort bitvec 8 ; 1 byte");
  e.fixed(72, "sort bitvec 16 ; 2 bytes");
  e.fixed(73, "sort bitvec 24 ; 3 bytes");
  e.fixed(81, "input 71 1-byte-input");
  e.fixed(82, "input 72 2-byte-input");
  e.fixed(83, "input 73 3-byte-input");
  Nid uext1 = e.fixed(91, "uext 2 81 24 ; uext-1-byte-input");
  Nid uext2 = e.fixed(92, "uext 2 82 16 ; uext-2-byte-input");
  Nid uext3 = e.fixed(93, "uext 2 83 8 ; uext-3-byte-input");
  Nid input4 = e.fixed(94, "input 2 4-byte-input");
  info.input_nids = { 81, 82, 83, 94 };
  e.blank();

  // --- registers
  std::array<uint32_t, 32> boot_regs{};
  boot_regs[kRegSp] = lay.sp_boot;
  boot_regs[kRegGp] = lay.gp_boot;

  e.comment("32 32-bit general-purpose registers");
  std::array<Nid, 32> reg_init_value{};
  for (int r = 1; r < 32; ++r)
    if (boot_regs[r] != 0)
      reg_init_value[r] = e.emit("constd 2 " + dec(boot_regs[r]) + " ; initial " +
                                 std::string(kRegisterNames[r]));
  std::array<Nid, 32> reg{};
  std::array<Nid, 32> reg_flow{};
  reg[0] = e.emit("zero 2 zero ; register 0 is always 0");
  for (int r = 1; r < 32; ++r) {
    reg[r] = e.emit(std::string("state 2 ") + kRegisterNames[r]);
    reg_flow[r] = reg[r];
  }
  for (int r = 1; r < 32; ++r)
    if (boot_regs[r] != 0)
      e.emit("init 2 " + dec(reg[r]) + " " + dec(reg_init_value[r]) + " " + kRegisterNames[r]);
  info.register_nids = reg;
  e.blank();

  // --- pc flags
  e.comment("program counter encoded in Boolean flags");
  std::map<uint32_t, InstrInfo> instrs;
  for (uint32_t pc = lay.code_start; pc < lay.code_end; pc += 4) {
    InstrInfo ii;
    ii.reachable = reachable.count(pc) > 0;
    if (ii.reachable) {
      ii.flag = e.emit("state 1 pc-" + hex(pc));
      e.emit("init 1 " + dec(ii.flag) + " " + (pc == program.entry ? dec(11) : dec(10)) +
             " pc-" + hex(pc));
      info.pc_flag_nids[pc] = ii.flag;
    }
    instrs[pc] = ii;
  }
  e.blank();

  // --- physical memory
  e.comment("physical memory (data, heap, stack)");
  std::vector<Nid> mem_vaddr(memory_words.size());
  std::vector<Nid> mem_word(memory_words.size());
  std::vector<Nid> mem_write_flow(memory_words.size());
  for (size_t p = 0; p < memory_words.size(); ++p) {
    auto [vaddr, value] = memory_words[p];
    mem_vaddr[p] = e.emit("constd 2 " + dec(vaddr) + " ; vaddr " + hex(vaddr));
    Nid init_value = e.emit("constd 2 " + dec(value));
    mem_word[p] = e.emit("state 2 RAM-word-" + dec(p));
    e.emit("init 2 " + dec(mem_word[p]) + " " + dec(init_value) + " RAM-word-" + dec(p));
    mem_write_flow[p] = mem_word[p];
  }
  e.blank();

  // --- data flow
  e.comment("data flow");
  Nid division_flow = 21;     // division by one is ok
  Nid remainder_flow = 21;    // remainder by one is ok
  Nid start_access_flow = 30; // access in data segment is ok
  Nid ecall_flow = 10;        // initially, no ecall active

  for (uint32_t pc = lay.code_start; pc < lay.code_end; pc += 4) {
    InstrInfo & ii = instrs[pc];
    if (!ii.reachable) continue;
    const Instruction & ins = instr_at(pc);
    Nid flag = ii.flag;
    switch (ins.op) {
      case Opcode::Lui: {
        if (ins.rd == 0) break;
        Nid value = e.emit("constd 2 " + dec(uint32_t(ins.imm) << 12) + " ; " + hex(pc) + " lui");
        Nid sel = e.emit("ite 2 " + dec(flag) + " " + dec(value) + " " + dec(reg_flow[ins.rd]));
        reg_flow[ins.rd] = sel;
        break;
      }
      case Opcode::Addi: {
        if (ins.rd == 0) break;
        Nid imm = e.emit("constd 2 " + dec(uint32_t(ins.imm)) + " ; " + hex(pc) + " addi imm");
        Nid sum = e.emit("add 2 " + dec(reg[ins.rs1]) + " " + dec(imm));
        Nid sel = e.emit("ite 2 " + dec(flag) + " " + dec(sum) + " " + dec(reg_flow[ins.rd]));
        reg_flow[ins.rd] = sel;
        break;
      }
      case Opcode::Add:
      case Opcode::Sub:
      case Opcode::Mul:
      case Opcode::Divu:
      case Opcode::Remu:
      case Opcode::Sltu: {
        if (ins.rd == 0) break;
        if (ins.op == Opcode::Divu) {
          Nid df = e.emit("ite 2 " + dec(flag) + " " + dec(reg[ins.rs2]) + " " + dec(division_flow));
          division_flow = df;
        } else if (ins.op == Opcode::Remu) {
          Nid rf = e.emit("ite 2 " + dec(flag) + " " + dec(reg[ins.rs2]) + " " + dec(remainder_flow));
          remainder_flow = rf;
        }
        Nid value;
        if (ins.op == Opcode::Sltu) {
          Nid cmp = e.emit("ult 1 " + dec(reg[ins.rs1]) + " " + dec(reg[ins.rs2]) + " ; " + hex(pc) + " sltu");
          value = e.emit("uext 2 " + dec(cmp) + " 31");
        } else {
          const char * opname = ins.op == Opcode::Add    ? "add"
                                : ins.op == Opcode::Sub  ? "sub"
                                : ins.op == Opcode::Mul  ? "mul"
                                : ins.op == Opcode::Divu ? "udiv"
                                                          : "urem";
          value = e.emit(std::string(opname) + " 2 " + dec(reg[ins.rs1]) + " " + dec(reg[ins.rs2]) +
                         " ; " + hex(pc) + " " + opcode_name(ins.op));
        }
        Nid sel = e.emit("ite 2 " + dec(flag) + " " + dec(value) + " " + dec(reg_flow[ins.rd]));
        reg_flow[ins.rd] = sel;
        break;
      }
      case Opcode::Lw: {
        if (ins.rd == 0) break;
        Nid imm = e.emit("constd 2 " + dec(uint32_t(ins.imm)) + " ; " + hex(pc) + " lw offset");
        Nid addr = e.emit("add 2 " + dec(reg[ins.rs1]) + " " + dec(imm));
        Nid acc = e.emit("ite 2 " + dec(flag) + " " + dec(addr) + " " + dec(start_access_flow));
        start_access_flow = acc;
        Nid read_flow = 20; // segmentation fault checks prevent missing words
        for (size_t p = 0; p < memory_words.size(); ++p) {
          Nid at = e.emit("eq 1 " + dec(addr) + " " + dec(mem_vaddr[p]));
          read_flow = e.emit("ite 2 " + dec(at) + " " + dec(mem_word[p]) + " " + dec(read_flow));
        }
        Nid sel = e.emit("ite 2 " + dec(flag) + " " + dec(read_flow) + " " + dec(reg_flow[ins.rd]));
        reg_flow[ins.rd] = sel;
        break;
      }
      case Opcode::Sw: {
        Nid imm = e.emit("constd 2 " + dec(uint32_t(ins.imm)) + " ; " + hex(pc) + " sw offset");
        Nid addr = e.emit("add 2 " + dec(reg[ins.rs1]) + " " + dec(imm));
        Nid acc = e.emit("ite 2 " + dec(flag) + " " + dec(addr) + " " + dec(start_access_flow));
        start_access_flow = acc;
        for (size_t p = 0; p < memory_words.size(); ++p) {
          Nid at = e.emit("eq 1 " + dec(addr) + " " + dec(mem_vaddr[p]));
          Nid to = e.emit("ite 2 " + dec(at) + " " + dec(reg[ins.rs2]) + " " + dec(mem_write_flow[p]));
          Nid into = e.emit("ite 2 " + dec(flag) + " " + dec(to) + " " + dec(mem_write_flow[p]));
          mem_write_flow[p] = into;
        }
        break;
      }
      case Opcode::Beq: {
        ii.beq_eq = e.emit("eq 1 " + dec(reg[ins.rs1]) + " " + dec(reg[ins.rs2]) + " ; " + hex(pc) + " beq");
        ii.beq_neq = e.emit("not 1 " + dec(ii.beq_eq));
        break;
      }
      case Opcode::Jal: {
        if (ins.rd == 0) break;
        ii.link = e.emit("constd 2 " + dec(pc + 4) + " ; " + hex(pc) + " jal link");
        Nid sel = e.emit("ite 2 " + dec(flag) + " " + dec(ii.link) + " " + dec(reg_flow[ins.rd]));
        reg_flow[ins.rd] = sel;
        break;
      }
      case Opcode::Jalr:
        break; // rd update unsupported
      case Opcode::Ecall: {
        Nid active = e.emit("ite 1 " + dec(flag) + " 11 " + dec(ecall_flow) + " ; " + hex(pc) + " ecall");
        ecall_flow = active;
        break;
      }
    }
  }
  e.blank();

  // --- control flow preparation (emits nothing)
  std::map<uint32_t, std::vector<ControlEdge>> control_in;
  std::map<uint32_t, uint32_t> call_return; // callee pc -> jalr pc
  std::set<uint32_t> jal_targets;
  for (uint32_t pc = lay.code_start; pc < lay.code_end; pc += 4) {
    const Instruction & ins = instr_at(pc);
    if (ins.op == Opcode::Jal) jal_targets.insert(pc + uint32_t(ins.imm));
  }
  {
    uint32_t current_callee = lay.code_start;
    uint32_t tracked_a7 = 0;
    for (uint32_t pc = lay.code_start; pc < lay.code_end; pc += 4) {
      const Instruction & ins = instr_at(pc);
      switch (ins.op) {
        case Opcode::Lui:
        case Opcode::Add:
        case Opcode::Sub:
        case Opcode::Mul:
        case Opcode::Divu:
        case Opcode::Remu:
        case Opcode::Sltu:
        case Opcode::Lw:
        case Opcode::Sw:
          control_in[pc + 4].push_back({ ControlEdge::Kind::Plain, pc, 0 });
          break;
        case Opcode::Addi:
          if (ins.rs1 == 0 && ins.imm != 0 && ins.rd == kRegA7) {
            uint32_t next_pc = pc + 4;
            if (!in_code(next_pc) || instr_at(next_pc).op != Opcode::Ecall)
              fail("a7 is set at " + hex(pc) + " without an immediately following ecall");
            tracked_a7 = uint32_t(ins.imm);
          }
          control_in[pc + 4].push_back({ ControlEdge::Kind::Plain, pc, 0 });
          break;
        case Opcode::Beq: {
          const InstrInfo & ii = instrs[pc];
          control_in[pc + uint32_t(ins.imm)].push_back({ ControlEdge::Kind::Beq, pc, ii.beq_eq });
          control_in[pc + 4].push_back({ ControlEdge::Kind::Beq, pc, ii.beq_neq });
          break;
        }
        case Opcode::Jal: {
          control_in[pc + uint32_t(ins.imm)].push_back({ ControlEdge::Kind::Plain, pc, 0 });
          if (ins.rd != 0)
            control_in[pc + 4].push_back(
                { ControlEdge::Kind::CallReturn, pc + uint32_t(ins.imm), instrs[pc].link });
          break;
        }
        case Opcode::Jalr:
          if (!jal_targets.count(current_callee))
            fail("jalr at " + hex(pc) + ": current callee " + hex(current_callee) +
                 " is not a jal target");
          call_return[current_callee] = pc;
          current_callee = pc + 4;
          break;
        case Opcode::Ecall:
          if (tracked_a7 == kSyscallExit) current_callee = pc + 4;
          tracked_a7 = 0;
          control_in[pc + 4].push_back({ ControlEdge::Kind::Ecall, pc, 0 });
          break;
      }
    }
  }

  // --- system calls
  e.comment("system calls");
  Nid id_exit = e.emit("constd 2 93 ; SYSCALL_EXIT");
  Nid id_read = e.emit("constd 2 63 ; SYSCALL_READ");
  Nid id_write = e.emit("constd 2 64 ; SYSCALL_WRITE");
  Nid id_openat = e.emit("constd 2 56 ; SYSCALL_OPENAT");
  Nid id_brk = e.emit("constd 2 214 ; SYSCALL_BRK");
  Nid is_exit = e.emit("eq 1 " + dec(reg[kRegA7]) + " " + dec(id_exit));
  Nid is_read = e.emit("eq 1 " + dec(reg[kRegA7]) + " " + dec(id_read));
  Nid is_write = e.emit("eq 1 " + dec(reg[kRegA7]) + " " + dec(id_write));
  Nid is_openat = e.emit("eq 1 " + dec(reg[kRegA7]) + " " + dec(id_openat));
  Nid is_brk = e.emit("eq 1 " + dec(reg[kRegA7]) + " " + dec(id_brk));
  e.blank();

  e.comment("exit system call stays in kernel mode indefinitely");
  Nid exit_active = e.emit("and 1 " + dec(ecall_flow) + " " + dec(is_exit));
  Nid kernel_flow = e.emit("ite 1 60 " + dec(is_exit) + " " + dec(exit_active));
  e.blank();

  e.comment("read system call");
  Nid read_active = e.emit("and 1 " + dec(ecall_flow) + " " + dec(is_read));
  start_access_flow = e.emit("ite 2 " + dec(read_active) + " " + dec(reg[kRegA1]) + " " +
                             dec(start_access_flow));
  kernel_flow = e.emit("ite 1 " + dec(read_active) + " 11 " + dec(kernel_flow));
  Nid a0_flow = reg_flow[kRegA0];
  a0_flow = e.emit("ite 2 " + dec(read_active) + " 20 " + dec(a0_flow) + " ; a0 = 0 bytes read");
  Nid read_sub = e.emit("sub 2 " + dec(reg[kRegA2]) + " " + dec(reg[kRegA0]) + " ; a2 - a0");
  Nid read_cmp = e.emit("ugte 1 " + dec(read_sub) + " 24 ; a2 - a0 >= 4 bytes");
  Nid read_inc = e.emit("ite 2 " + dec(read_cmp) + " 24 " + dec(read_sub));
  Nid inc_is2 = e.emit("eq 1 " + dec(read_inc) + " 22");
  Nid input_sel = e.emit("ite 2 " + dec(inc_is2) + " " + dec(uext2) + " " + dec(uext1));
  Nid inc_is3 = e.emit("eq 1 " + dec(read_inc) + " 23");
  input_sel = e.emit("ite 2 " + dec(inc_is3) + " " + dec(uext3) + " " + dec(input_sel));
  Nid inc_is4 = e.emit("eq 1 " + dec(read_inc) + " 24");
  input_sel = e.emit("ite 2 " + dec(inc_is4) + " " + dec(input4) + " " + dec(input_sel));
  Nid read_cursor = e.emit("add 2 " + dec(reg[kRegA1]) + " " + dec(reg[kRegA0]) + " ; a1 + a0");
  Nid read_more = e.emit("ult 1 " + dec(reg[kRegA0]) + " " + dec(reg[kRegA2]) + " ; a0 < a2");
  Nid read_goon = e.emit("and 1 " + dec(is_read) + " " + dec(read_more));
  Nid read_active_kernel = e.emit("and 1 60 " + dec(read_goon) + " ; read in kernel mode, not done");
  Nid read_ugti = e.emit("ugt 1 " + dec(read_inc) + " 20 ; increment > 0");
  Nid read_kernel_inc = e.emit("and 1 " + dec(read_active_kernel) + " " + dec(read_ugti));
  for (size_t p = 0; p < memory_words.size(); ++p) {
    Nid at = e.emit("eq 1 " + dec(read_cursor) + " " + dec(mem_vaddr[p]));
    Nid val = e.emit("ite 2 " + dec(at) + " " + dec(input_sel) + " " + dec(mem_write_flow[p]));
    Nid into = e.emit("ite 2 " + dec(read_kernel_inc) + " " + dec(val) + " " + dec(mem_write_flow[p]));
    mem_write_flow[p] = into;
  }
  Nid move_cursor = e.emit("add 2 " + dec(reg[kRegA0]) + " " + dec(read_inc) + " ; a0 + increment");
  a0_flow = e.emit("ite 2 " + dec(read_active_kernel) + " " + dec(move_cursor) + " " + dec(a0_flow));
  kernel_flow = e.emit("ite 1 " + dec(read_active_kernel) + " 11 " + dec(kernel_flow) +
                       " ; stay in kernel mode while reading");
  e.blank();

  e.comment("write system call");
  Nid write_active = e.emit("and 1 " + dec(ecall_flow) + " " + dec(is_write));
  start_access_flow = e.emit("ite 2 " + dec(write_active) + " " + dec(reg[kRegA1]) + " " +
                             dec(start_access_flow));
  a0_flow = e.emit("ite 2 " + dec(write_active) + " " + dec(reg[kRegA2]) + " " + dec(a0_flow) +
                   " ; a0 = a2 bytes written");
  e.blank();

  e.comment("openat system call");
  Nid openat_active = e.emit("and 1 " + dec(ecall_flow) + " " + dec(is_openat));
  start_access_flow = e.emit("ite 2 " + dec(openat_active) + " " + dec(reg[kRegA1]) + " " +
                             dec(start_access_flow));
  Nid fd_bump = e.emit("state 2 fd-bump-pointer");
  e.emit("init 2 " + dec(fd_bump) + " 21 fd-bump-pointer");
  Nid fd_inc = e.emit("inc 2 " + dec(fd_bump));
  Nid fd_new = e.emit("ite 2 " + dec(openat_active) + " " + dec(fd_inc) + " " + dec(fd_bump));
  e.emit("next 2 " + dec(fd_bump) + " " + dec(fd_new) + " fd-bump-pointer");
  a0_flow = e.emit("ite 2 " + dec(openat_active) + " " + dec(fd_inc) + " " + dec(a0_flow));
  e.blank();

  e.comment("brk system call");
  Nid brk_active = e.emit("and 1 " + dec(ecall_flow) + " " + dec(is_brk));
  Nid brk_bump = e.emit("state 2 brk-bump-pointer");
  e.emit("init 2 " + dec(brk_bump) + " 33 brk-bump-pointer");
  Nid brk_shrink = e.emit("ulte 1 " + dec(brk_bump) + " " + dec(reg[kRegA0]) + " ; brk <= a0");
  Nid brk_free = e.emit("ult 1 " + dec(reg[kRegA0]) + " " + dec(reg[kRegSp]) + " ; a0 < sp");
  Nid brk_segment = e.emit("and 1 " + dec(brk_shrink) + " " + dec(brk_free));
  Nid brk_reset = e.emit("and 2 " + dec(reg[kRegA0]) + " 23 ; low bits of a0");
  Nid brk_aligned = e.emit("eq 1 " + dec(brk_reset) + " 20 ; a0 is word-aligned");
  Nid brk_valid = e.emit("and 1 " + dec(brk_segment) + " " + dec(brk_aligned));
  Nid brk_ok = e.emit("and 1 " + dec(brk_active) + " " + dec(brk_valid));
  Nid brk_new = e.emit("ite 2 " + dec(brk_ok) + " " + dec(reg[kRegA0]) + " " + dec(brk_bump));
  e.emit("next 2 " + dec(brk_bump) + " " + dec(brk_new) + " brk-bump-pointer");
  Nid brk_invalid = e.emit("not 1 " + dec(brk_valid));
  Nid brk_fail = e.emit("and 1 " + dec(brk_active) + " " + dec(brk_invalid));
  a0_flow = e.emit("ite 2 " + dec(brk_fail) + " " + dec(brk_bump) + " " + dec(a0_flow) +
                   " ; a0 = brk on failure");
  reg_flow[kRegA0] = a0_flow;
  e.blank();

  e.emit("next 1 60 " + dec(kernel_flow) + " kernel-mode");
  e.blank();

  // --- control flow
  e.comment("control flow");
  for (uint32_t pc = lay.code_start; pc < lay.code_end; pc += 4) {
    const InstrInfo & ii = instrs[pc];
    if (!ii.reachable) continue;
    Nid flow = 10;
    auto edges = control_in[pc];
    // newest edge first, matching the original's list construction
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
      const ControlEdge & edge = *it;
      Nid from_active = 0;
      switch (edge.kind) {
        case ControlEdge::Kind::Plain: {
          if (!instrs[edge.from_pc].reachable) continue;
          from_active = instrs[edge.from_pc].flag;
          break;
        }
        case ControlEdge::Kind::Beq: {
          if (!instrs[edge.from_pc].reachable) continue;
          from_active = e.emit("and 1 " + dec(instrs[edge.from_pc].flag) + " " +
                               dec(edge.condition) + " ; beq edge into " + hex(pc));
          break;
        }
        case ControlEdge::Kind::CallReturn: {
          auto ret = call_return.find(edge.from_pc);
          if (ret == call_return.end() || !instrs[ret->second].reachable) continue;
          Nid not_one = e.emit("not 2 21");
          Nid lsb_reset = e.emit("and 2 " + dec(reg[kRegRa]) + " " + dec(not_one));
          Nid match = e.emit("eq 1 " + dec(lsb_reset) + " " + dec(edge.condition));
          from_active = e.emit("and 1 " + dec(instrs[ret->second].flag) + " " + dec(match) +
                               " ; return into " + hex(pc));
          break;
        }
        case ControlEdge::Kind::Ecall: {
          if (!instrs[edge.from_pc].reachable) continue;
          Nid kpf = e.emit("state 1 kernel-mode-pc-flag-" + hex(edge.from_pc));
          e.emit("init 1 " + dec(kpf) + " 10 kernel-mode-pc-flag-" + hex(edge.from_pc));
          info.kernel_pc_flag_nids.push_back(kpf);
          Nid active = e.emit("ite 1 " + dec(kpf) + " 60 " + dec(instrs[edge.from_pc].flag) +
                              " ; activate ecall, keep active in kernel mode");
          e.emit("next 1 " + dec(kpf) + " " + dec(active) + " kernel-mode-pc-flag-" +
                 hex(edge.from_pc));
          from_active = e.emit("and 1 " + dec(kpf) + " " + dec(not_kernel) +
                               " ; ecall done, leaving kernel mode");
          break;
        }
      }
      if (flow == 10)
        flow = from_active;
      else
        flow = e.emit("ite 1 " + dec(from_active) + " 11 " + dec(flow));
    }
    e.emit("next 1 " + dec(ii.flag) + " " + dec(flow) + " pc-" + hex(pc));
  }
  e.blank();

  // --- register and memory updates
  e.comment("updating registers");
  for (int r = 1; r < 32; ++r)
    e.emit("next 2 " + dec(reg[r]) + " " + dec(reg_flow[r]) + " " + kRegisterNames[r]);
  e.blank();
  e.comment("updating physical memory");
  for (size_t p = 0; p < memory_words.size(); ++p)
    e.emit("next 2 " + dec(mem_word[p]) + " " + dec(mem_write_flow[p]) + " RAM-word-" + dec(p));
  e.blank();

  // --- bad states other than segmentation faults
  e.comment("checking syscall id");
  Nid chk0 = e.emit("not 1 " + dec(is_exit));
  Nid chk1 = e.emit("not 1 " + dec(is_read));
  Nid chk2 = e.emit("not 1 " + dec(is_write));
  Nid chk3 = e.emit("not 1 " + dec(is_openat));
  Nid chk4 = e.emit("not 1 " + dec(is_brk));
  Nid chk5 = e.emit("and 1 " + dec(chk0) + " " + dec(chk1));
  Nid chk6 = e.emit("and 1 " + dec(chk5) + " " + dec(chk2));
  Nid chk7 = e.emit("and 1 " + dec(chk6) + " " + dec(chk3));
  Nid chk8 = e.emit("and 1 " + dec(chk7) + " " + dec(chk4));
  Nid chk9 = e.emit("and 1 " + dec(ecall_flow) + " " + dec(chk8));
  info.bad_labels[e.emit("bad " + dec(chk9) + " b0 ; invalid syscall id")] = 0;

  e.comment("checking exit code");
  Nid exit_nonzero = e.emit("neq 1 " + dec(reg[kRegA0]) + " 20");
  Nid exit_bad = e.emit("and 1 " + dec(exit_active) + " " + dec(exit_nonzero));
  info.bad_labels[e.emit("bad " + dec(exit_bad) + " b1 ; non-zero exit code")] = 1;

  e.comment("checking division and remainder by zero");
  Nid div_zero = e.emit("eq 1 " + dec(division_flow) + " 20");
  info.bad_labels[e.emit("bad " + dec(div_zero) + " b2 ; division by zero")] = 2;
  Nid rem_zero = e.emit("eq 1 " + dec(remainder_flow) + " 20");
  info.bad_labels[e.emit("bad " + dec(rem_zero) + " b3 ; remainder by zero")] = 3;

  e.comment("checking address alignment");
  Nid addr_low = e.emit("and 2 " + dec(start_access_flow) + " 23");
  Nid addr_unaligned = e.emit("neq 1 " + dec(addr_low) + " 20");
  info.bad_labels[e.emit("bad " + dec(addr_unaligned) + " b4 ; word-unaligned memory access")] = 4;
  e.blank();

  // --- segmentation fault checks
  e.comment("checking segmentation faults");
  Nid sf0 = e.emit("ult 1 " + dec(start_access_flow) + " 30");
  info.bad_labels[e.emit("bad " + dec(sf0) + " b6 ; memory access below data segment")] = 6;
  Nid sf2 = e.emit("ugte 1 " + dec(start_access_flow) + " 31");
  Nid sf3 = e.emit("ult 1 " + dec(start_access_flow) + " 32");
  Nid sf4 = e.emit("and 1 " + dec(sf2) + " " + dec(sf3));
  info.bad_labels[e.emit("bad " + dec(sf4) + " b7 ; access between data and heap segments")] = 7;
  Nid sf6 = e.emit("ugte 1 " + dec(start_access_flow) + " " + dec(brk_bump));
  Nid sf7 = e.emit("ult 1 " + dec(start_access_flow) + " " + dec(reg[kRegSp]));
  Nid sf8 = e.emit("and 1 " + dec(sf6) + " " + dec(sf7));
  info.bad_labels[e.emit("bad " + dec(sf8) + " b8 ; access between current heap and stack")] = 8;
  Nid sf10 = e.emit("ugte 1 " + dec(start_access_flow) + " 34");
  Nid sf11 = e.emit("ult 1 " + dec(start_access_flow) + " " + dec(brk_bump));
  Nid sf12 = e.emit("and 1 " + dec(sf10) + " " + dec(sf11));
  info.bad_labels[e.emit("bad " + dec(sf12) + " b9 ; access between allowed and current end of heap")] = 9;
  Nid sf14 = e.emit("ugte 1 " + dec(start_access_flow) + " " + dec(reg[kRegSp]));
  Nid sf15 = e.emit("ult 1 " + dec(start_access_flow) + " 35");
  Nid sf16 = e.emit("and 1 " + dec(sf14) + " " + dec(sf15));
  info.bad_labels[e.emit("bad " + dec(sf16) + " b10 ; access between current and allowed start of stack")] = 10;
  Nid sf18 = e.emit("ugt 1 " + dec(start_access_flow) + " 50");
  info.bad_labels[e.emit("bad " + dec(sf18) + " b11 ; memory access above stack segment")] = 11;

  result.text = e.take();
  return result;
}

// ---------------------------------------------------------------------------
// Stream-driven simulation of a generated model

StreamSimResult simulate_with_stream(const btor2::Model & model, const BeatorInfo & info,
                                     const std::vector<uint8_t> & input, uint64_t max_steps) {
  StreamSimResult res;
  btor2::SimState state = btor2::initial_state(model);
  size_t pos = 0;

  auto reg_value = [&](int r) {
    return std::get<btor2::BitVec>(state.assignment.at(info.register_nids[r])).bits;
  };
  auto flag_value = [&](btor2::Nid nid) {
    return std::get<btor2::BitVec>(state.assignment.at(nid)).bits != 0;
  };

  for (uint64_t step = 0; step <= max_steps; ++step) {
    // One-hot invariant holds outside kernel-mode steps; register 0 is a
    // constant node by construction.
    bool kernel = flag_value(info.kernel_mode_nid);
    bool any_kernel_pc = false;
    for (btor2::Nid kpf : info.kernel_pc_flag_nids) any_kernel_pc = any_kernel_pc || flag_value(kpf);
    if (!kernel && !any_kernel_pc) {
      int on = 0;
      for (const auto & [pc, nid] : info.pc_flag_nids)
        if (flag_value(nid)) ++on;
      if (on != 1) res.pc_one_hot_ok = false;
    }

    // Console stream: one input word is consumed per kernel read iteration.
    uint64_t a7 = reg_value(kRegA7);
    uint64_t a0 = reg_value(kRegA0);
    uint64_t a2 = reg_value(kRegA2);
    uint32_t inc = 0;
    if (kernel && a7 == kSyscallRead && a0 < a2) inc = uint32_t(std::min<uint64_t>(4, a2 - a0));

    btor2::InputMap inputs;
    auto stream_word = [&](uint32_t count) {
      uint64_t word = 0;
      for (uint32_t i = 0; i < count; ++i) {
        uint8_t byte = pos + i < input.size() ? input[pos + i] : 0;
        word |= uint64_t(byte) << (8 * i);
      }
      return word;
    };
    inputs[info.input_nids[0]] = btor2::BitVec(8, stream_word(1));
    inputs[info.input_nids[1]] = btor2::BitVec(16, stream_word(2));
    inputs[info.input_nids[2]] = btor2::BitVec(24, stream_word(3));
    inputs[info.input_nids[3]] = btor2::BitVec(32, stream_word(4));

    res.consumed_inputs.emplace_back();
    if (inc > 0) {
      btor2::Nid selected = info.input_nids[inc - 1];
      res.consumed_inputs.back().emplace(selected, btor2::BitVec(8 * inc, stream_word(inc)));
    }

    auto flags = btor2::eval_bads(model, state, inputs);
    for (const auto & [nid, hit] : flags) {
      if (hit) {
        res.bad_id = info.bad_labels.at(nid);
        res.bad_step = step;
        res.bad_flags = flags;
        res.steps = step;
        return res;
      }
    }
    if (step == max_steps) break;
    state = btor2::step_model(model, state, inputs).next;
    pos += inc;
  }
  res.steps = max_steps;
  return res;
}

}  // namespace qubomc::riscu
