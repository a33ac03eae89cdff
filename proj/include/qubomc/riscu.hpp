#ifndef QUBOMC_RISCU_HPP
#define QUBOMC_RISCU_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qubomc/btor2.hpp"

namespace qubomc::riscu {

enum class Opcode { Lui, Addi, Lw, Sw, Add, Sub, Mul, Divu, Remu, Sltu, Beq, Jal, Jalr, Ecall };

const char * opcode_name(Opcode op);

struct Instruction {
  Opcode op = Opcode::Ecall;
  uint8_t rd = 0;
  uint8_t rs1 = 0;
  uint8_t rs2 = 0;
  int32_t imm = 0; // byte offset for beq/jal
};

// 4KB-page-aligned segments; the stack grows down from the highest word.
struct Layout {
  uint32_t code_start = 0x10000;
  uint32_t code_end = 0x10000;
  uint32_t data_start = 0;
  uint32_t data_end = 0;
  uint32_t heap_start = 0;          // boot program break
  uint32_t allowed_heap_end = 0;    // heap_start + 4 * heap allowance words
  uint32_t allowed_stack_start = 0; // sp_boot - 4 * stack allowance words
  uint32_t sp_boot = 0xFFFFFFFC;
  uint32_t gp_boot = 0;
  uint32_t highest = 0xFFFFFFFC;
};

struct Program {
  std::vector<Instruction> code; // based at layout.code_start
  std::vector<uint32_t> data_words;
  Layout layout;
  uint32_t entry = 0x10000;
};

// Assembles the textual format documented in the README: labels,
// Table-1 mnemonics with 32-bit lw/sw, `.data`/`.word` directives and
// `.heap`/`.stack` allowance directives.
Program assemble(const std::string & text);
Program assemble_file(const std::string & path);

std::string disassemble(const Program & program);

// ---------------------------------------------------------------------------
// Emulation

// Machine state mirrors the translated model: system calls run as kernel
// micro-steps so that emulator steps and model transitions stay aligned.
struct MachineState {
  enum class Mode { Normal, KernelRead, KernelLeave };

  uint32_t pc = 0;
  std::array<uint32_t, 32> regs{}; // regs[0] pinned to 0
  std::map<uint32_t, uint32_t> memory; // word-aligned address -> word
  uint32_t brk = 0;
  uint32_t fd_bump = 1;
  bool kernel_mode = false;
  Mode mode = Mode::Normal;
  uint32_t resume_pc = 0; // pc after leaving an ecall
  size_t input_pos = 0;   // consumed console bytes
};

struct Outcome {
  enum class Kind { Exit, Bad, StepLimit } kind = Kind::StepLimit;
  uint32_t exit_code = 0;
  int bad_id = -1;       // 0..4, 6..11
  uint64_t bad_step = 0; // step index at which the condition held
  uint64_t steps = 0;    // transitions taken (aligned with model steps)
  uint64_t instructions = 0; // instructions retired
};

const char * bad_description(int bad_id);

// Executes the program on the given console bytes (reads beyond the
// provided bytes see zeros). The twelve error conditions are checked each
// step at the same points the translated model checks them.
Outcome emulate(const Program & program, const std::vector<uint8_t> & input,
                uint64_t step_limit);

// ---------------------------------------------------------------------------
// Model generation

struct BeatorInfo {
  Layout layout;
  std::array<btor2::Nid, 32> register_nids{};
  btor2::Nid kernel_mode_nid = 0;
  std::array<btor2::Nid, 4> input_nids{}; // 1..4 byte inputs
  std::map<uint32_t, btor2::Nid> pc_flag_nids;
  std::vector<btor2::Nid> kernel_pc_flag_nids;
  std::map<btor2::Nid, int> bad_labels; // bad nid -> label number
};

struct BeatorOutput {
  std::string text;
  BeatorInfo info;
};

// Emits the finite-memory model of the program: per-word memory states,
// one-hot pc flags for statically reachable instructions, kernel-mode
// system calls and the twelve bad conditions (labels b0-b4 and b6-b11).
// Output is deterministic and parses with btor2::parse.
BeatorOutput translate(const Program & program);

// ---------------------------------------------------------------------------
// Lockstep simulation of a generated model

struct StreamSimResult {
  std::optional<int> bad_id;
  uint64_t bad_step = 0;
  std::map<btor2::Nid, bool> bad_flags;
  bool pc_one_hot_ok = true;  // one instruction flag set outside kernel steps
  bool reg0_zero_ok = true;
  uint64_t steps = 0;
  // Input values the kernel read loop consumed, keyed per step by the input
  // node the loop selected; usable directly as a witness.
  std::vector<btor2::InputMap> consumed_inputs;
};

// Runs the simulator on a generated model, feeding console bytes through
// the input nodes exactly as the kernel read loop consumes them.
StreamSimResult simulate_with_stream(const btor2::Model & model, const BeatorInfo & info,
                                     const std::vector<uint8_t> & input, uint64_t max_steps);

}  // namespace qubomc::riscu

#endif
