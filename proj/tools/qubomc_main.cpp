#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qubomc/btor2.hpp"
#include "qubomc/formats.hpp"
#include "qubomc/riscu.hpp"
#include "qubomc/solve.hpp"
#include "qubomc/unroll.hpp"

namespace {

using namespace qubomc;

constexpr int kExitOk = 0;
constexpr int kExitNoWitness = 1;
constexpr int kExitUsage = 2;

uint32_t env_limit(const char * name, uint32_t fallback) {
  const char * v = std::getenv(name);
  if (!v) return fallback;
  return uint32_t(std::strtoul(v, nullptr, 10));
}

UnrollOptions options_from_env(int64_t strength) {
  UnrollOptions opts;
  opts.pin_strength = strength;
  opts.array_index_limit = env_limit("QUBOMC_ARRAY_LIMIT", opts.array_index_limit);
  return opts;
}

std::string read_text_file(const std::string & path) {
  std::ifstream in(path);
  if (!in) throw QubomcError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string & path, const std::string & text) {
  std::ofstream out(path);
  if (!out) throw QubomcError("cannot open '" + path + "' for writing");
  out << text;
}

std::vector<uint8_t> parse_input_bytes(const std::string & spec) {
  // "49" or "0x31" single byte values separated by commas, or a quoted-free
  // string prefixed with "text:".
  std::vector<uint8_t> bytes;
  if (spec.rfind("text:", 0) == 0) {
    for (char c : spec.substr(5)) bytes.push_back(uint8_t(c));
    return bytes;
  }
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    long v = std::stol(tok, nullptr, 0);
    if (v < 0 || v > 255) throw QubomcError("input byte out of range: " + tok);
    bytes.push_back(uint8_t(v));
  }
  return bytes;
}

struct SolveSettings {
  std::string method = "exhaustive";
  std::optional<uint64_t> seed;
  uint64_t sweeps = 2000;
  uint64_t restarts = 64;
  double t0 = 4.0;
  double t1 = 0.05;
  uint32_t var_limit = 24;
};

SolveResult run_solver(const Bqm & model, const SolveSettings & s) {
  if (s.method == "exhaustive") return solve_exhaustive(model, s.var_limit);
  if (s.method == "anneal") {
    if (!s.seed) throw QubomcError("--seed is required with --method anneal");
    AnnealParams params;
    params.sweeps = s.sweeps;
    params.restarts = s.restarts;
    params.initial_temperature = s.t0;
    params.final_temperature = s.t1;
    params.seed = *s.seed;
    return solve_anneal(model, params);
  }
  if (s.method == "scan") return solve_input_scan(model);
  if (s.method == "auto") {
    if (model.num_vars() <= s.var_limit) return solve_exhaustive(model, s.var_limit);
    ForwardEvaluator eval(model);
    if (eval.free_vars().size() <= 20) return solve_input_scan(model);
    if (!s.seed) throw QubomcError("--seed is required when auto falls back to annealing");
    AnnealParams params;
    params.sweeps = s.sweeps;
    params.restarts = s.restarts;
    params.initial_temperature = s.t0;
    params.final_temperature = s.t1;
    params.seed = *s.seed;
    return solve_anneal(model, params);
  }
  throw QubomcError("unknown method '" + s.method + "'");
}

void add_solve_flags(CLI::App * cmd, SolveSettings & s, bool with_method = true) {
  if (with_method)
    cmd->add_option("--method", s.method, "exhaustive | anneal | scan | auto");
  cmd->add_option("--seed", s.seed, "annealer seed (mandatory for anneal)");
  cmd->add_option("--sweeps", s.sweeps, "annealer sweeps per restart");
  cmd->add_option("--restarts", s.restarts, "annealer restarts");
  cmd->add_option("--t0", s.t0, "annealer initial temperature");
  cmd->add_option("--t1", s.t1, "annealer final temperature");
  cmd->add_option("--var-limit", s.var_limit, "exhaustive enumeration variable limit");
}

int cmd_assemble(const std::string & path) {
  riscu::Program program = riscu::assemble_file(path);
  std::cout << riscu::disassemble(program);
  const riscu::Layout & lay = program.layout;
  std::cout << "code  [0x" << std::hex << lay.code_start << ", 0x" << lay.code_end << ")\n";
  std::cout << "data  [0x" << lay.data_start << ", 0x" << lay.data_end << ")\n";
  std::cout << "heap  [0x" << lay.heap_start << ", 0x" << lay.allowed_heap_end << ") allowed\n";
  std::cout << "stack [0x" << lay.allowed_stack_start << ", 0x" << lay.highest
            << "] allowed, sp=0x" << lay.sp_boot << std::dec << "\n";
  return kExitOk;
}

int cmd_emulate(const std::string & path, const std::string & input_spec, uint64_t step_limit) {
  riscu::Program program = riscu::assemble_file(path);
  std::vector<uint8_t> input = parse_input_bytes(input_spec);
  riscu::Outcome outcome = riscu::emulate(program, input, step_limit);
  switch (outcome.kind) {
    case riscu::Outcome::Kind::Exit:
      std::cout << "exit " << outcome.exit_code << " after " << outcome.steps << " steps ("
                << outcome.instructions << " instructions)\n";
      return outcome.exit_code == 0 ? kExitOk : kExitNoWitness;
    case riscu::Outcome::Kind::Bad:
      std::cout << "bad b" << outcome.bad_id << " (" << riscu::bad_description(outcome.bad_id)
                << ") at step " << outcome.bad_step << " (" << outcome.instructions
                << " instructions)\n";
      return kExitOk;
    case riscu::Outcome::Kind::StepLimit:
      std::cout << "step limit reached after " << outcome.steps << " steps\n";
      return kExitNoWitness;
  }
  return kExitUsage;
}

int cmd_beator(const std::string & input, const std::string & output) {
  riscu::Program program = riscu::assemble_file(input);
  riscu::BeatorOutput out = riscu::translate(program);
  if (output.empty())
    std::cout << out.text;
  else
    write_text_file(output, out.text);
  return kExitOk;
}

int cmd_qubot(const std::string & input, const std::string & output, uint64_t bound,
              int64_t strength) {
  btor2::Model model = btor2::parse_file(input);
  Translation t = translate(model, bound, options_from_env(strength));
  QuboFile file = make_qubo_file(t);
  std::ostringstream ss;
  write_qubo_file(ss, file);
  if (output.empty())
    std::cout << ss.str();
  else
    write_text_file(output, ss.str());
  std::cerr << "qubot: " << t.bqm.num_vars() << " variables, offset " << t.bqm.offset()
            << ", " << t.frames.size() << " frames\n";
  return kExitOk;
}

int cmd_solve(const std::string & input, const std::string & witness_path,
              const SolveSettings & settings) {
  QuboFile file = read_qubo_file_path(input);
  SolveResult result = run_solver(file.bqm, settings);
  std::cout << "energy " << result.best_energy << "\n";
  if (result.best_energy != 0) return kExitNoWitness;
  auto inputs = qubo_decode_witness(file, result.best_assignment);
  WitnessFile w = make_witness_file(file.steps == 0 ? 0 : file.steps - 1, inputs, std::nullopt);
  if (witness_path.empty())
    write_witness_file(std::cout, w);
  else
    write_witness_file_path(witness_path, w);
  return kExitOk;
}

int cmd_validate(const std::string & model_path, const std::string & witness_path,
                 int64_t strength) {
  WitnessFile w = read_witness_file_path(witness_path);
  auto inputs = witness_inputs(w);

  // Peek at the first line to tell a QUBO file from a BTOR2 model.
  std::string text = read_text_file(model_path);
  if (text.rfind("qubomc-qubo", 0) == 0) {
    std::istringstream in(text);
    QuboFile file = read_qubo_file(in);
    Assignment a = qubo_assignment_for_inputs(file, inputs);
    int64_t energy = file.bqm.evaluate_energy(a);
    std::cout << "energy " << energy << "\n";
    return energy == 0 ? kExitOk : kExitNoWitness;
  }

  btor2::Model model = btor2::parse(text);
  Translation t = translate(model, w.bound, options_from_env(strength));
  ValidationResult res = validate_on_input(model, t, inputs);
  std::cout << "energy " << res.energy << "\n";
  std::cout << "simulator " << (res.simulator_bad ? "bad at step " + std::to_string(res.simulator_bad_step)
                                                  : std::string("no bad within bound"))
            << "\n";
  std::cout << "agreement " << (res.agrees ? "yes" : "no") << "\n";
  return res.energy == 0 && res.agrees ? kExitOk : kExitNoWitness;
}

int cmd_stats(const std::string & input, uint64_t bound, int64_t strength,
              const std::string & output) {
  btor2::Model model = btor2::parse_file(input);
  Translation t = translate(model, bound, options_from_env(strength));
  if (output.empty()) {
    write_stats_csv(std::cout, t);
  } else {
    std::ofstream out(output);
    if (!out) throw QubomcError("cannot open '" + output + "' for writing");
    write_stats_csv(out, t);
  }
  return kExitOk;
}

int cmd_pipeline(const std::string & asm_path, uint64_t bound, const SolveSettings & settings,
                 int64_t strength, uint64_t scan_bytes, uint64_t step_limit) {
  riscu::Program program = riscu::assemble_file(asm_path);
  riscu::BeatorOutput beator = riscu::translate(program);
  btor2::Model model = btor2::parse(beator.text);
  Translation t = translate(model, bound, options_from_env(strength));
  std::cerr << "pipeline: " << t.bqm.num_vars() << " variables at bound " << bound << "\n";

  std::optional<std::vector<btor2::InputMap>> witness;

  // Small models solve directly.
  if (t.bqm.num_vars() <= settings.var_limit) {
    SolveResult r = solve_exhaustive(t.bqm, settings.var_limit);
    if (r.best_energy == 0) witness = decode_witness(t, r.best_assignment);
  } else if (settings.method == "anneal" && settings.seed) {
    AnnealParams params;
    params.sweeps = settings.sweeps;
    params.restarts = settings.restarts;
    params.initial_temperature = settings.t0;
    params.final_temperature = settings.t1;
    params.seed = *settings.seed;
    SolveResult r = solve_anneal(t.bqm, params);
    std::cerr << "pipeline: annealer best energy " << r.best_energy << "\n";
    if (r.best_energy == 0) witness = decode_witness(t, r.best_assignment);
  }

  // Console-byte scan: validate every candidate byte sequence through
  // forward evaluation (zero energy identifies a witness exactly).
  if (!witness && scan_bytes > 0) {
    std::vector<uint8_t> bytes(scan_bytes, 0);
    uint64_t total = 1;
    for (uint64_t i = 0; i < scan_bytes; ++i) {
      if (total > (uint64_t(1) << 24) / 256) throw QubomcError("scan space too large");
      total *= 256;
    }
    for (uint64_t candidate = 0; candidate < total && !witness; ++candidate) {
      uint64_t c = candidate;
      for (uint64_t i = 0; i < scan_bytes; ++i, c /= 256) bytes[i] = uint8_t(c % 256);
      riscu::StreamSimResult sim = riscu::simulate_with_stream(model, beator.info, bytes, bound);
      if (sim.bad_id) {
        riscu::Outcome emu = riscu::emulate(program, bytes, step_limit);
        std::cerr << "pipeline: console bytes";
        for (uint8_t b : bytes) std::cerr << ' ' << unsigned(b);
        std::cerr << " reach b" << *sim.bad_id << " at step " << sim.bad_step << " (emulator: "
                  << (emu.kind == riscu::Outcome::Kind::Bad ? "b" + std::to_string(emu.bad_id)
                                                            : std::string("no bad"))
                  << ")\n";
        std::vector<btor2::InputMap> inputs = sim.consumed_inputs;
        inputs.resize(bound + 1);
        witness = std::move(inputs);
      }
    }
  }

  if (!witness) {
    std::cerr << "pipeline: no witness found at bound " << bound << "\n";
    return kExitNoWitness;
  }

  ValidationResult res = validate_on_input(model, t, *witness);
  std::cout << "energy " << res.energy << "\n";
  std::cout << "validated " << (res.agrees && res.energy == 0 ? "yes" : "no") << "\n";
  return res.agrees && res.energy == 0 ? kExitOk : kExitNoWitness;
}

}  // namespace

int main(int argc, char ** argv) {
  CLI::App app{ "RISC-U / BTOR2 bounded model checking through QUBO models" };
  app.require_subcommand(1);

  std::string input, output, witness_path, input_spec = "";
  uint64_t bound = 0, step_limit = 100000, scan_bytes = 1;
  int64_t strength = 1;
  SolveSettings settings;

  auto * assemble = app.add_subcommand("assemble", "assemble and list a RISC-U program");
  assemble->add_option("input", input, "assembly file")->required();

  auto * emulate = app.add_subcommand("emulate", "run a RISC-U program");
  emulate->add_option("input", input, "assembly file")->required();
  emulate->add_option("--input-bytes", input_spec, "console bytes, e.g. 49 or text:1");
  emulate->add_option("--step-limit", step_limit, "maximum machine steps");

  auto * beator = app.add_subcommand("beator", "translate RISC-U assembly to a BTOR2 model");
  beator->add_option("input", input, "assembly file")->required();
  beator->add_option("-o,--output", output, "output model file (default stdout)");

  auto * qubot = app.add_subcommand("qubot", "translate a BTOR2 model to a QUBO");
  qubot->add_option("input", input, "BTOR2 model file")->required();
  qubot->add_option("-o,--output", output, "output qubo file (default stdout)");
  qubot->add_option("--bound", bound, "number of state transitions")->required();
  qubot->add_option("--strength", strength, "bad-state pin strength");

  auto * solve = app.add_subcommand("solve", "solve a QUBO file");
  solve->add_option("input", input, "qubo file")->required();
  solve->add_option("-o,--output", witness_path, "witness output file (default stdout)");
  add_solve_flags(solve, settings);

  auto * validate = app.add_subcommand("validate", "validate a witness against a model");
  validate->add_option("model", input, "BTOR2 model or qubo file")->required();
  validate->add_option("witness", witness_path, "witness file")->required();
  validate->add_option("--strength", strength, "bad-state pin strength");

  auto * stats = app.add_subcommand("stats", "per-step variable growth CSV");
  stats->add_option("input", input, "BTOR2 model file")->required();
  stats->add_option("--bound", bound, "number of state transitions")->required();
  stats->add_option("-o,--output", output, "CSV output file (default stdout)");
  stats->add_option("--strength", strength, "bad-state pin strength");

  auto * pipeline = app.add_subcommand("pipeline", "assembly to validated witness");
  pipeline->add_option("input", input, "assembly file")->required();
  pipeline->add_option("--bound", bound, "number of state transitions")->required();
  pipeline->add_option("--strength", strength, "bad-state pin strength");
  pipeline->add_option("--scan-bytes", scan_bytes, "console bytes to enumerate");
  pipeline->add_option("--step-limit", step_limit, "emulator step limit");
  add_solve_flags(pipeline, settings);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & err) {
    int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (assemble->parsed()) return cmd_assemble(input);
    if (emulate->parsed()) return cmd_emulate(input, input_spec, step_limit);
    if (beator->parsed()) return cmd_beator(input, output);
    if (qubot->parsed()) return cmd_qubot(input, output, bound, strength);
    if (solve->parsed()) return cmd_solve(input, witness_path, settings);
    if (validate->parsed()) return cmd_validate(input, witness_path, strength);
    if (stats->parsed()) return cmd_stats(input, bound, strength, output);
    if (pipeline->parsed()) return cmd_pipeline(input, bound, settings, strength, scan_bytes, step_limit);
  } catch (const QubomcError & err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception & err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
