#include "qubomc/formats.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace qubomc {

namespace {

[[noreturn]] void fail(const std::string & msg) { throw QubomcError("format: " + msg); }

std::string bit_str(const Bit & b) {
  if (b.is_const()) return b.const_value() ? "c1" : "c0";
  return "v" + std::to_string(b.var_id());
}

Bit parse_bit(const std::string & tok, size_t num_vars) {
  if (tok == "c0") return Bit::zero();
  if (tok == "c1") return Bit::one();
  if (tok.size() >= 2 && tok[0] == 'v') {
    uint64_t v = std::stoull(tok.substr(1));
    if (v >= num_vars) fail("bit references unallocated variable " + tok);
    return Bit::var(Var(v));
  }
  fail("malformed bit token '" + tok + "'");
}

}  // namespace

QuboFile make_qubo_file(const Translation & translation) {
  QuboFile file;
  // The Bqm is copied wholesale; only the metadata needs assembling.
  file.bqm = translation.bqm;
  file.steps = translation.frames.size();
  for (const Frame & frame : translation.frames) {
    for (const auto & [nid, word] : frame.input_words)
      file.input_words[{ frame.step, nid }] = word.bits;
    for (const auto & [nid, bit] : frame.bad_bits)
      file.bad_bits[{ frame.step, nid }] = bit;
  }
  file.or_output = translation.or_output;
  return file;
}

void write_qubo_file(std::ostream & out, const QuboFile & file) {
  const Bqm & m = file.bqm;
  out << "qubomc-qubo 1\n";
  out << "vars " << m.num_vars() << "\n";
  out << "offset " << m.offset() << "\n";
  out << "steps " << file.steps << "\n";
  out << "produced";
  for (Var v = 0; v < m.num_vars(); ++v) out << (m.is_produced(v) ? " 1" : " 0");
  out << "\n";
  for (Var v = 0; v < m.num_vars(); ++v)
    if (m.linear()[v] != 0) out << "lin " << v << " " << m.linear()[v] << "\n";
  for (const auto & [key, c] : m.quadratic())
    if (c != 0) out << "quad " << key.first << " " << key.second << " " << c << "\n";
  for (const TraceItem & item : m.trace()) {
    if (std::holds_alternative<GateRec>(item)) {
      const GateRec & g = std::get<GateRec>(item);
      out << "gate " << gate_name(g.kind) << " " << bit_str(g.a);
      if (g.kind != Gate::Not) out << " " << bit_str(g.b);
      out << " v" << g.out;
      if (g.has_anc) out << " v" << g.anc;
      out << "\n";
    } else {
      const DivRec & d = std::get<DivRec>(item);
      out << "div " << d.dividend.size();
      for (const Bit & b : d.dividend) out << " " << bit_str(b);
      for (const Bit & b : d.divisor) out << " " << bit_str(b);
      for (Var v : d.quotient) out << " v" << v;
      for (Var v : d.remainder) out << " v" << v;
      out << "\n";
    }
  }
  for (const auto & [key, bits] : file.input_words) {
    out << "input " << key.first << " " << key.second << " " << bits.size();
    for (const Bit & b : bits) out << " " << bit_str(b);
    out << "\n";
  }
  out << "or " << bit_str(file.or_output) << "\n";
  for (const auto & [key, bit] : file.bad_bits)
    out << "bad " << key.first << " " << key.second << " " << bit_str(bit) << "\n";
  out << "end\n";
}

QuboFile read_qubo_file(std::istream & in) {
  QuboFile file;
  std::string line;
  size_t num_vars = 0;
  bool header_seen = false;
  bool end_seen = false;
  std::vector<int64_t> linear;

  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (!header_seen) {
      int version = 0;
      if (kw != "qubomc-qubo" || !(ls >> version) || version != 1)
        fail("not a qubomc-qubo version 1 file");
      header_seen = true;
      continue;
    }
    if (kw == "vars") {
      ls >> num_vars;
    } else if (kw == "offset") {
      int64_t offset;
      ls >> offset;
      file.bqm.add_offset(offset);
    } else if (kw == "steps") {
      ls >> file.steps;
    } else if (kw == "produced") {
      for (size_t i = 0; i < num_vars; ++i) {
        int flag;
        if (!(ls >> flag)) fail("produced flags do not cover all variables");
        file.bqm.new_var(flag != 0);
      }
    } else if (kw == "lin") {
      uint64_t v;
      int64_t c;
      if (!(ls >> v >> c)) fail("malformed lin line");
      file.bqm.add_linear(Var(v), c);
    } else if (kw == "quad") {
      uint64_t u, v;
      int64_t c;
      if (!(ls >> u >> v >> c)) fail("malformed quad line");
      if (u >= v) fail("quad keys must satisfy u < v");
      file.bqm.add_quadratic(Var(u), Var(v), c);
    } else if (kw == "gate") {
      std::string kind, a, b, out_tok, anc_tok;
      if (!(ls >> kind >> a)) fail("malformed gate line");
      GateRec g;
      if (kind == "NOT") g.kind = Gate::Not;
      else if (kind == "AND") g.kind = Gate::And;
      else if (kind == "NAND") g.kind = Gate::Nand;
      else if (kind == "OR") g.kind = Gate::Or;
      else if (kind == "INHIBIT") g.kind = Gate::Inhibit;
      else if (kind == "XOR") g.kind = Gate::Xor;
      else fail("unknown gate kind '" + kind + "'");
      g.a = parse_bit(a, num_vars);
      if (g.kind != Gate::Not) {
        if (!(ls >> b)) fail("malformed gate line");
        g.b = parse_bit(b, num_vars);
      }
      if (!(ls >> out_tok)) fail("gate line lacks an output");
      Bit out_bit = parse_bit(out_tok, num_vars);
      if (out_bit.is_const()) fail("gate output must be a variable");
      g.out = out_bit.var_id();
      if (g.kind == Gate::Xor) {
        if (!(ls >> anc_tok)) fail("XOR gate lacks an ancilla");
        Bit anc_bit = parse_bit(anc_tok, num_vars);
        g.anc = anc_bit.var_id();
        g.has_anc = true;
      }
      file.bqm.append_trace(g);
    } else if (kw == "div") {
      size_t width;
      if (!(ls >> width)) fail("malformed div line");
      DivRec d;
      std::string tok;
      auto read_bits = [&](std::vector<Bit> & out_bits) {
        for (size_t i = 0; i < width; ++i) {
          if (!(ls >> tok)) fail("malformed div line");
          out_bits.push_back(parse_bit(tok, num_vars));
        }
      };
      auto read_vars = [&](std::vector<Var> & out_vars) {
        for (size_t i = 0; i < width; ++i) {
          if (!(ls >> tok)) fail("malformed div line");
          Bit b = parse_bit(tok, num_vars);
          if (b.is_const()) fail("div witness must be a variable");
          out_vars.push_back(b.var_id());
        }
      };
      read_bits(d.dividend);
      read_bits(d.divisor);
      read_vars(d.quotient);
      read_vars(d.remainder);
      file.bqm.append_trace(std::move(d));
    } else if (kw == "input") {
      uint64_t step;
      int64_t nid;
      size_t width;
      if (!(ls >> step >> nid >> width)) fail("malformed input line");
      std::vector<Bit> bits;
      std::string tok;
      for (size_t i = 0; i < width; ++i) {
        if (!(ls >> tok)) fail("malformed input line");
        bits.push_back(parse_bit(tok, num_vars));
      }
      file.input_words[{ step, nid }] = std::move(bits);
    } else if (kw == "or") {
      std::string tok;
      if (!(ls >> tok)) fail("malformed or line");
      file.or_output = parse_bit(tok, num_vars);
    } else if (kw == "bad") {
      uint64_t step;
      int64_t nid;
      std::string tok;
      if (!(ls >> step >> nid >> tok)) fail("malformed bad line");
      file.bad_bits[{ step, nid }] = parse_bit(tok, num_vars);
    } else if (kw == "end") {
      end_seen = true;
      break;
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  if (!header_seen || !end_seen) fail("truncated qubo file");
  return file;
}

QuboFile read_qubo_file_path(const std::string & path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  return read_qubo_file(in);
}

void write_qubo_file_path(const std::string & path, const QuboFile & file) {
  std::ofstream out(path);
  if (!out) fail("cannot open '" + path + "' for writing");
  write_qubo_file(out, file);
}

Assignment qubo_assignment_for_inputs(const QuboFile & file,
                                      const std::vector<btor2::InputMap> & inputs) {
  std::map<Var, int> free_values;
  for (Var v = 0; v < file.bqm.num_vars(); ++v)
    if (!file.bqm.is_produced(v)) free_values[v] = 0;
  for (const auto & [key, bits] : file.input_words) {
    auto [step, nid] = key;
    uint64_t value = 0;
    if (step < inputs.size()) {
      auto it = inputs[step].find(nid);
      if (it != inputs[step].end()) value = it->second.bits;
    }
    for (size_t i = 0; i < bits.size(); ++i)
      if (!bits[i].is_const()) free_values[bits[i].var_id()] = int((value >> i) & 1);
  }
  return forward_assignment(file.bqm, free_values);
}

std::vector<btor2::InputMap> qubo_decode_witness(const QuboFile & file,
                                                 const Assignment & assignment) {
  std::vector<btor2::InputMap> result(file.steps);
  for (const auto & [key, bits] : file.input_words) {
    auto [step, nid] = key;
    uint64_t v = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
      bool set = bits[i].is_const() ? bits[i].const_value() : assignment[bits[i].var_id()] != 0;
      if (set) v |= uint64_t(1) << i;
    }
    if (step < result.size())
      result[step].emplace(nid, btor2::BitVec(uint32_t(bits.size()), v));
  }
  return result;
}

// ---------------------------------------------------------------------------

WitnessFile make_witness_file(uint64_t bound, const std::vector<btor2::InputMap> & inputs,
                              std::optional<int> expected_bad) {
  WitnessFile w;
  w.bound = bound;
  w.expected_bad = expected_bad;
  w.steps.resize(inputs.size());
  for (size_t step = 0; step < inputs.size(); ++step)
    for (const auto & [nid, value] : inputs[step])
      w.steps[step][nid] = { value.width, value.bits };
  return w;
}

std::vector<btor2::InputMap> witness_inputs(const WitnessFile & witness) {
  std::vector<btor2::InputMap> result(witness.steps.size());
  for (size_t step = 0; step < witness.steps.size(); ++step)
    for (const auto & [nid, wv] : witness.steps[step])
      result[step].emplace(nid, btor2::BitVec(wv.first, wv.second));
  return result;
}

void write_witness_file(std::ostream & out, const WitnessFile & witness) {
  out << "qubomc-witness 1\n";
  out << "bound " << witness.bound << "\n";
  if (witness.expected_bad) out << "expected-bad b" << *witness.expected_bad << "\n";
  for (size_t step = 0; step < witness.steps.size(); ++step) {
    if (witness.steps[step].empty()) continue;
    out << "step " << step << "\n";
    for (const auto & [nid, wv] : witness.steps[step])
      out << "in " << nid << " " << wv.first << " " << wv.second << "\n";
  }
  out << "end\n";
}

WitnessFile read_witness_file(std::istream & in) {
  WitnessFile w;
  std::string line;
  bool header_seen = false;
  bool end_seen = false;
  size_t current_step = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (!header_seen) {
      int version = 0;
      if (kw != "qubomc-witness" || !(ls >> version) || version != 1)
        fail("not a qubomc-witness version 1 file");
      header_seen = true;
      continue;
    }
    if (kw == "bound") {
      ls >> w.bound;
      if (w.steps.size() < w.bound + 1) w.steps.resize(w.bound + 1);
    } else if (kw == "expected-bad") {
      std::string label;
      ls >> label;
      if (label.size() < 2 || label[0] != 'b') fail("malformed expected-bad label");
      w.expected_bad = std::stoi(label.substr(1));
    } else if (kw == "step") {
      if (!(ls >> current_step)) fail("malformed step line");
      if (w.steps.size() < current_step + 1) w.steps.resize(current_step + 1);
    } else if (kw == "in") {
      int64_t nid;
      uint32_t width;
      uint64_t value;
      if (!(ls >> nid >> width >> value)) fail("malformed in line");
      if (w.steps.size() < current_step + 1) w.steps.resize(current_step + 1);
      w.steps[current_step][nid] = { width, value };
    } else if (kw == "end") {
      end_seen = true;
      break;
    } else {
      fail("unknown witness keyword '" + kw + "'");
    }
  }
  if (!header_seen || !end_seen) fail("truncated witness file");
  return w;
}

WitnessFile read_witness_file_path(const std::string & path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  return read_witness_file(in);
}

void write_witness_file_path(const std::string & path, const WitnessFile & witness) {
  std::ofstream out(path);
  if (!out) fail("cannot open '" + path + "' for writing");
  write_witness_file(out, witness);
}

// ---------------------------------------------------------------------------

void write_stats_csv(std::ostream & out, const Translation & translation) {
  out << "step,new_vars,cumulative_vars,nonconstant_pc_flags\n";
  for (const FrameStats & st : translation.stats)
    out << st.step << ',' << st.new_vars << ',' << st.cumulative_vars << ','
        << st.nonconstant_pc_flags << '\n';
}

}  // namespace qubomc
