#include "qubomc/btor2.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace qubomc::btor2 {

namespace {

[[noreturn]] void fail(const std::string & msg) { throw QubomcError("btor2: " + msg); }

[[noreturn]] void fail_at(size_t line_no, const std::string & msg) {
  fail("line " + std::to_string(line_no) + ": " + msg);
}

struct KindInfo {
  NodeKind kind;
  int num_operands;  // nid operands
  int num_literals;  // trailing integer literals
};

const std::unordered_map<std::string, KindInfo> & keyword_table() {
  static const std::unordered_map<std::string, KindInfo> table = {
      { "zero", { NodeKind::Zero, 0, 0 } },
      { "one", { NodeKind::One, 0, 0 } },
      { "constd", { NodeKind::Constd, 0, 1 } },
      { "const", { NodeKind::Const, 0, 0 } },
      { "consth", { NodeKind::Consth, 0, 0 } },
      { "add", { NodeKind::Add, 2, 0 } },
      { "sub", { NodeKind::Sub, 2, 0 } },
      { "mul", { NodeKind::Mul, 2, 0 } },
      { "udiv", { NodeKind::Udiv, 2, 0 } },
      { "urem", { NodeKind::Urem, 2, 0 } },
      { "ult", { NodeKind::Ult, 2, 0 } },
      { "ulte", { NodeKind::Ulte, 2, 0 } },
      { "ugt", { NodeKind::Ugt, 2, 0 } },
      { "ugte", { NodeKind::Ugte, 2, 0 } },
      { "eq", { NodeKind::Eq, 2, 0 } },
      { "neq", { NodeKind::Neq, 2, 0 } },
      { "and", { NodeKind::And, 2, 0 } },
      { "not", { NodeKind::Not, 1, 0 } },
      { "ite", { NodeKind::Ite, 3, 0 } },
      { "uext", { NodeKind::Uext, 1, 1 } },
      { "slice", { NodeKind::Slice, 1, 2 } },
      { "inc", { NodeKind::Inc, 1, 0 } },
      { "dec", { NodeKind::Dec, 1, 0 } },
      { "read", { NodeKind::Read, 2, 0 } },
      { "write", { NodeKind::Write, 3, 0 } },
      { "state", { NodeKind::State, 0, 0 } },
      { "init", { NodeKind::Init, 2, 0 } },
      { "next", { NodeKind::Next, 2, 0 } },
      { "input", { NodeKind::Input, 0, 0 } },
      { "bad", { NodeKind::Bad, 1, 0 } },
  };
  return table;
}

bool parse_int(const std::string & tok, int64_t & out) {
  if (tok.empty()) return false;
  size_t i = tok[0] == '-' ? 1 : 0;
  if (i == tok.size()) return false;
  for (size_t k = i; k < tok.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(tok[k]))) return false;
  try {
    out = std::stoll(tok);
  } catch (const std::exception &) {
    return false;
  }
  return true;
}

std::vector<std::string> tokenize(const std::string & line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) toks.push_back(tok);
  return toks;
}

bool is_const_kind(NodeKind k) {
  return k == NodeKind::Zero || k == NodeKind::One || k == NodeKind::Constd ||
         k == NodeKind::Const || k == NodeKind::Consth;
}


}  // namespace

const char * node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Sort: return "sort";
    case NodeKind::Zero: return "zero";
    case NodeKind::One: return "one";
    case NodeKind::Constd: return "constd";
    case NodeKind::Const: return "const";
    case NodeKind::Consth: return "consth";
    case NodeKind::Add: return "add";
    case NodeKind::Sub: return "sub";
    case NodeKind::Mul: return "mul";
    case NodeKind::Udiv: return "udiv";
    case NodeKind::Urem: return "urem";
    case NodeKind::Ult: return "ult";
    case NodeKind::Ulte: return "ulte";
    case NodeKind::Ugt: return "ugt";
    case NodeKind::Ugte: return "ugte";
    case NodeKind::Eq: return "eq";
    case NodeKind::Neq: return "neq";
    case NodeKind::And: return "and";
    case NodeKind::Not: return "not";
    case NodeKind::Ite: return "ite";
    case NodeKind::Uext: return "uext";
    case NodeKind::Slice: return "slice";
    case NodeKind::Inc: return "inc";
    case NodeKind::Dec: return "dec";
    case NodeKind::Read: return "read";
    case NodeKind::Write: return "write";
    case NodeKind::State: return "state";
    case NodeKind::Init: return "init";
    case NodeKind::Next: return "next";
    case NodeKind::Input: return "input";
    case NodeKind::Bad: return "bad";
  }
  return "?";
}

const Node & Model::node(Nid nid) const {
  auto it = nodes.find(nid);
  if (it == nodes.end()) fail("unknown nid " + std::to_string(nid));
  return it->second;
}

namespace {

// Resolve the value sort of a node and check operand sorts against the
// operator signature.
void resolve_sort(Model & model, Node & node, size_t line_no) {
  auto sort_ref = [&](Nid nid) -> const Node & {
    const Node & n = model.node(nid);
    if (n.kind != NodeKind::Sort) fail_at(line_no, "nid " + std::to_string(nid) + " is not a sort");
    return n;
  };
  auto value_sort = [&](Nid nid) -> const SortInfo & {
    const Node & n = model.node(nid);
    if (n.kind == NodeKind::Sort) fail_at(line_no, "sort nid used as value operand");
    return n.sort_info;
  };
  auto require_bitvec = [&](const SortInfo & s, const char * what) {
    if (s.is_array) fail_at(line_no, std::string(what) + " must be a bitvector");
  };
  auto require_width = [&](const SortInfo & s, uint32_t w, const char * what) {
    require_bitvec(s, what);
    if (s.width != w)
      fail_at(line_no, std::string(what) + " has width " + std::to_string(s.width) +
                           ", expected " + std::to_string(w));
  };

  if (node.kind == NodeKind::Bad) {
    // `bad` carries no sort; its condition must be a 1-bit value.
    require_width(value_sort(node.operands[0]), 1, "bad condition");
    node.sort_info = SortInfo{ false, 1, 0 };
    return;
  }

  const Node & sort_node = sort_ref(node.sort);
  node.sort_info = sort_node.sort_info;
  const SortInfo & res = node.sort_info;

  switch (node.kind) {
    case NodeKind::Zero:
    case NodeKind::One:
    case NodeKind::Constd:
    case NodeKind::Const:
    case NodeKind::Consth:
      require_bitvec(res, "constant");
      break;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Udiv:
    case NodeKind::Urem:
    case NodeKind::And: {
      require_bitvec(res, "result");
      for (Nid op : node.operands) require_width(value_sort(op), res.width, "operand");
      break;
    }
    case NodeKind::Ult:
    case NodeKind::Ulte:
    case NodeKind::Ugt:
    case NodeKind::Ugte:
    case NodeKind::Neq: {
      require_width(res, 1, "comparison result");
      const SortInfo & a = value_sort(node.operands[0]);
      const SortInfo & b = value_sort(node.operands[1]);
      require_bitvec(a, "operand");
      if (a.width != b.width) fail_at(line_no, "comparison operand widths differ");
      break;
    }
    case NodeKind::Eq: {
      require_width(res, 1, "eq result");
      const SortInfo & a = value_sort(node.operands[0]);
      const SortInfo & b = value_sort(node.operands[1]);
      if (a.is_array || b.is_array) fail_at(line_no, "eq over arrays is not supported");
      if (a.width != b.width) fail_at(line_no, "eq operand widths differ");
      break;
    }
    case NodeKind::Not:
    case NodeKind::Inc:
    case NodeKind::Dec:
      require_bitvec(res, "result");
      require_width(value_sort(node.operands[0]), res.width, "operand");
      break;
    case NodeKind::Ite: {
      require_width(value_sort(node.operands[0]), 1, "ite condition");
      const SortInfo & x = value_sort(node.operands[1]);
      const SortInfo & y = value_sort(node.operands[2]);
      if (res.is_array || x.is_array || y.is_array)
        fail_at(line_no, "ite over arrays is not supported");
      if (x.width != res.width || y.width != res.width)
        fail_at(line_no, "ite branch widths differ from result");
      break;
    }
    case NodeKind::Uext: {
      require_bitvec(res, "result");
      const SortInfo & x = value_sort(node.operands[0]);
      require_bitvec(x, "operand");
      int64_t amount = node.literals[0];
      if (amount < 0 || x.width + amount != res.width)
        fail_at(line_no, "uext amount does not match result width");
      break;
    }
    case NodeKind::Slice: {
      require_bitvec(res, "result");
      const SortInfo & x = value_sort(node.operands[0]);
      require_bitvec(x, "operand");
      int64_t u = node.literals[0], l = node.literals[1];
      if (l < 0 || u < l || u >= x.width) fail_at(line_no, "slice bounds out of range");
      if (res.width != uint32_t(u - l + 1)) fail_at(line_no, "slice result width mismatch");
      break;
    }
    case NodeKind::Read: {
      const SortInfo & mem = value_sort(node.operands[0]);
      if (!mem.is_array) fail_at(line_no, "read expects an array operand");
      require_width(value_sort(node.operands[1]), mem.index_width, "read index");
      require_width(res, mem.width, "read result");
      break;
    }
    case NodeKind::Write: {
      if (!res.is_array) fail_at(line_no, "write result must be an array sort");
      const SortInfo & mem = value_sort(node.operands[0]);
      if (!mem.is_array || mem.width != res.width || mem.index_width != res.index_width)
        fail_at(line_no, "write memory operand sort mismatch");
      require_width(value_sort(node.operands[1]), res.index_width, "write index");
      require_width(value_sort(node.operands[2]), res.width, "write value");
      break;
    }
    case NodeKind::State:
    case NodeKind::Input:
      break;
    case NodeKind::Init:
    case NodeKind::Next: {
      const Node & state = model.node(node.operands[0]);
      if (state.kind != NodeKind::State)
        fail_at(line_no, std::string(node_kind_name(node.kind)) + " first operand must be a state");
      const SortInfo & st = state.sort_info;
      const SortInfo & val = value_sort(node.operands[1]);
      if (st.is_array) {
        // Arrays may be initialized from a bitvector (broadcast) or
        // transition to another array expression.
        bool ok = val.is_array ? (val.width == st.width && val.index_width == st.index_width)
                               : (node.kind == NodeKind::Init && val.width == st.width);
        if (!ok) fail_at(line_no, "array state value sort mismatch");
      } else {
        if (val.is_array || val.width != st.width)
          fail_at(line_no, "state value width mismatch");
      }
      if (st.is_array != res.is_array || st.width != res.width)
        fail_at(line_no, "state/sort mismatch");
      break;
    }
    default:
      break;
  }
}

uint64_t parse_const_bits(const Node & node, size_t line_no) {
  uint32_t width = node.sort_info.width;
  switch (node.kind) {
    case NodeKind::Zero: return 0;
    case NodeKind::One: return 1;
    case NodeKind::Constd: {
      int64_t v = node.literals[0];
      return uint64_t(v) & mask_of_width(width);
    }
    case NodeKind::Const: {
      if (node.constant.empty() || node.constant.size() > width)
        fail_at(line_no, "binary constant does not fit width");
      uint64_t v = 0;
      for (char c : node.constant) {
        if (c != '0' && c != '1') fail_at(line_no, "malformed binary constant");
        v = (v << 1) | uint64_t(c - '0');
      }
      return v;
    }
    case NodeKind::Consth: {
      if (node.constant.empty() || node.constant.size() > (width + 3) / 4)
        fail_at(line_no, "hex constant does not fit width");
      uint64_t v = 0;
      for (char c : node.constant) {
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else fail_at(line_no, "malformed hex constant");
        v = (v << 4) | uint64_t(digit);
      }
      return v & mask_of_width(width);
    }
    default:
      fail_at(line_no, "not a constant");
  }
}

}  // namespace

Model parse(const std::string & text) {
  Model model;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  Nid last_nid = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find(';'); pos != std::string::npos) line.erase(pos);
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty()) continue;

    int64_t nid;
    if (!parse_int(toks[0], nid) || nid <= 0) fail_at(line_no, "malformed nid '" + toks[0] + "'");
    if (model.nodes.count(nid)) fail_at(line_no, "duplicate nid " + std::to_string(nid));
    if (nid <= last_nid) fail_at(line_no, "nids must strictly increase");
    if (toks.size() < 2) fail_at(line_no, "missing keyword");

    const std::string & kw = toks[1];
    Node node;
    node.nid = nid;
    size_t pos = 2;

    if (kw == "sort") {
      node.kind = NodeKind::Sort;
      if (toks.size() < 3) fail_at(line_no, "sort needs a shape");
      if (toks[2] == "bitvec") {
        int64_t width;
        if (toks.size() < 4 || !parse_int(toks[3], width)) fail_at(line_no, "malformed bitvec width");
        if (width < 1 || width > 64) fail_at(line_no, "bitvec width must be in 1..64");
        node.sort_info = SortInfo{ false, uint32_t(width), 0 };
        pos = 4;
      } else if (toks[2] == "array") {
        int64_t idx, elem;
        if (toks.size() < 5 || !parse_int(toks[3], idx) || !parse_int(toks[4], elem))
          fail_at(line_no, "malformed array sort");
        if (idx >= nid || elem >= nid || !model.nodes.count(idx) || !model.nodes.count(elem))
          fail_at(line_no, "forward reference in array sort");
        const Node & in_ = model.node(idx);
        const Node & el = model.node(elem);
        if (in_.kind != NodeKind::Sort || el.kind != NodeKind::Sort ||
            in_.sort_info.is_array || el.sort_info.is_array)
          fail_at(line_no, "array index/element sorts must be bitvec sorts");
        node.operands = { idx, elem };
        node.sort_info = SortInfo{ true, el.sort_info.width, in_.sort_info.width };
        pos = 5;
      } else {
        fail_at(line_no, "unknown sort shape '" + toks[2] + "'");
      }
    } else {
      auto it = keyword_table().find(kw);
      if (it == keyword_table().end()) fail_at(line_no, "unknown keyword '" + kw + "'");
      const KindInfo & info = it->second;
      node.kind = info.kind;

      if (node.kind != NodeKind::Bad) {
        int64_t sort;
        if (pos >= toks.size() || !parse_int(toks[pos], sort))
          fail_at(line_no, "malformed sort reference");
        if (sort >= nid || !model.nodes.count(sort))
          fail_at(line_no, "forward reference to nid " + std::to_string(sort));
        node.sort = sort;
        ++pos;
      }

      for (int k = 0; k < info.num_operands; ++k) {
        int64_t op;
        if (pos >= toks.size() || !parse_int(toks[pos], op))
          fail_at(line_no, "missing operand for " + kw);
        if (op >= nid || !model.nodes.count(op))
          fail_at(line_no, "forward reference to nid " + std::to_string(op));
        node.operands.push_back(op);
        ++pos;
      }
      for (int k = 0; k < info.num_literals; ++k) {
        int64_t lit;
        if (pos >= toks.size() || !parse_int(toks[pos], lit))
          fail_at(line_no, "missing integer literal for " + kw);
        node.literals.push_back(lit);
        ++pos;
      }
      if (node.kind == NodeKind::Const || node.kind == NodeKind::Consth) {
        if (pos >= toks.size()) fail_at(line_no, "missing constant digits");
        node.constant = toks[pos];
        ++pos;
      }
      resolve_sort(model, node, line_no);
      if (is_const_kind(node.kind)) parse_const_bits(node, line_no); // range check
    }

    if (pos < toks.size()) {
      node.symbol = toks[pos];
      ++pos;
      // anything further on the line is ignored (btor2 treats it as comment text)
    }

    switch (node.kind) {
      case NodeKind::State: model.states.push_back(nid); break;
      case NodeKind::Input: model.inputs.push_back(nid); break;
      case NodeKind::Bad: model.bads.push_back(nid); break;
      case NodeKind::Init: {
        Nid state = node.operands[0];
        if (model.init_of.count(state)) fail_at(line_no, "state has two init lines");
        model.init_of[state] = node.operands[1];
        break;
      }
      case NodeKind::Next: {
        Nid state = node.operands[0];
        if (model.next_of.count(state)) fail_at(line_no, "state has two next lines");
        model.next_of[state] = node.operands[1];
        break;
      }
      default: break;
    }

    model.nodes.emplace(nid, std::move(node));
    last_nid = nid;
  }
  return model;
}

Model parse_file(const std::string & path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string print(const Model & model) {
  std::ostringstream out;
  for (const auto & [nid, node] : model.nodes) {
    out << nid << ' ' << node_kind_name(node.kind);
    if (node.kind == NodeKind::Sort) {
      if (node.sort_info.is_array)
        out << " array " << node.operands[0] << ' ' << node.operands[1];
      else
        out << " bitvec " << node.sort_info.width;
    } else {
      if (node.kind != NodeKind::Bad) out << ' ' << node.sort;
      for (Nid op : node.operands) out << ' ' << op;
      for (int64_t lit : node.literals) out << ' ' << lit;
      if (!node.constant.empty()) out << ' ' << node.constant;
    }
    if (!node.symbol.empty()) out << ' ' << node.symbol;
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Simulation

uint64_t eval_binop(NodeKind kind, uint32_t width, uint64_t a, uint64_t b) {
  uint64_t mask = mask_of_width(width);
  a &= mask;
  b &= mask;
  switch (kind) {
    case NodeKind::Add: return (a + b) & mask;
    case NodeKind::Sub: return (a - b) & mask;
    case NodeKind::Mul: return (a * b) & mask;
    case NodeKind::Udiv: return b == 0 ? mask : (a / b) & mask;
    case NodeKind::Urem: return b == 0 ? a : (a % b) & mask;
    case NodeKind::Ult: return a < b ? 1 : 0;
    case NodeKind::Ulte: return a <= b ? 1 : 0;
    case NodeKind::Ugt: return a > b ? 1 : 0;
    case NodeKind::Ugte: return a >= b ? 1 : 0;
    case NodeKind::Eq: return a == b ? 1 : 0;
    case NodeKind::Neq: return a != b ? 1 : 0;
    case NodeKind::And: return a & b;
    default: fail("eval_binop: not a binary operator");
  }
}

namespace {

class Evaluator {
 public:
  Evaluator(const Model & model, const SimState * state, const InputMap * inputs)
      : model_(model), state_(state), inputs_(inputs) {}

  const Value & eval(Nid nid) {
    auto it = cache_.find(nid);
    if (it != cache_.end()) return it->second;
    const Node & node = model_.node(nid);
    Value v = compute(node);
    return cache_.emplace(nid, std::move(v)).first->second;
  }

  BitVec eval_bits(Nid nid) {
    const Value & v = eval(nid);
    if (!std::holds_alternative<BitVec>(v)) fail("expected bitvec value");
    return std::get<BitVec>(v);
  }

 private:
  Value compute(const Node & node) {
    uint32_t w = node.sort_info.width;
    switch (node.kind) {
      case NodeKind::Zero: return BitVec(w, 0);
      case NodeKind::One: return BitVec(w, 1);
      case NodeKind::Constd:
      case NodeKind::Const:
      case NodeKind::Consth:
        return BitVec(w, parse_const_bits(node, 0));
      case NodeKind::State: {
        if (!state_) fail("state value is not available in this context");
        auto it = state_->assignment.find(node.nid);
        if (it == state_->assignment.end())
          fail("state nid " + std::to_string(node.nid) + " is unassigned");
        return it->second;
      }
      case NodeKind::Input: {
        if (!inputs_) fail("input value is not available in this context");
        auto it = inputs_->find(node.nid);
        if (it == inputs_->end())
          fail("missing input value for nid " + std::to_string(node.nid));
        if (it->second.width != w) fail("input width mismatch");
        return it->second;
      }
      case NodeKind::Add:
      case NodeKind::Sub:
      case NodeKind::Mul:
      case NodeKind::Udiv:
      case NodeKind::Urem:
      case NodeKind::Ult:
      case NodeKind::Ulte:
      case NodeKind::Ugt:
      case NodeKind::Ugte:
      case NodeKind::Neq:
      case NodeKind::And: {
        BitVec a = eval_bits(node.operands[0]);
        BitVec b = eval_bits(node.operands[1]);
        return BitVec(w, eval_binop(node.kind, a.width, a.bits, b.bits));
      }
      case NodeKind::Eq: {
        BitVec a = eval_bits(node.operands[0]);
        BitVec b = eval_bits(node.operands[1]);
        return BitVec(1, a.bits == b.bits ? 1 : 0);
      }
      case NodeKind::Not: {
        BitVec a = eval_bits(node.operands[0]);
        return BitVec(w, ~a.bits);
      }
      case NodeKind::Inc: {
        BitVec a = eval_bits(node.operands[0]);
        return BitVec(w, a.bits + 1);
      }
      case NodeKind::Dec: {
        BitVec a = eval_bits(node.operands[0]);
        return BitVec(w, a.bits - 1);
      }
      case NodeKind::Ite: {
        BitVec c = eval_bits(node.operands[0]);
        return eval(c.bits ? node.operands[1] : node.operands[2]);
      }
      case NodeKind::Uext: {
        BitVec a = eval_bits(node.operands[0]);
        return BitVec(w, a.bits);
      }
      case NodeKind::Slice: {
        BitVec a = eval_bits(node.operands[0]);
        uint32_t l = uint32_t(node.literals[1]);
        return BitVec(w, a.bits >> l);
      }
      case NodeKind::Read: {
        const Value & mem = eval(node.operands[0]);
        BitVec idx = eval_bits(node.operands[1]);
        return BitVec(w, std::get<ArrayVal>(mem).get(idx.bits));
      }
      case NodeKind::Write: {
        ArrayVal mem = std::get<ArrayVal>(eval(node.operands[0]));
        BitVec idx = eval_bits(node.operands[1]);
        BitVec val = eval_bits(node.operands[2]);
        if (val.bits == 0)
          mem.data.erase(idx.bits);
        else
          mem.data[idx.bits] = val.bits;
        return mem;
      }
      default:
        fail(std::string("cannot evaluate node kind '") + node_kind_name(node.kind) + "'");
    }
  }

  const Model & model_;
  const SimState * state_;
  const InputMap * inputs_;
  std::map<Nid, Value> cache_;
};

}  // namespace

SimState initial_state(const Model & model) {
  SimState state;
  Evaluator const_eval(model, nullptr, nullptr);
  for (Nid s : model.states) {
    const Node & node = model.node(s);
    const SortInfo & sort = node.sort_info;
    auto init = model.init_of.find(s);
    if (sort.is_array) {
      ArrayVal arr;
      arr.index_width = sort.index_width;
      arr.elem_width = sort.width;
      if (init != model.init_of.end()) {
        const Node & vnode = model.node(init->second);
        if (vnode.sort_info.is_array) fail("array-valued init expressions are not supported");
        BitVec v = const_eval.eval_bits(init->second);
        if (v.bits != 0) {
          uint64_t entries = uint64_t(1) << sort.index_width;
          for (uint64_t i = 0; i < entries; ++i) arr.data[i] = v.bits;
        }
      }
      state.assignment.emplace(s, std::move(arr));
    } else {
      BitVec v(sort.width, 0);
      if (init != model.init_of.end()) v = const_eval.eval_bits(init->second);
      state.assignment.emplace(s, v);
    }
  }
  return state;
}

std::map<Nid, bool> eval_bads(const Model & model, const SimState & state,
                              const InputMap & inputs) {
  Evaluator ev(model, &state, &inputs);
  std::map<Nid, bool> flags;
  for (Nid b : model.bads) {
    const Node & node = model.node(b);
    flags[b] = ev.eval_bits(node.operands[0]).bits != 0;
  }
  return flags;
}

StepResult step_model(const Model & model, const SimState & state, const InputMap & inputs) {
  Evaluator ev(model, &state, &inputs);

  StepResult result;
  for (Nid b : model.bads)
    result.bad_flags[b] = ev.eval_bits(model.node(b).operands[0]).bits != 0;

  result.next.step = state.step + 1;
  for (Nid s : model.states) {
    auto next = model.next_of.find(s);
    if (next == model.next_of.end()) {
      result.next.assignment[s] = state.assignment.at(s);
    } else {
      result.next.assignment[s] = ev.eval(next->second);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Brute force

namespace {

struct FreeSlot {
  Nid nid = 0;
  bool is_state = false; // uninitialized state enumerated at step 0 only
  uint32_t width = 0;
  std::vector<uint64_t> values;
};

}  // namespace

std::vector<Witness> brute_force_reachability(const Model & model, uint64_t n,
                                              const InputDomain & domain,
                                              const BruteForceOptions & opts) {
  std::vector<FreeSlot> step0_slots; // uninit states + inputs
  std::vector<FreeSlot> step_slots;  // inputs, each later step

  auto domain_values = [&](Nid nid, uint32_t width) {
    auto it = domain.find(nid);
    if (it != domain.end()) return it->second.values;
    if (width > 20) fail("brute force: input width too large to enumerate");
    std::vector<uint64_t> all(size_t(1) << width);
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  };

  for (Nid s : model.states) {
    const Node & node = model.node(s);
    if (node.sort_info.is_array) continue; // zeroed by default
    if (!model.init_of.count(s))
      step0_slots.push_back({ s, true, node.sort_info.width, domain_values(s, node.sort_info.width) });
  }
  for (Nid i : model.inputs) {
    const Node & node = model.node(i);
    FreeSlot slot{ i, false, node.sort_info.width, domain_values(i, node.sort_info.width) };
    step0_slots.push_back(slot);
    step_slots.push_back(slot);
  }
  std::sort(step0_slots.begin(), step0_slots.end(),
            [](const FreeSlot & a, const FreeSlot & b) { return a.nid < b.nid; });

  // total number of sequences = prod(step0) * prod(step)^n
  long double total = 1;
  for (const auto & s : step0_slots) total *= s.values.size();
  for (uint64_t k = 0; k < n; ++k)
    for (const auto & s : step_slots) total *= s.values.size();
  if (total > static_cast<long double>(opts.enumeration_limit))
    fail("brute force: enumeration limit exceeded");

  // Counter over all slots of the whole sequence: step0 slots then
  // step_slots per transition step 1..n.
  std::vector<const FreeSlot *> seq_slots;
  for (const auto & s : step0_slots) seq_slots.push_back(&s);
  for (uint64_t k = 1; k <= n; ++k)
    for (const auto & s : step_slots) seq_slots.push_back(&s);

  std::vector<size_t> counter(seq_slots.size(), 0);
  std::vector<Witness> witnesses;
  uint64_t best_step = n + 1;

  SimState base = initial_state(model);

  for (;;) {
    // Materialize the sequence.
    std::vector<InputMap> per_step(n + 1);
    SimState init = base;
    size_t idx = 0;
    for (const auto & s : step0_slots) {
      uint64_t v = s.values[counter[idx++]];
      if (s.is_state)
        init.assignment[s.nid] = BitVec(s.width, v);
      else
        per_step[0][s.nid] = BitVec(s.width, v);
    }
    for (uint64_t k = 1; k <= n; ++k)
      for (const auto & s : step_slots) per_step[k][s.nid] = BitVec(s.width, s.values[counter[idx++]]);

    // Simulate; bad checked at steps 0..n.
    SimState cur = init;
    std::optional<uint64_t> hit;
    std::map<Nid, bool> hit_flags;
    for (uint64_t k = 0; k <= n; ++k) {
      auto flags = eval_bads(model, cur, per_step[k]);
      bool any = std::any_of(flags.begin(), flags.end(),
                             [](const auto & kv) { return kv.second; });
      if (any) {
        hit = k;
        hit_flags = flags;
        break;
      }
      if (k < n) cur = step_model(model, cur, per_step[k]).next;
    }
    if (hit && *hit <= best_step) {
      if (*hit < best_step) {
        best_step = *hit;
        witnesses.clear();
      }
      Witness w;
      // Uninitialized states ride along in the step-0 input map so the
      // witness fully determines the trace.
      w.inputs = per_step;
      for (const auto & s : step0_slots)
        if (s.is_state) w.inputs[0][s.nid] = std::get<BitVec>(init.assignment[s.nid]);
      w.first_bad_step = *hit;
      w.bad_flags = hit_flags;
      witnesses.push_back(std::move(w));
    }

    // Advance the counter; first slot varies fastest.
    size_t p = 0;
    for (; p < counter.size(); ++p) {
      if (++counter[p] < seq_slots[p]->values.size()) break;
      counter[p] = 0;
    }
    if (p == counter.size()) break;
  }

  return witnesses;
}

}  // namespace qubomc::btor2
