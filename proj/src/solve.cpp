#include "qubomc/solve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qubomc {

namespace {

[[noreturn]] void fail(const std::string & msg) { throw QubomcError("solve: " + msg); }

bool lex_less(const Assignment & a, const Assignment & b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Neighbor lists for incremental energy updates.
struct Adjacency {
  std::vector<std::vector<std::pair<Var, int64_t>>> neighbors;

  explicit Adjacency(const Bqm & model) : neighbors(model.num_vars()) {
    for (const auto & [key, c] : model.quadratic()) {
      neighbors[key.first].push_back({ key.second, c });
      neighbors[key.second].push_back({ key.first, c });
    }
  }

  // Energy change of flipping variable v in `a`.
  int64_t flip_delta(const Bqm & model, const Assignment & a, Var v) const {
    int64_t field = model.linear()[v];
    for (const auto & [u, c] : neighbors[v])
      if (a[u]) field += c;
    return a[v] ? -field : field;
  }
};

}  // namespace

SolveResult solve_exhaustive(const Bqm & model, uint32_t var_limit) {
  size_t k = model.num_vars();
  if (k > var_limit)
    fail("exhaustive solve: " + std::to_string(k) + " variables exceed the limit of " +
         std::to_string(var_limit));

  SolveResult result;
  Assignment current(k, 0);
  int64_t energy = model.evaluate_energy(current);
  result.best_energy = energy;
  result.best_assignment = current;
  result.samples_taken = 1;
  if (k == 0) return result;

  Adjacency adj(model);
  // Gray-code walk: exactly one flip per step visits all 2^k assignments.
  uint64_t total = uint64_t(1) << k;
  for (uint64_t i = 1; i < total; ++i) {
    Var v = Var(std::countr_zero(i));
    energy += adj.flip_delta(model, current, v);
    current[v] ^= 1;
    ++result.samples_taken;
    if (energy < result.best_energy ||
        (energy == result.best_energy && lex_less(current, result.best_assignment))) {
      result.best_energy = energy;
      result.best_assignment = current;
    }
  }
  return result;
}

SolveResult solve_anneal(const Bqm & model, const AnnealParams & params) {
  size_t k = model.num_vars();
  SolveResult result;
  result.seed = params.seed;
  if (k == 0) {
    result.best_energy = model.offset();
    result.samples_taken = 0;
    return result;
  }

  Adjacency adj(model);
  std::optional<int64_t> best;
  Assignment best_assignment;

  double ratio = 1.0;
  if (params.sweeps > 1)
    ratio = std::pow(params.final_temperature / params.initial_temperature,
                     1.0 / double(params.sweeps - 1));

  for (uint64_t restart = 0; restart < params.restarts; ++restart) {
    std::mt19937_64 rng(params.seed + restart * 0x9e3779b97f4a7c15ULL);
    Assignment current(k);
    for (size_t i = 0; i < k; ++i) current[i] = uint8_t(rng() & 1);
    int64_t energy = model.evaluate_energy(current);

    auto consider = [&](int64_t e, const Assignment & a) {
      if (!best || e < *best || (e == *best && lex_less(a, best_assignment))) {
        best = e;
        best_assignment = a;
      }
    };
    consider(energy, current);

    double temperature = params.initial_temperature;
    // Unit doubles straight from the generator keep results identical across
    // standard library implementations.
    auto unit = [&]() { return double(rng() >> 11) * 0x1.0p-53; };
    for (uint64_t sweep = 0; sweep < params.sweeps; ++sweep) {
      for (size_t i = 0; i < k; ++i) {
        Var v = Var(rng() % k);
        int64_t delta = adj.flip_delta(model, current, v);
        if (delta <= 0 || unit() < std::exp(-double(delta) / temperature)) {
          current[v] ^= 1;
          energy += delta;
          consider(energy, current);
        }
        ++result.samples_taken;
      }
      temperature *= ratio;
    }
  }

  result.best_energy = *best;
  result.best_assignment = std::move(best_assignment);
  return result;
}

SolveResult solve_input_scan(const Bqm & model, uint64_t enumeration_limit) {
  ForwardEvaluator eval(model);
  size_t k = eval.free_vars().size();
  if (k >= 63 || (uint64_t(1) << k) > enumeration_limit)
    fail("input scan: free-variable space exceeds the enumeration limit");

  SolveResult result;
  uint64_t total = uint64_t(1) << k;
  std::vector<uint8_t> free_bits(k, 0);
  std::optional<int64_t> best;
  for (uint64_t i = 0; i < total; ++i) {
    for (size_t b = 0; b < k; ++b) free_bits[b] = uint8_t((i >> b) & 1);
    const Assignment & a = eval.evaluate(free_bits);
    int64_t e = model.evaluate_energy(a);
    ++result.samples_taken;
    if (!best || e < *best || (e == *best && lex_less(a, result.best_assignment))) {
      best = e;
      result.best_energy = e;
      result.best_assignment = a;
    }
    if (*best == 0) break; // ground energy cannot be undercut
  }
  return result;
}

ValidationResult validate_on_input(const btor2::Model & model, const Translation & translation,
                                   const std::vector<btor2::InputMap> & inputs) {
  ValidationResult res;
  Assignment a = assignment_for_inputs(translation, inputs);
  res.energy = translation.bqm.evaluate_energy(a);

  // Simulate the same input sequence; bad checked at steps 0..n.
  uint64_t n = translation.frames.size() - 1;
  btor2::SimState state = btor2::initial_state(model);
  // Uninitialized states may be pinned through the step-0 map.
  if (!inputs.empty()) {
    for (const auto & [nid, value] : inputs[0]) {
      auto it = state.assignment.find(nid);
      if (it != state.assignment.end() && std::holds_alternative<btor2::BitVec>(it->second))
        it->second = value;
    }
  }
  for (uint64_t step = 0; step <= n; ++step) {
    btor2::InputMap step_inputs;
    if (step < inputs.size()) step_inputs = inputs[step];
    // Inputs the model reads but the witness omits default to 0.
    for (btor2::Nid in : model.inputs) {
      if (!step_inputs.count(in))
        step_inputs.emplace(in, btor2::BitVec(model.sort_of(in).width, 0));
    }
    auto flags = btor2::eval_bads(model, state, step_inputs);
    bool any = std::any_of(flags.begin(), flags.end(), [](const auto & kv) { return kv.second; });
    if (any) {
      res.simulator_bad = true;
      res.simulator_bad_step = step;
      break;
    }
    if (step < n) state = btor2::step_model(model, state, step_inputs).next;
  }
  res.agrees = (res.energy == 0) == res.simulator_bad;
  return res;
}

QubitReport classify_qubits(const Translation & translation, uint64_t budget) {
  const Bqm & model = translation.bqm;
  QubitReport report;

  std::vector<bool> is_input(model.num_vars(), false);
  for (const Frame & frame : translation.frames)
    for (const auto & [nid, word] : frame.input_words)
      for (const Bit & bit : word.bits)
        if (!bit.is_const()) is_input[bit.var_id()] = true;

  ForwardEvaluator eval(model);
  size_t k = eval.free_vars().size();

  std::vector<uint8_t> seen0(model.num_vars(), 0), seen1(model.num_vars(), 0);
  uint64_t total = k >= 63 ? ~uint64_t(0) : (uint64_t(1) << k);
  uint64_t evals = std::min(budget, total);
  std::vector<uint8_t> free_bits(k, 0);
  for (uint64_t i = 0; i < evals; ++i) {
    for (size_t b = 0; b < k; ++b) free_bits[b] = uint8_t((i >> b) & 1);
    const Assignment & a = eval.evaluate(free_bits);
    for (Var v = 0; v < model.num_vars(); ++v)
      (a[v] ? seen1 : seen0)[v] = 1;
    ++report.evaluations;
  }
  report.enumeration_complete = evals == total;

  for (Var v = 0; v < model.num_vars(); ++v) {
    if (is_input[v]) {
      report.status[v] = QubitStatus::Superposition;
    } else if (seen0[v] && seen1[v]) {
      report.status[v] = QubitStatus::Superposition;
    } else if (seen0[v] || seen1[v]) {
      int value = seen1[v] ? 1 : 0;
      report.known_value[v] = value;
      report.status[v] =
          report.enumeration_complete ? QubitStatus::Determined : QubitStatus::Approximated;
    } else {
      report.status[v] = QubitStatus::Undetermined;
    }
  }
  return report;
}

AdvantageResult compute_quantum_advantage(const btor2::Model & model, uint64_t capacity,
                                          uint64_t budget, uint64_t max_n,
                                          const UnrollOptions & options) {
  AdvantageResult result;

  for (uint64_t bound = 0; bound <= max_n; ++bound) {
    Translation t = translate(model, bound, options);
    QubitReport report = classify_qubits(t, budget);
    AdvantagePoint p;
    p.bound = bound;
    for (const auto & [v, status] : report.status) {
      if (status != QubitStatus::Determined) ++p.total_qubits;
      if (status == QubitStatus::Approximated || status == QubitStatus::Undetermined)
        ++p.undetermined_qubits;
    }
    result.points.push_back(p);
  }

  // Negative advantage: the capacity is exhausted no later than the first
  // bound that introduces undetermined qubits.
  for (const AdvantagePoint & p : result.points) {
    if (p.total_qubits > capacity) {
      result.negative = true;
      result.note = "capacity exhausted at bound " + std::to_string(p.bound) +
                    " before any undetermined qubit appeared";
      return result;
    }
    if (p.undetermined_qubits > 0) break;
  }

  // i with |Q_i|_T = 0 and |Q_{i+1}|_T > 0.
  std::optional<uint64_t> base;
  for (size_t i = 0; i + 1 < result.points.size(); ++i) {
    if (result.points[i].undetermined_qubits == 0 &&
        result.points[i + 1].undetermined_qubits > 0) {
      base = i;
      break;
    }
  }
  if (!base) {
    result.note = "no bound with undetermined qubits within max_n";
    return result;
  }
  result.base_index = *base;

  // Largest n with |Q_{i+n}| <= C < |Q_{i+n+1}|.
  std::optional<uint64_t> n;
  for (size_t j = *base; j + 1 < result.points.size(); ++j) {
    if (result.points[j].total_qubits <= capacity && result.points[j + 1].total_qubits > capacity)
      n = j - *base;
  }
  if (!n) {
    result.note = "capacity not exceeded within max_n";
    return result;
  }

  result.has_advantage = true;
  result.transitions = int64_t(*n);
  result.qubits = int64_t(capacity) - int64_t(result.points[*base].total_qubits);
  return result;
}

}  // namespace qubomc
