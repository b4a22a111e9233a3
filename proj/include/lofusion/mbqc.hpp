#pragma once

// Rotation + CZ circuits run as measurement patterns on the tiled layout.
//
// Logical line r is wire r of a tile layout with one row per line. Measuring a
// wire photon of column c at angle t (observable cos t X + sin t Y) moves the
// line's state to column c + 1 through J(t) = H Rz(-t). Every column applies a
// J to every line, so at column c a line holds H^(c mod 2) times its logical
// state: z-rotations are placed on even columns, x-rotations on odd ones.
// A mediator measured in Y joins its two wire photons with a bond, which is a
// CZ on the two lines; a mediator measured in Z removes the link.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lofusion/graph_state.hpp"
#include "lofusion/rng.hpp"
#include "lofusion/statevector.hpp"
#include "lofusion/strategies.hpp"

namespace lofusion {

enum class GateKind { RZ, RX, CZ };

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::RZ: return "rz";
    case GateKind::RX: return "rx";
    case GateKind::CZ: return "cz";
  }
  return "?";
}

inline GateKind gate_from_name(const std::string& s) {
  if (s == "rz") return GateKind::RZ;
  if (s == "rx") return GateKind::RX;
  if (s == "cz") return GateKind::CZ;
  throw std::invalid_argument("unsupported gate '" + s + "'");
}

struct Gate {
  GateKind kind = GateKind::RZ;
  int q0 = 0;
  int q1 = -1;  // second qubit of a CZ
  double theta = 0;
};

inline constexpr int kMaxCircuitQubits = 10;

struct LogicalCircuit {
  int qubits = 1;
  std::vector<Gate> gates;

  void validate() const {
    if (qubits < 1 || qubits > kMaxCircuitQubits)
      throw std::invalid_argument("circuit needs 1.." + std::to_string(kMaxCircuitQubits) + " qubits");
    for (const auto& g : gates) {
      auto in_range = [&](int q) { return q >= 0 && q < qubits; };
      if (!in_range(g.q0)) throw std::invalid_argument("gate target out of range");
      if (g.kind == GateKind::CZ && (!in_range(g.q1) || g.q1 == g.q0))
        throw std::invalid_argument("CZ needs two distinct qubits in range");
      if (!std::isfinite(g.theta)) throw std::invalid_argument("rotation angle is not finite");
    }
  }
};

/// Exact state of the circuit applied to |+>^n, qubit q labelled q.
inline QubitState simulate_circuit(const LogicalCircuit& c) {
  c.validate();
  std::vector<int> ids(static_cast<std::size_t>(c.qubits));
  for (int q = 0; q < c.qubits; ++q) ids[static_cast<std::size_t>(q)] = q;
  auto s = QubitState::plus(ids);
  for (const auto& g : c.gates) switch (g.kind) {
      case GateKind::RZ: s.apply(gates::rz(g.theta), g.q0); break;
      case GateKind::RX: s.apply(gates::rx(g.theta), g.q0); break;
      case GateKind::CZ: s.cz(g.q0, g.q1); break;
    }
  return s;
}

struct PatternStep {
  int vertex = -1;
  std::optional<char> pauli;  // 'X', 'Y' or 'Z'; otherwise the equatorial angle below
  double angle = 0;
  std::vector<int> sign_deps;  // the angle is negated when these outcomes have odd parity
  int gate = -1;               // circuit rotation that set the angle
};

struct MeasurementPattern {
  std::vector<PatternStep> steps;
  std::vector<int> outputs;                 // photon per logical line
  std::vector<std::vector<int>> out_x, out_z;  // byproduct X^x Z^z left on each output
  bool hadamard_out = false;                // outputs still carry one H

  void validate() const {
    std::set<int> seen;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      if (!seen.insert(s.vertex).second)
        throw std::invalid_argument("photon " + std::to_string(s.vertex) + " measured twice");
      if (s.pauli && *s.pauli != 'X' && *s.pauli != 'Y' && *s.pauli != 'Z')
        throw std::invalid_argument("unknown Pauli label");
      for (int d : s.sign_deps)
        if (d < 0 || static_cast<std::size_t>(d) >= i)
          throw std::invalid_argument("step " + std::to_string(i) + " depends on a later step");
    }
    auto check_deps = [&](const std::vector<std::vector<int>>& sets) {
      for (const auto& set : sets)
        for (int d : set)
          if (d < 0 || static_cast<std::size_t>(d) >= steps.size())
            throw std::invalid_argument("output byproduct refers to a missing step");
    };
    check_deps(out_x);
    check_deps(out_z);
    if (out_x.size() != outputs.size() || out_z.size() != outputs.size())
      throw std::invalid_argument("byproduct lists do not match outputs");
    for (int v : outputs)
      if (seen.count(v)) throw std::invalid_argument("output photon is measured");
  }

  std::size_t angle_steps() const {
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const auto& s) { return !s.pauli; }));
  }
};

struct CompiledCircuit {
  TileLayout layout;
  MeasurementPattern pattern;
  std::vector<std::pair<int, int>> rungs;  // (column, upper line) joined by a Y-measured mediator
  int lines = 0;

  /// L-shape units whose vertical arm carries a CZ.
  std::size_t bond_units() const { return rungs.size(); }
};

namespace detail {

inline void toggle_set(std::vector<int>& into, const std::vector<int>& from) {
  std::vector<int> out;
  std::set_symmetric_difference(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
  into = std::move(out);
}

}  // namespace detail

inline CompiledCircuit compile_pattern(const LogicalCircuit& circuit) {
  circuit.validate();
  const int n = circuit.qubits;
  std::vector<int> next(static_cast<std::size_t>(n), 0);
  std::map<std::pair<int, int>, std::pair<double, int>> angle;  // (column, line) -> (angle, gate)
  std::set<std::pair<int, int>> rungs;
  int last_rung = 0;
  for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
    const auto& g = circuit.gates[gi];
    auto& nc = next[static_cast<std::size_t>(g.q0)];
    if (g.kind == GateKind::CZ) {
      if (std::abs(g.q0 - g.q1) != 1) throw std::invalid_argument("CZ is only supported between neighbouring lines");
      auto& nc1 = next[static_cast<std::size_t>(g.q1)];
      int c = std::max({nc, nc1, 2});
      c += c & 1;
      const std::pair<int, int> key{c, std::min(g.q0, g.q1)};
      if (!rungs.erase(key)) rungs.insert(key);
      nc = nc1 = c;
      last_rung = std::max(last_rung, c);
      continue;
    }
    int c = nc;
    if ((c & 1) != (g.kind == GateKind::RX ? 1 : 0)) ++c;
    angle[{c, g.q0}] = {-g.theta, static_cast<int>(gi)};
    nc = c + 1;
  }
  const int columns = std::max({1, last_rung, *std::max_element(next.begin(), next.end())});

  CompiledCircuit out;
  out.lines = n;
  out.layout = make_tile_layout(columns, n);
  out.rungs.assign(rungs.begin(), rungs.end());
  const auto& L = out.layout;
  auto& p = out.pattern;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < columns; ++c)
      p.steps.push_back({L.mediator.at({c, r}), rungs.count({c + 1, r}) ? 'Y' : 'Z', 0, {}, -1});
  for (int c = 1; c <= columns; ++c) p.steps.push_back({L.wire.at({c, n}), 'Z', 0, {}, -1});

  // Byproducts X^bx Z^bz per wire photon, kept outside every CZ. Measuring a
  // wire photon leaves X on its right neighbour, which picks up Z across that
  // photon's own CZs (next wire photon and any rung partner).
  std::map<int, std::vector<int>> bx, bz;
  for (int c = 0; c < columns; ++c) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
      const auto it = angle.find({c, r});
      const auto [a, gate] = it == angle.end() ? std::pair<double, int>{0.0, -1} : it->second;
      idx[static_cast<std::size_t>(r)] = static_cast<int>(p.steps.size());
      p.steps.push_back({L.wire.at({c, r}), std::nullopt, a, bx[L.wire.at({c, r})], gate});
    }
    for (int r = 0; r < n; ++r) {
      std::vector<int> x{idx[static_cast<std::size_t>(r)]};
      detail::toggle_set(x, bz[L.wire.at({c, r})]);
      detail::toggle_set(bx[L.wire.at({c + 1, r})], x);
      if (c + 2 <= columns) detail::toggle_set(bz[L.wire.at({c + 2, r})], x);
      if (rungs.count({c + 1, r})) detail::toggle_set(bz[L.wire.at({c + 1, r + 1})], x);
      if (r > 0 && rungs.count({c + 1, r - 1})) detail::toggle_set(bz[L.wire.at({c + 1, r - 1})], x);
    }
  }
  for (int r = 0; r < n; ++r) {
    const int v = L.wire.at({columns, r});
    p.outputs.push_back(v);
    p.out_x.push_back(bx[v]);
    p.out_z.push_back(bz[v]);
  }
  p.hadamard_out = columns & 1;
  p.validate();
  return out;
}

struct ExecutionResult {
  std::vector<int> outcomes;          // per step, relative to the bare graph
  std::vector<double> probabilities;  // per step
  std::vector<double> physical_angles;  // per angle step after frame folding; NaN for Pauli steps
  QubitState residual;                // unmeasured photons, as produced
  QubitState logical;                 // byproducts and frames undone, qubit r = line r
};

namespace detail {

// Dense copy of a graph-form state built photon by photon. Each photon's frame
// X^x D_k is rewritten as a pure phase D_k' by trading X on a photon for Z on
// its neighbours.
class LazyCluster {
 public:
  explicit LazyCluster(const GraphState& g) : g_(g) {
    if (g.delegated()) throw std::invalid_argument("pattern execution needs a graph-form state");
    for (const auto& grp : g.groups())
      if (grp.size() != 1) throw std::invalid_argument("pattern execution needs single-photon logical qubits");
    for (int v : g.vertices()) {
      const auto& f = g.frame(v);
      int k = f.x ? (4 - f.k) % 4 : f.k;
      for (int w : g.neighbors(v))
        if (g.frame(w).x) k += 2;
      k_[v] = k % 4;
    }
  }

  int phase(int v) const { return k_.at(v); }

  void bring(int v) {
    if (present_.count(v)) return;
    if (gone_.count(v)) throw std::logic_error("photon " + std::to_string(v) + " already measured");
    auto ids = s_.ids();
    ids.push_back(v);
    std::vector<cplx> amps(s_.amplitudes().size() * 2);
    const cplx tail = kInvSqrt2 * std::polar(1.0, k_.at(v) * kPi / 2);
    for (std::size_t i = 0; i < s_.amplitudes().size(); ++i) {
      amps[2 * i] = kInvSqrt2 * s_.amplitudes()[i];
      amps[2 * i + 1] = tail * s_.amplitudes()[i];
    }
    s_ = QubitState::from_amplitudes(ids, std::move(amps));
    for (int w : g_.neighbors(v))
      if (present_.count(w)) s_.cz(v, w);
    present_.insert(v);
  }

  /// Measures photon v; `effective` is the angle on the bare graph, or a Z measurement when empty.
  std::pair<int, double> measure(int v, std::optional<double> effective, std::optional<int> forced, Rng* rng,
                                 double* physical) {
    bring(v);
    for (int w : g_.neighbors(v))
      if (!gone_.count(w)) bring(w);
    std::pair<int, double> r;
    if (effective) {
      *physical = *effective + k_.at(v) * kPi / 2;
      r = s_.measure_out(v, QubitState::equatorial(*physical, 0), forced, rng);
    } else {
      r = s_.measure_out(v, QubitState::pauli_eigen('Z', 0), forced, rng);
    }
    present_.erase(v);
    gone_.insert(v);
    return r;
  }

  QubitState& state() { return s_; }

 private:
  const GraphState& g_;
  std::map<int, int> k_;
  std::set<int> present_, gone_;
  QubitState s_;
};

inline int parity(const std::vector<int>& deps, const std::vector<int>& outcomes) {
  int p = 0;
  for (int d : deps) p ^= outcomes.at(static_cast<std::size_t>(d));
  return p;
}

}  // namespace detail

/// Runs the pattern on `g`. Pauli steps before the first angle step act on the
/// graph state; the rest run on a dense copy with frames folded into the angles.
/// `forced` fixes outcomes per step (as measured on the photon).
inline ExecutionResult execute_pattern(GraphState g, const MeasurementPattern& p, Rng& rng,
                                       const std::vector<std::optional<int>>& forced = {}) {
  p.validate();
  if (!forced.empty() && forced.size() != p.steps.size())
    throw std::invalid_argument("forced outcome list must cover every step");
  ExecutionResult res;
  res.outcomes.assign(p.steps.size(), 0);
  res.probabilities.assign(p.steps.size(), 1.0);
  res.physical_angles.assign(p.steps.size(), std::nan(""));
  std::vector<bool> done(p.steps.size(), false);
  std::optional<detail::LazyCluster> dense;

  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    for (int d : s.sign_deps)
      if (!done.at(static_cast<std::size_t>(d))) throw std::logic_error("dependency violation at step " + std::to_string(i));
    const std::optional<int> f = forced.empty() ? std::nullopt : forced[i];
    if (!dense && s.pauli) {
      if (!g.has_vertex(s.vertex)) throw std::invalid_argument("pattern photon " + std::to_string(s.vertex) + " not in state");
      Choice ch{f, &rng};
      int sign = detail::parity(s.sign_deps, res.outcomes);
      const auto m = g.measure(s.vertex, basis_from_letter(*s.pauli), ch);
      // a negated Y is the same measurement with the outcome relabelled
      res.outcomes[i] = m.outcome ^ (*s.pauli == 'Y' ? sign : 0);
      res.probabilities[i] = m.probability;
      done[i] = true;
      continue;
    }
    if (!dense) {
      for (std::size_t j = i; j < p.steps.size(); ++j)
        if (!g.has_vertex(p.steps[j].vertex))
          throw std::invalid_argument("pattern photon " + std::to_string(p.steps[j].vertex) + " not in state");
      dense.emplace(g);
    }
    std::optional<double> a;
    if (!s.pauli) a = s.angle;
    else if (*s.pauli == 'X') a = 0.0;
    else if (*s.pauli == 'Y') a = kPi / 2;
    if (a && detail::parity(s.sign_deps, res.outcomes)) *a = -*a;
    double phys = std::nan("");
    const auto [o, pr] = dense->measure(s.vertex, a, f, &rng, &phys);
    res.outcomes[i] = o;
    res.probabilities[i] = pr;
    if (!s.pauli) res.physical_angles[i] = phys;
    done[i] = true;
  }

  if (!dense) dense.emplace(g);
  for (int v : p.outputs) dense->bring(v);
  res.residual = dense->state();

  QubitState out = res.residual.sorted();
  for (std::size_t r = 0; r < p.outputs.size(); ++r) {
    const int v = p.outputs[r];
    for (int k = 0; k < dense->phase(v); ++k) out.apply(gates::sdg(), v);
    if (detail::parity(p.out_x[r], res.outcomes)) out.apply(gates::x(), v);
    if (detail::parity(p.out_z[r], res.outcomes)) out.apply(gates::z(), v);
    if (p.hadamard_out) out.apply(gates::h(), v);
  }
  std::vector<int> lines(p.outputs.size());
  for (std::size_t r = 0; r < lines.size(); ++r) lines[r] = static_cast<int>(r);
  // outputs are in ascending photon order, so line r sits at position r
  if (!std::is_sorted(p.outputs.begin(), p.outputs.end())) throw std::logic_error("outputs must be in photon order");
  res.logical = QubitState::from_amplitudes(lines, out.amplitudes());
  return res;
}

struct MbqcRun {
  CompiledCircuit compiled;
  TileResult tile;
  ExecutionResult exec;
  double fidelity = 0;
};

/// Builds the tile by fusion, compiles, executes with sampled outcomes and
/// compares against the direct simulation.
inline MbqcRun run_mbqc(const LogicalCircuit& circuit, Rng& rng) {
  MbqcRun run;
  run.compiled = compile_pattern(circuit);
  run.tile = tile_layout(run.compiled.layout.columns, run.compiled.layout.rows, rng, Mode::Graph);
  run.exec = execute_pattern(*run.tile.g, run.compiled.pattern, rng);
  run.fidelity = state_fidelity(run.exec.logical, simulate_circuit(circuit));
  return run;
}

}  // namespace lofusion
