// Acceptance run: one PASS/FAIL line per criterion with wall time.
// Exit status is the number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lofusion/fock.hpp"
#include "lofusion/fusion.hpp"
#include "lofusion/graph_state.hpp"
#include "lofusion/io.hpp"
#include "lofusion/mbqc.hpp"
#include "lofusion/strategies.hpp"
#include "support.hpp"

using namespace lofusion;
using namespace lofusion::testing;
namespace fs = std::filesystem;

namespace {

const double r2 = std::sqrt(2.0);

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
  void note(const std::string& what) {
    if (pass) detail = what;
  }
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

CMatrix row_matrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> v) {
  CMatrix m(rows, cols);
  std::size_t i = 0;
  for (cplx x : v) m.data[i++] = x;
  return m;
}

std::vector<const fock::ChannelEntry*> entries_where(const fock::OutcomeChannel& ch,
                                                     const std::function<bool(const fock::ChannelEntry&)>& f) {
  std::vector<const fock::ChannelEntry*> out;
  for (const auto& e : ch.entries)
    if (f(e)) out.push_back(&e);
  return out;
}

const fock::ChannelEntry* single_detection(const fock::OutcomeChannel& ch, int h, int v) {
  for (const auto& e : ch.entries)
    if (e.detections.size() == 1 && e.detections[0].h == h && e.detections[0].v == v) return &e;
  return nullptr;
}

std::map<std::pair<FusionKind, int>, CMatrix> merged_kraus(FusionOp op) {
  const auto ch = io::fusion_channel(op);
  std::map<std::pair<FusionKind, int>, std::vector<const fock::ChannelEntry*>> by;
  for (const auto& e : ch.entries) by[classify_detection(op, e.detections)].push_back(&e);
  std::map<std::pair<FusionKind, int>, CMatrix> out;
  for (const auto& [key, entries] : by) {
    auto m = fock::merge_proportional(entries);
    if (!m) throw std::logic_error("outcome class is not a single Kraus operator");
    out[key] = *m;
  }
  return out;
}

// ---------------------------------------------------------------- criterion 1

Verdict type_i_kraus() {
  Verdict v;
  const auto ch = fock::derive_channel(fock::type_i_circuit(), {0, 1});
  v.require(ch.completeness_error() < 1e-9, "Type-I channel is not complete");
  const CMatrix minus = row_matrix(2, 4, {1 / r2, 0, 0, 0, 0, 0, 0, -1 / r2});
  const CMatrix plus = row_matrix(2, 4, {1 / r2, 0, 0, 0, 0, 0, 0, 1 / r2});
  const auto* h = single_detection(ch, 1, 0);
  const auto* vv = single_detection(ch, 0, 1);
  v.require(h && vv, "missing single-click outcomes");
  if (!h || !vv) return v;
  v.require(diff_up_to_phase(minus, h->kraus) < 1e-9, "H-click operator differs");
  v.require(diff_up_to_phase(plus, vv->kraus) < 1e-9, "V-click operator differs");

  auto zero = entries_where(ch, [](const fock::ChannelEntry& e) { return e.detections[0].photons() == 2; });
  const auto merged = fock::merge_proportional(zero);
  v.require(merged && diff_up_to_phase(row_matrix(1, 4, {0, 0, 1, 0}), *merged) < 1e-9,
            "vacuum failure operator differs from |0><VH|");

  const auto* two = single_detection(ch, 0, 0);
  v.require(two != nullptr, "missing no-click outcome");
  if (two) {
    fock::FockState residue({0});
    bool shape = true;
    for (std::size_t r = 0; r < two->kraus.rows; ++r) {
      shape = shape && std::abs(two->kraus(r, 0)) < 1e-12 && two->output_labels[r] == "|1H1V>";
      residue.add({1, 1}, two->kraus(r, 1));
    }
    v.require(shape, "two-photon failure has unexpected support");
    const auto rot = fock::apply_rotation(residue, 0, 45.0);
    v.require(std::abs(rot.amplitude({0, 2}) - 1 / r2) < 1e-9 && std::abs(rot.amplitude({2, 0}) + 1 / r2) < 1e-9 &&
                  std::abs(rot.amplitude({1, 1})) < 1e-9,
              "two-photon failure differs from (|2V>-|2H>)<HV|/sqrt2");
  }

  double ps = 0;
  for (const auto& e : ch.entries)
    if (fock::classify_type_i(e.detections) == fock::OutcomeClass::Success) ps += e.probability;
  v.require(std::abs(ps - 0.5) < 1e-9, "success probability " + fmt(ps, 12));
  v.note("p_success=" + fmt(ps, 12));
  return v;
}

// ---------------------------------------------------------------- criterion 2

Verdict type_ii_kraus() {
  Verdict v;
  const auto ch = fock::derive_channel(fock::type_ii_circuit(), {0, 1});
  v.require(ch.completeness_error() < 1e-9, "Type-II channel is not complete");
  const CMatrix even = row_matrix(1, 4, {1 / r2, 0, 0, 1 / r2});
  const CMatrix odd = row_matrix(1, 4, {0, 1 / r2, 1 / r2, 0});
  auto succ = entries_where(
      ch, [](const fock::ChannelEntry& e) { return fock::classify_type_ii(e.detections) == fock::OutcomeClass::Success; });
  int n_even = 0, n_odd = 0;
  for (const auto* e : succ) {
    const CMatrix k = cplx{r2} * e->kraus;
    if (diff_up_to_phase(even, k) < 1e-9) ++n_even;
    if (diff_up_to_phase(odd, k) < 1e-9) ++n_odd;
  }
  v.require(succ.size() == 4 && n_even == 2 && n_odd == 2, "success operators differ");

  auto fail = entries_where(
      ch, [](const fock::ChannelEntry& e) { return fock::classify_type_ii(e.detections) == fock::OutcomeClass::Failure; });
  const std::vector<cplx> p{1 / r2, 1 / r2}, m{1 / r2, -1 / r2};
  auto proj = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    CMatrix out(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) out(i, j) = a[i >> 1] * b[i & 1] * std::conj(a[j >> 1] * b[j & 1]);
    return out;
  };
  const CMatrix pm = proj(p, m), mp = proj(m, p);
  CMatrix sum(4, 4);
  for (const auto* e : fail) {
    const CMatrix eff = e->kraus.adjoint() * e->kraus;
    sum = sum + eff;
    const double w = e->probability * 4;
    v.require(max_abs_diff(eff, cplx{w} * pm) < 1e-9 || max_abs_diff(eff, cplx{w} * mp) < 1e-9,
              "failure effect " + e->label + " is not an XX eigenprojector");
  }
  v.require(max_abs_diff(sum, pm + mp) < 1e-9, "failure effects do not sum to the XX=-1 projector");

  // Classification with and without photon-number resolution.
  const auto res = fock::type_ii_circuit(true), non = fock::type_ii_circuit(false);
  double worst = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (double angle : {0.0, 30.0, 45.0, 90.0}) {
      auto in = fock::FockState::basis(
          {0, 1}, {{0, (i & 2) ? fock::Pol::V : fock::Pol::H}, {1, (i & 1) ? fock::Pol::V : fock::Pol::H}});
      in = fock::apply_rotation(in, 0, angle);
      std::map<fock::OutcomeClass, double> pr, pn;
      for (const auto& [d, st] : fock::run_circuit(res, in)) pr[fock::classify_type_ii(d)] += st.norm_sq();
      for (const auto& [d, st] : fock::run_circuit(non, in)) pn[fock::classify_type_ii(d)] += st.norm_sq();
      for (auto cls : {fock::OutcomeClass::Success, fock::OutcomeClass::Failure})
        worst = std::max(worst, std::abs(pr[cls] - pn[cls]));
    }
  v.require(worst < 1e-12, "resolving and threshold detectors classify differently");
  v.note("max class probability gap " + fmt(worst, 15));
  return v;
}

// ---------------------------------------------------------------- criterion 3

Verdict resource_means() {
  Verdict v;
  std::ostringstream os;
  auto check = [&](const char* label, Strategy s, std::size_t target, std::uint64_t trials, std::uint64_t seed,
                   const char* metric, double want, double tol) {
    StrategyConfig cfg{s, target, 1, trials, seed};
    const double got = estimate_resources(cfg).metric(metric).mean;
    os << label << "=" << fmt(got) << " ";
    v.require(std::abs(got - want) <= tol,
              std::string(label) + " mean " + fmt(got) + " outside " + fmt(want, 2) + "+-" + fmt(tol, 2));
  };
  check("three", Strategy::ThreeCluster, 0, 100000, 11, "net_cost", 4.0, 0.05);
  check("five", Strategy::FiveCluster, 0, 100000, 12, "net_cost", 14.0, 0.2);
  check("naive/q", Strategy::Naive3, 200, 10000, 21, "cost_per_qubit", 7.0, 0.1);
  check("five/q", Strategy::Five, 200, 10000, 22, "cost_per_qubit", 6.5, 0.1);
  const auto rep = estimate_resources(StrategyConfig{Strategy::LShape, 0, 1, 100000, 13});
  const double attempts = rep.metric("type_ii_attempts").mean, bonds = rep.metric("bonds_consumed").mean;
  const auto cost = rep.metric("net_cost");
  os << "lshape attempts=" << fmt(attempts) << " bonds=" << fmt(bonds) << " cost=" << fmt(cost.mean) << "+-"
     << fmt(cost.stderr_);
  v.require(std::abs(attempts - 2.0) <= 0.05, "L-shape attempts " + fmt(attempts));
  v.require(std::abs(bonds - 8.0) <= 0.1, "L-shape bonds " + fmt(bonds));
  v.require(cost.mean <= 52.0, "L-shape mean cost " + fmt(cost.mean) + " above 52");
  v.note(os.str());
  return v;
}

// ---------------------------------------------------------------- criterion 4

struct Mirror {
  GraphState g;  // graph backend
  GraphState d;  // tableau backend
  QubitState s;  // dense
};

bool fits(FusionOp op, const GraphState& g, int u, int v) {
  if (u == v || g.group_of(u) == g.group_of(v)) return false;
  const auto su = g.group_size(u), sv = g.group_size(v);
  switch (op) {
    case FusionOp::TypeI: return su == 1 && sv == 1;
    case FusionOp::TypeII: return su > 1 || sv > 1;
    default: return su > 1 && sv > 1;
  }
}

// One random operation on all three copies. Returns false when nothing applied.
bool random_op(Mirror& m, Rng& rng, const std::map<FusionOp, std::map<std::pair<FusionKind, int>, CMatrix>>& kraus) {
  const auto vs = m.g.vertices();
  const int a = vs[rng.below(vs.size())], b = vs[rng.below(vs.size())];
  switch (rng.below(3)) {
    case 0:
      if (a == b) return false;
      m.g.apply_cz(a, b);
      m.d.apply_cz(a, b);
      m.s.cz(a, b);
      return true;
    case 1: {
      const Basis basis = static_cast<Basis>(rng.below(3));
      const auto& mem = m.g.group_of_members(a);
      const std::vector<int> group(mem.begin(), mem.end());
      int outcome = static_cast<int>(rng.below(2));
      try {
        auto probe = m.g;
        probe.measure(a, basis, Choice::force(outcome));
      } catch (const std::domain_error&) {
        outcome ^= 1;
      }
      m.g.measure(a, basis, Choice::force(outcome));
      m.d.measure(a, basis, Choice::force(outcome));
      dense_measure(m.s, group, a, basis, outcome);
      return true;
    }
    default: {
      std::vector<FusionOp> ops;
      for (auto op : {FusionOp::TypeI, FusionOp::TypeII, FusionOp::CzRedundant})
        if (fits(op, m.g, a, b)) ops.push_back(op);
      if (ops.empty()) return false;
      const FusionOp op = ops[rng.below(ops.size())];
      const auto& table = kraus.at(op);
      std::vector<std::pair<FusionKind, int>> keys;
      for (const auto& [k, _] : table) keys.push_back(k);
      const int out_id = m.g.next_vertex_id();
      for (std::size_t tries = 0; tries < keys.size(); ++tries) {
        const auto key = keys[(rng.below(keys.size()) + tries) % keys.size()];
        auto next = apply_kraus(m.s, a, b, table.at(key), out_id);
        if (next.norm_sq() < 1e-12) continue;
        next.normalize();
        fuse(op, m.g, a, b, FusionChoice::force(key.first, key.second));
        fuse(op, m.d, a, b, FusionChoice::force(key.first, key.second));
        m.s = next;
        return true;
      }
      return false;
    }
  }
}

Verdict backend_equivalence() {
  Verdict v;
  std::map<FusionOp, std::map<std::pair<FusionKind, int>, CMatrix>> kraus;
  for (auto op : {FusionOp::TypeI, FusionOp::TypeII, FusionOp::CzRedundant}) kraus[op] = merged_kraus(op);
  Rng rng(4242);
  std::size_t compared = 0, delegated = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    const int n = 4 + static_cast<int>(rng.below(9));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng.below(3) == 0) edges.emplace_back(a, b);
    Mirror m{GraphState::from_edges(n, edges), {}, {}};
    for (int p = 0; p < n; ++p) {
      if (rng.coin()) m.g.apply_pauli(p, "XYZ"[rng.below(3)]);
      if (rng.below(4) == 0) m.g.apply_s(p);
    }
    m.d = m.g;
    m.d.delegate();
    m.s = m.g.to_statevector();
    for (int step = 0; step < 16 && m.g.vertex_count() > 1; ++step) {
      try {
        if (!random_op(m, rng, kraus)) continue;
      } catch (const std::exception& e) {
        v.require(false, "sequence " + std::to_string(seq) + ": " + e.what());
        return v;
      }
      ++compared;
      if (m.g.delegated()) ++delegated;
      const bool same = same_state(m.g, m.d);
      const double f = state_fidelity(m.g.to_statevector(), m.s);
      if (!same || f < 1 - 1e-9) {
        v.require(false, "sequence " + std::to_string(seq) + " step " + std::to_string(step) +
                             (same ? "" : " stabilizer groups differ") + " fidelity " + fmt(f, 12));
        return v;
      }
    }
  }
  v.note("1000 sequences, " + std::to_string(compared) + " states compared, " +
         std::to_string(compared - delegated) + " in graph form");
  return v;
}

// ---------------------------------------------------------------- criterion 5

// Set partitions of {0..n-1} as group labels.
void partitions(int n, std::vector<int>& cur, int blocks, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int b = 0; b <= blocks; ++b) {
    cur.push_back(b);
    partitions(n, cur, std::max(blocks, b + 1), out);
    cur.pop_back();
  }
}

Verdict fusion_consistency() {
  Verdict v;
  std::map<FusionOp, std::map<std::pair<FusionKind, int>, CMatrix>> kraus;
  for (auto op : {FusionOp::TypeI, FusionOp::TypeII, FusionOp::CzRedundant}) kraus[op] = merged_kraus(op);
  std::size_t configs = 0, outcomes = 0;
  double worst = 1;
  for (int n = 2; n <= 4; ++n) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions(n, cur, 0, parts);
    for (const auto& label : parts) {
      std::vector<std::vector<int>> groups;
      for (int p = 0; p < n; ++p) {
        if (label[p] >= static_cast<int>(groups.size())) groups.resize(label[p] + 1);
        groups[label[p]].push_back(p);
      }
      std::vector<std::pair<int, int>> cross;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (label[a] != label[b]) cross.emplace_back(a, b);
      std::vector<int> vertices;
      for (int p = 0; p < n; ++p) vertices.push_back(p);
      for (std::uint32_t mask = 0; mask < (1U << cross.size()); ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (std::size_t i = 0; i < cross.size(); ++i)
          if (mask >> i & 1U) edges.push_back(cross[i]);
        for (int u = 0; u < n; ++u)
          for (int w = 0; w < n; ++w) {
            if (label[u] == label[w]) continue;
            // every frame on the fused photons; spectators cycle through frames
            for (int fu = 0; fu < 8; ++fu)
              for (int fw = 0; fw < 8; ++fw) {
                std::map<int, VertexFrame> frames;
                for (int p = 0; p < n; ++p) {
                  const int code = p == u ? fu : p == w ? fw : static_cast<int>((mask + 3 * p + fu) % 8);
                  const bool grouped = groups[label[p]].size() > 1;
                  frames[p] = {grouped && (code & 4), code & 3};
                }
                GraphState g;
                try {
                  g = io::graph_from_parts(vertices, edges, frames, groups);
                } catch (const std::logic_error&) {
                  continue;  // all-X group frames are not a normal form
                }
                const QubitState dense = g.to_statevector();
                for (auto op : {FusionOp::TypeI, FusionOp::TypeII, FusionOp::CzRedundant}) {
                  if (!fits(op, g, u, w)) continue;
                  ++configs;
                  double total = 0;
                  for (const auto& [key, k] : kraus.at(op)) {
                    auto gg = g;
                    QubitState want = apply_kraus(dense, u, w, k, gg.next_vertex_id());
                    const double p = want.norm_sq();
                    total += p;
                    if (p < 1e-12) continue;
                    const auto o = fuse(op, gg, u, w, FusionChoice::force(key.first, key.second));
                    ++outcomes;
                    // photons the rule removed must already be in a Z eigenstate
                    bool determined = true;
                    for (int id : std::vector<int>(want.ids()))
                      if (!gg.has_vertex(id)) {
                        Rng any(1);
                        determined = determined &&
                                     want.measure_out(id, QubitState::pauli_eigen('Z', 0), std::nullopt, &any).second >
                                         1 - 1e-9;
                      }
                    const double f = determined ? graph_fidelity(gg, want) : 0.0;
                    worst = std::min(worst, f);
                    if (std::abs(o.probability - p) > 1e-9 || f < 1 - 1e-9) {
                      v.require(false, std::string(op_name(op)) + " " + kind_name(key.first) + " on " +
                                           io::graph_json(g).dump() + " u=" + std::to_string(u) +
                                           " v=" + std::to_string(w) + " fidelity " + fmt(f, 12));
                      return v;
                    }
                  }
                  v.require(std::abs(total - 1) < 1e-9, "outcome probabilities do not sum to one");
                }
              }
          }
      }
    }
  }
  v.note(std::to_string(configs) + " configurations, " + std::to_string(outcomes) + " outcomes, min fidelity " +
         fmt(worst, 12));
  return v;
}

// ---------------------------------------------------------------- criterion 6

LogicalCircuit random_circuit(Rng& rng, int qubits, int gate_count) {
  LogicalCircuit c;
  c.qubits = qubits;
  for (int i = 0; i < gate_count; ++i) {
    const auto pick = rng.below(qubits > 1 ? 3 : 2);
    const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits)));
    if (pick == 2) {
      const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits - 1)));
      c.gates.push_back({GateKind::CZ, a, a + 1, 0});
    } else {
      c.gates.push_back({pick ? GateKind::RX : GateKind::RZ, q, -1, (rng.uniform() * 2 - 1) * kPi});
    }
  }
  return c;
}

Verdict mbqc_fidelity() {
  Verdict v;
  Rng rng(2024);
  double worst = 1;
  for (int trial = 0; trial < 50; ++trial) {
    const auto circ = random_circuit(rng, 2, 3 + static_cast<int>(rng.below(6)));
    const auto run = run_mbqc(circ, rng);
    worst = std::min(worst, run.fidelity);
    v.require(run.fidelity >= 1 - 1e-9, "circuit " + std::to_string(trial) + " fidelity " + fmt(run.fidelity, 12));
  }
  const LogicalCircuit one{1, {{GateKind::RZ, 0, -1, 0.7}, {GateKind::RX, 0, -1, -1.3}, {GateKind::RZ, 0, -1, 2.1}}};
  const auto cc = compile_pattern(one);
  v.require(cc.pattern.angle_steps() == 3, "single-qubit pattern does not have three angle steps");
  auto tile = tile_layout(cc.layout.columns, 1, rng, Mode::Graph);
  const auto want = simulate_circuit(one);
  std::optional<QubitState> first;
  for (unsigned branch = 0; branch < 8; ++branch) {
    std::vector<std::optional<int>> forced(cc.pattern.steps.size());
    unsigned bit = 0;
    for (std::size_t i = 0; i < forced.size(); ++i)
      forced[i] = cc.pattern.steps[i].pauli ? 0 : static_cast<int>((branch >> bit++) & 1U);
    const auto r = execute_pattern(*tile.g, cc.pattern, rng, forced);
    if (!first) first = r.logical;
    v.require(state_fidelity(r.logical, *first) >= 1 - 1e-9 && state_fidelity(r.logical, want) >= 1 - 1e-9,
              "branch " + std::to_string(branch) + " differs");
  }
  v.note("50 circuits, min fidelity " + fmt(worst, 12) + "; 8 branches agree");
  return v;
}

// ---------------------------------------------------------------- criterion 7

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LOFUSION_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict cli_determinism() {
  Verdict v;
  const auto root = fs::temp_directory_path() / ("lofusion_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  std::ofstream(root / "circuit.json")
      << R"({"qubits":2,"gates":[{"gate":"rz","qubit":0,"angle":30},{"gate":"cz","qubits":[0,1]},)"
         R"({"gate":"rx","qubit":1,"angle":-75}]})";
  const std::vector<std::string> commands{
      "kraus --gate type1",
      "kraus --gate type2",
      "kraus --gate czr",
      "estimate --strategy lshape --trials 2000 --seed 7 --threads 4",
      "estimate --strategy naive --target 50 --trials 500 --seed 7 --format csv",
      "mbqc --circuit " + (root / "circuit.json").string() + " --seed 7",
      "export-graph --source tile --columns 3 --rows 2 --seed 7 --events",
      "export-graph --source chain --length 10 --format dot --seed 7"};
  std::size_t files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto a = root / ("a" + std::to_string(i)), b = root / ("b" + std::to_string(i));
    fs::create_directories(a);
    fs::create_directories(b);
    if (run_cli(commands[i] + " --out " + a.string()) != 0 || run_cli(commands[i] + " --out " + b.string()) != 0) {
      v.require(false, "command failed: " + commands[i]);
      continue;
    }
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      const auto other = b / e.path().filename();
      v.require(fs::exists(other) && slurp(e.path()) == slurp(other),
                commands[i] + ": " + e.path().filename().string() + " differs");
    }
  }
  fs::remove_all(root);
  v.note(std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files byte-identical");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no time limit
    Verdict (*run)();
  };
  const std::vector<Criterion> criteria{
      {1, "Type-I Kraus operators", 1.0, type_i_kraus},
      {2, "Type-II Kraus operators and detector independence", 0.0, type_ii_kraus},
      {3, "resource means", 60.0, resource_means},
      {4, "graph backend vs tableau vs statevector", 30.0, backend_equivalence},
      {5, "fusion rules vs optical channels", 0.0, fusion_consistency},
      {6, "MBQC fidelity", 30.0, mbqc_fidelity},
      {7, "CLI determinism", 0.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) v.require(false, "over time budget of " + fmt(c.budget_s, 0) + " s");
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  (" << fmt(secs, 2) << " s)  "
              << v.detail << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << std::endl;
  return failed;
}
