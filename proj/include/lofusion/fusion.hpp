#pragma once

// Type-I, Type-II and CZ fusion on graph states.
//
// Outcome semantics follow the channels derived in fock.hpp (rail 0 = u,
// rail 1 = v). Each fusion is a destructive two-photon measurement:
//   Type-I   success projects Z_u Z_v = +1 and v onto X_v = (-1)^[SuccessH],
//            u survives as the fused photon; failure reads <VH| or <HV|.
//   Type-II  success projects X_u X_v = +1 and Z_u Z_v = (-1)^[SuccessOdd];
//            failure reads <+-| (branch 0) or <-+| (branch 1).
//   CZ       success projects Z_u X_v = +1 and X_u Z_v = (-1)^[SuccessOdd];
//            failure reads <H-| (branch 0) or <V+| (branch 1).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lofusion/fock.hpp"
#include "lofusion/graph_state.hpp"

namespace lofusion {

enum class FusionOp { TypeI, TypeII, CzRedundant };

enum class FusionKind { SuccessH, SuccessV, FailZero, FailTwo, SuccessEven, SuccessOdd, Fail };

inline const char* op_name(FusionOp op) {
  switch (op) {
    case FusionOp::TypeI: return "type_i";
    case FusionOp::TypeII: return "type_ii";
    default: return "cz_redundant";
  }
}

inline const char* kind_name(FusionKind k) {
  switch (k) {
    case FusionKind::SuccessH: return "SuccessH";
    case FusionKind::SuccessV: return "SuccessV";
    case FusionKind::FailZero: return "FailZero";
    case FusionKind::FailTwo: return "FailTwo";
    case FusionKind::SuccessEven: return "SuccessEven";
    case FusionKind::SuccessOdd: return "SuccessOdd";
    default: return "Fail";
  }
}

inline bool is_success(FusionKind k) {
  return k == FusionKind::SuccessH || k == FusionKind::SuccessV || k == FusionKind::SuccessEven ||
         k == FusionKind::SuccessOdd;
}

/// Outcome kinds an operation can produce.
inline std::vector<FusionKind> kinds_of(FusionOp op) {
  if (op == FusionOp::TypeI)
    return {FusionKind::SuccessH, FusionKind::SuccessV, FusionKind::FailZero, FusionKind::FailTwo};
  return {FusionKind::SuccessEven, FusionKind::SuccessOdd, FusionKind::Fail};
}

struct FusionOutcome {
  FusionKind kind = FusionKind::Fail;
  int branch = 0;            // which detector fired on Fail (0: rail 1 only, 1: rail 0 only)
  double probability = 0.0;  // probability of this outcome (branch included) on the input state
  int fused = -1;            // Type-I success: the new photon; Type-II success: the merged group's carrier
  bool fast_path = true;
  bool flagged = false;      // Type-II/CZ on two bare photons, or a Type-I two-photon residue

  bool success() const { return is_success(kind); }
};

/// Forced outcome or sampling.
struct FusionChoice {
  std::optional<FusionKind> kind;
  int branch = 0;
  Rng* rng = nullptr;

  static FusionChoice force(FusionKind k, int branch = 0) { return {k, branch & 1, nullptr}; }
  static FusionChoice sample(Rng& r) { return {std::nullopt, 0, &r}; }
};

// Maps a detector pattern of the optical circuits to the abstract outcome.
// Type-I counts on rail 1; Type-II and CZ count on rails 0 and 1.
inline std::pair<FusionKind, int> classify_detection(FusionOp op, const fock::Detections& d) {
  auto on = [&](int rail) -> const fock::DetectionOutcome& {
    for (const auto& o : d)
      if (o.rail == rail) return o;
    throw std::invalid_argument("detection pattern lacks rail " + std::to_string(rail));
  };
  if (op == FusionOp::TypeI) {
    const auto& o = on(1);
    if (o.photons() == 2) return {FusionKind::FailZero, 0};
    if (o.photons() == 0) return {FusionKind::FailTwo, 0};
    return {o.h ? FusionKind::SuccessH : FusionKind::SuccessV, 0};
  }
  const auto& a = on(0);
  const auto& b = on(1);
  if (a.photons() == 0) return {FusionKind::Fail, 0};
  if (b.photons() == 0) return {FusionKind::Fail, 1};
  const bool same = (a.h > 0) == (b.h > 0);
  return {same ? FusionKind::SuccessEven : FusionKind::SuccessOdd, 0};
}

// Phase correction (D_k exponent) put on the fused Type-I photon.
inline int type_i_success_phase(FusionKind k) { return k == FusionKind::SuccessH ? 2 : 0; }

// ---------------------------------------------------------------- event log

struct FusionEvent {
  FusionOp op;
  int u = 0;
  int v = 0;
  FusionOutcome outcome;
  std::uint64_t seed_position = 0;  // generator draws before the fusion
};

inline nlohmann::json to_json(const FusionEvent& e) {
  const std::string base = op_name(e.op);
  nlohmann::json tally = {{"attempts_" + base, 1}, {"successes_" + base, e.outcome.success() ? 1 : 0}};
  nlohmann::json out = {{"kind", kind_name(e.outcome.kind)},
                        {"probability", e.outcome.probability},
                        {"fast_path", e.outcome.fast_path}};
  if (e.outcome.kind == FusionKind::Fail) out["branch"] = e.outcome.branch;
  if (e.outcome.fused >= 0) out["fused"] = e.outcome.fused;
  if (e.outcome.flagged) out["flagged"] = true;
  return {{"op", base},
          {"inputs", {e.u, e.v}},
          {"outcome", out},
          {"tally_delta", tally},
          {"seed_position", e.seed_position}};
}

class FusionLog {
 public:
  void record(FusionEvent e) { events_.push_back(std::move(e)); }
  const std::vector<FusionEvent>& events() const { return events_; }
  void clear() { events_.clear(); }

  void write_jsonl(std::ostream& os) const {
    for (const auto& e : events_) os << to_json(e).dump() << '\n';
  }

 private:
  std::vector<FusionEvent> events_;
};

// ---------------------------------------------------------------- internals

namespace detail {

inline void check_pair(const GraphState& g, int u, int v) {
  if (!g.has_vertex(u)) throw std::out_of_range("vertex " + std::to_string(u) + " absent");
  if (!g.has_vertex(v)) throw std::out_of_range("vertex " + std::to_string(v) + " absent");
  if (u == v || g.group_of(u) == g.group_of(v))
    throw std::invalid_argument("fusion inputs must belong to different logical qubits");
}

inline void check_kind(FusionOp op, FusionKind k) {
  for (auto c : kinds_of(op))
    if (c == k) return;
  throw std::invalid_argument(std::string(kind_name(k)) + " is not an outcome of " + op_name(op));
}

inline int coin(const FusionChoice& c) {
  if (!c.rng) throw std::invalid_argument("random outcome requested without a generator");
  return c.rng->coin() ? 1 : 0;
}

inline int min_other(const GraphState& g, int gid, int skip) {
  for (int p : g.group_members(gid))
    if (p != skip) return p;
  return -1;
}

// Measures a two-photon Pauli on the tableau backend.
inline TableauMeasurement measure_pair(GraphState& g, int u, char pu, int v, char pv, std::optional<int> forced,
                                       Rng* rng) {
  auto& t = g.tableau_mut();
  return t.measure(t.pauli_on({{u, pu}, {v, pv}}), forced, rng);
}

inline std::optional<int> forced_bit(const FusionChoice& c, bool value) {
  if (!c.kind) return std::nullopt;
  return value ? 1 : 0;
}

// Failure of Type-II / CZ: single-photon measurements in the channel's bases with
// anti-correlated outcomes. `first` is measured with the caller's choice, the other
// is forced to the opposite value.
inline FusionOutcome fail_by_measurement(GraphState& g, int u, Basis bu, int v, Basis bv, bool u_first,
                                         const FusionChoice& c, double prior) {
  const int first = u_first ? u : v, second = u_first ? v : u;
  const Basis b1 = u_first ? bu : bv, b2 = u_first ? bv : bu;
  // branch 0 reads u = 0, v = 1
  const Choice c1 = c.kind ? Choice::force(u_first ? c.branch : 1 - c.branch) : Choice::sample(*c.rng);
  auto r1 = g.measure(first, b1, c1);
  auto r2 = g.measure(second, b2, Choice::force(1 - r1.outcome));
  FusionOutcome out;
  out.kind = FusionKind::Fail;
  out.branch = u_first ? r1.outcome : r2.outcome;
  out.probability = prior * r1.probability * r2.probability;
  out.fast_path = r1.fast_path && r2.fast_path;
  return out;
}

inline void record(FusionLog* log, FusionOp op, int u, int v, const FusionOutcome& o, std::uint64_t draws) {
  if (log) log->record({op, u, v, o, draws});
}

inline std::uint64_t draws(const FusionChoice& c) { return c.rng ? c.rng->draws() : 0; }

}  // namespace detail

// ---------------------------------------------------------------- Type-I

/// Type-I fusion of two bare photons. On success both are replaced by a new
/// photon carrying the symmetric difference of their bonds.
inline FusionOutcome fuse_type_i(GraphState& g, int u, int v, const FusionChoice& c, FusionLog* log = nullptr) {
  detail::check_pair(g, u, v);
  if (g.group_size(u) != 1 || g.group_size(v) != 1)
    throw std::invalid_argument("Type-I fusion needs photons that are not redundantly encoded");
  if (c.kind) detail::check_kind(FusionOp::TypeI, *c.kind);
  const auto pos = detail::draws(c);

  FusionOutcome out;
  if (!g.delegated()) {
    // In a graph state two distinct bare photons carry independent uniform bits.
    if (c.kind) {
      out.kind = *c.kind;
    } else {
      const int succ = detail::coin(c), which = detail::coin(c);
      out.kind = succ ? (which ? FusionKind::SuccessH : FusionKind::SuccessV)
                      : (which ? FusionKind::FailZero : FusionKind::FailTwo);
    }
    out.probability = 0.25;
    if (out.success()) {
      const int k = g.frame(u).k + g.frame(v).k + type_i_success_phase(out.kind);
      const int w = g.add_bare_vertex({false, k % 4});
      g.move_edges(u, w);
      g.move_edges(v, w);
      g.erase_vertex(u);
      g.erase_vertex(v);
      out.fused = w;
    } else {
      const int zu = out.kind == FusionKind::FailZero ? 1 : 0;
      g.measure(u, Basis::Z, Choice::force(zu));
      g.measure(v, Basis::Z, Choice::force(1 - zu));
      out.flagged = out.kind == FusionKind::FailTwo;
    }
    detail::record(log, FusionOp::TypeI, u, v, out, pos);
    return out;
  }

  out.fast_path = false;
  const bool want_success = c.kind && is_success(*c.kind);
  auto zz = detail::measure_pair(g, u, 'Z', v, 'Z', detail::forced_bit(c, !want_success), c.rng);
  if (zz.outcome == 0) {
    const std::optional<int> f =
        c.kind ? std::optional<int>(*c.kind == FusionKind::SuccessH ? 1 : 0) : std::nullopt;
    auto xv = g.tableau_mut().measure(v, 'X', f, c.rng);
    out.kind = xv.outcome ? FusionKind::SuccessH : FusionKind::SuccessV;
    out.probability = zz.probability * xv.probability;
    g.tableau_mut().discard({v});
    g.erase_vertex(v);
    const int w = g.fresh_vertex_id();
    g.rename_vertex(u, w);
    out.fused = w;
  } else {
    const std::optional<int> f =
        c.kind ? std::optional<int>(*c.kind == FusionKind::FailZero ? 1 : 0) : std::nullopt;
    auto zu = g.measure(u, Basis::Z, Choice{f, c.rng});
    g.measure(v, Basis::Z, Choice::force(1 - zu.outcome));
    out.kind = zu.outcome ? FusionKind::FailZero : FusionKind::FailTwo;
    out.probability = zz.probability * zu.probability;
    out.flagged = out.kind == FusionKind::FailTwo;
  }
  detail::record(log, FusionOp::TypeI, u, v, out, pos);
  return out;
}

// ---------------------------------------------------------------- Type-II

/// Type-II fusion: destroys u and v; on success their logical qubits merge.
inline FusionOutcome fuse_type_ii(GraphState& g, int u, int v, const FusionChoice& c, FusionLog* log = nullptr) {
  detail::check_pair(g, u, v);
  if (c.kind) detail::check_kind(FusionOp::TypeII, *c.kind);
  const auto pos = detail::draws(c);
  const int ga = g.group_of(u), gb = g.group_of(v);
  const bool bare = g.group_size(u) == 1 && g.group_size(v) == 1;
  if (bare) g.delegate();

  FusionOutcome out;
  out.flagged = bare;
  if (!g.delegated()) {
    const bool success = c.kind ? is_success(*c.kind) : detail::coin(c) == 1;
    if (!success) {
      // A bare photon may have a deterministic X value; read it first.
      auto f = detail::fail_by_measurement(g, u, Basis::X, v, Basis::X, g.group_size(u) == 1, c, 1.0);
      f.flagged = out.flagged;
      detail::record(log, FusionOp::TypeII, u, v, f, pos);
      return f;
    }
    const bool odd = c.kind ? *c.kind == FusionKind::SuccessOdd : detail::coin(c) == 1;
    out.kind = odd ? FusionKind::SuccessOdd : FusionKind::SuccessEven;
    out.probability = 0.25;
    if ((g.frame(u).x ^ g.frame(v).x ^ odd) != 0) g.flip_group(gb);
    const int ta = detail::min_other(g, ga, u), tb = detail::min_other(g, gb, v);
    const int t = ta < 0 ? tb : tb < 0 ? ta : std::min(ta, tb);
    g.add_phase(t, g.frame(u).k + g.frame(v).k);
    g.move_edges(u, t);
    g.move_edges(v, t);
    g.erase_vertex(u);
    g.erase_vertex(v);
    const int gid = ta >= 0 && tb >= 0 ? g.merge_groups(ga, gb) : g.group_of(t);
    g.normalize_group(gid);
    out.fused = g.carrier(gid);
    detail::record(log, FusionOp::TypeII, u, v, out, pos);
    return out;
  }

  out.fast_path = false;
  const bool want_fail = c.kind && *c.kind == FusionKind::Fail;
  auto xx = detail::measure_pair(g, u, 'X', v, 'X', detail::forced_bit(c, want_fail), c.rng);
  if (xx.outcome == 1) {
    auto f = detail::fail_by_measurement(g, u, Basis::X, v, Basis::X, true, c, xx.probability);
    f.flagged = out.flagged;
    detail::record(log, FusionOp::TypeII, u, v, f, pos);
    return f;
  }
  auto zz = detail::measure_pair(g, u, 'Z', v, 'Z', detail::forced_bit(c, c.kind == FusionKind::SuccessOdd), c.rng);
  out.kind = zz.outcome ? FusionKind::SuccessOdd : FusionKind::SuccessEven;
  out.probability = xx.probability * zz.probability;
  g.tableau_mut().discard({u, v});
  const bool a_left = g.group_size(u) > 1, b_left = g.group_size(v) > 1;
  g.erase_vertex(u);
  g.erase_vertex(v);
  if (a_left && b_left) g.merge_groups(ga, gb);
  if (a_left || b_left) out.fused = g.carrier(a_left ? ga : gb);
  detail::record(log, FusionOp::TypeII, u, v, out, pos);
  return out;
}

// ---------------------------------------------------------------- CZ

/// CZ between two redundantly encoded qubits; each loses the photon it sends in.
inline FusionOutcome cz_redundant(GraphState& g, int u, int v, const FusionChoice& c, FusionLog* log = nullptr) {
  detail::check_pair(g, u, v);
  if (c.kind) detail::check_kind(FusionOp::CzRedundant, *c.kind);
  const auto pos = detail::draws(c);
  const int ga = g.group_of(u), gb = g.group_of(v);
  const bool bare = g.group_size(u) == 1 || g.group_size(v) == 1;
  if (bare) g.delegate();

  FusionOutcome out;
  out.flagged = bare;
  if (!g.delegated()) {
    const bool success = c.kind ? is_success(*c.kind) : detail::coin(c) == 1;
    if (!success) {
      auto f = detail::fail_by_measurement(g, u, Basis::Z, v, Basis::X, true, c, 1.0);
      detail::record(log, FusionOp::CzRedundant, u, v, f, pos);
      return f;
    }
    const bool odd = c.kind ? *c.kind == FusionKind::SuccessOdd : detail::coin(c) == 1;
    out.kind = odd ? FusionKind::SuccessOdd : FusionKind::SuccessEven;
    out.probability = 0.25;
    const int s = odd ? 0 : 1;
    const int a = g.frame(u).x, b = g.frame(v).x;
    const int ca = detail::min_other(g, ga, u), cb = detail::min_other(g, gb, v);
    g.toggle_edge(ca, cb);
    g.add_phase(ca, 2 * (b ^ s) + g.frame(u).k);
    g.add_phase(cb, 2 * a + g.frame(v).k);
    g.move_edges(u, ca);
    g.move_edges(v, cb);
    g.erase_vertex(u);
    g.erase_vertex(v);
    g.normalize_group(ga);
    g.normalize_group(gb);
    detail::record(log, FusionOp::CzRedundant, u, v, out, pos);
    return out;
  }

  out.fast_path = false;
  const bool want_fail = c.kind && *c.kind == FusionKind::Fail;
  auto zx = detail::measure_pair(g, u, 'Z', v, 'X', detail::forced_bit(c, want_fail), c.rng);
  if (zx.outcome == 1) {
    auto f = detail::fail_by_measurement(g, u, Basis::Z, v, Basis::X, true, c, zx.probability);
    f.flagged = out.flagged;
    detail::record(log, FusionOp::CzRedundant, u, v, f, pos);
    return f;
  }
  // Even clicks project X_u Z_v = -1, odd clicks +1.
  auto xz = detail::measure_pair(g, u, 'X', v, 'Z', detail::forced_bit(c, c.kind == FusionKind::SuccessEven), c.rng);
  out.kind = xz.outcome ? FusionKind::SuccessEven : FusionKind::SuccessOdd;
  out.probability = zx.probability * xz.probability;
  g.tableau_mut().discard({u, v});
  g.erase_vertex(u);
  g.erase_vertex(v);
  detail::record(log, FusionOp::CzRedundant, u, v, out, pos);
  return out;
}

/// Dispatch by operation.
inline FusionOutcome fuse(FusionOp op, GraphState& g, int u, int v, const FusionChoice& c, FusionLog* log = nullptr) {
  switch (op) {
    case FusionOp::TypeI: return fuse_type_i(g, u, v, c, log);
    case FusionOp::TypeII: return fuse_type_ii(g, u, v, c, log);
    default: return cz_redundant(g, u, v, c, log);
  }
}

/// Value-returning form.
inline std::pair<FusionOutcome, GraphState> fused(FusionOp op, GraphState g, int u, int v, const FusionChoice& c) {
  auto o = fuse(op, g, u, v, c);
  return {o, std::move(g)};
}

}  // namespace lofusion
