#pragma once

// Graph states with redundantly encoded logical qubits.
//
// Representation: an ideal state
//     |G> = sum over x constant on each group of (-1)^(sum over edges x_p x_q) |x>
// dressed by a per-photon frame F_p = X^xf D_k, D_k = diag(1, i^k), k = 2z + s.
// The physical state is (prod_p F_p)|G>. Photons of one group carry the same
// ideal bit; bonds inside a group are never stored (they are absorbed as Z).
//
// Operations the graph rules do not cover switch the instance to a stabilizer
// tableau ("delegated"); group membership is still tracked in that mode.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lofusion/rng.hpp"
#include "lofusion/stabilizer.hpp"
#include "lofusion/statevector.hpp"

namespace lofusion {

enum class Basis { X, Y, Z };

inline char basis_letter(Basis b) { return b == Basis::X ? 'X' : b == Basis::Y ? 'Y' : 'Z'; }

inline Basis basis_from_letter(char c) {
  switch (c) {
    case 'X': case 'x': return Basis::X;
    case 'Y': case 'y': return Basis::Y;
    case 'Z': case 'z': return Basis::Z;
    default: throw std::invalid_argument(std::string("unknown basis '") + c + "'");
  }
}

/// Forced outcome or a generator to sample from.
struct Choice {
  std::optional<int> forced;
  Rng* rng = nullptr;

  static Choice force(int outcome) { return {outcome & 1, nullptr}; }
  static Choice sample(Rng& r) { return {std::nullopt, &r}; }

  int coin() const {
    if (forced) return *forced;
    if (!rng) throw std::invalid_argument("random outcome requested without a generator");
    return rng->coin() ? 1 : 0;
  }
};

struct VertexFrame {
  bool x = false;
  int k = 0;  // D_k phase exponent, 2z + s

  bool z() const { return (k >> 1) & 1; }
  bool s() const { return k & 1; }
  bool operator==(const VertexFrame&) const = default;
};

struct MeasureResult {
  int outcome = 0;  // eigenvalue (-1)^outcome
  double probability = 1.0;
  bool deterministic = false;
  bool fast_path = true;
};

inline constexpr std::size_t kMaxStatevectorPhotons = 16;

class GraphState {
 public:
  GraphState() = default;

  /// n fresh |+> photons with the given bonds.
  static GraphState from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    GraphState g;
    for (int i = 0; i < n; ++i) g.add_vertex();
    for (auto [a, b] : edges) g.apply_cz(a, b);
    return g;
  }

  static GraphState bell_pair() { return from_edges(2, {{0, 1}}); }

  static GraphState linear_cluster(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return from_edges(n, e);
  }

  /// New singleton photon in |+>.
  int add_vertex() {
    const int v = next_vertex_++;
    const int gid = next_group_++;
    group_of_[v] = gid;
    groups_[gid] = {v};
    if (delegated_) {
      tab_.add_plus(v);
    } else {
      adj_[v];
      frame_[v];
    }
    return v;
  }

  /// Disjoint union; ids of `other` are shifted past this state's ids. Returns the shift.
  int absorb(const GraphState& other) {
    const int shift = next_vertex_;
    const int gshift = next_group_;
    if (other.delegated_ && !delegated_) delegate();
    GraphState o = other;
    if (delegated_ && !o.delegated_) o.delegate();
    for (const auto& [v, gid] : o.group_of_) group_of_[v + shift] = gid + gshift;
    for (const auto& [gid, mem] : o.groups_) {
      auto& dst = groups_[gid + gshift];
      for (int v : mem) dst.insert(v + shift);
    }
    if (delegated_) {
      std::vector<int> ids = tab_.ids();
      for (int id : o.tab_.ids()) ids.push_back(id + shift);
      std::vector<PauliString> rows;
      const std::size_t n0 = tab_.size(), n1 = o.tab_.size();
      for (const auto& r : tab_.rows()) {
        PauliString p(n0 + n1);
        std::copy(r.x.begin(), r.x.end(), p.x.begin());
        std::copy(r.z.begin(), r.z.end(), p.z.begin());
        p.phase = r.phase;
        rows.push_back(p);
      }
      for (const auto& r : o.tab_.rows()) {
        PauliString p(n0 + n1);
        std::copy(r.x.begin(), r.x.end(), p.x.begin() + static_cast<std::ptrdiff_t>(n0));
        std::copy(r.z.begin(), r.z.end(), p.z.begin() + static_cast<std::ptrdiff_t>(n0));
        p.phase = r.phase;
        rows.push_back(p);
      }
      tab_ = StabilizerTableau(ids, rows);
    } else {
      for (const auto& [v, nb] : o.adj_) {
        auto& dst = adj_[v + shift];
        for (int q : nb) dst.insert(q + shift);
      }
      for (const auto& [v, f] : o.frame_) frame_[v + shift] = f;
    }
    next_vertex_ += o.next_vertex_;
    next_group_ += o.next_group_;
    return shift;
  }

  // ---------------------------------------------------------------- queries

  bool delegated() const { return delegated_; }
  bool has_vertex(int v) const { return group_of_.count(v) != 0; }
  std::size_t vertex_count() const { return group_of_.size(); }
  int next_vertex_id() const { return next_vertex_; }

  std::vector<int> vertices() const {
    std::vector<int> v;
    for (const auto& [id, g] : group_of_) v.push_back(id);
    return v;
  }

  int group_of(int v) const {
    auto it = group_of_.find(v);
    if (it == group_of_.end()) throw std::out_of_range("vertex " + std::to_string(v) + " absent");
    return it->second;
  }

  const std::set<int>& group_members(int gid) const { return groups_.at(gid); }
  const std::set<int>& group_of_members(int v) const { return groups_.at(group_of(v)); }
  std::size_t group_size(int v) const { return group_of_members(v).size(); }

  /// Logical groups as sorted member lists, ordered by smallest member.
  std::vector<std::vector<int>> groups() const {
    std::vector<std::vector<int>> out;
    for (const auto& [gid, mem] : groups_) out.emplace_back(mem.begin(), mem.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Photon that receives logical-level phases and moved bonds.
  int carrier(int gid) const { return *groups_.at(gid).begin(); }

  const std::set<int>& neighbors(int v) const {
    require_graph();
    check(v);
    return adj_.at(v);
  }

  std::size_t degree(int v) const { return neighbors(v).size(); }

  bool has_edge(int a, int b) const { return neighbors(a).count(b) != 0; }

  std::vector<std::pair<int, int>> edges() const {
    require_graph();
    std::vector<std::pair<int, int>> e;
    for (const auto& [v, nb] : adj_)
      for (int q : nb)
        if (v < q) e.emplace_back(v, q);
    return e;
  }

  const VertexFrame& frame(int v) const {
    require_graph();
    check(v);
    return frame_.at(v);
  }

  const StabilizerTableau& tableau() const {
    if (!delegated_) throw std::logic_error("state is not delegated");
    return tab_;
  }

  std::size_t fast_ops() const { return fast_ops_; }
  std::size_t delegated_ops() const { return delegated_ops_; }

  // ------------------------------------------------------- physical gates

  void apply_cz(int u, int v) {
    check(u);
    check(v);
    if (u == v) throw std::invalid_argument("CZ needs two distinct vertices");
    if (delegated_) {
      tab_.cz(u, v);
      return;
    }
    // (-1)^(y_u y_v) with y = x ^ xf, rewritten on the ideal bits.
    const int a = frame_[u].x, b = frame_[v].x;
    if (group_of(u) == group_of(v)) {
      add_phase(u, 2 * ((1 + a + b) & 1));
    } else {
      toggle_edge(u, v);
      add_phase(u, 2 * b);
      add_phase(v, 2 * a);
    }
  }

  void apply_pauli(int v, char p) {
    check(v);
    if (delegated_) {
      tab_.pauli(v, p);
      return;
    }
    switch (p) {
      case 'I': return;
      case 'X': frame_[v].x = !frame_[v].x; break;
      case 'Z': add_phase(v, 2); break;
      case 'Y': add_phase(v, 2); frame_[v].x = !frame_[v].x; break;
      default: throw std::invalid_argument("unknown Pauli");
    }
    normalize_group(group_of(v));
  }

  /// Physical S = diag(1, i) (or its inverse) on one photon.
  void apply_s(int v, bool inverse = false) {
    check(v);
    if (delegated_) {
      inverse ? tab_.sdg(v) : tab_.s(v);
      return;
    }
    const int d = inverse ? 3 : 1;
    add_phase(v, frame_[v].x ? 4 - d : d);
  }

  // ------------------------------------------------------- measurement

  /// Single-photon Pauli measurement; the photon is removed. A Z measurement on a
  /// photon of a larger group collapses the whole logical qubit (all its photons
  /// are removed).
  MeasureResult measure(int v, Basis basis, const Choice& choice) {
    check(v);
    if (!delegated_) {
      if (auto r = measure_fast(v, basis, choice)) {
        ++fast_ops_;
        return *r;
      }
      delegate();
    }
    ++delegated_ops_;
    return measure_tableau(v, basis, choice);
  }

  // --------------------------------------------- representation primitives
  // Used by the fusion layer. They change the representation, and with it the
  // state only where documented.

  /// Phase i^(d x) on the ideal bit of v's group, applied at v.
  void add_phase(int v, int d) {
    auto& f = frame_.at(v);
    f.k = ((f.k + d) % 4 + 4) % 4;
  }

  void toggle_edge(int a, int b) {
    if (a == b) throw std::invalid_argument("self-loop");
    auto& na = adj_.at(a);
    if (na.erase(b)) {
      adj_.at(b).erase(a);
    } else {
      na.insert(b);
      adj_.at(b).insert(a);
    }
  }

  /// Re-expresses the state with the ideal bit of group `gid` inverted. The
  /// physical state is unchanged up to global phase.
  void flip_group(int gid) {
    require_graph();
    for (int p : groups_.at(gid)) {
      auto& f = frame_.at(p);
      f.x = !f.x;
      f.k = (4 - f.k) % 4;
      for (int q : adj_.at(p)) add_phase(q, 2);
    }
  }

  /// Moves the bonds of `from` onto `to` (same ideal bit required). A bond to
  /// `to` itself becomes a Z phase.
  void move_edges(int from, int to) {
    const std::set<int> nb = adj_.at(from);
    for (int q : nb) {
      toggle_edge(from, q);
      if (q == to)
        add_phase(to, 2);
      else
        toggle_edge(to, q);
    }
  }

  /// Deletes a photon whose ideal-level contribution has already been accounted for.
  void erase_vertex(int v) {
    check(v);
    const int gid = group_of(v);
    groups_[gid].erase(v);
    if (groups_[gid].empty()) groups_.erase(gid);
    group_of_.erase(v);
    if (delegated_) return;
    for (int q : adj_.at(v)) adj_.at(q).erase(v);
    adj_.erase(v);
    frame_.erase(v);
  }

  /// Unites two groups whose ideal bits are known to be equal. Returns the surviving id.
  int merge_groups(int ga, int gb) {
    if (ga == gb) return ga;
    for (int p : groups_.at(gb)) {
      group_of_[p] = ga;
      groups_[ga].insert(p);
    }
    groups_.erase(gb);
    if (!delegated_) {
      normalize_group(ga);
    }
    return ga;
  }

  /// Collapses group `gid` to ideal bit `value` and removes its photons.
  void collapse_group(int gid, int value) {
    const std::set<int> mem = groups_.at(gid);
    for (int p : mem) {
      for (int q : adj_.at(p))
        if (value) add_phase(q, 2);
    }
    for (int p : mem) erase_vertex(p);
  }

  /// New singleton photon id with a chosen frame and no bonds (fast mode only).
  int add_bare_vertex(VertexFrame f = {}) {
    require_graph();
    const int v = add_vertex();
    frame_[v] = f;
    return v;
  }

  /// Pushes a group whose photons all carry an X frame back to an X-free frame.
  /// Also folds any bonds between its own photons into phases.
  void normalize_group(int gid) {
    if (delegated_) return;
    absorb_internal_edges(gid);
    for (int p : groups_.at(gid))
      if (!frame_.at(p).x) return;
    flip_group(gid);
  }

  /// Switches to the tableau backend.
  void delegate() {
    if (delegated_) return;
    tab_ = to_tableau();
    adj_.clear();
    frame_.clear();
    delegated_ = true;
  }

  StabilizerTableau& tableau_mut() {
    if (!delegated_) throw std::logic_error("state is not delegated");
    return tab_;
  }

  /// Renames a photon (used when a fusion produces a new vertex id in tableau mode).
  void rename_vertex(int from, int to) {
    if (has_vertex(to)) throw std::invalid_argument("vertex id in use");
    const int gid = group_of(from);
    group_of_.erase(from);
    group_of_[to] = gid;
    groups_[gid].erase(from);
    groups_[gid].insert(to);
    if (delegated_) {
      tab_.rename(from, to);
    } else {
      adj_[to] = adj_.at(from);
      for (int q : adj_[to]) {
        adj_.at(q).erase(from);
        adj_.at(q).insert(to);
      }
      adj_.erase(from);
      frame_[to] = frame_.at(from);
      frame_.erase(from);
    }
    next_vertex_ = std::max(next_vertex_, to + 1);
  }

  int fresh_vertex_id() { return next_vertex_++; }

  /// Group bookkeeping for a photon created outside add_vertex (tableau mode).
  void register_singleton(int v) {
    const int gid = next_group_++;
    group_of_[v] = gid;
    groups_[gid] = {v};
  }

  // ------------------------------------------------------- conversions

  StabilizerTableau to_tableau() const {
    if (delegated_) return tab_;
    const std::vector<int> ids = vertices();
    const std::size_t n = ids.size();
    std::map<int, std::size_t> col;
    for (std::size_t i = 0; i < n; ++i) col[ids[i]] = i;
    std::vector<PauliString> rows;
    for (const auto& [gid, mem] : groups_) {
      const int c = *mem.begin();
      for (int p : mem)
        if (p != c) {
          PauliString r(n);
          r.z[col[c]] = r.z[col[p]] = 1;
          rows.push_back(r);
        }
      PauliString r(n);
      for (int p : mem) {
        r.x[col[p]] = 1;
        for (int q : adj_.at(p)) r.z[col[q]] ^= 1;
      }
      rows.push_back(r);
    }
    StabilizerTableau t(ids, rows);
    for (int p : ids) {
      const auto& f = frame_.at(p);
      if (f.s()) t.s(p);
      if (f.z()) t.pauli(p, 'Z');
      if (f.x) t.pauli(p, 'X');
    }
    return t;
  }

  /// Dense state over photons in ascending id order.
  QubitState to_statevector() const {
    if (vertex_count() > kMaxStatevectorPhotons)
      throw std::length_error("state vector export limited to " + std::to_string(kMaxStatevectorPhotons) + " photons");
    if (delegated_) return QubitState::from_tableau(tab_).sorted();
    const std::vector<int> ids = vertices();
    const std::size_t n = ids.size();
    std::map<int, std::size_t> col;
    for (std::size_t i = 0; i < n; ++i) col[ids[i]] = i;
    std::vector<std::vector<int>> gs;
    std::map<int, std::size_t> gidx;
    for (const auto& [gid, mem] : groups_) {
      gidx[gid] = gs.size();
      gs.emplace_back(mem.begin(), mem.end());
    }
    auto st = QubitState::zeros(ids);
    auto& amps = st.amplitudes();
    std::fill(amps.begin(), amps.end(), cplx{});
    static const cplx ipow[4] = {1, cplx{0, 1}, -1, cplx{0, -1}};
    const double norm = std::pow(kInvSqrt2, static_cast<double>(gs.size()));
    for (std::size_t a = 0; a < (std::size_t{1} << gs.size()); ++a) {
      auto bit = [&](int p) { return static_cast<int>((a >> gidx[group_of_.at(p)]) & 1U); };
      int ph = 0;
      std::size_t index = 0;
      for (int p : ids) {
        const int xb = bit(p);
        const auto& f = frame_.at(p);
        ph += f.k * xb;
        for (int q : adj_.at(p))
          if (p < q) ph += 2 * (xb & bit(q));
        if (xb ^ static_cast<int>(f.x)) index |= std::size_t{1} << (n - 1 - col[p]);
      }
      amps[index] += norm * ipow[ph % 4];
    }
    return st;
  }

  /// Same photons and the same stabilizer group up to signs.
  friend bool equal_up_to_pauli(const GraphState& a, const GraphState& b) {
    if (a.vertices() != b.vertices()) throw std::invalid_argument("vertex sets differ");
    return a.to_tableau().same_up_to_pauli(b.to_tableau());
  }

  /// Same photons and the same stabilizer group, signs included.
  friend bool same_state(const GraphState& a, const GraphState& b) {
    if (a.vertices() != b.vertices()) throw std::invalid_argument("vertex sets differ");
    return a.to_tableau().same_state(b.to_tableau());
  }

  /// Same bonds and groups, frames ignored.
  friend bool same_layout(const GraphState& a, const GraphState& b) {
    return a.vertices() == b.vertices() && a.edges() == b.edges() && a.groups() == b.groups();
  }

  /// Structural invariants; throws std::logic_error on violation.
  void validate() const {
    for (const auto& [gid, mem] : groups_) {
      if (mem.empty()) throw std::logic_error("empty group");
      for (int p : mem)
        if (group_of_.at(p) != gid) throw std::logic_error("group index mismatch");
    }
    if (delegated_) {
      if (tab_.sorted_ids() != vertices()) throw std::logic_error("tableau ids mismatch");
      return;
    }
    for (const auto& [v, nb] : adj_) {
      if (!group_of_.count(v)) throw std::logic_error("adjacency for absent vertex");
      for (int q : nb) {
        if (q == v) throw std::logic_error("self-loop");
        if (!adj_.at(q).count(v)) throw std::logic_error("asymmetric adjacency");
        if (group_of_.at(q) == group_of_.at(v)) throw std::logic_error("bond inside a logical group");
      }
    }
    for (const auto& [gid, mem] : groups_) {
      bool all = true;
      for (int p : mem) all = all && frame_.at(p).x;
      if (all) throw std::logic_error("group frame not normalized");
    }
  }

 private:
  void check(int v) const {
    if (!has_vertex(v)) throw std::out_of_range("vertex " + std::to_string(v) + " absent");
  }

  void require_graph() const {
    if (delegated_) throw std::logic_error("graph view unavailable: state delegated to tableau");
  }

  /// Bonds between photons of one group become Z phases.
  void absorb_internal_edges(int gid) {
    const std::set<int> mem = groups_.at(gid);
    for (int p : mem)
      for (int q : std::set<int>(adj_.at(p)))
        if (p < q && mem.count(q)) {
          toggle_edge(p, q);
          add_phase(p, 2);
        }
  }

  /// Frame conjugation: the photon's physical basis seen on the ideal state,
  /// plus whether the outcome bit flips.
  static std::pair<Basis, int> effective(const VertexFrame& f, Basis b) {
    int flip = 0;
    if (f.x && b != Basis::X) flip ^= 1;  // X Z X = -Z, X Y X = -Y
    if (b == Basis::Z) return {Basis::Z, flip};
    // D_k^dag X D_k: X, -Y, -X, Y.  D_k^dag Y D_k: Y, X, -Y, -X.
    static const Basis from_x[4] = {Basis::X, Basis::Y, Basis::X, Basis::Y};
    static const int flip_x[4] = {0, 1, 1, 0};
    static const Basis from_y[4] = {Basis::Y, Basis::X, Basis::Y, Basis::X};
    static const int flip_y[4] = {0, 0, 1, 1};
    if (b == Basis::X) return {from_x[f.k], flip ^ flip_x[f.k]};
    return {from_y[f.k], flip ^ flip_y[f.k]};
  }

  std::optional<MeasureResult> measure_fast(int v, Basis basis, const Choice& choice) {
    const auto [eb, flip] = effective(frame_.at(v), basis);
    const int gid = group_of(v);
    const std::set<int> group = groups_.at(gid);
    auto pick = [&]() { return choice.forced ? (*choice.forced ^ flip) : choice.coin(); };

    if (eb == Basis::Z) {
      const int e = pick();
      collapse_group(gid, e);
      return MeasureResult{e ^ flip, 0.5, false, true};
    }
    if (group.size() >= 2) {
      // Redundant photon: X or Y only imprints a phase on the logical qubit.
      const int e = pick();
      const int c = *std::find_if(group.begin(), group.end(), [&](int p) { return p != v; });
      add_phase(c, eb == Basis::X ? 2 * e : 2 * e + 3);
      move_edges(v, c);
      erase_vertex(v);
      absorb_internal_edges(gid);
      normalize_group(gid);
      return MeasureResult{e ^ flip, 0.5, false, true};
    }
    // Singleton: groups reached by an odd number of bonds.
    std::map<int, int> count;
    for (int q : adj_.at(v)) count[group_of(q)] ^= 1;
    std::vector<int> odd;
    for (auto [g, c] : count)
      if (c) odd.push_back(g);

    if (eb == Basis::X) {
      if (odd.empty()) {
        if (choice.forced && (*choice.forced ^ flip) != 0) throw std::domain_error("forced outcome has probability zero");
        erase_vertex(v);
        return MeasureResult{flip, 1.0, true, true};
      }
      // One odd group would be left in a Z eigenstate, which has no graph form.
      if (odd.size() != 2) return std::nullopt;
      const int e = pick();
      erase_vertex(v);
      if (e) flip_group(odd[1]);
      merge_groups(odd[0], odd[1]);
      return MeasureResult{e ^ flip, 0.5, false, true};
    }
    // Y: local complementation on the odd groups.
    const int e = pick();
    const int sigma = e ? 3 : 1;
    erase_vertex(v);
    for (std::size_t i = 0; i < odd.size(); ++i) {
      add_phase(carrier(odd[i]), sigma);
      for (std::size_t j = i + 1; j < odd.size(); ++j) toggle_edge(carrier(odd[i]), carrier(odd[j]));
    }
    return MeasureResult{e ^ flip, 0.5, false, true};
  }

  MeasureResult measure_tableau(int v, Basis basis, const Choice& choice) {
    const std::set<int> group = group_of_members(v);
    auto m = tab_.measure(v, basis_letter(basis), choice.forced, choice.rng);
    std::vector<int> drop{v};
    if (basis == Basis::Z && group.size() > 1)
      for (int p : group)
        if (p != v) {
          tab_.measure(p, 'Z', std::nullopt, nullptr);
          drop.push_back(p);
        }
    tab_.discard(drop);
    for (int p : drop) erase_vertex(p);
    if (basis != Basis::Z) regroup_from_tableau();
    return MeasureResult{m.outcome, m.probability, m.deterministic, false};
  }

  // Groups whose carriers are Z-correlated (+-ZZ in the stabilizer) encode one logical bit.
  void regroup_from_tableau() {
    std::vector<int> gids;
    for (const auto& [gid, mem] : groups_) gids.push_back(gid);
    std::set<int> gone;
    for (std::size_t i = 0; i < gids.size(); ++i) {
      if (gone.count(gids[i])) continue;
      for (std::size_t j = i + 1; j < gids.size(); ++j) {
        if (gone.count(gids[j])) continue;
        const auto zz = tab_.pauli_on({{carrier(gids[i]), 'Z'}, {carrier(gids[j]), 'Z'}});
        if (tab_.expectation(zz) != 0) {
          merge_groups(gids[i], gids[j]);
          gone.insert(gids[j]);
        }
      }
    }
  }

  std::map<int, int> group_of_;
  std::map<int, std::set<int>> groups_;
  std::map<int, std::set<int>> adj_;
  std::map<int, VertexFrame> frame_;
  bool delegated_ = false;
  StabilizerTableau tab_;
  int next_vertex_ = 0;
  int next_group_ = 0;
  std::size_t fast_ops_ = 0;
  std::size_t delegated_ops_ = 0;
};

}  // namespace lofusion
