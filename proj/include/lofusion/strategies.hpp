#pragma once

// Cluster construction strategies with resource accounting.
//
// Every strategy runs in one of two modes that consume the generator in the same
// order: Counting keeps only the tally, Graph also carries the GraphState through
// the fusions (with the drawn outcomes forced). Tallies agree between modes.
//
// Accounting: a recycled Bell pair is credited 1, a recycled 3-cluster 4, and a
// chain qubit drawn from the idealized supply costs kChainQubitCost.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lofusion/fusion.hpp"
#include "lofusion/graph_state.hpp"
#include "lofusion/rng.hpp"

namespace lofusion {

inline constexpr double kChainQubitCost = 6.5;
inline constexpr double kThreeClusterCredit = 4.0;
inline constexpr std::uint64_t kMaxAttempts = 1000000;

struct ResourceTally {
  std::uint64_t bell_pairs_consumed = 0;
  std::uint64_t bell_pairs_recycled = 0;
  std::uint64_t three_clusters_recycled = 0;
  std::uint64_t type_i_attempts = 0;
  std::uint64_t type_i_successes = 0;
  std::uint64_t type_ii_attempts = 0;
  std::uint64_t type_ii_successes = 0;
  std::uint64_t bonds_consumed = 0;  // chain qubits drawn from the supply
  std::uint64_t qubits_added = 0;

  double net_cost() const {
    return static_cast<double>(bell_pairs_consumed) - static_cast<double>(bell_pairs_recycled) -
           kThreeClusterCredit * static_cast<double>(three_clusters_recycled) +
           kChainQubitCost * static_cast<double>(bonds_consumed);
  }

  ResourceTally& operator+=(const ResourceTally& o) {
    bell_pairs_consumed += o.bell_pairs_consumed;
    bell_pairs_recycled += o.bell_pairs_recycled;
    three_clusters_recycled += o.three_clusters_recycled;
    type_i_attempts += o.type_i_attempts;
    type_i_successes += o.type_i_successes;
    type_ii_attempts += o.type_ii_attempts;
    type_ii_successes += o.type_ii_successes;
    bonds_consumed += o.bonds_consumed;
    qubits_added += o.qubits_added;
    return *this;
  }

  bool operator==(const ResourceTally&) const = default;
};

enum class Mode { Counting, Graph };

/// A linear cluster: photon ids in chain order (graph mode) or just its length.
struct Chain {
  std::optional<GraphState> g;
  std::deque<int> order;
  std::size_t length = 0;
};

// ---------------------------------------------------------------- draws

namespace detail {

inline FusionKind draw_type_i(Rng& rng) {
  const bool success = rng.coin(), which = rng.coin();
  if (success) return which ? FusionKind::SuccessH : FusionKind::SuccessV;
  return which ? FusionKind::FailZero : FusionKind::FailTwo;
}

inline std::pair<FusionKind, int> draw_type_ii(Rng& rng) {
  const bool success = rng.coin(), which = rng.coin();
  if (success) return {which ? FusionKind::SuccessOdd : FusionKind::SuccessEven, 0};
  return {FusionKind::Fail, which ? 1 : 0};
}

inline FusionChoice forced_with(FusionKind k, int branch, Rng& rng) { return {k, branch, &rng}; }

// Removes photons from a graph-mode chain (disjoint leftovers or trimmed ends).
inline void drop(GraphState& g, int v) { g.measure(v, Basis::Z, Choice::force(0)); }

inline void watchdog(std::uint64_t& attempts) {
  if (++attempts > kMaxAttempts) throw std::runtime_error("strategy exceeded the attempt limit");
}

}  // namespace detail

/// Bell pair as a 2-chain.
inline Chain bell_chain(Mode mode, ResourceTally& t) {
  ++t.bell_pairs_consumed;
  Chain c;
  c.length = 2;
  if (mode == Mode::Graph) {
    c.g = GraphState::bell_pair();
    c.order = {0, 1};
  }
  return c;
}

/// Moves `piece` into `host`'s state; returns the piece's order in host ids.
inline std::deque<int> absorb_chain(Chain& host, const Chain& piece) {
  std::deque<int> order;
  if (!host.g) return order;
  const int shift = host.g->absorb(*piece.g);
  for (int v : piece.order) order.push_back(v + shift);
  return order;
}

/// Type-I between the back of `chain` and the front of `piece`, where the piece's
/// photons already live in chain.g (graph mode). On success the piece is appended.
/// On failure both touched photons are gone and the piece is returned shortened.
inline bool attach_type_i(Chain& chain, std::deque<int>& piece, std::size_t& piece_len, Rng& rng, ResourceTally& t,
                          FusionLog* log) {
  const FusionKind k = detail::draw_type_i(rng);
  ++t.type_i_attempts;
  const bool ok = is_success(k);
  if (chain.g) {
    auto o = fuse_type_i(*chain.g, chain.order.back(), piece.front(), detail::forced_with(k, 0, rng), log);
    chain.order.pop_back();
    piece.pop_front();
    if (ok) {
      chain.order.push_back(o.fused);
      for (int v : piece) chain.order.push_back(v);
      piece.clear();
    }
  }
  if (ok) {
    ++t.type_i_successes;
    chain.length += piece_len - 1;
    piece_len = 0;
  } else {
    chain.length -= 1;
    piece_len -= 1;
  }
  return ok;
}

inline void drop_piece(Chain& chain, std::deque<int>& piece) {
  if (chain.g)
    for (int v : piece) detail::drop(*chain.g, v);
  piece.clear();
}

inline void trim_back(Chain& chain) {
  if (chain.g) {
    detail::drop(*chain.g, chain.order.back());
    chain.order.pop_back();
  }
  --chain.length;
}

// ---------------------------------------------------------------- small clusters

/// 3-chain from two Bell pairs by repeated Type-I fusion.
inline Chain build_three_cluster(Rng& rng, ResourceTally& t, Mode mode = Mode::Counting, FusionLog* log = nullptr) {
  std::uint64_t attempts = 0;
  for (;;) {
    detail::watchdog(attempts);
    Chain c = bell_chain(mode, t);
    Chain other = bell_chain(mode, t);
    auto piece = absorb_chain(c, other);
    std::size_t len = 2;
    if (attach_type_i(c, piece, len, rng, t, log)) return c;
    // both pairs are down to one photon each; nothing to recycle
  }
}

/// 5-chain from two 3-chains; failures recycle two Bell pairs.
inline Chain build_five_cluster(Rng& rng, ResourceTally& t, Mode mode = Mode::Counting, FusionLog* log = nullptr) {
  std::uint64_t attempts = 0;
  for (;;) {
    detail::watchdog(attempts);
    Chain a = build_three_cluster(rng, t, mode, log);
    Chain b = build_three_cluster(rng, t, mode, log);
    auto piece = absorb_chain(a, b);
    std::size_t len = 3;
    if (attach_type_i(a, piece, len, rng, t, log)) return a;
    t.bell_pairs_recycled += 2;
  }
}

// ---------------------------------------------------------------- growth

struct GrowthResult {
  Chain chain;
  ResourceTally tally;
  double seed_cost = 0;
  std::size_t seed_length = 0;

  /// Marginal net cost per qubit beyond the seed cluster.
  double cost_per_qubit() const {
    const double added = static_cast<double>(chain.length) - static_cast<double>(seed_length);
    return added > 0 ? (tally.net_cost() - seed_cost) / added : 0.0;
  }
};

namespace detail {

// Chains that fall below two photons are restarted from a Bell pair.
inline void reseed_if_short(Chain& chain, Mode mode, ResourceTally& t) {
  if (chain.length >= 2) return;
  if (chain.g)
    for (int v : chain.order) drop(*chain.g, v);
  Chain fresh = bell_chain(mode, t);
  if (chain.g) {
    chain.order = absorb_chain(chain, fresh);
  }
  chain.length = 2;
}

inline void trim_to(Chain& chain, std::size_t target) {
  while (chain.length > target) trim_back(chain);
}

}  // namespace detail

/// Grows a linear cluster by attaching 3-chains one at a time.
inline GrowthResult grow_linear_naive(std::size_t target_len, Rng& rng, Mode mode = Mode::Counting,
                                      FusionLog* log = nullptr) {
  if (target_len < 3) throw std::invalid_argument("naive growth needs a target length of at least 3");
  GrowthResult r;
  r.chain = build_three_cluster(rng, r.tally, mode, log);
  r.seed_cost = r.tally.net_cost();
  r.seed_length = r.chain.length;
  std::uint64_t attempts = 0;
  while (r.chain.length < target_len) {
    detail::watchdog(attempts);
    Chain three = build_three_cluster(rng, r.tally, mode, log);
    auto piece = absorb_chain(r.chain, three);
    std::size_t len = 3;
    if (!attach_type_i(r.chain, piece, len, rng, r.tally, log)) {
      // the 3-chain's remainder is a Bell pair
      ++r.tally.bell_pairs_recycled;
      drop_piece(r.chain, piece);
      detail::reseed_if_short(r.chain, mode, r.tally);
    }
  }
  detail::trim_to(r.chain, target_len);
  r.tally.qubits_added = r.chain.length - r.seed_length;
  return r;
}

/// Grows a linear cluster with 5-chains: on failure the 4-chain remainder is tried,
/// and after a second failure the remaining 3-chain is recycled.
inline GrowthResult grow_linear_five(std::size_t target_len, Rng& rng, Mode mode = Mode::Counting,
                                     FusionLog* log = nullptr) {
  if (target_len < 5) throw std::invalid_argument("five-cluster growth needs a target length of at least 5");
  GrowthResult r;
  r.chain = build_five_cluster(rng, r.tally, mode, log);
  r.seed_cost = r.tally.net_cost();
  r.seed_length = r.chain.length;
  std::uint64_t attempts = 0;
  while (r.chain.length < target_len) {
    detail::watchdog(attempts);
    Chain five = build_five_cluster(rng, r.tally, mode, log);
    auto piece = absorb_chain(r.chain, five);
    std::size_t len = 5;
    bool done = false;
    for (int round = 0; round < 2 && !done; ++round) {
      detail::reseed_if_short(r.chain, mode, r.tally);
      done = attach_type_i(r.chain, piece, len, rng, r.tally, log);
    }
    if (!done) {
      ++r.tally.three_clusters_recycled;
      drop_piece(r.chain, piece);
      detail::reseed_if_short(r.chain, mode, r.tally);
    }
  }
  detail::trim_to(r.chain, target_len);
  r.tally.qubits_added = r.chain.length - r.seed_length;
  return r;
}

// ---------------------------------------------------------------- L-shape

/// Chain-qubit supply for the L-shape construction; unbounded unless a limit is set.
struct ChainSupply {
  std::optional<std::uint64_t> limit;
  std::uint64_t drawn = 0;

  void take(std::uint64_t n) {
    if (limit && drawn + n > *limit) throw std::runtime_error("chain supply exhausted");
    drawn += n;
  }
};

/// Named photons of one L-unit: corner U with horizontal neighbour P and the
/// vertical arm U - m - D.
struct LUnit {
  int p = -1, u = -1, m = -1, d = -1;
};

namespace detail {

// One L-unit on an existing graph (graph mode) or just its tally. Each attempt
// draws four chain qubits: pendant x - U' on U and pendant b - s on m.
// X(x) makes {U, U'} one logical qubit; Type-II(U', b). Success: U inherits s
// and m, Y(s) removes the stub. Failure: U' and b are measured in X, leaving
// {m, s} redundant; X(s) strips s and the next attempt starts afresh.
inline void run_lunit(GraphState* g, int u, int m, Rng& rng, ResourceTally& t, ChainSupply& supply, FusionLog* log) {
  std::uint64_t attempts = 0;
  for (;;) {
    watchdog(attempts);
    supply.take(4);
    t.bonds_consumed += 4;
    const int mx = rng.coin() ? 1 : 0;  // X(x)
    const auto [kind, branch] = draw_type_ii(rng);
    const int tail = rng.coin() ? 1 : 0;  // Y(s) on success, X(s) on failure
    ++t.type_ii_attempts;
    int x = -1, u2 = -1, b = -1, s = -1;
    if (g) {
      x = g->add_vertex();
      u2 = g->add_vertex();
      b = g->add_vertex();
      s = g->add_vertex();
      g->apply_cz(u, x);
      g->apply_cz(x, u2);
      g->apply_cz(m, b);
      g->apply_cz(b, s);
      g->measure(x, Basis::X, Choice::force(mx));
      fuse_type_ii(*g, u2, b, forced_with(kind, branch, rng), log);
    }
    if (is_success(kind)) {
      ++t.type_ii_successes;
      if (g) g->measure(s, Basis::Y, Choice::force(tail));
      return;
    }
    if (g) g->measure(s, Basis::X, Choice::force(tail));
  }
}

}  // namespace detail

struct LShapeResult {
  std::optional<GraphState> g;
  LUnit unit;
  ResourceTally tally;
};

/// Single L-shape: horizontal arm P - U and lower piece m - D are taken from the
/// supply as well (they are the clusters the L is cut from).
inline LShapeResult build_lshape(Rng& rng, Mode mode = Mode::Counting, ChainSupply supply = {},
                                 FusionLog* log = nullptr) {
  LShapeResult r;
  if (mode == Mode::Graph) {
    r.g = GraphState::from_edges(4, {{0, 1}, {2, 3}});
    r.unit = {0, 1, 2, 3};
  }
  detail::run_lunit(r.g ? &*r.g : nullptr, r.unit.u, r.unit.m, rng, r.tally, supply, log);
  r.tally.qubits_added = 4;
  return r;
}

// ---------------------------------------------------------------- tiling

/// Grid of L-units: wires r = 0..rows, columns c = 0..columns. Unit (c, r) has
/// corner W(c+1, r), horizontal bond W(c, r) - W(c+1, r) and vertical arm
/// W(c+1, r) - M(c, r) - W(c+1, r+1). The bottom wire holds only link endpoints.
struct TileLayout {
  int columns = 0;
  int rows = 0;
  std::map<std::pair<int, int>, int> wire;      // (c, r) -> photon
  std::map<std::pair<int, int>, int> mediator;  // unit (c, r) -> photon
  std::vector<std::pair<int, int>> edges;       // target layout, (min, max) sorted

  int vertex_count() const { return static_cast<int>(wire.size() + mediator.size()); }
};

/// Target layout with ids assigned wire by wire, then mediators.
inline TileLayout make_tile_layout(int columns, int rows) {
  if (columns < 1 || rows < 1) throw std::invalid_argument("tile layout needs at least one column and one row");
  TileLayout L;
  L.columns = columns;
  L.rows = rows;
  int next = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c <= columns; ++c) L.wire[{c, r}] = next++;
  for (int c = 1; c <= columns; ++c) L.wire[{c, rows}] = next++;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < columns; ++c) L.mediator[{c, r}] = next++;
  auto add = [&](int a, int b) { L.edges.emplace_back(std::min(a, b), std::max(a, b)); };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < columns; ++c) {
      add(L.wire.at({c, r}), L.wire.at({c + 1, r}));
      add(L.wire.at({c + 1, r}), L.mediator.at({c, r}));
      add(L.mediator.at({c, r}), L.wire.at({c + 1, r + 1}));
    }
  std::sort(L.edges.begin(), L.edges.end());
  return L;
}

struct TileResult {
  std::optional<GraphState> g;
  TileLayout layout;
  ResourceTally tally;
  std::vector<ResourceTally> units;  // per L-unit, row-major
};

/// Assembles the tile layout from L-units. Wires and the m - D links are laid
/// out first; every unit then runs the L-shape procedure on its corner.
inline TileResult tile_layout(int columns, int rows, Rng& rng, Mode mode = Mode::Counting,
                              ChainSupply supply = {}, FusionLog* log = nullptr) {
  TileResult r;
  r.layout = make_tile_layout(columns, rows);
  if (mode == Mode::Graph) {
    r.g = GraphState();
    for (int i = 0; i < r.layout.vertex_count(); ++i) r.g->add_vertex();
    for (int row = 0; row < rows; ++row)
      for (int c = 0; c < columns; ++c) {
        r.g->apply_cz(r.layout.wire.at({c, row}), r.layout.wire.at({c + 1, row}));
        r.g->apply_cz(r.layout.mediator.at({c, row}), r.layout.wire.at({c + 1, row + 1}));
      }
  }
  for (int row = 0; row < rows; ++row)
    for (int c = 0; c < columns; ++c) {
      ResourceTally t;
      const int u = r.layout.wire.at({c + 1, row}), m = r.layout.mediator.at({c, row});
      detail::run_lunit(r.g ? &*r.g : nullptr, u, m, rng, t, supply, log);
      t.qubits_added = 4;
      r.units.push_back(t);
      r.tally += t;
    }
  return r;
}

// ---------------------------------------------------------------- estimation

enum class Strategy { ThreeCluster, FiveCluster, Naive3, Five, LShape, Tile };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::ThreeCluster: return "three-cluster";
    case Strategy::FiveCluster: return "five-cluster";
    case Strategy::Naive3: return "naive";
    case Strategy::Five: return "five";
    case Strategy::LShape: return "lshape";
    default: return "tile";
  }
}

inline Strategy strategy_from_name(const std::string& n) {
  for (auto s : {Strategy::ThreeCluster, Strategy::FiveCluster, Strategy::Naive3, Strategy::Five, Strategy::LShape,
                 Strategy::Tile})
    if (n == strategy_name(s)) return s;
  throw std::invalid_argument("unknown strategy '" + n + "'");
}

struct StrategyConfig {
  Strategy strategy = Strategy::ThreeCluster;
  std::size_t target = 0;  // chain length for growth, columns for tiles; unused otherwise
  std::size_t rows = 1;    // tile rows
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;    // 0: hardware concurrency

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (strategy == Strategy::Naive3 && target < 3) throw std::invalid_argument("naive growth needs target >= 3");
    if (strategy == Strategy::Five && target < 5) throw std::invalid_argument("five-cluster growth needs target >= 5");
    if (strategy == Strategy::Tile && (target < 1 || rows < 1))
      throw std::invalid_argument("tiling needs target (columns) >= 1 and rows >= 1");
  }
};

struct TrialRecord {
  std::uint64_t trial = 0;
  ResourceTally tally;
  double net_cost = 0;
  double cost_per_qubit = 0;  // growth strategies only
};

inline TrialRecord run_trial(const StrategyConfig& cfg, std::uint64_t index) {
  Rng rng = Rng::stream(cfg.seed, index);
  TrialRecord rec;
  rec.trial = index;
  switch (cfg.strategy) {
    case Strategy::ThreeCluster: {
      build_three_cluster(rng, rec.tally);
      rec.tally.qubits_added = 3;
      break;
    }
    case Strategy::FiveCluster: {
      build_five_cluster(rng, rec.tally);
      rec.tally.qubits_added = 5;
      break;
    }
    case Strategy::Naive3: {
      auto r = grow_linear_naive(cfg.target, rng);
      rec.tally = r.tally;
      rec.cost_per_qubit = r.cost_per_qubit();
      break;
    }
    case Strategy::Five: {
      auto r = grow_linear_five(cfg.target, rng);
      rec.tally = r.tally;
      rec.cost_per_qubit = r.cost_per_qubit();
      break;
    }
    case Strategy::LShape: rec.tally = build_lshape(rng).tally; break;
    case Strategy::Tile:
      rec.tally = tile_layout(static_cast<int>(cfg.target), static_cast<int>(cfg.rows), rng).tally;
      break;
  }
  rec.net_cost = rec.tally.net_cost();
  return rec;
}

struct MetricSummary {
  double mean = 0;
  double stderr_ = 0;
  double ci_low = 0;
  double ci_high = 0;
};

inline MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary m;
  const double n = static_cast<double>(xs.size());
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double ss = 0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  m.stderr_ = sd / std::sqrt(n);
  m.ci_low = m.mean - 1.96 * m.stderr_;
  m.ci_high = m.mean + 1.96 * m.stderr_;
  return m;
}

struct EstimateReport {
  StrategyConfig config;
  std::vector<std::pair<std::string, MetricSummary>> metrics;  // fixed order
  std::vector<TrialRecord> trials;

  const MetricSummary& metric(const std::string& name) const {
    for (const auto& [n, m] : metrics)
      if (n == name) return m;
    throw std::out_of_range("no metric '" + name + "'");
  }
};

inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{
      "bell_pairs_consumed", "bell_pairs_recycled", "three_clusters_recycled", "net_cost",
      "type_i_attempts",     "type_i_successes",    "type_ii_attempts",        "type_ii_successes",
      "bonds_consumed",      "qubits_added",        "cost_per_qubit"};
  return names;
}

inline double metric_value(const TrialRecord& r, const std::string& name) {
  const auto& t = r.tally;
  if (name == "bell_pairs_consumed") return static_cast<double>(t.bell_pairs_consumed);
  if (name == "bell_pairs_recycled") return static_cast<double>(t.bell_pairs_recycled);
  if (name == "three_clusters_recycled") return static_cast<double>(t.three_clusters_recycled);
  if (name == "net_cost") return r.net_cost;
  if (name == "type_i_attempts") return static_cast<double>(t.type_i_attempts);
  if (name == "type_i_successes") return static_cast<double>(t.type_i_successes);
  if (name == "type_ii_attempts") return static_cast<double>(t.type_ii_attempts);
  if (name == "type_ii_successes") return static_cast<double>(t.type_ii_successes);
  if (name == "bonds_consumed") return static_cast<double>(t.bonds_consumed);
  if (name == "qubits_added") return static_cast<double>(t.qubits_added);
  if (name == "cost_per_qubit") return r.cost_per_qubit;
  throw std::out_of_range("no metric '" + name + "'");
}

/// Monte Carlo over independent per-trial streams; identical for any thread count.
inline EstimateReport estimate_resources(const StrategyConfig& cfg) {
  cfg.validate();
  EstimateReport rep;
  rep.config = cfg;
  rep.trials.resize(cfg.trials);
  unsigned nt = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::uint64_t>(nt, cfg.trials));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nt);
  for (unsigned w = 0; w < nt; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = w; i < cfg.trials; i += nt) rep.trials[i] = run_trial(cfg, i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<double> xs(cfg.trials);
  for (const auto& name : metric_names()) {
    for (std::uint64_t i = 0; i < cfg.trials; ++i) xs[i] = metric_value(rep.trials[i], name);
    rep.metrics.emplace_back(name, summarize(xs));
  }
  return rep;
}

inline void write_trials_csv(const EstimateReport& rep, std::ostream& os) {
  os << "trial,strategy,target,consumed,recycled,attempts_I,attempts_II,bonds,qubits,net_cost\n";
  for (const auto& r : rep.trials) {
    const auto& t = r.tally;
    os << r.trial << ',' << strategy_name(rep.config.strategy) << ',' << rep.config.target << ','
       << t.bell_pairs_consumed << ',' << t.bell_pairs_recycled + 4 * t.three_clusters_recycled << ','
       << t.type_i_attempts << ',' << t.type_ii_attempts << ',' << t.bonds_consumed << ',' << t.qubits_added << ','
       << nlohmann::json(r.net_cost).dump() << '\n';
  }
}

inline nlohmann::json summary_json(const EstimateReport& rep) {
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [name, s] : rep.metrics)
    m[name] = {{"mean", s.mean}, {"stderr", s.stderr_}, {"ci95", {s.ci_low, s.ci_high}}};
  return {{"strategy", strategy_name(rep.config.strategy)},
          {"target", rep.config.target},
          {"rows", rep.config.rows},
          {"trials", rep.config.trials},
          {"seed", rep.config.seed},
          {"metrics", m}};
}

}  // namespace lofusion
