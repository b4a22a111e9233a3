#pragma once

// Fock-space model of polarization-encoded photons on spatial rails.
//
// Each rail carries two modes (H, V). A state is a sparse map from
// occupation vectors to amplitudes; optical elements act linearly on
// creation operators and are expanded term by term. The fusion gates'
// Kraus operators are derived here from first principles.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lofusion/linalg.hpp"

namespace lofusion::fock {

enum class Pol : std::uint8_t { H = 0, V = 1 };

struct Mode {
  int rail = 0;
  Pol pol = Pol::H;
};

inline constexpr int kMaxPhotons = 8;
inline constexpr double kPruneThreshold = 1e-12;
inline constexpr double kNormTolerance = 1e-9;

/// Two entries per rail, (H, V), in the order of FockState::rails().
using Occupation = std::vector<std::uint8_t>;

class FockState {
 public:
  FockState() = default;
  explicit FockState(std::vector<int> rails) : rails_(std::move(rails)) {
    for (std::size_t i = 0; i < rails_.size(); ++i)
      for (std::size_t j = i + 1; j < rails_.size(); ++j)
        if (rails_[i] == rails_[j]) throw std::invalid_argument("duplicate rail index");
  }

  /// Basis state with the given photons (a photon listed twice doubles the occupation).
  static FockState basis(std::vector<int> rails, const std::vector<Mode>& photons) {
    FockState s(std::move(rails));
    Occupation occ(2 * s.rails_.size(), 0);
    for (const Mode& m : photons) ++occ[s.mode_index(m)];
    s.add(occ, 1.0);
    return s;
  }

  static FockState vacuum(std::vector<int> rails) { return basis(std::move(rails), {}); }

  const std::vector<int>& rails() const { return rails_; }
  const std::map<Occupation, cplx>& amplitudes() const { return amps_; }
  std::size_t mode_count() const { return 2 * rails_.size(); }

  bool has_rail(int rail) const {
    return std::find(rails_.begin(), rails_.end(), rail) != rails_.end();
  }

  std::size_t rail_position(int rail) const {
    auto it = std::find(rails_.begin(), rails_.end(), rail);
    if (it == rails_.end()) throw std::out_of_range("unknown rail " + std::to_string(rail));
    return static_cast<std::size_t>(it - rails_.begin());
  }

  std::size_t mode_index(Mode m) const {
    return 2 * rail_position(m.rail) + static_cast<std::size_t>(m.pol);
  }

  void add(const Occupation& occ, cplx amp) {
    if (occ.size() != mode_count()) throw std::invalid_argument("occupation size mismatch");
    const int n = std::accumulate(occ.begin(), occ.end(), 0);
    if (n > kMaxPhotons)
      throw std::length_error("photon number " + std::to_string(n) + " exceeds cap " +
                              std::to_string(kMaxPhotons));
    cplx& slot = amps_[occ];
    slot += amp;
    if (std::abs(slot) < kPruneThreshold) amps_.erase(occ);
  }

  cplx amplitude(const Occupation& occ) const {
    auto it = amps_.find(occ);
    return it == amps_.end() ? cplx{} : it->second;
  }

  double norm_sq() const {
    double s = 0;
    for (const auto& [occ, a] : amps_) s += std::norm(a);
    return s;
  }

  void scale(cplx f) {
    for (auto it = amps_.begin(); it != amps_.end();) {
      it->second *= f;
      if (std::abs(it->second) < kPruneThreshold)
        it = amps_.erase(it);
      else
        ++it;
    }
  }

  void normalize() {
    const double n = norm_sq();
    if (n <= 0) throw std::domain_error("cannot normalize the zero vector");
    scale(1.0 / std::sqrt(n));
  }

  bool is_normalized() const { return std::abs(norm_sq() - 1.0) < kNormTolerance; }

  int max_photons() const {
    int best = 0;
    for (const auto& [occ, a] : amps_) best = std::max(best, std::accumulate(occ.begin(), occ.end(), 0));
    return best;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [occ, a] : amps_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << a.real() << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << "i)"
         << occupation_label(occ);
    }
    return first ? "0" : os.str();
  }

  std::string occupation_label(const Occupation& occ) const {
    std::string s = "|";
    for (std::size_t r = 0; r < rails_.size(); ++r) {
      if (r) s += ",";
      s += std::to_string(occ[2 * r]) + "H" + std::to_string(occ[2 * r + 1]) + "V";
    }
    return s + ">";
  }

 private:
  std::vector<int> rails_;
  std::map<Occupation, cplx> amps_;
};

/// Linear map on creation operators: a_m^dag -> sum_k u_km a_k^dag, over mode indices.
using ModeMap = std::map<std::size_t, std::vector<std::pair<std::size_t, cplx>>>;

inline FockState apply_mode_map(const FockState& state, const ModeMap& map) {
  static const auto factorial = [](int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  FockState out(state.rails());
  const std::size_t nm = state.mode_count();
  for (const auto& [occ, amp] : state.amplitudes()) {
    // Expand prod_m (sum_k u_km a_k^dag)^{n_m} as a polynomial in creation operators.
    std::map<Occupation, cplx> poly{{Occupation(nm, 0), 1.0}};
    double in_norm = 1;
    for (std::size_t m = 0; m < nm; ++m) {
      in_norm *= factorial(occ[m]);
      auto it = map.find(m);
      for (int copy = 0; copy < occ[m]; ++copy) {
        std::map<Occupation, cplx> next;
        for (const auto& [mono, c] : poly) {
          if (it == map.end()) {
            Occupation k = mono;
            ++k[m];
            next[k] += c;
          } else {
            for (const auto& [target, u] : it->second) {
              Occupation k = mono;
              ++k[target];
              next[k] += c * u;
            }
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [mono, c] : poly) {
      double out_norm = 1;
      for (auto n : mono) out_norm *= factorial(n);
      out.add(mono, amp * c * std::sqrt(out_norm / in_norm));
    }
  }
  return out;
}

/// Reflection phase applied to V-polarized light crossing rails; +1 is the default convention.
inline constexpr double kDefaultReflectionPhase = 1.0;

/// Polarizing beam splitter: H transmits, V swaps rails (times `reflection_phase`).
inline FockState apply_pbs(const FockState& state, int rail_a, int rail_b,
                           cplx reflection_phase = kDefaultReflectionPhase) {
  if (rail_a == rail_b) throw std::invalid_argument("PBS needs two distinct rails");
  const std::size_t av = state.mode_index({rail_a, Pol::V});
  const std::size_t bv = state.mode_index({rail_b, Pol::V});
  ModeMap map;
  map[av] = {{bv, reflection_phase}};
  map[bv] = {{av, reflection_phase}};
  return apply_mode_map(state, map);
}

/// a_H -> cos t a_H + sin t a_V, a_V -> -sin t a_H + cos t a_V on one rail.
inline FockState apply_rotation(const FockState& state, int rail, double angle_degrees) {
  const double t = angle_degrees * kPi / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  const std::size_t h = state.mode_index({rail, Pol::H});
  const std::size_t v = state.mode_index({rail, Pol::V});
  ModeMap map;
  map[h] = {{h, c}, {v, s}};
  map[v] = {{h, -s}, {v, c}};
  return apply_mode_map(state, map);
}

/// Photon counts (resolving) or click flags (non-resolving) seen on one rail.
struct DetectionOutcome {
  int rail = 0;
  int h = 0;
  int v = 0;
  bool resolving = true;

  auto operator<=>(const DetectionOutcome&) const = default;

  int photons() const { return h + v; }

  std::string label() const {
    std::string s = "r" + std::to_string(rail) + ":";
    if (resolving) return s + std::to_string(h) + "H" + std::to_string(v) + "V";
    if (!h && !v) return s + "none";
    return s + (h ? "H" : "") + (v ? "V" : "");
  }
};

/// Unnormalized projections of `state` onto each outcome of a detector on `rail`.
/// The detected rail is removed from the returned states.
inline std::map<DetectionOutcome, FockState> project_rail(const FockState& state, int rail,
                                                          bool number_resolving) {
  const std::size_t pos = state.rail_position(rail);
  std::vector<int> rest = state.rails();
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
  std::map<DetectionOutcome, FockState> out;
  for (const auto& [occ, amp] : state.amplitudes()) {
    DetectionOutcome o{rail, occ[2 * pos], occ[2 * pos + 1], number_resolving};
    if (!number_resolving) {
      o.h = o.h > 0;
      o.v = o.v > 0;
    }
    Occupation r = occ;
    r.erase(r.begin() + static_cast<std::ptrdiff_t>(2 * pos),
            r.begin() + static_cast<std::ptrdiff_t>(2 * pos + 2));
    auto it = out.try_emplace(o, rest).first;
    it->second.add(r, amp);
  }
  return out;
}

struct RailMeasurement {
  DetectionOutcome outcome;
  double probability = 0;
  FockState collapsed;
};

/// Born-rule measurement of one rail in the H/V basis.
inline std::vector<RailMeasurement> measure_rail(const FockState& state, int rail,
                                                 bool number_resolving) {
  if (!state.has_rail(rail))
    throw std::invalid_argument("rail " + std::to_string(rail) + " is not present (already detected?)");
  if (!state.is_normalized()) throw std::invalid_argument("measure_rail needs a normalized state");
  std::vector<RailMeasurement> out;
  for (auto& [o, s] : project_rail(state, rail, number_resolving)) {
    const double p = s.norm_sq();
    if (p < kPruneThreshold) continue;
    FockState c = s;
    c.normalize();
    out.push_back({o, p, std::move(c)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circuits

enum class DetectorBasis { HV, Rotated45 };

struct Pbs {
  int rail_a = 0;
  int rail_b = 1;
  cplx reflection_phase = kDefaultReflectionPhase;
};

struct Rotation {
  int rail = 0;
  double degrees = 45.0;
};

struct Detector {
  int rail = 0;
  bool number_resolving = true;
  DetectorBasis basis = DetectorBasis::HV;
};

using Element = std::variant<Pbs, Rotation, Detector>;

struct OpticalCircuit {
  std::string name;
  std::vector<int> rails;
  std::vector<Element> elements;

  std::vector<int> detected_rails() const {
    std::vector<int> d;
    for (const auto& e : elements)
      if (auto* det = std::get_if<Detector>(&e)) d.push_back(det->rail);
    return d;
  }

  std::size_t detector_count() const { return detected_rails().size(); }

  void validate() const {
    const auto known = [&](int r) { return std::find(rails.begin(), rails.end(), r) != rails.end(); };
    std::vector<int> detected;
    for (const auto& e : elements) {
      std::vector<int> touched;
      if (auto* p = std::get_if<Pbs>(&e)) touched = {p->rail_a, p->rail_b};
      if (auto* r = std::get_if<Rotation>(&e)) touched = {r->rail};
      if (auto* d = std::get_if<Detector>(&e)) touched = {d->rail};
      for (int r : touched) {
        if (!known(r)) throw std::invalid_argument("circuit references unknown rail " + std::to_string(r));
        if (std::find(detected.begin(), detected.end(), r) != detected.end())
          throw std::invalid_argument("rail " + std::to_string(r) + " used after detection");
      }
      if (auto* d = std::get_if<Detector>(&e)) detected.push_back(d->rail);
    }
  }

  /// Same circuit with every detector's resolution flag overridden.
  OpticalCircuit with_resolution(bool number_resolving) const {
    OpticalCircuit c = *this;
    for (auto& e : c.elements)
      if (auto* d = std::get_if<Detector>(&e)) d->number_resolving = number_resolving;
    return c;
  }

  OpticalCircuit with_reflection_phase(cplx phase) const {
    OpticalCircuit c = *this;
    for (auto& e : c.elements)
      if (auto* p = std::get_if<Pbs>(&e)) p->reflection_phase = phase;
    return c;
  }
};

using Detections = std::vector<DetectionOutcome>;

/// Propagates `input` through the circuit, branching at each detector.
/// Branch states are unnormalized: their squared norm is the branch probability.
inline std::map<Detections, FockState> run_circuit(const OpticalCircuit& circuit, const FockState& input) {
  circuit.validate();
  std::map<Detections, FockState> branches{{{}, input}};
  for (const auto& e : circuit.elements) {
    std::map<Detections, FockState> next;
    for (auto& [key, st] : branches) {
      if (auto* p = std::get_if<Pbs>(&e)) {
        next.emplace(key, apply_pbs(st, p->rail_a, p->rail_b, p->reflection_phase));
      } else if (auto* r = std::get_if<Rotation>(&e)) {
        next.emplace(key, apply_rotation(st, r->rail, r->degrees));
      } else {
        const auto& d = std::get<Detector>(e);
        FockState s = d.basis == DetectorBasis::Rotated45 ? apply_rotation(st, d.rail, 45.0) : st;
        for (auto& [o, proj] : project_rail(s, d.rail, d.number_resolving)) {
          if (proj.norm_sq() < kPruneThreshold * kPruneThreshold) continue;
          Detections k = key;
          k.push_back(o);
          next.emplace(std::move(k), std::move(proj));
        }
      }
    }
    branches = std::move(next);
  }
  return branches;
}

/// PBS, 45 degree rotation on output rail 1, polarization-resolving counter on rail 1.
/// Rail 0 carries the fused qubit.
inline OpticalCircuit type_i_circuit() {
  return {"type1", {0, 1}, {Pbs{0, 1}, Rotation{1, 45.0}, Detector{1, true, DetectorBasis::HV}}};
}

/// 45 degree rotations on both inputs, PBS, both outputs detected in the rotated basis.
inline OpticalCircuit type_ii_circuit(bool number_resolving = true) {
  return {"type2",
          {0, 1},
          {Rotation{0, 45.0}, Rotation{1, 45.0}, Pbs{0, 1},
           Detector{0, number_resolving, DetectorBasis::Rotated45},
           Detector{1, number_resolving, DetectorBasis::Rotated45}}};
}

/// Type-II with an extra 45 degree rotation on input rail 0.
inline OpticalCircuit cz_redundant_circuit(bool number_resolving = true) {
  OpticalCircuit c = type_ii_circuit(number_resolving);
  c.name = "czr";
  c.elements.insert(c.elements.begin(), Rotation{0, 45.0});
  return c;
}

// ---------------------------------------------------------------------------
// Channels

struct ChannelEntry {
  std::string label;
  Detections detections;
  CMatrix kraus;                           // rows: output basis, cols: input qubit basis
  std::vector<std::string> output_labels;  // one per row
  bool qubit_output = true;                // false: residue with != 1 photon on some rail
  double probability = 0;                  // on the maximally mixed qubit input
};

struct OutcomeChannel {
  std::string name;
  std::vector<int> input_rails;
  std::vector<int> output_rails;
  std::vector<std::string> input_labels;
  std::vector<ChannelEntry> entries;

  std::size_t input_dim() const { return input_labels.size(); }

  CMatrix completeness() const {
    CMatrix sum(input_dim(), input_dim());
    for (const auto& e : entries) sum = sum + e.kraus.adjoint() * e.kraus;
    return sum;
  }

  double completeness_error() const {
    return max_abs_diff(completeness(), CMatrix::identity(input_dim()));
  }

  double total_probability() const {
    double p = 0;
    for (const auto& e : entries) p += e.probability;
    return p;
  }

  const ChannelEntry* find(const std::string& label) const {
    for (const auto& e : entries)
      if (e.label == label) return &e;
    return nullptr;
  }
};

/// "HV"-style label of a computational basis index; rail 0 is the most significant.
inline std::string qubit_label(std::size_t index, std::size_t n) {
  std::string s(n, 'H');
  for (std::size_t q = 0; q < n; ++q)
    if ((index >> (n - 1 - q)) & 1U) s[q] = 'V';
  return s;
}

inline std::string detections_label(const Detections& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + d[i].label();
  return s.empty() ? "none" : s;
}

/// Derives the Kraus operator of every detection outcome of `circuit` acting on
/// dual-rail polarization qubits injected on `input_rails` (one photon each).
inline OutcomeChannel derive_channel(const OpticalCircuit& circuit, const std::vector<int>& input_rails) {
  circuit.validate();
  for (int r : input_rails)
    if (std::find(circuit.rails.begin(), circuit.rails.end(), r) == circuit.rails.end())
      throw std::invalid_argument("input rail " + std::to_string(r) + " not in circuit");
  const auto detected = circuit.detected_rails();
  OutcomeChannel ch;
  ch.name = circuit.name;
  ch.input_rails = input_rails;
  for (int r : circuit.rails)
    if (std::find(detected.begin(), detected.end(), r) == detected.end()) ch.output_rails.push_back(r);

  const std::size_t nin = input_rails.size();
  const std::size_t dim = std::size_t{1} << nin;
  for (std::size_t i = 0; i < dim; ++i) ch.input_labels.push_back(qubit_label(i, nin));

  // outcome -> (input column -> residual state)
  std::map<Detections, std::vector<std::pair<std::size_t, FockState>>> columns;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<Mode> photons;
    for (std::size_t q = 0; q < nin; ++q)
      photons.push_back({input_rails[q], ((i >> (nin - 1 - q)) & 1U) ? Pol::V : Pol::H});
    for (auto& [key, st] : run_circuit(circuit, FockState::basis(circuit.rails, photons)))
      columns[key].emplace_back(i, std::move(st));
  }

  const std::size_t nout = ch.output_rails.size();
  for (auto& [key, cols] : columns) {
    ChannelEntry e;
    e.detections = key;
    e.label = detections_label(key);
    std::vector<Occupation> basis;
    for (const auto& [i, st] : cols)
      for (const auto& [occ, a] : st.amplitudes()) {
        for (std::size_t r = 0; r < nout; ++r)
          if (occ[2 * r] + occ[2 * r + 1] != 1) e.qubit_output = false;
        if (std::find(basis.begin(), basis.end(), occ) == basis.end()) basis.push_back(occ);
      }
    const FockState* any = cols.empty() ? nullptr : &cols.front().second;
    if (e.qubit_output) {
      const std::size_t odim = std::size_t{1} << nout;
      e.kraus = CMatrix(odim, dim);
      for (std::size_t j = 0; j < odim; ++j) e.output_labels.push_back(qubit_label(j, nout));
      for (const auto& [i, st] : cols)
        for (const auto& [occ, a] : st.amplitudes()) {
          std::size_t row = 0;
          for (std::size_t r = 0; r < nout; ++r) row = (row << 1) | (occ[2 * r + 1] ? 1U : 0U);
          e.kraus(row, i) += a;
        }
    } else {
      std::sort(basis.begin(), basis.end());
      e.kraus = CMatrix(basis.size(), dim);
      for (const auto& occ : basis) e.output_labels.push_back(any ? any->occupation_label(occ) : "|>");
      for (const auto& [i, st] : cols)
        for (const auto& [occ, a] : st.amplitudes()) {
          const auto row = static_cast<std::size_t>(std::find(basis.begin(), basis.end(), occ) - basis.begin());
          e.kraus(row, i) += a;
        }
    }
    e.probability = e.kraus.frobenius_sq() / static_cast<double>(dim);
    ch.entries.push_back(std::move(e));
  }
  return ch;
}

/// If every Kraus operator in `group` is proportional to the first, returns a single
/// operator with the same total weight (the coarse-grained outcome is then pure).
inline std::optional<CMatrix> merge_proportional(const std::vector<const ChannelEntry*>& group,
                                                 double tol = 1e-9) {
  if (group.empty()) return std::nullopt;
  const CMatrix& k0 = group.front()->kraus;
  const double n0 = k0.frobenius_sq();
  if (n0 <= 0) return std::nullopt;
  double total = 0;
  for (const auto* e : group) {
    const CMatrix& k = e->kraus;
    if (k.rows != k0.rows || k.cols != k0.cols || e->output_labels != group.front()->output_labels)
      return std::nullopt;
    cplx overlap = 0;
    for (std::size_t i = 0; i < k.data.size(); ++i) overlap += std::conj(k0.data[i]) * k.data[i];
    const cplx c = overlap / n0;
    if (max_abs_diff(k, c * k0) > tol) return std::nullopt;
    total += k.frobenius_sq();
  }
  return cplx{std::sqrt(total / n0)} * k0;
}

/// Coarse outcome classes shared by both fusion gates.
enum class OutcomeClass { Success, Failure };

/// Type-I succeeds when exactly one photon reaches the counter.
inline OutcomeClass classify_type_i(const Detections& d) {
  int n = 0;
  for (const auto& o : d) n += o.photons();
  return n == 1 ? OutcomeClass::Success : OutcomeClass::Failure;
}

/// Type-II succeeds when both counters fire. Only click/no-click information is used,
/// so the classification is the same for resolving and non-resolving detectors.
inline OutcomeClass classify_type_ii(const Detections& d) {
  for (const auto& o : d)
    if (o.photons() == 0) return OutcomeClass::Failure;
  return d.empty() ? OutcomeClass::Failure : OutcomeClass::Success;
}

}  // namespace lofusion::fock
