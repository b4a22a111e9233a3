#pragma once

// Dense qubit state vector with labelled qubits. Qubit k of n is bit (n-1-k)
// of the basis index, so the first qubit is the most significant.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lofusion/linalg.hpp"
#include "lofusion/rng.hpp"
#include "lofusion/stabilizer.hpp"

namespace lofusion {

using Mat2 = std::array<cplx, 4>;  // row-major

namespace gates {
inline Mat2 h() { return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}; }
inline Mat2 x() { return {0, 1, 1, 0}; }
inline Mat2 y() { return {0, cplx{0, -1}, cplx{0, 1}, 0}; }
inline Mat2 z() { return {1, 0, 0, -1}; }
inline Mat2 s() { return {1, 0, 0, cplx{0, 1}}; }
inline Mat2 sdg() { return {1, 0, 0, cplx{0, -1}}; }
/// exp(-i t Z / 2)
inline Mat2 rz(double t) { return {std::polar(1.0, -t / 2), 0, 0, std::polar(1.0, t / 2)}; }
/// exp(-i t X / 2)
inline Mat2 rx(double t) {
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  return {c, cplx{0, -s}, cplx{0, -s}, c};
}
inline Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}
}  // namespace gates

inline constexpr std::size_t kMaxDenseQubits = 24;

class QubitState {
 public:
  QubitState() : amps_{1.0} {}

  static QubitState zeros(std::vector<int> ids) {
    QubitState s;
    s.init(std::move(ids));
    return s;
  }

  static QubitState plus(std::vector<int> ids) {
    QubitState s;
    s.init(std::move(ids));
    const double a = std::pow(kInvSqrt2, static_cast<double>(s.ids_.size()));
    std::fill(s.amps_.begin(), s.amps_.end(), cplx{a});
    return s;
  }

  static QubitState from_amplitudes(std::vector<int> ids, std::vector<cplx> amps) {
    QubitState s;
    s.init(std::move(ids));
    if (amps.size() != s.amps_.size()) throw std::invalid_argument("amplitude count mismatch");
    s.amps_ = std::move(amps);
    return s;
  }

  /// Stabilizer state of a tableau: project a fixed generic vector onto the +1 eigenspaces.
  static QubitState from_tableau(const StabilizerTableau& t) {
    QubitState s;
    s.init(t.ids());
    Rng rng(0x5eed);
    for (auto& a : s.amps_) a = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
    for (const auto& row : t.rows()) {
      QubitState g = s;
      g.apply_pauli(row);
      for (std::size_t i = 0; i < s.amps_.size(); ++i) s.amps_[i] = 0.5 * (s.amps_[i] + g.amps_[i]);
    }
    s.normalize();
    return s;
  }

  std::size_t size() const { return ids_.size(); }
  const std::vector<int>& ids() const { return ids_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  std::vector<cplx>& amplitudes() { return amps_; }

  std::size_t qubit(int id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw std::out_of_range("qubit " + std::to_string(id) + " not in state");
    return static_cast<std::size_t>(it - ids_.begin());
  }

  std::size_t mask(int id) const { return std::size_t{1} << (size() - 1 - qubit(id)); }

  double norm_sq() const {
    double n = 0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
  }

  void normalize() {
    const double n = norm_sq();
    if (n < 1e-300) throw std::domain_error("zero state");
    for (auto& a : amps_) a /= std::sqrt(n);
  }

  void apply(const Mat2& u, int id) {
    const std::size_t m = mask(id);
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (!(i & m)) {
        const cplx a0 = amps_[i], a1 = amps_[i | m];
        amps_[i] = u[0] * a0 + u[1] * a1;
        amps_[i | m] = u[2] * a0 + u[3] * a1;
      }
  }

  void cz(int a, int b) {
    const std::size_t ma = mask(a), mb = mask(b);
    if (ma == mb) throw std::invalid_argument("CZ needs two distinct qubits");
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if ((i & ma) && (i & mb)) amps_[i] = -amps_[i];
  }

  /// Applies a Pauli string whose columns follow ids().
  void apply_pauli(const PauliString& p) {
    if (p.size() != size()) throw std::invalid_argument("Pauli size mismatch");
    std::size_t xm = 0, zm = 0;
    for (std::size_t q = 0; q < size(); ++q) {
      const std::size_t bit = std::size_t{1} << (size() - 1 - q);
      if (p.x[q]) xm |= bit;
      if (p.z[q]) zm |= bit;
    }
    static const cplx ipow[4] = {1, cplx{0, 1}, -1, cplx{0, -1}};
    std::vector<cplx> out(amps_.size());
    // i^phase X^x Z^z |b> = i^phase (-1)^(z.b) |b ^ x>
    for (std::size_t b = 0; b < amps_.size(); ++b) {
      const int par = __builtin_popcountll(static_cast<unsigned long long>(b & zm)) & 1;
      out[b ^ xm] = ipow[p.phase & 3] * (par ? -amps_[b] : amps_[b]);
    }
    amps_ = std::move(out);
  }

  /// Contracts qubit `id` with <v| (v given as its two amplitudes) and removes it. Unnormalized.
  void project_out(int id, cplx v0, cplx v1) {
    const std::size_t q = qubit(id), n = size(), m = mask(id);
    std::vector<cplx> out(amps_.size() / 2);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & m) continue;
      const std::size_t high = i >> (n - q), low = i & (m - 1);
      const std::size_t j = (high << (n - 1 - q)) | low;
      out[j] = std::conj(v0) * amps_[i] + std::conj(v1) * amps_[i | m];
    }
    amps_ = std::move(out);
    ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(q));
  }

  /// Eigenvector of cos(t) X + sin(t) Y with eigenvalue (-1)^outcome.
  static std::pair<cplx, cplx> equatorial(double t, int outcome) {
    const double sgn = outcome ? -1.0 : 1.0;
    return {kInvSqrt2, sgn * kInvSqrt2 * std::polar(1.0, t)};
  }

  /// Eigenvector of a Pauli letter with eigenvalue (-1)^outcome.
  static std::pair<cplx, cplx> pauli_eigen(char p, int outcome) {
    switch (p) {
      case 'X': return equatorial(0.0, outcome);
      case 'Y': return equatorial(kPi / 2, outcome);
      case 'Z': return outcome ? std::pair<cplx, cplx>{0, 1} : std::pair<cplx, cplx>{1, 0};
      default: throw std::invalid_argument("unknown Pauli letter");
    }
  }

  /// Projective measurement of one qubit onto {|v>, |v_perp>}; removes the qubit.
  /// Returns (outcome, probability); the remaining state is renormalized.
  std::pair<int, double> measure_out(int id, std::pair<cplx, cplx> v, std::optional<int> forced, Rng* rng) {
    QubitState keep0 = *this;
    keep0.project_out(id, v.first, v.second);
    const double p0 = keep0.norm_sq() / norm_sq();
    int outcome;
    if (forced) {
      outcome = *forced & 1;
    } else {
      if (!rng) throw std::invalid_argument("random outcome requested without a generator");
      outcome = rng->uniform() < p0 ? 0 : 1;
    }
    const double p = outcome ? 1.0 - p0 : p0;
    if (p < 1e-12) throw std::domain_error("forced outcome has probability zero");
    if (outcome == 0) {
      *this = std::move(keep0);
    } else {
      // orthogonal complement: (-conj(v1), conj(v0))
      project_out(id, -std::conj(v.second), std::conj(v.first));
    }
    normalize();
    return {outcome, p};
  }

  /// State with qubits reordered by ascending id.
  QubitState sorted() const {
    std::vector<int> order = ids_;
    std::sort(order.begin(), order.end());
    QubitState s = zeros(order);
    const std::size_t n = size();
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      std::size_t j = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t q = qubit(order[k]);
        if ((i >> (n - 1 - q)) & 1U) j |= std::size_t{1} << (n - 1 - k);
      }
      s.amps_[j] = amps_[i];
    }
    return s;
  }

 private:
  void init(std::vector<int> ids) {
    if (ids.size() > kMaxDenseQubits) throw std::length_error("too many qubits for a dense state");
    ids_ = std::move(ids);
    amps_.assign(std::size_t{1} << ids_.size(), cplx{});
    if (!amps_.empty()) amps_[0] = 1.0;
  }

  std::vector<int> ids_;
  std::vector<cplx> amps_;
};

/// Fidelity between two states after aligning qubit order; 0 if the id sets differ.
inline double state_fidelity(const QubitState& a, const QubitState& b) {
  QubitState sa = a.sorted(), sb = b.sorted();
  if (sa.ids() != sb.ids()) return 0.0;
  return fidelity(sa.amplitudes(), sb.amplitudes());
}

}  // namespace lofusion
