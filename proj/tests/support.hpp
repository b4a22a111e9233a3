#pragma once

// Shared oracles for the graph/fusion tests and the acceptance binary.

#include <string>
#include <vector>

#include "lofusion/graph_state.hpp"
#include "lofusion/linalg.hpp"
#include "lofusion/statevector.hpp"

namespace lofusion::testing {

/// Dense mirror of a GraphState measurement: project photon v, and for a Z
/// measurement on a larger group also the other group photons.
inline void dense_measure(QubitState& s, const std::vector<int>& group, int v, Basis b, int outcome) {
  s.measure_out(v, QubitState::pauli_eigen(basis_letter(b), 0), outcome, nullptr);
  if (b != Basis::Z) return;
  Rng any(1);
  for (int p : group)
    if (p != v) s.measure_out(p, QubitState::pauli_eigen('Z', 0), std::nullopt, &any);
}

inline void dense_pauli(QubitState& s, int v, char p) {
  switch (p) {
    case 'X': s.apply(gates::x(), v); break;
    case 'Y': s.apply(gates::y(), v); break;
    case 'Z': s.apply(gates::z(), v); break;
    default: break;
  }
}

/// Applies a two-input Kraus operator (columns |y_u y_v>, u most significant) to
/// photons u and v. A two-row operator leaves its output on photon `out`.
/// Returns the unnormalized result; its squared norm is the outcome probability.
inline QubitState apply_kraus(const QubitState& s, int u, int v, const CMatrix& k, int out = -1) {
  const auto& ids = s.ids();
  const std::size_t n = ids.size();
  auto pos = [&](int id) {
    for (std::size_t i = 0; i < n; ++i)
      if (ids[i] == id) return i;
    throw std::out_of_range("photon not in state");
  };
  const std::size_t pu = pos(u), pv = pos(v);
  std::vector<int> rest;
  for (int id : ids)
    if (id != u && id != v) rest.push_back(id);
  std::vector<int> new_ids = rest;
  if (k.rows == 2) new_ids.push_back(out);
  const std::size_t m = new_ids.size();
  std::vector<cplx> amps(std::size_t{1} << m);
  for (std::size_t idx = 0; idx < s.amplitudes().size(); ++idx) {
    const cplx a = s.amplitudes()[idx];
    if (a == cplx{}) continue;
    auto bit = [&](std::size_t p) { return (idx >> (n - 1 - p)) & 1; };
    const std::size_t col = 2 * bit(pu) + bit(pv);
    std::size_t base = 0;
    for (std::size_t i = 0, j = 0; i < n; ++i) {
      if (i == pu || i == pv) continue;
      base |= bit(i) << (m - 1 - j);
      ++j;
    }
    for (std::size_t r = 0; r < k.rows; ++r) amps[base | r] += k(r, col) * a;
  }
  return QubitState::from_amplitudes(new_ids, amps);
}

/// Fidelity of the graph's dense export with an independently evolved state.
inline double graph_fidelity(const GraphState& g, const QubitState& s) { return state_fidelity(g.to_statevector(), s); }

}  // namespace lofusion::testing
