#include <gtest/gtest.h>

#include <random>

#include "lofusion/fock.hpp"

using namespace lofusion;
using namespace lofusion::fock;

namespace {

const double r2 = std::sqrt(2.0);

CMatrix row_matrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> v) {
  CMatrix m(rows, cols);
  std::size_t i = 0;
  for (cplx x : v) m.data[i++] = x;
  return m;
}

FockState random_state(std::mt19937_64& gen, std::vector<int> rails, int photons) {
  std::normal_distribution<double> n;
  std::uniform_int_distribution<std::size_t> pick(0, 2 * rails.size() - 1);
  FockState s(rails);
  for (int t = 0; t < 6; ++t) {
    Occupation occ(2 * rails.size(), 0);
    for (int p = 0; p < photons; ++p) ++occ[pick(gen)];
    s.add(occ, cplx{n(gen), n(gen)});
  }
  s.normalize();
  return s;
}

std::vector<const ChannelEntry*> entries_where(const OutcomeChannel& ch,
                                               const std::function<bool(const ChannelEntry&)>& f) {
  std::vector<const ChannelEntry*> out;
  for (const auto& e : ch.entries)
    if (f(e)) out.push_back(&e);
  return out;
}

const ChannelEntry& single_detection(const OutcomeChannel& ch, int h, int v) {
  for (const auto& e : ch.entries)
    if (e.detections.size() == 1 && e.detections[0].h == h && e.detections[0].v == v) return e;
  throw std::runtime_error("no such outcome");
}

}  // namespace

TEST(Pbs, HorizontalTransmits) {
  auto s = apply_pbs(FockState::basis({0, 1}, {{0, Pol::H}}), 0, 1);
  EXPECT_NEAR(std::abs(s.amplitude({1, 0, 0, 0})), 1.0, 1e-12);
}

TEST(Pbs, VerticalReflects) {
  auto s = apply_pbs(FockState::basis({0, 1}, {{0, Pol::V}}), 0, 1);
  EXPECT_NEAR(std::abs(s.amplitude({0, 0, 0, 1})), 1.0, 1e-12);
}

TEST(Pbs, HVPairBunchesOnOneRail) {
  auto s = apply_pbs(FockState::basis({0, 1}, {{0, Pol::H}, {1, Pol::V}}), 0, 1);
  EXPECT_NEAR(std::abs(s.amplitude({1, 1, 0, 0})), 1.0, 1e-12);
  EXPECT_EQ(s.amplitudes().size(), 1U);
}

TEST(Pbs, RejectsUnknownRail) {
  auto s = FockState::vacuum({0, 1});
  EXPECT_THROW(apply_pbs(s, 0, 5), std::out_of_range);
  EXPECT_THROW(apply_pbs(s, 1, 1), std::invalid_argument);
}

TEST(Rotation, ZeroIsIdentity) {
  std::mt19937_64 gen(3);
  auto s = random_state(gen, {0, 1}, 2);
  auto r = apply_rotation(s, 0, 0.0);
  for (const auto& [occ, a] : s.amplitudes()) EXPECT_NEAR(std::abs(r.amplitude(occ) - a), 0.0, 1e-12);
}

TEST(Rotation, FortyFiveOnH) {
  auto r = apply_rotation(FockState::basis({0}, {{0, Pol::H}}), 0, 45.0);
  EXPECT_NEAR(std::abs(r.amplitude({1, 0}) - 1 / r2), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.amplitude({0, 1}) - 1 / r2), 0.0, 1e-12);
}

TEST(Rotation, Composes) {
  std::mt19937_64 gen(5);
  auto s = random_state(gen, {0, 1}, 3);
  auto a = apply_rotation(apply_rotation(s, 1, 45.0), 1, 45.0);
  auto b = apply_rotation(s, 1, 90.0);
  for (const auto& [occ, x] : b.amplitudes()) EXPECT_NEAR(std::abs(a.amplitude(occ) - x), 0.0, 1e-12);
}

TEST(Unitarity, ElementsPreserveNorm) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 50; ++t) {
    auto s = random_state(gen, {0, 1, 2}, 1 + t % 4);
    EXPECT_NEAR(apply_pbs(s, 0, 2).norm_sq(), 1.0, 1e-12);
    EXPECT_NEAR(apply_pbs(s, 1, 0, cplx{0, 1}).norm_sq(), 1.0, 1e-12);
    EXPECT_NEAR(apply_rotation(s, 1, 17.0 * t).norm_sq(), 1.0, 1e-12);
  }
}

TEST(Fock, PhotonCapEnforced) {
  std::vector<Mode> many(9, Mode{0, Pol::H});
  EXPECT_THROW(FockState::basis({0}, many), std::length_error);
}

TEST(MeasureRail, DeterministicSinglePhoton) {
  auto out = measure_rail(FockState::basis({0, 1}, {{0, Pol::H}}), 0, true);
  ASSERT_EQ(out.size(), 1U);
  EXPECT_EQ(out[0].outcome.h, 1);
  EXPECT_NEAR(out[0].probability, 1.0, 1e-12);
  EXPECT_EQ(out[0].collapsed.rails(), std::vector<int>{1});
}

TEST(MeasureRail, BornRule) {
  auto s = apply_rotation(FockState::basis({0}, {{0, Pol::H}}), 0, 45.0);
  auto out = measure_rail(s, 0, true);
  ASSERT_EQ(out.size(), 2U);
  double total = 0;
  for (const auto& m : out) {
    EXPECT_NEAR(m.probability, 0.5, 1e-12);
    total += m.probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(MeasureRail, NonResolvingMergesPhotonNumbers) {
  auto two = measure_rail(FockState::basis({0}, {{0, Pol::V}, {0, Pol::V}}), 0, false);
  auto one = measure_rail(FockState::basis({0}, {{0, Pol::V}}), 0, false);
  ASSERT_EQ(two.size(), 1U);
  ASSERT_EQ(one.size(), 1U);
  EXPECT_EQ(two[0].outcome, one[0].outcome);
  EXPECT_EQ(two[0].outcome.label(), "r0:V");
}

TEST(MeasureRail, ConsumedRailRejected) {
  auto out = measure_rail(FockState::basis({0, 1}, {{0, Pol::H}}), 1, true);
  EXPECT_THROW(measure_rail(out[0].collapsed, 1, true), std::invalid_argument);
}

TEST(MeasureRail, ProbabilitiesSumToOne) {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 30; ++t) {
    auto s = random_state(gen, {0, 1, 2}, 1 + t % 3);
    for (bool res : {true, false}) {
      double total = 0;
      for (const auto& m : measure_rail(s, t % 3, res)) {
        total += m.probability;
        EXPECT_TRUE(m.collapsed.is_normalized());
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(Circuits, DetectorCounts) {
  EXPECT_EQ(type_i_circuit().detector_count(), 1U);
  EXPECT_EQ(type_ii_circuit().detector_count(), 2U);
  EXPECT_EQ(cz_redundant_circuit().detector_count(), 2U);
  EXPECT_EQ(cz_redundant_circuit().elements.size(), type_ii_circuit().elements.size() + 1);
}

TEST(Circuits, ValidationRejectsReuseAfterDetection) {
  OpticalCircuit c{"bad", {0, 1}, {Detector{1}, Rotation{1, 45.0}}};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  OpticalCircuit d{"bad", {0, 1}, {Pbs{0, 3}}};
  EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(Channel, CompletenessAllCircuits) {
  for (const auto& c : {type_i_circuit(), type_ii_circuit(), type_ii_circuit(false), cz_redundant_circuit(),
                        cz_redundant_circuit(false)}) {
    auto ch = derive_channel(c, {0, 1});
    EXPECT_LT(ch.completeness_error(), 1e-9) << c.name;
    EXPECT_NEAR(ch.total_probability(), 1.0, 1e-9) << c.name;
    for (const auto& e : ch.entries) {
      EXPECT_GE(e.probability, 0.0);
      EXPECT_LE(e.probability, 1.0);
    }
  }
}

TEST(TypeI, SuccessOperators) {
  auto ch = derive_channel(type_i_circuit(), {0, 1});
  // (|H><HH| - s |V><VV|)/sqrt2 with columns HH, HV, VH, VV.
  const CMatrix minus = row_matrix(2, 4, {1 / r2, 0, 0, 0, 0, 0, 0, -1 / r2});
  const CMatrix plus = row_matrix(2, 4, {1 / r2, 0, 0, 0, 0, 0, 0, 1 / r2});
  const auto& h = single_detection(ch, 1, 0);
  const auto& v = single_detection(ch, 0, 1);
  ASSERT_TRUE(h.qubit_output);
  ASSERT_TRUE(v.qubit_output);
  EXPECT_LT(diff_up_to_phase(minus, h.kraus), 1e-9);
  EXPECT_LT(diff_up_to_phase(plus, v.kraus), 1e-9);
  EXPECT_NEAR(h.probability + v.probability, 0.5, 1e-12);
}

TEST(TypeI, FailureOperators) {
  auto ch = derive_channel(type_i_circuit(), {0, 1});
  // Vacuum residue: outcomes with two photons at the counter coarse-grain to |0><VH|.
  auto zero = entries_where(ch, [](const ChannelEntry& e) { return e.detections[0].photons() == 2; });
  ASSERT_EQ(zero.size(), 2U);
  auto merged = merge_proportional(zero);
  ASSERT_TRUE(merged.has_value());
  EXPECT_LT(diff_up_to_phase(row_matrix(1, 4, {0, 0, 1, 0}), *merged), 1e-9);

  // Two-photon residue on the kept rail; compare in the 45-degree basis where it reads
  // (|2V> - |2H>)/sqrt2 <HV|.
  const auto& two = single_detection(ch, 0, 0);
  EXPECT_FALSE(two.qubit_output);
  FockState residue({0});
  for (std::size_t r = 0; r < two.kraus.rows; ++r) {
    ASSERT_EQ(two.kraus(r, 0), cplx{});
    ASSERT_EQ(two.output_labels[r], "|1H1V>");
    residue.add({1, 1}, two.kraus(r, 1));
  }
  auto rotated = apply_rotation(residue, 0, 45.0);
  EXPECT_NEAR(std::abs(rotated.amplitude({0, 2}) - 1 / r2), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(rotated.amplitude({2, 0}) + 1 / r2), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(rotated.amplitude({1, 1})), 0.0, 1e-9);
}

// Failure measures Z on both inputs: each computational basis input reaches exactly one failure
// outcome, with probability one half on product-basis inputs.
TEST(TypeI, FailureIsZZMeasurement) {
  auto ch = derive_channel(type_i_circuit(), {0, 1});
  std::vector<std::vector<const ChannelEntry*>> classes{
      entries_where(ch, [](const ChannelEntry& e) { return e.detections[0].photons() == 2; }),
      entries_where(ch, [](const ChannelEntry& e) { return e.detections[0].photons() == 0; })};
  for (std::size_t col = 0; col < 4; ++col) {
    int hits = 0;
    double p = 0;
    for (const auto& cls : classes) {
      double pc = 0;
      for (const auto* e : cls)
        for (std::size_t r = 0; r < e->kraus.rows; ++r) pc += std::norm(e->kraus(r, col));
      if (pc > 1e-12) ++hits;
      p += pc;
    }
    const bool anti = col == 1 || col == 2;  // HV or VH
    EXPECT_EQ(hits, anti ? 1 : 0) << col;
    EXPECT_NEAR(p, anti ? 1.0 : 0.0, 1e-12) << col;
  }
}

TEST(TypeI, SuccessHalfOnClusterInputs) {
  // Cluster-class inputs have each fused qubit maximally mixed in Z.
  auto ch = derive_channel(type_i_circuit(), {0, 1});
  double ps = 0;
  for (const auto& e : ch.entries)
    if (classify_type_i(e.detections) == OutcomeClass::Success) ps += e.probability;
  EXPECT_NEAR(ps, 0.5, 1e-12);
}

TEST(TypeII, SuccessOperators) {
  auto ch = derive_channel(type_ii_circuit(), {0, 1});
  const CMatrix even = row_matrix(1, 4, {1 / r2, 0, 0, 1 / r2});
  const CMatrix odd = row_matrix(1, 4, {0, 1 / r2, 1 / r2, 0});
  auto succ = entries_where(ch, [](const ChannelEntry& e) { return classify_type_ii(e.detections) == OutcomeClass::Success; });
  ASSERT_EQ(succ.size(), 4U);
  int n_even = 0, n_odd = 0;
  double ps = 0;
  for (const auto* e : succ) {
    const CMatrix k = cplx{r2} * e->kraus;  // each click pattern carries weight 1/2
    if (diff_up_to_phase(even, k) < 1e-9) ++n_even;
    if (diff_up_to_phase(odd, k) < 1e-9) ++n_odd;
    ps += e->probability;
  }
  EXPECT_EQ(n_even, 2);
  EXPECT_EQ(n_odd, 2);
  EXPECT_NEAR(ps, 0.5, 1e-12);
}

TEST(TypeII, FailureIsXXMeasurement) {
  auto ch = derive_channel(type_ii_circuit(), {0, 1});
  auto fail = entries_where(ch, [](const ChannelEntry& e) { return classify_type_ii(e.detections) == OutcomeClass::Failure; });
  // Explicit projectors |+-><+-| and |-+><-+| in the HH, HV, VH, VV basis.
  const std::vector<cplx> plus{1 / r2, 1 / r2}, minus{1 / r2, -1 / r2};
  auto proj = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    CMatrix p(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        p(i, j) = a[i >> 1] * b[i & 1] * std::conj(a[j >> 1] * b[j & 1]);
    return p;
  };
  const CMatrix pm = proj(plus, minus), mp = proj(minus, plus);
  CMatrix sum(4, 4);
  for (const auto* e : fail) {
    CMatrix eff = e->kraus.adjoint() * e->kraus;
    sum = sum + eff;
    // each failure effect is a multiple of one product projector
    const double w = e->probability * 4;
    const bool is_pm = max_abs_diff(eff, cplx{w} * pm) < 1e-9;
    const bool is_mp = max_abs_diff(eff, cplx{w} * mp) < 1e-9;
    EXPECT_TRUE(is_pm || is_mp) << e->label;
  }
  EXPECT_LT(max_abs_diff(sum, pm + mp), 1e-9);
}

TEST(TypeII, ResolutionIndependentClassification) {
  const auto res = type_ii_circuit(true), non = type_ii_circuit(false);
  for (std::size_t i = 0; i < 4; ++i) {
    // single-photon-per-rail inputs: the four basis states plus diagonal superpositions
    for (double angle : {0.0, 30.0, 45.0, 90.0}) {
      FockState in = FockState::basis({0, 1}, {{0, (i & 2) ? Pol::V : Pol::H}, {1, (i & 1) ? Pol::V : Pol::H}});
      in = apply_rotation(in, 0, angle);
      std::map<OutcomeClass, double> pr, pn;
      for (const auto& [d, st] : run_circuit(res, in)) pr[classify_type_ii(d)] += st.norm_sq();
      for (const auto& [d, st] : run_circuit(non, in)) pn[classify_type_ii(d)] += st.norm_sq();
      for (auto cls : {OutcomeClass::Success, OutcomeClass::Failure})
        EXPECT_NEAR(pr[cls], pn[cls], 1e-12);
    }
  }
}

// A reflection phase p equals a V-phase diag(1, p) on both PBS inputs. Pulled back through the
// rotations that precede the PBS it becomes a fixed single-qubit unitary on each input, so the
// channels differ by a local operation and every outcome keeps its probability.
TEST(PhaseConvention, ReflectionPhaseOnlyChangesLocalFrame) {
  const cplx p{0, 1};
  auto local = [&](double deg) {
    const double t = deg * kPi / 180.0;
    CMatrix r = row_matrix(2, 2, {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)});
    CMatrix ph = row_matrix(2, 2, {1, 0, 0, p});
    return r.adjoint() * ph * r;
  };
  auto kron = [](const CMatrix& a, const CMatrix& b) {
    CMatrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = a(i >> 1, j >> 1) * b(i & 1, j & 1);
    return m;
  };
  const std::vector<std::pair<OpticalCircuit, std::pair<double, double>>> cases{
      {type_i_circuit(), {0.0, 0.0}}, {type_ii_circuit(), {45.0, 45.0}}, {cz_redundant_circuit(), {90.0, 45.0}}};
  for (const auto& [base, rot] : cases) {
    auto a = derive_channel(base, {0, 1});
    auto b = derive_channel(base.with_reflection_phase(p), {0, 1});
    const CMatrix u = kron(local(rot.first), local(rot.second));
    ASSERT_EQ(a.entries.size(), b.entries.size());
    EXPECT_LT(b.completeness_error(), 1e-9);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      EXPECT_EQ(a.entries[i].label, b.entries[i].label);
      EXPECT_NEAR(a.entries[i].probability, b.entries[i].probability, 1e-12);
      EXPECT_LT(diff_up_to_phase(a.entries[i].kraus * u, b.entries[i].kraus), 1e-9) << base.name << " " << a.entries[i].label;
    }
  }
}

TEST(CzVariant, SuccessProbabilityHalf) {
  auto ch = derive_channel(cz_redundant_circuit(), {0, 1});
  double ps = 0;
  for (const auto& e : ch.entries)
    if (classify_type_ii(e.detections) == OutcomeClass::Success) ps += e.probability;
  EXPECT_NEAR(ps, 0.5, 1e-12);
}

// Success projects onto a state with a CZ-type phase: |<x_u x_v|K>| uniform and
// K(x) / K(00) = (-1)^(x_u x_v + s x_u) for s in {0, 1}.
TEST(CzVariant, SuccessCarriesControlledPhase) {
  auto ch = derive_channel(cz_redundant_circuit(), {0, 1});
  for (const auto& e : ch.entries) {
    if (classify_type_ii(e.detections) != OutcomeClass::Success) continue;
    ASSERT_EQ(e.kraus.rows, 1U);
    const cplx k0 = e.kraus(0, 0);
    ASSERT_GT(std::abs(k0), 1e-6);
    bool matched = false;
    for (int s : {0, 1}) {
      bool ok = true;
      for (int x = 0; x < 4; ++x) {
        const int xu = x >> 1, xv = x & 1;
        const double sign = ((xu * xv + s * xu) & 1) ? -1.0 : 1.0;
        if (std::abs(e.kraus(0, static_cast<std::size_t>(x)) - sign * k0) > 1e-9) ok = false;
      }
      matched |= ok;
    }
    EXPECT_TRUE(matched) << e.label;
  }
}

TEST(CzVariant, FailureMeasuresZOnFirstXOnSecond) {
  auto ch = derive_channel(cz_redundant_circuit(), {0, 1});
  const std::vector<cplx> h{1, 0}, v{0, 1}, plus{1 / r2, 1 / r2}, minus{1 / r2, -1 / r2};
  auto bra = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    CMatrix m(1, 4);
    for (std::size_t i = 0; i < 4; ++i) m(0, i) = std::conj(a[i >> 1] * b[i & 1]);
    return m;
  };
  const CMatrix hm = bra(h, minus), vp = bra(v, plus);
  for (const auto& e : ch.entries) {
    if (classify_type_ii(e.detections) != OutcomeClass::Failure) continue;
    const CMatrix k = cplx{1.0 / std::sqrt(e.kraus.frobenius_sq())} * e.kraus;
    EXPECT_TRUE(diff_up_to_phase(hm, k) < 1e-9 || diff_up_to_phase(vp, k) < 1e-9) << e.label;
  }
}

TEST(MergeProportional, RejectsNonProportional) {
  auto ch = derive_channel(type_ii_circuit(), {0, 1});
  std::vector<const ChannelEntry*> all;
  for (const auto& e : ch.entries) all.push_back(&e);
  EXPECT_FALSE(merge_proportional(all).has_value());
}
