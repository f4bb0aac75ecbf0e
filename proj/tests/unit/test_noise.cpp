// Copyright 2026 The spinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinlab/noise.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "../oracles.hpp"
#include "spinlab/error.hpp"
#include "spinlab/mitigation.hpp"

using namespace spinlab;
namespace o = spinlab::oracle;

namespace {

char letter(Pauli p) { return to_string(p)[0]; }

/// Local basis bit(control) + 2 bit(target): control is the right factor.
o::Mat cnot_oracle() {
  o::Mat m = o::Mat::Zero(4, 4);
  m(0, 0) = m(2, 2) = 1;
  m(3, 1) = m(1, 3) = 1;
  return m;
}

double z_expectation(const StateVector& s, int q) {
  double z = 0.0;
  for (std::size_t i = 0; i < s.dimension(); ++i) z += std::norm(s[i]) * (((i >> q) & 1U) ? -1.0 : 1.0);
  return z;
}

Circuit iso_lowered(int n, int steps, double dt, Boundary b = Boundary::Open) {
  return lower(build_second_order_merged({n, b}, {TrotterOrder::SecondMerged, steps, dt}));
}

}  // namespace

TEST(TwirlSet, ExhaustiveSearch) {
  const TwirlSet set = find_twirl_set();
  EXPECT_EQ(set.size(), 16u);
  const TwirlTuple id{Pauli::I, Pauli::I, Pauli::I, Pauli::I};
  const TwirlTuple zxzx{Pauli::Z, Pauli::X, Pauli::Z, Pauli::X};
  EXPECT_NE(std::find(set.begin(), set.end(), id), set.end());
  EXPECT_NE(std::find(set.begin(), set.end(), zxzx), set.end());
  const o::Mat cx = cnot_oracle();
  for (const auto& t : set) {
    const o::Mat before = o::kron(o::pauli(letter(t[1])), o::pauli(letter(t[0])));
    const o::Mat after = o::kron(o::pauli(letter(t[3])), o::pauli(letter(t[2])));
    EXPECT_LE(o::phase_distance(after * cx * before, cx), 1e-12);
  }
  // Every first pair appears exactly once.
  std::set<std::pair<Pauli, Pauli>> firsts;
  for (const auto& t : set) firsts.insert({t[0], t[1]});
  EXPECT_EQ(firsts.size(), 16u);
  EXPECT_FALSE(is_twirl_identity({Pauli::X, Pauli::I, Pauli::I, Pauli::I}));
}

TEST(Twirl, PreservesUnitary) {
  for (int n : {2, 4, 6}) {
    const Circuit c = iso_lowered(n, 2, 0.3, Boundary::Periodic);
    const auto copies = twirl(c, 5, 17);
    ASSERT_EQ(copies.size(), 5u);
    const o::Mat u = unitary_of(c);
    for (const auto& t : copies) {
      EXPECT_EQ(cnot_count(t), cnot_count(c));
      EXPECT_EQ(t.step_ends().size(), c.step_ends().size());
      EXPECT_LE(max_entry_distance_up_to_phase(unitary_of(t), u), 1e-12);
    }
  }
}

TEST(Twirl, DeterministicUnderSeed) {
  const Circuit c = iso_lowered(6, 2, 0.3);
  EXPECT_EQ(twirl(c, 1, 5)[0].gates(), twirl(c, 1, 5)[0].gates());
  EXPECT_NE(twirl(c, 1, 5)[0].gates(), twirl(c, 1, 6)[0].gates());
  EXPECT_THROW(twirl(c, 0, 1), SpecError);
  EXPECT_THROW(twirl(build_first_order({4}, {}), 1, 1), SpecError);
}

TEST(Twirl, ReducesCoherentZZBias) {
  const Circuit c = iso_lowered(4, 2, 0.4);
  StateVector ideal = init_neel(4);
  apply(c, ideal);
  const double v0 = staggered_magnetization(ideal);
  NoiseModel noise;
  noise.coherent_zz_overrotation = 0.15;
  std::mt19937_64 rng(1);
  StateVector bare = init_neel(4);
  simulate_noisy(c, noise, bare, rng);
  const double untwirled_bias = std::abs(staggered_magnetization(bare) - v0);
  const TwirlSet set = find_twirl_set();
  double avg = 0.0;
  const int draws = 1000;
  for (int k = 0; k < draws; ++k) {
    const Circuit t = twirl_once(c, set, rng);
    StateVector s = init_neel(4);
    simulate_noisy(t, noise, s, rng);
    avg += staggered_magnetization(s) / draws;
  }
  EXPECT_LT(std::abs(avg - v0), untwirled_bias);
}

TEST(Fold, ScalesCnotsAndKeepsUnitary) {
  const Circuit c = iso_lowered(6, 2, 0.3);
  EXPECT_EQ(fold(c, 1).gates(), c.gates());
  EXPECT_EQ(cnot_count(fold(c, 3)), 3 * cnot_count(c));
  EXPECT_EQ(cnot_count(fold(c, 5)), 5 * cnot_count(c));
  EXPECT_EQ(fold(c, 5).step_ends().size(), c.step_ends().size());
  EXPECT_LE(max_entry_distance_up_to_phase(unitary_of(fold(c, 3)), unitary_of(c)), 1e-12);
  EXPECT_THROW(fold(c, 2), SpecError);
  EXPECT_THROW(fold(c, 0), SpecError);
}

TEST(Fold, NoiselessMagnetizationUnchanged) {
  const Circuit c = iso_lowered(8, 3, 0.4);
  StateVector ref = init_neel(8);
  apply(c, ref);
  for (int scale : {3, 5}) {
    StateVector s = init_neel(8);
    apply(fold(c, scale), s);
    EXPECT_NEAR(staggered_magnetization(s), staggered_magnetization(ref), 1e-12);
  }
}

TEST(NoiseModel, Validation) {
  NoiseModel m;
  m.two_qubit_depolarizing = 1.0;
  EXPECT_THROW(m.validate(), SpecError);
  m.two_qubit_depolarizing = 0.1;
  m.coherent_zz_overrotation = -4.0;
  EXPECT_THROW(m.validate(), SpecError);
  m.coherent_zz_overrotation = 0.0;
  m.readout = {{0.5, -0.1}};
  EXPECT_THROW(m.validate(), SpecError);
}

TEST(SimulateNoisy, NoiselessEqualsApply) {
  const Circuit c = iso_lowered(6, 2, 0.3);
  StateVector a = init_neel(6);
  StateVector b = init_neel(6);
  std::mt19937_64 rng(3);
  simulate_noisy(c, NoiseModel{}, a, rng);
  apply(c, b);
  for (std::size_t i = 0; i < a.dimension(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(SimulateNoisy, StrongDepolarizingMixesThePair) {
  Circuit c(3, CircuitLevel::Lowered);
  for (int k = 0; k < 10; ++k) c.append(Gate::cnot(0, 1));
  NoiseModel noise;
  noise.two_qubit_depolarizing = 0.999;
  std::mt19937_64 rng(4);
  const int trajectories = 4000;
  double z0 = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  for (int k = 0; k < trajectories; ++k) {
    StateVector s(3);
    simulate_noisy(c, noise, s, rng);
    z0 += z_expectation(s, 0) / trajectories;
    z1 += z_expectation(s, 1) / trajectories;
    z2 += z_expectation(s, 2) / trajectories;
  }
  const double mc = 4.0 / std::sqrt(double(trajectories));
  EXPECT_LE(std::abs(z0), mc);
  EXPECT_LE(std::abs(z1), mc);
  EXPECT_NEAR(z2, 1.0, 1e-12);
}

TEST(SimulateNoisy, MagnetizationDecaysMonotonically) {
  const Circuit c = iso_lowered(10, 4, 0.2);
  StateVector ideal = init_neel(10);
  apply(c, ideal);
  const double v0 = staggered_magnetization(ideal);
  ASSERT_GT(v0, 0.1);
  std::vector<double> means;
  std::vector<double> errs;
  for (double p : {0.001, 0.002, 0.004}) {
    NoiseModel noise;
    noise.two_qubit_depolarizing = p;
    std::mt19937_64 rng(10);
    const int trajectories = 2000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int k = 0; k < trajectories; ++k) {
      StateVector s = init_neel(10);
      simulate_noisy(c, noise, s, rng);
      const double v = staggered_magnetization(s);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / trajectories;
    means.push_back(mean);
    errs.push_back(std::sqrt(std::max(0.0, sum2 / trajectories - mean * mean) / trajectories));
  }
  for (std::size_t k = 0; k < means.size(); ++k) {
    EXPECT_LE(means[k], v0 + 4 * errs[k]);
    EXPECT_GE(means[k], -4 * errs[k]);
    if (k > 0) EXPECT_LE(means[k], means[k - 1] + 4 * (errs[k] + errs[k - 1]));
  }
  EXPECT_LT(means.back(), v0);
}

TEST(Readout, CorruptionIsPerShotAndSeeded) {
  Counts c{{0b00, 5000}};
  std::mt19937_64 a(1);
  std::mt19937_64 b(1);
  const auto r = uniform_readout(2, 0.1, 0.0);
  const Counts x = readout_corrupt(c, r, a);
  EXPECT_EQ(x, readout_corrupt(c, r, b));
  std::uint64_t total = 0;
  for (const auto& [bits, n] : x) total += n;
  EXPECT_EQ(total, 5000u);
  const double p00 = double(x.at(0)) / 5000.0;
  EXPECT_NEAR(p00, 0.81, 5 * std::sqrt(0.81 * 0.19 / 5000));
}

TEST(M3, ZeroFlipsIsIdentity) {
  const Counts c{{0b0110, 300}, {0b1001, 700}, {0b0101, 1000}};
  const auto q = m3_correct(c, uniform_readout(4, 0.0, 0.0), 4);
  EXPECT_NEAR(q.probabilities.at(0b0110), 0.15, 1e-12);
  EXPECT_NEAR(q.probabilities.at(0b1001), 0.35, 1e-12);
  EXPECT_NEAR(m3_mitigate(c, uniform_readout(4, 0.0, 0.0), 4), staggered_magnetization(c, 4), 1e-12);
}

TEST(M3, SingleQubitAnalyticInverse) {
  const double p = 0.02;
  const auto r = uniform_readout(1, p, p);
  std::mt19937_64 rng(2);
  const Counts noisy = readout_corrupt({{0, 10000}}, r, rng);
  const double f0 = noisy.count(0) ? double(noisy.at(0)) / 1e4 : 0.0;
  const double f1 = 1.0 - f0;
  // [[1-p, p], [p, 1-p]]^{-1} applied to the observed frequencies.
  const double det = 1.0 - 2.0 * p;
  const double q0 = ((1 - p) * f0 - p * f1) / det;
  const double q1 = (-p * f0 + (1 - p) * f1) / det;
  const auto q = m3_correct(noisy, r, 1);
  EXPECT_NEAR(q.probabilities.at(0), q0, 1e-7);
  if (noisy.count(1)) EXPECT_NEAR(q.probabilities.at(1), q1, 1e-7);
  const double z = q0 - q1;
  EXPECT_NEAR(z, 1.0, 5 * std::sqrt(p * (1 - p) / 1e4) / det);
}

TEST(M3, ReducesReadoutBiasN10) {
  StateVector s = init_neel(10);
  apply(build_second_order_merged({10}, {TrotterOrder::SecondMerged, 1, 0.25}), s);
  const double truth = staggered_magnetization(s);
  std::vector<ReadoutError> r;
  for (int q = 0; q < 10; ++q) r.push_back({0.01 + 0.001 * q, 0.02 - 0.001 * q});
  double raw_err = 0.0;
  double mit_err = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const Counts noisy = readout_corrupt(sample(s, 10000, rng), r, rng);
    raw_err += std::abs(staggered_magnetization(noisy, 10) - truth) / 20;
    mit_err += std::abs(m3_mitigate(noisy, r, 10) - truth) / 20;
  }
  EXPECT_LE(mit_err, raw_err / 5);
}

TEST(M3, QuasiDistributionSumsToOne) {
  std::vector<ReadoutError> r(6, {0.05, 0.08});
  const Counts c{{0b000111, 40}, {0b000110, 3}, {0b101010, 50}, {0b111000, 7}};
  const auto q = m3_correct(c, r, 6);
  double sum = 0.0;
  for (const auto& [bits, p] : q.probabilities) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(M3, SingularConfusionReported) {
  const Counts c{{0, 10}, {1, 10}};
  try {
    m3_correct(c, uniform_readout(1, 0.5, 0.5), 1);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("condition"), std::string::npos);
  }
  EXPECT_THROW(m3_correct({}, uniform_readout(1, 0.1, 0.1), 1), SpecError);
  EXPECT_THROW(m3_correct(c, uniform_readout(2, 0.1, 0.1), 1), SpecError);
}

TEST(Zne, ExactQuadraticAndConstant) {
  const std::vector<double> scales{1, 3, 5};
  auto f = [](double s) { return 0.7 - 0.1 * s + 0.013 * s * s; };
  const std::vector<double> v{f(1), f(3), f(5)};
  EXPECT_NEAR(zne_extrapolate(v, scales), 0.7, 1e-14);
  EXPECT_NEAR(zne_extrapolate(std::vector<double>{0.3, 0.3, 0.3}, scales), 0.3, 1e-15);
  const std::vector<double> more{1, 3, 5, 7};
  EXPECT_NEAR(zne_extrapolate(std::vector<double>{f(1), f(3), f(5), f(7)}, more), 0.7, 1e-13);
  const auto w = zne_weights(scales);
  EXPECT_NEAR(w[0], 15.0 / 8.0, 1e-14);
  EXPECT_NEAR(w[1], -10.0 / 8.0, 1e-14);
  EXPECT_NEAR(w[2], 3.0 / 8.0, 1e-14);
}

TEST(Zne, ExponentialDecayImproves) {
  const double v0 = 0.42;
  const std::vector<double> scales{1, 3, 5};
  std::vector<double> v;
  for (double s : scales) v.push_back(v0 * std::exp(-0.05 * s));
  EXPECT_LT(std::abs(zne_extrapolate(v, scales) - v0), std::abs(v[0] - v0));
}

TEST(Zne, DegenerateScalesRejected) {
  EXPECT_THROW(zne_weights(std::vector<double>{1, 1, 3}), SpecError);
  EXPECT_THROW(zne_extrapolate(std::vector<double>{1, 2}, std::vector<double>{1, 3}), SpecError);
  EXPECT_THROW(zne_extrapolate(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3}), SpecError);
}

TEST(Pipeline, NoiselessRecoversIdealWithinFiveSigma) {
  const Circuit c = iso_lowered(6, 3, 0.4);
  MitigationPlan plan;
  plan.twirl_copies = 4;
  plan.shots = 4000;
  plan.seed = 3;
  const PipelineResult r = run_mitigation_pipeline(c, init_neel(6), plan);
  ASSERT_EQ(r.steps.size(), 3u);
  StateVector s = init_neel(6);
  for (std::size_t k = 0; k < 3; ++k) {
    apply(c.step_gates(k), s);
    StateVector m = s;
    apply(c.closing_gates(), m);
    const double ideal = staggered_magnetization(m);
    EXPECT_GT(r.steps[k].zne_stderr, 0.0);
    EXPECT_LE(std::abs(r.steps[k].zne - ideal), 5 * r.steps[k].zne_stderr) << k;
  }
}

TEST(Pipeline, DeterministicAcrossThreadCounts) {
  const Circuit c = iso_lowered(6, 2, 0.4);
  MitigationPlan plan;
  plan.noise.two_qubit_depolarizing = 0.01;
  plan.noise.readout = uniform_readout(6, 0.02, 0.01);
  plan.twirl_copies = 3;
  plan.shots = 600;
  plan.trajectories = 20;
  plan.seed = 11;
  plan.threads = 1;
  const auto a = run_mitigation_pipeline(c, init_neel(6), plan);
  plan.threads = 3;
  const auto b = run_mitigation_pipeline(c, init_neel(6), plan);
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    EXPECT_EQ(a.steps[k].zne, b.steps[k].zne);
    for (std::size_t s = 0; s < a.steps[k].scales.size(); ++s) {
      EXPECT_EQ(a.steps[k].scales[s].raw, b.steps[k].scales[s].raw);
    }
  }
}

TEST(Pipeline, PlanValidation) {
  const Circuit c = iso_lowered(4, 1, 0.4);
  MitigationPlan plan;
  plan.fold_scales = {1, 3};
  EXPECT_THROW(run_mitigation_pipeline(c, init_neel(4), plan), SpecError);
  plan.fold_scales = {1, 5, 3};
  EXPECT_THROW(run_mitigation_pipeline(c, init_neel(4), plan), SpecError);
  plan.fold_scales = {1, 2, 3};
  EXPECT_THROW(run_mitigation_pipeline(c, init_neel(4), plan), SpecError);
  plan.fold_scales = {1, 3, 5};
  plan.noise.readout = uniform_readout(3, 0.01, 0.01);
  EXPECT_THROW(run_mitigation_pipeline(c, init_neel(4), plan), SpecError);
  EXPECT_THROW(run_mitigation_pipeline(build_first_order({4}, {}), init_neel(4), MitigationPlan{}), SpecError);
}
