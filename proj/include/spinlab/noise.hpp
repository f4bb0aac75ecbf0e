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

// Synthetic noise, Pauli twirling, gate folding and readout mitigation.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "spinlab/circuit.hpp"
#include "spinlab/statevector.hpp"

namespace spinlab {

enum class Pauli : std::uint8_t { I, X, Y, Z };

const char* to_string(Pauli p);
Matrix2 pauli_matrix(Pauli p);

/// Per-qubit readout confusion: p01 = P(read 1 | prepared 0),
/// p10 = P(read 0 | prepared 1).
struct ReadoutError {
  double p01 = 0.0;
  double p10 = 0.0;
};

struct NoiseModel {
  /// Probability of a uniformly random non-identity two-qubit Pauli after each CNOT.
  double two_qubit_depolarizing = 0.0;
  /// ZZ rotation angle applied after each CNOT, as exp(-i angle ZZ / 2).
  double coherent_zz_overrotation = 0.0;
  /// Empty means perfect readout; otherwise one entry per qubit.
  std::vector<ReadoutError> readout;

  void validate() const;
  bool gate_noise_free() const {
    return two_qubit_depolarizing == 0.0 && coherent_zz_overrotation == 0.0;
  }
};

std::vector<ReadoutError> uniform_readout(int n_qubits, double p01, double p10);

/// Paulis at positions 1..4: (before control, before target, after control,
/// after target).
using TwirlTuple = std::array<Pauli, 4>;
using TwirlSet = std::vector<TwirlTuple>;

/// Exhaustive scan of all 4^4 tuples, keeping those for which
/// (P3 x P4) CNOT (P1 x P2) equals CNOT up to global phase.
TwirlSet find_twirl_set();

/// True when the tuple leaves CNOT invariant up to phase.
bool is_twirl_identity(const TwirlTuple& t);

/// One twirled copy: every CNOT wrapped in an independently drawn member of
/// `set`. Identity Paulis are not emitted.
Circuit twirl_once(const Circuit& lowered, const TwirlSet& set, std::mt19937_64& rng);

/// `copies` twirled circuits; copy k uses a generator seeded from (seed, k).
std::vector<Circuit> twirl(const Circuit& lowered, int copies, std::uint64_t seed);

/// Local unitary folding: each CNOT replaced by `scale` consecutive CNOTs.
/// `scale` must be odd and >= 1.
Circuit fold(const Circuit& lowered, int scale);

/// Applies `gates` with noise: after every CNOT, with probability p a
/// uniformly drawn non-identity Pauli pair on its qubits, then the coherent
/// ZZ over-rotation.
void apply_noisy(std::span<const Gate> gates, const NoiseModel& noise, StateVector& state,
                 std::mt19937_64& rng);

/// One stochastic trajectory of the noisy circuit.
void simulate_noisy(const Circuit& lowered, const NoiseModel& noise, StateVector& state,
                    std::mt19937_64& rng);

/// Applies the readout confusion to each shot independently.
Counts readout_corrupt(const Counts& counts, std::span<const ReadoutError> readout,
                       std::mt19937_64& rng);

struct QuasiDistribution {
  std::map<std::uint64_t, double> probabilities;  // may contain negative entries
  int iterations = 0;
  double residual = 0.0;
};

struct M3Options {
  double tolerance = 1e-8;
  int max_iterations = 1000;
};

/// Readout correction restricted to the observed bitstrings: builds the
/// confusion operator on that subspace (columns renormalised within it),
/// solves it iteratively and renormalises the result to sum to one.
/// Throws NumericalError for singular systems, with a condition estimate.
QuasiDistribution m3_correct(const Counts& counts, std::span<const ReadoutError> readout,
                             int n_qubits, const M3Options& options = {});

/// Staggered magnetization evaluated on the corrected quasi-distribution.
double m3_mitigate(const Counts& counts, std::span<const ReadoutError> readout, int n_qubits,
                   const M3Options& options = {});

/// Linear weights w such that the quadratic least-squares fit evaluated at
/// scale 0 equals sum_k w_k values_k.
std::vector<double> zne_weights(std::span<const double> scales);

/// Quadratic least-squares fit in the scale factor, evaluated at zero.
double zne_extrapolate(std::span<const double> values, std::span<const double> scales);

}  // namespace spinlab
