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

// Dense state-vector simulation, the Krylov exact-evolution oracle and shot
// sampling.
//
// Spin encoding: up <-> bit 0, down <-> bit 1. The Neel state has site 0 up.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "spinlab/circuit.hpp"
#include "spinlab/trotter.hpp"

namespace spinlab {

inline constexpr int kMaxStatevectorQubits = 28;
inline constexpr int kMaxExactEvolveQubits = 20;

/// Bitstring (little-endian, qubit i = bit i) -> number of shots.
using Counts = std::map<std::uint64_t, std::uint64_t>;

enum class PauliPair { XX, YY, ZZ };

struct HamiltonianTerm {
  double coefficient = 0.0;
  PauliPair kind = PauliPair::ZZ;
  int a = 0;
  int b = 0;
};

using HamiltonianTerms = std::vector<HamiltonianTerm>;

/// Pauli-operator form of the chain Hamiltonian:
///   sum_j Jx XX + Jy YY + Jz ZZ  on nearest neighbours
///   + (J2/4) sum_j (XX + YY + ZZ) on next-nearest neighbours.
HamiltonianTerms hamiltonian_terms(const ChainSpec& spec);

class StateVector {
 public:
  /// |0...0>. Throws CapacityError when n_qubits > max_qubits.
  explicit StateVector(int n_qubits, int max_qubits = kMaxStatevectorQubits);

  static StateVector basis_state(int n_qubits, std::uint64_t index,
                                 int max_qubits = kMaxStatevectorQubits);
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();

  void apply(const Gate& gate);
  void apply_single(int q, const Matrix2& m);
  /// `m` in the local basis bit(q0) + 2 bit(q1).
  void apply_two(int q0, int q1, const Matrix4& m);
  void apply_cnot(int control, int target);
  void apply_swap(int a, int b);
  void apply_pauli_x(int q);
  void apply_pauli_y(int q);
  void apply_pauli_z(int q);

  /// Probability of each basis state.
  std::vector<double> probabilities() const;

 private:
  int n_qubits_;
  std::vector<Complex> amps_;
};

/// |up down up down ...>: bits set at odd sites.
StateVector init_neel(int n_qubits);

/// Applies the circuit in order. Both block-level and lowered circuits are
/// accepted; block gates are applied through their exact 4x4 matrices.
void apply(const Circuit& circuit, StateVector& state);
void apply(std::span<const Gate> gates, StateVector& state);

/// (1/N) sum_i (-1)^i <S^z_i>, site 0 carrying +.
double staggered_magnetization(const StateVector& state);
/// The same observable on a single measured bitstring.
double staggered_magnetization(std::uint64_t bits, int n_qubits);
/// Shot average of the observable.
double staggered_magnetization(const Counts& counts, int n_qubits);

/// out = H in.
void apply_hamiltonian(const HamiltonianTerms& terms, std::span<const Complex> in,
                       std::span<Complex> out);
double energy(const HamiltonianTerms& terms, const StateVector& state);

struct KrylovOptions {
  int krylov_dim = 30;
  /// Bound on the local error estimate per unit of evolution time.
  double tolerance = 1e-10;
  int max_substeps = 1'000'000;
  int max_qubits = kMaxExactEvolveQubits;
};

struct KrylovReport {
  int substeps = 0;
  int rejected = 0;
  double error_estimate = 0.0;
};

/// exp(-i H t) |state> by Lanczos with adaptive sub-stepping. H is applied
/// term by term; the dense matrix is never formed.
StateVector exact_evolve(const HamiltonianTerms& terms, const StateVector& state, double t,
                         const KrylovOptions& options = {}, KrylovReport* report = nullptr);

/// Multinomial draw of `shots` measurements in the computational basis.
Counts sample(const StateVector& state, std::uint64_t shots, std::mt19937_64& rng);
Counts sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed);

}  // namespace spinlab
