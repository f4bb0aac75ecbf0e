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

// Gate-level circuit representation.
//
// Basis ordering is little-endian everywhere in the library: qubit 0 is the
// least significant bit of a basis index. Two-qubit gate matrices are written
// in the basis |q1 q0> with index bit(q0) + 2 * bit(q1), where q0 and q1 are
// the gate's first and second qubit arguments.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spinlab {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

/// Rotation angles (theta_x, theta_y, theta_z) of an XYZ block.
struct Angles3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Angles3 operator*(double s, const Angles3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Angles3 operator+(const Angles3& a, const Angles3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  bool operator==(const Angles3&) const = default;
};

enum class GateKind {
  Hadamard,
  PauliX,
  PauliY,
  PauliZ,
  SqrtX,
  SqrtXDagger,
  RotZ,
  CNot,
  Swap,
  XYZBlock,
};

enum class CircuitLevel { Block, Lowered };

const char* to_string(GateKind kind);
const char* to_string(CircuitLevel level);

class Gate {
 public:
  static Gate hadamard(int q) { return Gate(GateKind::Hadamard, q); }
  static Gate pauli_x(int q) { return Gate(GateKind::PauliX, q); }
  static Gate pauli_y(int q) { return Gate(GateKind::PauliY, q); }
  static Gate pauli_z(int q) { return Gate(GateKind::PauliZ, q); }
  static Gate sqrt_x(int q) { return Gate(GateKind::SqrtX, q); }
  static Gate sqrt_x_dagger(int q) { return Gate(GateKind::SqrtXDagger, q); }
  static Gate rot_z(int q, double angle);
  static Gate cnot(int control, int target);
  static Gate swap(int a, int b);
  static Gate xyz_block(int a, int b, Angles3 theta);

  GateKind kind() const { return kind_; }
  int arity() const { return arity_; }
  std::span<const int> qubits() const { return {qubits_.data(), static_cast<std::size_t>(arity_)}; }
  int qubit(int i) const { return qubits_[static_cast<std::size_t>(i)]; }
  /// RotZ angle.
  double angle() const { return theta_.z; }
  /// XYZBlock angles.
  const Angles3& theta() const { return theta_; }

  /// True for the kinds that exist only before lowering (Swap, XYZBlock).
  bool is_block_only() const { return kind_ == GateKind::Swap || kind_ == GateKind::XYZBlock; }
  bool is_two_qubit() const { return arity_ == 2; }

  /// Same gate with qubit q replaced by perm[q].
  Gate relabeled(std::span<const int> perm) const;

  bool operator==(const Gate&) const = default;

 private:
  Gate(GateKind kind, int q);
  Gate(GateKind kind, int a, int b);

  GateKind kind_;
  int arity_;
  std::array<int, 2> qubits_{};
  Angles3 theta_{};
};

Matrix2 single_qubit_matrix(const Gate& gate);
Matrix4 two_qubit_matrix(const Gate& gate);

/// exp(-i (tx XX + ty YY + tz ZZ) / 2), closed form.
Matrix4 xyz_block_matrix(const Angles3& theta);

class Circuit {
 public:
  Circuit(int n_qubits, CircuitLevel level);

  /// Throws IndexError for qubit indices outside [0, n_qubits) and
  /// SpecError when a block-only gate is appended to a lowered circuit.
  void append(const Gate& gate);
  void append(std::span<const Gate> gates);

  /// Records the current end of the gate list as a Trotter-step boundary.
  void mark_step_end();

  int n_qubits() const { return n_qubits_; }
  CircuitLevel level() const { return level_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  /// Gate indices one past the end of each Trotter step. Gates after the last
  /// boundary form the closing segment (non-empty only for merged second order).
  const std::vector<std::size_t>& step_ends() const { return step_ends_; }
  std::span<const Gate> step_gates(std::size_t step) const;
  std::span<const Gate> closing_gates() const;

 private:
  int n_qubits_;
  CircuitLevel level_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> step_ends_;
};

/// Three-CNOT synthesis of a single XYZ block on an (n_qubits) register.
Circuit lower_block(const Gate& block, int n_qubits);
void lower_block_into(const Gate& block, std::vector<Gate>& out);

/// Order-preserving lowering of every XYZBlock and Swap. Step boundaries are
/// carried over. A lowered input is returned unchanged.
Circuit lower(const Circuit& circuit);

/// Greedy as-soon-as-possible layering.
int depth(const Circuit& circuit);
int depth(std::span<const Gate> gates, int n_qubits);
std::size_t cnot_count(std::span<const Gate> gates);
inline std::size_t cnot_count(const Circuit& c) { return cnot_count(c.gates()); }

struct StepIncrement {
  std::size_t cnots = 0;
  int depth = 0;
};

struct CircuitMetrics {
  int depth = 0;
  std::size_t cnot_count = 0;
  std::vector<StepIncrement> per_step;
  StepIncrement closing;
};

CircuitMetrics metrics(const Circuit& circuit);

inline constexpr int kMaxUnitaryQubits = 10;

/// Dense unitary of the whole circuit, little-endian. Block-level gates use
/// their exact matrices.
Eigen::MatrixXcd unitary_of(const Circuit& circuit, int max_qubits = kMaxUnitaryQubits);

/// Max-entry difference after gauging the global phase of `a` onto `b` at
/// the largest-magnitude entry of `b`.
double max_entry_distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double frobenius_distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Line-oriented text form:
///   qubits=N level=block|lowered
///   KIND q0 [q1] [angle...]
///   STEP
std::string to_text(const Circuit& circuit);
Circuit from_text(std::string_view text);

}  // namespace spinlab
