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

#include "spinlab/circuit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinlab/error.hpp"

namespace spinlab {

namespace {

constexpr Complex kI{0.0, 1.0};

struct KindName {
  GateKind kind;
  const char* name;
};

constexpr std::array<KindName, 10> kKindNames{{
    {GateKind::Hadamard, "H"},
    {GateKind::PauliX, "X"},
    {GateKind::PauliY, "Y"},
    {GateKind::PauliZ, "Z"},
    {GateKind::SqrtX, "SX"},
    {GateKind::SqrtXDagger, "SXDG"},
    {GateKind::RotZ, "RZ"},
    {GateKind::CNot, "CX"},
    {GateKind::Swap, "SWAP"},
    {GateKind::XYZBlock, "XYZ"},
}};

void check_qubit(int q) {
  if (q < 0) throw IndexError(fmt::format("negative qubit index {}", q));
}

// Left-multiplies `u` by `g` acting on qubit q.
void left_apply_1q(Eigen::MatrixXcd& u, int q, const Matrix2& g) {
  const Eigen::Index dim = u.rows();
  const Eigen::Index mask = Eigen::Index{1} << q;
  for (Eigen::Index i0 = 0; i0 < dim; ++i0) {
    if (i0 & mask) continue;
    const Eigen::Index i1 = i0 | mask;
    Eigen::RowVectorXcd r0 = u.row(i0);
    Eigen::RowVectorXcd r1 = u.row(i1);
    u.row(i0) = g(0, 0) * r0 + g(0, 1) * r1;
    u.row(i1) = g(1, 0) * r0 + g(1, 1) * r1;
  }
}

void left_apply_2q(Eigen::MatrixXcd& u, int q0, int q1, const Matrix4& g) {
  const Eigen::Index dim = u.rows();
  const Eigen::Index m0 = Eigen::Index{1} << q0;
  const Eigen::Index m1 = Eigen::Index{1} << q1;
  Eigen::MatrixXcd rows(4, u.cols());
  for (Eigen::Index base = 0; base < dim; ++base) {
    if ((base & m0) || (base & m1)) continue;
    const std::array<Eigen::Index, 4> idx{base, base | m0, base | m1, base | m0 | m1};
    for (int k = 0; k < 4; ++k) rows.row(k) = u.row(idx[static_cast<std::size_t>(k)]);
    const Eigen::MatrixXcd out = g * rows;
    for (int k = 0; k < 4; ++k) u.row(idx[static_cast<std::size_t>(k)]) = out.row(k);
  }
}

}  // namespace

const char* to_string(GateKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

const char* to_string(CircuitLevel level) {
  return level == CircuitLevel::Block ? "block" : "lowered";
}

Gate::Gate(GateKind kind, int q) : kind_(kind), arity_(1), qubits_{q, -1} { check_qubit(q); }

Gate::Gate(GateKind kind, int a, int b) : kind_(kind), arity_(2), qubits_{a, b} {
  check_qubit(a);
  check_qubit(b);
  if (a == b) throw IndexError(fmt::format("two-qubit gate on repeated qubit {}", a));
}

Gate Gate::rot_z(int q, double angle) {
  Gate g(GateKind::RotZ, q);
  g.theta_.z = angle;
  return g;
}

Gate Gate::cnot(int control, int target) { return Gate(GateKind::CNot, control, target); }

Gate Gate::swap(int a, int b) { return Gate(GateKind::Swap, a, b); }

Gate Gate::xyz_block(int a, int b, Angles3 theta) {
  Gate g(GateKind::XYZBlock, a, b);
  g.theta_ = theta;
  return g;
}

Gate Gate::relabeled(std::span<const int> perm) const {
  Gate g = *this;
  for (int i = 0; i < arity_; ++i) {
    g.qubits_[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(qubits_[static_cast<std::size_t>(i)])];
  }
  return g;
}

Matrix2 single_qubit_matrix(const Gate& gate) {
  Matrix2 m;
  switch (gate.kind()) {
    case GateKind::Hadamard:
      m << 1, 1, 1, -1;
      return m / std::numbers::sqrt2;
    case GateKind::PauliX:
      m << 0, 1, 1, 0;
      return m;
    case GateKind::PauliY:
      m << 0, -kI, kI, 0;
      return m;
    case GateKind::PauliZ:
      m << 1, 0, 0, -1;
      return m;
    case GateKind::SqrtX:
      m << Complex(1, 1), Complex(1, -1), Complex(1, -1), Complex(1, 1);
      return 0.5 * m;
    case GateKind::SqrtXDagger:
      m << Complex(1, -1), Complex(1, 1), Complex(1, 1), Complex(1, -1);
      return 0.5 * m;
    case GateKind::RotZ: {
      const double h = 0.5 * gate.angle();
      m << std::exp(-kI * h), 0, 0, std::exp(kI * h);
      return m;
    }
    default:
      throw SpecError(fmt::format("{} is not a single-qubit gate", to_string(gate.kind())));
  }
}

Matrix4 xyz_block_matrix(const Angles3& theta) {
  // The generator splits into the {|00>,|11>} and {|01>,|10>} sectors.
  const double a = 0.5 * (theta.x - theta.y);
  const double b = 0.5 * (theta.x + theta.y);
  const Complex pz = std::exp(-kI * (0.5 * theta.z));
  const Complex mz = std::exp(kI * (0.5 * theta.z));
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = m(3, 3) = pz * std::cos(a);
  m(0, 3) = m(3, 0) = -kI * pz * std::sin(a);
  m(1, 1) = m(2, 2) = mz * std::cos(b);
  m(1, 2) = m(2, 1) = -kI * mz * std::sin(b);
  return m;
}

Matrix4 two_qubit_matrix(const Gate& gate) {
  Matrix4 m = Matrix4::Zero();
  switch (gate.kind()) {
    case GateKind::CNot:
      // control = first qubit (bit 0 of the local index).
      m(0, 0) = m(2, 2) = 1;
      m(3, 1) = m(1, 3) = 1;
      return m;
    case GateKind::Swap:
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = 1;
      return m;
    case GateKind::XYZBlock:
      return xyz_block_matrix(gate.theta());
    default:
      throw SpecError(fmt::format("{} is not a two-qubit gate", to_string(gate.kind())));
  }
}

Circuit::Circuit(int n_qubits, CircuitLevel level) : n_qubits_(n_qubits), level_(level) {
  if (n_qubits < 0) throw SpecError("negative qubit count");
}

void Circuit::append(const Gate& gate) {
  for (int q : gate.qubits()) {
    if (q >= n_qubits_) {
      throw IndexError(fmt::format("qubit {} out of range for a {}-qubit circuit", q, n_qubits_));
    }
  }
  if (level_ == CircuitLevel::Lowered && gate.is_block_only()) {
    throw SpecError(fmt::format("{} is not allowed in a lowered circuit", to_string(gate.kind())));
  }
  gates_.push_back(gate);
}

void Circuit::append(std::span<const Gate> gates) {
  for (const auto& g : gates) append(g);
}

void Circuit::mark_step_end() { step_ends_.push_back(gates_.size()); }

std::span<const Gate> Circuit::step_gates(std::size_t step) const {
  const std::size_t begin = step == 0 ? 0 : step_ends_.at(step - 1);
  const std::size_t end = step_ends_.at(step);
  return std::span<const Gate>(gates_).subspan(begin, end - begin);
}

std::span<const Gate> Circuit::closing_gates() const {
  const std::size_t begin = step_ends_.empty() ? gates_.size() : step_ends_.back();
  return std::span<const Gate>(gates_).subspan(begin);
}

void lower_block_into(const Gate& block, std::vector<Gate>& out) {
  const int a = block.qubit(0);
  const int b = block.qubit(1);
  switch (block.kind()) {
    case GateKind::Swap:
      out.push_back(Gate::cnot(a, b));
      out.push_back(Gate::cnot(b, a));
      out.push_back(Gate::cnot(a, b));
      return;
    case GateKind::XYZBlock: {
      const Angles3& t = block.theta();
      out.push_back(Gate::cnot(b, a));
      out.push_back(Gate::rot_z(a, t.z));
      out.push_back(Gate::hadamard(b));
      out.push_back(Gate::rot_z(b, t.x + 0.5 * std::numbers::pi));
      out.push_back(Gate::cnot(b, a));
      out.push_back(Gate::rot_z(a, -t.y));
      out.push_back(Gate::hadamard(b));
      out.push_back(Gate::cnot(b, a));
      out.push_back(Gate::sqrt_x(a));
      out.push_back(Gate::sqrt_x_dagger(b));
      return;
    }
    default:
      out.push_back(block);
  }
}

Circuit lower_block(const Gate& block, int n_qubits) {
  if (block.kind() != GateKind::XYZBlock && block.kind() != GateKind::Swap) {
    throw SpecError(fmt::format("lower_block expects a block, got {}", to_string(block.kind())));
  }
  Circuit out(n_qubits, CircuitLevel::Lowered);
  std::vector<Gate> frag;
  lower_block_into(block, frag);
  out.append(frag);
  return out;
}

Circuit lower(const Circuit& circuit) {
  if (circuit.level() == CircuitLevel::Lowered) return circuit;
  Circuit out(circuit.n_qubits(), CircuitLevel::Lowered);
  std::vector<Gate> buffer;
  std::size_t next_end = 0;
  const auto& ends = circuit.step_ends();
  const auto& gates = circuit.gates();
  for (std::size_t i = 0; i <= gates.size(); ++i) {
    while (next_end < ends.size() && ends[next_end] == i) {
      out.mark_step_end();
      ++next_end;
    }
    if (i == gates.size()) break;
    buffer.clear();
    lower_block_into(gates[i], buffer);
    out.append(buffer);
  }
  return out;
}

int depth(std::span<const Gate> gates, int n_qubits) {
  std::vector<int> level(static_cast<std::size_t>(n_qubits), 0);
  int total = 0;
  for (const auto& g : gates) {
    int l = 0;
    for (int q : g.qubits()) l = std::max(l, level[static_cast<std::size_t>(q)]);
    ++l;
    for (int q : g.qubits()) level[static_cast<std::size_t>(q)] = l;
    total = std::max(total, l);
  }
  return total;
}

int depth(const Circuit& circuit) { return depth(circuit.gates(), circuit.n_qubits()); }

std::size_t cnot_count(std::span<const Gate> gates) {
  return static_cast<std::size_t>(std::count_if(
      gates.begin(), gates.end(), [](const Gate& g) { return g.kind() == GateKind::CNot; }));
}

CircuitMetrics metrics(const Circuit& circuit) {
  CircuitMetrics m;
  m.depth = depth(circuit);
  m.cnot_count = cnot_count(circuit);
  const std::span<const Gate> all(circuit.gates());
  std::size_t prev_cnots = 0;
  int prev_depth = 0;
  for (std::size_t end : circuit.step_ends()) {
    const auto prefix = all.first(end);
    const std::size_t c = cnot_count(prefix);
    const int d = depth(prefix, circuit.n_qubits());
    m.per_step.push_back({c - prev_cnots, d - prev_depth});
    prev_cnots = c;
    prev_depth = d;
  }
  m.closing = {m.cnot_count - prev_cnots, m.depth - prev_depth};
  return m;
}

Eigen::MatrixXcd unitary_of(const Circuit& circuit, int max_qubits) {
  const int n = circuit.n_qubits();
  if (n > max_qubits) {
    throw CapacityError(
        fmt::format("unitary_of limited to {} qubits, circuit has {}", max_qubits, n));
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : circuit.gates()) {
    if (g.is_two_qubit()) {
      left_apply_2q(u, g.qubit(0), g.qubit(1), two_qubit_matrix(g));
    } else {
      left_apply_1q(u, g.qubit(0), single_qubit_matrix(g));
    }
  }
  return u;
}

namespace {

Complex phase_between(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(a(r, c)) == 0.0) return 1.0;
  const Complex ph = b(r, c) / a(r, c);
  return ph / std::abs(ph);
}

void check_same_shape(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw SpecError("matrix shape mismatch in unitary comparison");
  }
}

}  // namespace

double max_entry_distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  check_same_shape(a, b);
  return (phase_between(a, b) * a - b).cwiseAbs().maxCoeff();
}

double frobenius_distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  check_same_shape(a, b);
  return (phase_between(a, b) * a - b).norm();
}

std::string to_text(const Circuit& circuit) {
  std::string out = fmt::format("qubits={} level={}\n", circuit.n_qubits(), to_string(circuit.level()));
  const auto& ends = circuit.step_ends();
  std::size_t next_end = 0;
  const auto& gates = circuit.gates();
  for (std::size_t i = 0; i <= gates.size(); ++i) {
    while (next_end < ends.size() && ends[next_end] == i) {
      out += "STEP\n";
      ++next_end;
    }
    if (i == gates.size()) break;
    const Gate& g = gates[i];
    out += to_string(g.kind());
    for (int q : g.qubits()) out += fmt::format(" {}", q);
    if (g.kind() == GateKind::RotZ) out += fmt::format(" {:.17g}", g.angle());
    if (g.kind() == GateKind::XYZBlock) {
      out += fmt::format(" {:.17g} {:.17g} {:.17g}", g.theta().x, g.theta().y, g.theta().z);
    }
    out += '\n';
  }
  return out;
}

Circuit from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw SpecError("empty circuit text");
  int n = -1;
  std::string level_name;
  {
    std::istringstream header(line);
    std::string tok;
    while (header >> tok) {
      if (tok.starts_with("qubits=")) {
        n = std::stoi(tok.substr(7));
      } else if (tok.starts_with("level=")) {
        level_name = tok.substr(6);
      } else {
        throw SpecError(fmt::format("unknown header field '{}'", tok));
      }
    }
  }
  if (n < 0 || (level_name != "block" && level_name != "lowered")) {
    throw SpecError(fmt::format("malformed circuit header '{}'", line));
  }
  Circuit c(n, level_name == "block" ? CircuitLevel::Block : CircuitLevel::Lowered);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    if (name == "STEP") {
      c.mark_step_end();
      continue;
    }
    auto it = std::find_if(kKindNames.begin(), kKindNames.end(),
                           [&](const KindName& kn) { return name == kn.name; });
    if (it == kKindNames.end()) {
      throw SpecError(fmt::format("line {}: unknown gate '{}'", lineno, name));
    }
    auto read_int = [&] {
      int v;
      if (!(ls >> v)) throw SpecError(fmt::format("line {}: expected qubit index", lineno));
      return v;
    };
    auto read_double = [&] {
      double v;
      if (!(ls >> v)) throw SpecError(fmt::format("line {}: expected angle", lineno));
      return v;
    };
    switch (it->kind) {
      case GateKind::RotZ: {
        const int q = read_int();
        c.append(Gate::rot_z(q, read_double()));
        break;
      }
      case GateKind::CNot: {
        const int a = read_int();
        c.append(Gate::cnot(a, read_int()));
        break;
      }
      case GateKind::Swap: {
        const int a = read_int();
        c.append(Gate::swap(a, read_int()));
        break;
      }
      case GateKind::XYZBlock: {
        const int a = read_int();
        const int b = read_int();
        Angles3 t;
        t.x = read_double();
        t.y = read_double();
        t.z = read_double();
        c.append(Gate::xyz_block(a, b, t));
        break;
      }
      case GateKind::Hadamard: c.append(Gate::hadamard(read_int())); break;
      case GateKind::PauliX: c.append(Gate::pauli_x(read_int())); break;
      case GateKind::PauliY: c.append(Gate::pauli_y(read_int())); break;
      case GateKind::PauliZ: c.append(Gate::pauli_z(read_int())); break;
      case GateKind::SqrtX: c.append(Gate::sqrt_x(read_int())); break;
      case GateKind::SqrtXDagger: c.append(Gate::sqrt_x_dagger(read_int())); break;
    }
    std::string extra;
    if (ls >> extra) throw SpecError(fmt::format("line {}: trailing token '{}'", lineno, extra));
  }
  return c;
}

}  // namespace spinlab
