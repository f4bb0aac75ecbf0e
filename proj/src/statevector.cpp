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

#include "spinlab/statevector.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "spinlab/error.hpp"

namespace spinlab {

namespace {

constexpr Complex kI{0.0, 1.0};

// Spreads k over the positions not occupied by the (sorted) bits lo < hi.
inline std::size_t insert_two_zero_bits(std::size_t k, int lo, int hi) {
  const std::size_t lo_mask = (std::size_t{1} << lo) - 1;
  std::size_t i = (k & lo_mask) | ((k & ~lo_mask) << 1);
  const std::size_t hi_mask = (std::size_t{1} << hi) - 1;
  return (i & hi_mask) | ((i & ~hi_mask) << 1);
}

// H = diag + sum over pairs of (bit-flip on both sites) * coefficient that
// depends on whether the two bits agree.
struct CompiledHamiltonian {
  struct Flip {
    std::size_t mask;
    int a;
    int b;
    double equal;    // (cxx - cyy) on |00>, |11>
    double unequal;  // (cxx + cyy) on |01>, |10>
  };
  std::vector<double> diagonal;
  std::vector<Flip> flips;

  CompiledHamiltonian(const HamiltonianTerms& terms, std::size_t dim) : diagonal(dim, 0.0) {
    for (const auto& t : terms) {
      if (t.a == t.b) throw SpecError("Hamiltonian term on a repeated site");
      const std::size_t ma = std::size_t{1} << t.a;
      const std::size_t mb = std::size_t{1} << t.b;
      if (t.kind == PauliPair::ZZ) {
        for (std::size_t i = 0; i < dim; ++i) {
          const bool same = ((i & ma) != 0) == ((i & mb) != 0);
          diagonal[i] += same ? t.coefficient : -t.coefficient;
        }
        continue;
      }
      auto it = std::find_if(flips.begin(), flips.end(),
                             [&](const Flip& f) { return f.mask == (ma | mb); });
      if (it == flips.end()) {
        flips.push_back({ma | mb, t.a, t.b, 0.0, 0.0});
        it = std::prev(flips.end());
      }
      // Y Y |b_a b_b> = -|~> when the bits agree and +|~> otherwise.
      const double sign_equal = t.kind == PauliPair::XX ? 1.0 : -1.0;
      it->equal += sign_equal * t.coefficient;
      it->unequal += t.coefficient;
    }
  }

  void apply(std::span<const Complex> in, std::span<Complex> out) const {
    const std::size_t dim = in.size();
    for (std::size_t i = 0; i < dim; ++i) out[i] = diagonal[i] * in[i];
    for (const auto& f : flips) {
      const std::size_t ma = std::size_t{1} << f.a;
      const std::size_t mb = std::size_t{1} << f.b;
      for (std::size_t i = 0; i < dim; ++i) {
        const bool same = ((i & ma) != 0) == ((i & mb) != 0);
        out[i ^ f.mask] += (same ? f.equal : f.unequal) * in[i];
      }
    }
  }

  /// True when every term maps a basis state to states of equal Hamming weight.
  bool conserves_weight() const {
    return std::all_of(flips.begin(), flips.end(), [](const Flip& f) { return f.equal == 0.0; });
  }

  /// H restricted to the basis states `index` (closed under H); `position`
  /// maps a full index to its slot in the restricted vector.
  void apply(std::span<const std::size_t> index, std::span<const std::int64_t> position,
             std::span<const Complex> in, std::span<Complex> out) const {
    const std::size_t d = index.size();
    for (std::size_t k = 0; k < d; ++k) out[k] = diagonal[index[k]] * in[k];
    for (const auto& f : flips) {
      const std::size_t ma = std::size_t{1} << f.a;
      const std::size_t mb = std::size_t{1} << f.b;
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t i = index[k];
        if (((i & ma) != 0) == ((i & mb) != 0)) continue;
        out[static_cast<std::size_t>(position[i ^ f.mask])] += f.unequal * in[k];
      }
    }
  }
};

void check_capacity(int n, int max_qubits) {
  if (n < 0) throw SpecError("negative qubit count");
  if (n > max_qubits) {
    throw CapacityError(fmt::format("state vector limited to {} qubits, requested {}", max_qubits, n));
  }
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

HamiltonianTerms hamiltonian_terms(const ChainSpec& spec) {
  spec.validate();
  HamiltonianTerms terms;
  const double jxy = spec.j1 / 4.0;
  const double jz = spec.delta * spec.j1 / 4.0;
  for (auto [a, b] : nearest_neighbour_bonds(spec)) {
    terms.push_back({jxy, PauliPair::XX, a, b});
    terms.push_back({jxy, PauliPair::YY, a, b});
    terms.push_back({jz, PauliPair::ZZ, a, b});
  }
  if (spec.j2 != 0.0) {
    const double j = spec.j2 / 4.0;
    for (auto [a, b] : next_nearest_bonds(spec)) {
      terms.push_back({j, PauliPair::XX, a, b});
      terms.push_back({j, PauliPair::YY, a, b});
      terms.push_back({j, PauliPair::ZZ, a, b});
    }
  }
  return terms;
}

StateVector::StateVector(int n_qubits, int max_qubits) : n_qubits_(n_qubits) {
  check_capacity(n_qubits, max_qubits);
  amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index, int max_qubits) {
  StateVector s(n_qubits, max_qubits);
  if (index >= s.dimension()) throw IndexError(fmt::format("basis index {} out of range", index));
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw SpecError("amplitude count must be a power of two");
  }
  StateVector s(std::countr_zero(dim), 63);
  s.amps_ = std::move(amplitudes);
  return s;
}

double StateVector::norm() const { return norm2(amps_); }

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw NumericalError("cannot normalize the zero vector");
  for (auto& a : amps_) a /= n;
}

void StateVector::apply_single(int q, const Matrix2& m) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = amps_.size();
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t j = base; j < base + stride; ++j) {
      const Complex a0 = amps_[j];
      const Complex a1 = amps_[j + stride];
      amps_[j] = m00 * a0 + m01 * a1;
      amps_[j + stride] = m10 * a0 + m11 * a1;
    }
  }
}

void StateVector::apply_two(int q0, int q1, const Matrix4& m) {
  const std::size_t m0 = std::size_t{1} << q0;
  const std::size_t m1 = std::size_t{1} << q1;
  const int lo = std::min(q0, q1);
  const int hi = std::max(q0, q1);
  const std::size_t quarter = amps_.size() / 4;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i0 = insert_two_zero_bits(k, lo, hi);
    const std::array<std::size_t, 4> idx{i0, i0 | m0, i0 | m1, i0 | m0 | m1};
    const std::array<Complex, 4> in{amps_[idx[0]], amps_[idx[1]], amps_[idx[2]], amps_[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      amps_[idx[static_cast<std::size_t>(r)]] =
          m(r, 0) * in[0] + m(r, 1) * in[1] + m(r, 2) * in[2] + m(r, 3) * in[3];
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  const std::size_t mc = std::size_t{1} << control;
  const std::size_t mt = std::size_t{1} << target;
  const int lo = std::min(control, target);
  const int hi = std::max(control, target);
  const std::size_t quarter = amps_.size() / 4;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i = insert_two_zero_bits(k, lo, hi) | mc;
    std::swap(amps_[i], amps_[i | mt]);
  }
}

void StateVector::apply_swap(int a, int b) {
  const std::size_t ma = std::size_t{1} << a;
  const std::size_t mb = std::size_t{1} << b;
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  const std::size_t quarter = amps_.size() / 4;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i = insert_two_zero_bits(k, lo, hi);
    std::swap(amps_[i | ma], amps_[i | mb]);
  }
}

void StateVector::apply_pauli_x(int q) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
    for (std::size_t j = base; j < base + stride; ++j) std::swap(amps_[j], amps_[j + stride]);
  }
}

void StateVector::apply_pauli_y(int q) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
    for (std::size_t j = base; j < base + stride; ++j) {
      const Complex a0 = amps_[j];
      amps_[j] = -kI * amps_[j + stride];
      amps_[j + stride] = kI * a0;
    }
  }
}

void StateVector::apply_pauli_z(int q) {
  const std::size_t mask = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) amps_[i] = -amps_[i];
  }
}

void StateVector::apply(const Gate& gate) {
  for (int q : gate.qubits()) {
    if (q >= n_qubits_) {
      throw IndexError(fmt::format("qubit {} out of range for {} qubits", q, n_qubits_));
    }
  }
  switch (gate.kind()) {
    case GateKind::PauliX: apply_pauli_x(gate.qubit(0)); return;
    case GateKind::PauliY: apply_pauli_y(gate.qubit(0)); return;
    case GateKind::PauliZ: apply_pauli_z(gate.qubit(0)); return;
    case GateKind::CNot: apply_cnot(gate.qubit(0), gate.qubit(1)); return;
    case GateKind::Swap: apply_swap(gate.qubit(0), gate.qubit(1)); return;
    case GateKind::XYZBlock:
      apply_two(gate.qubit(0), gate.qubit(1), xyz_block_matrix(gate.theta()));
      return;
    default: apply_single(gate.qubit(0), single_qubit_matrix(gate));
  }
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  std::transform(amps_.begin(), amps_.end(), p.begin(), [](Complex a) { return std::norm(a); });
  return p;
}

StateVector init_neel(int n_qubits) {
  if (n_qubits < 2) throw SpecError("Neel state needs at least 2 sites");
  std::uint64_t index = 0;
  for (int i = 1; i < n_qubits; i += 2) index |= std::uint64_t{1} << i;
  return StateVector::basis_state(n_qubits, index);
}

void apply(std::span<const Gate> gates, StateVector& state) {
  for (const auto& g : gates) state.apply(g);
}

void apply(const Circuit& circuit, StateVector& state) {
  if (circuit.n_qubits() != state.n_qubits()) {
    throw SpecError(fmt::format("circuit has {} qubits, state has {}", circuit.n_qubits(),
                                state.n_qubits()));
  }
  spinlab::apply(std::span<const Gate>(circuit.gates()), state);
}

double staggered_magnetization(std::uint64_t bits, int n_qubits) {
  double s = 0.0;
  for (int i = 0; i < n_qubits; ++i) {
    const double sz = ((bits >> i) & 1U) ? -0.5 : 0.5;
    s += (i % 2 == 0) ? sz : -sz;
  }
  return s / n_qubits;
}

double staggered_magnetization(const StateVector& state) {
  const int n = state.n_qubits();
  // Per-site <S^z> accumulated from probabilities.
  std::vector<double> sz(static_cast<std::size_t>(n), 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const double p = std::norm(amps[b]);
    if (p == 0.0) continue;
    for (int i = 0; i < n; ++i) sz[static_cast<std::size_t>(i)] += ((b >> i) & 1U) ? -0.5 * p : 0.5 * p;
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (i % 2 == 0 ? 1.0 : -1.0) * sz[static_cast<std::size_t>(i)];
  return s / n;
}

double staggered_magnetization(const Counts& counts, int n_qubits) {
  double total = 0.0;
  double acc = 0.0;
  for (const auto& [bits, c] : counts) {
    acc += static_cast<double>(c) * staggered_magnetization(bits, n_qubits);
    total += static_cast<double>(c);
  }
  if (total == 0.0) throw SpecError("empty counts");
  return acc / total;
}

void apply_hamiltonian(const HamiltonianTerms& terms, std::span<const Complex> in,
                       std::span<Complex> out) {
  if (in.size() != out.size()) throw SpecError("size mismatch in apply_hamiltonian");
  CompiledHamiltonian(terms, in.size()).apply(in, out);
}

double energy(const HamiltonianTerms& terms, const StateVector& state) {
  std::vector<Complex> h(state.dimension());
  apply_hamiltonian(terms, state.amplitudes(), h);
  return dot(state.amplitudes(), h).real();
}

StateVector exact_evolve(const HamiltonianTerms& terms, const StateVector& state, double t,
                         const KrylovOptions& options, KrylovReport* report) {
  check_capacity(state.n_qubits(), options.max_qubits);
  KrylovReport rep;
  StateVector out = state;
  if (t == 0.0) {
    if (report) *report = rep;
    return out;
  }
  const std::size_t dim = state.dimension();
  for (const auto& term : terms) {
    if (term.a >= state.n_qubits() || term.b >= state.n_qubits()) {
      throw IndexError("Hamiltonian term outside the register");
    }
  }
  const CompiledHamiltonian h(terms, dim);

  // Work inside the Hamming-weight sectors occupied by the input when H
  // conserves the weight.
  std::vector<std::size_t> index;
  std::vector<std::int64_t> position;
  if (h.conserves_weight()) {
    std::vector<bool> occupied(static_cast<std::size_t>(state.n_qubits()) + 1, false);
    for (std::size_t i = 0; i < dim; ++i) {
      if (state[i] != Complex{0.0, 0.0}) occupied[static_cast<std::size_t>(std::popcount(i))] = true;
    }
    position.assign(dim, -1);
    for (std::size_t i = 0; i < dim; ++i) {
      if (occupied[static_cast<std::size_t>(std::popcount(i))]) {
        position[i] = static_cast<std::int64_t>(index.size());
        index.push_back(i);
      }
    }
  }
  const bool restricted = !index.empty() && index.size() < dim;
  const std::size_t sub_dim = restricted ? index.size() : dim;
  std::vector<Complex> psi(sub_dim);
  for (std::size_t k = 0; k < sub_dim; ++k) psi[k] = state[restricted ? index[k] : k];
  auto apply_h = [&](std::span<const Complex> in, std::span<Complex> out) {
    if (restricted) {
      h.apply(index, position, in, out);
    } else {
      h.apply(in, out);
    }
  };

  const int m_max = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(options.krylov_dim), sub_dim));
  const double sign = t > 0 ? 1.0 : -1.0;
  double remaining = std::abs(t);
  double tau = remaining;

  std::vector<std::vector<Complex>> basis;
  std::vector<Complex> w(sub_dim);
  while (remaining > 0.0) {
    if (rep.substeps >= options.max_substeps) {
      throw NumericalError(fmt::format(
          "Krylov evolution did not converge: {} substeps, {} rejections, remaining time {}, last "
          "error estimate {:.3e}",
          rep.substeps, rep.rejected, remaining, rep.error_estimate));
    }
    // Lanczos with full reorthogonalisation.
    const double beta0 = norm2(psi);
    basis.assign(1, psi);
    for (auto& x : basis[0]) x /= beta0;
    std::vector<double> alpha;
    std::vector<double> beta;  // beta[j] couples v_j and v_{j+1}
    double h_next = 0.0;
    int m = 0;
    for (int j = 0; j < m_max; ++j) {
      apply_h(basis[static_cast<std::size_t>(j)], w);
      const double a = dot(basis[static_cast<std::size_t>(j)], w).real();
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) {
          const Complex c = dot(v, w);
          for (std::size_t i = 0; i < sub_dim; ++i) w[i] -= c * v[i];
        }
      }
      m = j + 1;
      h_next = norm2(w);
      if (h_next < 1e-13 * std::max(1.0, std::abs(a))) {
        h_next = 0.0;
        break;
      }
      if (j + 1 < m_max) {
        beta.push_back(h_next);
        basis.emplace_back(w);
        for (auto& x : basis.back()) x /= h_next;
      }
    }
    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(std::max(m - 1, 0));
    for (int j = 0; j < m; ++j) diag(j) = alpha[static_cast<std::size_t>(j)];
    for (int j = 0; j + 1 < m; ++j) sub(j) = beta[static_cast<std::size_t>(j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = eig.eigenvectors();
    const Eigen::VectorXd& lam = eig.eigenvalues();
    auto small_exp = [&](double dt) {
      Eigen::VectorXcd c(m);
      for (int k = 0; k < m; ++k) c(k) = std::exp(-kI * (sign * dt * lam(k))) * q(0, k);
      return Eigen::VectorXcd(q.cast<Complex>() * c);
    };

    tau = std::min(tau, remaining);
    Eigen::VectorXcd y;
    double err = 0.0;
    for (;;) {
      y = small_exp(tau);
      err = beta0 * h_next * std::abs(y(m - 1));
      if (err <= options.tolerance * tau || h_next == 0.0) break;
      tau *= 0.5;
      ++rep.rejected;
      if (tau < 1e-12 * std::abs(t)) {
        throw NumericalError(fmt::format(
            "Krylov sub-step underflow (error estimate {:.3e} at tau {:.3e}); increase krylov_dim",
            err, tau));
      }
    }
    std::fill(psi.begin(), psi.end(), Complex{0.0, 0.0});
    for (int k = 0; k < m; ++k) {
      const Complex c = beta0 * y(k);
      const auto& v = basis[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < sub_dim; ++i) psi[i] += c * v[i];
    }
    remaining -= tau;
    if (remaining < 1e-14 * std::abs(t)) remaining = 0.0;
    rep.error_estimate = std::max(rep.error_estimate, err);
    ++rep.substeps;
    // Grow the step again when the estimate is comfortably small.
    if (err < 0.1 * options.tolerance * tau) tau *= 2.0;
  }
  auto amps = out.amplitudes();
  if (restricted) {
    std::fill(amps.begin(), amps.end(), Complex{0.0, 0.0});
    for (std::size_t k = 0; k < sub_dim; ++k) amps[index[k]] = psi[k];
  } else {
    std::copy(psi.begin(), psi.end(), amps.begin());
  }
  if (report) *report = rep;
  return out;
}

Counts sample(const StateVector& state, std::uint64_t shots, std::mt19937_64& rng) {
  if (shots == 0) throw SpecError("shots must be >= 1");
  const auto amps = state.amplitudes();
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i]);
    cdf[i] = acc;
  }
  std::uniform_real_distribution<double> u(0.0, acc);
  Counts counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double r = u(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    if (it == cdf.end()) {
      // r == acc: take the last state with non-zero weight.
      it = std::lower_bound(cdf.begin(), cdf.end(), acc);
    }
    ++counts[static_cast<std::uint64_t>(it - cdf.begin())];
  }
  return counts;
}

Counts sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample(state, shots, rng);
}

}  // namespace spinlab
