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

#include <fmt/format.h>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "spinlab/error.hpp"

namespace spinlab {

namespace {

constexpr Complex kI{0.0, 1.0};

// Rewrites every gate through `emit`, keeping step boundaries.
template <typename Emit>
Circuit rewrite(const Circuit& in, Emit&& emit) {
  Circuit out(in.n_qubits(), in.level());
  const auto& ends = in.step_ends();
  const auto& gates = in.gates();
  std::size_t next_end = 0;
  for (std::size_t i = 0; i <= gates.size(); ++i) {
    while (next_end < ends.size() && ends[next_end] == i) {
      out.mark_step_end();
      ++next_end;
    }
    if (i == gates.size()) break;
    emit(gates[i], out);
  }
  return out;
}

void require_lowered(const Circuit& c, const char* what) {
  if (c.level() != CircuitLevel::Lowered) {
    throw SpecError(fmt::format("{} expects a lowered circuit", what));
  }
}

void append_pauli(Circuit& c, Pauli p, int q) {
  switch (p) {
    case Pauli::I: return;
    case Pauli::X: c.append(Gate::pauli_x(q)); return;
    case Pauli::Y: c.append(Gate::pauli_y(q)); return;
    case Pauli::Z: c.append(Gate::pauli_z(q)); return;
  }
}

void apply_pauli(StateVector& s, int p, int q) {
  switch (p) {
    case 1: s.apply_pauli_x(q); return;
    case 2: s.apply_pauli_y(q); return;
    case 3: s.apply_pauli_z(q); return;
    default: return;
  }
}

double read_probability(const ReadoutError& e, int read, int prepared) {
  if (prepared == 0) return read == 0 ? 1.0 - e.p01 : e.p01;
  return read == 1 ? 1.0 - e.p10 : e.p10;
}

void check_readout(std::span<const ReadoutError> readout, int n_qubits) {
  if (static_cast<int>(readout.size()) != n_qubits) {
    throw SpecError(fmt::format("readout model has {} qubits, expected {}", readout.size(), n_qubits));
  }
}

}  // namespace

const char* to_string(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  return "?";
}

Matrix2 pauli_matrix(Pauli p) {
  Matrix2 m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -kI, kI, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

void NoiseModel::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p < 1.0)) throw SpecError(fmt::format("{} must lie in [0, 1), got {}", name, p));
  };
  prob(two_qubit_depolarizing, "two_qubit_depolarizing");
  for (const auto& r : readout) {
    prob(r.p01, "readout p01");
    prob(r.p10, "readout p10");
  }
  const double pi = std::numbers::pi;
  if (!(coherent_zz_overrotation > -pi && coherent_zz_overrotation <= pi)) {
    throw SpecError("coherent_zz_overrotation must lie in (-pi, pi]");
  }
}

std::vector<ReadoutError> uniform_readout(int n_qubits, double p01, double p10) {
  return std::vector<ReadoutError>(static_cast<std::size_t>(n_qubits), ReadoutError{p01, p10});
}

bool is_twirl_identity(const TwirlTuple& t) {
  // Local basis: control = bit 0, target = bit 1, so the Kronecker factor
  // order is (target, control).
  auto pair = [](Pauli control, Pauli target) {
    const Matrix2 c = pauli_matrix(control);
    const Matrix2 t = pauli_matrix(target);
    Matrix4 m;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) m(i, j) = t(i >> 1, j >> 1) * c(i & 1, j & 1);
    }
    return m;
  };
  const Matrix4 cx = two_qubit_matrix(Gate::cnot(0, 1));
  const Matrix4 wrapped = pair(t[2], t[3]) * cx * pair(t[0], t[1]);
  return max_entry_distance_up_to_phase(wrapped, cx) <= 1e-12;
}

TwirlSet find_twirl_set() {
  TwirlSet set;
  constexpr std::array<Pauli, 4> all{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  for (Pauli p1 : all) {
    for (Pauli p2 : all) {
      for (Pauli p3 : all) {
        for (Pauli p4 : all) {
          const TwirlTuple t{p1, p2, p3, p4};
          if (is_twirl_identity(t)) set.push_back(t);
        }
      }
    }
  }
  return set;
}

Circuit twirl_once(const Circuit& lowered, const TwirlSet& set, std::mt19937_64& rng) {
  require_lowered(lowered, "twirl");
  if (set.empty()) throw SpecError("empty twirl set");
  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
  return rewrite(lowered, [&](const Gate& g, Circuit& out) {
    if (g.kind() != GateKind::CNot) {
      out.append(g);
      return;
    }
    const TwirlTuple& t = set[pick(rng)];
    const int c = g.qubit(0);
    const int tq = g.qubit(1);
    append_pauli(out, t[0], c);
    append_pauli(out, t[1], tq);
    out.append(g);
    append_pauli(out, t[2], c);
    append_pauli(out, t[3], tq);
  });
}

std::vector<Circuit> twirl(const Circuit& lowered, int copies, std::uint64_t seed) {
  if (copies < 1) throw SpecError("twirl copies must be >= 1");
  static const TwirlSet set = find_twirl_set();
  std::vector<Circuit> out;
  out.reserve(static_cast<std::size_t>(copies));
  for (int k = 0; k < copies; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    out.push_back(twirl_once(lowered, set, rng));
  }
  return out;
}

Circuit fold(const Circuit& lowered, int scale) {
  require_lowered(lowered, "fold");
  if (scale < 1 || scale % 2 == 0) {
    throw SpecError(fmt::format("fold scale must be odd and >= 1, got {}", scale));
  }
  return rewrite(lowered, [&](const Gate& g, Circuit& out) {
    const int reps = g.kind() == GateKind::CNot ? scale : 1;
    for (int r = 0; r < reps; ++r) out.append(g);
  });
}

void apply_noisy(std::span<const Gate> gates, const NoiseModel& noise, StateVector& state,
                 std::mt19937_64& rng) {
  const double p = noise.two_qubit_depolarizing;
  const double angle = noise.coherent_zz_overrotation;
  Matrix4 zz = Matrix4::Zero();
  zz(0, 0) = zz(3, 3) = std::exp(-kI * (0.5 * angle));
  zz(1, 1) = zz(2, 2) = std::exp(kI * (0.5 * angle));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> which(1, 15);
  for (const Gate& g : gates) {
    state.apply(g);
    if (g.kind() != GateKind::CNot) continue;
    if (p > 0.0 && u(rng) < p) {
      const int pair = which(rng);
      apply_pauli(state, pair % 4, g.qubit(0));
      apply_pauli(state, pair / 4, g.qubit(1));
    }
    if (angle != 0.0) state.apply_two(g.qubit(0), g.qubit(1), zz);
  }
}

void simulate_noisy(const Circuit& lowered, const NoiseModel& noise, StateVector& state,
                    std::mt19937_64& rng) {
  require_lowered(lowered, "noisy simulation");
  if (lowered.n_qubits() != state.n_qubits()) throw SpecError("circuit/state size mismatch");
  apply_noisy(lowered.gates(), noise, state, rng);
}

Counts readout_corrupt(const Counts& counts, std::span<const ReadoutError> readout,
                       std::mt19937_64& rng) {
  if (readout.empty()) return counts;
  if (readout.size() > 64) throw CapacityError("readout model limited to 64 qubits");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Counts out;
  for (const auto& [bits, n] : counts) {
    for (std::uint64_t shot = 0; shot < n; ++shot) {
      std::uint64_t read = bits;
      for (std::size_t q = 0; q < readout.size(); ++q) {
        const bool one = (bits >> q) & 1U;
        const double flip = one ? readout[q].p10 : readout[q].p01;
        if (u(rng) < flip) read ^= std::uint64_t{1} << q;
      }
      ++out[read];
    }
  }
  return out;
}

QuasiDistribution m3_correct(const Counts& counts, std::span<const ReadoutError> readout,
                             int n_qubits, const M3Options& options) {
  if (counts.empty()) throw SpecError("m3 needs non-empty counts");
  check_readout(readout, n_qubits);
  double max_flip = 0.0;
  for (std::size_t q = 0; q < readout.size(); ++q) {
    const double det = 1.0 - readout[q].p01 - readout[q].p10;
    if (std::abs(det) < 1e-12) {
      throw NumericalError(fmt::format(
          "readout confusion of qubit {} is singular (p01 + p10 = 1); condition estimate inf", q));
    }
    max_flip = std::max({max_flip, readout[q].p01, readout[q].p10});
  }
  // Entries beyond this Hamming distance are below 1e-15 and dropped.
  int max_distance = 0;
  if (max_flip > 0.0) {
    max_distance = std::min(n_qubits, static_cast<int>(std::ceil(std::log(1e-15) / std::log(max_flip))));
  }

  std::vector<std::uint64_t> strings;
  Eigen::VectorXd b(static_cast<Eigen::Index>(counts.size()));
  double total = 0.0;
  for (const auto& [bits, n] : counts) total += static_cast<double>(n);
  for (const auto& [bits, n] : counts) {
    b(static_cast<Eigen::Index>(strings.size())) = static_cast<double>(n) / total;
    strings.push_back(bits);
  }
  const auto k = static_cast<Eigen::Index>(strings.size());

  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index j = 0; j < k; ++j) {
    const std::uint64_t truth = strings[static_cast<std::size_t>(j)];
    const std::size_t first = triplets.size();
    double column_sum = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const std::uint64_t read = strings[static_cast<std::size_t>(i)];
      if (std::popcount(read ^ truth) > max_distance) continue;
      double p = 1.0;
      for (int q = 0; q < n_qubits; ++q) {
        p *= read_probability(readout[static_cast<std::size_t>(q)], static_cast<int>((read >> q) & 1U),
                              static_cast<int>((truth >> q) & 1U));
      }
      triplets.emplace_back(i, j, p);
      column_sum += p;
    }
    for (std::size_t t = first; t < triplets.size(); ++t) {
      triplets[t] = Eigen::Triplet<double>(triplets[t].row(), triplets[t].col(), triplets[t].value() / column_sum);
    }
  }
  Eigen::SparseMatrix<double> a(k, k);
  a.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> solver;
  solver.setTolerance(options.tolerance);
  solver.setMaxIterations(options.max_iterations);
  solver.compute(a);
  const Eigen::VectorXd x = solver.solveWithGuess(b, b);
  if (solver.info() != Eigen::Success || !x.allFinite()) {
    double condition = std::numeric_limits<double>::quiet_NaN();
    if (k <= 2048) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(a)};
      const auto& s = svd.singularValues();
      condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
    }
    throw NumericalError(fmt::format(
        "readout mitigation solve failed after {} iterations (error {:.3e}); condition estimate {:.3e}",
        solver.iterations(), solver.error(), condition));
  }
  QuasiDistribution out;
  out.iterations = static_cast<int>(solver.iterations());
  out.residual = solver.error();
  const double sum = x.sum();
  for (Eigen::Index i = 0; i < k; ++i) {
    out.probabilities.emplace(strings[static_cast<std::size_t>(i)], x(i) / sum);
  }
  return out;
}

double m3_mitigate(const Counts& counts, std::span<const ReadoutError> readout, int n_qubits,
                   const M3Options& options) {
  const QuasiDistribution q = m3_correct(counts, readout, n_qubits, options);
  double value = 0.0;
  for (const auto& [bits, p] : q.probabilities) value += p * staggered_magnetization(bits, n_qubits);
  return value;
}

std::vector<double> zne_weights(std::span<const double> scales) {
  std::vector<double> distinct(scales.begin(), scales.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) {
    throw SpecError(fmt::format("quadratic extrapolation needs >= 3 distinct scales, got {}",
                                distinct.size()));
  }
  const auto n = static_cast<Eigen::Index>(scales.size());
  Eigen::MatrixXd v(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = scales[static_cast<std::size_t>(i)];
    v(i, 0) = 1.0;
    v(i, 1) = s;
    v(i, 2) = s * s;
  }
  const Eigen::MatrixXd pinv = v.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(n, n));
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = pinv(0, i);
  return w;
}

double zne_extrapolate(std::span<const double> values, std::span<const double> scales) {
  if (values.size() != scales.size()) throw SpecError("values and scales differ in length");
  const auto w = zne_weights(scales);
  double out = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) out += w[i] * values[i];
  return out;
}

}  // namespace spinlab
