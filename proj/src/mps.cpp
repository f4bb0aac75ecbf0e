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

#include "spinlab/mps.hpp"

#include <fmt/format.h>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "spinlab/error.hpp"

namespace spinlab {

namespace {

constexpr int kCheckpointVersion = 1;

// Exchanges the roles of the two local qubits: index bit(q0) + 2 bit(q1).
Matrix4 swap_local_order(const Matrix4& m) {
  const std::array<int, 4> p{0, 2, 1, 3};
  Matrix4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m(p[static_cast<std::size_t>(r)], p[static_cast<std::size_t>(c)]);
  }
  return out;
}

Matrix4 swap_matrix() { return two_qubit_matrix(Gate::swap(0, 1)); }

}  // namespace

MpsState MpsState::product_state(const std::vector<int>& bits, MpsOptions options) {
  if (bits.empty()) throw SpecError("MPS needs at least one site");
  if (options.chi_max < 1) throw SpecError("chi_max must be >= 1");
  if (options.svd_cutoff < 0.0) throw SpecError("svd_cutoff must be >= 0");
  MpsState mps;
  mps.options_ = options;
  mps.tensors_.resize(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    auto& t = mps.tensors_[i];
    t[0] = Eigen::MatrixXcd::Zero(1, 1);
    t[1] = Eigen::MatrixXcd::Zero(1, 1);
    t[bits[i] ? 1 : 0](0, 0) = 1.0;
  }
  return mps;
}

MpsState MpsState::product_state(int n_sites, std::uint64_t bits, MpsOptions options) {
  if (n_sites < 1 || n_sites > 64) throw SpecError("product_state from an integer needs 1..64 sites");
  std::vector<int> b(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) b[static_cast<std::size_t>(i)] = static_cast<int>((bits >> i) & 1U);
  return product_state(b, options);
}

int MpsState::bond_dim(int link) const {
  return static_cast<int>(tensors_.at(static_cast<std::size_t>(link))[0].cols());
}

std::vector<int> MpsState::bond_dims() const {
  std::vector<int> d;
  for (int i = 0; i + 1 < n_sites(); ++i) d.push_back(bond_dim(i));
  return d;
}

int MpsState::max_bond_dim() const {
  int m = 1;
  for (int i = 0; i + 1 < n_sites(); ++i) m = std::max(m, bond_dim(i));
  return m;
}

void MpsState::move_center(int site) {
  if (site < 0 || site >= n_sites()) throw IndexError(fmt::format("site {} out of range", site));
  while (center_ < site) {
    auto& a = tensors_[static_cast<std::size_t>(center_)];
    auto& next = tensors_[static_cast<std::size_t>(center_ + 1)];
    const Eigen::Index rows = a[0].rows();
    const Eigen::Index cols = a[0].cols();
    Eigen::MatrixXcd stacked(2 * rows, cols);
    stacked << a[0], a[1];
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(stacked);
    const Eigen::Index k = std::min(2 * rows, cols);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * rows, k);
    Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    a[0] = q.topRows(rows);
    a[1] = q.bottomRows(rows);
    next[0] = r * next[0];
    next[1] = r * next[1];
    ++center_;
  }
  while (center_ > site) {
    auto& a = tensors_[static_cast<std::size_t>(center_)];
    auto& prev = tensors_[static_cast<std::size_t>(center_ - 1)];
    const Eigen::Index rows = a[0].rows();
    const Eigen::Index cols = a[0].cols();
    // QR of the adjoint gives the LQ factorisation of [A0 A1].
    Eigen::MatrixXcd stacked(2 * cols, rows);
    stacked << a[0].adjoint(), a[1].adjoint();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(stacked);
    const Eigen::Index k = std::min(2 * cols, rows);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * cols, k);
    Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    a[0] = q.topRows(cols).adjoint();
    a[1] = q.bottomRows(cols).adjoint();
    const Eigen::MatrixXcd l = r.adjoint();
    prev[0] = prev[0] * l;
    prev[1] = prev[1] * l;
    --center_;
  }
}

void MpsState::apply_single(int site, const Matrix2& m) {
  if (site < 0 || site >= n_sites()) throw IndexError(fmt::format("site {} out of range", site));
  auto& a = tensors_[static_cast<std::size_t>(site)];
  Eigen::MatrixXcd a0 = m(0, 0) * a[0] + m(0, 1) * a[1];
  Eigen::MatrixXcd a1 = m(1, 0) * a[0] + m(1, 1) * a[1];
  a[0] = std::move(a0);
  a[1] = std::move(a1);
}

void MpsState::apply_adjacent(int site, const Matrix4& g) {
  if (site < 0 || site + 1 >= n_sites()) {
    throw IndexError(fmt::format("adjacent pair ({}, {}) out of range", site, site + 1));
  }
  move_center(center_ <= site ? site : site + 1);
  auto& left = tensors_[static_cast<std::size_t>(site)];
  auto& right = tensors_[static_cast<std::size_t>(site + 1)];
  const Eigen::Index dl = left[0].rows();
  const Eigen::Index dr = right[0].cols();

  std::array<Eigen::MatrixXcd, 4> pair;  // index s1 + 2 s2
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) pair[static_cast<std::size_t>(s1 + 2 * s2)] = left[static_cast<std::size_t>(s1)] * right[static_cast<std::size_t>(s2)];
  }
  Eigen::MatrixXcd theta = Eigen::MatrixXcd::Zero(2 * dl, 2 * dr);
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      auto block = theta.block(s1 * dl, s2 * dr, dl, dr);
      for (int k = 0; k < 4; ++k) {
        const Complex c = g(s1 + 2 * s2, k);
        if (c != Complex{0.0, 0.0}) block += c * pair[static_cast<std::size_t>(k)];
      }
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double total = s.squaredNorm();
  if (!(total > 0.0)) throw NumericalError("two-site update produced a zero state");

  Eigen::Index keep = 0;
  if (options_.svd_cutoff == 0.0) {
    const double floor = 1e-15 * s(0);
    while (keep < s.size() && s(keep) > floor) ++keep;
    if (keep > options_.chi_max) {
      throw CapacityError(fmt::format(
          "bond ({}, {}) needs dimension {} > chi_max {} with truncation disabled", site, site + 1,
          keep, options_.chi_max));
    }
  } else {
    while (keep < s.size() && keep < options_.chi_max &&
           s(keep) * s(keep) / total >= options_.svd_cutoff) {
      ++keep;
    }
  }
  keep = std::max<Eigen::Index>(keep, 1);
  const double kept = s.head(keep).squaredNorm();
  const double discarded = std::max(0.0, (total - kept) / total);
  truncation_log_.push_back(discarded);
  total_discarded_ += discarded;

  const Eigen::VectorXd sv = s.head(keep) / std::sqrt(kept);
  const Eigen::MatrixXcd u = svd.matrixU().leftCols(keep);
  const Eigen::MatrixXcd vh = sv.asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
  left[0] = u.topRows(dl);
  left[1] = u.bottomRows(dl);
  right[0] = vh.leftCols(dr);
  right[1] = vh.rightCols(dr);
  center_ = site + 1;
}

void MpsState::apply_pair(int a, int b, const Matrix4& g) {
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  // Bring `hi` next to `lo`, apply, and move it back.
  const Matrix4 sw = swap_matrix();
  for (int k = hi - 1; k > lo; --k) apply_adjacent(k, sw);
  apply_adjacent(lo, a < b ? g : swap_local_order(g));
  for (int k = lo + 1; k < hi; ++k) apply_adjacent(k, sw);
}

void MpsState::apply(const Gate& gate) {
  for (int q : gate.qubits()) {
    if (q >= n_sites()) throw IndexError(fmt::format("qubit {} out of range for {} sites", q, n_sites()));
  }
  if (!gate.is_two_qubit()) {
    apply_single(gate.qubit(0), single_qubit_matrix(gate));
    return;
  }
  apply_pair(gate.qubit(0), gate.qubit(1), two_qubit_matrix(gate));
}

double MpsState::expectation_z(int site) {
  move_center(site);
  const auto& a = tensors_[static_cast<std::size_t>(site)];
  const double p0 = a[0].squaredNorm();
  const double p1 = a[1].squaredNorm();
  return (p0 - p1) / (p0 + p1);
}

double MpsState::norm() {
  const auto& a = tensors_[static_cast<std::size_t>(center_)];
  return std::sqrt(a[0].squaredNorm() + a[1].squaredNorm());
}

StateVector MpsState::to_statevector(int max_qubits) const {
  if (n_sites() > max_qubits) {
    throw CapacityError(fmt::format("to_statevector limited to {} sites", max_qubits));
  }
  // Rows: basis index over sites contracted so far (little-endian).
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Ones(1, 1);
  for (int i = 0; i < n_sites(); ++i) {
    const auto& a = tensors_[static_cast<std::size_t>(i)];
    const Eigen::Index rows = psi.rows();
    Eigen::MatrixXcd next(2 * rows, a[0].cols());
    next.topRows(rows) = psi * a[0];
    next.bottomRows(rows) = psi * a[1];
    psi = std::move(next);
  }
  std::vector<Complex> amps(static_cast<std::size_t>(psi.rows()));
  for (Eigen::Index i = 0; i < psi.rows(); ++i) amps[static_cast<std::size_t>(i)] = psi(i, 0);
  return StateVector::from_amplitudes(std::move(amps));
}

Counts MpsState::sample(std::uint64_t shots, std::mt19937_64& rng) {
  if (shots == 0) throw SpecError("shots must be >= 1");
  if (n_sites() > 64) throw CapacityError("bitstring sampling limited to 64 sites");
  move_center(0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Counts counts;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    Eigen::RowVectorXcd env = Eigen::RowVectorXcd::Ones(1);
    std::uint64_t bits = 0;
    for (int i = 0; i < n_sites(); ++i) {
      const auto& a = tensors_[static_cast<std::size_t>(i)];
      Eigen::RowVectorXcd e0 = env * a[0];
      Eigen::RowVectorXcd e1 = env * a[1];
      const double p0 = e0.squaredNorm();
      const double p1 = e1.squaredNorm();
      if (u(rng) * (p0 + p1) < p0) {
        env = e0 / std::sqrt(p0);
      } else {
        env = e1 / std::sqrt(p1);
        bits |= std::uint64_t{1} << i;
      }
    }
    ++counts[bits];
  }
  return counts;
}

void MpsState::save(std::ostream& out) const {
  out << "spinlab-mps " << kCheckpointVersion << '\n';
  out << "sites " << n_sites() << '\n';
  out << "center " << center_ << '\n';
  out << fmt::format("chi_max {}\nsvd_cutoff {:.17g}\ndiscarded {:.17g}\n", options_.chi_max,
                     options_.svd_cutoff, total_discarded_);
  out << "bonds";
  for (int i = 0; i <= n_sites(); ++i) {
    out << ' ' << (i == n_sites() ? 1 : tensors_[static_cast<std::size_t>(i)][0].rows());
  }
  out << '\n';
  for (const auto& t : tensors_) {
    for (const auto& m : t) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          out << fmt::format("{:.17g} {:.17g}\n", m(r, c).real(), m(r, c).imag());
        }
      }
    }
  }
}

MpsState MpsState::load(std::istream& in) {
  auto expect = [&](const char* key) {
    std::string tok;
    if (!(in >> tok) || tok != key) {
      throw SpecError(fmt::format("MPS checkpoint: expected '{}', got '{}'", key, tok));
    }
  };
  expect("spinlab-mps");
  int version = 0;
  in >> version;
  if (version != kCheckpointVersion) {
    throw SpecError(fmt::format("unsupported MPS checkpoint version {}", version));
  }
  MpsState mps;
  int n = 0;
  expect("sites");
  in >> n;
  expect("center");
  in >> mps.center_;
  expect("chi_max");
  in >> mps.options_.chi_max;
  expect("svd_cutoff");
  in >> mps.options_.svd_cutoff;
  expect("discarded");
  in >> mps.total_discarded_;
  expect("bonds");
  if (!in || n < 1) throw SpecError("MPS checkpoint: malformed header");
  std::vector<Eigen::Index> bonds(static_cast<std::size_t>(n) + 1);
  for (auto& b : bonds) in >> b;
  mps.tensors_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (auto& m : mps.tensors_[static_cast<std::size_t>(i)]) {
      m.resize(bonds[static_cast<std::size_t>(i)], bonds[static_cast<std::size_t>(i) + 1]);
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          double re = 0.0;
          double im = 0.0;
          in >> re >> im;
          m(r, c) = Complex(re, im);
        }
      }
    }
  }
  if (!in) throw SpecError("MPS checkpoint: truncated tensor data");
  if (mps.center_ < 0 || mps.center_ >= n) throw SpecError("MPS checkpoint: bad center");
  return mps;
}

MpsState mps_init_neel(int n_sites, MpsOptions options) {
  if (n_sites < 2) throw SpecError("Neel state needs at least 2 sites");
  std::vector<int> bits(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) bits[static_cast<std::size_t>(i)] = i % 2;
  return MpsState::product_state(bits, options);
}

void mps_apply(std::span<const Gate> gates, MpsState& mps) {
  for (const auto& g : gates) mps.apply(g);
}

void mps_apply(const Circuit& circuit, MpsState& mps) {
  if (circuit.n_qubits() != mps.n_sites()) {
    throw SpecError(fmt::format("circuit has {} qubits, MPS has {} sites", circuit.n_qubits(),
                                mps.n_sites()));
  }
  mps_apply(circuit.gates(), mps);
}

double mps_staggered_magnetization(MpsState& mps) {
  const int n = mps.n_sites();
  double s = 0.0;
  if (mps.center() > n / 2) {
    for (int i = n - 1; i >= 0; --i) s += (i % 2 == 0 ? 0.5 : -0.5) * mps.expectation_z(i);
  } else {
    for (int i = 0; i < n; ++i) s += (i % 2 == 0 ? 0.5 : -0.5) * mps.expectation_z(i);
  }
  return s / n;
}

}  // namespace spinlab
