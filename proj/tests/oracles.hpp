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

// Brute-force reference implementations shared by the unit and acceptance
// tests. Nothing here calls into the library's matrix builders.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <cstdint>
#include <vector>

#include "spinlab/trotter.hpp"

namespace spinlab::oracle {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char p) {
  Mat m(2, 2);
  const Cplx i{0.0, 1.0};
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

/// Operator acting with `op_a` on qubit a and `op_b` on qubit b of n, built as
/// a Kronecker product (qubit n-1 leftmost, so qubit 0 is the least significant bit).
inline Mat embed(int n, int a, const Mat& op_a, int b = -1, const Mat& op_b = Mat()) {
  Mat out = Mat::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    if (q == a) {
      out = kron(out, op_a);
    } else if (q == b) {
      out = kron(out, op_b);
    } else {
      out = kron(out, pauli('I'));
    }
  }
  return out;
}

/// exp(-i t H) for Hermitian H by eigendecomposition.
inline Mat expm_hermitian(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  Vec phases(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) phases(k) = std::exp(Cplx(0.0, -t * lam(k)));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// 4x4 generator (tx XX + ty YY + tz ZZ) / 2 in the local basis bit(a) + 2 bit(b).
inline Mat xyz_generator(double tx, double ty, double tz) {
  return 0.5 * (tx * kron(pauli('X'), pauli('X')) + ty * kron(pauli('Y'), pauli('Y')) +
                tz * kron(pauli('Z'), pauli('Z')));
}

/// Spin-operator bond h = Jxy (SxSx + SySy) + Jz SzSz on sites (a, b) of n.
inline Mat spin_bond(int n, int a, int b, double jxy, double jz) {
  const Mat sx = 0.5 * pauli('X');
  const Mat sy = 0.5 * pauli('Y');
  const Mat sz = 0.5 * pauli('Z');
  return jxy * (embed(n, a, sx, b, sx) + embed(n, a, sy, b, sy)) + jz * embed(n, a, sz, b, sz);
}

/// Dense Hamiltonian J1 sum (SxSx + SySy + delta SzSz) + J2 sum S.S.
inline Mat dense_hamiltonian(const ChainSpec& spec) {
  const int n = spec.n_sites;
  Mat h = Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  const int nn = spec.periodic() ? n : n - 1;
  for (int i = 0; i < nn; ++i) h += spin_bond(n, i, (i + 1) % n, spec.j1, spec.j1 * spec.delta);
  if (spec.j2 != 0.0) {
    const int nnn = spec.periodic() ? n : n - 2;
    for (int i = 0; i < nnn; ++i) h += spin_bond(n, i, (i + 2) % n, spec.j2, spec.j2);
  }
  return h;
}

/// Total spin component along axis 'X', 'Y' or 'Z'.
inline Mat total_spin(int n, char axis) {
  Mat s = Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (int q = 0; q < n; ++q) s += embed(n, q, 0.5 * pauli(axis));
  return s;
}

/// Exact (1/N) sum (-1)^i <S^z_i> from a dense vector; site 0 carries +.
inline double staggered(const Vec& psi, int n) {
  double out = 0.0;
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sz = ((b >> i) & 1) ? -0.5 : 0.5;
      m += (i % 2 == 0) ? sz : -sz;
    }
    out += std::norm(psi(b)) * m / n;
  }
  return out;
}

inline Vec neel(int n) {
  Vec v = Vec::Zero(Eigen::Index{1} << n);
  std::uint64_t idx = 0;
  for (int i = 1; i < n; i += 2) idx |= std::uint64_t{1} << i;
  v(static_cast<Eigen::Index>(idx)) = 1.0;
  return v;
}

/// Chain Hamiltonian restricted to the basis states of Hamming weight `w`,
/// built by acting with S+S- and SzSz on bitstrings.
struct Sector {
  std::vector<std::uint64_t> states;
  Eigen::MatrixXd h;
};

inline Sector sector_hamiltonian(const ChainSpec& spec, int w) {
  const int n = spec.n_sites;
  Sector s;
  std::vector<long> index(std::size_t{1} << n, -1);
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    if (__builtin_popcountll(b) == w) {
      index[b] = static_cast<long>(s.states.size());
      s.states.push_back(b);
    }
  }
  const auto d = static_cast<Eigen::Index>(s.states.size());
  s.h = Eigen::MatrixXd::Zero(d, d);
  std::vector<std::pair<std::pair<int, int>, std::pair<double, double>>> bonds;
  const int nn = spec.periodic() ? n : n - 1;
  for (int i = 0; i < nn; ++i) bonds.push_back({{i, (i + 1) % n}, {spec.j1, spec.j1 * spec.delta}});
  if (spec.j2 != 0.0) {
    const int nnn = spec.periodic() ? n : n - 2;
    for (int i = 0; i < nnn; ++i) bonds.push_back({{i, (i + 2) % n}, {spec.j2, spec.j2}});
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    const std::uint64_t b = s.states[static_cast<std::size_t>(k)];
    for (const auto& [sites, j] : bonds) {
      const auto [a, c] = sites;
      const bool ba = (b >> a) & 1;
      const bool bc = (b >> c) & 1;
      // Sz Sz = +1/4 aligned, -1/4 anti-aligned.
      s.h(k, k) += j.second * (ba == bc ? 0.25 : -0.25);
      if (ba != bc) {
        // (S+S- + S-S+)/2 flips the anti-aligned pair with amplitude 1/2.
        const std::uint64_t flipped = b ^ ((std::uint64_t{1} << a) | (std::uint64_t{1} << c));
        s.h(index[flipped], k) += 0.5 * j.first;
      }
    }
  }
  return s;
}

/// <M_st>(t) from the Neel state by diagonalising the S^z = 0 sector.
inline double sector_staggered_evolution(const ChainSpec& spec, double t) {
  const int n = spec.n_sites;
  const Sector s = sector_hamiltonian(spec, n / 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.h);
  std::uint64_t neel_bits = 0;
  for (int i = 1; i < n; i += 2) neel_bits |= std::uint64_t{1} << i;
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(s.h.rows());
  for (Eigen::Index k = 0; k < e0.size(); ++k) {
    if (s.states[static_cast<std::size_t>(k)] == neel_bits) e0(k) = 1.0;
  }
  const Eigen::VectorXd c = eig.eigenvectors().transpose() * e0;
  Vec ph(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) ph(k) = std::exp(Cplx(0.0, -t * eig.eigenvalues()(k))) * c(k);
  const Vec psi = eig.eigenvectors().cast<Cplx>() * ph;
  double out = 0.0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    const std::uint64_t b = s.states[static_cast<std::size_t>(k)];
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sz = ((b >> i) & 1) ? -0.5 : 0.5;
      m += (i % 2 == 0) ? sz : -sz;
    }
    out += std::norm(psi(k)) * m / n;
  }
  return out;
}

/// Min over global phases of max |a - e^{i phi} b|, gauged at b's largest entry.
inline double phase_distance(const Mat& a, const Mat& b) {
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const Cplx phase = a(r, c) / b(r, c);
  return (a - (phase / std::abs(phase)) * b).cwiseAbs().maxCoeff();
}

inline double phase_frobenius(const Mat& a, const Mat& b) {
  const Cplx overlap = (b.adjoint() * a).trace();
  const Cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Cplx(1.0, 0.0);
  return (a - phase * b).norm();
}

/// Ordered product of exponentials exp(-i dt h) for the J1-J2 step: J1 even
/// bonds, J1 odd bonds, then the two next-nearest groups
/// {(4g, 4g+2), (4g+1, 4g+3)} and {(4g+2, 4g+4), (4g+3, 4g+5)}.
inline Mat dimer_step_oracle(const ChainSpec& spec, double dt) {
  const int n = spec.n_sites;
  const double jxy = spec.j1;
  const double jz = spec.j1 * spec.delta;
  Mat u = Mat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  auto push = [&](int a, int b, double cxy, double cz) { u = expm_hermitian(spin_bond(n, a, b, cxy, cz), dt) * u; };
  for (int i = 0; i + 1 < n; i += 2) push(i, i + 1, jxy, jz);
  for (int i = 1; i + 1 < n; i += 2) push(i, i + 1, jxy, jz);
  if (spec.periodic()) push(n - 1, 0, jxy, jz);
  for (int g = 0; 4 * g < n; ++g) {
    push(4 * g, 4 * g + 2, spec.j2, spec.j2);
    push(4 * g + 1, 4 * g + 3, spec.j2, spec.j2);
  }
  for (int g = 0; 4 * g < n; ++g) {
    for (int off : {2, 3}) {
      const int a = 4 * g + off;
      const int b = a + 2;
      if (b < n) {
        push(a, b, spec.j2, spec.j2);
      } else if (spec.periodic()) {
        push(a, b % n, spec.j2, spec.j2);
      }
    }
  }
  return u;
}

}  // namespace spinlab::oracle
