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

// Matrix-product-state circuit simulator with SVD truncation.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "spinlab/circuit.hpp"
#include "spinlab/statevector.hpp"

namespace spinlab {

struct MpsOptions {
  int chi_max = 256;
  /// Singular values with s^2 / sum(s^2) below this are discarded. Zero
  /// means exact: exceeding chi_max then raises CapacityError.
  double svd_cutoff = 1e-12;
};

/// Tensor train with physical dimension 2. Site i holds two matrices
/// A_i[s] of shape (bond_{i} x bond_{i+1}); bond_0 = bond_N = 1.
///
/// The state is kept in mixed canonical form around center(): sites to the
/// left are left-orthonormal and sites to the right are right-orthonormal.
class MpsState {
 public:
  /// Computational basis product state |bits>, site i = bit i.
  static MpsState product_state(int n_sites, std::uint64_t bits, MpsOptions options = {});
  static MpsState product_state(const std::vector<int>& bits, MpsOptions options = {});

  int n_sites() const { return static_cast<int>(tensors_.size()); }
  const MpsOptions& options() const { return options_; }
  int center() const { return center_; }

  /// Dimension of the link between site `link` and `link + 1`.
  int bond_dim(int link) const;
  std::vector<int> bond_dims() const;
  int max_bond_dim() const;

  /// Discarded weight of every two-site update, in application order.
  const std::vector<double>& truncation_log() const { return truncation_log_; }
  double total_discarded_weight() const { return total_discarded_; }

  /// Applies a single- or two-qubit gate. Non-adjacent pairs (including the
  /// periodic (n-1, 0) pair) are routed with swap chains.
  void apply(const Gate& gate);
  void apply_single(int site, const Matrix2& m);
  /// `m` in the local basis s_site + 2 s_{site+1}.
  void apply_adjacent(int site, const Matrix4& m);

  void move_center(int site);
  /// <Z_site>.
  double expectation_z(int site);
  double norm();

  /// Dense amplitudes; intended for small chains in tests.
  StateVector to_statevector(int max_qubits = 20) const;

  /// Sequential sampling in the computational basis.
  Counts sample(std::uint64_t shots, std::mt19937_64& rng);

  /// Text checkpoint: a versioned header followed by the tensors.
  void save(std::ostream& out) const;
  static MpsState load(std::istream& in);

 private:
  using SiteTensor = std::array<Eigen::MatrixXcd, 2>;

  MpsState() = default;
  void apply_pair(int a, int b, const Matrix4& m);

  std::vector<SiteTensor> tensors_;
  MpsOptions options_;
  int center_ = 0;
  std::vector<double> truncation_log_;
  double total_discarded_ = 0.0;
};

MpsState mps_init_neel(int n_sites, MpsOptions options = {});

/// Applies every gate in order; block-level gates go in as 4x4 matrices.
void mps_apply(const Circuit& circuit, MpsState& mps);
void mps_apply(std::span<const Gate> gates, MpsState& mps);

/// (1/N) sum_i (-1)^i <S^z_i>. Moves the orthogonality center.
double mps_staggered_magnetization(MpsState& mps);

}  // namespace spinlab
