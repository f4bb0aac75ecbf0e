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

// Block-level Trotter circuits for the J1-J2 Heisenberg chain.

#pragma once

#include <utility>
#include <vector>

#include "spinlab/circuit.hpp"

namespace spinlab {

enum class Boundary { Open, Periodic };

const char* to_string(Boundary b);

/// Chain of n_sites spin-1/2 sites with nearest-neighbour coupling j1,
/// anisotropy delta and next-nearest-neighbour coupling j2.
struct ChainSpec {
  int n_sites = 0;
  Boundary boundary = Boundary::Open;
  double j1 = 1.0;
  double j2 = 0.0;
  double delta = 1.0;

  bool periodic() const { return boundary == Boundary::Periodic; }

  /// Throws SpecError unless n_sites is even and >= 2, n_sites % 4 == 0 when
  /// j2 != 0, and j1 > 0, j2 >= 0, delta >= 0.
  void validate() const;
};

enum class TrotterOrder { First, SecondMerged };

const char* to_string(TrotterOrder order);

struct TrotterPlan {
  TrotterOrder order = TrotterOrder::First;
  int steps = 1;
  double dt = 0.1;

  void validate() const;
};

/// theta = (2 Jx dt, 2 Jy dt, 2 Jz dt) with Jx = Jy = J1/4, Jz = delta J1/4.
Angles3 nearest_neighbour_angles(const ChainSpec& spec, double dt);
/// theta_2 = (J2 dt / 2) (1, 1, 1).
Angles3 next_nearest_angles(const ChainSpec& spec, double dt);

/// Nearest-neighbour bonds (i, i+1), with (n-1, 0) under PBC.
std::vector<std::pair<int, int>> nearest_neighbour_bonds(const ChainSpec& spec);
/// Next-nearest-neighbour bonds (i, i+2); under PBC also (n-2, 0), (n-1, 1).
std::vector<std::pair<int, int>> next_nearest_bonds(const ChainSpec& spec);

/// M x [even layer, odd layer]; 2M layers.
Circuit build_first_order(const ChainSpec& spec, const TrotterPlan& plan);

/// Ue(t/2) Uo(t) Ue(t) Uo(t) ... Uo(t) Ue(t/2); 2M + 1 layers. Requires j2 == 0.
Circuit build_second_order_merged(const ChainSpec& spec, const TrotterPlan& plan);

/// First-order J1-J2 step: J1 even/odd layers followed by the swap-network
/// J2 sub-circuit. Each step leaves the qubit labelling unchanged.
Circuit build_dimer_step(const ChainSpec& spec, const TrotterPlan& plan);

/// Dispatches on (j2, order).
Circuit build_trotter(const ChainSpec& spec, const TrotterPlan& plan);

struct StepDepth {
  int per_step = 0;
  /// Extra layers after the last step (1 for merged second order).
  int closing = 0;
};

/// Block-level layers added per Trotter step; independent of n_sites.
StepDepth depth_per_step(const ChainSpec& spec, const TrotterPlan& plan);

}  // namespace spinlab
