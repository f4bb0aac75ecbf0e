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

#include "spinlab/trotter.hpp"

#include <fmt/format.h>

#include "spinlab/error.hpp"

namespace spinlab {

namespace {

void even_layer(Circuit& c, int n, const Angles3& theta) {
  for (int i = 0; i + 1 < n; i += 2) c.append(Gate::xyz_block(i, i + 1, theta));
}

void odd_layer(Circuit& c, int n, bool periodic, const Angles3& theta) {
  for (int i = 1; i + 1 < n; i += 2) c.append(Gate::xyz_block(i, i + 1, theta));
  if (periodic) c.append(Gate::xyz_block(n - 1, 0, theta));
}

// Swaps on pairs (k, k+1) with k % 4 == residue; the last pair wraps onto
// (n-1, 0) only under PBC.
void swap_layer(Circuit& c, int n, bool periodic, int residue) {
  for (int k = residue; k < n; k += 4) {
    if (k + 1 < n) {
      c.append(Gate::swap(k, k + 1));
    } else if (periodic) {
      c.append(Gate::swap(n - 1, 0));
    }
  }
}

}  // namespace

const char* to_string(Boundary b) { return b == Boundary::Open ? "obc" : "pbc"; }

const char* to_string(TrotterOrder order) {
  return order == TrotterOrder::First ? "first" : "second-merged";
}

void ChainSpec::validate() const {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw SpecError(fmt::format("n_sites must be even and >= 2, got {}", n_sites));
  }
  if (j2 != 0.0 && n_sites % 4 != 0) {
    throw SpecError(fmt::format("n_sites must be a multiple of 4 when j2 != 0, got {}", n_sites));
  }
  if (!(j1 > 0.0)) throw SpecError("j1 must be positive");
  if (!(j2 >= 0.0)) throw SpecError("j2 must be non-negative");
  if (!(delta >= 0.0)) throw SpecError("delta must be non-negative");
}

void TrotterPlan::validate() const {
  if (steps < 1) throw SpecError(fmt::format("Trotter steps must be >= 1, got {}", steps));
  if (!(dt > 0.0)) throw SpecError("dt must be positive");
}

Angles3 nearest_neighbour_angles(const ChainSpec& spec, double dt) {
  const double jxy = spec.j1 / 4.0;
  const double jz = spec.delta * spec.j1 / 4.0;
  return {2.0 * jxy * dt, 2.0 * jxy * dt, 2.0 * jz * dt};
}

Angles3 next_nearest_angles(const ChainSpec& spec, double dt) {
  const double t = spec.j2 * dt / 2.0;
  return {t, t, t};
}

std::vector<std::pair<int, int>> nearest_neighbour_bonds(const ChainSpec& spec) {
  std::vector<std::pair<int, int>> bonds;
  const int n = spec.n_sites;
  for (int i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
  if (spec.periodic()) bonds.emplace_back(n - 1, 0);
  return bonds;
}

std::vector<std::pair<int, int>> next_nearest_bonds(const ChainSpec& spec) {
  std::vector<std::pair<int, int>> bonds;
  const int n = spec.n_sites;
  for (int i = 0; i + 2 < n; ++i) bonds.emplace_back(i, i + 2);
  if (spec.periodic()) {
    bonds.emplace_back(n - 2, 0);
    bonds.emplace_back(n - 1, 1);
  }
  return bonds;
}

Circuit build_first_order(const ChainSpec& spec, const TrotterPlan& plan) {
  spec.validate();
  plan.validate();
  if (plan.order != TrotterOrder::First) throw SpecError("build_first_order needs order = first");
  const int n = spec.n_sites;
  const Angles3 theta = nearest_neighbour_angles(spec, plan.dt);
  Circuit c(n, CircuitLevel::Block);
  for (int m = 0; m < plan.steps; ++m) {
    even_layer(c, n, theta);
    odd_layer(c, n, spec.periodic(), theta);
    c.mark_step_end();
  }
  return c;
}

Circuit build_second_order_merged(const ChainSpec& spec, const TrotterPlan& plan) {
  spec.validate();
  plan.validate();
  if (plan.order != TrotterOrder::SecondMerged) {
    throw SpecError("build_second_order_merged needs order = second-merged");
  }
  if (spec.j2 != 0.0) {
    throw UnsupportedError("second-order circuits are only available for j2 = 0");
  }
  const int n = spec.n_sites;
  const Angles3 theta = nearest_neighbour_angles(spec, plan.dt);
  const Angles3 half = 0.5 * theta;
  Circuit c(n, CircuitLevel::Block);
  for (int m = 0; m < plan.steps; ++m) {
    // The even layer opening step m > 0 absorbs the closing half layer of step m - 1.
    even_layer(c, n, m == 0 ? half : theta);
    odd_layer(c, n, spec.periodic(), theta);
    c.mark_step_end();
  }
  even_layer(c, n, half);
  return c;
}

Circuit build_dimer_step(const ChainSpec& spec, const TrotterPlan& plan) {
  spec.validate();
  plan.validate();
  if (plan.order != TrotterOrder::First) {
    throw UnsupportedError("J2 circuits are only available at first order");
  }
  if (!(spec.j2 > 0.0)) throw SpecError("build_dimer_step requires j2 > 0");
  const int n = spec.n_sites;
  const bool pbc = spec.periodic();
  const Angles3 theta1 = nearest_neighbour_angles(spec, plan.dt);
  const Angles3 theta2 = next_nearest_angles(spec, plan.dt);
  Circuit c(n, CircuitLevel::Block);
  for (int m = 0; m < plan.steps; ++m) {
    even_layer(c, n, theta1);
    odd_layer(c, n, pbc, theta1);

    // After swapping (1,2) mod 4, even pairs hold (4g, 4g+2) and (4g+1, 4g+3).
    swap_layer(c, n, pbc, 1);
    even_layer(c, n, theta2);

    // Undo (1,2), then swap (3,4) mod 4: even pairs now hold (4g+2, 4g+4) and
    // (4g+3, 4g+5). Under OBC the first and last pairs still hold nearest
    // neighbours and are skipped.
    swap_layer(c, n, pbc, 1);
    swap_layer(c, n, pbc, 3);
    for (int i = 0; i + 1 < n; i += 2) {
      if (!pbc && (i == 0 || i == n - 2)) continue;
      c.append(Gate::xyz_block(i, i + 1, theta2));
    }
    swap_layer(c, n, pbc, 3);
    c.mark_step_end();
  }
  return c;
}

Circuit build_trotter(const ChainSpec& spec, const TrotterPlan& plan) {
  if (spec.j2 != 0.0) return build_dimer_step(spec, plan);
  return plan.order == TrotterOrder::First ? build_first_order(spec, plan)
                                           : build_second_order_merged(spec, plan);
}

StepDepth depth_per_step(const ChainSpec& spec, const TrotterPlan& plan) {
  TrotterPlan one = plan;
  one.steps = 1;
  TrotterPlan two = plan;
  two.steps = 2;
  const int d1 = depth(build_trotter(spec, one));
  const int d2 = depth(build_trotter(spec, two));
  return {d2 - d1, 2 * d1 - d2};
}

}  // namespace spinlab
