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

#include "spinlab/mitigation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "spinlab/error.hpp"

namespace spinlab {

namespace {

struct JobOutput {
  // [step] -> (raw, mitigated)
  std::vector<double> raw;
  std::vector<double> mitigated;
};

std::mt19937_64 job_rng(std::uint64_t seed, std::size_t scale_index, std::size_t copy) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(scale_index), static_cast<std::uint32_t>(copy)};
  return std::mt19937_64(seq);
}

void mean_and_stderr(const std::vector<double>& v, double& mean, double& stderr_out) {
  const double n = static_cast<double>(v.size());
  mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) {
    stderr_out = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  stderr_out = std::sqrt(ss / (n - 1.0) / n);
}

JobOutput run_job(const Circuit& lowered, const StateVector& initial, const MitigationPlan& plan,
                  int scale, std::mt19937_64& rng) {
  static const TwirlSet set = find_twirl_set();
  Circuit circuit = fold(lowered, scale);
  if (plan.twirling) circuit = twirl_once(circuit, set, rng);

  const std::size_t n_steps = circuit.step_ends().size();
  const int n = initial.n_qubits();
  const bool deterministic = plan.noise.gate_noise_free();
  const auto trajectories = static_cast<std::uint64_t>(
      deterministic ? 1 : std::min<std::uint64_t>(plan.shots, static_cast<std::uint64_t>(plan.trajectories)));

  std::vector<Counts> counts(n_steps);
  for (std::uint64_t tr = 0; tr < trajectories; ++tr) {
    const std::uint64_t shots = plan.shots / trajectories + (tr < plan.shots % trajectories ? 1 : 0);
    StateVector state = initial;
    for (std::size_t s = 0; s < n_steps; ++s) {
      apply_noisy(circuit.step_gates(s), plan.noise, state, rng);
      StateVector measured = state;
      apply_noisy(circuit.closing_gates(), plan.noise, measured, rng);
      for (const auto& [bits, c] : sample(measured, shots, rng)) counts[s][bits] += c;
    }
  }

  JobOutput out;
  for (std::size_t s = 0; s < n_steps; ++s) {
    const Counts observed = readout_corrupt(counts[s], plan.noise.readout, rng);
    out.raw.push_back(staggered_magnetization(observed, n));
    out.mitigated.push_back(plan.readout_mitigation && !plan.noise.readout.empty()
                                ? m3_mitigate(observed, plan.noise.readout, n)
                                : out.raw.back());
  }
  return out;
}

}  // namespace

void MitigationPlan::validate(int n_qubits) const {
  noise.validate();
  if (!noise.readout.empty() && static_cast<int>(noise.readout.size()) != n_qubits) {
    throw SpecError(fmt::format("readout model has {} entries for {} qubits", noise.readout.size(), n_qubits));
  }
  if (twirl_copies < 1) throw SpecError("twirl_copies must be >= 1");
  if (trajectories < 1) throw SpecError("trajectories must be >= 1");
  if (shots < 1) throw SpecError("shots must be >= 1");
  if (threads < 0) throw SpecError("threads must be >= 0");
  if (fold_scales.empty()) throw SpecError("fold_scales must not be empty");
  for (std::size_t i = 0; i < fold_scales.size(); ++i) {
    if (fold_scales[i] < 1 || fold_scales[i] % 2 == 0) {
      throw SpecError(fmt::format("fold scale {} is not an odd positive integer", fold_scales[i]));
    }
    if (i > 0 && fold_scales[i] <= fold_scales[i - 1]) throw SpecError("fold_scales must be ascending");
  }
  if (fold_scales.size() < 3) throw SpecError("quadratic extrapolation needs at least 3 fold scales");
}

PipelineResult run_mitigation_pipeline(const Circuit& lowered, const StateVector& initial,
                                       const MitigationPlan& plan) {
  if (lowered.level() != CircuitLevel::Lowered) throw SpecError("mitigation pipeline expects a lowered circuit");
  if (lowered.n_qubits() != initial.n_qubits()) throw SpecError("circuit/state size mismatch");
  if (lowered.step_ends().empty()) throw SpecError("circuit has no Trotter-step boundaries");
  plan.validate(lowered.n_qubits());

  const std::size_t n_scales = plan.fold_scales.size();
  const auto copies = static_cast<std::size_t>(plan.twirl_copies);
  const std::size_t n_jobs = n_scales * copies;
  std::vector<JobOutput> outputs(n_jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      try {
        const std::size_t si = job / copies;
        auto rng = job_rng(plan.seed, si, job % copies);
        outputs[job] = run_job(lowered, initial, plan, plan.fold_scales[si], rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned n_threads = plan.threads > 0 ? static_cast<unsigned>(plan.threads)
                                        : std::max(1U, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_jobs));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> scales_d(plan.fold_scales.begin(), plan.fold_scales.end());
  const auto weights = zne_weights(scales_d);
  PipelineResult result;
  const std::size_t n_steps = lowered.step_ends().size();
  for (std::size_t s = 0; s < n_steps; ++s) {
    StepEstimate step;
    step.step = static_cast<int>(s) + 1;
    std::vector<double> means;
    double variance = 0.0;
    for (std::size_t si = 0; si < n_scales; ++si) {
      ScaleEstimate e;
      e.scale = plan.fold_scales[si];
      for (std::size_t c = 0; c < copies; ++c) {
        e.raw.push_back(outputs[si * copies + c].raw[s]);
        e.mitigated.push_back(outputs[si * copies + c].mitigated[s]);
      }
      mean_and_stderr(e.raw, e.raw_mean, e.raw_stderr);
      mean_and_stderr(e.mitigated, e.mitigated_mean, e.mitigated_stderr);
      means.push_back(e.mitigated_mean);
      variance += weights[si] * weights[si] * e.mitigated_stderr * e.mitigated_stderr;
      step.scales.push_back(std::move(e));
    }
    step.zne = zne_extrapolate(means, scales_d);
    step.zne_stderr = std::sqrt(variance);
    result.steps.push_back(std::move(step));
  }
  return result;
}

}  // namespace spinlab
