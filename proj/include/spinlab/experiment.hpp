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

// Config-driven experiment runner, series comparison and the gate-count
// tables.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinlab/mitigation.hpp"
#include "spinlab/mps.hpp"
#include "spinlab/statevector.hpp"
#include "spinlab/trotter.hpp"

namespace spinlab {

inline constexpr int kSchemaVersion = 1;

enum class Backend { Statevector, Mps, ExactOracle };
const char* to_string(Backend b);

struct ExperimentConfig {
  ChainSpec chain;
  TrotterPlan plan;
  std::optional<double> target_time;
  std::vector<Backend> backends{Backend::Statevector};
  MpsOptions mps;
  KrylovOptions krylov;
  std::optional<MitigationPlan> mitigation;
  std::filesystem::path output_dir = ".";
  std::string csv_name = "series.csv";
  std::string json_name = "series.json";
  std::uint64_t seed = 0;

  bool uses(Backend b) const;
  /// Throws SpecError/ConfigError/CapacityError for invalid combinations.
  void validate() const;
};

/// INI text with sections [chain], [plan], [backend], [mitigation], [output].
/// Unknown sections and keys are rejected with ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct SeriesRow {
  int step = 0;
  double t = 0.0;
  std::optional<double> raw_s1, raw_s3, raw_s5;
  std::optional<double> zne;
  std::optional<double> exact;
  std::optional<double> mps;
  std::optional<double> discarded_weight;
  std::optional<double> statevector;
  std::optional<int> max_bond_dim;
};

struct ResultSeries {
  ExperimentConfig config;
  double initial_value = 0.0;
  std::size_t cnot_count = 0;
  int depth = 0;
  std::vector<SeriesRow> rows;
  std::optional<PipelineResult> mitigation;
  int krylov_substeps = 0;
};

/// Builds the circuit once and records every requested backend after each
/// Trotter step.
ResultSeries run_experiment(const ExperimentConfig& config);

inline constexpr const char* kCsvColumns[] = {
    "step", "t", "value_raw_s1", "value_raw_s3", "value_raw_s5", "value_zne",
    "value_exact", "value_mps", "discarded_weight", "value_statevector"};

std::string to_csv(const ResultSeries& series);
std::string to_json(const ResultSeries& series);

/// Writes CSV and JSON into config.output_dir via temporary files and renames.
void write_outputs(const ResultSeries& series);
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Parsed numeric column; empty cells are nullopt. Throws ConfigError for
  /// a missing column.
  std::vector<std::optional<double>> column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable load_csv(const std::filesystem::path& path);

struct CompareReport {
  std::string column_a;
  std::string column_b;
  std::vector<double> t;
  std::vector<double> deviation;
  double max_deviation = 0.0;
  double mean_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// First column among value_zne, value_statevector, value_mps, value_exact
/// with at least one value.
std::string default_value_column(const CsvTable& table);

/// Per-time absolute deviations. Throws SpecError when the time grids differ.
CompareReport compare(const CsvTable& a, const CsvTable& b, double tolerance,
                      std::string column_a = {}, std::string column_b = {});
std::string format_report(const CompareReport& report);

struct TablesReport {
  std::string text;
  bool table_match = false;
  bool dimer_linear = false;
  bool depth_constant = false;
  bool ok() const { return table_match && dimer_linear && depth_constant; }
};

/// CNOT table for the merged second-order isotropic circuits with a diff
/// against the reference values, raw Dimer counts and per-step depths.
TablesReport emit_tables();

/// Reference CNOT counts for steps 1..8: N=20 OBC, N=100 OBC, N=20 PBC, N=96 PBC.
struct GoldenColumn {
  int n_sites;
  Boundary boundary;
  std::array<int, 8> cnots;
};
extern const std::array<GoldenColumn, 4> kGoldenCnotTable;

}  // namespace spinlab
