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

#include <fmt/format.h>

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinlab/error.hpp"
#include "spinlab/experiment.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,
  kConfig = 2,
  kCapacity = 3,
  kNumerical = 4,
  kOther = 5,
};

int exit_code_for(const spinlab::Error& e) {
  if (dynamic_cast<const spinlab::CapacityError*>(&e)) return kCapacity;
  if (dynamic_cast<const spinlab::NumericalError*>(&e)) return kNumerical;
  if (dynamic_cast<const spinlab::ConfigError*>(&e) || dynamic_cast<const spinlab::SpecError*>(&e) ||
      dynamic_cast<const spinlab::UnsupportedError*>(&e) || dynamic_cast<const spinlab::IndexError*>(&e)) {
    return kConfig;
  }
  return kOther;
}

int report_error(const char* kind, const std::string& message, int code) {
  nlohmann::ordered_json record{{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << record.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinlab: Trotter circuits, simulators and error mitigation for Heisenberg chains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run an experiment config and write CSV/JSON");
  run->add_option("--config", config_path, "Experiment config (INI)")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Override the RNG seed");
  auto* out_opt = run->add_option("--out", out_dir, "Override the output directory");

  auto* tables = app.add_subcommand("tables", "Regenerate the CNOT-count and depth tables");

  std::string csv_a;
  std::string csv_b;
  double tol = 0.0;
  std::string col_a;
  std::string col_b;
  auto* cmp = app.add_subcommand("compare", "Compare two result CSVs on a shared time grid");
  cmp->add_option("a", csv_a, "First CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("b", csv_b, "Second CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--tol", tol, "Maximum allowed absolute deviation")->required();
  cmp->add_option("--col-a", col_a, "Column of A (default: first populated value column)");
  cmp->add_option("--col-b", col_b, "Column of B (default: first populated value column)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) {
      spinlab::ExperimentConfig cfg = spinlab::load_config(config_path);
      if (*seed_opt) cfg.seed = seed;
      if (*out_opt) cfg.output_dir = out_dir;
      const auto series = spinlab::run_experiment(cfg);
      spinlab::write_outputs(series);
      fmt::print("wrote {} and {} ({} rows)\n", (cfg.output_dir / cfg.csv_name).string(),
                 (cfg.output_dir / cfg.json_name).string(), series.rows.size());
      return kOk;
    }
    if (*tables) {
      const auto report = spinlab::emit_tables();
      fmt::print("{}", report.text);
      return report.ok() ? kOk : kMismatch;
    }
    if (*cmp) {
      const auto report = spinlab::compare(spinlab::load_csv(csv_a), spinlab::load_csv(csv_b), tol, col_a, col_b);
      fmt::print("{}", spinlab::format_report(report));
      return report.pass ? kOk : kMismatch;
    }
  } catch (const spinlab::Error& e) {
    return report_error(e.kind(), e.what(), exit_code_for(e));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kOther);
  }
  return kOther;
}
