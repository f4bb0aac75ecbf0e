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

#include "spinlab/experiment.hpp"

#include <fmt/format.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spinlab/error.hpp"

namespace spinlab {

namespace {

namespace pt = boost::property_tree;
using ordered_json = nlohmann::ordered_json;

const std::map<std::string, std::set<std::string>, std::less<>> kAllowedKeys = {
    {"chain", {"sites", "boundary", "j1", "j2", "delta"}},
    {"plan", {"order", "dt", "steps", "target_time"}},
    {"backend", {"backends", "chi_max", "svd_cutoff", "krylov_dim", "krylov_tol"}},
    {"mitigation",
     {"enabled", "depolarizing", "zz_overrotation", "readout_p01", "readout_p10", "twirl_copies",
      "fold_scales", "shots", "trajectories", "readout_mitigation", "twirling",
      "dynamical_decoupling", "seed", "threads"}},
    {"output", {"dir", "csv", "json"}},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view where) {
  const std::string s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", where, s));
  }
  return value;
}

bool parse_bool(std::string_view text, std::string_view where) {
  const std::string s = trim(text);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", where, s));
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> raw(const char* key) const {
    if (tree_ == nullptr) return std::nullopt;
    const auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }
  std::string where(const char* key) const { return fmt::format("[{}] {}", name_, key); }

  template <typename T>
  void number(const char* key, T& out) const {
    if (auto v = raw(key)) out = parse_number<T>(*v, where(key));
  }
  void boolean(const char* key, bool& out) const {
    if (auto v = raw(key)) out = parse_bool(*v, where(key));
  }
  template <typename T>
  std::vector<T> numbers(const char* key) const {
    std::vector<T> out;
    if (auto v = raw(key)) {
      for (const auto& item : split(*v, ',')) out.push_back(parse_number<T>(item, where(key)));
    }
    return out;
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

std::optional<double> mean_if(const ScaleEstimate& e, bool mitigated) {
  return mitigated ? e.mitigated_mean : e.raw_mean;
}

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string csv_cell(const std::optional<double>& v) { return v ? fmt::format("{:.17g}", *v) : std::string(); }

}  // namespace

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Statevector: return "statevector";
    case Backend::Mps: return "mps";
    case Backend::ExactOracle: return "exact-oracle";
  }
  return "?";
}

bool ExperimentConfig::uses(Backend b) const {
  return std::find(backends.begin(), backends.end(), b) != backends.end();
}

void ExperimentConfig::validate() const {
  chain.validate();
  plan.validate();
  if (backends.empty()) throw ConfigError("no backend selected");
  if (target_time && std::abs(*target_time - plan.steps * plan.dt) > 1e-9 * std::max(1.0, *target_time)) {
    throw ConfigError(fmt::format("target_time {} != steps {} x dt {}", *target_time, plan.steps, plan.dt));
  }
  if (chain.j2 != 0.0 && plan.order != TrotterOrder::First) {
    throw UnsupportedError("second-order circuits are only built for j2 = 0");
  }
  if (uses(Backend::Statevector) && chain.n_sites > kMaxStatevectorQubits) {
    throw CapacityError(fmt::format("statevector backend limited to {} sites, got {}", kMaxStatevectorQubits,
                                    chain.n_sites));
  }
  if (uses(Backend::ExactOracle) && chain.n_sites > krylov.max_qubits) {
    throw CapacityError(fmt::format("exact oracle limited to {} sites, got {}", krylov.max_qubits, chain.n_sites));
  }
  if (mitigation) {
    if (chain.n_sites > kMaxStatevectorQubits) {
      throw CapacityError("mitigation runs on the statevector backend; too many sites");
    }
    mitigation->validate(chain.n_sites);
  }
  if (mps.chi_max < 1) throw ConfigError("chi_max must be >= 1");
  if (mps.svd_cutoff < 0.0) throw ConfigError("svd_cutoff must be >= 0");
  if (krylov.krylov_dim < 2) throw ConfigError("krylov_dim must be >= 2");
  if (!(krylov.tolerance > 0.0)) throw ConfigError("krylov_tol must be > 0");
}

ExperimentConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }
  for (const auto& [section, body] : tree) {
    const auto allowed = kAllowedKeys.find(section);
    if (allowed == kAllowedKeys.end()) {
      throw ConfigError(body.empty() ? fmt::format("key '{}' outside any section", section)
                                     : fmt::format("unknown section [{}]", section));
    }
    for (const auto& [key, value] : body) {
      if (!allowed->second.contains(key)) throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, section));
    }
  }
  auto section = [&](const char* name) {
    const auto child = tree.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
  };

  ExperimentConfig cfg;
  const Section chain = section("chain");
  if (!chain.raw("sites")) throw ConfigError("[chain] sites is required");
  chain.number("sites", cfg.chain.n_sites);
  if (auto b = chain.raw("boundary")) {
    if (*b == "obc" || *b == "open") {
      cfg.chain.boundary = Boundary::Open;
    } else if (*b == "pbc" || *b == "periodic") {
      cfg.chain.boundary = Boundary::Periodic;
    } else {
      throw ConfigError(fmt::format("[chain] boundary: expected obc or pbc, got '{}'", *b));
    }
  }
  chain.number("j1", cfg.chain.j1);
  chain.number("j2", cfg.chain.j2);
  chain.number("delta", cfg.chain.delta);

  const Section plan = section("plan");
  if (auto o = plan.raw("order")) {
    if (*o == "first") {
      cfg.plan.order = TrotterOrder::First;
    } else if (*o == "second-merged" || *o == "second") {
      cfg.plan.order = TrotterOrder::SecondMerged;
    } else {
      throw ConfigError(fmt::format("[plan] order: expected first or second-merged, got '{}'", *o));
    }
  }
  plan.number("dt", cfg.plan.dt);
  if (plan.raw("target_time")) {
    double target = 0.0;
    plan.number("target_time", target);
    cfg.target_time = target;
  }
  if (plan.raw("steps")) {
    plan.number("steps", cfg.plan.steps);
  } else if (cfg.target_time) {
    if (!(cfg.plan.dt > 0.0)) throw ConfigError("[plan] dt must be > 0");
    cfg.plan.steps = static_cast<int>(std::lround(*cfg.target_time / cfg.plan.dt));
  } else {
    throw ConfigError("[plan] needs steps or target_time");
  }

  const Section backend = section("backend");
  if (auto list = backend.raw("backends")) {
    cfg.backends.clear();
    for (const auto& name : split(*list, ',')) {
      if (name == "statevector") {
        cfg.backends.push_back(Backend::Statevector);
      } else if (name == "mps") {
        cfg.backends.push_back(Backend::Mps);
      } else if (name == "exact-oracle" || name == "exact") {
        cfg.backends.push_back(Backend::ExactOracle);
      } else {
        throw ConfigError(fmt::format("[backend] backends: unknown backend '{}'", name));
      }
    }
  }
  backend.number("chi_max", cfg.mps.chi_max);
  backend.number("svd_cutoff", cfg.mps.svd_cutoff);
  backend.number("krylov_dim", cfg.krylov.krylov_dim);
  backend.number("krylov_tol", cfg.krylov.tolerance);

  const Section mit = section("mitigation");
  bool enabled = false;
  mit.boolean("enabled", enabled);
  mit.number("seed", cfg.seed);
  if (enabled) {
    MitigationPlan m;
    mit.number("depolarizing", m.noise.two_qubit_depolarizing);
    mit.number("zz_overrotation", m.noise.coherent_zz_overrotation);
    const auto p01 = mit.numbers<double>("readout_p01");
    const auto p10 = mit.numbers<double>("readout_p10");
    if (!p01.empty() || !p10.empty()) {
      const auto n = static_cast<std::size_t>(cfg.chain.n_sites);
      auto expand = [&](const std::vector<double>& v, const char* key) {
        if (v.empty()) return std::vector<double>(n, 0.0);
        if (v.size() == 1) return std::vector<double>(n, v[0]);
        if (v.size() != n) throw ConfigError(fmt::format("[mitigation] {} needs 1 or {} values", key, n));
        return v;
      };
      const auto a = expand(p01, "readout_p01");
      const auto b = expand(p10, "readout_p10");
      for (std::size_t q = 0; q < n; ++q) m.noise.readout.push_back({a[q], b[q]});
    }
    mit.number("twirl_copies", m.twirl_copies);
    if (mit.raw("fold_scales")) m.fold_scales = mit.numbers<int>("fold_scales");
    mit.number("shots", m.shots);
    mit.number("trajectories", m.trajectories);
    mit.boolean("readout_mitigation", m.readout_mitigation);
    mit.boolean("twirling", m.twirling);
    mit.boolean("dynamical_decoupling", m.dynamical_decoupling);
    mit.number("threads", m.threads);
    cfg.mitigation = m;
  }

  const Section output = section("output");
  if (auto d = output.raw("dir")) cfg.output_dir = *d;
  if (auto c = output.raw("csv")) cfg.csv_name = *c;
  if (auto j = output.raw("json")) cfg.json_name = *j;

  try {
    cfg.validate();
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ResultSeries run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int n = config.chain.n_sites;
  const int steps = config.plan.steps;
  const double dt = config.plan.dt;

  const Circuit block = build_trotter(config.chain, config.plan);
  const Circuit lowered = lower(block);

  ResultSeries series;
  series.config = config;
  series.cnot_count = cnot_count(lowered);
  series.depth = depth(lowered);
  {
    MpsState neel = mps_init_neel(n);
    series.initial_value = mps_staggered_magnetization(neel);
  }
  for (int k = 1; k <= steps; ++k) {
    SeriesRow row;
    row.step = k;
    row.t = k * dt;
    series.rows.push_back(row);
  }

  if (config.uses(Backend::Statevector)) {
    StateVector state = init_neel(n);
    for (int k = 0; k < steps; ++k) {
      apply(block.step_gates(static_cast<std::size_t>(k)), state);
      StateVector measured = state;
      apply(block.closing_gates(), measured);
      series.rows[static_cast<std::size_t>(k)].statevector = staggered_magnetization(measured);
    }
  }

  if (config.uses(Backend::Mps)) {
    MpsState mps = mps_init_neel(n, config.mps);
    const bool closing = !block.closing_gates().empty();
    for (int k = 0; k < steps; ++k) {
      mps_apply(block.step_gates(static_cast<std::size_t>(k)), mps);
      auto& row = series.rows[static_cast<std::size_t>(k)];
      if (closing) {
        MpsState measured = mps;
        mps_apply(block.closing_gates(), measured);
        row.mps = mps_staggered_magnetization(measured);
        row.discarded_weight = measured.total_discarded_weight();
        row.max_bond_dim = measured.max_bond_dim();
      } else {
        row.mps = mps_staggered_magnetization(mps);
        row.discarded_weight = mps.total_discarded_weight();
        row.max_bond_dim = mps.max_bond_dim();
      }
    }
  }

  if (config.uses(Backend::ExactOracle)) {
    const HamiltonianTerms terms = hamiltonian_terms(config.chain);
    StateVector state = init_neel(n);
    for (int k = 0; k < steps; ++k) {
      KrylovReport report;
      state = exact_evolve(terms, state, dt, config.krylov, &report);
      series.krylov_substeps += report.substeps;
      series.rows[static_cast<std::size_t>(k)].exact = staggered_magnetization(state);
    }
  }

  if (config.mitigation) {
    MitigationPlan plan = *config.mitigation;
    plan.seed = config.seed;
    series.mitigation = run_mitigation_pipeline(lowered, init_neel(n), plan);
    for (const auto& est : series.mitigation->steps) {
      auto& row = series.rows[static_cast<std::size_t>(est.step - 1)];
      row.zne = est.zne;
      for (const auto& s : est.scales) {
        if (s.scale == 1) row.raw_s1 = mean_if(s, false);
        if (s.scale == 3) row.raw_s3 = mean_if(s, false);
        if (s.scale == 5) row.raw_s5 = mean_if(s, false);
      }
    }
  }
  return series;
}

std::string to_csv(const ResultSeries& series) {
  std::string out;
  for (std::size_t i = 0; i < std::size(kCsvColumns); ++i) {
    out += kCsvColumns[i];
    out += i + 1 < std::size(kCsvColumns) ? ',' : '\n';
  }
  for (const auto& r : series.rows) {
    out += fmt::format("{},{:.17g},{},{},{},{},{},{},{},{}\n", r.step, r.t, csv_cell(r.raw_s1), csv_cell(r.raw_s3),
                       csv_cell(r.raw_s5), csv_cell(r.zne), csv_cell(r.exact), csv_cell(r.mps),
                       csv_cell(r.discarded_weight), csv_cell(r.statevector));
  }
  return out;
}

std::string to_json(const ResultSeries& series) {
  const ExperimentConfig& c = series.config;
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["generator"] = "spinlab 0.1.0";

  ordered_json cfg;
  cfg["chain"] = {{"sites", c.chain.n_sites},
                  {"boundary", to_string(c.chain.boundary)},
                  {"j1", c.chain.j1},
                  {"j2", c.chain.j2},
                  {"delta", c.chain.delta}};
  cfg["plan"] = {{"order", to_string(c.plan.order)}, {"dt", c.plan.dt}, {"steps", c.plan.steps}};
  ordered_json backends = ordered_json::array();
  for (Backend b : c.backends) backends.push_back(to_string(b));
  cfg["backends"] = backends;
  cfg["mps"] = {{"chi_max", c.mps.chi_max}, {"svd_cutoff", c.mps.svd_cutoff}};
  cfg["krylov"] = {{"krylov_dim", c.krylov.krylov_dim}, {"tolerance", c.krylov.tolerance}};
  if (c.mitigation) {
    const MitigationPlan& m = *c.mitigation;
    ordered_json readout = ordered_json::array();
    for (const auto& r : m.noise.readout) readout.push_back({r.p01, r.p10});
    cfg["mitigation"] = {{"depolarizing", m.noise.two_qubit_depolarizing},
                         {"zz_overrotation", m.noise.coherent_zz_overrotation},
                         {"readout", readout},
                         {"twirl_copies", m.twirl_copies},
                         {"fold_scales", m.fold_scales},
                         {"shots", m.shots},
                         {"trajectories", m.trajectories},
                         {"twirling", m.twirling},
                         {"readout_mitigation", m.readout_mitigation},
                         {"dynamical_decoupling", m.dynamical_decoupling},
                         {"extrapolation", "quadratic least squares at scale 0 over copy-averaged values"}};
  } else {
    cfg["mitigation"] = nullptr;
  }
  cfg["seed"] = c.seed;
  j["config"] = cfg;
  j["circuit"] = {{"cnot_count", series.cnot_count}, {"depth", series.depth}};

  ordered_json columns;
  columns["value_raw_s1"] = "statevector with synthetic noise, fold scale 1, twirl-copy mean, no readout mitigation";
  columns["value_raw_s3"] = "as value_raw_s1 at fold scale 3";
  columns["value_raw_s5"] = "as value_raw_s1 at fold scale 5";
  columns["value_zne"] = "quadratic extrapolation of readout-mitigated twirl-copy means; quasi-probabilities not clipped";
  columns["value_exact"] = "exact-oracle: Krylov exp(-iHt) on the Neel state";
  columns["value_mps"] = "mps: circuit evolution with SVD truncation";
  columns["discarded_weight"] = "mps: accumulated discarded weight";
  columns["value_statevector"] = "statevector: noiseless Trotter circuit";
  j["columns"] = columns;
  j["initial_value"] = series.initial_value;
  j["krylov_substeps"] = series.krylov_substeps;

  ordered_json rows = ordered_json::array();
  for (const auto& r : series.rows) {
    ordered_json row;
    row["step"] = r.step;
    row["t"] = r.t;
    row["value_raw_s1"] = opt(r.raw_s1);
    row["value_raw_s3"] = opt(r.raw_s3);
    row["value_raw_s5"] = opt(r.raw_s5);
    row["value_zne"] = opt(r.zne);
    row["value_exact"] = opt(r.exact);
    row["value_mps"] = opt(r.mps);
    row["discarded_weight"] = opt(r.discarded_weight);
    row["value_statevector"] = opt(r.statevector);
    row["max_bond_dim"] = r.max_bond_dim ? ordered_json(*r.max_bond_dim) : ordered_json(nullptr);
    if (series.mitigation) {
      const auto& est = series.mitigation->steps[static_cast<std::size_t>(r.step - 1)];
      row["zne_stderr"] = est.zne_stderr;
      ordered_json scales = ordered_json::array();
      for (const auto& s : est.scales) {
        scales.push_back({{"scale", s.scale},
                          {"shots_per_copy", c.mitigation->shots},
                          {"raw_mean", s.raw_mean},
                          {"raw_stderr", s.raw_stderr},
                          {"mitigated_mean", s.mitigated_mean},
                          {"mitigated_stderr", s.mitigated_stderr},
                          {"raw_per_copy", s.raw},
                          {"mitigated_per_copy", s.mitigated}});
      }
      row["scales"] = scales;
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", tmp.string()));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ConfigError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

void write_outputs(const ResultSeries& series) {
  const auto& c = series.config;
  write_file_atomic(c.output_dir / c.csv_name, to_csv(series));
  write_file_atomic(c.output_dir / c.json_name, to_json(series));
}

std::vector<std::optional<double>> CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError(fmt::format("CSV has no column '{}'", name));
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::vector<std::optional<double>> out;
  for (const auto& row : rows) {
    if (idx >= row.size() || row[idx].empty()) {
      out.emplace_back();
    } else {
      out.emplace_back(parse_number<double>(row[idx], name));
    }
  }
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t start = 0;
  bool first = true;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw ConfigError("empty CSV");
  return table;
}

CsvTable load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string default_value_column(const CsvTable& table) {
  for (const char* name : {"value_zne", "value_statevector", "value_mps", "value_exact"}) {
    if (std::find(table.header.begin(), table.header.end(), name) == table.header.end()) continue;
    const auto col = table.column(name);
    if (std::any_of(col.begin(), col.end(), [](const auto& v) { return v.has_value(); })) return name;
  }
  throw ConfigError("CSV has no populated value column");
}

CompareReport compare(const CsvTable& a, const CsvTable& b, double tolerance, std::string column_a,
                      std::string column_b) {
  if (!(tolerance >= 0.0)) throw SpecError("tolerance must be >= 0");
  CompareReport r;
  r.column_a = column_a.empty() ? default_value_column(a) : std::move(column_a);
  r.column_b = column_b.empty() ? default_value_column(b) : std::move(column_b);
  r.tolerance = tolerance;
  const auto ta = a.column("t");
  const auto tb = b.column("t");
  if (ta.size() != tb.size()) {
    throw SpecError(fmt::format("time grids differ: {} rows vs {} rows", ta.size(), tb.size()));
  }
  const auto va = a.column(r.column_a);
  const auto vb = b.column(r.column_b);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!ta[i] || !tb[i] || std::abs(*ta[i] - *tb[i]) > 1e-9 * std::max(1.0, std::abs(*ta[i]))) {
      throw SpecError(fmt::format("time grids differ at row {}", i + 1));
    }
    if (!va[i] || !vb[i]) throw SpecError(fmt::format("missing value at row {}", i + 1));
    r.t.push_back(*ta[i]);
    r.deviation.push_back(std::abs(*va[i] - *vb[i]));
  }
  if (!r.deviation.empty()) {
    r.max_deviation = *std::max_element(r.deviation.begin(), r.deviation.end());
    r.mean_deviation =
        std::accumulate(r.deviation.begin(), r.deviation.end(), 0.0) / static_cast<double>(r.deviation.size());
  }
  r.pass = r.max_deviation <= tolerance;
  return r;
}

std::string format_report(const CompareReport& r) {
  std::string out = fmt::format("compare {} vs {}\n{:>10} {:>14}\n", r.column_a, r.column_b, "t", "|deviation|");
  for (std::size_t i = 0; i < r.t.size(); ++i) out += fmt::format("{:>10.4f} {:>14.6e}\n", r.t[i], r.deviation[i]);
  out += fmt::format("max {:.6e} mean {:.6e} tol {:.3e} {}\n", r.max_deviation, r.mean_deviation, r.tolerance,
                     r.pass ? "PASS" : "FAIL");
  return out;
}

const std::array<GoldenColumn, 4> kGoldenCnotTable = {{
    {20, Boundary::Open, {87, 144, 201, 258, 315, 372, 429, 486}},
    {100, Boundary::Open, {447, 744, 1041, 1338, 1635, 1932, 2229, 2526}},
    {20, Boundary::Periodic, {90, 150, 210, 270, 330, 390, 450, 510}},
    {96, Boundary::Periodic, {432, 720, 1008, 1296, 1584, 1872, 2160, 2448}},
}};

TablesReport emit_tables() {
  TablesReport report;
  std::string& out = report.text;

  out += "CNOT count, merged second order, isotropic chain\n";
  out += fmt::format("{:>5}", "steps");
  for (const auto& col : kGoldenCnotTable) {
    out += fmt::format(" {:>12}", fmt::format("N={} {}", col.n_sites, col.boundary == Boundary::Open ? "OBC" : "PBC"));
  }
  out += '\n';
  int mismatches = 0;
  for (int m = 1; m <= 8; ++m) {
    out += fmt::format("{:>5}", m);
    for (const auto& col : kGoldenCnotTable) {
      ChainSpec spec{col.n_sites, col.boundary};
      TrotterPlan plan{TrotterOrder::SecondMerged, m, 0.1};
      const auto got = static_cast<int>(cnot_count(lower(build_second_order_merged(spec, plan))));
      const int want = col.cnots[static_cast<std::size_t>(m - 1)];
      if (got == want) {
        out += fmt::format(" {:>12}", got);
      } else {
        ++mismatches;
        out += fmt::format(" {:>12}", fmt::format("{}!={}", got, want));
      }
    }
    out += '\n';
  }
  out += fmt::format("golden diff: {} of 32 cells differ\n\n", mismatches);
  report.table_match = mismatches == 0;

  out += "CNOT count, J1-J2 first order (raw lowering)\n";
  const std::array<ChainSpec, 2> dimer{{{20, Boundary::Open, 1.0, 0.5}, {96, Boundary::Periodic, 1.0, 0.5}}};
  out += fmt::format("{:>5} {:>12} {:>12}\n", "steps", "N=20 OBC", "N=96 PBC");
  report.dimer_linear = true;
  std::array<std::vector<int>, 2> counts;
  for (int m = 1; m <= 8; ++m) {
    out += fmt::format("{:>5}", m);
    for (std::size_t i = 0; i < dimer.size(); ++i) {
      const auto got = static_cast<int>(cnot_count(lower(build_dimer_step(dimer[i], {TrotterOrder::First, m, 0.2}))));
      counts[i].push_back(got);
      out += fmt::format(" {:>12}", got);
    }
    out += '\n';
  }
  for (const auto& c : counts) {
    for (std::size_t k = 1; k < c.size(); ++k) {
      if (c[k] - c[k - 1] != c[0] || c[0] <= 0) report.dimer_linear = false;
    }
  }
  out += fmt::format("linear in steps: {}\n\n", report.dimer_linear ? "yes" : "no");

  out += "Block-level depth per step (per step + closing)\n";
  const std::array<int, 4> sizes{8, 20, 40, 100};
  out += fmt::format("{:>22}", "builder");
  for (int n : sizes) out += fmt::format(" {:>8}", fmt::format("N={}", n));
  out += '\n';
  report.depth_constant = true;
  struct Row {
    const char* name;
    double j2;
    TrotterOrder order;
    Boundary boundary;
  };
  const std::array<Row, 6> rows{{{"first OBC", 0.0, TrotterOrder::First, Boundary::Open},
                                 {"first PBC", 0.0, TrotterOrder::First, Boundary::Periodic},
                                 {"second-merged OBC", 0.0, TrotterOrder::SecondMerged, Boundary::Open},
                                 {"second-merged PBC", 0.0, TrotterOrder::SecondMerged, Boundary::Periodic},
                                 {"j1-j2 first OBC", 0.5, TrotterOrder::First, Boundary::Open},
                                 {"j1-j2 first PBC", 0.5, TrotterOrder::First, Boundary::Periodic}}};
  for (const auto& row : rows) {
    out += fmt::format("{:>22}", row.name);
    std::optional<StepDepth> reference;
    for (int n : sizes) {
      const StepDepth d = depth_per_step({n, row.boundary, 1.0, row.j2}, {row.order, 1, 0.1});
      out += fmt::format(" {:>8}", fmt::format("{}+{}", d.per_step, d.closing));
      if (!reference) {
        reference = d;
      } else if (reference->per_step != d.per_step || reference->closing != d.closing) {
        report.depth_constant = false;
      }
    }
    out += '\n';
  }
  out += fmt::format("constant across N: {}\n", report.depth_constant ? "yes" : "no");
  return report;
}

}  // namespace spinlab
