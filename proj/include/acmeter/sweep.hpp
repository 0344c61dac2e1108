#pragma once

#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "acmeter/metrics.hpp"
#include "acmeter/simulator.hpp"

namespace acmeter {

inline const char* to_string(AntennaMode m) { return m == AntennaMode::oa ? "oa" : "da"; }

struct SweepCell {
  std::uint32_t seed = 1;
  int n_sta = 9;
  AntennaMode antenna = AntennaMode::oa;
  PowerScheme scheme = PowerScheme::dp_nchan;

  std::string key() const {
    std::ostringstream k;
    k << seed << "," << n_sta << "," << to_string(antenna) << "," << to_string(scheme);
    return k.str();
  }
  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

struct SweepRow {
  SweepCell cell;
  AttackingCase improved;
  AttackingCase liew;
  std::optional<double> throughput_bps;
};

struct SweepGrid {
  std::vector<std::uint32_t> seeds;
  std::vector<int> sta_counts;
  std::vector<AntennaMode> antennas;
  std::vector<PowerScheme> schemes;
  Environment env{};

  /// Cell order is fixed: (n_sta, antenna, scheme, seed), outermost first.
  std::vector<SweepCell> cells() const {
    std::vector<SweepCell> out;
    for (int n : sta_counts)
      for (AntennaMode a : antennas)
        for (PowerScheme s : schemes)
          for (std::uint32_t seed : seeds) out.push_back({seed, n, a, s});
    return out;
  }
};

struct SweepOptions {
  bool simulate = false;
  SimConfig sim{};
  int jobs = 1;
  bool progress = false;  // log completed cells to stderr
};

inline SweepRow evaluate_cell(const SweepCell& cell, const Environment& env, const SweepOptions& opts) {
  GridScenarioParams params;
  params.seed = cell.seed;
  params.n_sta = cell.n_sta;
  params.antenna = cell.antenna;
  params.env = env;
  const Topology topo = generate_grid_scenario(params);
  const PowerAssignment power = make_power(topo, cell.scheme);

  SweepRow row;
  row.cell = cell;
  row.improved = component_breakdown(build_graph_set(topo, power, GraphMode::improved), MetricFormula::improved);
  // The baseline method cannot see antennas, so it analyzes the isotropic
  // twin of the network, power control included.
  const Topology twin = isotropic_twin(topo);
  const PowerAssignment twin_power = make_power(twin, cell.scheme);
  row.liew = component_breakdown(build_graph_set(twin, twin_power, GraphMode::liew), MetricFormula::liew);
  if (opts.simulate) {
    SimConfig cfg = opts.sim;
    cfg.seed = cell.seed;
    cfg.sir_capture_db = linear_to_db(env.sir_k);
    row.throughput_bps = simulate(topo, power, cfg).aggregated_throughput_bps;
  }
  return row;
}

inline constexpr const char* kSweepHeaderLine = "# acmeter sweep v1";
inline constexpr const char* kSweepColumns =
    "seed,n_sta,antenna,power_scheme,ac_improved,imp_c1,imp_c2,imp_c3,ac_liew,liew_c1,liew_c2,liew_c3,throughput_bps";

inline std::string sweep_row_csv(const SweepRow& r) {
  std::ostringstream out;
  out << r.cell.key() << "," << r.improved.total() << "," << r.improved.i_part << "," << r.improved.tc_part << ","
      << r.improved.rc_part << "," << r.liew.total() << "," << r.liew.i_part << "," << r.liew.tc_part << ","
      << r.liew.rc_part << ",";
  if (r.throughput_bps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *r.throughput_bps);
    out << buf;
  }
  return out.str();
}

/// Parses rows previously written by sweep_row_csv, keyed by cell.
inline std::map<std::string, std::string> read_sweep_rows(const std::string& path) {
  std::map<std::string, std::string> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("seed,", 0) == 0) continue;
    int commas = 0;
    std::size_t pos = 0;
    for (; pos < line.size() && commas < 4; ++pos)
      if (line[pos] == ',') ++commas;
    if (commas < 4) continue;
    rows[line.substr(0, pos - 1)] = line;
  }
  return rows;
}

/// Runs the grid, reusing any rows already present in `out_path` and writing
/// rows in the fixed cell order so a resumed run reproduces the same file.
/// Missing cells are evaluated in parallel when jobs > 1; output order is
/// independent of scheduling.
inline std::vector<SweepRow> run_sweep(const SweepGrid& grid, const SweepOptions& opts,
                                       const std::string& out_path = {}) {
  const std::vector<SweepCell> cells = grid.cells();
  std::map<std::string, std::string> existing;
  if (!out_path.empty()) existing = read_sweep_rows(out_path);

  std::vector<std::string> lines(cells.size());
  std::vector<SweepRow> rows(cells.size());
  std::vector<char> computed(cells.size(), 0);
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto it = existing.find(cells[i].key());
    if (it != existing.end())
      lines[i] = it->second;
    else
      todo.push_back(i);
  }

  const int jobs = std::max(1, opts.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      const std::size_t i = todo[k];
      rows[i] = evaluate_cell(cells[i], grid.env, opts);
      lines[i] = sweep_row_csv(rows[i]);
      computed[i] = 1;
      if (opts.progress) std::fprintf(stderr, "sweep: cell %s done\n", cells[i].key().c_str());
    }
  };
  if (jobs == 1 || todo.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Rows reused from disk still need in-memory values for the caller.
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!computed[i]) {
      std::istringstream in(lines[i]);
      std::string field;
      std::vector<std::string> f;
      while (std::getline(in, field, ',')) f.push_back(field);
      rows[i].cell = cells[i];
      rows[i].improved = {std::stoll(f.at(5)), std::stoll(f.at(6)), std::stoll(f.at(7))};
      rows[i].liew = {std::stoll(f.at(9)), std::stoll(f.at(10)), std::stoll(f.at(11))};
      if (f.size() > 12 && !f[12].empty()) rows[i].throughput_bps = std::stod(f[12]);
    }
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    out << kSweepHeaderLine << "\n" << kSweepColumns << "\n";
    for (const auto& line : lines) out << line << "\n";
  }
  return rows;
}

}  // namespace acmeter
