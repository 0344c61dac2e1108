// acmeter: interference-graph analysis and DCF simulation for CSMA/CA
// networks with directional or omni antennas.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acmeter/acmeter.hpp"

namespace {

using namespace acmeter;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitViability = 3;

PowerScheme parse_scheme(const std::string& s) {
  if (s == "dp") return PowerScheme::dp_nchan;
  if (s == "net") return PowerScheme::mp_pnetw;
  if (s == "node") return PowerScheme::mp_pnode;
  if (s == "iface") return PowerScheme::mp_pinte;
  throw CLI::ValidationError("--power", "expected one of dp|net|node|iface");
}

AntennaMode parse_antenna(const std::string& s) {
  if (s == "oa") return AntennaMode::oa;
  if (s == "da") return AntennaMode::da;
  throw CLI::ValidationError("--antenna", "expected oa or da");
}

struct TopologySource {
  std::string file;
  std::uint32_t seed = 1;
  int n_sta = 9;
  std::string antenna = "oa";
  std::string profile = "paper-ranges";
  double spacing = 250.0;
  int grid_dim = 3;

  void add_options(CLI::App* cmd) {
    auto* f = cmd->add_option("-t,--topology", file, "topology JSON file");
    auto* s = cmd->add_option("--seed", seed, "generator seed")->envname("ACMETER_SEED");
    cmd->add_option("--sta", n_sta, "number of stations to generate");
    cmd->add_option("--antenna", antenna, "antenna mode for generation (oa|da)");
    cmd->add_option("--spacing", spacing, "grid spacing, meters");
    cmd->add_option("--grid-dim", grid_dim, "access points per grid side");
    cmd->add_option("--profile", profile, "environment profile (paper-ranges|paper-table)")
        ->envname("ACMETER_PROFILE");
    f->excludes(s);
  }

  Topology resolve(const CLI::App* cmd) const {
    if (!file.empty()) {
      Topology topo = load_topology(file);
      if (cmd->count("--profile") > 0) topo.env = environment_profile(profile);
      return topo;
    }
    GridScenarioParams params;
    params.seed = seed;
    params.n_sta = n_sta;
    params.antenna = parse_antenna(antenna);
    params.spacing_m = spacing;
    params.grid_dim = grid_dim;
    params.env = environment_profile(profile);
    return generate_grid_scenario(params);
  }
};

PowerAssignment resolve_power(const Topology& topo, const std::string& scheme, double tx_power_override) {
  if (tx_power_override > 0.0) return uniform_power(topo, tx_power_override);
  return make_power(topo, parse_scheme(scheme));
}

void print_report(const AttackingCase& imp, const AttackingCase& liew) {
  std::printf("metric      total        C1        C2        C3\n");
  std::printf("improved %8lld %9lld %9lld %9lld\n", static_cast<long long>(imp.total()),
              static_cast<long long>(imp.i_part), static_cast<long long>(imp.tc_part),
              static_cast<long long>(imp.rc_part));
  std::printf("liew     %8lld %9lld %9lld %9lld\n", static_cast<long long>(liew.total()),
              static_cast<long long>(liew.i_part), static_cast<long long>(liew.tc_part),
              static_cast<long long>(liew.rc_part));
}

/// Liew's method is antenna blind: it analyzes the isotropic twin of the
/// topology, power scheme included.
AttackingCase liew_components(const Topology& topo, const std::string& scheme, double tx_power_override) {
  const Topology twin = isotropic_twin(topo);
  const PowerAssignment power = resolve_power(twin, scheme, tx_power_override);
  return component_breakdown(build_graph_set(twin, power, GraphMode::liew), MetricFormula::liew);
}

int cmd_gen(const TopologySource& src, const CLI::App* cmd, const std::string& out) {
  Topology topo = src.resolve(cmd);
  save_topology(topo, out);
  std::printf("wrote %s: %zu nodes, %zu links\n", out.c_str(), topo.nodes.size(), topo.links.size());
  return kExitOk;
}

int cmd_analyze(const TopologySource& src, const CLI::App* cmd, const std::string& scheme, double tx_power,
                const std::string& mode, const std::string& csv_path, const std::string& dot_prefix,
                const std::string& json_path, bool detail) {
  Topology topo = src.resolve(cmd);
  PowerAssignment power = resolve_power(topo, scheme, tx_power);

  std::optional<AttackingCase> imp, liew;
  std::optional<InterferenceGraphSet> gs_improved;
  if (mode == "improved" || mode == "both") {
    gs_improved = build_graph_set(topo, power, GraphMode::improved);
    imp = component_breakdown(*gs_improved, MetricFormula::improved);
  }
  if (mode == "liew" || mode == "both") liew = liew_components(topo, scheme, tx_power);
  if (!imp && !liew) throw CLI::ValidationError("--mode", "expected improved|liew|both");

  print_report(imp.value_or(AttackingCase{}), liew.value_or(AttackingCase{}));
  if (detail && gs_improved) {
    std::printf("edge contributions (improved):\n");
    for (const auto& e : per_edge_contributions(*gs_improved))
      std::printf("  %d->%d  w_i=%d w_tc=%d w_rc=%d  adds %lld\n", e.from, e.to, e.w_i, e.w_tc, e.w_rc,
                  static_cast<long long>(e.contribution));
  }

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << kSweepColumns << "\n";
    SweepRow row;
    row.cell = {src.seed, static_cast<int>(topo.links.size()), parse_antenna(src.antenna),
                tx_power > 0.0 ? PowerScheme::dp_nchan : parse_scheme(scheme)};
    row.improved = imp.value_or(AttackingCase{});
    row.liew = liew.value_or(AttackingCase{});
    csv << sweep_row_csv(row) << "\n";
  }
  if (!dot_prefix.empty() && gs_improved) {
    auto dump = [&](const WeightedDigraph& g, const std::string& name) {
      std::ofstream out(dot_prefix + "_" + name + ".dot");
      out << to_dot(g, name, topo);
    };
    dump(gs_improved->i_graph, "i_graph");
    dump(gs_improved->tc_graph, "tc_graph");
    dump(gs_improved->rc_graph, "rc_graph");
  }
  if (!json_path.empty() && gs_improved) {
    std::ofstream out(json_path);
    out << graph_set_to_json(*gs_improved).dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const std::string& seeds_spec, const std::vector<int>& stas, const std::vector<std::string>& antennas,
              const std::vector<std::string>& schemes, const std::string& profile, const std::string& out,
              bool with_sim, double sim_time, int jobs) {
  SweepGrid grid;
  grid.env = environment_profile(profile);
  const auto dots = seeds_spec.find("..");
  std::uint32_t lo = 1, hi = 0;
  if (dots == std::string::npos) {
    hi = static_cast<std::uint32_t>(std::stoul(seeds_spec));
  } else {
    lo = static_cast<std::uint32_t>(std::stoul(seeds_spec.substr(0, dots)));
    hi = static_cast<std::uint32_t>(std::stoul(seeds_spec.substr(dots + 2)));
  }
  for (std::uint32_t s = lo; s <= hi; ++s) grid.seeds.push_back(s);
  grid.sta_counts = stas;
  for (const auto& a : antennas) grid.antennas.push_back(parse_antenna(a));
  for (const auto& s : schemes) grid.schemes.push_back(parse_scheme(s));

  SweepOptions opts;
  opts.simulate = with_sim;
  opts.sim.sim_time_s = sim_time;
  opts.jobs = jobs;
  opts.progress = with_sim;
  const auto rows = run_sweep(grid, opts, out);
  std::fprintf(stderr, "sweep: %zu rows -> %s\n", rows.size(), out.c_str());
  return kExitOk;
}

int cmd_simulate(const TopologySource& src, const CLI::App* cmd, const std::string& scheme, double tx_power,
                 double sim_time, std::uint32_t sim_seed, double load, const std::string& csv_path) {
  Topology topo = src.resolve(cmd);
  PowerAssignment power = resolve_power(topo, scheme, tx_power);
  SimConfig cfg;
  cfg.sim_time_s = sim_time;
  cfg.seed = sim_seed;
  if (load > 0.0) cfg.offered_load_pps = load;
  cfg.sir_capture_db = linear_to_db(topo.env.sir_k);
  const SimResult res = simulate(topo, power, cfg);
  std::printf("aggregated throughput: %.0f bit/s\n", res.aggregated_throughput_bps);
  std::printf("delivered %lld, collisions %lld, drops %lld\n", static_cast<long long>(res.total_delivered),
              static_cast<long long>(res.total_collisions), static_cast<long long>(res.total_drops));
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << "link_id,generated,delivered,drop_queue,drop_retry,collisions,retransmissions,queued_at_end,in_flight_"
           "at_end\n";
    for (const auto& s : res.per_link)
      csv << s.link_id << "," << s.generated << "," << s.delivered << "," << s.drop_queue << "," << s.drop_retry
          << "," << s.collisions << "," << s.retransmissions << "," << s.queued_at_end << "," << s.in_flight_at_end
          << "\n";
  }
  return kExitOk;
}

int cmd_export(const TopologySource& src, const CLI::App* cmd, const std::string& scheme, double tx_power,
               const std::string& mode, const std::string& dot_prefix, const std::string& json_path,
               const std::string& power_csv) {
  Topology topo = src.resolve(cmd);
  PowerAssignment power = resolve_power(topo, scheme, tx_power);
  const GraphMode gm = mode == "liew" ? GraphMode::liew : GraphMode::improved;
  InterferenceGraphSet gs = build_graph_set(topo, power, gm);
  if (!dot_prefix.empty()) {
    auto dump = [&](const WeightedDigraph& g, const std::string& name) {
      std::ofstream out(dot_prefix + "_" + name + ".dot");
      out << to_dot(g, name, topo);
    };
    dump(gs.i_graph, "i_graph");
    dump(gs.tc_graph, "tc_graph");
    dump(gs.rc_graph, "rc_graph");
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << graph_set_to_json(gs).dump(2) << "\n";
  }
  if (!power_csv.empty()) {
    std::ofstream out(power_csv);
    out << "node_id,interface_id,power_w,scheme\n";
    for (const auto& [key, w] : power.watts) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.8e", w);
      out << key.first << "," << key.second << "," << buf << "," << to_string(power.scheme) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attacking-case interference metrics for CSMA/CA networks"};
  app.require_subcommand(1);
  app.set_config("--config");

  TopologySource gen_src, an_src, sim_src, exp_src;
  std::string out = "topology.json";
  std::string scheme = "dp", an_scheme = "dp", sim_scheme = "dp", exp_scheme = "dp";
  double an_power = 0.0, sim_power = 0.0, exp_power = 0.0;
  std::string an_mode = "both", exp_mode = "improved";
  std::string an_csv, an_dot, an_json, exp_dot, exp_json, exp_power_csv, sim_csv;
  bool an_detail = false;

  std::string sweep_seeds = "1..40", sweep_profile = "paper-ranges", sweep_out = "sweep.csv";
  std::vector<int> sweep_stas{9, 18, 27, 36};
  std::vector<std::string> sweep_antennas{"oa", "da"};
  std::vector<std::string> sweep_schemes{"dp"};
  bool sweep_sim = false;
  double sweep_sim_time = 30.0;
  int sweep_jobs = 1;

  double sim_time = 120.0, sim_load = 0.0;
  std::uint32_t sim_seed = 1;

  auto* gen = app.add_subcommand("gen", "generate a grid scenario topology file");
  gen_src.add_options(gen);
  gen->add_option("-o,--out", out, "output topology path")->envname("ACMETER_OUT");

  auto* an = app.add_subcommand("analyze", "build graphs and report attacking-case metrics");
  an_src.add_options(an);
  an->add_option("--power", an_scheme, "power scheme (dp|net|node|iface)");
  an->add_option("--tx-power", an_power, "uniform transmit power override, watts");
  an->add_option("--mode", an_mode, "metric mode (improved|liew|both)");
  an->add_option("--csv", an_csv, "write metrics CSV");
  an->add_option("--dot", an_dot, "write DOT graphs with this path prefix");
  an->add_option("--json", an_json, "write graph JSON");
  an->add_flag("--detail", an_detail, "print per-edge contributions");

  auto* sw = app.add_subcommand("sweep", "run the scenario grid and emit a CSV table");
  sw->add_option("--seeds", sweep_seeds, "seed range, N or LO..HI");
  sw->add_option("--sta", sweep_stas, "station counts");
  sw->add_option("--antenna", sweep_antennas, "antenna modes");
  sw->add_option("--power", sweep_schemes, "power schemes");
  sw->add_option("--profile", sweep_profile, "environment profile")->envname("ACMETER_PROFILE");
  sw->add_option("-o,--out", sweep_out, "output CSV (resumable)");
  sw->add_flag("--simulate", sweep_sim, "append simulated throughput per cell");
  sw->add_option("--sim-time", sweep_sim_time, "simulated seconds per cell");
  sw->add_option("--jobs", sweep_jobs, "parallel workers")->envname("ACMETER_JOBS");

  auto* sim = app.add_subcommand("simulate", "run the DCF simulator on one topology");
  sim_src.add_options(sim);
  sim->add_option("--power", sim_scheme, "power scheme (dp|net|node|iface)");
  sim->add_option("--tx-power", sim_power, "uniform transmit power override, watts");
  sim->add_option("--time", sim_time, "simulated seconds");
  sim->add_option("--sim-seed", sim_seed, "simulator seed");
  sim->add_option("--load", sim_load, "offered load, packets/s per link");
  sim->add_option("--csv", sim_csv, "write per-link stats CSV");

  auto* exp = app.add_subcommand("export", "export graphs and power assignments");
  exp_src.add_options(exp);
  exp->add_option("--power", exp_scheme, "power scheme (dp|net|node|iface)");
  exp->add_option("--tx-power", exp_power, "uniform transmit power override, watts");
  exp->add_option("--mode", exp_mode, "graph mode (improved|liew)");
  exp->add_option("--dot", exp_dot, "write DOT graphs with this path prefix");
  exp->add_option("--json", exp_json, "write graph JSON");
  exp->add_option("--power-csv", exp_power_csv, "write the power assignment CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_src, gen, out);
    if (an->parsed())
      return cmd_analyze(an_src, an, an_scheme, an_power, an_mode, an_csv, an_dot, an_json, an_detail);
    if (sw->parsed())
      return cmd_sweep(sweep_seeds, sweep_stas, sweep_antennas, sweep_schemes, sweep_profile, sweep_out, sweep_sim,
                       sweep_sim_time, sweep_jobs);
    if (sim->parsed())
      return cmd_simulate(sim_src, sim, sim_scheme, sim_power, sim_time, sim_seed, sim_load, sim_csv);
    if (exp->parsed())
      return cmd_export(exp_src, exp, exp_scheme, exp_power, exp_mode, exp_dot, exp_json, exp_power_csv);
  } catch (const UnassociableStaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitViability;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const TopologyParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    const std::string what = e.what();
    std::fprintf(stderr, "error: %s\n", what.c_str());
    return what.find("not viable") != std::string::npos ? kExitViability : kExitConfig;
  }
  return kExitOk;
}
