// fdsim: command-line driver for the FD small-cell simulator.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdsim/export.hpp"

namespace fs = std::filesystem;
using namespace fdsim;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> drops;
  std::optional<int> ttis;
  std::optional<std::string> out;
  std::vector<std::string> schedulers;
  std::vector<std::string> scenarios;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> export_drop;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Config file (default: $FDSIM_CONFIG)");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--drops", o.drops, "Drops per campaign");
  cmd->add_option("--ttis", o.ttis, "TTIs per drop");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--scheduler", o.schedulers, "Scheduler (repeatable): HD_PF FD_PF FD_PF_PC FD_UP FD_UP_PC");
  cmd->add_option("--scenario", o.scenarios, "UE distribution (repeatable): uniform clustered");
  cmd->add_option("--workers", o.workers, "Worker threads");
}

ExperimentSpec resolve(const Options& o) {
  std::string path = o.config;
  if (path.empty())
    if (const char* env = std::getenv("FDSIM_CONFIG")) path = env;
  ExperimentSpec spec = path.empty() ? ExperimentSpec{} : load_experiment_spec(path);
  if (o.seed) spec.base.scenario.seed = *o.seed;
  if (o.drops) spec.drops = spec.single_cell.drops = *o.drops;
  if (o.ttis) spec.base.engine.ttis = *o.ttis;
  if (o.out) spec.output_dir = *o.out;
  if (o.workers) spec.workers = *o.workers;
  if (!o.schedulers.empty()) {
    spec.schedulers.clear();
    for (const auto& s : o.schedulers) spec.schedulers.push_back(parse_scheduler(s));
  }
  if (!o.scenarios.empty()) {
    spec.scenarios.clear();
    for (const auto& s : o.scenarios) spec.scenarios.push_back(parse_ue_distribution(s));
  }
  // Gains need the baseline in the same campaign.
  if (std::find(spec.schedulers.begin(), spec.schedulers.end(), SchedulerKind::HdPf) == spec.schedulers.end())
    spec.schedulers.insert(spec.schedulers.begin(), SchedulerKind::HdPf);
  spec.validate();
  return spec;
}

std::string command_line(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
  return os.str();
}

void print_table(const ResultTable& table) {
  std::printf("%-10s %-9s %6s %6s %10s %12s %9s %9s\n", "scenario", "scheduler", "sic", "picos",
              "SE", "EE", "SE gain%", "EE gain%");
  for (const auto& [key, row] : table.rows()) {
    std::printf("%-10s %-9s %6.0f %6d %10.4f %12.4g", to_string(key.scenario).c_str(),
                to_string(key.scheduler).c_str(), key.sic_db, key.picos_per_macro,
                row.campaign.se.mean, row.campaign.ee.mean);
    if (row.se_gain && row.ee_gain)
      std::printf(" %9.1f %9.1f\n", row.se_gain->pct, row.ee_gain->pct);
    else
      std::printf("\n");
  }
}

void export_drop(const ExperimentSpec& spec, std::size_t index) {
  const fs::path dir = spec.output_dir / ("drop_" + std::to_string(index));
  fs::create_directories(dir);
  const ChannelModel channel(spec.base.channel);
  for (UeDistribution dist : spec.scenarios) {
    ScenarioConfig sc = spec.base.scenario;
    sc.ue_distribution = dist;
    const Drop drop = generate_drop(sc, channel, index);
    const std::string tag = to_string(dist);
    std::ofstream layout(dir / (tag + "_layout.csv"));
    write_layout_csv(layout, drop.layout);
    std::ofstream gains(dir / (tag + "_gains.csv"));
    write_gains_csv(gains, drop.layout, drop.gains);
    for (SchedulerKind k : spec.schedulers) {
      std::ofstream trace(dir / (tag + "_trace_" + to_string(k) + ".csv"));
      TraceWriter writer(trace);
      run_drop(drop.layout, drop.gains, channel, k, spec.base.engine, &writer);
    }
  }
  std::cout << "drop " << index << " exported to " << dir.string() << '\n';
}

void write_manifest(const fs::path& dir, const ExperimentSpec& spec, const std::string& cmd) {
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.json");
  out << manifest_json(spec, cmd) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex small-cell network simulator"};
  app.require_subcommand(1);

  Options opt;
  auto* run = app.add_subcommand("run", "Compare schedulers at the configured SIC and density");
  add_common(run, opt);
  run->add_option("--export-drop", opt.export_drop, "Also write layout, gains and traces of drop N");
  auto* sic = app.add_subcommand("sweep-sic", "SE/EE gains over the SIC list");
  add_common(sic, opt);
  auto* density = app.add_subcommand("sweep-density", "SE/EE over the pico density list");
  add_common(density, opt);
  auto* single = app.add_subcommand("singlecell", "Random 4-UE single-cell drops and SE-EE curves");
  add_common(single, opt);
  auto* fig2a = app.add_subcommand("fig2a", "Optimal powers as the DL UE moves along the x axis");
  add_common(fig2a, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentSpec spec = resolve(opt);
    const std::string cmd = command_line(argc, argv);

    if (run->parsed()) {
      const ResultTable t = run_comparison(spec);
      write_result_files(spec.output_dir, t, spec, cmd);
      print_table(t);
      if (opt.export_drop) export_drop(spec, *opt.export_drop);
    } else if (sic->parsed()) {
      const ResultTable t = run_sic_sweep(spec);
      write_result_files(spec.output_dir, t, spec, cmd);
      print_table(t);
      for (UeDistribution dist : spec.scenarios)
        for (SchedulerKind k : spec.schedulers) {
          if (k == SchedulerKind::HdPf) continue;
          const auto z = sic_zero_crossing(t, dist, k, spec.base.scenario.picos_per_macro);
          std::cout << "zero crossing " << to_string(dist) << ' ' << to_string(k) << ": "
                    << (z ? std::to_string(*z) + " dB" : std::string("none")) << '\n';
        }
    } else if (density->parsed()) {
      const ResultTable t = run_density_sweep(spec);
      write_result_files(spec.output_dir, t, spec, cmd);
      print_table(t);
    } else if (single->parsed()) {
      const SingleCellResult r =
          run_single_cell_study(spec.base, spec.single_cell, spec.schedulers, spec.workers);
      const auto curves = run_se_ee_curves(spec.base, spec.single_cell);
      fs::create_directories(spec.output_dir);
      std::ofstream bars(spec.output_dir / "single_cell.csv");
      write_single_cell_csv(bars, r);
      std::ofstream tradeoff(spec.output_dir / "se_ee_curves.csv");
      write_se_ee_csv(tradeoff, curves);
      write_manifest(spec.output_dir, spec, cmd);
      for (std::size_t i = 0; i < r.campaigns.size(); ++i) {
        std::printf("%-9s SE %.4f EE %.4g", to_string(r.campaigns[i].scheduler).c_str(),
                    r.campaigns[i].se.mean, r.campaigns[i].ee.mean);
        if (r.se_gain[i] && r.ee_gain[i])
          std::printf("  gain SE %+.1f%% EE %+.1f%%", r.se_gain[i]->pct, r.ee_gain[i]->pct);
        std::printf("\n");
      }
    } else if (fig2a->parsed()) {
      const auto rows = run_fig2a_study(spec.base, spec.fig2a);
      fs::create_directories(spec.output_dir);
      std::ofstream out(spec.output_dir / "fig2a.csv");
      write_fig2a_csv(out, rows);
      write_manifest(spec.output_dir, spec, cmd);
      for (const Fig2aRow& r : rows)
        std::printf("x=%6.1f  binary %-13s oracle %-13s\n", r.dl_ue_x, to_string(r.binary.mode).c_str(),
                    to_string(r.oracle.mode).c_str());
    }
  } catch (const std::exception& e) {
    std::cerr << "fdsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
