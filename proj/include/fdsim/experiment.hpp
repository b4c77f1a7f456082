#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "fdsim/campaign.hpp"
#include "fdsim/channel.hpp"
#include "fdsim/engine.hpp"
#include "fdsim/scheduling.hpp"
#include "fdsim/sumrate.hpp"
#include "fdsim/topology.hpp"

namespace fdsim {

/// Everything needed to simulate one scenario.
struct SimulationConfig {
  ScenarioConfig scenario;
  ChannelConfig channel;
  EngineConfig engine;
};

struct SingleCellConfig {
  int num_ues = 4;
  double radius_m = 40.0;
  double min_distance_m = 10.0;
  std::size_t drops = 100;
  int curve_points = 24;  // UL power levels per SE-EE curve
};

struct Fig2aConfig {
  double ul_ue_x = -25.0;
  double x_min = -40.0;
  double x_max = 40.0;
  double step = 1.0;
  std::size_t grid_points = 201;
};

struct ExperimentSpec {
  SimulationConfig base;
  std::vector<SchedulerKind> schedulers = all_schedulers();
  std::vector<UeDistribution> scenarios{UeDistribution::Uniform, UeDistribution::Clustered};
  std::vector<double> sic_db_list{50, 60, 70, 80, 90, 100, 110};
  std::vector<int> pico_densities{3, 6, 9, 12, 15};
  std::size_t drops = 100;
  std::size_t workers = 1;
  std::filesystem::path output_dir = "results";
  SingleCellConfig single_cell;
  Fig2aConfig fig2a;

  /// Throws ConfigError for empty sweep lists or invalid nested configs.
  void validate() const;
};

/// Parses the sectioned key-value config file. Unknown keys are errors.
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
ExperimentSpec parse_experiment_spec(const std::string& text);

struct ResultKey {
  UeDistribution scenario = UeDistribution::Uniform;
  SchedulerKind scheduler = SchedulerKind::HdPf;
  double sic_db = 110.0;
  int picos_per_macro = 6;

  auto tie() const { return std::tie(scenario, sic_db, picos_per_macro, scheduler); }
  bool operator<(const ResultKey& o) const { return tie() < o.tie(); }
  bool operator==(const ResultKey& o) const { return tie() == o.tie(); }
};

std::string describe(const ResultKey& key);

struct Gain {
  double pct = 0.0;
  double stderr_pct = 0.0;
};

struct ResultRow {
  ResultKey key;
  int ues_per_cell_param = 0;  // ues_per_macro (uniform) or ues_per_pico (clustered)
  CampaignResult campaign;
  std::optional<Gain> se_gain;  // vs HD_PF of the same scenario key
  std::optional<Gain> ee_gain;
};

/// Ratio-of-means gain of `values` over `baseline` (paired by drop) with a
/// delta-method standard error.
Gain paired_gain(const std::vector<double>& values, const std::vector<double>& baseline);

class ResultTable {
 public:
  /// Throws std::invalid_argument on a duplicate key.
  void add(ResultRow row);
  const ResultRow* find(const ResultKey& key) const;
  const std::map<ResultKey, ResultRow>& rows() const { return rows_; }

  /// Fills se_gain/ee_gain of every row whose HD_PF counterpart exists.
  void compute_gains();

 private:
  std::map<ResultKey, ResultRow> rows_;
};

/// Runs each of `schedulers` on one scenario configuration.
void run_scenario_into(ResultTable& table, const SimulationConfig& sim,
                       const std::vector<SchedulerKind>& schedulers, std::size_t drops,
                       std::size_t workers);

/// Scheduler comparison at the base SIC and pico density, for every scenario.
ResultTable run_comparison(const ExperimentSpec& spec);

/// Per-scheduler SE gain as a function of the SIC capability.
ResultTable run_sic_sweep(const ExperimentSpec& spec);

/// SE and EE as a function of the number of picos per macro.
ResultTable run_density_sweep(const ExperimentSpec& spec);

/// Smallest swept SIC level from which `scheduler` shows a positive SE gain
/// at that level and every higher one; nullopt if the gain never turns positive.
std::optional<double> sic_zero_crossing(const ResultTable& table, UeDistribution scenario,
                                        SchedulerKind scheduler, int picos_per_macro);

struct Fig2aRow {
  double dl_ue_x = 0.0;
  PowerSolution binary;
  PowerSolution oracle;
};

/// Single cell, BS at the origin, UL UE on the x axis; the DL UE is moved
/// along the x axis and both power-control solutions are recorded.
/// Pathloss only (no shadowing) so the geometry alone drives the result.
std::vector<Fig2aRow> run_fig2a_study(const SimulationConfig& sim, const Fig2aConfig& cfg);

/// Pair context for a single isolated cell with the given UE positions.
/// Pathloss only; noise at the full band.
PairContext single_cell_context(const SimulationConfig& sim, Position ul_ue, Position dl_ue);

struct SingleCellResult {
  std::vector<CampaignResult> campaigns;  // one per scheduler, same drops
  std::vector<std::optional<Gain>> se_gain;
  std::vector<std::optional<Gain>> ee_gain;
};

/// Random single-cell drops (num_ues UEs in a disk around one pico) evaluated
/// under every scheduler.
SingleCellResult run_single_cell_study(const SimulationConfig& sim, const SingleCellConfig& cfg,
                                       const std::vector<SchedulerKind>& schedulers,
                                       std::size_t workers = 1);

struct SeEeCurveSet {
  std::string label;
  Position ul_ue;
  Position dl_ue;
  bool full_duplex = true;
  std::vector<SeEePoint> points;
};

/// FD and HD SE-EE curves for a few representative UE placements with the BS
/// at full power and the UL power swept from 0 dBm to its maximum.
std::vector<SeEeCurveSet> run_se_ee_curves(const SimulationConfig& sim, const SingleCellConfig& cfg);

/// `points` UL power levels evenly spaced in dBm from 0 dBm to the max.
std::vector<double> ue_power_sweep(double p_ue_max_mw, int points);

}  // namespace fdsim
