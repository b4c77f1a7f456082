#include "fdsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fdsim/rng.hpp"
#include "fdsim/units.hpp"

namespace fdsim {

std::string describe(const ResultKey& key) {
  std::ostringstream os;
  os << to_string(key.scenario) << '/' << to_string(key.scheduler) << "/sic=" << key.sic_db
     << "/picos=" << key.picos_per_macro;
  return os.str();
}

Gain paired_gain(const std::vector<double>& values, const std::vector<double>& baseline) {
  if (values.size() != baseline.size() || values.empty())
    throw std::invalid_argument("paired gain needs equally sized, nonempty samples");
  const double n = static_cast<double>(values.size());
  double mv = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mv += values[i];
    mb += baseline[i];
  }
  mv /= n;
  mb /= n;
  if (!(mb > 0.0)) throw std::domain_error("baseline mean must be positive");
  const double ratio = mv / mb;
  Gain g;
  g.pct = 100.0 * (ratio - 1.0);
  if (values.size() > 1) {
    // Delta method on the ratio of means with paired residuals.
    double ss = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double r = values[i] - ratio * baseline[i];
      ss += r * r;
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    g.stderr_pct = 100.0 * sd / (std::sqrt(n) * mb);
  }
  return g;
}

void ResultTable::add(ResultRow row) {
  const ResultKey key = row.key;
  if (!rows_.emplace(key, std::move(row)).second)
    throw std::invalid_argument("duplicate result key " + describe(key));
}

const ResultRow* ResultTable::find(const ResultKey& key) const {
  auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

void ResultTable::compute_gains() {
  for (auto& [key, row] : rows_) {
    ResultKey base_key = key;
    base_key.scheduler = SchedulerKind::HdPf;
    const ResultRow* base = find(base_key);
    if (!base || base->campaign.drops.size() != row.campaign.drops.size()) continue;
    std::vector<double> se, ee, se0, ee0;
    for (std::size_t i = 0; i < row.campaign.drops.size(); ++i) {
      se.push_back(row.campaign.drops[i].metrics.se());
      ee.push_back(row.campaign.drops[i].metrics.ee());
      se0.push_back(base->campaign.drops[i].metrics.se());
      ee0.push_back(base->campaign.drops[i].metrics.ee());
    }
    row.se_gain = paired_gain(se, se0);
    row.ee_gain = paired_gain(ee, ee0);
  }
}

void run_scenario_into(ResultTable& table, const SimulationConfig& sim,
                       const std::vector<SchedulerKind>& schedulers, std::size_t drops,
                       std::size_t workers) {
  const ChannelModel channel(sim.channel);
  std::vector<CampaignResult> campaigns;
  try {
    campaigns = run_campaigns(sim.scenario, channel, sim.engine, schedulers, drops, workers);
  } catch (const std::exception& e) {
    ResultKey key{sim.scenario.ue_distribution, schedulers.empty() ? SchedulerKind::HdPf : schedulers.front(),
                  sim.engine.sic_db, sim.scenario.picos_per_macro};
    throw std::runtime_error("campaign " + describe(key) + " failed: " + e.what());
  }
  for (auto& c : campaigns) {
    ResultRow row;
    row.key = {sim.scenario.ue_distribution, c.scheduler, sim.engine.sic_db, sim.scenario.picos_per_macro};
    row.ues_per_cell_param = sim.scenario.ue_distribution == UeDistribution::Uniform
                                 ? sim.scenario.ues_per_macro
                                 : sim.scenario.ues_per_pico;
    row.campaign = std::move(c);
    table.add(std::move(row));
  }
}

ResultTable run_comparison(const ExperimentSpec& spec) {
  ResultTable table;
  for (UeDistribution dist : spec.scenarios) {
    SimulationConfig sim = spec.base;
    sim.scenario.ue_distribution = dist;
    run_scenario_into(table, sim, spec.schedulers, spec.drops, spec.workers);
  }
  table.compute_gains();
  return table;
}

ResultTable run_sic_sweep(const ExperimentSpec& spec) {
  ResultTable table;
  for (UeDistribution dist : spec.scenarios) {
    for (double sic : spec.sic_db_list) {
      SimulationConfig sim = spec.base;
      sim.scenario.ue_distribution = dist;
      sim.engine.sic_db = sic;
      run_scenario_into(table, sim, spec.schedulers, spec.drops, spec.workers);
    }
  }
  table.compute_gains();
  return table;
}

ResultTable run_density_sweep(const ExperimentSpec& spec) {
  ResultTable table;
  for (UeDistribution dist : spec.scenarios) {
    for (int picos : spec.pico_densities) {
      SimulationConfig sim = spec.base;
      sim.scenario.ue_distribution = dist;
      sim.scenario.picos_per_macro = picos;
      run_scenario_into(table, sim, spec.schedulers, spec.drops, spec.workers);
    }
  }
  table.compute_gains();
  return table;
}

std::optional<double> sic_zero_crossing(const ResultTable& table, UeDistribution scenario,
                                        SchedulerKind scheduler, int picos_per_macro) {
  std::vector<std::pair<double, double>> gains;  // (sic, pct)
  for (const auto& [key, row] : table.rows())
    if (key.scenario == scenario && key.scheduler == scheduler &&
        key.picos_per_macro == picos_per_macro && row.se_gain)
      gains.emplace_back(key.sic_db, row.se_gain->pct);
  std::sort(gains.begin(), gains.end());
  std::optional<double> crossing;
  for (auto it = gains.rbegin(); it != gains.rend(); ++it) {
    if (it->second <= 0.0) break;
    crossing = it->first;
  }
  return crossing;
}

PairContext single_cell_context(const SimulationConfig& sim, Position ul_ue, Position dl_ue) {
  const ChannelModel channel(sim.channel);
  const Position bs{0.0, 0.0};
  auto gain = [&](LinkClass cls, Position a, Position b) {
    return std::min(1.0, db_to_linear(-channel.pathloss_db(cls, distance(a, b))));
  };
  PairContext ctx;
  ctx.alpha_b2d = gain(LinkClass::PicoToUE, bs, dl_ue);
  ctx.alpha_u2d = gain(LinkClass::UEToUE, ul_ue, dl_ue);
  ctx.alpha_u2b = gain(LinkClass::UEToPico, ul_ue, bs);
  ctx.alpha_sic = SicModel{sim.engine.sic_db}.alpha();
  ctx.n0_dl = channel.noise_power_mw(NodeKind::Ue, sim.engine.bandwidth_hz);
  ctx.n0_ul = channel.noise_power_mw(NodeKind::Pico, sim.engine.bandwidth_hz);
  ctx.p_bs_max = dbm_to_mw(sim.engine.p_bs_dbm);
  ctx.p_ue_max = dbm_to_mw(sim.engine.p_ue_dbm);
  return ctx;
}

std::vector<Fig2aRow> run_fig2a_study(const SimulationConfig& sim, const Fig2aConfig& cfg) {
  if (!(cfg.step > 0.0) || cfg.x_max < cfg.x_min) throw ConfigError("invalid fig2a sweep");
  std::vector<Fig2aRow> rows;
  const auto steps = static_cast<std::size_t>(std::floor((cfg.x_max - cfg.x_min) / cfg.step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double x = cfg.x_min + static_cast<double>(i) * cfg.step;
    const PairContext ctx = single_cell_context(sim, {cfg.ul_ue_x, 0.0}, {x, 0.0});
    rows.push_back({x, binary_power_control(ctx), exhaustive_search_oracle(ctx, cfg.grid_points)});
  }
  return rows;
}

SingleCellResult run_single_cell_study(const SimulationConfig& sim, const SingleCellConfig& cfg,
                                       const std::vector<SchedulerKind>& schedulers,
                                       std::size_t workers) {
  if (cfg.drops < 1) throw std::invalid_argument("single-cell study needs at least one drop");
  const ChannelModel channel(sim.channel);
  std::vector<std::vector<DropResult>> per_scheduler(schedulers.size(),
                                                     std::vector<DropResult>(cfg.drops));
  parallel_for(cfg.drops, workers, [&](std::size_t i) {
    Rng rng = make_stream(sim.scenario.seed, i);
    const NetworkLayout layout =
        random_single_cell_layout(cfg.num_ues, cfg.radius_m, cfg.min_distance_m, rng);
    const GainMatrix gains = GainMatrix::build(layout, channel, rng);
    for (std::size_t s = 0; s < schedulers.size(); ++s)
      per_scheduler[s][i] = run_drop(layout, gains, channel, schedulers[s], sim.engine);
  });

  SingleCellResult result;
  for (std::size_t s = 0; s < schedulers.size(); ++s)
    result.campaigns.push_back(aggregate(schedulers[s], std::move(per_scheduler[s])));

  const auto base = std::find(schedulers.begin(), schedulers.end(), SchedulerKind::HdPf);
  for (const CampaignResult& c : result.campaigns) {
    if (base == schedulers.end()) {
      result.se_gain.emplace_back();
      result.ee_gain.emplace_back();
      continue;
    }
    const CampaignResult& b = result.campaigns[static_cast<std::size_t>(base - schedulers.begin())];
    std::vector<double> se, ee, se0, ee0;
    for (std::size_t i = 0; i < c.drops.size(); ++i) {
      se.push_back(c.drops[i].metrics.se());
      ee.push_back(c.drops[i].metrics.ee());
      se0.push_back(b.drops[i].metrics.se());
      ee0.push_back(b.drops[i].metrics.ee());
    }
    result.se_gain.push_back(paired_gain(se, se0));
    result.ee_gain.push_back(paired_gain(ee, ee0));
  }
  return result;
}

std::vector<double> ue_power_sweep(double p_ue_max_mw, int points) {
  if (points < 2) throw std::invalid_argument("a power sweep needs at least two points");
  if (!(p_ue_max_mw > 1.0)) throw std::invalid_argument("max UE power must exceed 0 dBm");
  std::vector<double> out;
  const double hi = mw_to_dbm(p_ue_max_mw);
  for (int k = 0; k < points; ++k) out.push_back(dbm_to_mw(hi * k / (points - 1)));
  out.back() = p_ue_max_mw;
  return out;
}

std::vector<SeEeCurveSet> run_se_ee_curves(const SimulationConfig& sim, const SingleCellConfig& cfg) {
  struct Placement {
    const char* label;
    Position ul, dl;
  };
  const Placement placements[] = {
      {"opposite", {-25.0, 0.0}, {25.0, 0.0}},
      {"orthogonal", {0.0, 20.0}, {20.0, 0.0}},
      {"adjacent", {-25.0, 0.0}, {-15.0, 0.0}},
  };
  const double p_bs = dbm_to_mw(sim.engine.p_bs_dbm);
  const std::vector<double> sweep = ue_power_sweep(dbm_to_mw(sim.engine.p_ue_dbm), cfg.curve_points);
  const ChannelModel channel(sim.channel);

  std::vector<SeEeCurveSet> curves;
  for (const Placement& p : placements) {
    const PairContext fd = single_cell_context(sim, p.ul, p.dl);
    curves.push_back({p.label, p.ul, p.dl, true, se_ee_curve(fd, p_bs, sweep)});

    // FDD: each direction on half the band, no cross-direction coupling.
    PairContext hd = fd;
    hd.alpha_u2d = 0.0;
    hd.alpha_sic = 0.0;
    hd.n0_dl = channel.noise_power_mw(NodeKind::Ue, sim.engine.bandwidth_hz / 2.0);
    hd.n0_ul = channel.noise_power_mw(NodeKind::Pico, sim.engine.bandwidth_hz / 2.0);
    curves.push_back({p.label, p.ul, p.dl, false, se_ee_curve(hd, p_bs, sweep, 0.5)});
  }
  return curves;
}

}  // namespace fdsim
