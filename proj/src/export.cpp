#include "fdsim/export.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "fdsim/units.hpp"
#include "json.hpp"

namespace fdsim {

namespace {

void precise(std::ostream& out) { out.precision(std::numeric_limits<double>::max_digits10); }

std::string power_dbm(double mw) {
  if (mw <= 0.0) return "-inf";
  std::ostringstream os;
  os.precision(6);
  os << mw_to_dbm(mw);
  return os.str();
}

std::string opt_index(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : ""; }

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  precise(out);
  return out;
}

}  // namespace

void write_layout_csv(std::ostream& out, const NetworkLayout& layout) {
  precise(out);
  out << "node_id,role,x,y,serving_cell\n";
  for (std::size_t id = 0; id < layout.node_count(); ++id) {
    const Position p = layout.position(id);
    out << id << ',' << to_string(layout.role(id)) << ',' << p.x << ',' << p.y << ',';
    if (layout.kind(id) == NodeKind::Ue) {
      const std::size_t u = id - layout.macros.size() - layout.picos.size();
      const ServingCell& s = layout.association[u];
      out << (s.is_pico() ? layout.pico_node(s.index) : layout.macro_node(s.index));
    }
    out << '\n';
  }
}

void write_gains_csv(std::ostream& out, const NetworkLayout& layout, const GainMatrix& gains) {
  precise(out);
  out << "tx_id,rx_id,pathloss_db,shadow_db,gain_linear\n";
  const std::size_t n = layout.node_count();
  for (std::size_t tx = 0; tx < n; ++tx)
    for (std::size_t rx = 0; rx < n; ++rx) {
      if (tx == rx) continue;
      if (layout.kind(tx) == NodeKind::Macro && layout.kind(rx) == NodeKind::Macro) continue;
      out << tx << ',' << rx << ',' << gains.pathloss_db(tx, rx) << ',' << gains.shadow_db(tx, rx)
          << ',' << gains.gain(tx, rx) << '\n';
    }
}

TraceWriter::TraceWriter(std::ostream& out) : out_(out) {
  out_ << "tti,cell,ul_ue,dl_ue,p_bs_dbm,p_ue_dbm\n";
}

void TraceWriter::on_decisions(int tti, std::span<const SchedulingDecision> decisions) {
  for (const SchedulingDecision& d : decisions)
    out_ << tti << ',' << d.cell << ',' << opt_index(d.ul_ue) << ',' << opt_index(d.dl_ue) << ','
         << power_dbm(d.dl_active() ? d.p_bs : 0.0) << ',' << power_dbm(d.ul_active() ? d.p_ue : 0.0)
         << '\n';
}

void write_summary_csv(std::ostream& out, const ResultTable& table) {
  precise(out);
  out << "scenario,scheduler,sic_db,picos_per_macro,ues_per_cell_param,drops,se_mean,se_std,ee_mean,"
         "ee_std,se_gain_pct,se_gain_stderr,ee_gain_pct,ee_gain_stderr\n";
  for (const auto& [key, row] : table.rows()) {
    const CampaignResult& c = row.campaign;
    out << to_string(key.scenario) << ',' << to_string(key.scheduler) << ',' << key.sic_db << ','
        << key.picos_per_macro << ',' << row.ues_per_cell_param << ',' << c.drops.size() << ','
        << c.se.mean << ',' << c.se.stddev << ',' << c.ee.mean << ',' << c.ee.stddev << ',';
    if (row.se_gain) out << row.se_gain->pct << ',' << row.se_gain->stderr_pct;
    else out << ',';
    out << ',';
    if (row.ee_gain) out << row.ee_gain->pct << ',' << row.ee_gain->stderr_pct;
    else out << ',';
    out << '\n';
  }
}

void write_drops_csv(std::ostream& out, const ResultTable& table) {
  precise(out);
  out << "scenario,scheduler,sic_db,picos_per_macro,drop,t_tot_ul,t_tot_dl,e_tot_ul,e_tot_dl,se,ee,"
         "pico_ues,pf_served_ues\n";
  for (const auto& [key, row] : table.rows())
    for (std::size_t i = 0; i < row.campaign.drops.size(); ++i) {
      const DropResult& d = row.campaign.drops[i];
      const Metrics& m = d.metrics;
      out << to_string(key.scenario) << ',' << to_string(key.scheduler) << ',' << key.sic_db << ','
          << key.picos_per_macro << ',' << i << ',' << m.t_tot_ul << ',' << m.t_tot_dl << ','
          << m.e_tot_ul << ',' << m.e_tot_dl << ',' << m.se() << ',' << m.ee() << ',' << d.pico_ues
          << ',' << d.pf_served_ues << '\n';
    }
}

void write_interference_csv(std::ostream& out, const ResultTable& table) {
  precise(out);
  out << "scenario,scheduler,sic_db,picos_per_macro,drop,direction,category,power_dbm\n";
  for (const auto& [key, row] : table.rows())
    for (std::size_t i = 0; i < row.campaign.drops.size(); ++i) {
      const InterferenceStats& s = row.campaign.drops[i].interference;
      for (std::size_t c = 0; c < kNumCategories; ++c) {
        const auto cat = static_cast<InterferenceCategory>(c);
        for (double v : s.samples_dbm[c])
          out << to_string(key.scenario) << ',' << to_string(key.scheduler) << ',' << key.sic_db << ','
              << key.picos_per_macro << ',' << i << ',' << category_direction(cat) << ','
              << category_name(cat) << ',' << v << '\n';
      }
    }
}

void write_interference_means_csv(std::ostream& out, const ResultTable& table) {
  precise(out);
  out << "scenario,scheduler,sic_db,picos_per_macro,direction,category,mean_mw,mean_dbm\n";
  for (const auto& [key, row] : table.rows())
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      const auto cat = static_cast<InterferenceCategory>(c);
      const double mw = row.campaign.interference_mean_mw[c];
      out << to_string(key.scenario) << ',' << to_string(key.scheduler) << ',' << key.sic_db << ','
          << key.picos_per_macro << ',' << category_direction(cat) << ',' << category_name(cat) << ','
          << mw << ',' << power_dbm(mw) << '\n';
    }
}

void write_fig2a_csv(std::ostream& out, const std::vector<Fig2aRow>& rows) {
  precise(out);
  out << "dl_ue_x,binary_p_bs_mw,binary_p_ue_mw,binary_mode,binary_sum_rate,oracle_p_bs_mw,"
         "oracle_p_ue_mw,oracle_mode,oracle_sum_rate\n";
  for (const Fig2aRow& r : rows)
    out << r.dl_ue_x << ',' << r.binary.p_bs << ',' << r.binary.p_ue << ',' << to_string(r.binary.mode)
        << ',' << r.binary.objective << ',' << r.oracle.p_bs << ',' << r.oracle.p_ue << ','
        << to_string(r.oracle.mode) << ',' << r.oracle.objective << '\n';
}

void write_single_cell_csv(std::ostream& out, const SingleCellResult& result) {
  precise(out);
  out << "scheduler,drops,se_mean,se_std,ee_mean,ee_std,se_gain_pct,se_gain_stderr,ee_gain_pct,"
         "ee_gain_stderr\n";
  for (std::size_t i = 0; i < result.campaigns.size(); ++i) {
    const CampaignResult& c = result.campaigns[i];
    out << to_string(c.scheduler) << ',' << c.drops.size() << ',' << c.se.mean << ',' << c.se.stddev
        << ',' << c.ee.mean << ',' << c.ee.stddev << ',';
    const auto& sg = result.se_gain[i];
    const auto& eg = result.ee_gain[i];
    if (sg) out << sg->pct << ',' << sg->stderr_pct;
    else out << ',';
    out << ',';
    if (eg) out << eg->pct << ',' << eg->stderr_pct;
    else out << ',';
    out << '\n';
  }
}

void write_se_ee_csv(std::ostream& out, const std::vector<SeEeCurveSet>& curves) {
  precise(out);
  out << "placement,duplex,ul_x,ul_y,dl_x,dl_y,p_ue_mw,se,ee,convex\n";
  for (const SeEeCurveSet& c : curves) {
    const bool convex = is_convex_curve(c.points);
    for (const SeEePoint& p : c.points)
      out << c.label << ',' << (c.full_duplex ? "FD" : "HD") << ',' << c.ul_ue.x << ',' << c.ul_ue.y
          << ',' << c.dl_ue.x << ',' << c.dl_ue.y << ',' << p.p_ue_mw << ',' << p.se << ',' << p.ee
          << ',' << (convex ? 1 : 0) << '\n';
  }
}

std::string manifest_json(const ExperimentSpec& spec, const std::string& command) {
  using nlohmann::json;
  const ScenarioConfig& sc = spec.base.scenario;
  const ChannelConfig& ch = spec.base.channel;
  const EngineConfig& en = spec.base.engine;

  json links = json::object();
  for (std::size_t i = 0; i < kNumLinkClasses; ++i)
    links[to_string(static_cast<LinkClass>(i))] = {{"intercept_db", ch.pathloss[i].intercept_db},
                                                  {"slope_db", ch.pathloss[i].slope_db},
                                                  {"shadow_sigma_db", ch.shadow_sigma_db[i]}};
  json schedulers = json::array();
  for (SchedulerKind k : spec.schedulers) schedulers.push_back(to_string(k));
  json scenarios = json::array();
  for (UeDistribution d : spec.scenarios) scenarios.push_back(to_string(d));

  json j;
  j["command"] = command;
  j["seed"] = sc.seed;
  j["drops"] = spec.drops;
  j["workers"] = spec.workers;
  j["scenario"] = {{"isd_m", sc.isd_m},
                   {"macro_sites", sc.num_macro_sites},
                   {"picos_per_macro", sc.picos_per_macro},
                   {"ue_distribution", to_string(sc.ue_distribution)},
                   {"ues_per_macro", sc.ues_per_macro},
                   {"ues_per_pico", sc.ues_per_pico},
                   {"cluster_radius_m", sc.cluster_radius_m},
                   {"association_bias_db", sc.association_bias_db},
                   {"min_macro_pico_m", sc.min_macro_pico_m},
                   {"min_pico_pico_m", sc.min_pico_pico_m},
                   {"min_pico_ue_m", sc.min_pico_ue_m},
                   {"max_retries", sc.max_retries},
                   {"macro_power_dbm", sc.macro_power_dbm},
                   {"pico_power_dbm", sc.pico_power_dbm}};
  j["channel"] = {{"links", links},
                  {"min_distance_m", ch.min_distance_m},
                  {"thermal_density_dbm_hz", ch.thermal_density_dbm_hz},
                  {"noise_figure_macro_db", ch.noise_figure_macro_db},
                  {"noise_figure_pico_db", ch.noise_figure_pico_db},
                  {"noise_figure_ue_db", ch.noise_figure_ue_db}};
  j["engine"] = {{"bandwidth_hz", en.bandwidth_hz},
                 {"tti_s", en.tti_s},
                 {"ttis", en.ttis},
                 {"p_bs_dbm", en.p_bs_dbm},
                 {"p_ue_dbm", en.p_ue_dbm},
                 {"sic_db", en.sic_db},
                 {"se_cap_bps_hz", en.se_cap_bps_hz ? json(*en.se_cap_bps_hz) : json(nullptr)},
                 {"sample_stride", en.sample_stride},
                 {"pf",
                  {{"window", en.pf.window_length},
                   {"exponent", en.pf.fairness_exponent},
                   {"floor_bps", en.pf.floor_bps},
                   {"alternate_every_tti", en.pf.alternate_every_tti}}}};
  j["schedulers"] = schedulers;
  j["scenarios"] = scenarios;
  j["sic_db_list"] = spec.sic_db_list;
  j["pico_densities"] = spec.pico_densities;
  j["single_cell"] = {{"ues", spec.single_cell.num_ues},
                      {"radius_m", spec.single_cell.radius_m},
                      {"min_distance_m", spec.single_cell.min_distance_m},
                      {"drops", spec.single_cell.drops},
                      {"curve_points", spec.single_cell.curve_points}};
  j["fig2a"] = {{"ul_ue_x", spec.fig2a.ul_ue_x},
                {"x_min", spec.fig2a.x_min},
                {"x_max", spec.fig2a.x_max},
                {"step", spec.fig2a.step},
                {"grid_points", spec.fig2a.grid_points}};
  return j.dump(2);
}

void write_result_files(const std::filesystem::path& dir, const ResultTable& table,
                        const ExperimentSpec& spec, const std::string& command) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_csv(dir / "summary.csv");
    write_summary_csv(out, table);
  }
  {
    auto out = open_csv(dir / "drops.csv");
    write_drops_csv(out, table);
  }
  {
    auto out = open_csv(dir / "interference.csv");
    write_interference_csv(out, table);
  }
  {
    auto out = open_csv(dir / "interference_means.csv");
    write_interference_means_csv(out, table);
  }
  std::ofstream manifest(dir / "manifest.json");
  if (!manifest) throw std::runtime_error("cannot write manifest");
  manifest << manifest_json(spec, command) << '\n';
}

}  // namespace fdsim
