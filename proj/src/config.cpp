#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "fdsim/experiment.hpp"

namespace fdsim {

namespace pt = boost::property_tree;

namespace {

const std::array<const char*, kNumLinkClasses> kLinkKeys{"macro_ue", "pico_ue", "ue_ue",
                                                         "pico_pico", "macro_pico", "ue_pico"};

/// Drops a trailing ` ; comment` or ` # comment` and surrounding blanks.
std::string strip_comment(const std::string& v) {
  std::string out = v;
  for (std::size_t i = 1; i < out.size(); ++i)
    if ((out[i] == ';' || out[i] == '#') && (out[i - 1] == ' ' || out[i - 1] == '\t')) {
      out.resize(i);
      break;
    }
  return boost::trim_copy(out);
}

class SectionReader {
 public:
  SectionReader(const pt::ptree& root, const std::string& section)
      : section_(section), tree_(root.get_child_optional(section)) {
    if (tree_)
      for (const auto& [key, _] : *tree_) unused_.insert(key);
  }

  /// Throws ConfigError if the section holds keys nobody read.
  void done() const {
    if (!unused_.empty()) throw ConfigError("unknown key [" + section_ + "] " + *unused_.begin());
  }

  template <typename T>
  void read(const std::string& key, T& target) {
    if (!tree_) return;
    if (auto v = tree_->get_optional<std::string>(key)) {
      unused_.erase(key);
      try {
        target = convert<T>(strip_comment(*v));
      } catch (const std::exception&) {
        throw ConfigError("bad value for [" + section_ + "] " + key + ": '" + *v + "'");
      }
    }
  }

 private:
  template <typename T>
  static T convert(const std::string& s) {
    if constexpr (std::is_same_v<T, std::string>) {
      return s;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (s == "true" || s == "1" || s == "yes") return true;
      if (s == "false" || s == "0" || s == "no") return false;
      throw std::invalid_argument(s);
    } else if constexpr (std::is_integral_v<T>) {
      std::size_t pos = 0;
      const long long v = std::stoll(s, &pos);
      if (pos != s.size() || (std::is_unsigned_v<T> && v < 0)) throw std::invalid_argument(s);
      return static_cast<T>(v);
    } else {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    }
  }

  std::string section_;
  boost::optional<const pt::ptree&> tree_;
  std::set<std::string> unused_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

template <typename T, typename Fn>
std::vector<T> parse_list(const std::string& s, const std::string& key, Fn&& fn) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) {
    try {
      out.push_back(fn(item));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad list entry for " + key + ": '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(key + " must not be empty");
  return out;
}

}  // namespace

void ExperimentSpec::validate() const {
  base.scenario.validate();
  ChannelModel{base.channel};
  if (base.engine.ttis < 1) throw ConfigError("ttis must be >= 1");
  if (!(base.engine.bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (!(base.engine.tti_s > 0.0)) throw ConfigError("tti duration must be positive");
  if (base.engine.pf.window_length < 1) throw ConfigError("PF window must be >= 1");
  if (schedulers.empty() || scenarios.empty() || sic_db_list.empty() || pico_densities.empty())
    throw ConfigError("sweep lists must not be empty");
  for (int d : pico_densities)
    if (d < 1) throw ConfigError("pico densities must be >= 1");
  if (drops < 1) throw ConfigError("drops must be >= 1");
  if (single_cell.num_ues < 1 || single_cell.drops < 1 || single_cell.curve_points < 2)
    throw ConfigError("invalid single-cell settings");
  if (fig2a.grid_points < 2 || !(fig2a.step > 0.0) || fig2a.x_max < fig2a.x_min)
    throw ConfigError("invalid fig2a settings");
}

ExperimentSpec parse_experiment_spec(const std::string& text) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  static const std::set<std::string> kSections{"scenario", "power",  "channel",    "sic",
                                               "pf",       "engine", "experiment", "singlecell",
                                               "fig2a"};
  for (const auto& [name, _] : root)
    if (!kSections.count(name)) throw ConfigError("unknown section [" + name + "]");

  ExperimentSpec spec;
  ScenarioConfig& sc = spec.base.scenario;
  ChannelConfig& ch = spec.base.channel;
  EngineConfig& en = spec.base.engine;
  {
    SectionReader r(root, "scenario");
    std::string dist = to_string(sc.ue_distribution);
    r.read("isd", sc.isd_m);
    r.read("macro_sites", sc.num_macro_sites);
    r.read("picos_per_macro", sc.picos_per_macro);
    r.read("ue_distribution", dist);
    r.read("ues_per_macro", sc.ues_per_macro);
    r.read("ues_per_pico", sc.ues_per_pico);
    r.read("cluster_radius", sc.cluster_radius_m);
    r.read("association_bias_db", sc.association_bias_db);
    r.read("min_macro_pico", sc.min_macro_pico_m);
    r.read("min_pico_pico", sc.min_pico_pico_m);
    r.read("min_pico_ue", sc.min_pico_ue_m);
    r.read("max_retries", sc.max_retries);
    r.read("seed", sc.seed);
    sc.ue_distribution = parse_ue_distribution(dist);
    r.done();
  }
  {
    SectionReader r(root, "power");
    r.read("macro_dbm", sc.macro_power_dbm);
    r.read("pico_dbm", en.p_bs_dbm);
    r.read("ue_dbm", en.p_ue_dbm);
    sc.pico_power_dbm = en.p_bs_dbm;
    r.done();
  }
  {
    SectionReader r(root, "channel");
    for (std::size_t i = 0; i < kNumLinkClasses; ++i) {
      const std::string k = kLinkKeys[i];
      r.read("pl_" + k + "_intercept", ch.pathloss[i].intercept_db);
      r.read("pl_" + k + "_slope", ch.pathloss[i].slope_db);
      r.read("shadow_" + k, ch.shadow_sigma_db[i]);
    }
    r.read("min_distance", ch.min_distance_m);
    r.read("thermal_density", ch.thermal_density_dbm_hz);
    r.read("nf_macro", ch.noise_figure_macro_db);
    r.read("nf_pico", ch.noise_figure_pico_db);
    r.read("nf_ue", ch.noise_figure_ue_db);
    r.done();
  }
  {
    SectionReader r(root, "sic");
    r.read("sic_db", en.sic_db);
    r.done();
  }
  {
    SectionReader r(root, "pf");
    r.read("window", en.pf.window_length);
    r.read("exponent", en.pf.fairness_exponent);
    r.read("floor", en.pf.floor_bps);
    r.read("alternate_every_tti", en.pf.alternate_every_tti);
    r.done();
  }
  {
    SectionReader r(root, "engine");
    std::string cap;
    r.read("bandwidth_hz", en.bandwidth_hz);
    r.read("tti_s", en.tti_s);
    r.read("ttis", en.ttis);
    r.read("se_cap", cap);
    r.read("sample_stride", en.sample_stride);
    if (!cap.empty() && cap != "off") {
      try {
        en.se_cap_bps_hz = std::stod(cap);
      } catch (const std::exception&) {
        throw ConfigError("bad value for [engine] se_cap: '" + cap + "'");
      }
    }
    r.done();
  }
  {
    SectionReader r(root, "experiment");
    std::string schedulers, scenarios, sics, densities, output;
    r.read("schedulers", schedulers);
    r.read("scenarios", scenarios);
    r.read("sic_db_list", sics);
    r.read("pico_densities", densities);
    r.read("drops", spec.drops);
    r.read("workers", spec.workers);
    r.read("output", output);
    if (!schedulers.empty())
      spec.schedulers = parse_list<SchedulerKind>(schedulers, "schedulers", [](const std::string& s) {
        try {
          return parse_scheduler(s);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      });
    if (!scenarios.empty())
      spec.scenarios = parse_list<UeDistribution>(scenarios, "scenarios", parse_ue_distribution);
    if (!sics.empty())
      spec.sic_db_list = parse_list<double>(sics, "sic_db_list", [](const std::string& s) { return std::stod(s); });
    if (!densities.empty())
      spec.pico_densities = parse_list<int>(densities, "pico_densities", [](const std::string& s) { return std::stoi(s); });
    if (!output.empty()) spec.output_dir = output;
    r.done();
  }
  {
    SectionReader r(root, "singlecell");
    r.read("ues", spec.single_cell.num_ues);
    r.read("radius", spec.single_cell.radius_m);
    r.read("min_distance", spec.single_cell.min_distance_m);
    r.read("drops", spec.single_cell.drops);
    r.read("curve_points", spec.single_cell.curve_points);
    r.done();
  }
  {
    SectionReader r(root, "fig2a");
    r.read("ul_ue_x", spec.fig2a.ul_ue_x);
    r.read("x_min", spec.fig2a.x_min);
    r.read("x_max", spec.fig2a.x_max);
    r.read("step", spec.fig2a.step);
    r.read("grid_points", spec.fig2a.grid_points);
    r.done();
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_spec(buf.str());
}

}  // namespace fdsim
