#include "fdsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fdsim/channel.hpp"
#include "fdsim/units.hpp"

namespace fdsim {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string to_string(NodeRole role) {
  switch (role) {
    case NodeRole::MacroBS: return "macro";
    case NodeRole::PicoBS: return "pico";
    case NodeRole::UplinkUE: return "ul_ue";
    case NodeRole::DownlinkUE: return "dl_ue";
  }
  return "unknown";
}

std::string to_string(UeDistribution dist) {
  return dist == UeDistribution::Uniform ? "uniform" : "clustered";
}

UeDistribution parse_ue_distribution(const std::string& name) {
  if (name == "uniform") return UeDistribution::Uniform;
  if (name == "clustered") return UeDistribution::Clustered;
  throw ConfigError("unknown ue_distribution '" + name + "'");
}

void ScenarioConfig::validate() const {
  if (!(isd_m > 0.0)) throw ConfigError("isd must be positive");
  if (num_macro_sites != 7) throw ConfigError("only the 7-site hexagonal layout is supported");
  if (picos_per_macro < 1) throw ConfigError("picos_per_macro must be >= 1");
  if (ue_distribution == UeDistribution::Uniform && ues_per_macro < 1)
    throw ConfigError("ues_per_macro must be >= 1");
  if (ue_distribution == UeDistribution::Clustered && ues_per_pico < 1)
    throw ConfigError("ues_per_pico must be >= 1");
  if (!(cluster_radius_m > 0.0)) throw ConfigError("cluster_radius must be positive");
  if (min_macro_pico_m < 0 || min_pico_pico_m < 0 || min_pico_ue_m < 0)
    throw ConfigError("minimum distances must be nonnegative");
  if (ue_distribution == UeDistribution::Clustered && min_pico_ue_m >= cluster_radius_m)
    throw ConfigError("min_pico_ue must be smaller than cluster_radius");
  if (max_retries < 1) throw ConfigError("max_retries must be >= 1");
}

NodeKind NetworkLayout::kind(std::size_t node) const {
  if (node < macros.size()) return NodeKind::Macro;
  if (node < macros.size() + picos.size()) return NodeKind::Pico;
  return NodeKind::Ue;
}

Position NetworkLayout::position(std::size_t node) const {
  if (node < macros.size()) return macros[node];
  node -= macros.size();
  if (node < picos.size()) return picos[node];
  return ues.at(node - picos.size());
}

NodeRole NetworkLayout::role(std::size_t node) const {
  switch (kind(node)) {
    case NodeKind::Macro: return NodeRole::MacroBS;
    case NodeKind::Pico: return NodeRole::PicoBS;
    case NodeKind::Ue: break;
  }
  return ue_roles.at(node - macros.size() - picos.size());
}

std::vector<std::size_t> NetworkLayout::pico_members(std::size_t cell, NodeRole role) const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < ues.size(); ++u) {
    if (association[u].is_pico() && association[u].index == cell && ue_roles[u] == role)
      out.push_back(u);
  }
  return out;
}

std::vector<Position> generate_macro_layout(const ScenarioConfig& config) {
  config.validate();
  std::vector<Position> sites{{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) {
    const double angle = k * std::numbers::pi / 3.0;
    sites.push_back({config.isd_m * std::cos(angle), config.isd_m * std::sin(angle)});
  }
  return sites;
}

bool in_macro_region(Position p, Position macro, double isd_m) {
  // Hexagon whose apothems point at the six neighbouring sites.
  const double apothem = isd_m / 2.0;
  const double dx = p.x - macro.x;
  const double dy = p.y - macro.y;
  for (int k = 0; k < 6; ++k) {
    const double angle = k * std::numbers::pi / 3.0;
    if (dx * std::cos(angle) + dy * std::sin(angle) > apothem) return false;
  }
  return true;
}

bool in_coverage(Position p, const std::vector<Position>& macros, double isd_m) {
  return std::any_of(macros.begin(), macros.end(),
                     [&](const Position& m) { return in_macro_region(p, m, isd_m); });
}

namespace {

Position uniform_in_hexagon(Position center, double isd_m, Rng& rng) {
  const double circumradius = isd_m / std::sqrt(3.0);
  std::uniform_real_distribution<double> u(-circumradius, circumradius);
  for (;;) {
    const Position p{center.x + u(rng), center.y + u(rng)};
    if (in_macro_region(p, center, isd_m)) return p;
  }
}

Position uniform_in_disk(Position center, double radius, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double theta = 2.0 * std::numbers::pi * u(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

bool far_from_all(Position p, const std::vector<Position>& others, double min_distance) {
  return std::all_of(others.begin(), others.end(),
                     [&](const Position& o) { return distance(p, o) >= min_distance; });
}

}  // namespace

std::vector<Position> drop_picos(const ScenarioConfig& config, const std::vector<Position>& macros,
                                 Rng& rng) {
  config.validate();
  std::vector<Position> picos;
  picos.reserve(macros.size() * static_cast<std::size_t>(config.picos_per_macro));
  for (std::size_t m = 0; m < macros.size(); ++m) {
    for (int k = 0; k < config.picos_per_macro; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < config.max_retries; ++attempt) {
        const Position p = uniform_in_hexagon(macros[m], config.isd_m, rng);
        if (far_from_all(p, macros, config.min_macro_pico_m) &&
            far_from_all(p, picos, config.min_pico_pico_m)) {
          picos.push_back(p);
          placed = true;
          break;
        }
      }
      if (!placed) {
        throw DropGenerationError("could not place pico " + std::to_string(k) + " of macro " +
                                  std::to_string(m) + " within " +
                                  std::to_string(config.max_retries) + " retries");
      }
    }
  }
  return picos;
}

UeDrop drop_ue_positions(const ScenarioConfig& config, const std::vector<Position>& macros,
                         const std::vector<Position>& picos, Rng& rng) {
  config.validate();
  UeDrop drop;
  auto place = [&](auto&& sampler, const std::string& where) {
    for (int attempt = 0; attempt < config.max_retries; ++attempt) {
      const Position p = sampler();
      if (far_from_all(p, picos, config.min_pico_ue_m) && in_coverage(p, macros, config.isd_m)) {
        drop.positions.push_back(p);
        return;
      }
    }
    throw DropGenerationError("could not place UE in " + where + " within " +
                              std::to_string(config.max_retries) + " retries");
  };

  if (config.ue_distribution == UeDistribution::Uniform) {
    for (std::size_t m = 0; m < macros.size(); ++m) {
      for (int k = 0; k < config.ues_per_macro; ++k) {
        place([&] { return uniform_in_hexagon(macros[m], config.isd_m, rng); },
              "macro region " + std::to_string(m));
      }
    }
  } else {
    if (picos.empty()) throw DropGenerationError("clustered UE drop requires picos");
    for (std::size_t c = 0; c < picos.size(); ++c) {
      for (int k = 0; k < config.ues_per_pico; ++k) {
        place([&] { return uniform_in_disk(picos[c], config.cluster_radius_m, rng); },
              "cluster " + std::to_string(c));
        drop.cluster.push_back(c);
      }
    }
  }
  return drop;
}

std::vector<ServingCell> associate_ues(const NetworkLayout& layout, const GainMatrix& gains,
                                       const ScenarioConfig& config) {
  std::vector<ServingCell> association(layout.ues.size());
  if (config.ue_distribution == UeDistribution::Clustered) {
    for (std::size_t u = 0; u < layout.ues.size(); ++u)
      association[u] = {ServingCell::Tier::Pico, layout.ue_cluster.at(u)};
    return association;
  }

  for (std::size_t u = 0; u < layout.ues.size(); ++u) {
    const std::size_t ue = layout.ue_node(u);
    double best = -std::numeric_limits<double>::infinity();
    ServingCell serving{};
    for (std::size_t m = 0; m < layout.macros.size(); ++m) {
      const double rss = config.macro_power_dbm + linear_to_db(gains(layout.macro_node(m), ue));
      if (rss > best) {
        best = rss;
        serving = {ServingCell::Tier::Macro, m};
      }
    }
    for (std::size_t p = 0; p < layout.picos.size(); ++p) {
      const double rss = config.pico_power_dbm + linear_to_db(gains(layout.pico_node(p), ue)) +
                         config.association_bias_db;
      if (rss > best) {
        best = rss;
        serving = {ServingCell::Tier::Pico, p};
      }
    }
    association[u] = serving;
  }
  return association;
}

std::vector<NodeRole> designate_roles(const std::vector<ServingCell>& association,
                                      std::size_t num_macros, std::size_t num_picos, Rng& rng) {
  // Cells in a fixed order (macros then picos) so the RNG draw sequence is stable.
  std::vector<std::vector<std::size_t>> members(num_macros + num_picos);
  for (std::size_t u = 0; u < association.size(); ++u) {
    const ServingCell& s = association[u];
    members.at(s.is_pico() ? num_macros + s.index : s.index).push_back(u);
  }

  std::vector<NodeRole> roles(association.size(), NodeRole::DownlinkUE);
  std::bernoulli_distribution coin(0.5);
  for (auto& cell : members) {
    if (cell.empty()) continue;
    std::shuffle(cell.begin(), cell.end(), rng);
    std::size_t num_ul = cell.size() / 2;
    if (cell.size() % 2 == 1 && coin(rng)) ++num_ul;
    for (std::size_t i = 0; i < cell.size(); ++i)
      roles[cell[i]] = i < num_ul ? NodeRole::UplinkUE : NodeRole::DownlinkUE;
  }
  return roles;
}

NetworkLayout single_cell_layout(const std::vector<Position>& ues, const std::vector<NodeRole>& roles) {
  if (ues.size() != roles.size()) throw ConfigError("one role per UE required");
  NetworkLayout layout;
  layout.picos = {{0.0, 0.0}};
  layout.ues = ues;
  layout.ue_roles = roles;
  layout.association.assign(ues.size(), {ServingCell::Tier::Pico, 0});
  layout.ue_cluster.assign(ues.size(), 0);
  return layout;
}

NetworkLayout random_single_cell_layout(int num_ues, double radius_m, double min_distance_m,
                                        Rng& rng) {
  if (num_ues < 1) throw ConfigError("single-cell drop needs at least one UE");
  if (!(radius_m > min_distance_m)) throw ConfigError("cell radius must exceed the minimum distance");
  std::vector<Position> ues;
  const Position bs{0.0, 0.0};
  while (ues.size() < static_cast<std::size_t>(num_ues)) {
    const Position p = uniform_in_disk(bs, radius_m, rng);
    if (distance(p, bs) >= min_distance_m) ues.push_back(p);
  }
  std::vector<ServingCell> association(ues.size(), {ServingCell::Tier::Pico, 0});
  return single_cell_layout(ues, designate_roles(association, 0, 1, rng));
}

}  // namespace fdsim
