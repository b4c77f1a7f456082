#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdsim/rng.hpp"

namespace fdsim {

class GainMatrix;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DropGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Position&) const = default;
};

double distance(Position a, Position b);

enum class NodeRole { MacroBS, PicoBS, UplinkUE, DownlinkUE };

/// Physical node kind; selects the pathloss/shadowing class and noise figure.
enum class NodeKind { Macro, Pico, Ue };

enum class UeDistribution { Uniform, Clustered };

std::string to_string(NodeRole role);
std::string to_string(UeDistribution dist);
UeDistribution parse_ue_distribution(const std::string& name);

struct ScenarioConfig {
  double isd_m = 500.0;
  int num_macro_sites = 7;
  int picos_per_macro = 6;
  UeDistribution ue_distribution = UeDistribution::Uniform;
  int ues_per_macro = 96;
  int ues_per_pico = 4;
  double cluster_radius_m = 40.0;
  double association_bias_db = 6.0;

  // Drop constraints. UE-UE has none.
  double min_macro_pico_m = 75.0;
  double min_pico_pico_m = 40.0;
  double min_pico_ue_m = 10.0;
  int max_retries = 1000;

  // Transmit powers used for RSS-based association.
  double macro_power_dbm = 46.0;
  double pico_power_dbm = 24.0;

  std::uint64_t seed = 1;

  /// Throws ConfigError on any violated field constraint.
  void validate() const;
};

/// Serving cell of a UE. Picos and macros are indexed within their own tier.
struct ServingCell {
  enum class Tier { Macro, Pico };
  Tier tier = Tier::Pico;
  std::size_t index = 0;

  bool is_pico() const { return tier == Tier::Pico; }
  bool operator==(const ServingCell&) const = default;
};

/// Node geometry for one drop.
///
/// Nodes share a flat id space used by the gain matrix: macros first, then
/// picos, then UEs.
struct NetworkLayout {
  std::vector<Position> macros;
  std::vector<Position> picos;
  std::vector<Position> ues;
  std::vector<NodeRole> ue_roles;       // UplinkUE or DownlinkUE
  std::vector<ServingCell> association;  // one entry per UE
  std::vector<std::size_t> ue_cluster;   // clustered mode: pico each UE was dropped around

  std::size_t node_count() const { return macros.size() + picos.size() + ues.size(); }
  std::size_t macro_node(std::size_t i) const { return i; }
  std::size_t pico_node(std::size_t i) const { return macros.size() + i; }
  std::size_t ue_node(std::size_t i) const { return macros.size() + picos.size() + i; }

  NodeKind kind(std::size_t node) const;
  Position position(std::size_t node) const;
  NodeRole role(std::size_t node) const;

  /// UE indices served by pico `cell` with the given role, ascending.
  std::vector<std::size_t> pico_members(std::size_t cell, NodeRole role) const;
};

/// Hexagonal macro layout: one site at the origin plus six at distance isd.
std::vector<Position> generate_macro_layout(const ScenarioConfig& config);

/// True when `p` lies in the hexagonal region (inradius isd/2) served by `macro`.
bool in_macro_region(Position p, Position macro, double isd_m);

/// True when `p` lies in the union of all macro regions.
bool in_coverage(Position p, const std::vector<Position>& macros, double isd_m);

std::vector<Position> drop_picos(const ScenarioConfig& config, const std::vector<Position>& macros,
                                 Rng& rng);

struct UeDrop {
  std::vector<Position> positions;
  std::vector<std::size_t> cluster;  // empty in uniform mode
};

/// UE positions only; roles depend on the association and are assigned by
/// designate_roles().
UeDrop drop_ue_positions(const ScenarioConfig& config, const std::vector<Position>& macros,
                         const std::vector<Position>& picos, Rng& rng);

/// Strongest-RSS association with range-extension bias towards picos
/// (uniform mode) or unconditional attachment to the cluster pico.
std::vector<ServingCell> associate_ues(const NetworkLayout& layout, const GainMatrix& gains,
                                       const ScenarioConfig& config);

/// Even UL/DL split inside every cell, random assignment within the split.
std::vector<NodeRole> designate_roles(const std::vector<ServingCell>& association,
                                      std::size_t num_macros, std::size_t num_picos, Rng& rng);

/// Single isolated pico at the origin with explicitly placed UEs; used by the
/// single-cell studies.
NetworkLayout single_cell_layout(const std::vector<Position>& ues, const std::vector<NodeRole>& roles);

/// Single pico with `num_ues` UEs dropped uniformly in a disk of `radius_m`
/// (at least `min_distance_m` from the pico) and split evenly into UL/DL.
NetworkLayout random_single_cell_layout(int num_ues, double radius_m, double min_distance_m,
                                        Rng& rng);

}  // namespace fdsim
