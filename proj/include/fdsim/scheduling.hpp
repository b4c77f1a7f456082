#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdsim/sumrate.hpp"
#include "fdsim/topology.hpp"

namespace fdsim {

enum class SchedulerKind { HdPf, FdPf, FdPfPc, FdUp, FdUpPc };

std::string to_string(SchedulerKind kind);
SchedulerKind parse_scheduler(const std::string& name);
bool is_full_duplex(SchedulerKind kind);
bool uses_power_control(SchedulerKind kind);
bool uses_pairing(SchedulerKind kind);
const std::vector<SchedulerKind>& all_schedulers();

struct PfConfig {
  int window_length = 500;
  double fairness_exponent = 0.05;
  double floor_bps = 1e3;
  // UP leader direction alternates every TTI; when false it only flips on
  // TTIs where a pair was actually formed.
  bool alternate_every_tti = true;
};

enum class LeaderTurn { UplinkFirst, DownlinkFirst };

/// Windowed proportional-fair bookkeeping for every UE of a drop, plus the
/// per-cell leader alternation used by distance-aware pairing.
class PfState {
 public:
  PfState(std::size_t num_ues, std::size_t num_cells, PfConfig config = {});

  const PfConfig& config() const { return config_; }
  double average(std::size_t ue) const { return avg_[ue]; }
  LeaderTurn turn(std::size_t cell) const { return turn_[cell]; }
  void flip_turn(std::size_t cell);

  /// rate / avg^exponent
  double metric(std::size_t ue, double instantaneous_rate) const;

  /// avg <- (1 - 1/W) avg + rate / W for every UE, floored. `served_rates`
  /// holds one entry per UE; unserved UEs carry 0.
  void update(std::span<const double> served_rates);

 private:
  PfConfig config_;
  std::vector<double> avg_;
  std::vector<LeaderTurn> turn_;
};

/// UEs of one pico cell that may be scheduled this TTI.
struct CellCandidates {
  std::size_t cell = 0;
  std::vector<std::size_t> ul;
  std::vector<std::size_t> dl;
};

struct PowerLimits {
  double p_bs_max_mw = 0.0;
  double p_ue_max_mw = 0.0;
};

struct SchedulingDecision {
  std::size_t cell = 0;
  std::optional<std::size_t> ul_ue;
  std::optional<std::size_t> dl_ue;
  double p_bs = 0.0;  // mW
  double p_ue = 0.0;  // mW

  bool dl_active() const { return dl_ue.has_value() && p_bs > 0.0; }
  bool ul_active() const { return ul_ue.has_value() && p_ue > 0.0; }
};

/// PF argmax over `candidates`; lowest UE index on ties. `rate_estimate` is
/// indexed by UE.
std::optional<std::size_t> pf_select(std::span<const std::size_t> candidates, const PfState& state,
                                     std::span<const double> rate_estimate);

/// Candidate farthest from `leader`; lowest UE index on distance ties.
std::optional<std::size_t> farthest_partner(std::span<const std::size_t> candidates,
                                            const Position& leader,
                                            std::span<const Position> ue_positions);

/// Independent per-direction PF selection at full power (interference blind).
SchedulingDecision schedule_fd_pf(const CellCandidates& cell, const PfState& state,
                                  std::span<const double> rate_estimate, const PowerLimits& limits);

/// Distance-aware joint pairing: a PF leader from the direction whose turn it
/// is, paired with the farthest UE of the other direction. Flips the cell's
/// leader turn.
SchedulingDecision schedule_fd_up(const CellCandidates& cell, PfState& state,
                                  std::span<const double> rate_estimate,
                                  std::span<const Position> ue_positions,
                                  const PowerLimits& limits);

/// Half-duplex FDD: independent PF per direction on its own half band.
SchedulingDecision schedule_hd(const CellCandidates& cell, const PfState& state,
                               std::span<const double> rate_estimate, const PowerLimits& limits);

/// Replaces the powers with the binary power-control solution for `ctx`.
/// Decisions without both UEs pass through unchanged.
SchedulingDecision apply_binary_pc(SchedulingDecision decision, const PairContext& ctx);

}  // namespace fdsim
