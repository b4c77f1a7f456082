#include "fdsim/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdsim {

std::string to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::HdPf: return "HD_PF";
    case SchedulerKind::FdPf: return "FD_PF";
    case SchedulerKind::FdPfPc: return "FD_PF_PC";
    case SchedulerKind::FdUp: return "FD_UP";
    case SchedulerKind::FdUpPc: return "FD_UP_PC";
  }
  return "unknown";
}

SchedulerKind parse_scheduler(const std::string& name) {
  for (SchedulerKind k : all_schedulers())
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown scheduler '" + name + "'");
}

bool is_full_duplex(SchedulerKind kind) { return kind != SchedulerKind::HdPf; }

bool uses_power_control(SchedulerKind kind) {
  return kind == SchedulerKind::FdPfPc || kind == SchedulerKind::FdUpPc;
}

bool uses_pairing(SchedulerKind kind) {
  return kind == SchedulerKind::FdUp || kind == SchedulerKind::FdUpPc;
}

const std::vector<SchedulerKind>& all_schedulers() {
  static const std::vector<SchedulerKind> kinds{SchedulerKind::HdPf, SchedulerKind::FdPf,
                                                SchedulerKind::FdPfPc, SchedulerKind::FdUp,
                                                SchedulerKind::FdUpPc};
  return kinds;
}

PfState::PfState(std::size_t num_ues, std::size_t num_cells, PfConfig config)
    : config_(config),
      avg_(num_ues, config.floor_bps),
      turn_(num_cells, LeaderTurn::UplinkFirst) {
  if (config_.window_length < 1) throw std::invalid_argument("PF window length must be >= 1");
  if (!(config_.floor_bps > 0.0)) throw std::invalid_argument("PF floor must be positive");
}

void PfState::flip_turn(std::size_t cell) {
  turn_[cell] =
      turn_[cell] == LeaderTurn::UplinkFirst ? LeaderTurn::DownlinkFirst : LeaderTurn::UplinkFirst;
}

double PfState::metric(std::size_t ue, double instantaneous_rate) const {
  return instantaneous_rate / std::pow(avg_[ue], config_.fairness_exponent);
}

void PfState::update(std::span<const double> served_rates) {
  if (served_rates.size() != avg_.size()) throw std::invalid_argument("one rate per UE required");
  const double w = 1.0 / static_cast<double>(config_.window_length);
  for (std::size_t u = 0; u < avg_.size(); ++u) {
    if (served_rates[u] < 0.0) throw std::invalid_argument("rates must be nonnegative");
    avg_[u] = std::max(config_.floor_bps, (1.0 - w) * avg_[u] + w * served_rates[u]);
  }
}

std::optional<std::size_t> pf_select(std::span<const std::size_t> candidates, const PfState& state,
                                     std::span<const double> rate_estimate) {
  std::optional<std::size_t> best;
  double best_metric = -std::numeric_limits<double>::infinity();
  for (std::size_t ue : candidates) {
    const double m = state.metric(ue, rate_estimate[ue]);
    if (m > best_metric || (m == best_metric && best && ue < *best)) {
      best_metric = m;
      best = ue;
    }
  }
  return best;
}

std::optional<std::size_t> farthest_partner(std::span<const std::size_t> candidates,
                                            const Position& leader,
                                            std::span<const Position> ue_positions) {
  std::optional<std::size_t> best;
  double best_distance = -1.0;
  for (std::size_t ue : candidates) {
    const double d = distance(leader, ue_positions[ue]);
    if (d > best_distance || (d == best_distance && best && ue < *best)) {
      best_distance = d;
      best = ue;
    }
  }
  return best;
}

namespace {

SchedulingDecision full_power(std::size_t cell, std::optional<std::size_t> ul,
                              std::optional<std::size_t> dl, const PowerLimits& limits) {
  return {cell, ul, dl, dl ? limits.p_bs_max_mw : 0.0, ul ? limits.p_ue_max_mw : 0.0};
}

}  // namespace

SchedulingDecision schedule_fd_pf(const CellCandidates& cell, const PfState& state,
                                  std::span<const double> rate_estimate, const PowerLimits& limits) {
  return full_power(cell.cell, pf_select(cell.ul, state, rate_estimate),
                    pf_select(cell.dl, state, rate_estimate), limits);
}

SchedulingDecision schedule_fd_up(const CellCandidates& cell, PfState& state,
                                  std::span<const double> rate_estimate,
                                  std::span<const Position> ue_positions,
                                  const PowerLimits& limits) {
  std::optional<std::size_t> ul;
  std::optional<std::size_t> dl;
  const bool paired = !cell.ul.empty() && !cell.dl.empty();
  if (!paired) {
    // Single-direction cells schedule that direction alone.
    ul = pf_select(cell.ul, state, rate_estimate);
    dl = pf_select(cell.dl, state, rate_estimate);
  } else if (state.turn(cell.cell) == LeaderTurn::UplinkFirst) {
    ul = pf_select(cell.ul, state, rate_estimate);
    dl = farthest_partner(cell.dl, ue_positions[*ul], ue_positions);
  } else {
    dl = pf_select(cell.dl, state, rate_estimate);
    ul = farthest_partner(cell.ul, ue_positions[*dl], ue_positions);
  }
  if (paired || state.config().alternate_every_tti) state.flip_turn(cell.cell);
  return full_power(cell.cell, ul, dl, limits);
}

SchedulingDecision schedule_hd(const CellCandidates& cell, const PfState& state,
                               std::span<const double> rate_estimate, const PowerLimits& limits) {
  // Same selection rule as FD PF; the engine evaluates it on two FDD half bands.
  return schedule_fd_pf(cell, state, rate_estimate, limits);
}

SchedulingDecision apply_binary_pc(SchedulingDecision decision, const PairContext& ctx) {
  if (!decision.ul_ue || !decision.dl_ue) return decision;
  const PowerSolution s = binary_power_control(ctx);
  decision.p_bs = s.p_bs;
  decision.p_ue = s.p_ue;
  return decision;
}

}  // namespace fdsim
