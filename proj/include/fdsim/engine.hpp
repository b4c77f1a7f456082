#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fdsim/channel.hpp"
#include "fdsim/scheduling.hpp"
#include "fdsim/topology.hpp"

namespace fdsim {

struct EngineConfig {
  double bandwidth_hz = 20e6;  // total band; HD splits it in two FDD halves
  double tti_s = 1e-3;
  int ttis = 1000;
  double p_bs_dbm = 24.0;
  double p_ue_dbm = 23.0;
  double sic_db = 110.0;
  std::optional<double> se_cap_bps_hz;  // rate cap per Hz; off by default
  int sample_stride = 10;               // keep every n-th TTI as a CDF sample
  PfConfig pf{};
};

/// Interference seen by a DL receiver (a UE), mW.
struct DlBreakdown {
  double intra_cell_u2d = 0.0;
  double inter_cell_u2d = 0.0;
  double inter_cell_b2d = 0.0;
  double noise = 0.0;

  double total() const { return intra_cell_u2d + inter_cell_u2d + inter_cell_b2d + noise; }
};

/// Interference seen by a UL receiver (a pico), mW.
struct UlBreakdown {
  double residual_self = 0.0;
  double inter_cell_b2b = 0.0;
  double inter_cell_u2b = 0.0;
  double noise = 0.0;

  double total() const { return residual_self + inter_cell_b2b + inter_cell_u2b + noise; }
};

template <typename Breakdown>
struct Reception {
  double signal = 0.0;  // mW
  double sinr = 0.0;
  Breakdown breakdown{};
};

/// Everything that is fixed over a drop and needed to evaluate one TTI.
struct LinkBudget {
  const NetworkLayout* layout = nullptr;
  const GainMatrix* gains = nullptr;
  bool full_duplex = true;
  double noise_ue_mw = 0.0;    // at the receive bandwidth of the duplex mode
  double noise_pico_mw = 0.0;
  SicModel sic{};
};

/// SINR of the DL UE of `decisions[cell]`; nullopt when its DL is inactive.
/// In HD only other picos interfere (UL lives on the other FDD band).
std::optional<Reception<DlBreakdown>> compute_dl_sinr(std::size_t cell,
                                                      std::span<const SchedulingDecision> decisions,
                                                      const LinkBudget& budget);

/// SINR at pico `cell` for its UL UE; nullopt when the UL is inactive. The
/// residual self-interference applies only in FD with the cell's own DL on.
std::optional<Reception<UlBreakdown>> compute_ul_sinr(std::size_t cell,
                                                      std::span<const SchedulingDecision> decisions,
                                                      const LinkBudget& budget);

/// Shannon rate in bits/s, optionally capped at cap_bps_hz * bandwidth.
double shannon_rate(double sinr, double bandwidth_hz, std::optional<double> cap_bps_hz = {});

/// Accumulated totals for a pico tier; SE and EE follow from them.
struct Metrics {
  double t_tot_ul = 0.0;  // bits
  double t_tot_dl = 0.0;
  double e_tot_ul = 0.0;  // J
  double e_tot_dl = 0.0;
  double duration_s = 0.0;
  double b_tot_hz = 0.0;

  double p_tot_ul() const { return duration_s > 0 ? e_tot_ul / duration_s : 0.0; }  // W
  double p_tot_dl() const { return duration_s > 0 ? e_tot_dl / duration_s : 0.0; }
  double se() const;  // bits/s/Hz
  double ee() const;  // bits/J; 0 when no energy was spent
};

enum class InterferenceCategory {
  DlIntraCellU2D,
  DlInterCellU2D,
  DlInterCellB2D,
  DlNoise,
  UlResidualSelf,
  UlInterCellB2B,
  UlInterCellU2B,
  UlNoise,
};
inline constexpr std::size_t kNumCategories = 8;

const char* category_name(InterferenceCategory c);
const char* category_direction(InterferenceCategory c);

/// Per-category interference over one drop: running mean over every
/// receiver-TTI (mW) plus a strided sample set for CDF export (dBm, only
/// strictly positive values).
struct InterferenceStats {
  std::array<double, kNumCategories> sum_mw{};
  std::array<std::size_t, kNumCategories> count{};
  std::array<std::vector<double>, kNumCategories> samples_dbm;

  void add(InterferenceCategory c, double mw, bool keep_sample);
  double mean_mw(InterferenceCategory c) const;
};

struct DropResult {
  Metrics metrics;
  InterferenceStats interference;
  std::size_t pico_ues = 0;
  std::size_t pf_served_ues = 0;
};

/// Optional per-TTI hooks for tracing and hand-trace tests.
struct DropObserver {
  virtual ~DropObserver() = default;
  virtual void on_decisions(int /*tti*/, std::span<const SchedulingDecision> /*decisions*/) {}
  virtual void on_rates(int /*tti*/, std::span<const double> /*ue_rates*/) {}
};

/// Pair context of `decision` from intra-cell quantities only.
PairContext intra_cell_context(const SchedulingDecision& decision, const NetworkLayout& layout,
                               const GainMatrix& gains, const LinkBudget& budget,
                               const PowerLimits& limits);

/// Runs the TTI loop of one drop for the pico tier: schedule, power control,
/// SINR, rates, PF update, accumulation. Throws std::invalid_argument when
/// config.ttis < 1.
DropResult run_drop(const NetworkLayout& layout, const GainMatrix& gains,
                    const ChannelModel& channel, SchedulerKind scheduler,
                    const EngineConfig& config, DropObserver* observer = nullptr);

}  // namespace fdsim
