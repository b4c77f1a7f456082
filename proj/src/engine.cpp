#include "fdsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdsim/units.hpp"

namespace fdsim {

std::optional<Reception<DlBreakdown>> compute_dl_sinr(std::size_t cell,
                                                      std::span<const SchedulingDecision> decisions,
                                                      const LinkBudget& budget) {
  const SchedulingDecision& own = decisions[cell];
  if (!own.dl_active()) return std::nullopt;
  const NetworkLayout& layout = *budget.layout;
  const GainMatrix& g = *budget.gains;
  const std::size_t rx = layout.ue_node(*own.dl_ue);

  Reception<DlBreakdown> r;
  r.signal = g(layout.pico_node(cell), rx) * own.p_bs;
  r.breakdown.noise = budget.noise_ue_mw;
  if (budget.full_duplex && own.ul_active())
    r.breakdown.intra_cell_u2d = g(layout.ue_node(*own.ul_ue), rx) * own.p_ue;
  for (std::size_t c = 0; c < decisions.size(); ++c) {
    if (c == cell) continue;
    const SchedulingDecision& other = decisions[c];
    if (other.dl_active()) r.breakdown.inter_cell_b2d += g(layout.pico_node(c), rx) * other.p_bs;
    if (budget.full_duplex && other.ul_active())
      r.breakdown.inter_cell_u2d += g(layout.ue_node(*other.ul_ue), rx) * other.p_ue;
  }
  r.sinr = r.signal / r.breakdown.total();
  return r;
}

std::optional<Reception<UlBreakdown>> compute_ul_sinr(std::size_t cell,
                                                      std::span<const SchedulingDecision> decisions,
                                                      const LinkBudget& budget) {
  const SchedulingDecision& own = decisions[cell];
  if (!own.ul_active()) return std::nullopt;
  const NetworkLayout& layout = *budget.layout;
  const GainMatrix& g = *budget.gains;
  const std::size_t rx = layout.pico_node(cell);

  Reception<UlBreakdown> r;
  r.signal = g(layout.ue_node(*own.ul_ue), rx) * own.p_ue;
  r.breakdown.noise = budget.noise_pico_mw;
  if (budget.full_duplex && own.dl_active()) r.breakdown.residual_self = budget.sic.residual_mw(own.p_bs);
  for (std::size_t c = 0; c < decisions.size(); ++c) {
    if (c == cell) continue;
    const SchedulingDecision& other = decisions[c];
    if (budget.full_duplex && other.dl_active())
      r.breakdown.inter_cell_b2b += g(layout.pico_node(c), rx) * other.p_bs;
    if (other.ul_active()) r.breakdown.inter_cell_u2b += g(layout.ue_node(*other.ul_ue), rx) * other.p_ue;
  }
  r.sinr = r.signal / r.breakdown.total();
  return r;
}

double shannon_rate(double sinr, double bandwidth_hz, std::optional<double> cap_bps_hz) {
  if (sinr < 0.0) throw std::domain_error("SINR must be nonnegative");
  double se = std::log2(1.0 + sinr);
  if (cap_bps_hz) se = std::min(se, *cap_bps_hz);
  return bandwidth_hz * se;
}

double Metrics::se() const {
  if (duration_s <= 0.0 || b_tot_hz <= 0.0) return 0.0;
  return (t_tot_ul + t_tot_dl) / (duration_s * b_tot_hz);
}

double Metrics::ee() const {
  const double energy = e_tot_ul + e_tot_dl;
  return energy > 0.0 ? (t_tot_ul + t_tot_dl) / energy : 0.0;
}

const char* category_name(InterferenceCategory c) {
  switch (c) {
    case InterferenceCategory::DlIntraCellU2D: return "intra_cell_u2d";
    case InterferenceCategory::DlInterCellU2D: return "inter_cell_u2d";
    case InterferenceCategory::DlInterCellB2D: return "inter_cell_b2d";
    case InterferenceCategory::DlNoise: return "noise";
    case InterferenceCategory::UlResidualSelf: return "residual_self";
    case InterferenceCategory::UlInterCellB2B: return "inter_cell_b2b";
    case InterferenceCategory::UlInterCellU2B: return "inter_cell_u2b";
    case InterferenceCategory::UlNoise: return "noise";
  }
  return "unknown";
}

const char* category_direction(InterferenceCategory c) {
  return static_cast<int>(c) < static_cast<int>(InterferenceCategory::UlResidualSelf) ? "DL" : "UL";
}

void InterferenceStats::add(InterferenceCategory c, double mw, bool keep_sample) {
  const auto i = static_cast<std::size_t>(c);
  sum_mw[i] += mw;
  ++count[i];
  if (keep_sample && mw > 0.0) samples_dbm[i].push_back(mw_to_dbm(mw));
}

double InterferenceStats::mean_mw(InterferenceCategory c) const {
  const auto i = static_cast<std::size_t>(c);
  return count[i] ? sum_mw[i] / static_cast<double>(count[i]) : 0.0;
}

PairContext intra_cell_context(const SchedulingDecision& decision, const NetworkLayout& layout,
                               const GainMatrix& gains, const LinkBudget& budget,
                               const PowerLimits& limits) {
  if (!decision.ul_ue || !decision.dl_ue) throw std::invalid_argument("pair context needs both UEs");
  const std::size_t bs = layout.pico_node(decision.cell);
  const std::size_t ul = layout.ue_node(*decision.ul_ue);
  const std::size_t dl = layout.ue_node(*decision.dl_ue);
  PairContext ctx;
  ctx.alpha_b2d = gains(bs, dl);
  ctx.alpha_u2d = gains(ul, dl);
  ctx.alpha_u2b = gains(ul, bs);
  ctx.alpha_sic = budget.sic.alpha();
  ctx.n0_dl = budget.noise_ue_mw;
  ctx.n0_ul = budget.noise_pico_mw;
  ctx.p_bs_max = limits.p_bs_max_mw;
  ctx.p_ue_max = limits.p_ue_max_mw;
  return ctx;
}

DropResult run_drop(const NetworkLayout& layout, const GainMatrix& gains,
                    const ChannelModel& channel, SchedulerKind scheduler,
                    const EngineConfig& config, DropObserver* observer) {
  if (config.ttis < 1) throw std::invalid_argument("a drop needs at least one TTI");
  if (gains.size() != layout.node_count()) throw std::invalid_argument("gain matrix does not match layout");

  const bool fd = is_full_duplex(scheduler);
  const double rx_bandwidth = fd ? config.bandwidth_hz : config.bandwidth_hz / 2.0;
  const std::size_t num_cells = layout.picos.size();
  const std::size_t num_ues = layout.ues.size();
  const PowerLimits limits{dbm_to_mw(config.p_bs_dbm), dbm_to_mw(config.p_ue_dbm)};

  LinkBudget budget;
  budget.layout = &layout;
  budget.gains = &gains;
  budget.full_duplex = fd;
  budget.noise_ue_mw = channel.noise_power_mw(NodeKind::Ue, rx_bandwidth);
  budget.noise_pico_mw = channel.noise_power_mw(NodeKind::Pico, rx_bandwidth);
  budget.sic = SicModel{config.sic_db};

  DropResult result;
  std::vector<CellCandidates> cells(num_cells);
  for (std::size_t c = 0; c < num_cells; ++c) {
    cells[c].cell = c;
    cells[c].ul = layout.pico_members(c, NodeRole::UplinkUE);
    cells[c].dl = layout.pico_members(c, NodeRole::DownlinkUE);
    result.pico_ues += cells[c].ul.size() + cells[c].dl.size();
  }

  // Interference-blind, noise-limited rate on the receive band: the PF
  // scheduler's view of each UE.
  std::vector<double> rate_estimate(num_ues, 0.0);
  for (std::size_t u = 0; u < num_ues; ++u) {
    if (!layout.association[u].is_pico()) continue;
    const std::size_t bs = layout.pico_node(layout.association[u].index);
    const std::size_t ue = layout.ue_node(u);
    const double snr = layout.ue_roles[u] == NodeRole::DownlinkUE
                           ? gains(bs, ue) * limits.p_bs_max_mw / budget.noise_ue_mw
                           : gains(ue, bs) * limits.p_ue_max_mw / budget.noise_pico_mw;
    rate_estimate[u] = shannon_rate(snr, rx_bandwidth, config.se_cap_bps_hz);
  }

  std::vector<Position> ue_positions = layout.ues;
  PfState pf(num_ues, num_cells, config.pf);
  std::vector<SchedulingDecision> decisions(num_cells);
  std::vector<double> ue_rates(num_ues, 0.0);
  std::vector<unsigned char> served(num_ues, 0);

  Metrics& m = result.metrics;
  m.duration_s = config.ttis * config.tti_s;
  m.b_tot_hz = config.bandwidth_hz;
  const int stride = std::max(1, config.sample_stride);

  for (int tti = 0; tti < config.ttis; ++tti) {
    for (std::size_t c = 0; c < num_cells; ++c) {
      SchedulingDecision d;
      switch (scheduler) {
        case SchedulerKind::HdPf: d = schedule_hd(cells[c], pf, rate_estimate, limits); break;
        case SchedulerKind::FdPf:
        case SchedulerKind::FdPfPc: d = schedule_fd_pf(cells[c], pf, rate_estimate, limits); break;
        case SchedulerKind::FdUp:
        case SchedulerKind::FdUpPc:
          d = schedule_fd_up(cells[c], pf, rate_estimate, ue_positions, limits);
          break;
      }
      if (uses_power_control(scheduler) && d.ul_ue && d.dl_ue)
        d = apply_binary_pc(d, intra_cell_context(d, layout, gains, budget, limits));
      decisions[c] = d;
    }
    if (observer) observer->on_decisions(tti, decisions);

    std::fill(ue_rates.begin(), ue_rates.end(), 0.0);
    const bool keep = tti % stride == 0;
    for (std::size_t c = 0; c < num_cells; ++c) {
      const SchedulingDecision& d = decisions[c];
      if (auto dl = compute_dl_sinr(c, decisions, budget)) {
        const double r = shannon_rate(dl->sinr, rx_bandwidth, config.se_cap_bps_hz);
        ue_rates[*d.dl_ue] = r;
        m.t_tot_dl += r * config.tti_s;
        m.e_tot_dl += d.p_bs * 1e-3 * config.tti_s;
        auto& s = result.interference;
        s.add(InterferenceCategory::DlIntraCellU2D, dl->breakdown.intra_cell_u2d, keep);
        s.add(InterferenceCategory::DlInterCellU2D, dl->breakdown.inter_cell_u2d, keep);
        s.add(InterferenceCategory::DlInterCellB2D, dl->breakdown.inter_cell_b2d, keep);
        s.add(InterferenceCategory::DlNoise, dl->breakdown.noise, keep);
      }
      if (auto ul = compute_ul_sinr(c, decisions, budget)) {
        const double r = shannon_rate(ul->sinr, rx_bandwidth, config.se_cap_bps_hz);
        ue_rates[*d.ul_ue] = r;
        m.t_tot_ul += r * config.tti_s;
        m.e_tot_ul += d.p_ue * 1e-3 * config.tti_s;
        auto& s = result.interference;
        s.add(InterferenceCategory::UlResidualSelf, ul->breakdown.residual_self, keep);
        s.add(InterferenceCategory::UlInterCellB2B, ul->breakdown.inter_cell_b2b, keep);
        s.add(InterferenceCategory::UlInterCellU2B, ul->breakdown.inter_cell_u2b, keep);
        s.add(InterferenceCategory::UlNoise, ul->breakdown.noise, keep);
      }
    }
    if (observer) observer->on_rates(tti, ue_rates);
    for (std::size_t u = 0; u < num_ues; ++u)
      if (ue_rates[u] > 0.0) served[u] = 1;
    pf.update(ue_rates);
  }
  result.pf_served_ues = static_cast<std::size_t>(std::count(served.begin(), served.end(), 1));
  return result;
}

}  // namespace fdsim
