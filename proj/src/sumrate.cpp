#include "fdsim/sumrate.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace fdsim {

void PairContext::validate() const {
  if (!(alpha_b2d > 0.0) || !(alpha_u2b > 0.0))
    throw std::invalid_argument("useful link gains must be positive");
  if (!(alpha_u2d >= 0.0) || !(alpha_sic >= 0.0))
    throw std::invalid_argument("interference coefficients must be nonnegative");
  if (!(n0_dl > 0.0) || !(n0_ul > 0.0)) throw std::invalid_argument("noise power must be positive");
  if (!(p_bs_max > 0.0) || !(p_ue_max > 0.0))
    throw std::invalid_argument("power limits must be positive");
}

std::string to_string(DuplexMode mode) {
  switch (mode) {
    case DuplexMode::FullDuplex: return "FD";
    case DuplexMode::DownlinkOnly: return "HD_DL_only";
    case DuplexMode::UplinkOnly: return "HD_UL_only";
    case DuplexMode::Silent: return "silent";
  }
  return "unknown";
}

DuplexMode mode_of(double p_bs, double p_ue) {
  if (p_bs > 0.0 && p_ue > 0.0) return DuplexMode::FullDuplex;
  if (p_bs > 0.0) return DuplexMode::DownlinkOnly;
  if (p_ue > 0.0) return DuplexMode::UplinkOnly;
  return DuplexMode::Silent;
}

double objective(const PairContext& ctx, double p_bs, double p_ue) {
  if (p_bs < 0.0 || p_ue < 0.0) throw std::domain_error("transmit power must be nonnegative");
  const double dl_sinr = ctx.alpha_b2d * p_bs / (ctx.n0_dl + ctx.alpha_u2d * p_ue);
  const double ul_sinr = ctx.alpha_u2b * p_ue / (ctx.n0_ul + ctx.alpha_sic * p_bs);
  return std::log2(1.0 + dl_sinr) + std::log2(1.0 + ul_sinr);
}

PowerSolution binary_power_control(const PairContext& ctx) {
  // Candidate order encodes the tie-break: FD, then DL-only, then UL-only.
  const std::array<std::pair<double, double>, 3> candidates{{
      {ctx.p_bs_max, ctx.p_ue_max},
      {ctx.p_bs_max, 0.0},
      {0.0, ctx.p_ue_max},
  }};
  PowerSolution best;
  best.objective = -std::numeric_limits<double>::infinity();
  for (const auto& [p_bs, p_ue] : candidates) {
    const double f = objective(ctx, p_bs, p_ue);
    if (f > best.objective) best = {p_bs, p_ue, f, mode_of(p_bs, p_ue)};
  }
  return best;
}

PowerSolution exhaustive_search_oracle(const PairContext& ctx, std::size_t grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  const double steps = static_cast<double>(grid_points - 1);
  auto level = [&](std::size_t i, double pmax) {
    return i + 1 == grid_points ? pmax : pmax * static_cast<double>(i) / steps;
  };
  PowerSolution best;
  best.objective = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double p_bs = level(i, ctx.p_bs_max);
    for (std::size_t j = 0; j < grid_points; ++j) {
      const double p_ue = level(j, ctx.p_ue_max);
      const double f = objective(ctx, p_bs, p_ue);
      if (f > best.objective) best = {p_bs, p_ue, f, mode_of(p_bs, p_ue)};
    }
  }
  return best;
}

std::vector<SeEePoint> se_ee_curve(const PairContext& ctx, double p_bs_fixed,
                                   std::span<const double> p_ue_sweep, double band_fraction) {
  std::vector<SeEePoint> curve;
  curve.reserve(p_ue_sweep.size());
  for (double p_ue : p_ue_sweep) {
    if (p_ue > ctx.p_ue_max) throw std::domain_error("sweep exceeds the UE power limit");
    const double se = band_fraction * objective(ctx, p_bs_fixed, p_ue);
    const double total_w = (p_bs_fixed + p_ue) * 1e-3;
    curve.push_back({p_ue, se, total_w > 0.0 ? se / total_w : 0.0});
  }
  return curve;
}

bool is_convex_curve(std::span<const SeEePoint> curve, double rel_tol) {
  int sign = 0;
  for (std::size_t i = 2; i < curve.size(); ++i) {
    const double ax = curve[i - 1].se - curve[i - 2].se;
    const double ay = curve[i - 1].ee - curve[i - 2].ee;
    const double bx = curve[i].se - curve[i - 1].se;
    const double by = curve[i].ee - curve[i - 1].ee;
    const double cross = ax * by - ay * bx;
    const double scale = std::hypot(ax, ay) * std::hypot(bx, by);
    if (std::abs(cross) <= rel_tol * scale) continue;
    const int s = cross > 0 ? 1 : -1;
    if (sign != 0 && s != sign) return false;
    sign = s;
  }
  return true;
}

}  // namespace fdsim
