#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdsim {

/// Channel and power quantities of one UL/DL pair served by a single FD cell.
///
/// The DL receiver (a UE) and the UL receiver (the BS) have different noise
/// figures, so the noise power is carried per direction. A single-N0
/// formulation is the special case n0_dl == n0_ul.
struct PairContext {
  double alpha_b2d = 0.0;  // BS -> DL UE
  double alpha_u2d = 0.0;  // UL UE -> DL UE
  double alpha_u2b = 0.0;  // UL UE -> BS
  double alpha_sic = 0.0;  // residual self-interference coefficient
  double n0_dl = 0.0;      // mW
  double n0_ul = 0.0;      // mW
  double p_bs_max = 0.0;   // mW
  double p_ue_max = 0.0;   // mW

  /// Throws std::invalid_argument unless the useful gains, noises and power
  /// limits are positive and the interference coefficients nonnegative.
  void validate() const;
};

enum class DuplexMode { FullDuplex, DownlinkOnly, UplinkOnly, Silent };

std::string to_string(DuplexMode mode);

struct PowerSolution {
  double p_bs = 0.0;
  double p_ue = 0.0;
  double objective = 0.0;  // bits per channel use
  DuplexMode mode = DuplexMode::Silent;
};

DuplexMode mode_of(double p_bs, double p_ue);

/// Sum of DL and UL Shannon rates (log2) for the given transmit powers.
/// Power 0 is admitted as muting; negative power throws std::domain_error.
double objective(const PairContext& ctx, double p_bs, double p_ue);

/// Best of the three binary candidates (0, Pue), (Pbs, 0), (Pbs, Pue).
/// Exact ties go to full duplex first, then DL-only.
PowerSolution binary_power_control(const PairContext& ctx);

/// Argmax over a grid_points x grid_points grid spanning [0, Pmax] on each
/// axis, endpoints included. Brute-force reference for binary_power_control.
PowerSolution exhaustive_search_oracle(const PairContext& ctx, std::size_t grid_points);

struct SeEePoint {
  double p_ue_mw = 0.0;
  double se = 0.0;  // bits/s/Hz
  double ee = 0.0;  // bits/s/Hz per W
};

/// Parametric SE-EE curve obtained by sweeping the UL power with the BS power
/// fixed. `band_fraction` scales the SE when each direction only occupies a
/// share of the total band (0.5 for FDD half duplex). EE at zero total power
/// is 0.
std::vector<SeEePoint> se_ee_curve(const PairContext& ctx, double p_bs_fixed,
                                   std::span<const double> p_ue_sweep,
                                   double band_fraction = 1.0);

/// True when the polyline through the curve points never changes turning
/// direction, i.e. every chord stays on one side of the curve. Cross products
/// with magnitude below `rel_tol` of the segment scale count as collinear.
bool is_convex_curve(std::span<const SeEePoint> curve, double rel_tol = 1e-9);

}  // namespace fdsim
