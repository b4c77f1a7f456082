#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "fdsim/rng.hpp"
#include "fdsim/topology.hpp"

namespace fdsim {

enum class LinkClass { MacroToUE, PicoToUE, UEToUE, PicoToPico, MacroToPico, UEToPico };
inline constexpr std::size_t kNumLinkClasses = 6;

std::string to_string(LinkClass c);

/// Link class of a (tx, rx) node-kind pair. Macro-macro links have no class
/// and raise ConfigError.
LinkClass classify_link(NodeKind tx, NodeKind rx);

/// Log-distance model: PL[dB] = intercept + slope * log10(d / 1 km).
struct PathlossModel {
  double intercept_db = 0.0;
  double slope_db = 0.0;
};

struct ChannelConfig {
  std::array<PathlossModel, kNumLinkClasses> pathloss{{
      {128.1, 37.6},   // MacroToUE
      {140.7, 36.7},   // PicoToUE
      {145.4, 37.5},   // UEToUE
      {169.36, 40.0},  // PicoToPico
      {125.2, 36.3},   // MacroToPico
      {140.7, 36.7},   // UEToPico, reciprocal of PicoToUE
  }};
  std::array<double, kNumLinkClasses> shadow_sigma_db{{10.0, 10.0, 12.0, 6.0, 6.0, 10.0}};
  double min_distance_m = 1.0;
  double thermal_density_dbm_hz = -174.0;
  double noise_figure_macro_db = 5.0;
  double noise_figure_pico_db = 13.0;
  double noise_figure_ue_db = 9.0;
};

/// Residual self-interference after cancellation: alpha = 10^(-sic_db/10).
struct SicModel {
  double sic_db = 110.0;

  /// Infinite sic_db yields a perfect canceller (alpha = 0).
  double alpha() const;
  double residual_mw(double tx_power_mw) const { return alpha() * tx_power_mw; }
};

class ChannelModel {
 public:
  ChannelModel() = default;
  explicit ChannelModel(ChannelConfig config);

  const ChannelConfig& config() const { return config_; }

  /// Monotone nondecreasing in distance; distance is clamped at min_distance_m.
  double pathloss_db(LinkClass link, double distance_m) const;

  /// Zero-mean normal sample in dB with the class standard deviation.
  double sample_shadowing(LinkClass link, Rng& rng) const;

  double noise_figure_db(NodeKind receiver) const;
  double noise_power_dbm(NodeKind receiver, double bandwidth_hz) const;
  double noise_power_mw(NodeKind receiver, double bandwidth_hz) const;

 private:
  ChannelConfig config_{};
};

/// Linear coupling gain between every node pair of a drop (pathloss plus
/// static shadowing). Shadowing is drawn once per unordered pair, so the
/// matrix is symmetric. Macro-macro pairs carry no link.
class GainMatrix {
 public:
  GainMatrix() = default;

  static GainMatrix build(const NetworkLayout& layout, const ChannelModel& channel, Rng& rng);

  std::size_t size() const { return n_; }

  /// Throws std::invalid_argument for tx == rx (self-interference lives in
  /// SicModel) and for pairs without a link class.
  double gain(std::size_t tx, std::size_t rx) const;
  double shadow_db(std::size_t tx, std::size_t rx) const;
  double pathloss_db(std::size_t tx, std::size_t rx) const;

  /// Unchecked access for inner loops; tx != rx is the caller's duty.
  double operator()(std::size_t tx, std::size_t rx) const { return gain_[tx * n_ + rx]; }

  /// Overrides one symmetric entry. Test hook for hand-built instances.
  void set_symmetric(std::size_t a, std::size_t b, double pathloss_db, double shadow_db);

  static GainMatrix zeros(std::size_t n);

 private:
  void check(std::size_t tx, std::size_t rx) const;

  std::size_t n_ = 0;
  std::vector<double> gain_;
  std::vector<double> pathloss_db_;
  std::vector<double> shadow_db_;
  std::vector<unsigned char> linked_;
};

}  // namespace fdsim
