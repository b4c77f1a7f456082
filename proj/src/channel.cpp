#include "fdsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fdsim/units.hpp"

namespace fdsim {

std::string to_string(LinkClass c) {
  switch (c) {
    case LinkClass::MacroToUE: return "macro_ue";
    case LinkClass::PicoToUE: return "pico_ue";
    case LinkClass::UEToUE: return "ue_ue";
    case LinkClass::PicoToPico: return "pico_pico";
    case LinkClass::MacroToPico: return "macro_pico";
    case LinkClass::UEToPico: return "ue_pico";
  }
  return "unknown";
}

LinkClass classify_link(NodeKind tx, NodeKind rx) {
  using K = NodeKind;
  if (tx == K::Ue && rx == K::Ue) return LinkClass::UEToUE;
  if (tx == K::Pico && rx == K::Pico) return LinkClass::PicoToPico;
  if (tx == K::Pico && rx == K::Ue) return LinkClass::PicoToUE;
  if (tx == K::Ue && rx == K::Pico) return LinkClass::UEToPico;
  if ((tx == K::Macro && rx == K::Ue) || (tx == K::Ue && rx == K::Macro)) return LinkClass::MacroToUE;
  if ((tx == K::Macro && rx == K::Pico) || (tx == K::Pico && rx == K::Macro))
    return LinkClass::MacroToPico;
  throw ConfigError("no link class for macro-to-macro links");
}

double SicModel::alpha() const {
  if (std::isinf(sic_db) && sic_db > 0) return 0.0;
  if (!(sic_db >= 0.0)) throw std::domain_error("sic_db must be nonnegative");
  return db_to_linear(-sic_db);
}

ChannelModel::ChannelModel(ChannelConfig config) : config_(config) {
  for (double s : config_.shadow_sigma_db)
    if (!(s >= 0.0)) throw ConfigError("shadowing sigma must be nonnegative");
  if (!(config_.min_distance_m > 0.0)) throw ConfigError("min_distance must be positive");
  for (const auto& m : config_.pathloss)
    if (!(m.slope_db >= 0.0)) throw ConfigError("pathloss slope must be nonnegative");
}

double ChannelModel::pathloss_db(LinkClass link, double distance_m) const {
  const auto idx = static_cast<std::size_t>(link);
  if (idx >= kNumLinkClasses) throw ConfigError("unknown link class");
  const PathlossModel& m = config_.pathloss[idx];
  const double d_km = std::max(distance_m, config_.min_distance_m) / 1000.0;
  return m.intercept_db + m.slope_db * std::log10(d_km);
}

double ChannelModel::sample_shadowing(LinkClass link, Rng& rng) const {
  const double sigma = config_.shadow_sigma_db.at(static_cast<std::size_t>(link));
  if (sigma == 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, sigma);
  return normal(rng);
}

double ChannelModel::noise_figure_db(NodeKind receiver) const {
  switch (receiver) {
    case NodeKind::Macro: return config_.noise_figure_macro_db;
    case NodeKind::Pico: return config_.noise_figure_pico_db;
    case NodeKind::Ue: return config_.noise_figure_ue_db;
  }
  return 0.0;
}

double ChannelModel::noise_power_dbm(NodeKind receiver, double bandwidth_hz) const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  return config_.thermal_density_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db(receiver);
}

double ChannelModel::noise_power_mw(NodeKind receiver, double bandwidth_hz) const {
  return dbm_to_mw(noise_power_dbm(receiver, bandwidth_hz));
}

GainMatrix GainMatrix::zeros(std::size_t n) {
  GainMatrix g;
  g.n_ = n;
  g.gain_.assign(n * n, 0.0);
  g.pathloss_db_.assign(n * n, std::numeric_limits<double>::quiet_NaN());
  g.shadow_db_.assign(n * n, 0.0);
  g.linked_.assign(n * n, 0);
  return g;
}

void GainMatrix::set_symmetric(std::size_t a, std::size_t b, double pathloss_db, double shadow_db) {
  if (a == b) throw std::invalid_argument("self link");
  // Coupling loss never drops below 0 dB so gains stay in (0, 1].
  const double g = std::min(1.0, db_to_linear(-(pathloss_db + shadow_db)));
  for (auto [tx, rx] : {std::pair{a, b}, std::pair{b, a}}) {
    const std::size_t k = tx * n_ + rx;
    gain_[k] = g;
    pathloss_db_[k] = pathloss_db;
    shadow_db_[k] = shadow_db;
    linked_[k] = 1;
  }
}

GainMatrix GainMatrix::build(const NetworkLayout& layout, const ChannelModel& channel, Rng& rng) {
  const std::size_t n = layout.node_count();
  GainMatrix g = zeros(n);
  for (std::size_t a = 0; a < n; ++a) {
    const NodeKind ka = layout.kind(a);
    for (std::size_t b = a + 1; b < n; ++b) {
      const NodeKind kb = layout.kind(b);
      if (ka == NodeKind::Macro && kb == NodeKind::Macro) continue;
      const LinkClass link = classify_link(ka, kb);
      const double pl = channel.pathloss_db(link, distance(layout.position(a), layout.position(b)));
      g.set_symmetric(a, b, pl, channel.sample_shadowing(link, rng));
    }
  }
  return g;
}

void GainMatrix::check(std::size_t tx, std::size_t rx) const {
  if (tx >= n_ || rx >= n_) throw std::out_of_range("node index out of range");
  if (tx == rx) throw std::invalid_argument("self link: use SicModel for self-interference");
  if (!linked_[tx * n_ + rx]) throw std::invalid_argument("no link between these nodes");
}

double GainMatrix::gain(std::size_t tx, std::size_t rx) const {
  check(tx, rx);
  return gain_[tx * n_ + rx];
}

double GainMatrix::shadow_db(std::size_t tx, std::size_t rx) const {
  check(tx, rx);
  return shadow_db_[tx * n_ + rx];
}

double GainMatrix::pathloss_db(std::size_t tx, std::size_t rx) const {
  check(tx, rx);
  return pathloss_db_[tx * n_ + rx];
}

}  // namespace fdsim
