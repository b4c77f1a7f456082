#include <cmath>
#include <limits>

#include "doctest.h"
#include "fdsim/campaign.hpp"
#include "fdsim/channel.hpp"
#include "fdsim/units.hpp"

using namespace fdsim;
using doctest::Approx;

TEST_CASE("pathloss: frozen values") {
  const ChannelModel ch;
  // 140.7 + 36.7 log10(0.040) evaluated by hand
  CHECK(ch.pathloss_db(LinkClass::PicoToUE, 40.0) == Approx(89.3956).epsilon(1e-6));
  // 145.4 + 37.5 log10(0.025)
  CHECK(ch.pathloss_db(LinkClass::UEToUE, 25.0) == Approx(85.32275).epsilon(1e-6));
  // 169.36 + 40 log10(0.1)
  CHECK(ch.pathloss_db(LinkClass::PicoToPico, 100.0) == Approx(129.36).epsilon(1e-9));
  // 128.1 at 1 km
  CHECK(ch.pathloss_db(LinkClass::MacroToUE, 1000.0) == Approx(128.1).epsilon(1e-12));
  CHECK(ch.pathloss_db(LinkClass::UEToPico, 33.0) == ch.pathloss_db(LinkClass::PicoToUE, 33.0));
}

TEST_CASE("pathloss: monotone and clamped at the minimum distance") {
  const ChannelModel ch;
  for (std::size_t c = 0; c < kNumLinkClasses; ++c) {
    const auto cls = static_cast<LinkClass>(c);
    double prev = -std::numeric_limits<double>::infinity();
    for (double d = 0.1; d < 2000.0; d *= 1.3) {
      const double pl = ch.pathloss_db(cls, d);
      CHECK(pl >= prev);
      prev = pl;
    }
    CHECK(ch.pathloss_db(cls, 0.2) == ch.pathloss_db(cls, 1.0));
    CHECK(ch.pathloss_db(cls, 0.0) == ch.pathloss_db(cls, 1.0));
  }
}

TEST_CASE("link classification") {
  CHECK(classify_link(NodeKind::Macro, NodeKind::Ue) == LinkClass::MacroToUE);
  CHECK(classify_link(NodeKind::Ue, NodeKind::Macro) == LinkClass::MacroToUE);
  CHECK(classify_link(NodeKind::Pico, NodeKind::Ue) == LinkClass::PicoToUE);
  CHECK(classify_link(NodeKind::Ue, NodeKind::Pico) == LinkClass::UEToPico);
  CHECK(classify_link(NodeKind::Ue, NodeKind::Ue) == LinkClass::UEToUE);
  CHECK(classify_link(NodeKind::Pico, NodeKind::Pico) == LinkClass::PicoToPico);
  CHECK(classify_link(NodeKind::Macro, NodeKind::Pico) == LinkClass::MacroToPico);
  CHECK(classify_link(NodeKind::Pico, NodeKind::Macro) == LinkClass::MacroToPico);
  CHECK_THROWS_AS(classify_link(NodeKind::Macro, NodeKind::Macro), ConfigError);
}

TEST_CASE("shadowing statistics") {
  ChannelConfig cfg;
  cfg.shadow_sigma_db[static_cast<std::size_t>(LinkClass::PicoToPico)] = 0.0;
  const ChannelModel ch(cfg);
  Rng rng = make_stream(42, 0);
  for (int i = 0; i < 100; ++i) CHECK(ch.sample_shadowing(LinkClass::PicoToPico, rng) == 0.0);

  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = ch.sample_shadowing(LinkClass::UEToUE, rng);
    sum += s;
    sq += s * s;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(sd - 12.0) < 0.02 * 12.0);
  CHECK(std::abs(mean) < 0.2);
}

TEST_CASE("channel config validation") {
  ChannelConfig cfg;
  cfg.shadow_sigma_db[0] = -1.0;
  CHECK_THROWS_AS(ChannelModel{cfg}, ConfigError);
  cfg = {};
  cfg.min_distance_m = 0.0;
  CHECK_THROWS_AS(ChannelModel{cfg}, ConfigError);
}

TEST_CASE("gain: dB arithmetic on hand-set entries") {
  GainMatrix g = GainMatrix::zeros(3);
  g.set_symmetric(0, 1, 89.4, 0.0);
  CHECK(g.gain(0, 1) == Approx(1.148154e-9).epsilon(1e-6));
  g.set_symmetric(0, 2, 89.4, -3.0);
  CHECK(g.gain(0, 2) / g.gain(0, 1) == Approx(std::pow(10.0, 0.3)).epsilon(1e-12));
  CHECK(g.shadow_db(2, 0) == -3.0);
  CHECK(g.pathloss_db(2, 0) == 89.4);
  // gains never exceed 1
  g.set_symmetric(1, 2, 0.0, -20.0);
  CHECK(g.gain(1, 2) == 1.0);
  CHECK_THROWS_AS(g.gain(1, 1), std::invalid_argument);
}

TEST_CASE("gain matrix of a drop") {
  ScenarioConfig sc;
  sc.picos_per_macro = 2;
  sc.ues_per_macro = 8;
  const ChannelModel ch;
  const Drop d = generate_drop(sc, ch, 0);
  const NetworkLayout& l = d.layout;
  const std::size_t n = l.node_count();
  REQUIRE(d.gains.size() == n);
  for (std::size_t a = 0; a < n; ++a) {
    CHECK_THROWS_AS(d.gains.gain(a, a), std::invalid_argument);
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      if (l.kind(a) == NodeKind::Macro && l.kind(b) == NodeKind::Macro) {
        CHECK_THROWS_AS(d.gains.gain(a, b), std::invalid_argument);
        continue;
      }
      const double g = d.gains.gain(a, b);
      CHECK(g > 0.0);
      CHECK(g <= 1.0);
      CHECK(g == d.gains.gain(b, a));
      CHECK(d.gains.shadow_db(a, b) == d.gains.shadow_db(b, a));
      const LinkClass cls = classify_link(l.kind(a), l.kind(b));
      CHECK(d.gains.pathloss_db(a, b) == ch.pathloss_db(cls, distance(l.position(a), l.position(b))));
      CHECK(g == Approx(std::min(1.0, db_to_linear(-(d.gains.pathloss_db(a, b) + d.gains.shadow_db(a, b)))))
                     .epsilon(1e-12));
    }
  }
}

TEST_CASE("noise power") {
  const ChannelModel ch;
  CHECK(ch.noise_power_dbm(NodeKind::Pico, 20e6) == Approx(-87.9897).epsilon(1e-5));
  CHECK(ch.noise_power_dbm(NodeKind::Ue, 20e6) == Approx(-91.9897).epsilon(1e-5));
  CHECK(ch.noise_power_dbm(NodeKind::Macro, 20e6) == Approx(-95.9897).epsilon(1e-5));
  const double full = ch.noise_power_mw(NodeKind::Ue, 20e6);
  const double half = ch.noise_power_mw(NodeKind::Ue, 10e6);
  CHECK(half / full == Approx(0.5).epsilon(1e-12));
  CHECK(full > 0.0);
  CHECK_THROWS_AS(ch.noise_power_mw(NodeKind::Ue, 0.0), std::invalid_argument);
}

TEST_CASE("residual self-interference") {
  const SicModel sic{110.0};
  CHECK(sic.alpha() == Approx(1e-11).epsilon(1e-12));
  const double residual_dbm = mw_to_dbm(sic.residual_mw(dbm_to_mw(24.0)));
  CHECK(residual_dbm == Approx(-86.0).epsilon(1e-12));
  const ChannelModel ch;
  CHECK(std::abs(residual_dbm - ch.noise_power_dbm(NodeKind::Pico, 20e6)) < 3.0);
  CHECK(SicModel{100.0}.residual_mw(1.0) / sic.residual_mw(1.0) == Approx(10.0).epsilon(1e-12));
  CHECK(SicModel{std::numeric_limits<double>::infinity()}.alpha() == 0.0);
}

TEST_CASE("gain matrix is reproducible from the seed") {
  const NetworkLayout l = single_cell_layout({{10, 0}, {-20, 5}}, {NodeRole::UplinkUE, NodeRole::DownlinkUE});
  const ChannelModel ch;
  Rng a = make_stream(3, 1), b = make_stream(3, 1);
  const GainMatrix ga = GainMatrix::build(l, ch, a), gb = GainMatrix::build(l, ch, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(ga(i, j) == gb(i, j));
}
