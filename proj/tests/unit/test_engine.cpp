#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "doctest.h"
#include "fdsim/campaign.hpp"
#include "fdsim/engine.hpp"
#include "fdsim/units.hpp"

using namespace fdsim;
using doctest::Approx;

namespace {

// Picos first, then UEs; every UE is pico-served.
NetworkLayout hand_layout(std::vector<Position> picos, std::vector<Position> ues,
                          std::vector<NodeRole> roles, std::vector<std::size_t> cells) {
  NetworkLayout l;
  l.picos = std::move(picos);
  l.ues = std::move(ues);
  l.ue_roles = std::move(roles);
  for (std::size_t c : cells) l.association.push_back({ServingCell::Tier::Pico, c});
  l.ue_cluster = std::move(cells);
  return l;
}

// Pathloss table keyed by unordered node pair.
struct PathlossTable {
  std::map<std::pair<std::size_t, std::size_t>, double> pl;

  void set(std::size_t a, std::size_t b, double db) { pl[{std::min(a, b), std::max(a, b)}] = db; }
  double g(std::size_t a, std::size_t b) const { return std::pow(10.0, -pl.at({std::min(a, b), std::max(a, b)}) / 10.0); }
  GainMatrix matrix(std::size_t n) const {
    GainMatrix m = GainMatrix::zeros(n);
    for (const auto& [k, v] : pl) m.set_symmetric(k.first, k.second, v, 0.0);
    return m;
  }
};

struct Recorder : DropObserver {
  std::vector<std::vector<SchedulingDecision>> decisions;
  std::vector<std::vector<double>> rates;
  void on_decisions(int, std::span<const SchedulingDecision> d) override { decisions.emplace_back(d.begin(), d.end()); }
  void on_rates(int, std::span<const double> r) override { rates.emplace_back(r.begin(), r.end()); }
};

LinkBudget budget_for(const NetworkLayout& l, const GainMatrix& g, bool fd, double sic_db = 110.0) {
  const ChannelModel ch;
  const double bw = fd ? 20e6 : 10e6;
  return {&l, &g, fd, ch.noise_power_mw(NodeKind::Ue, bw), ch.noise_power_mw(NodeKind::Pico, bw), SicModel{sic_db}};
}

}  // namespace

TEST_CASE("Shannon rate") {
  CHECK(shannon_rate(0.0, 20e6) == 0.0);
  CHECK(shannon_rate(3.0, 20e6) == Approx(40e6).epsilon(1e-15));
  CHECK(shannon_rate(3.0, 10e6) == Approx(20e6).epsilon(1e-15));
  CHECK(shannon_rate(1e6, 20e6, 6.0) == Approx(120e6));
  CHECK_THROWS_AS(shannon_rate(-0.1, 20e6), std::domain_error);
}

TEST_CASE("three-cell SINR against a hand computation") {
  // nodes: picos 0..2, then per cell c: UL UE 3+2c, DL UE 4+2c
  const NetworkLayout l = hand_layout(
      {{0, 0}, {200, 0}, {0, 200}},
      {{10, 0}, {-10, 0}, {210, 0}, {190, 0}, {10, 200}, {-10, 200}},
      {NodeRole::UplinkUE, NodeRole::DownlinkUE, NodeRole::UplinkUE, NodeRole::DownlinkUE,
       NodeRole::UplinkUE, NodeRole::DownlinkUE},
      {0, 0, 1, 1, 2, 2});
  PathlossTable t;
  for (std::size_t a = 0; a < 9; ++a)
    for (std::size_t b = a + 1; b < 9; ++b) t.set(a, b, 70.0 + 3.0 * a + 2.0 * b);
  const GainMatrix g = t.matrix(9);
  const LinkBudget b = budget_for(l, g, true);

  const double pbs = dbm_to_mw(24), pue = dbm_to_mw(23);
  // cell 2 has its DL muted this TTI
  const std::vector<SchedulingDecision> d{{0, 0u, 1u, pbs, pue}, {1, 2u, 3u, pbs, pue}, {2, 4u, 5u, 0.0, pue}};

  const double n_ue = dbm_to_mw(-174 + 10 * std::log10(20e6) + 9);
  const double n_pico = dbm_to_mw(-174 + 10 * std::log10(20e6) + 13);

  // DL UE of cell 0 is node 4
  const double s0 = t.g(0, 4) * pbs;
  const double i0 = t.g(3, 4) * pue + t.g(1, 4) * pbs + t.g(5, 4) * pue + t.g(7, 4) * pue;
  const auto dl = compute_dl_sinr(0, d, b);
  REQUIRE(dl);
  CHECK(dl->sinr == Approx(s0 / (i0 + n_ue)).epsilon(1e-12));
  CHECK(dl->breakdown.intra_cell_u2d == Approx(t.g(3, 4) * pue).epsilon(1e-12));
  CHECK(dl->breakdown.inter_cell_b2d == Approx(t.g(1, 4) * pbs).epsilon(1e-12));

  // UL at pico 1 from node 5
  const double s1 = t.g(5, 1) * pue;
  const double i1 = 1e-11 * pbs + t.g(0, 1) * pbs + t.g(3, 1) * pue + t.g(7, 1) * pue;
  const auto ul = compute_ul_sinr(1, d, b);
  REQUIRE(ul);
  CHECK(ul->sinr == Approx(s1 / (i1 + n_pico)).epsilon(1e-12));

  // muted DL: no reception; its UL sees no residual self-interference
  CHECK_FALSE(compute_dl_sinr(2, d, b));
  const auto ul2 = compute_ul_sinr(2, d, b);
  REQUIRE(ul2);
  CHECK(ul2->breakdown.residual_self == 0.0);
  CHECK(ul2->sinr == Approx(t.g(7, 2) * pue / (t.g(0, 2) * pbs + t.g(1, 2) * pbs + t.g(3, 2) * pue +
                                                t.g(5, 2) * pue + n_pico))
                         .epsilon(1e-12));

  // HD: no UL->DL or DL->UL cross terms, no residual
  const LinkBudget hd = budget_for(l, g, false);
  const auto dl_hd = compute_dl_sinr(0, d, hd);
  const double n_ue_hd = dbm_to_mw(-174 + 10 * std::log10(10e6) + 9);
  CHECK(dl_hd->sinr == Approx(s0 / (t.g(1, 4) * pbs + n_ue_hd)).epsilon(1e-12));
  const auto ul_hd = compute_ul_sinr(1, d, hd);
  CHECK(ul_hd->breakdown.residual_self == 0.0);
  CHECK(ul_hd->breakdown.inter_cell_b2b == 0.0);
}

TEST_CASE("isolated cell: pure SNR, residual level") {
  const NetworkLayout l = hand_layout({{0, 0}}, {{10, 0}, {-10, 0}},
                                      {NodeRole::UplinkUE, NodeRole::DownlinkUE}, {0, 0});
  PathlossTable t;
  t.set(0, 1, 80.0);
  t.set(0, 2, 82.0);
  t.set(1, 2, 90.0);
  const GainMatrix g = t.matrix(3);
  const double pbs = dbm_to_mw(24), pue = dbm_to_mw(23);

  const LinkBudget b = budget_for(l, g, true);
  const std::vector<SchedulingDecision> ul_muted{{0, 0u, 1u, pbs, 0.0}};
  CHECK(compute_dl_sinr(0, ul_muted, b)->sinr == Approx(t.g(0, 2) * pbs / b.noise_ue_mw).epsilon(1e-12));

  const std::vector<SchedulingDecision> both{{0, 0u, 1u, pbs, pue}};
  const auto ul = compute_ul_sinr(0, both, b);
  CHECK(mw_to_dbm(ul->breakdown.residual_self) == Approx(-86.0).epsilon(1e-12));

  const LinkBudget perfect = budget_for(l, g, true, std::numeric_limits<double>::infinity());
  CHECK(compute_ul_sinr(0, both, perfect)->sinr == Approx(t.g(0, 1) * pue / b.noise_pico_mw).epsilon(1e-12));

  const LinkBudget lower = budget_for(l, g, true, 100.0);
  CHECK(compute_ul_sinr(0, both, lower)->breakdown.residual_self / ul->breakdown.residual_self ==
        Approx(10.0).epsilon(1e-12));
}

TEST_CASE("two cells, two TTIs: accumulators match a hand trace") {
  // cell 0: UL UE 0, DL UEs 1 and 2 (UE 1 stronger); cell 1: UL UE 3, DL UE 4
  const NetworkLayout l = hand_layout(
      {{0, 0}, {300, 0}}, {{20, 0}, {-15, 0}, {0, 25}, {320, 0}, {280, 0}},
      {NodeRole::UplinkUE, NodeRole::DownlinkUE, NodeRole::DownlinkUE, NodeRole::UplinkUE, NodeRole::DownlinkUE},
      {0, 0, 0, 1, 1});
  // nodes: picos 0, 1; UEs 2..6
  PathlossTable t;
  for (std::size_t a = 0; a < 7; ++a)
    for (std::size_t b = a + 1; b < 7; ++b) t.set(a, b, 120.0);
  t.set(0, 2, 75.0);  // UL UE 0
  t.set(0, 3, 72.0);  // DL UE 1
  t.set(0, 4, 78.0);  // DL UE 2
  t.set(1, 5, 74.0);  // UL UE 3
  t.set(1, 6, 76.0);  // DL UE 4
  t.set(2, 3, 95.0);
  t.set(2, 4, 92.0);
  t.set(5, 6, 93.0);
  t.set(0, 1, 110.0);
  const GainMatrix g = t.matrix(7);

  EngineConfig cfg;
  cfg.ttis = 2;
  cfg.sample_stride = 1;
  cfg.pf.window_length = 2;
  cfg.pf.fairness_exponent = 1.0;
  Recorder rec;
  const DropResult r = run_drop(l, g, ChannelModel{}, SchedulerKind::FdPf, cfg, &rec);

  const double pbs = dbm_to_mw(24), pue = dbm_to_mw(23);
  const double n_ue = dbm_to_mw(-174 + 10 * std::log10(20e6) + 9);
  const double n_p = dbm_to_mw(-174 + 10 * std::log10(20e6) + 13);
  const double res = 1e-11 * pbs;
  auto rate = [](double sinr) { return 20e6 * std::log2(1.0 + sinr); };

  // TTI 0: (UL 0, DL 1) in cell 0, (UL 3, DL 4) in cell 1
  const double dl1 = rate(t.g(0, 3) * pbs / (t.g(2, 3) * pue + t.g(1, 3) * pbs + t.g(5, 3) * pue + n_ue));
  const double dl4 = rate(t.g(1, 6) * pbs / (t.g(5, 6) * pue + t.g(0, 6) * pbs + t.g(2, 6) * pue + n_ue));
  const double ul0 = rate(t.g(2, 0) * pue / (res + t.g(1, 0) * pbs + t.g(5, 0) * pue + n_p));
  const double ul3 = rate(t.g(5, 1) * pue / (res + t.g(0, 1) * pbs + t.g(2, 1) * pue + n_p));
  // TTI 1: UE 1 now has a large average, UE 2 still sits at the floor
  const double dl2 = rate(t.g(0, 4) * pbs / (t.g(2, 4) * pue + t.g(1, 4) * pbs + t.g(5, 4) * pue + n_ue));

  REQUIRE(rec.decisions.size() == 2);
  CHECK(rec.decisions[0][0].dl_ue == 1u);
  CHECK(rec.decisions[1][0].dl_ue == 2u);
  CHECK(rec.decisions[1][1].dl_ue == 4u);
  CHECK(rec.rates[0][1] == Approx(dl1).epsilon(1e-12));
  CHECK(rec.rates[1][2] == Approx(dl2).epsilon(1e-12));

  const Metrics& m = r.metrics;
  CHECK(m.t_tot_dl == Approx((dl1 + dl4 + dl2 + dl4) * 1e-3).epsilon(1e-12));
  CHECK(m.t_tot_ul == Approx((ul0 + ul3) * 2 * 1e-3).epsilon(1e-12));
  CHECK(m.e_tot_dl == Approx(4 * pbs * 1e-3 * 1e-3).epsilon(1e-12));
  CHECK(m.e_tot_ul == Approx(4 * pue * 1e-3 * 1e-3).epsilon(1e-12));
  CHECK(m.duration_s == Approx(2e-3));
  CHECK(m.se() == Approx((m.t_tot_dl + m.t_tot_ul) / (2e-3 * 20e6)).epsilon(1e-12));
  CHECK(m.ee() == Approx((m.t_tot_dl + m.t_tot_ul) / (m.e_tot_dl + m.e_tot_ul)).epsilon(1e-12));
  CHECK(r.pico_ues == 5);
  CHECK(r.pf_served_ues == 5);
}

TEST_CASE("metrics conventions") {
  Metrics m;
  CHECK(m.se() == 0.0);
  CHECK(m.ee() == 0.0);
  m.duration_s = 2.0;
  m.b_tot_hz = 20e6;
  m.t_tot_dl = 4e7;
  m.e_tot_dl = 0.5;
  CHECK(m.se() == Approx(1.0));
  CHECK(m.ee() == Approx(8e7));
  CHECK(m.p_tot_dl() == Approx(0.25));
}

TEST_CASE("run_drop rejects empty runs") {
  const NetworkLayout l = hand_layout({{0, 0}}, {{10, 0}}, {NodeRole::DownlinkUE}, {0});
  PathlossTable t;
  t.set(0, 1, 80.0);
  EngineConfig cfg;
  cfg.ttis = 0;
  CHECK_THROWS_AS(run_drop(l, t.matrix(2), ChannelModel{}, SchedulerKind::FdPf, cfg), std::invalid_argument);
  cfg.ttis = 5;
  CHECK_THROWS_AS(run_drop(l, GainMatrix::zeros(3), ChannelModel{}, SchedulerKind::FdPf, cfg), std::invalid_argument);
}

TEST_CASE("FD approaches but never exceeds twice the HD SE without coupling") {
  // two far-apart cells with negligible cross links and perfect cancellation
  const NetworkLayout l = hand_layout(
      {{0, 0}, {5000, 0}}, {{5, 0}, {-5, 0}, {5005, 0}, {4995, 0}},
      {NodeRole::UplinkUE, NodeRole::DownlinkUE, NodeRole::UplinkUE, NodeRole::DownlinkUE}, {0, 0, 1, 1});
  PathlossTable t;
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b) t.set(a, b, 300.0);
  t.set(0, 2, 40.0);
  t.set(0, 3, 40.0);
  t.set(1, 4, 40.0);
  t.set(1, 5, 40.0);
  const GainMatrix g = t.matrix(6);
  EngineConfig cfg;
  cfg.ttis = 50;
  cfg.sic_db = std::numeric_limits<double>::infinity();
  const double fd = run_drop(l, g, ChannelModel{}, SchedulerKind::FdPf, cfg).metrics.se();
  const double hd = run_drop(l, g, ChannelModel{}, SchedulerKind::HdPf, cfg).metrics.se();
  CHECK(fd / hd <= 2.0);
  CHECK(fd / hd > 1.85);
}

TEST_CASE("properties on a random drop") {
  ScenarioConfig sc;
  sc.ue_distribution = UeDistribution::Clustered;
  sc.picos_per_macro = 3;
  const ChannelModel ch;
  const Drop drop = generate_drop(sc, ch, 0);
  const NetworkLayout& l = drop.layout;
  EngineConfig cfg;
  cfg.ttis = 60;
  cfg.sample_stride = 1;

  for (SchedulerKind k : all_schedulers()) {
    CAPTURE(to_string(k));
    Recorder rec;
    const DropResult r = run_drop(l, drop.gains, ch, k, cfg, &rec);
    const LinkBudget b = budget_for(l, drop.gains, is_full_duplex(k));
    const double pbs = dbm_to_mw(24), pue = dbm_to_mw(23);
    const double bw = is_full_duplex(k) ? 20e6 : 10e6;

    double t_dl = 0.0, t_ul = 0.0;
    for (const auto& decisions : rec.decisions) {
      for (std::size_t c = 0; c < decisions.size(); ++c) {
        const SchedulingDecision& d = decisions[c];
        CHECK(d.cell == c);
        if (d.ul_ue) {
          CHECK(l.association[*d.ul_ue].index == c);
          CHECK(l.ue_roles[*d.ul_ue] == NodeRole::UplinkUE);
        }
        if (d.dl_ue) {
          CHECK(l.association[*d.dl_ue].index == c);
          CHECK(l.ue_roles[*d.dl_ue] == NodeRole::DownlinkUE);
        }
        if (uses_power_control(k)) {
          CHECK((d.p_bs == 0.0 || d.p_bs == pbs));
          CHECK((d.p_ue == 0.0 || d.p_ue == pue));
        } else {
          CHECK(d.p_bs == (d.dl_ue ? pbs : 0.0));
          CHECK(d.p_ue == (d.ul_ue ? pue : 0.0));
        }

        if (auto dl = compute_dl_sinr(c, decisions, b)) {
          // accounting closure
          CHECK(dl->sinr == dl->signal / dl->breakdown.total());
          if (!is_full_duplex(k)) {
            CHECK(dl->breakdown.intra_cell_u2d == 0.0);
            CHECK(dl->breakdown.inter_cell_u2d == 0.0);
          }
          t_dl += shannon_rate(dl->sinr, bw) * cfg.tti_s;
          // muting any other transmitter never lowers the SINR
          for (std::size_t o = 0; o < decisions.size(); ++o) {
            auto muted = decisions;
            if (o != c) muted[o].p_bs = 0.0;
            muted[o].p_ue = 0.0;
            CHECK(compute_dl_sinr(c, muted, b)->sinr >= dl->sinr);
          }
        }
        if (auto ul = compute_ul_sinr(c, decisions, b)) {
          CHECK(ul->sinr == ul->signal / ul->breakdown.total());
          if (!is_full_duplex(k)) {
            CHECK(ul->breakdown.residual_self == 0.0);
            CHECK(ul->breakdown.inter_cell_b2b == 0.0);
          }
          t_ul += shannon_rate(ul->sinr, bw) * cfg.tti_s;
          for (std::size_t o = 0; o < decisions.size(); ++o) {
            auto muted = decisions;
            muted[o].p_bs = 0.0;
            if (o != c) muted[o].p_ue = 0.0;
            CHECK(compute_ul_sinr(c, muted, b)->sinr >= ul->sinr);
          }
        }
      }
    }
    // conservation and SE recomputation
    CHECK(r.metrics.t_tot_dl == Approx(t_dl).epsilon(1e-12));
    CHECK(r.metrics.t_tot_ul == Approx(t_ul).epsilon(1e-12));
    const double se = (r.metrics.t_tot_dl + r.metrics.t_tot_ul) / (r.metrics.duration_s * 20e6);
    CHECK(std::abs(r.metrics.se() - se) <= 1e-12 * se);

    const InterferenceStats& s = r.interference;
    if (!is_full_duplex(k)) {
      for (auto cat : {InterferenceCategory::DlIntraCellU2D, InterferenceCategory::DlInterCellU2D,
                       InterferenceCategory::UlResidualSelf, InterferenceCategory::UlInterCellB2B}) {
        CHECK(s.mean_mw(cat) == 0.0);
        CHECK(s.samples_dbm[static_cast<std::size_t>(cat)].empty());
      }
    } else {
      CHECK(s.mean_mw(InterferenceCategory::UlResidualSelf) > 0.0);
    }
  }
}

TEST_CASE("FD PF decisions ignore UE-UE gains") {
  ScenarioConfig sc;
  sc.ue_distribution = UeDistribution::Clustered;
  sc.picos_per_macro = 2;
  const ChannelModel ch;
  const Drop drop = generate_drop(sc, ch, 1);
  GainMatrix shuffled = drop.gains;
  const NetworkLayout& l = drop.layout;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pl(60.0, 140.0);
  for (std::size_t a = 0; a < l.ues.size(); ++a)
    for (std::size_t b = a + 1; b < l.ues.size(); ++b) shuffled.set_symmetric(l.ue_node(a), l.ue_node(b), pl(rng), 0.0);
  EngineConfig cfg;
  cfg.ttis = 1;
  Recorder a, b;
  run_drop(l, drop.gains, ch, SchedulerKind::FdPf, cfg, &a);
  run_drop(l, shuffled, ch, SchedulerKind::FdPf, cfg, &b);
  for (std::size_t c = 0; c < a.decisions[0].size(); ++c) {
    CHECK(a.decisions[0][c].ul_ue == b.decisions[0][c].ul_ue);
    CHECK(a.decisions[0][c].dl_ue == b.decisions[0][c].dl_ue);
  }
}

TEST_CASE("drops are deterministic and campaigns reuse per-drop streams") {
  ScenarioConfig sc;
  sc.picos_per_macro = 2;
  sc.ues_per_macro = 20;
  const ChannelModel ch;
  EngineConfig cfg;
  cfg.ttis = 40;
  const auto small = run_campaigns(sc, ch, cfg, {SchedulerKind::HdPf, SchedulerKind::FdUpPc}, 2, 1);
  const auto large = run_campaigns(sc, ch, cfg, {SchedulerKind::HdPf, SchedulerKind::FdUpPc}, 4, 1);
  const auto threaded = run_campaigns(sc, ch, cfg, {SchedulerKind::HdPf, SchedulerKind::FdUpPc}, 4, 3);
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(small[s].drops[i].metrics.t_tot_dl == large[s].drops[i].metrics.t_tot_dl);
      CHECK(small[s].drops[i].metrics.e_tot_ul == large[s].drops[i].metrics.e_tot_ul);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(threaded[s].drops[i].metrics.t_tot_dl == large[s].drops[i].metrics.t_tot_dl);
      CHECK(threaded[s].drops[i].metrics.t_tot_ul == large[s].drops[i].metrics.t_tot_ul);
    }
    CHECK(threaded[s].se.mean == large[s].se.mean);
  }
  const auto one = run_campaign(sc, ch, cfg, SchedulerKind::FdPf, 1, 1);
  CHECK(one.se.mean == one.drops[0].metrics.se());
  CHECK(one.ee.mean == one.drops[0].metrics.ee());
  CHECK(one.se.stddev == 0.0);
  CHECK_THROWS_AS(run_campaign(sc, ch, cfg, SchedulerKind::FdPf, 0, 1), std::invalid_argument);
}

TEST_CASE("summary statistics") {
  const Summary s = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == Approx(std::sqrt(5.0 / 3.0)));
  CHECK(summarize({}).mean == 0.0);
}
