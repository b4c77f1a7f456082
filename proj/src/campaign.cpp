#include "fdsim/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace fdsim {

Drop generate_drop(const ScenarioConfig& scenario, const ChannelModel& channel,
                   std::uint64_t drop_index) {
  scenario.validate();
  Rng rng = make_stream(scenario.seed, drop_index);
  Drop drop;
  NetworkLayout& layout = drop.layout;
  layout.macros = generate_macro_layout(scenario);
  layout.picos = drop_picos(scenario, layout.macros, rng);
  UeDrop ues = drop_ue_positions(scenario, layout.macros, layout.picos, rng);
  layout.ues = std::move(ues.positions);
  layout.ue_cluster = std::move(ues.cluster);

  // Roles do not affect link classes, so gains can be drawn before designation.
  layout.ue_roles.assign(layout.ues.size(), NodeRole::DownlinkUE);
  drop.gains = GainMatrix::build(layout, channel, rng);
  layout.association = associate_ues(layout, drop.gains, scenario);
  layout.ue_roles = designate_roles(layout.association, layout.macros.size(), layout.picos.size(), rng);
  return drop;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

CampaignResult aggregate(SchedulerKind scheduler, std::vector<DropResult> drops) {
  CampaignResult r;
  r.scheduler = scheduler;
  r.drops = std::move(drops);
  std::vector<double> se, ee;
  for (const DropResult& d : r.drops) {
    se.push_back(d.metrics.se());
    ee.push_back(d.metrics.ee());
    for (std::size_t c = 0; c < kNumCategories; ++c)
      r.interference_mean_mw[c] += d.interference.mean_mw(static_cast<InterferenceCategory>(c));
  }
  if (!r.drops.empty())
    for (double& v : r.interference_mean_mw) v /= static_cast<double>(r.drops.size());
  r.se = summarize(se);
  r.ee = summarize(ee);
  return r;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<CampaignResult> run_campaigns(const ScenarioConfig& scenario,
                                          const ChannelModel& channel, const EngineConfig& engine,
                                          const std::vector<SchedulerKind>& schedulers,
                                          std::size_t num_drops, std::size_t workers) {
  if (num_drops < 1) throw std::invalid_argument("a campaign needs at least one drop");
  std::vector<std::vector<DropResult>> per_scheduler(schedulers.size(),
                                                     std::vector<DropResult>(num_drops));
  parallel_for(num_drops, workers, [&](std::size_t i) {
    const Drop drop = generate_drop(scenario, channel, i);
    for (std::size_t s = 0; s < schedulers.size(); ++s)
      per_scheduler[s][i] = run_drop(drop.layout, drop.gains, channel, schedulers[s], engine);
  });
  std::vector<CampaignResult> out;
  for (std::size_t s = 0; s < schedulers.size(); ++s)
    out.push_back(aggregate(schedulers[s], std::move(per_scheduler[s])));
  return out;
}

CampaignResult run_campaign(const ScenarioConfig& scenario, const ChannelModel& channel,
                            const EngineConfig& engine, SchedulerKind scheduler,
                            std::size_t num_drops, std::size_t workers) {
  return std::move(run_campaigns(scenario, channel, engine, {scheduler}, num_drops, workers).front());
}

}  // namespace fdsim
