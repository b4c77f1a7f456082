#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fdsim/channel.hpp"
#include "fdsim/engine.hpp"
#include "fdsim/scheduling.hpp"
#include "fdsim/topology.hpp"

namespace fdsim {

struct Drop {
  NetworkLayout layout;
  GainMatrix gains;
};

/// Full drop: macros, picos, UE positions, shadowed gains, association and
/// UL/DL designation. A pure function of (scenario, channel, seed, index).
Drop generate_drop(const ScenarioConfig& scenario, const ChannelModel& channel,
                   std::uint64_t drop_index);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single value
};

Summary summarize(const std::vector<double>& values);

struct CampaignResult {
  SchedulerKind scheduler = SchedulerKind::HdPf;
  std::vector<DropResult> drops;  // in drop-index order
  Summary se;
  Summary ee;
  std::array<double, kNumCategories> interference_mean_mw{};  // mean of per-drop means
};

/// Runs `num_drops` independent drops; drop i uses stream (scenario.seed, i)
/// so a larger campaign extends a smaller one without changing it.
CampaignResult run_campaign(const ScenarioConfig& scenario, const ChannelModel& channel,
                            const EngineConfig& engine, SchedulerKind scheduler,
                            std::size_t num_drops, std::size_t workers = 1);

/// Same drops evaluated under several schedulers (common random numbers).
std::vector<CampaignResult> run_campaigns(const ScenarioConfig& scenario,
                                          const ChannelModel& channel, const EngineConfig& engine,
                                          const std::vector<SchedulerKind>& schedulers,
                                          std::size_t num_drops, std::size_t workers = 1);

CampaignResult aggregate(SchedulerKind scheduler, std::vector<DropResult> drops);

/// Calls fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace fdsim
