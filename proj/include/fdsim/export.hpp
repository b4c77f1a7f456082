#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fdsim/experiment.hpp"

namespace fdsim {

// Plot-ready CSV writers. Numbers are printed with enough digits to round-trip.

void write_layout_csv(std::ostream& out, const NetworkLayout& layout);
void write_gains_csv(std::ostream& out, const NetworkLayout& layout, const GainMatrix& gains);

/// Per-TTI decision trace: tti, cell, ul_ue, dl_ue, p_bs_dbm, p_ue_dbm.
class TraceWriter : public DropObserver {
 public:
  explicit TraceWriter(std::ostream& out);
  void on_decisions(int tti, std::span<const SchedulingDecision> decisions) override;

 private:
  std::ostream& out_;
};

void write_summary_csv(std::ostream& out, const ResultTable& table);
void write_drops_csv(std::ostream& out, const ResultTable& table);
void write_interference_csv(std::ostream& out, const ResultTable& table);
void write_interference_means_csv(std::ostream& out, const ResultTable& table);
void write_fig2a_csv(std::ostream& out, const std::vector<Fig2aRow>& rows);
void write_single_cell_csv(std::ostream& out, const SingleCellResult& result);
void write_se_ee_csv(std::ostream& out, const std::vector<SeEeCurveSet>& curves);

/// JSON manifest with every resolved parameter and seed of a run.
std::string manifest_json(const ExperimentSpec& spec, const std::string& command);

/// Writes summary, drops and interference CSVs plus the manifest into `dir`.
void write_result_files(const std::filesystem::path& dir, const ResultTable& table,
                        const ExperimentSpec& spec, const std::string& command);

}  // namespace fdsim
