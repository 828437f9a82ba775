#pragma once

#include "curvecast/backtest.hpp"
#include "curvecast/fpca.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace curvecast {

/// File names emit_reports writes for a run with at least one model, in
/// manifest order (the manifest itself first).
std::vector<std::string> report_files();

/// FPCA export: mean curve, retained eigenfunctions, every eigenvalue with
/// its cumulative share, and the score series. Returns the names written.
std::vector<std::string> write_decomposition(const std::filesystem::path& dir, const FpcaModel& model,
                                             const std::vector<Date>& dates,
                                             const std::vector<std::string>& tenors);

void write_forecasts(std::ostream& out, const BacktestRun& run, const std::vector<std::string>& tenors);
void write_mcs_membership(std::ostream& out, const std::vector<McsEntry>& entries,
                          const std::vector<std::string>& models);
void write_mcs_eliminations(std::ostream& out, const std::vector<McsEntry>& entries);
void write_dm_tests(std::ostream& out, const std::vector<DmEntry>& tests);

/// Writes every report for `run` into `dir` (created if needed). A run
/// without models writes only the manifest, which says so. The manifest is a
/// valid config file reproducing the run. Throws IoFailure.
std::vector<std::filesystem::path> emit_reports(const BacktestRun& run, const std::filesystem::path& dir);

}  // namespace curvecast
