#pragma once

#include "curvecast/csv.hpp"
#include "curvecast/forecasters.hpp"
#include "curvecast/losses.hpp"
#include "curvecast/mcs.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curvecast {

inline constexpr std::string_view kVersion = "0.1.0";

struct BacktestConfig {
    Eigen::Index oos_length = 500;
    double p1 = 0.99;
    std::vector<ModelKind> models{ModelKind::kPc, ModelKind::kFts, ModelKind::kFundamental};
    std::vector<double> alphas{0.25, 0.10};
    std::vector<McsStatistic> statistics{McsStatistic::kRange, McsStatistic::kMax};
    int bootstrap_reps = 5000;
    std::optional<int> block_length;  // empty: chosen from the data
    std::uint64_t seed = 0;
    MissingPolicy missing = MissingPolicy::kReject;
    int threads = 1;
    std::filesystem::path futures;
    std::filesystem::path factors;
    std::filesystem::path out = "out";

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
};

/// Sets one key from its text form and validates the result; on error the
/// config is left unchanged. Keys use the long flag names with
/// dashes or underscores: oos-len, p1, models, alpha, statistic,
/// bootstrap-reps, block-len, seed, missing, threads, futures, factors, out.
void apply_setting(BacktestConfig& config, std::string_view key, std::string_view value);

/// `key = value` lines; `#` starts a comment.
BacktestConfig read_config(std::istream& in, BacktestConfig base = {});
BacktestConfig load_config(const std::filesystem::path& path, BacktestConfig base = {});

/// Every key in a form read_config accepts.
void write_config(std::ostream& out, const BacktestConfig& config);

std::vector<ModelKind> parse_model_list(std::string_view text);
std::vector<double> parse_alpha_list(std::string_view text);
std::vector<McsStatistic> parse_statistic_list(std::string_view text);

}  // namespace curvecast
