#pragma once

#include "curvecast/date.hpp"
#include "curvecast/ets.hpp"
#include "curvecast/panel.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curvecast {

enum class ModelKind { kPc, kFts, kFundamental, kRandomWalk };

std::string_view model_name(ModelKind kind) noexcept;

/// Accepts "PC", "FTS", "Fund"/"Fundamental", "RW" (case-insensitive).
std::optional<ModelKind> parse_model(std::string_view name);

/// One model's one-step forecast of the LOG_RETURN curve on a target date.
struct ForecastRecord {
    ModelKind model = ModelKind::kRandomWalk;
    Date target;
    Eigen::VectorXd forecast;
    Eigen::VectorXd realized;
};

/// Minimum window for the functional model's eigenstructure.
inline constexpr Eigen::Index kMinFtsWindow = 30;

struct FtsForecast {
    Eigen::VectorXd returns;    // forecast log price minus last observed log price
    Eigen::VectorXd log_price;  // reconstructed next-day curve
    Eigen::Index K = 0;
    std::vector<DampedTrendParams> score_params;
};

/// Functional forecast: FPCA of the log-price window, damped-trend ETS per
/// retained score series, one-step score forecasts mapped back to a curve.
FtsForecast fts_forecast(const FuturesPanel& log_price_window, double proportion);

/// In-sample one-step predictions of the functional model fitted once on the
/// whole window. Row i predicts the return into log-price row i + 1.
Eigen::MatrixXd fts_insample(const FuturesPanel& log_price_window, double proportion);

/// Per tenor: OLS of return_t on the four factor log-changes at t-1.
/// `factor_changes` rows are aligned with `return_window` rows.
Eigen::VectorXd fundamental_forecast(const FuturesPanel& return_window,
                                     const Eigen::MatrixXd& factor_changes);

/// Fitted values for return rows 1..n-1 of the window.
Eigen::MatrixXd fundamental_insample(const FuturesPanel& return_window,
                                     const Eigen::MatrixXd& factor_changes);

/// Leading discrete principal components of a price window (column-centred,
/// divisor-n covariance). Components with eigenvalue below 1e-10 of the
/// leading one are dropped.
struct DiscretePcs {
    Eigen::MatrixXd loadings;  // tenors x used
    Eigen::MatrixXd scores;    // rows x used
    Eigen::Index requested = 3;
};

DiscretePcs discrete_pcs(const Eigen::MatrixXd& prices, Eigen::Index count = 3);

struct PcForecast {
    Eigen::VectorXd returns;
    Eigen::Index components = 0;
    std::vector<std::string> warnings;
};

/// Per tenor: OLS of return_t on the lagged scores of three discrete PCs of
/// the price window (same dates as the return window).
PcForecast pc_forecast(const FuturesPanel& return_window, const FuturesPanel& price_window);

/// Fitted values for return rows 1..n-1 of the window.
Eigen::MatrixXd pc_insample(const FuturesPanel& return_window, const FuturesPanel& price_window);

/// Random walk without drift on the evaluated series: the last observation.
double rw_forecast(std::span<const double> series);
Eigen::VectorXd rw_forecast(const FuturesPanel& return_window);

}  // namespace curvecast
