#pragma once

#include "curvecast/config.hpp"
#include "curvecast/dm.hpp"
#include "curvecast/forecasters.hpp"
#include "curvecast/fpca.hpp"
#include "curvecast/losses.hpp"
#include "curvecast/mcs.hpp"
#include "curvecast/panel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace curvecast {

/// Confidence set for one loss scope ("Overall" or a tenor label).
struct McsEntry {
    std::string scope;
    McsResult result;
};

struct DmEntry {
    std::string model_a;
    std::string model_b;
    DmResult dm;
    DmResult modified;
};

struct BacktestRun {
    BacktestConfig config;
    std::vector<std::string> tenors;
    std::vector<Date> sample_dates;       // every input date
    std::vector<ForecastRecord> records;  // model-major, dates ascending
    LossReport losses;
    LossReport insample;                  // models fitted once on the pre-sample
    LossMatrix loss_matrix;               // mean absolute error over tenors
    std::vector<LossMatrix> tenor_matrices;
    std::vector<McsEntry> mcs;
    std::vector<DmEntry> dm;
    std::optional<FpcaModel> decomposition;  // full-sample log-price FPCA
    double elapsed_seconds = 0.0;            // not part of any report
};

/// Inputs on a common calendar. `futures` holds PRICE or LOG_PRICE values;
/// `factors`, when present, must carry exactly the same dates.
struct MarketData {
    FuturesPanel futures;
    std::optional<FactorPanel> factors;
};

/// Expanding-window experiment over the last `config.oos_length` returns.
/// Every model is refit on all data strictly before each target date.
BacktestRun run_expanding_backtest(const BacktestConfig& config, const MarketData& data);

/// Models fitted once on the returns preceding the out-of-sample period
/// (the whole sample when oos_length is 0); one-step fitted values scored
/// in-sample. RW contributes MAE only.
LossReport run_insample_eval(const BacktestConfig& config, const MarketData& data);

}  // namespace curvecast
