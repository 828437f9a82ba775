#include "curvecast/backtest.hpp"

#include "curvecast/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

namespace curvecast {

namespace {

// Every panel view the models draw from, derived once from the inputs.
struct Derived {
    FuturesPanel log_prices;
    FuturesPanel prices;
    FuturesPanel returns;                  // row t: change from price row t to t + 1
    std::optional<Eigen::MatrixXd> factor_changes;  // aligned with `returns`
};

Derived derive(const MarketData& data, const std::vector<ModelKind>& models) {
    const auto& f = data.futures;
    if (f.marker() == ScaleMarker::kLogReturn) {
        throw Error(ErrorKind::kWrongScale, "backtest needs PRICE or LOG_PRICE futures");
    }
    if (f.rows() < 2) throw Error(ErrorKind::kInvalidArgument, "futures panel needs >= 2 rows");
    const bool log_input = f.marker() == ScaleMarker::kLogPrice;
    FuturesPanel log_prices = log_input ? f : to_log_prices(f);
    FuturesPanel prices = log_input ? to_prices(f) : f;
    FuturesPanel returns = to_log_returns(prices);

    std::optional<Eigen::MatrixXd> changes;
    if (data.factors) {
        if (data.factors->dates() != f.dates()) {
            throw Error(ErrorKind::kInvalidArgument, "factor dates must match futures dates; align first");
        }
        changes = data.factors->log_changes();
    }
    const bool needs_factors =
        std::find(models.begin(), models.end(), ModelKind::kFundamental) != models.end();
    if (needs_factors && !changes) {
        throw Error(ErrorKind::kInvalidArgument, "the Fund model needs a factor panel");
    }
    return {std::move(log_prices), std::move(prices), std::move(returns), std::move(changes)};
}

std::vector<std::string> tenor_labels(const FuturesPanel& panel) {
    std::vector<std::string> out;
    for (const auto& t : panel.tenors()) out.push_back(t.label);
    return out;
}

// One-step forecast of return row j from data strictly before its date.
Eigen::VectorXd forecast_row(ModelKind model, const Derived& d, Eigen::Index j, double p1) {
    switch (model) {
        case ModelKind::kFts:
            return fts_forecast(d.log_prices.slice(0, j + 1), p1).returns;
        case ModelKind::kFundamental:
            return fundamental_forecast(d.returns.slice(0, j), d.factor_changes->topRows(j));
        case ModelKind::kPc:
            return pc_forecast(d.returns.slice(0, j), d.prices.slice(1, j)).returns;
        case ModelKind::kRandomWalk:
            return rw_forecast(d.returns.slice(0, j));
    }
    throw Error(ErrorKind::kInvalidArgument, "unknown model");
}

int block_length_for(const BacktestConfig& config, const LossMatrix& matrix) {
    const auto T = static_cast<int>(matrix.losses.rows());
    int p = 1;
    if (config.block_length) {
        p = *config.block_length;
    } else if (T >= 10 && matrix.losses.cols() >= 2) {
        p = select_block_length(matrix.losses);
    }
    return std::clamp(p, 1, std::max(1, T));
}

}  // namespace

BacktestRun run_expanding_backtest(const BacktestConfig& config, const MarketData& data) {
    const auto started = std::chrono::steady_clock::now();
    config.validate();
    BacktestRun run;
    run.config = config;
    run.tenors = tenor_labels(data.futures);
    run.sample_dates = data.futures.dates();

    const Derived d = derive(data, config.models);
    const Eigen::Index n_returns = d.returns.rows();
    const Eigen::Index T = config.oos_length;
    if (T < 1) throw Error(ErrorKind::kInvalidArgument, "oos-len must be >= 1 for a backtest");
    const Eigen::Index first = n_returns - T;
    if (first < kMinFtsWindow) {
        throw Error(ErrorKind::kInvalidArgument,
                    "oos-len " + std::to_string(T) + " leaves " + std::to_string(first) +
                        " training returns; at least " + std::to_string(kMinFtsWindow) + " needed");
    }

    try {
        run.decomposition = fit_fpca(d.log_prices, config.p1);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::kAllZeroEigenvalues) throw;
    }
    if (config.models.empty()) return run;

    // Each target is an independent window; results land in their own slot.
    const auto n_models = config.models.size();
    std::vector<std::vector<Eigen::VectorXd>> forecasts(static_cast<std::size_t>(T),
                                                        std::vector<Eigen::VectorXd>(n_models));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(T));
    std::vector<std::string> failed_model(static_cast<std::size_t>(T));
    std::atomic<Eigen::Index> next{0};
    auto worker = [&] {
        for (Eigen::Index t = next++; t < T; t = next++) {
            const auto slot = static_cast<std::size_t>(t);
            for (std::size_t m = 0; m < n_models; ++m) {
                try {
                    forecasts[slot][m] = forecast_row(config.models[m], d, first + t, config.p1);
                } catch (...) {
                    failures[slot] = std::current_exception();
                    failed_model[slot] = model_name(config.models[m]);
                    break;
                }
            }
        }
    };
    const int n_threads = static_cast<int>(std::min<Eigen::Index>(config.threads, T));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (Eigen::Index t = 0; t < T; ++t) {
        const auto slot = static_cast<std::size_t>(t);
        if (!failures[slot]) continue;
        const auto when = format_date(d.returns.dates()[static_cast<std::size_t>(first + t)]);
        try {
            std::rethrow_exception(failures[slot]);
        } catch (const std::exception& e) {
            throw Error(ErrorKind::kWindowFailure,
                        failed_model[slot] + " failed for target " + when + ": " + e.what());
        }
    }

    const Eigen::MatrixXd realized = d.returns.values().bottomRows(T);
    std::vector<ModelPredictions> predictions;
    for (std::size_t m = 0; m < n_models; ++m) {
        ModelPredictions p;
        p.model = config.models[m];
        p.forecasts.resize(T, d.returns.cols());
        p.realized = realized;
        for (Eigen::Index t = 0; t < T; ++t) {
            const auto slot = static_cast<std::size_t>(t);
            p.forecasts.row(t) = forecasts[slot][m].transpose();
            run.records.push_back({config.models[m], d.returns.dates()[static_cast<std::size_t>(first + t)],
                                   forecasts[slot][m], realized.row(t).transpose()});
        }
        predictions.push_back(std::move(p));
    }

    run.insample = run_insample_eval(config, data);
    const Eigen::MatrixXd in_sample = d.returns.values().topRows(first);
    run.losses = build_loss_report(predictions, run.tenors, in_sample,
                                   {std::begin(kAllMeasures), std::end(kAllMeasures)}, true);
    run.loss_matrix = build_loss_matrix(run.records);
    for (Eigen::Index j = 0; j < d.returns.cols(); ++j) run.tenor_matrices.push_back(build_loss_matrix(run.records, j));

    auto confidence_sets = [&](const std::string& scope, const LossMatrix& matrix) {
        const BootstrapPlan plan{block_length_for(config, matrix), config.bootstrap_reps, config.seed};
        for (auto statistic : config.statistics) {
            for (double alpha : config.alphas) {
                run.mcs.push_back({scope, mcs_run(matrix, alpha, statistic, plan)});
            }
        }
    };
    confidence_sets("Overall", run.loss_matrix);
    for (std::size_t j = 0; j < run.tenor_matrices.size(); ++j) confidence_sets(run.tenors[j], run.tenor_matrices[j]);

    if (T >= 10) {
        const auto& L = run.loss_matrix.losses;
        for (Eigen::Index a = 0; a < L.cols(); ++a) {
            for (Eigen::Index b = a + 1; b < L.cols(); ++b) {
                const Eigen::VectorXd la = L.col(a);
                const Eigen::VectorXd lb = L.col(b);
                const std::span<const double> sa(la.data(), static_cast<std::size_t>(la.size()));
                const std::span<const double> sb(lb.data(), static_cast<std::size_t>(lb.size()));
                run.dm.push_back({run.loss_matrix.models[static_cast<std::size_t>(a)],
                                  run.loss_matrix.models[static_cast<std::size_t>(b)], dm_test(sa, sb),
                                  modified_dm_test(sa, sb, 1)});
            }
        }
    }

    run.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return run;
}

LossReport run_insample_eval(const BacktestConfig& config, const MarketData& data) {
    config.validate();
    const Derived d = derive(data, config.models);
    const Eigen::Index first = d.returns.rows() - config.oos_length;
    if (first < kMinFtsWindow) {
        throw Error(ErrorKind::kInvalidArgument,
                    "in-sample window has " + std::to_string(first) + " returns; at least " +
                        std::to_string(kMinFtsWindow) + " needed");
    }
    const Eigen::Index rows = first - 1;  // predictions for return rows 1..first-1
    const Eigen::MatrixXd realized = d.returns.values().block(1, 0, rows, d.returns.cols());

    std::vector<ModelPredictions> fitted;
    for (auto model : config.models) {
        if (model == ModelKind::kRandomWalk) continue;
        ModelPredictions p;
        p.model = model;
        p.realized = realized;
        switch (model) {
            case ModelKind::kFts:
                p.forecasts = fts_insample(d.log_prices.slice(0, first + 1), config.p1).bottomRows(rows);
                break;
            case ModelKind::kFundamental:
                p.forecasts = fundamental_insample(d.returns.slice(0, first), d.factor_changes->topRows(first));
                break;
            case ModelKind::kPc:
                p.forecasts = pc_insample(d.returns.slice(0, first), d.prices.slice(1, first));
                break;
            case ModelKind::kRandomWalk:
                break;
        }
        fitted.push_back(std::move(p));
    }

    const auto tenors = tenor_labels(data.futures);
    const std::vector<Measure> measures{Measure::kMae, Measure::kMcpdc, Measure::kMmeUnder, Measure::kMmeOver};
    LossReport report = fitted.empty() ? LossReport{tenors, {}, false, {}}
                                       : build_loss_report(fitted, tenors, std::nullopt, measures, false);

    ModelPredictions rw;
    rw.model = ModelKind::kRandomWalk;
    rw.forecasts = d.returns.values().topRows(rows);
    rw.realized = realized;
    const LossReport rw_report = build_loss_report({rw}, tenors, std::nullopt, {Measure::kMae}, false);
    report.models.push_back(ModelKind::kRandomWalk);
    report.values[Measure::kMae][ModelKind::kRandomWalk] =
        rw_report.values.at(Measure::kMae).at(ModelKind::kRandomWalk);
    return report;
}

}  // namespace curvecast
