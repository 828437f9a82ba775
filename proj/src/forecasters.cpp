#include "curvecast/forecasters.hpp"

#include "curvecast/error.hpp"
#include "curvecast/fpca.hpp"
#include "curvecast/ols.hpp"

#include <algorithm>
#include <cctype>

namespace curvecast {

std::string_view model_name(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::kPc: return "PC";
        case ModelKind::kFts: return "FTS";
        case ModelKind::kFundamental: return "Fund";
        case ModelKind::kRandomWalk: return "RW";
    }
    return "?";
}

std::optional<ModelKind> parse_model(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "pc") return ModelKind::kPc;
    if (lower == "fts") return ModelKind::kFts;
    if (lower == "fund" || lower == "fundamental") return ModelKind::kFundamental;
    if (lower == "rw") return ModelKind::kRandomWalk;
    return std::nullopt;
}

namespace {

struct FtsState {
    FpcaModel model;
    std::vector<EtsFit> fits;
};

FtsState fit_fts(const FuturesPanel& window, double proportion) {
    if (window.marker() != ScaleMarker::kLogPrice) {
        throw Error(ErrorKind::kWrongScale, "functional model needs a LOG_PRICE window");
    }
    if (window.rows() < kMinFtsWindow) {
        throw Error(ErrorKind::kInvalidArgument,
                    "functional model needs >= " + std::to_string(kMinFtsWindow) + " curves");
    }
    const auto grid = grid_for(window);
    FtsState state{FpcaModel{grid, {}, {}, {}, {}, 0, 0.0}, {}};
    try {
        state.model = fit_fpca(window.values(), grid, proportion);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::kAllZeroEigenvalues) throw;
        // Flat panel: nothing varies, the mean curve is the forecast.
        state.model.mean = estimate_mean(window.values());
        state.model.eigenfunctions.resize(grid.size(), 0);
        state.model.eigenvalues = Eigen::VectorXd::Zero(grid.size());
        state.model.scores.resize(window.rows(), 0);
        return state;
    }
    for (Eigen::Index k = 0; k < state.model.K; ++k) {
        const Eigen::VectorXd s = state.model.scores.col(k);
        state.fits.push_back(ets_fit({s.data(), static_cast<std::size_t>(s.size())}));
    }
    return state;
}

void check_same_dates(const FuturesPanel& a, const std::vector<Date>& dates, std::string_view what) {
    if (a.dates() != dates) {
        throw Error(ErrorKind::kInvalidArgument, std::string(what) + " windows are not date-aligned");
    }
}

Eigen::MatrixXd lagged(const Eigen::MatrixXd& m) { return m.topRows(m.rows() - 1); }
Eigen::MatrixXd led(const Eigen::MatrixXd& m) { return m.bottomRows(m.rows() - 1); }

std::vector<std::string> factor_names() { return {kFactorNames.begin(), kFactorNames.end()}; }

std::vector<OlsFit> fit_fundamental(const FuturesPanel& returns, const Eigen::MatrixXd& factors) {
    if (returns.marker() != ScaleMarker::kLogReturn) {
        throw Error(ErrorKind::kWrongScale, "fundamental model needs a LOG_RETURN window");
    }
    if (factors.rows() != returns.rows() || factors.cols() != 4) {
        throw Error(ErrorKind::kInvalidArgument, "factor changes must align with returns (n x 4)");
    }
    if (returns.rows() <= 6) throw Error(ErrorKind::kInvalidArgument, "fundamental window must exceed 6");
    return fit_ols_multi(lagged(factors), led(returns.values()), factor_names());
}

struct PcState {
    DiscretePcs pcs;
    std::vector<OlsFit> fits;
    std::vector<std::string> warnings;
};

PcState fit_pc(const FuturesPanel& returns, const FuturesPanel& prices) {
    if (returns.marker() != ScaleMarker::kLogReturn) {
        throw Error(ErrorKind::kWrongScale, "PC model needs a LOG_RETURN window");
    }
    check_same_dates(prices, returns.dates(), "PC price/return");
    if (returns.rows() <= 5) throw Error(ErrorKind::kInvalidArgument, "PC window must exceed 5");

    PcState state;
    state.pcs = discrete_pcs(prices.values(), 3);
    for (Eigen::Index k = state.pcs.loadings.cols(); k < state.pcs.requested; ++k) {
        state.warnings.push_back("PC" + std::to_string(k + 1) + " degenerate in window ending " +
                                 format_date(returns.dates().back()) + "; dropped");
    }
    std::vector<std::string> names;
    for (Eigen::Index k = 0; k < state.pcs.scores.cols(); ++k) names.push_back("f" + std::to_string(k + 1));
    state.fits = fit_ols_multi(lagged(state.pcs.scores), led(returns.values()), names);
    return state;
}

}  // namespace

FtsForecast fts_forecast(const FuturesPanel& log_price_window, double proportion) {
    const FtsState state = fit_fts(log_price_window, proportion);
    Eigen::VectorXd next_scores(state.model.K);
    FtsForecast out;
    for (Eigen::Index k = 0; k < state.model.K; ++k) {
        next_scores(k) = ets_forecast(state.fits[static_cast<std::size_t>(k)], 1).front();
        out.score_params.push_back(state.fits[static_cast<std::size_t>(k)].params);
    }
    out.K = state.model.K;
    out.log_price = reconstruct(state.model, next_scores.transpose(), state.model.K).row(0).transpose();
    out.returns = out.log_price - log_price_window.values().bottomRows(1).transpose();
    return out;
}

Eigen::MatrixXd fts_insample(const FuturesPanel& log_price_window, double proportion) {
    const FtsState state = fit_fts(log_price_window, proportion);
    const Eigen::Index n = log_price_window.rows();
    Eigen::MatrixXd predicted_scores(n, state.model.K);
    for (Eigen::Index k = 0; k < state.model.K; ++k) {
        const auto& fit = state.fits[static_cast<std::size_t>(k)];
        for (Eigen::Index t = 0; t < n; ++t) {
            predicted_scores(t, k) = state.model.scores(t, k) - fit.residuals[static_cast<std::size_t>(t)];
        }
    }
    const Eigen::MatrixXd curves = reconstruct(state.model, predicted_scores, state.model.K);
    return curves.bottomRows(n - 1) - log_price_window.values().topRows(n - 1);
}

Eigen::VectorXd fundamental_forecast(const FuturesPanel& return_window,
                                     const Eigen::MatrixXd& factor_changes) {
    const auto fits = fit_fundamental(return_window, factor_changes);
    const Eigen::VectorXd latest = factor_changes.bottomRows(1).transpose();
    Eigen::VectorXd out(return_window.cols());
    for (Eigen::Index j = 0; j < out.size(); ++j) out(j) = fits[static_cast<std::size_t>(j)].predict(latest);
    return out;
}

Eigen::MatrixXd fundamental_insample(const FuturesPanel& return_window,
                                     const Eigen::MatrixXd& factor_changes) {
    const auto fits = fit_fundamental(return_window, factor_changes);
    const Eigen::MatrixXd design = lagged(factor_changes);
    Eigen::MatrixXd out(design.rows(), return_window.cols());
    for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) = fits[static_cast<std::size_t>(j)].predict_rows(design);
    return out;
}

DiscretePcs discrete_pcs(const Eigen::MatrixXd& prices, Eigen::Index count) {
    const Eigen::Index m = prices.cols();
    DiscretePcs out;
    out.requested = count;
    const Eigen::VectorXd mean = estimate_mean(prices);
    const Eigen::MatrixXd cov = estimate_covariance(prices, mean);
    // Unit weights turn the functional eigenproblem into ordinary PCA with the
    // same sign convention.
    const FunctionGrid unit(Eigen::VectorXd::LinSpaced(m, 0.0, static_cast<double>(m - 1)),
                            Eigen::VectorXd::Ones(m));
    const auto system = eigendecompose(cov, unit);

    const double top = system.values.size() > 0 ? system.values(0) : 0.0;
    Eigen::Index used = 0;
    while (used < std::min(count, m) && top > 0.0 && system.values(used) > 1e-10 * top) ++used;
    out.loadings = system.functions.leftCols(used);
    out.scores = (prices.rowwise() - mean.transpose()) * out.loadings;
    return out;
}

PcForecast pc_forecast(const FuturesPanel& return_window, const FuturesPanel& price_window) {
    PcState state = fit_pc(return_window, price_window);
    const Eigen::VectorXd latest = state.pcs.scores.bottomRows(1).transpose();
    PcForecast out;
    out.components = state.pcs.scores.cols();
    out.warnings = std::move(state.warnings);
    out.returns.resize(return_window.cols());
    for (Eigen::Index j = 0; j < out.returns.size(); ++j) {
        out.returns(j) = state.fits[static_cast<std::size_t>(j)].predict(latest);
    }
    return out;
}

Eigen::MatrixXd pc_insample(const FuturesPanel& return_window, const FuturesPanel& price_window) {
    const PcState state = fit_pc(return_window, price_window);
    const Eigen::MatrixXd design = lagged(state.pcs.scores);
    Eigen::MatrixXd out(design.rows(), return_window.cols());
    for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) = state.fits[static_cast<std::size_t>(j)].predict_rows(design);
    return out;
}

double rw_forecast(std::span<const double> series) {
    if (series.empty()) throw Error(ErrorKind::kInvalidArgument, "random walk needs >= 1 point");
    return series.back();
}

Eigen::VectorXd rw_forecast(const FuturesPanel& return_window) {
    if (return_window.rows() < 1) throw Error(ErrorKind::kInvalidArgument, "random walk needs >= 1 row");
    return return_window.values().bottomRows(1).transpose();
}

}  // namespace curvecast
