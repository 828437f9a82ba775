#include "curvecast/ets.hpp"

#include "curvecast/error.hpp"
#include "nelder_mead.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace curvecast {

bool admissible(const DampedTrendParams& p) noexcept {
    return p.xi >= 0.0 && p.xi < 1.0 && p.delta > 0.0 && p.delta <= 1.0 && p.gamma >= 0.0 &&
           p.gamma <= p.delta && std::isfinite(p.l0) && std::isfinite(p.b0);
}

std::vector<double> EtsFit::fitted(std::span<const double> series) const {
    std::vector<double> out(series.size());
    for (std::size_t t = 0; t < series.size() && t < levels.size(); ++t) {
        out[t] = t == 0 ? params.l0 + params.xi * params.b0 : levels[t - 1] + params.xi * growths[t - 1];
    }
    return out;
}

EtsFit ets_filter(std::span<const double> series, const DampedTrendParams& params) {
    if (series.size() < 2) throw Error(ErrorKind::kInvalidArgument, "ETS filter needs >= 2 points");
    if (!admissible(params)) {
        throw Error(ErrorKind::kInadmissibleParams, "need 0<=xi<1, 0<delta<=1, 0<=gamma<=delta");
    }
    EtsFit fit;
    fit.params = params;
    fit.levels.reserve(series.size());
    fit.growths.reserve(series.size());
    fit.residuals.reserve(series.size());

    double level = params.l0;
    double growth = params.b0;
    for (double y : series) {
        const double predicted = level + params.xi * growth;
        const double eps = y - predicted;
        // Same as predicted + delta * eps, but exactly y when delta = 1.
        level = (1.0 - params.delta) * predicted + params.delta * y;
        growth = params.xi * growth + params.gamma * eps;
        fit.levels.push_back(level);
        fit.growths.push_back(growth);
        fit.residuals.push_back(eps);
        fit.sse += eps * eps;
    }
    return fit;
}

std::vector<double> ets_forecast(const EtsFit& fit, int horizon) {
    if (horizon < 1) throw Error(ErrorKind::kInvalidArgument, "forecast horizon must be >= 1");
    if (fit.levels.empty()) throw Error(ErrorKind::kInvalidArgument, "fit has no states");
    double level = fit.levels.back();
    double growth = fit.growths.back();
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        growth *= fit.params.xi;
        level += growth;
        path.push_back(level);
    }
    return path;
}

namespace {

double sse_only(std::span<const double> y, const DampedTrendParams& p) {
    double level = p.l0, growth = p.b0, sse = 0.0;
    for (double v : y) {
        const double predicted = level + p.xi * growth;
        const double eps = v - predicted;
        level = (1.0 - p.delta) * predicted + p.delta * v;
        growth = p.xi * growth + p.gamma * eps;
        sse += eps * eps;
    }
    return std::isfinite(sse) ? sse : std::numeric_limits<double>::max();
}

// Optimiser coordinates: (xi, delta, gamma / delta, l0, b0), clamped to the box.
DampedTrendParams project(const std::vector<double>& z) {
    DampedTrendParams p;
    p.xi = std::clamp(z[0], 0.0, EtsBounds::kXiMax);
    p.delta = std::clamp(z[1], EtsBounds::kDeltaMin, 1.0);
    p.gamma = std::clamp(z[2], 0.0, 1.0) * p.delta;
    p.l0 = z[3];
    p.b0 = z[4];
    return p;
}

constexpr std::array<double, 8> kXiGrid = {0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.98};
constexpr std::array<double, 8> kDeltaGrid = {0.01, 0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0};
constexpr std::array<double, 8> kGammaShareGrid = {0.0,     1.0 / 7, 2.0 / 7, 3.0 / 7,
                                                   4.0 / 7, 5.0 / 7, 6.0 / 7, 1.0};
constexpr int kPolishEvaluations = 600;

}  // namespace

EtsFit ets_fit(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 4) throw Error(ErrorKind::kInvalidArgument, "ETS fit needs >= 4 points");
    for (double v : series) {
        if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidArgument, "series has non-finite values");
    }

    if (std::all_of(series.begin(), series.end(), [&](double v) { return v == series[0]; })) {
        return ets_filter(series, {0.0, EtsBounds::kDeltaMin, 0.0, series[0], 0.0});
    }

    const std::size_t diffs = std::min<std::size_t>(4, n - 1);
    const double b0 = (series[diffs] - series[0]) / static_cast<double>(diffs);
    const double l0 = series[0];

    std::vector<double> best{kXiGrid[0], kDeltaGrid[0], kGammaShareGrid[0], l0, b0};
    double best_sse = std::numeric_limits<double>::infinity();
    for (double xi : kXiGrid) {
        for (double delta : kDeltaGrid) {
            for (double share : kGammaShareGrid) {
                std::vector<double> z{xi, delta, share, l0, b0};
                const double sse = sse_only(series, project(z));
                if (sse < best_sse) {
                    best_sse = sse;
                    best = std::move(z);
                }
            }
        }
    }

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double spread = 0.0, step = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        spread += (series[t] - mean) * (series[t] - mean);
        if (t > 0) step += std::abs(series[t] - series[t - 1]);
    }
    spread = std::sqrt(spread / static_cast<double>(n));
    step /= static_cast<double>(n - 1);

    const std::vector<double> steps{0.05, 0.05, 0.1, 0.1 * std::max(spread, 1e-8),
                                    0.5 * std::max(step, 1e-8)};
    auto polished = detail::nelder_mead(
        [&](const std::vector<double>& z) { return sse_only(series, project(z)); }, best, steps,
        kPolishEvaluations, 1e-12);
    if (polished.value < best_sse) best = polished.x;
    return ets_filter(series, project(best));
}

}  // namespace curvecast
