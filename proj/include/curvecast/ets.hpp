#pragma once

#include <span>
#include <vector>

namespace curvecast {

/// Damped additive-trend smoothing parameters and initial states.
///   y_t    = l_{t-1} + xi * b_{t-1} + e_t
///   l_t    = l_{t-1} + xi * b_{t-1} + delta * e_t
///   b_t    = xi * b_{t-1} + gamma * e_t
struct DampedTrendParams {
    double xi = 0.0;
    double delta = 1.0;
    double gamma = 0.0;
    double l0 = 0.0;
    double b0 = 0.0;
};

/// 0 <= xi < 1, 0 < delta <= 1, 0 <= gamma <= delta.
bool admissible(const DampedTrendParams& p) noexcept;

struct EtsFit {
    DampedTrendParams params;
    std::vector<double> levels;     // l_1..l_n
    std::vector<double> growths;    // b_1..b_n
    std::vector<double> residuals;  // e_1..e_n
    double sse = 0.0;

    /// One-step predictions l_{t-1} + xi * b_{t-1}, rebuilt from the stored states.
    [[nodiscard]] std::vector<double> fitted(std::span<const double> series) const;
};

/// Runs the state recursions over the series with the given parameters.
EtsFit ets_filter(std::span<const double> series, const DampedTrendParams& params);

/// h-step path from the final states with future errors set to zero.
std::vector<double> ets_forecast(const EtsFit& fit, int horizon);

/// Fitting region used by ets_fit.
struct EtsBounds {
    static constexpr double kXiMax = 0.999;
    static constexpr double kDeltaMin = 1e-4;
};

/// Minimises one-step SSE over the admissible box: a fixed 8x8x8 grid over
/// (xi, delta, gamma/delta) followed by a Nelder-Mead polish that also frees
/// the initial states. Deterministic. Constant input returns xi = 0 with a
/// zero-residual fit.
EtsFit ets_fit(std::span<const double> series);

}  // namespace curvecast
