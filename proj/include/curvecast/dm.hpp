#pragma once

#include <span>

namespace curvecast {

struct DmResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int bandwidth = 0;  // Bartlett lags used for the long-run variance
};

/// Diebold-Mariano test of equal expected loss. d_t = loss_a - loss_b,
/// statistic = mean(d) / sqrt(LRV / T) with a Bartlett long-run variance of
/// floor(T^(1/3)) lags; two-sided p-value from the standard normal. Identical
/// losses give statistic 0 and p 1.
DmResult dm_test(std::span<const double> loss_a, std::span<const double> loss_b);

/// Small-sample factor sqrt((T + 1 - 2h + h(h - 1) / T) / T).
double modified_dm_correction(std::size_t T, int horizon);

/// DM statistic times the small-sample factor, referred to Student-t with
/// T - 1 degrees of freedom.
DmResult modified_dm_test(std::span<const double> loss_a, std::span<const double> loss_b,
                          int horizon = 1);

}  // namespace curvecast
