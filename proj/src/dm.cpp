#include "curvecast/dm.hpp"

#include "curvecast/error.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace curvecast {

namespace {

int cube_root_floor(std::size_t T) {
    auto lags = static_cast<std::size_t>(std::cbrt(static_cast<double>(T)));
    while ((lags + 1) * (lags + 1) * (lags + 1) <= T) ++lags;
    while (lags > 0 && lags * lags * lags > T) --lags;
    return static_cast<int>(lags);
}

struct Studentised {
    double statistic = 0.0;
    bool degenerate = false;  // zero long-run variance
    int lags = 0;
};

Studentised studentise(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::kInvalidArgument, "loss series lengths differ");
    const std::size_t T = a.size();
    if (T < 10) throw Error(ErrorKind::kInvalidArgument, "DM test needs >= 10 observations");

    std::vector<double> d(T);
    double mean = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        d[t] = a[t] - b[t];
        mean += d[t];
    }
    mean /= static_cast<double>(T);

    Studentised out;
    out.lags = cube_root_floor(T);
    auto autocov = [&](int k) {
        double s = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < T; ++t) {
            s += (d[t] - mean) * (d[t - static_cast<std::size_t>(k)] - mean);
        }
        return s / static_cast<double>(T);
    };
    double lrv = autocov(0);
    for (int k = 1; k <= out.lags; ++k) {
        lrv += 2.0 * (1.0 - static_cast<double>(k) / static_cast<double>(out.lags + 1)) * autocov(k);
    }

    if (!(lrv > 0.0)) {
        out.degenerate = true;
        if (mean == 0.0) {
            out.statistic = 0.0;
        } else {
            out.statistic = mean > 0.0 ? std::numeric_limits<double>::infinity()
                                       : -std::numeric_limits<double>::infinity();
        }
        return out;
    }
    out.statistic = mean / std::sqrt(lrv / static_cast<double>(T));
    return out;
}

}  // namespace

DmResult dm_test(std::span<const double> loss_a, std::span<const double> loss_b) {
    const auto s = studentise(loss_a, loss_b);
    DmResult out;
    out.statistic = s.statistic;
    out.bandwidth = s.lags;
    if (s.degenerate) {
        out.p_value = s.statistic == 0.0 ? 1.0 : 0.0;
        return out;
    }
    const boost::math::normal_distribution<double> normal;
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(normal, std::abs(s.statistic)));
    return out;
}

double modified_dm_correction(std::size_t T, int horizon) {
    const double n = static_cast<double>(T);
    const double h = static_cast<double>(horizon);
    return std::sqrt((n + 1.0 - 2.0 * h + h * (h - 1.0) / n) / n);
}

DmResult modified_dm_test(std::span<const double> loss_a, std::span<const double> loss_b,
                          int horizon) {
    if (horizon < 1) throw Error(ErrorKind::kInvalidArgument, "horizon must be >= 1");
    const auto s = studentise(loss_a, loss_b);
    DmResult out;
    out.bandwidth = s.lags;
    if (s.degenerate) {
        out.statistic = s.statistic;
        out.p_value = s.statistic == 0.0 ? 1.0 : 0.0;
        return out;
    }
    out.statistic = s.statistic * modified_dm_correction(loss_a.size(), horizon);
    const boost::math::students_t_distribution<double> t(static_cast<double>(loss_a.size() - 1));
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(t, std::abs(out.statistic)));
    return out;
}

}  // namespace curvecast
