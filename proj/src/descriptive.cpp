#include "curvecast/descriptive.hpp"

#include "curvecast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvecast {

ColumnStats column_stats(std::string name, std::span<const double> values) {
    const auto n = values.size();
    if (n < 2) throw Error(ErrorKind::kInvalidArgument, "descriptive stats need >= 2 rows");

    ColumnStats s;
    s.name = std::move(name);
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    s.std_dev = std::sqrt(m2 / static_cast<double>(n - 1));
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    // Moment ratios are meaningless for a zero-spread column.
    if (m2 > 0.0 && s.std_dev > 1e-12 * std::max(1.0, std::abs(s.mean))) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        s.std_dev = 0.0;
        s.skewness = std::numeric_limits<double>::quiet_NaN();
        s.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    }

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return s;
}

std::vector<ColumnStats> descriptive_stats(const FuturesPanel& panel) {
    std::vector<ColumnStats> out;
    for (Eigen::Index j = 0; j < panel.cols(); ++j) {
        const Eigen::VectorXd col = panel.values().col(j);
        out.push_back(column_stats(panel.tenors()[j].label, {col.data(), static_cast<std::size_t>(col.size())}));
    }
    return out;
}

std::vector<ColumnStats> descriptive_stats(const FactorPanel& factors) {
    std::vector<ColumnStats> out;
    for (Eigen::Index j = 0; j < factors.levels().cols(); ++j) {
        const Eigen::VectorXd col = factors.levels().col(j);
        out.push_back(column_stats(std::string(kFactorNames[j]),
                                   {col.data(), static_cast<std::size_t>(col.size())}));
    }
    return out;
}

}  // namespace curvecast
