#pragma once

#include "curvecast/panel.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace curvecast {

/// Summary of one column. Skewness and kurtosis are NaN when the column has
/// zero spread; kurtosis is reported in the excess convention (normal = 0).
struct ColumnStats {
    std::string name;
    double mean = 0.0;
    double std_dev = 0.0;  // divisor n - 1
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

ColumnStats column_stats(std::string name, std::span<const double> values);

std::vector<ColumnStats> descriptive_stats(const FuturesPanel& panel);
std::vector<ColumnStats> descriptive_stats(const FactorPanel& factors);

}  // namespace curvecast
