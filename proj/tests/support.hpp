#pragma once

#include "curvecast/date.hpp"
#include "curvecast/panel.hpp"
#include "curvecast/rng.hpp"
#include "curvecast/simulate.hpp"

#include <Eigen/Dense>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <vector>

namespace testsupport {

using curvecast::Date;

inline std::vector<Date> weekdays(int n) {
    return curvecast::synthetic_dates(Date{std::chrono::year{2010}, std::chrono::January, std::chrono::day{4}}, n);
}

inline Eigen::MatrixXd normal_matrix(curvecast::Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                     double sd = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, sd);
    }
    return m;
}

// Geometric random-walk prices on the canonical tenors.
inline curvecast::FuturesPanel random_prices(std::uint64_t seed, int rows, double start = 80.0) {
    curvecast::Rng rng(seed);
    Eigen::MatrixXd v(rows, 11);
    for (Eigen::Index j = 0; j < 11; ++j) v(0, j) = start + static_cast<double>(j);
    for (Eigen::Index i = 1; i < rows; ++i) {
        const double common = rng.normal(0.0, 0.02);
        for (Eigen::Index j = 0; j < 11; ++j) v(i, j) = v(i - 1, j) * std::exp(common + rng.normal(0.0, 0.002));
    }
    return {weekdays(rows), curvecast::canonical_tenors(), v, curvecast::ScaleMarker::kPrice};
}

// Directory holding futures.csv and factors.csv for the real-data checks.
inline std::optional<std::filesystem::path> real_data_dir() {
    const char* dir = std::getenv("CURVECAST_REAL_DATA_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    const std::filesystem::path p(dir);
    if (!std::filesystem::exists(p / "futures.csv") || !std::filesystem::exists(p / "factors.csv")) {
        return std::nullopt;
    }
    return p;
}

inline std::filesystem::path source_dir() { return CURVECAST_SOURCE_DIR; }

}  // namespace testsupport
