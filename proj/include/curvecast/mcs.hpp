#pragma once

#include "curvecast/losses.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace curvecast {

/// d_ij,t = l_i,t - l_j,t and the relative losses d_i.,t = sum_j d_ij,t / (m - 1).
struct LossDifferentials {
    std::vector<Eigen::MatrixXd> pairwise;  // one T x m matrix per model i: column j = d_ij
    Eigen::MatrixXd relative;               // T x m
};

LossDifferentials loss_differentials(const Eigen::MatrixXd& losses);

/// Per pairwise differential series: AR(q) with intercept, q = 0..min(10, T/5)
/// chosen by BIC, then the largest lag of that fit with |t| > 1.96. The
/// maximum over series, never below 1.
int select_block_length(const Eigen::MatrixXd& losses);

struct BootstrapPlan {
    int block_length = 1;
    int replications = 5000;
    std::uint64_t seed = 0;
};

/// Circular moving-block resampling of time indices 0..T-1. Each row is one
/// replication; the same row is applied to every model.
Eigen::MatrixXi block_bootstrap(Eigen::Index T, const BootstrapPlan& plan);

enum class McsStatistic { kRange, kMax };

std::string_view to_string(McsStatistic statistic) noexcept;

struct McsStep {
    std::string eliminated;  // empty on the terminating step
    int step = 0;
    double statistic = 0.0;
    double p_value = 1.0;
};

struct McsResult {
    std::vector<std::string> surviving;
    std::vector<McsStep> eliminations;  // only steps that removed a model
    std::vector<McsStep> sequence;      // every test performed, including the accepting one
    McsStatistic statistic = McsStatistic::kRange;
    double alpha = 0.1;
    BootstrapPlan plan;

    [[nodiscard]] bool contains(std::string_view model) const;
};

/// Sequential elimination until equal predictive ability is not rejected at
/// level alpha. Variances are block-bootstrap estimates; p-values are the
/// share of recentred bootstrap statistics at or above the observed one.
McsResult mcs_run(const LossMatrix& matrix, double alpha, McsStatistic statistic,
                  const BootstrapPlan& plan);

}  // namespace curvecast
