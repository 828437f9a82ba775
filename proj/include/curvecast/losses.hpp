#pragma once

#include "curvecast/date.hpp"
#include "curvecast/forecasters.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curvecast {

// Errors are oriented realized - forecast throughout: positive means the
// model under-predicted.

/// Per-tenor values and their arithmetic mean across tenors.
struct TenorLosses {
    Eigen::VectorXd per_tenor;
    double overall = 0.0;
};

/// Mean absolute error per tenor over a T x tenors error matrix.
TenorLosses mae(const Eigen::MatrixXd& errors);

/// Mean signed error per tenor.
TenorLosses me(const Eigen::MatrixXd& errors);

/// Errors scaled by each tenor's in-sample mean absolute first difference.
/// Throws ZeroDenominator when an in-sample column never changes.
TenorLosses mase(const Eigen::MatrixXd& errors, const Eigen::MatrixXd& in_sample_series);

enum class MmeMode { kUnder, kOver };

/// Mixed error: in kUnder mode under-predictions enter as sqrt|e| and
/// over-predictions as |e|; kOver swaps the roles. Zero errors add nothing.
TenorLosses mme(const Eigen::MatrixXd& errors, MmeMode mode);

/// How sign ties count in the direction-of-change measure.
enum class TiePolicy {
    kBothZeroCorrect,   // a zero matches only a zero
    kZeroNeverCorrect,  // any zero on either side is a miss
};

/// Fraction of days whose forecast sign equals the realized sign.
TenorLosses mcpdc(const Eigen::MatrixXd& forecasts, const Eigen::MatrixXd& realized,
                  TiePolicy ties = TiePolicy::kBothZeroCorrect);

enum class Measure { kMae, kMe, kMase, kMmeUnder, kMmeOver, kMcpdc };

/// In-sample names (MAE, ME, ...) or their forecast counterparts (MAFE, MFE, ...).
std::string_view measure_label(Measure measure, bool out_of_sample);

inline constexpr Measure kAllMeasures[] = {Measure::kMae,      Measure::kMe,      Measure::kMase,
                                           Measure::kMmeUnder, Measure::kMmeOver, Measure::kMcpdc};

/// Forecasts and realizations of one model over a common set of days.
struct ModelPredictions {
    ModelKind model = ModelKind::kRandomWalk;
    Eigen::MatrixXd forecasts;  // T x tenors
    Eigen::MatrixXd realized;   // T x tenors
};

struct LossReport {
    std::vector<std::string> tenors;
    std::vector<ModelKind> models;
    bool out_of_sample = true;
    std::map<Measure, std::map<ModelKind, TenorLosses>> values;

    [[nodiscard]] const TenorLosses* find(Measure measure, ModelKind model) const;
};

/// Computes every requested measure for every model. MASE is skipped when
/// `in_sample_series` is absent.
LossReport build_loss_report(const std::vector<ModelPredictions>& predictions,
                             std::vector<std::string> tenors,
                             const std::optional<Eigen::MatrixXd>& in_sample_series,
                             const std::vector<Measure>& measures, bool out_of_sample,
                             TiePolicy ties = TiePolicy::kBothZeroCorrect);

/// Rows per measure: Overall first, then one per tenor; one column per model.
void write_loss_report(std::ostream& out, const LossReport& report);

/// Per-day losses per model, the input of the confidence-set procedure.
struct LossMatrix {
    std::vector<Date> dates;
    std::vector<std::string> models;
    Eigen::MatrixXd losses;  // T x models
};

/// Per model and day: mean over tenors of |realized - forecast|. With
/// `tenor` set, only that column's absolute error.
LossMatrix build_loss_matrix(const std::vector<ForecastRecord>& records,
                             std::optional<Eigen::Index> tenor = std::nullopt);

void write_loss_matrix(std::ostream& out, const LossMatrix& matrix);
LossMatrix read_loss_matrix(std::istream& in);
LossMatrix load_loss_matrix(const std::filesystem::path& path);

}  // namespace curvecast
