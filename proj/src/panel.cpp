#include "curvecast/panel.hpp"

#include "curvecast/error.hpp"

#include <charconv>
#include <cmath>

namespace curvecast {

std::string_view to_string(ScaleMarker marker) noexcept {
    switch (marker) {
        case ScaleMarker::kPrice: return "PRICE";
        case ScaleMarker::kLogPrice: return "LOG_PRICE";
        case ScaleMarker::kLogReturn: return "LOG_RETURN";
    }
    return "UNKNOWN";
}

std::vector<Tenor> canonical_tenors() {
    std::vector<Tenor> out;
    for (int m : {1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 18}) {
        out.push_back({"CL" + std::to_string(m), static_cast<double>(m)});
    }
    return out;
}

Tenor tenor_from_label(std::string_view label) {
    std::size_t digits = label.size();
    while (digits > 0 && label[digits - 1] >= '0' && label[digits - 1] <= '9') --digits;
    int months = 0;
    const auto* begin = label.data() + digits;
    const auto* end = label.data() + label.size();
    if (begin == end || std::from_chars(begin, end, months).ptr != end || months <= 0) {
        throw Error(ErrorKind::kSchemaMismatch,
                    "tenor label '" + std::string(label) + "' has no month suffix");
    }
    return {std::string(label), static_cast<double>(months)};
}

namespace {

void check_dates(const std::vector<Date>& dates) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (dates[i] == dates[i - 1]) {
            throw Error(ErrorKind::kDuplicateDate, "duplicate date " + format_date(dates[i]));
        }
        if (dates[i] < dates[i - 1]) {
            throw Error(ErrorKind::kInvalidArgument,
                        "dates not increasing at " + format_date(dates[i]));
        }
    }
}

}  // namespace

FuturesPanel::FuturesPanel(std::vector<Date> dates, std::vector<Tenor> tenors,
                           Eigen::MatrixXd values, ScaleMarker marker)
    : dates_(std::move(dates)), tenors_(std::move(tenors)), values_(std::move(values)),
      marker_(marker) {
    if (static_cast<Eigen::Index>(dates_.size()) != values_.rows() ||
        static_cast<Eigen::Index>(tenors_.size()) != values_.cols()) {
        throw Error(ErrorKind::kInvalidArgument, "panel shape does not match dates x tenors");
    }
    if (tenors_.empty()) throw Error(ErrorKind::kInvalidArgument, "panel has no tenors");
    check_dates(dates_);
    for (std::size_t j = 1; j < tenors_.size(); ++j) {
        if (!(tenors_[j].months > tenors_[j - 1].months)) {
            throw Error(ErrorKind::kInvalidArgument, "tenor positions must increase strictly");
        }
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        for (Eigen::Index j = 0; j < values_.cols(); ++j) {
            const double v = values_(i, j);
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::kMissingCell, format_date(dates_[i]) + " " +
                                                         tenors_[j].label + " is not finite");
            }
            if (marker_ == ScaleMarker::kPrice && v <= 0.0) {
                throw Error(ErrorKind::kNonPositivePrice,
                            format_date(dates_[i]) + " " + tenors_[j].label);
            }
        }
    }
}

Eigen::VectorXd FuturesPanel::tenor_positions() const {
    Eigen::VectorXd out(cols());
    for (Eigen::Index j = 0; j < cols(); ++j) out(j) = tenors_[j].months;
    return out;
}

FuturesPanel FuturesPanel::slice(Eigen::Index first, Eigen::Index count) const {
    if (first < 0 || count < 0 || first + count > rows()) {
        throw Error(ErrorKind::kInvalidArgument, "panel slice out of range");
    }
    std::vector<Date> d(dates_.begin() + first, dates_.begin() + first + count);
    return {std::move(d), tenors_, values_.middleRows(first, count), marker_};
}

FactorPanel::FactorPanel(std::vector<Date> dates, Eigen::MatrixXd levels)
    : dates_(std::move(dates)), levels_(std::move(levels)) {
    if (static_cast<Eigen::Index>(dates_.size()) != levels_.rows() ||
        levels_.cols() != static_cast<Eigen::Index>(kFactorNames.size())) {
        throw Error(ErrorKind::kInvalidArgument, "factor panel shape mismatch");
    }
    check_dates(dates_);
    for (Eigen::Index i = 0; i < levels_.rows(); ++i) {
        for (Eigen::Index j = 0; j < levels_.cols(); ++j) {
            const double v = levels_(i, j);
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::kMissingCell, format_date(dates_[i]) + " " +
                                                         std::string(kFactorNames[j]));
            }
            if (v <= 0.0) {
                throw Error(ErrorKind::kNonPositivePrice, "factor level " + format_date(dates_[i]) +
                                                              " " + std::string(kFactorNames[j]));
            }
        }
    }
}

Eigen::MatrixXd FactorPanel::log_changes() const {
    if (rows() < 2) return Eigen::MatrixXd(0, levels_.cols());
    const Eigen::Index n = rows() - 1;
    return (levels_.bottomRows(n).array() / levels_.topRows(n).array()).log().matrix();
}

FactorPanel FactorPanel::slice(Eigen::Index first, Eigen::Index count) const {
    if (first < 0 || count < 0 || first + count > rows()) {
        throw Error(ErrorKind::kInvalidArgument, "factor slice out of range");
    }
    std::vector<Date> d(dates_.begin() + first, dates_.begin() + first + count);
    return {std::move(d), levels_.middleRows(first, count)};
}

FuturesPanel to_log_returns(const FuturesPanel& panel) {
    if (panel.marker() != ScaleMarker::kPrice) {
        throw Error(ErrorKind::kWrongScale, "log returns need a PRICE panel, got " +
                                                std::string(to_string(panel.marker())));
    }
    if (panel.rows() < 2) throw Error(ErrorKind::kInvalidArgument, "log returns need >= 2 rows");
    const Eigen::Index n = panel.rows() - 1;
    const auto& v = panel.values();
    Eigen::MatrixXd r(n, panel.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < panel.cols(); ++j) r(i, j) = std::log(v(i + 1, j) / v(i, j));
    }
    std::vector<Date> dates(panel.dates().begin() + 1, panel.dates().end());
    return {std::move(dates), panel.tenors(), std::move(r), ScaleMarker::kLogReturn};
}

FuturesPanel to_log_prices(const FuturesPanel& panel) {
    if (panel.marker() != ScaleMarker::kPrice) {
        throw Error(ErrorKind::kWrongScale, "log prices need a PRICE panel");
    }
    return {panel.dates(), panel.tenors(), panel.values().array().log().matrix(),
            ScaleMarker::kLogPrice};
}

FuturesPanel to_prices(const FuturesPanel& log_panel) {
    if (log_panel.marker() != ScaleMarker::kLogPrice) {
        throw Error(ErrorKind::kWrongScale, "prices need a LOG_PRICE panel");
    }
    return {log_panel.dates(), log_panel.tenors(), log_panel.values().array().exp().matrix(),
            ScaleMarker::kPrice};
}

std::pair<FuturesPanel, FactorPanel> align_panels(const FuturesPanel& futures,
                                                  const FactorPanel& factors) {
    if (futures.rows() == 0 || factors.rows() == 0) {
        throw Error(ErrorKind::kEmptyIntersection, "cannot align an empty panel");
    }
    std::vector<Eigen::Index> keep_f, keep_x;
    std::size_t i = 0, j = 0;
    const auto& a = futures.dates();
    const auto& b = factors.dates();
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            keep_f.push_back(static_cast<Eigen::Index>(i++));
            keep_x.push_back(static_cast<Eigen::Index>(j++));
        }
    }
    if (keep_f.empty()) throw Error(ErrorKind::kEmptyIntersection, "no common dates");

    std::vector<Date> dates;
    Eigen::MatrixXd fv(keep_f.size(), futures.cols());
    Eigen::MatrixXd xv(keep_x.size(), factors.levels().cols());
    for (std::size_t k = 0; k < keep_f.size(); ++k) {
        dates.push_back(a[keep_f[k]]);
        fv.row(k) = futures.values().row(keep_f[k]);
        xv.row(k) = factors.levels().row(keep_x[k]);
    }
    return {FuturesPanel(dates, futures.tenors(), std::move(fv), futures.marker()),
            FactorPanel(dates, std::move(xv))};
}

}  // namespace curvecast
