#pragma once

#include "curvecast/date.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace curvecast {

enum class ScaleMarker { kPrice, kLogPrice, kLogReturn };

std::string_view to_string(ScaleMarker marker) noexcept;

/// An expiry column: a label such as "CL12" and its position in months.
struct Tenor {
    std::string label;
    double months = 0.0;

    friend bool operator==(const Tenor&, const Tenor&) = default;
};

/// CL1..CL9, CL12, CL18.
std::vector<Tenor> canonical_tenors();

/// Parses "CL<n>" style labels; the trailing integer is the month position.
Tenor tenor_from_label(std::string_view label);

/// Date-indexed matrix of futures values, one column per expiry tenor.
///
/// Validated on construction: dates strictly increasing, tenor positions
/// strictly increasing, every cell finite, and strictly positive values when
/// the marker is kPrice. Immutable afterwards.
class FuturesPanel {
public:
    FuturesPanel(std::vector<Date> dates, std::vector<Tenor> tenors, Eigen::MatrixXd values,
                 ScaleMarker marker);

    [[nodiscard]] const std::vector<Date>& dates() const noexcept { return dates_; }
    [[nodiscard]] const std::vector<Tenor>& tenors() const noexcept { return tenors_; }
    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
    [[nodiscard]] ScaleMarker marker() const noexcept { return marker_; }

    [[nodiscard]] Eigen::Index rows() const noexcept { return values_.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return values_.cols(); }

    /// Tenor positions in months, in column order.
    [[nodiscard]] Eigen::VectorXd tenor_positions() const;

    /// Rows [first, first + count).
    [[nodiscard]] FuturesPanel slice(Eigen::Index first, Eigen::Index count) const;

private:
    std::vector<Date> dates_;
    std::vector<Tenor> tenors_;
    Eigen::MatrixXd values_;
    ScaleMarker marker_;
};

inline constexpr std::array<std::string_view, 4> kFactorNames = {"SP500", "VIX", "USD", "EcPol"};

/// Exogenous factor levels (SP500, VIX, USD, EcPol), all strictly positive.
class FactorPanel {
public:
    FactorPanel(std::vector<Date> dates, Eigen::MatrixXd levels);

    [[nodiscard]] const std::vector<Date>& dates() const noexcept { return dates_; }
    [[nodiscard]] const Eigen::MatrixXd& levels() const noexcept { return levels_; }
    [[nodiscard]] Eigen::Index rows() const noexcept { return levels_.rows(); }

    /// Row t holds ln(L_t / L_{t-1}) for every factor; dated dates()[1..].
    [[nodiscard]] Eigen::MatrixXd log_changes() const;

    [[nodiscard]] FactorPanel slice(Eigen::Index first, Eigen::Index count) const;

private:
    std::vector<Date> dates_;
    Eigen::MatrixXd levels_;
};

/// ln(P_t / P_{t-1}) per tenor; the first date is dropped.
FuturesPanel to_log_returns(const FuturesPanel& panel);

/// ln(P_t) per cell.
FuturesPanel to_log_prices(const FuturesPanel& panel);

/// exp of a log-price panel back to prices.
FuturesPanel to_prices(const FuturesPanel& log_panel);

/// Restricts both panels to their common dates, keeping order.
std::pair<FuturesPanel, FactorPanel> align_panels(const FuturesPanel& futures,
                                                  const FactorPanel& factors);

}  // namespace curvecast
