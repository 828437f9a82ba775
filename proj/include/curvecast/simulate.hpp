#pragma once

#include "curvecast/date.hpp"
#include "curvecast/panel.hpp"
#include "curvecast/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace curvecast {

/// Damped-trend score generator: the same state recursions the ETS engine
/// filters, driven by N(0, sd) innovations.
struct ScoreProcess {
    double xi = 0.0;
    double delta = 1.0;
    double gamma = 0.0;
    double level0 = 0.0;
    double trend0 = 0.0;
    double sd = 0.0;
};

/// Karhunen-Loeve style generator for synthetic curve panels.
struct KlSpec {
    std::vector<Tenor> tenors = canonical_tenors();
    Eigen::VectorXd mean;            // one value per tenor
    Eigen::MatrixXd eigenfunctions;  // tenors x components, grid-orthonormal
    std::vector<ScoreProcess> scores;
    double noise_sd = 0.0;
    ScaleMarker marker = ScaleMarker::kLogPrice;
    Date start = Date{std::chrono::year{2009}, std::chrono::January, std::chrono::day{2}};
};

/// A spec file: generator plus run parameters.
struct SyntheticSpec {
    KlSpec kl;
    int n_days = 0;
    std::uint64_t seed = 0;
    bool with_factors = false;
};

/// Rescales columns to grid-orthonormal via Gram-Schmidt under the trapezoidal
/// grid of `tenors`.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& functions, const std::vector<Tenor>& tenors);

/// Draws score paths from the spec's processes (n_days x components).
Eigen::MatrixXd simulate_scores(const KlSpec& spec, int n_days, Rng& rng);

/// panel = mean + scores * eigenfunctions^T + noise, one curve per day.
FuturesPanel simulate_panel(const KlSpec& spec, int n_days, std::uint64_t seed);

/// Same, with caller-supplied scores (rows = days).
FuturesPanel simulate_panel(const KlSpec& spec, const Eigen::MatrixXd& scores, std::uint64_t seed);

/// Geometric random-walk factor levels on the given dates.
FactorPanel simulate_factors(const std::vector<Date>& dates, std::uint64_t seed);

/// Consecutive synthetic dates starting at `start`, skipping weekends.
std::vector<Date> synthetic_dates(const Date& start, int n_days);

SyntheticSpec parse_synthetic_spec(std::istream& in);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

}  // namespace curvecast
