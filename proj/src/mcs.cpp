#include "curvecast/mcs.hpp"

#include "curvecast/error.hpp"
#include "curvecast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvecast {

std::string_view to_string(McsStatistic statistic) noexcept {
    return statistic == McsStatistic::kRange ? "range" : "max";
}

bool McsResult::contains(std::string_view model) const {
    return std::find(surviving.begin(), surviving.end(), model) != surviving.end();
}

LossDifferentials loss_differentials(const Eigen::MatrixXd& losses) {
    const Eigen::Index m = losses.cols();
    if (m < 2) throw Error(ErrorKind::kInvalidArgument, "loss differentials need >= 2 models");
    LossDifferentials out;
    out.relative = Eigen::MatrixXd::Zero(losses.rows(), m);
    for (Eigen::Index i = 0; i < m; ++i) {
        Eigen::MatrixXd d(losses.rows(), m);
        for (Eigen::Index j = 0; j < m; ++j) d.col(j) = losses.col(i) - losses.col(j);
        out.relative.col(i) = d.rowwise().sum() / static_cast<double>(m - 1);
        out.pairwise.push_back(std::move(d));
    }
    return out;
}

namespace {

constexpr double kSignificance = 1.96;

struct ArFit {
    Eigen::VectorXd abs_t;  // |t| per lag 1..q
    double sigma2 = 0.0;    // residual variance, divisor n
    bool ok = false;        // false when the design is rank deficient
};

// AR(q) with intercept, least squares.
ArFit fit_ar(const Eigen::VectorXd& y, int q) {
    ArFit out;
    const Eigen::Index T = y.size();
    const Eigen::Index n = T - q;
    const Eigen::Index p = q + 1;
    if (n <= p) return out;
    Eigen::MatrixXd X(n, p);
    X.col(0).setOnes();
    for (int k = 1; k <= q; ++k) X.col(k) = y.segment(q - k, n);
    const Eigen::VectorXd target = y.tail(n);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) return out;
    const Eigen::VectorXd beta = qr.solve(target);
    const double rss = (target - X * beta).squaredNorm();
    out.sigma2 = rss / static_cast<double>(n);
    if (q == 0) {
        out.ok = out.sigma2 > 0.0;
        return out;
    }
    const double s2 = rss / static_cast<double>(n - p);
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    out.abs_t.resize(q);
    for (int k = 1; k <= q; ++k) {
        const double se = std::sqrt(s2 * xtx_inv(k, k));
        if (!(se > 0.0)) return out;
        out.abs_t(k - 1) = std::abs(beta(k) / se);
    }
    out.ok = true;
    return out;
}

// Order by BIC on a common sample, then the largest significant lag of that
// fit. Zero when nothing is significant or the series is degenerate.
int significant_order(const Eigen::VectorXd& d, int cap) {
    const Eigen::Index T = d.size();
    int best_q = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int q = 0; q <= cap; ++q) {
        const auto fit = fit_ar(d.tail(T - cap + q), q);
        if (!fit.ok || !(fit.sigma2 > 0.0)) continue;
        const auto n = static_cast<double>(T - cap);
        const double bic = std::log(fit.sigma2) + std::log(n) * static_cast<double>(q + 1) / n;
        if (bic < best) {
            best = bic;
            best_q = q;
        }
    }
    if (best_q == 0) return 0;
    const auto fit = fit_ar(d, best_q);
    if (!fit.ok) return 0;
    for (int k = best_q; k >= 1; --k) {
        if (fit.abs_t(k - 1) > kSignificance) return k;
    }
    return 0;
}

}  // namespace

int select_block_length(const Eigen::MatrixXd& losses) {
    const Eigen::Index T = losses.rows();
    if (T < 10) throw Error(ErrorKind::kInvalidArgument, "block length selection needs T >= 10");
    const int cap = static_cast<int>(std::min<Eigen::Index>(10, T / 5));
    int block = 1;
    for (Eigen::Index i = 0; i < losses.cols(); ++i) {
        for (Eigen::Index j = i + 1; j < losses.cols(); ++j) {
            const Eigen::VectorXd d = losses.col(i) - losses.col(j);
            block = std::max(block, significant_order(d, cap));
        }
    }
    return std::clamp(block, 1, static_cast<int>(std::max<Eigen::Index>(1, T / 2)));
}

Eigen::MatrixXi block_bootstrap(Eigen::Index T, const BootstrapPlan& plan) {
    if (T < 1) throw Error(ErrorKind::kInvalidArgument, "bootstrap needs T >= 1");
    if (plan.block_length < 1 || plan.block_length > T) {
        throw Error(ErrorKind::kInvalidArgument, "block length must lie in [1, T]");
    }
    if (plan.replications < 1) throw Error(ErrorKind::kInvalidArgument, "replications must be >= 1");

    Rng rng(plan.seed);
    Eigen::MatrixXi out(plan.replications, T);
    const auto n = static_cast<std::uint64_t>(T);
    for (int b = 0; b < plan.replications; ++b) {
        Eigen::Index filled = 0;
        while (filled < T) {
            const auto start = rng.index(n);
            for (int k = 0; k < plan.block_length && filled < T; ++k) {
                out(b, filled++) = static_cast<int>((start + static_cast<std::uint64_t>(k)) % n);
            }
        }
    }
    return out;
}

namespace {

double studentised(double mean, double variance) {
    if (variance > 0.0) return mean / std::sqrt(variance);
    if (mean == 0.0) return 0.0;
    // Zero bootstrap variance with a non-zero mean: one model dominates on
    // every resample.
    return mean > 0.0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
}

double centred(double draw, double mean, double variance) {
    return variance > 0.0 ? (draw - mean) / std::sqrt(variance) : 0.0;
}

}  // namespace

McsResult mcs_run(const LossMatrix& matrix, double alpha, McsStatistic statistic,
                  const BootstrapPlan& plan) {
    const Eigen::Index m = matrix.losses.cols();
    const Eigen::Index T = matrix.losses.rows();
    if (m < 1 || static_cast<Eigen::Index>(matrix.models.size()) != m) {
        throw Error(ErrorKind::kInvalidArgument, "loss matrix needs >= 1 named model");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::kInvalidArgument, "alpha must lie in (0, 1)");

    McsResult result;
    result.statistic = statistic;
    result.alpha = alpha;
    result.plan = plan;
    if (m == 1) {
        result.surviving = matrix.models;
        return result;
    }
    if (T < 1) throw Error(ErrorKind::kInvalidArgument, "loss matrix has no days");

    const Eigen::MatrixXi indices = block_bootstrap(T, plan);
    const Eigen::Index B = plan.replications;
    // Sample and bootstrap means of every pairwise differential series,
    // computed from d_ij,t itself so a constant differential stays constant.
    Eigen::MatrixXd sample(m, m);
    std::vector<Eigen::VectorXd> pair_boot(static_cast<std::size_t>(m * m), Eigen::VectorXd::Zero(B));
    auto pboot = [&](Eigen::Index i, Eigen::Index j) -> Eigen::VectorXd& {
        return pair_boot[static_cast<std::size_t>(i * m + j)];
    };
    for (Eigen::Index i = 0; i < m; ++i) {
        sample(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const Eigen::VectorXd d = matrix.losses.col(i) - matrix.losses.col(j);
            sample(i, j) = d.mean();
            sample(j, i) = -sample(i, j);
            auto& fwd = pboot(i, j);
            for (Eigen::Index b = 0; b < B; ++b) {
                double acc = 0.0;
                for (Eigen::Index t = 0; t < T; ++t) acc += d(indices(b, t));
                fwd(b) = acc / static_cast<double>(T);
            }
            pboot(j, i) = -fwd;
        }
    }

    std::vector<Eigen::Index> active(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) active[static_cast<std::size_t>(i)] = i;

    int step = 0;
    while (active.size() > 1) {
        ++step;
        const auto k = static_cast<Eigen::Index>(active.size());
        const double denom = static_cast<double>(k - 1);

        // Pairwise and relative mean differentials with bootstrap variances.
        Eigen::MatrixXd dbar(k, k), dvar(k, k);
        Eigen::VectorXd rbar(k), rvar(k);
        Eigen::MatrixXd rboot(B, k);
        for (Eigen::Index a = 0; a < k; ++a) {
            const Eigen::Index i = active[static_cast<std::size_t>(a)];
            double rel = 0.0;
            for (Eigen::Index c = 0; c < k; ++c) {
                const Eigen::Index j = active[static_cast<std::size_t>(c)];
                dbar(a, c) = sample(i, j);
                rel += dbar(a, c);
            }
            rbar(a) = rel / denom;
            for (Eigen::Index b = 0; b < B; ++b) {
                double r = 0.0;
                for (Eigen::Index c = 0; c < k; ++c) r += pboot(i, active[static_cast<std::size_t>(c)])(b);
                rboot(b, a) = r / denom;
            }
        }
        for (Eigen::Index a = 0; a < k; ++a) {
            const Eigen::Index i = active[static_cast<std::size_t>(a)];
            for (Eigen::Index c = 0; c < k; ++c) {
                const Eigen::Index j = active[static_cast<std::size_t>(c)];
                double v = 0.0;
                for (Eigen::Index b = 0; b < B; ++b) {
                    const double e = pboot(i, j)(b) - dbar(a, c);
                    v += e * e;
                }
                dvar(a, c) = v / static_cast<double>(B);
            }
            double v = 0.0;
            for (Eigen::Index b = 0; b < B; ++b) {
                const double e = rboot(b, a) - rbar(a);
                v += e * e;
            }
            rvar(a) = v / static_cast<double>(B);
        }

        // Observed statistic and elimination candidate.
        double observed = -std::numeric_limits<double>::infinity();
        Eigen::Index worst = 0;
        double worst_score = -std::numeric_limits<double>::infinity();
        for (Eigen::Index a = 0; a < k; ++a) {
            if (statistic == McsStatistic::kRange) {
                double row_sup = -std::numeric_limits<double>::infinity();
                for (Eigen::Index c = 0; c < k; ++c) {
                    if (c == a) continue;
                    const double t = studentised(dbar(a, c), dvar(a, c));
                    observed = std::max(observed, std::abs(t));
                    row_sup = std::max(row_sup, t);
                }
                if (row_sup > worst_score) {
                    worst_score = row_sup;
                    worst = a;
                }
            } else {
                const double t = studentised(rbar(a), rvar(a));
                observed = std::max(observed, t);
                if (t > worst_score) {
                    worst_score = t;
                    worst = a;
                }
            }
        }

        Eigen::Index exceed = 0;
        for (Eigen::Index b = 0; b < B; ++b) {
            double draw = -std::numeric_limits<double>::infinity();
            for (Eigen::Index a = 0; a < k; ++a) {
                const Eigen::Index i = active[static_cast<std::size_t>(a)];
                if (statistic == McsStatistic::kRange) {
                    for (Eigen::Index c = a + 1; c < k; ++c) {
                        const Eigen::Index j = active[static_cast<std::size_t>(c)];
                        draw = std::max(draw, std::abs(centred(pboot(i, j)(b), dbar(a, c), dvar(a, c))));
                    }
                } else {
                    draw = std::max(draw, centred(rboot(b, a), rbar(a), rvar(a)));
                }
            }
            if (draw >= observed) ++exceed;
        }
        const double p_value = static_cast<double>(exceed) / static_cast<double>(B);

        McsStep record;
        record.step = step;
        record.statistic = observed;
        record.p_value = p_value;
        if (p_value >= alpha) {
            result.sequence.push_back(record);
            break;
        }
        const Eigen::Index removed = active[static_cast<std::size_t>(worst)];
        record.eliminated = matrix.models[static_cast<std::size_t>(removed)];
        result.sequence.push_back(record);
        result.eliminations.push_back(record);
        active.erase(active.begin() + worst);
    }

    for (auto i : active) result.surviving.push_back(matrix.models[static_cast<std::size_t>(i)]);
    return result;
}

}  // namespace curvecast
