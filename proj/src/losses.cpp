#include "curvecast/losses.hpp"

#include "curvecast/csv.hpp"
#include "curvecast/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace curvecast {

namespace {

TenorLosses finish(Eigen::VectorXd per_tenor) {
    TenorLosses out;
    out.overall = per_tenor.size() > 0 ? per_tenor.mean() : 0.0;
    out.per_tenor = std::move(per_tenor);
    return out;
}

void require_rows(const Eigen::MatrixXd& m) {
    if (m.rows() < 1) throw Error(ErrorKind::kInvalidArgument, "loss needs >= 1 day");
}

}  // namespace

TenorLosses mae(const Eigen::MatrixXd& errors) {
    require_rows(errors);
    return finish(errors.cwiseAbs().colwise().mean().transpose());
}

TenorLosses me(const Eigen::MatrixXd& errors) {
    require_rows(errors);
    return finish(errors.colwise().mean().transpose());
}

TenorLosses mase(const Eigen::MatrixXd& errors, const Eigen::MatrixXd& in_sample_series) {
    require_rows(errors);
    if (in_sample_series.rows() < 2) {
        throw Error(ErrorKind::kInvalidArgument, "scaled error needs >= 2 in-sample points");
    }
    if (in_sample_series.cols() != errors.cols()) {
        throw Error(ErrorKind::kInvalidArgument, "in-sample series tenor count mismatch");
    }
    const Eigen::Index n = in_sample_series.rows();
    const Eigen::VectorXd scale =
        (in_sample_series.bottomRows(n - 1) - in_sample_series.topRows(n - 1))
            .cwiseAbs()
            .colwise()
            .mean()
            .transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
        if (!(scale(j) > 0.0)) {
            throw Error(ErrorKind::kZeroDenominator,
                        "in-sample series of tenor " + std::to_string(j) + " is constant");
        }
    }
    Eigen::VectorXd per(errors.cols());
    for (Eigen::Index j = 0; j < errors.cols(); ++j) {
        per(j) = (errors.col(j).array() / scale(j)).abs().mean();
    }
    return finish(std::move(per));
}

TenorLosses mme(const Eigen::MatrixXd& errors, MmeMode mode) {
    require_rows(errors);
    Eigen::VectorXd per(errors.cols());
    for (Eigen::Index j = 0; j < errors.cols(); ++j) {
        double linear = 0.0, root = 0.0;
        for (Eigen::Index t = 0; t < errors.rows(); ++t) {
            const double e = errors(t, j);
            if (e == 0.0) continue;
            // e > 0: realized above forecast, an under-prediction.
            const bool under = e > 0.0;
            const bool penalised = (mode == MmeMode::kUnder) == under;
            if (penalised) {
                root += std::sqrt(std::abs(e));
            } else {
                linear += std::abs(e);
            }
        }
        per(j) = (linear + root) / static_cast<double>(errors.rows());
    }
    return finish(std::move(per));
}

TenorLosses mcpdc(const Eigen::MatrixXd& forecasts, const Eigen::MatrixXd& realized,
                  TiePolicy ties) {
    require_rows(forecasts);
    if (forecasts.rows() != realized.rows() || forecasts.cols() != realized.cols()) {
        throw Error(ErrorKind::kInvalidArgument, "forecast/realized shape mismatch");
    }
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    Eigen::VectorXd per(forecasts.cols());
    for (Eigen::Index j = 0; j < forecasts.cols(); ++j) {
        Eigen::Index hits = 0;
        for (Eigen::Index t = 0; t < forecasts.rows(); ++t) {
            const int a = sign(forecasts(t, j));
            const int b = sign(realized(t, j));
            if (a == 0 || b == 0) {
                if (ties == TiePolicy::kBothZeroCorrect && a == 0 && b == 0) ++hits;
            } else if (a == b) {
                ++hits;
            }
        }
        per(j) = static_cast<double>(hits) / static_cast<double>(forecasts.rows());
    }
    return finish(std::move(per));
}

std::string_view measure_label(Measure measure, bool out_of_sample) {
    switch (measure) {
        case Measure::kMae: return out_of_sample ? "MAFE" : "MAE";
        case Measure::kMe: return out_of_sample ? "MFE" : "ME";
        case Measure::kMase: return out_of_sample ? "MASFE" : "MASE";
        case Measure::kMmeUnder: return out_of_sample ? "MMFE(U)" : "MME(U)";
        case Measure::kMmeOver: return out_of_sample ? "MMFE(O)" : "MME(O)";
        case Measure::kMcpdc: return out_of_sample ? "MCFDC" : "MCPDC";
    }
    return "?";
}

const TenorLosses* LossReport::find(Measure measure, ModelKind model) const {
    auto m = values.find(measure);
    if (m == values.end()) return nullptr;
    auto v = m->second.find(model);
    return v == m->second.end() ? nullptr : &v->second;
}

LossReport build_loss_report(const std::vector<ModelPredictions>& predictions,
                             std::vector<std::string> tenors,
                             const std::optional<Eigen::MatrixXd>& in_sample_series,
                             const std::vector<Measure>& measures, bool out_of_sample,
                             TiePolicy ties) {
    LossReport report;
    report.tenors = std::move(tenors);
    report.out_of_sample = out_of_sample;
    for (const auto& p : predictions) {
        if (p.forecasts.cols() != static_cast<Eigen::Index>(report.tenors.size())) {
            throw Error(ErrorKind::kInvalidArgument, "prediction tenor count mismatch");
        }
        report.models.push_back(p.model);
        const Eigen::MatrixXd errors = p.realized - p.forecasts;
        for (Measure m : measures) {
            switch (m) {
                case Measure::kMae: report.values[m][p.model] = mae(errors); break;
                case Measure::kMe: report.values[m][p.model] = me(errors); break;
                case Measure::kMase:
                    if (in_sample_series) report.values[m][p.model] = mase(errors, *in_sample_series);
                    break;
                case Measure::kMmeUnder: report.values[m][p.model] = mme(errors, MmeMode::kUnder); break;
                case Measure::kMmeOver: report.values[m][p.model] = mme(errors, MmeMode::kOver); break;
                case Measure::kMcpdc: report.values[m][p.model] = mcpdc(p.forecasts, p.realized, ties); break;
            }
        }
    }
    return report;
}

void write_loss_report(std::ostream& out, const LossReport& report) {
    out << "measure,expiry";
    for (auto m : report.models) out << ',' << model_name(m);
    out << '\n';
    for (Measure measure : kAllMeasures) {
        auto it = report.values.find(measure);
        if (it == report.values.end()) continue;
        const auto label = measure_label(measure, report.out_of_sample);
        auto cell = [&](ModelKind model, std::optional<Eigen::Index> tenor) -> std::string {
            auto v = it->second.find(model);
            if (v == it->second.end()) return "";
            return format_double(tenor ? v->second.per_tenor(*tenor) : v->second.overall);
        };
        out << label << ",Overall";
        for (auto m : report.models) out << ',' << cell(m, std::nullopt);
        out << '\n';
        for (std::size_t j = 0; j < report.tenors.size(); ++j) {
            out << label << ',' << report.tenors[j];
            for (auto m : report.models) out << ',' << cell(m, static_cast<Eigen::Index>(j));
            out << '\n';
        }
    }
}

LossMatrix build_loss_matrix(const std::vector<ForecastRecord>& records,
                             std::optional<Eigen::Index> tenor) {
    std::vector<ModelKind> order;
    std::map<ModelKind, std::vector<const ForecastRecord*>> by_model;
    for (const auto& r : records) {
        if (!by_model.count(r.model)) order.push_back(r.model);
        by_model[r.model].push_back(&r);
    }
    LossMatrix out;
    if (order.empty()) return out;

    for (auto& [model, list] : by_model) {
        std::stable_sort(list.begin(), list.end(),
                         [](const ForecastRecord* a, const ForecastRecord* b) { return a->target < b->target; });
    }
    const auto& reference = by_model[order.front()];
    for (const auto* r : reference) out.dates.push_back(r->target);
    for (std::size_t i = 1; i < out.dates.size(); ++i) {
        if (out.dates[i] == out.dates[i - 1]) {
            throw Error(ErrorKind::kCoverageMismatch, "duplicate target " + format_date(out.dates[i]));
        }
    }

    const auto T = static_cast<Eigen::Index>(out.dates.size());
    const Eigen::Index tenors = reference.front()->forecast.size();
    out.losses.resize(T, static_cast<Eigen::Index>(order.size()));
    for (std::size_t c = 0; c < order.size(); ++c) {
        const auto& list = by_model[order[c]];
        out.models.emplace_back(model_name(order[c]));
        if (static_cast<Eigen::Index>(list.size()) != T) {
            throw Error(ErrorKind::kCoverageMismatch,
                        std::string(model_name(order[c])) + " covers a different number of days");
        }
        for (Eigen::Index t = 0; t < T; ++t) {
            const auto& r = *list[static_cast<std::size_t>(t)];
            if (r.target != out.dates[static_cast<std::size_t>(t)] || r.forecast.size() != tenors ||
                r.realized.size() != tenors) {
                throw Error(ErrorKind::kCoverageMismatch,
                            std::string(model_name(order[c])) + " differs at " + format_date(r.target));
            }
            if (tenor) {
                if (*tenor < 0 || *tenor >= tenors) throw Error(ErrorKind::kInvalidArgument, "tenor index");
                out.losses(t, static_cast<Eigen::Index>(c)) = std::abs(r.realized(*tenor) - r.forecast(*tenor));
            } else {
                out.losses(t, static_cast<Eigen::Index>(c)) = (r.realized - r.forecast).cwiseAbs().mean();
            }
        }
    }
    return out;
}

void write_loss_matrix(std::ostream& out, const LossMatrix& matrix) {
    out << "date";
    for (const auto& m : matrix.models) out << ',' << m;
    out << '\n';
    for (Eigen::Index t = 0; t < matrix.losses.rows(); ++t) {
        out << format_date(matrix.dates[static_cast<std::size_t>(t)]);
        for (Eigen::Index c = 0; c < matrix.losses.cols(); ++c) out << ',' << format_double(matrix.losses(t, c));
        out << '\n';
    }
}

LossMatrix read_loss_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::kSchemaMismatch, "empty loss matrix");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date") {
        throw Error(ErrorKind::kSchemaMismatch, "loss matrix header must be date,<models>");
    }
    LossMatrix out;
    out.models.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        auto date = fields.empty() ? std::nullopt : parse_date(fields[0]);
        if (fields.size() != header.size() || !date) {
            throw Error(ErrorKind::kUnparseableRow, "loss matrix line " + std::to_string(line_no));
        }
        std::vector<double> row;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            double v = 0.0;
            const char* end = fields[j].data() + fields[j].size();
            auto [ptr, ec] = std::from_chars(fields[j].data(), end, v);
            if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
                throw Error(ErrorKind::kUnparseableRow, "loss matrix line " + std::to_string(line_no));
            }
            row.push_back(v);
        }
        if (!out.dates.empty() && !(out.dates.back() < *date)) {
            throw Error(ErrorKind::kDuplicateDate, "loss matrix dates must increase");
        }
        out.dates.push_back(*date);
        rows.push_back(std::move(row));
    }
    out.losses.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(out.models.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out.losses(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return out;
}

LossMatrix load_loss_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
    return read_loss_matrix(in);
}

}  // namespace curvecast
