#include "curvecast/reports.hpp"

#include "curvecast/csv.hpp"
#include "curvecast/error.hpp"

#include <fstream>
#include <ostream>
#include <system_error>

namespace curvecast {

namespace {

constexpr const char* kManifest = "manifest.txt";
constexpr const char* kForecasts = "forecasts.csv";
constexpr const char* kOosLosses = "losses_out_of_sample.csv";
constexpr const char* kInsampleLosses = "insample_losses.csv";
constexpr const char* kLossMatrix = "loss_matrix.csv";
constexpr const char* kMembership = "mcs_membership.csv";
constexpr const char* kEliminations = "mcs_eliminations.csv";
constexpr const char* kDmTests = "dm_tests.csv";
constexpr const char* kFpcaMean = "fpca_mean.csv";
constexpr const char* kFpcaFunctions = "fpca_eigenfunctions.csv";
constexpr const char* kFpcaValues = "fpca_eigenvalues.csv";
constexpr const char* kFpcaScores = "fpca_scores.csv";

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw Error(ErrorKind::kIoFailure, "write failed for " + path.string());
}

}  // namespace

std::vector<std::string> report_files() {
    return {kManifest,    kForecasts,     kOosLosses, kInsampleLosses, kLossMatrix,   kMembership,
            kEliminations, kDmTests,      kFpcaMean,  kFpcaFunctions,  kFpcaValues,   kFpcaScores};
}

std::vector<std::string> write_decomposition(const std::filesystem::path& dir, const FpcaModel& model,
                                             const std::vector<Date>& dates,
                                             const std::vector<std::string>& tenors) {
    if (static_cast<Eigen::Index>(tenors.size()) != model.mean.size() ||
        static_cast<Eigen::Index>(dates.size()) != model.scores.rows()) {
        throw Error(ErrorKind::kInvalidArgument, "decomposition does not match its labels");
    }
    write_file(dir / kFpcaMean, [&](std::ostream& out) {
        out << "expiry,mean\n";
        for (std::size_t j = 0; j < tenors.size(); ++j) {
            out << tenors[j] << ',' << format_double(model.mean(static_cast<Eigen::Index>(j))) << '\n';
        }
    });
    write_file(dir / kFpcaFunctions, [&](std::ostream& out) {
        out << "expiry";
        for (Eigen::Index k = 0; k < model.K; ++k) out << ",phi" << k + 1;
        out << '\n';
        for (std::size_t j = 0; j < tenors.size(); ++j) {
            out << tenors[j];
            for (Eigen::Index k = 0; k < model.K; ++k) {
                out << ',' << format_double(model.eigenfunctions(static_cast<Eigen::Index>(j), k));
            }
            out << '\n';
        }
    });
    write_file(dir / kFpcaValues, [&](std::ostream& out) {
        out << "component,eigenvalue,cumulative_share,retained\n";
        const double total = model.eigenvalues.sum();
        double running = 0.0;
        for (Eigen::Index k = 0; k < model.eigenvalues.size(); ++k) {
            running += model.eigenvalues(k);
            out << k + 1 << ',' << format_double(model.eigenvalues(k)) << ','
                << format_double(total > 0.0 ? running / total : 0.0) << ',' << (k < model.K ? 1 : 0) << '\n';
        }
    });
    write_file(dir / kFpcaScores, [&](std::ostream& out) {
        out << "date";
        for (Eigen::Index k = 0; k < model.K; ++k) out << ",score" << k + 1;
        out << '\n';
        for (std::size_t t = 0; t < dates.size(); ++t) {
            out << format_date(dates[t]);
            for (Eigen::Index k = 0; k < model.K; ++k) {
                out << ',' << format_double(model.scores(static_cast<Eigen::Index>(t), k));
            }
            out << '\n';
        }
    });
    return {kFpcaMean, kFpcaFunctions, kFpcaValues, kFpcaScores};
}

void write_forecasts(std::ostream& out, const BacktestRun& run, const std::vector<std::string>& tenors) {
    out << "model,target_date,expiry,forecast,realized\n";
    for (const auto& r : run.records) {
        const auto date = format_date(r.target);
        for (Eigen::Index j = 0; j < r.forecast.size(); ++j) {
            out << model_name(r.model) << ',' << date << ',' << tenors[static_cast<std::size_t>(j)] << ','
                << format_double(r.forecast(j)) << ',' << format_double(r.realized(j)) << '\n';
        }
    }
}

void write_mcs_membership(std::ostream& out, const std::vector<McsEntry>& entries,
                          const std::vector<std::string>& models) {
    out << "statistic,alpha,expiry";
    for (const auto& m : models) out << ',' << m;
    out << '\n';
    for (const auto& e : entries) {
        out << to_string(e.result.statistic) << ',' << format_double(e.result.alpha) << ',' << e.scope;
        for (const auto& m : models) out << ',' << (e.result.contains(m) ? 1 : 0);
        out << '\n';
    }
}

void write_mcs_eliminations(std::ostream& out, const std::vector<McsEntry>& entries) {
    out << "statistic,alpha,expiry,step,eliminated,test_statistic,p_value,block_length,replications,seed\n";
    for (const auto& e : entries) {
        for (const auto& s : e.result.sequence) {
            out << to_string(e.result.statistic) << ',' << format_double(e.result.alpha) << ',' << e.scope << ','
                << s.step << ',' << s.eliminated << ',' << format_double(s.statistic) << ','
                << format_double(s.p_value) << ',' << e.result.plan.block_length << ','
                << e.result.plan.replications << ',' << e.result.plan.seed << '\n';
        }
    }
}

void write_dm_tests(std::ostream& out, const std::vector<DmEntry>& tests) {
    out << "model_a,model_b,dm_statistic,dm_p_value,mdm_statistic,mdm_p_value,bandwidth\n";
    for (const auto& t : tests) {
        out << t.model_a << ',' << t.model_b << ',' << format_double(t.dm.statistic) << ','
            << format_double(t.dm.p_value) << ',' << format_double(t.modified.statistic) << ','
            << format_double(t.modified.p_value) << ',' << t.dm.bandwidth << '\n';
    }
}

std::vector<std::filesystem::path> emit_reports(const BacktestRun& run, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::kIoFailure, "cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::string> written;
    const bool empty = run.config.models.empty();
    if (!empty) {
        write_file(dir / kForecasts, [&](std::ostream& out) { write_forecasts(out, run, run.tenors); });
        write_file(dir / kOosLosses, [&](std::ostream& out) { write_loss_report(out, run.losses); });
        write_file(dir / kInsampleLosses, [&](std::ostream& out) { write_loss_report(out, run.insample); });
        write_file(dir / kLossMatrix, [&](std::ostream& out) { write_loss_matrix(out, run.loss_matrix); });
        write_file(dir / kMembership,
                   [&](std::ostream& out) { write_mcs_membership(out, run.mcs, run.loss_matrix.models); });
        write_file(dir / kEliminations, [&](std::ostream& out) { write_mcs_eliminations(out, run.mcs); });
        write_file(dir / kDmTests, [&](std::ostream& out) { write_dm_tests(out, run.dm); });
        written = {kForecasts, kOosLosses, kInsampleLosses, kLossMatrix, kMembership, kEliminations, kDmTests};
        if (run.decomposition) {
            for (auto& name : write_decomposition(dir, *run.decomposition, run.sample_dates, run.tenors)) {
                written.push_back(std::move(name));
            }
        }
    }

    write_file(dir / kManifest, [&](std::ostream& out) {
        out << "# curvecast " << kVersion << " run manifest\n";
        out << "# Feed this file back with --config to reproduce the run.\n";
        if (empty) out << "# note: empty model set; no forecasts, losses or confidence sets were produced\n";
        if (!run.sample_dates.empty()) {
            out << "# sample: " << run.sample_dates.size() << " dates " << format_date(run.sample_dates.front())
                << " .. " << format_date(run.sample_dates.back()) << '\n';
        }
        write_config(out, run.config);
        for (const auto& name : written) out << "# file: " << name << '\n';
    });

    std::vector<std::filesystem::path> paths{dir / kManifest};
    for (const auto& name : written) paths.push_back(dir / name);
    return paths;
}

}  // namespace curvecast
