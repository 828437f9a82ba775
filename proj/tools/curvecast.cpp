// curvecast: command-line front end for the futures-curve forecasting toolkit.

#include "curvecast/backtest.hpp"
#include "curvecast/config.hpp"
#include "curvecast/csv.hpp"
#include "curvecast/descriptive.hpp"
#include "curvecast/error.hpp"
#include "curvecast/fpca.hpp"
#include "curvecast/mcs.hpp"
#include "curvecast/reports.hpp"
#include "curvecast/simulate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace curvecast;

namespace {

// Flag values as typed; applied on top of an optional config file.
struct FlagSet {
    std::string config_path;
    std::map<std::string, std::string> values;

    void add(CLI::App* app, const std::string& key, const std::string& help) {
        app->add_option_function<std::string>(
            "--" + key, [this, key](const std::string& v) { values[key] = v; }, help);
    }

    [[nodiscard]] BacktestConfig resolve() const {
        BacktestConfig config;
        if (!config_path.empty()) config = load_config(config_path);
        for (const auto& [key, value] : values) apply_setting(config, key, value);
        config.validate();
        return config;
    }
};

void add_data_flags(CLI::App* app, FlagSet& flags) {
    app->add_option("--config", flags.config_path, "key = value file; flags override it");
    flags.add(app, "futures", "futures price CSV (date + 11 tenors)");
    flags.add(app, "factors", "factor CSV (date,SP500,VIX,USD,EcPol)");
    flags.add(app, "missing", "empty cells: reject | ffill");
    flags.add(app, "out", "output directory");
}

void add_model_flags(CLI::App* app, FlagSet& flags) {
    flags.add(app, "oos-len", "out-of-sample length (250, 500, 750 or any N)");
    flags.add(app, "p1", "FPCA explained-variance threshold");
    flags.add(app, "models", "comma list of PC, FTS, Fund, RW");
    flags.add(app, "threads", "worker threads for per-window refits");
}

void add_mcs_flags(CLI::App* app, FlagSet& flags) {
    flags.add(app, "alpha", "comma list of MCS levels");
    flags.add(app, "statistic", "range | max | both");
    flags.add(app, "bootstrap-reps", "bootstrap replications");
    flags.add(app, "block-len", "auto | N");
    flags.add(app, "seed", "bootstrap seed");
}

MarketData load_data(const BacktestConfig& config) {
    if (config.futures.empty()) throw Error(ErrorKind::kInvalidArgument, "--futures is required");
    PanelSchema schema;
    schema.missing = config.missing;
    FuturesPanel futures = load_panel(config.futures, schema);
    if (config.factors.empty()) return {std::move(futures), std::nullopt};
    auto [f, x] = align_panels(futures, load_factors(config.factors, config.missing));
    if (f.rows() != futures.rows()) {
        std::cerr << "note: " << futures.rows() - f.rows() << " futures dates without factors dropped\n";
    }
    return {std::move(f), std::move(x)};
}

void print_stats(const std::vector<ColumnStats>& stats) {
    std::cout << std::left << std::setw(8) << "series" << std::right;
    for (const char* h : {"mean", "std", "median", "min", "max", "skew", "kurt"}) std::cout << std::setw(12) << h;
    std::cout << '\n' << std::setprecision(5);
    for (const auto& s : stats) {
        std::cout << std::left << std::setw(8) << s.name << std::right;
        for (double v : {s.mean, s.std_dev, s.median, s.min, s.max, s.skewness, s.excess_kurtosis}) {
            std::cout << std::setw(12) << v;
        }
        std::cout << '\n';
    }
}

void print_membership(const std::vector<McsEntry>& entries, const std::vector<std::string>& models) {
    write_mcs_membership(std::cout, entries, models);
}

int run_ingest(const FlagSet& flags) {
    const auto config = flags.resolve();
    const auto data = load_data(config);
    std::cout << data.futures.rows() << " dates, " << format_date(data.futures.dates().front()) << " .. "
              << format_date(data.futures.dates().back()) << '\n';
    std::cout << "\nprices\n";
    print_stats(descriptive_stats(data.futures));
    std::cout << "\nlog returns\n";
    print_stats(descriptive_stats(to_log_returns(data.futures)));
    if (data.factors) {
        std::cout << "\nfactor levels\n";
        print_stats(descriptive_stats(*data.factors));
    }
    return 0;
}

int run_insample(const FlagSet& flags) {
    const auto config = flags.resolve();
    const auto report = run_insample_eval(config, load_data(config));
    write_loss_report(std::cout, report);
    if (flags.values.count("out") || !flags.config_path.empty()) {
        fs::create_directories(config.out);
        std::ofstream out(config.out / "insample_losses.csv");
        write_loss_report(out, report);
        if (!out) throw Error(ErrorKind::kIoFailure, "cannot write insample_losses.csv");
    }
    return 0;
}

int run_backtest(const FlagSet& flags) {
    const auto config = flags.resolve();
    const auto run = run_expanding_backtest(config, load_data(config));
    const auto files = emit_reports(run, config.out);
    if (config.models.empty()) {
        std::cout << "empty model set: wrote the manifest only\n";
        return 0;
    }
    write_loss_report(std::cout, run.losses);
    std::cout << '\n';
    print_membership(run.mcs, run.loss_matrix.models);
    std::cerr << "wrote " << files.size() << " files to " << config.out.string() << " in " << std::fixed
              << std::setprecision(1) << run.elapsed_seconds << " s\n";
    return 0;
}

int run_mcs(const FlagSet& flags, const std::string& losses_path) {
    const auto config = flags.resolve();
    const auto matrix = load_loss_matrix(losses_path);
    int block = 1;
    if (config.block_length) {
        block = *config.block_length;
    } else if (matrix.losses.rows() >= 10 && matrix.losses.cols() >= 2) {
        block = select_block_length(matrix.losses);
    }
    const BootstrapPlan plan{block, config.bootstrap_reps, config.seed};
    std::vector<McsEntry> entries;
    for (auto statistic : config.statistics) {
        for (double alpha : config.alphas) entries.push_back({"Overall", mcs_run(matrix, alpha, statistic, plan)});
    }
    print_membership(entries, matrix.models);
    std::cout << '\n';
    write_mcs_eliminations(std::cout, entries);
    if (flags.values.count("out")) {
        fs::create_directories(config.out);
        std::ofstream m(config.out / "mcs_membership.csv");
        write_mcs_membership(m, entries, matrix.models);
        std::ofstream e(config.out / "mcs_eliminations.csv");
        write_mcs_eliminations(e, entries);
        if (!m || !e) throw Error(ErrorKind::kIoFailure, "cannot write MCS reports");
    }
    return 0;
}

int run_simulate(const std::string& spec_path, const fs::path& out_dir) {
    const auto spec = load_synthetic_spec(spec_path);
    const auto panel = simulate_panel(spec.kl, spec.n_days, spec.seed);
    fs::create_directories(out_dir);
    // Saved as prices so that the file reads back like market data.
    save_panel(out_dir / "futures.csv", panel.marker() == ScaleMarker::kLogPrice ? to_prices(panel) : panel);
    std::cout << "wrote " << (out_dir / "futures.csv").string() << " (" << panel.rows() << " rows)\n";
    if (spec.with_factors) {
        save_factors(out_dir / "factors.csv", simulate_factors(panel.dates(), spec.seed + 1));
        std::cout << "wrote " << (out_dir / "factors.csv").string() << '\n';
    }
    return 0;
}

int run_decompose(const FlagSet& flags) {
    const auto config = flags.resolve();
    const auto data = load_data(config);
    const auto log_prices = to_log_prices(data.futures);
    const auto model = fit_fpca(log_prices, config.p1);
    fs::create_directories(config.out);
    std::vector<std::string> tenors;
    for (const auto& t : log_prices.tenors()) tenors.push_back(t.label);
    for (const auto& name : write_decomposition(config.out, model, log_prices.dates(), tenors)) {
        std::cout << "wrote " << (config.out / name).string() << '\n';
    }
    std::cout << "K = " << model.K << ", explained share " << model.explained_variance_ratio << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Futures-curve forecasting: FPCA + damped-trend ETS, benchmarks, losses and model confidence sets"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    FlagSet ingest_flags, insample_flags, backtest_flags, mcs_flags, decompose_flags;

    auto* ingest = app.add_subcommand("ingest", "validate input files and print descriptive statistics");
    add_data_flags(ingest, ingest_flags);

    auto* insample = app.add_subcommand("insample", "fit once on the training window; in-sample losses");
    add_data_flags(insample, insample_flags);
    add_model_flags(insample, insample_flags);

    auto* backtest = app.add_subcommand("backtest", "expanding-window backtest with losses, MCS and DM tests");
    add_data_flags(backtest, backtest_flags);
    add_model_flags(backtest, backtest_flags);
    add_mcs_flags(backtest, backtest_flags);

    std::string losses_path;
    auto* mcs = app.add_subcommand("mcs", "model confidence set on an existing loss matrix");
    mcs->add_option("--losses", losses_path, "loss matrix CSV (date,<models>)")->required();
    mcs->add_option("--config", mcs_flags.config_path, "key = value file; flags override it");
    mcs_flags.add(mcs, "out", "output directory");
    add_mcs_flags(mcs, mcs_flags);

    std::string spec_path;
    std::string sim_out = "synthetic";
    auto* simulate = app.add_subcommand("simulate", "write a synthetic panel from a generator spec");
    simulate->add_option("--spec", spec_path, "generator spec file")->required();
    simulate->add_option("--out", sim_out, "output directory");

    auto* decompose = app.add_subcommand("decompose", "export the FPCA of the log-price panel");
    add_data_flags(decompose, decompose_flags);
    decompose_flags.add(decompose, "p1", "FPCA explained-variance threshold");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return run_ingest(ingest_flags);
        if (*insample) return run_insample(insample_flags);
        if (*backtest) return run_backtest(backtest_flags);
        if (*mcs) return run_mcs(mcs_flags, losses_path);
        if (*simulate) return run_simulate(spec_path, sim_out);
        if (*decompose) return run_decompose(decompose_flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
