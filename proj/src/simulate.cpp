#include "curvecast/simulate.hpp"

#include "curvecast/csv.hpp"
#include "curvecast/error.hpp"
#include "curvecast/fpca.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <string>

namespace curvecast {

namespace {

constexpr double kOrthonormalTolerance = 1e-6;

FunctionGrid tenor_grid(const std::vector<Tenor>& tenors) {
    Eigen::VectorXd nodes(static_cast<Eigen::Index>(tenors.size()));
    for (std::size_t j = 0; j < tenors.size(); ++j) nodes(static_cast<Eigen::Index>(j)) = tenors[j].months;
    return FunctionGrid::trapezoidal(nodes);
}

void validate(const KlSpec& spec) {
    const auto n_tenors = static_cast<Eigen::Index>(spec.tenors.size());
    if (spec.mean.size() != n_tenors) {
        throw Error(ErrorKind::kInvalidArgument, "mean curve needs one value per tenor");
    }
    if (spec.eigenfunctions.cols() > 0 && spec.eigenfunctions.rows() != n_tenors) {
        throw Error(ErrorKind::kInvalidArgument, "eigenfunctions need one value per tenor");
    }
    if (spec.noise_sd < 0.0) throw Error(ErrorKind::kInvalidArgument, "noise sd must be >= 0");
    if (spec.eigenfunctions.cols() == 0) return;
    const auto gram = tenor_grid(spec.tenors).gram(spec.eigenfunctions);
    const auto identity = Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
    const double err = (gram - identity).cwiseAbs().maxCoeff();
    if (err > kOrthonormalTolerance) {
        throw Error(ErrorKind::kNonOrthonormalSpec,
                    "eigenfunction Gram matrix deviates from identity by " + std::to_string(err));
    }
}

FuturesPanel assemble(const KlSpec& spec, const Eigen::MatrixXd& scores, Rng& rng) {
    validate(spec);
    const Eigen::Index components = spec.eigenfunctions.cols();
    if (scores.cols() != components) {
        throw Error(ErrorKind::kInvalidArgument, "score columns must match eigenfunction count");
    }
    if (scores.rows() < 2) throw Error(ErrorKind::kInvalidArgument, "simulation needs >= 2 days");

    const Eigen::Index n = scores.rows();
    const Eigen::Index m = spec.mean.size();
    Eigen::MatrixXd values(n, m);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index j = 0; j < m; ++j) {
            double v = spec.mean(j);
            for (Eigen::Index k = 0; k < components; ++k) v += scores(t, k) * spec.eigenfunctions(j, k);
            if (spec.noise_sd > 0.0) v += spec.noise_sd * rng.normal();
            values(t, j) = v;
        }
    }
    return {synthetic_dates(spec.start, static_cast<int>(n)), spec.tenors, std::move(values),
            spec.marker};
}

}  // namespace

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& functions, const std::vector<Tenor>& tenors) {
    const auto grid = tenor_grid(tenors);
    Eigen::MatrixXd out = functions;
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
        for (Eigen::Index j = 0; j < k; ++j) out.col(k) -= grid.inner(out.col(k), out.col(j)) * out.col(j);
        const double norm = std::sqrt(grid.inner(out.col(k), out.col(k)));
        if (!(norm > 1e-12)) {
            throw Error(ErrorKind::kNonOrthonormalSpec, "eigenfunctions are linearly dependent");
        }
        out.col(k) /= norm;
    }
    return out;
}

Eigen::MatrixXd simulate_scores(const KlSpec& spec, int n_days, Rng& rng) {
    const auto components = static_cast<Eigen::Index>(spec.scores.size());
    if (components != spec.eigenfunctions.cols()) {
        throw Error(ErrorKind::kInvalidArgument, "one score process per eigenfunction required");
    }
    Eigen::MatrixXd out(n_days, components);
    std::vector<double> level(spec.scores.size()), trend(spec.scores.size());
    for (std::size_t k = 0; k < spec.scores.size(); ++k) {
        level[k] = spec.scores[k].level0;
        trend[k] = spec.scores[k].trend0;
    }
    for (int t = 0; t < n_days; ++t) {
        for (std::size_t k = 0; k < spec.scores.size(); ++k) {
            const auto& p = spec.scores[k];
            const double eps = p.sd > 0.0 ? p.sd * rng.normal() : 0.0;
            const double predicted = level[k] + p.xi * trend[k];
            out(t, static_cast<Eigen::Index>(k)) = predicted + eps;
            level[k] = predicted + p.delta * eps;
            trend[k] = p.xi * trend[k] + p.gamma * eps;
        }
    }
    return out;
}

FuturesPanel simulate_panel(const KlSpec& spec, int n_days, std::uint64_t seed) {
    if (n_days < 2) throw Error(ErrorKind::kInvalidArgument, "simulation needs >= 2 days");
    validate(spec);
    Rng rng(seed);
    const Eigen::MatrixXd scores = simulate_scores(spec, n_days, rng);
    return assemble(spec, scores, rng);
}

FuturesPanel simulate_panel(const KlSpec& spec, const Eigen::MatrixXd& scores, std::uint64_t seed) {
    Rng rng(seed);
    return assemble(spec, scores, rng);
}

std::vector<Date> synthetic_dates(const Date& start, int n_days) {
    std::vector<Date> out;
    out.reserve(static_cast<std::size_t>(n_days));
    Date d = start;
    while (static_cast<int>(out.size()) < n_days) {
        const std::chrono::weekday wd{std::chrono::sys_days{d}};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(d);
        d = add_days(d, 1);
    }
    return out;
}

FactorPanel simulate_factors(const std::vector<Date>& dates, std::uint64_t seed) {
    // SP500, VIX, USD, EcPol: starting levels and daily log-change volatilities.
    constexpr double kStart[4] = {1500.0, 20.0, 78.0, 110.0};
    constexpr double kVol[4] = {0.01, 0.06, 0.004, 0.15};
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(dates.size());
    Eigen::MatrixXd levels(n, 4);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            levels(t, j) = t == 0 ? kStart[j] : levels(t - 1, j) * std::exp(kVol[j] * rng.normal());
        }
    }
    return {dates, std::move(levels)};
}

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::kInvalidArgument, "spec key '" + key + "': bad number '" + text + "'");
    }
    return v;
}

Eigen::VectorXd to_vector(const std::string& key, const std::string& text) {
    const auto fields = split_csv_line(text);
    Eigen::VectorXd v(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_double(key, fields[i]);
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw Error(ErrorKind::kInvalidArgument, "spec key '" + key + "': expected true/false");
}

}  // namespace

SyntheticSpec parse_synthetic_spec(std::istream& in) {
    SyntheticSpec out;
    std::map<int, Eigen::VectorXd> functions;
    std::map<int, ScoreProcess> processes;
    bool make_orthonormal = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::kInvalidArgument,
                        "spec line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));

        if (key == "tenors") {
            out.kl.tenors.clear();
            for (const auto& label : split_csv_line(value)) out.kl.tenors.push_back(tenor_from_label(label));
        } else if (key == "mean") {
            out.kl.mean = to_vector(key, value);
        } else if (key.rfind("eigenfunction.", 0) == 0) {
            functions[static_cast<int>(to_double(key, key.substr(14)))] = to_vector(key, value);
        } else if (key.rfind("score.", 0) == 0) {
            const auto dot = key.find('.', 6);
            if (dot == std::string::npos) throw Error(ErrorKind::kInvalidArgument, "bad key " + key);
            auto& p = processes[static_cast<int>(to_double(key, key.substr(6, dot - 6)))];
            const std::string field = key.substr(dot + 1);
            const double v = to_double(key, value);
            if (field == "xi") p.xi = v;
            else if (field == "delta") p.delta = v;
            else if (field == "gamma") p.gamma = v;
            else if (field == "level0") p.level0 = v;
            else if (field == "trend0") p.trend0 = v;
            else if (field == "sd") p.sd = v;
            else throw Error(ErrorKind::kInvalidArgument, "unknown score field " + key);
        } else if (key == "orthonormalize") {
            make_orthonormal = to_bool(key, value);
        } else if (key == "noise_sd") {
            out.kl.noise_sd = to_double(key, value);
        } else if (key == "n_days") {
            out.n_days = static_cast<int>(to_double(key, value));
        } else if (key == "seed") {
            std::uint64_t seed = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
            if (ec != std::errc{} || ptr != value.data() + value.size()) {
                throw Error(ErrorKind::kInvalidArgument, "seed must be a non-negative integer");
            }
            out.seed = seed;
        } else if (key == "start_date") {
            auto d = parse_date(value);
            if (!d) throw Error(ErrorKind::kInvalidArgument, "bad start_date " + value);
            out.kl.start = *d;
        } else if (key == "scale") {
            if (value == "log_price") out.kl.marker = ScaleMarker::kLogPrice;
            else if (value == "price") out.kl.marker = ScaleMarker::kPrice;
            else if (value == "log_return") out.kl.marker = ScaleMarker::kLogReturn;
            else throw Error(ErrorKind::kInvalidArgument, "scale must be log_price|price|log_return");
        } else if (key == "factors") {
            out.with_factors = to_bool(key, value);
        } else {
            throw Error(ErrorKind::kInvalidArgument, "unknown spec key '" + key + "'");
        }
    }

    const auto n_tenors = static_cast<Eigen::Index>(out.kl.tenors.size());
    const auto components = static_cast<Eigen::Index>(functions.size());
    out.kl.eigenfunctions.resize(n_tenors, components);
    int expected = 1;
    for (const auto& [index, values] : functions) {
        if (index != expected) throw Error(ErrorKind::kInvalidArgument, "eigenfunctions must be numbered 1..K");
        if (values.size() != n_tenors) {
            throw Error(ErrorKind::kInvalidArgument, "eigenfunction length must match tenors");
        }
        out.kl.eigenfunctions.col(expected - 1) = values;
        ++expected;
    }
    if (static_cast<Eigen::Index>(processes.size()) != components) {
        throw Error(ErrorKind::kInvalidArgument, "one score process per eigenfunction required");
    }
    for (const auto& [index, p] : processes) {
        if (index < 1 || index > components) {
            throw Error(ErrorKind::kInvalidArgument, "score processes must be numbered 1..K");
        }
        out.kl.scores.push_back(p);
    }
    if (make_orthonormal && components > 0) {
        out.kl.eigenfunctions = orthonormalize(out.kl.eigenfunctions, out.kl.tenors);
    }
    validate(out.kl);
    return out;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
    return parse_synthetic_spec(in);
}

}  // namespace curvecast
