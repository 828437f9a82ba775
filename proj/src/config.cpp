#include "curvecast/config.hpp"

#include "curvecast/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace curvecast {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = text.find(',');
        const auto item = trim(text.substr(0, pos));
        if (!item.empty()) out.push_back(item);
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T v{};
    text = trim(text);
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::kInvalidArgument,
                    "setting '" + std::string(key) + "': bad number '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

std::vector<ModelKind> parse_model_list(std::string_view text) {
    std::vector<ModelKind> out;
    for (auto item : split_list(text)) {
        const auto kind = parse_model(item);
        if (!kind) throw Error(ErrorKind::kInvalidArgument, "unknown model '" + std::string(item) + "'");
        if (std::find(out.begin(), out.end(), *kind) != out.end()) {
            throw Error(ErrorKind::kInvalidArgument, "model listed twice: " + std::string(item));
        }
        out.push_back(*kind);
    }
    return out;
}

std::vector<double> parse_alpha_list(std::string_view text) {
    std::vector<double> out;
    for (auto item : split_list(text)) out.push_back(parse_number<double>("alpha", item));
    return out;
}

std::vector<McsStatistic> parse_statistic_list(std::string_view text) {
    std::vector<McsStatistic> out;
    for (auto item : split_list(text)) {
        const auto name = lower(item);
        if (name == "range") {
            out.push_back(McsStatistic::kRange);
        } else if (name == "max") {
            out.push_back(McsStatistic::kMax);
        } else if (name == "both") {
            out.push_back(McsStatistic::kRange);
            out.push_back(McsStatistic::kMax);
        } else {
            throw Error(ErrorKind::kInvalidArgument, "statistic must be range or max: " + std::string(item));
        }
    }
    return out;
}

void BacktestConfig::validate() const {
    if (oos_length < 0) throw Error(ErrorKind::kInvalidArgument, "oos-len must be >= 0");
    if (!(p1 > 0.0 && p1 <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "p1 must lie in (0, 1]");
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::kInvalidArgument, "alpha values must lie in (0, 1)");
    }
    if (bootstrap_reps < 1) throw Error(ErrorKind::kInvalidArgument, "bootstrap-reps must be >= 1");
    if (block_length && *block_length < 1) throw Error(ErrorKind::kInvalidArgument, "block-len must be >= 1");
    if (threads < 1) throw Error(ErrorKind::kInvalidArgument, "threads must be >= 1");
}

namespace {

void set_one(BacktestConfig& config, std::string_view raw_key, std::string_view raw_value) {
    std::string key = lower(trim(raw_key));
    std::replace(key.begin(), key.end(), '_', '-');
    const auto value = trim(raw_value);

    if (key == "oos-len") {
        config.oos_length = parse_number<Eigen::Index>(key, value);
    } else if (key == "p1") {
        config.p1 = parse_number<double>(key, value);
    } else if (key == "models") {
        config.models = parse_model_list(value);
    } else if (key == "alpha") {
        config.alphas = parse_alpha_list(value);
    } else if (key == "statistic") {
        config.statistics = parse_statistic_list(value);
    } else if (key == "bootstrap-reps") {
        config.bootstrap_reps = parse_number<int>(key, value);
    } else if (key == "block-len") {
        if (lower(value) == "auto") {
            config.block_length.reset();
        } else {
            config.block_length = parse_number<int>(key, value);
        }
    } else if (key == "seed") {
        config.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "missing") {
        const auto v = lower(value);
        if (v == "reject") {
            config.missing = MissingPolicy::kReject;
        } else if (v == "ffill" || v == "forward-fill") {
            config.missing = MissingPolicy::kForwardFill;
        } else {
            throw Error(ErrorKind::kInvalidArgument, "missing must be reject or ffill");
        }
    } else if (key == "threads") {
        config.threads = parse_number<int>(key, value);
    } else if (key == "futures") {
        config.futures = std::string(value);
    } else if (key == "factors") {
        config.factors = std::string(value);
    } else if (key == "out") {
        config.out = std::string(value);
    } else {
        throw Error(ErrorKind::kInvalidArgument, "unknown setting '" + key + "'");
    }
}

}  // namespace

void apply_setting(BacktestConfig& config, std::string_view key, std::string_view value) {
    BacktestConfig next = config;
    set_one(next, key, value);
    next.validate();
    config = std::move(next);
}

BacktestConfig read_config(std::istream& in, BacktestConfig base) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::kInvalidArgument, "config line " + std::to_string(number) + ": expected key = value");
        }
        apply_setting(base, view.substr(0, eq), view.substr(eq + 1));
    }
    return base;
}

BacktestConfig load_config(const std::filesystem::path& path, BacktestConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
    return read_config(in, std::move(base));
}

void write_config(std::ostream& out, const BacktestConfig& config) {
    auto join = [&](const auto& items, auto&& name) {
        std::string s;
        for (const auto& item : items) {
            if (!s.empty()) s += ',';
            s += name(item);
        }
        return s;
    };
    out << "oos-len = " << config.oos_length << '\n';
    out << "p1 = " << format_double(config.p1) << '\n';
    out << "models = " << join(config.models, [](ModelKind k) { return std::string(model_name(k)); }) << '\n';
    out << "alpha = " << join(config.alphas, [](double a) { return format_double(a); }) << '\n';
    out << "statistic = "
        << join(config.statistics, [](McsStatistic s) { return std::string(to_string(s)); }) << '\n';
    out << "bootstrap-reps = " << config.bootstrap_reps << '\n';
    out << "block-len = " << (config.block_length ? std::to_string(*config.block_length) : "auto") << '\n';
    out << "seed = " << config.seed << '\n';
    out << "missing = " << (config.missing == MissingPolicy::kReject ? "reject" : "ffill") << '\n';
    out << "threads = " << config.threads << '\n';
    out << "futures = " << config.futures.string() << '\n';
    out << "factors = " << config.factors.string() << '\n';
    out << "out = " << config.out.string() << '\n';
}

}  // namespace curvecast
