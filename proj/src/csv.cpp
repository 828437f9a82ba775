#include "curvecast/csv.hpp"

#include "curvecast/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace curvecast {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw Error(ErrorKind::kIoFailure, "cannot format value");
    return std::string(buf, ptr);
}

std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view field =
            line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                               : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
            field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
            field.remove_suffix(1);
        fields.emplace_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

namespace {

struct RawTable {
    std::vector<Date> dates;
    Eigen::MatrixXd values;  // NaN marks an empty cell
};

double parse_cell(const std::string& field, std::size_t line_no) {
    if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw Error(ErrorKind::kUnparseableRow,
                    "line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    return v;
}

RawTable read_table(std::istream& in, const std::vector<std::string>& columns,
                    MissingPolicy missing) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::kSchemaMismatch, "empty input");
    auto header = split_csv_line(line);
    std::vector<std::string> expected{"date"};
    expected.insert(expected.end(), columns.begin(), columns.end());
    if (header != expected) {
        std::string want = std::accumulate(
            std::next(expected.begin()), expected.end(), expected.front(),
            [](std::string acc, const std::string& s) { return std::move(acc) + "," + s; });
        throw Error(ErrorKind::kSchemaMismatch, "header must be '" + want + "'");
    }

    std::vector<std::pair<Date, std::vector<double>>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != expected.size()) {
            throw Error(ErrorKind::kUnparseableRow,
                        "line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        auto date = parse_date(fields[0]);
        if (!date) {
            throw Error(ErrorKind::kUnparseableRow,
                        "line " + std::to_string(line_no) + ": bad date '" + fields[0] + "'");
        }
        std::vector<double> values;
        values.reserve(columns.size());
        for (std::size_t j = 1; j < fields.size(); ++j) values.push_back(parse_cell(fields[j], line_no));
        rows.emplace_back(*date, std::move(values));
    }
    if (rows.empty()) throw Error(ErrorKind::kSchemaMismatch, "no data rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw Error(ErrorKind::kDuplicateDate, format_date(rows[i].first));
        }
    }

    RawTable table;
    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table.dates.push_back(rows[i].first);
        for (std::size_t j = 0; j < columns.size(); ++j) {
            double v = rows[i].second[j];
            if (std::isnan(v)) {
                if (missing == MissingPolicy::kReject || i == 0) {
                    throw Error(ErrorKind::kMissingCell,
                                format_date(rows[i].first) + " " + columns[j]);
                }
                v = table.values(static_cast<Eigen::Index>(i) - 1, static_cast<Eigen::Index>(j));
            }
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return table;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + path.string());
    return out;
}

void write_rows(std::ostream& out, const std::vector<Date>& dates, const Eigen::MatrixXd& values) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        out << format_date(dates[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < values.cols(); ++j) out << ',' << format_double(values(i, j));
        out << '\n';
    }
}

}  // namespace

FuturesPanel read_panel(std::istream& in, const PanelSchema& schema) {
    std::vector<std::string> columns;
    for (const auto& t : schema.tenors) columns.push_back(t.label);
    auto table = read_table(in, columns, schema.missing);
    return {std::move(table.dates), schema.tenors, std::move(table.values), ScaleMarker::kPrice};
}

FuturesPanel load_panel(const std::filesystem::path& path, const PanelSchema& schema) {
    auto in = open_in(path);
    return read_panel(in, schema);
}

FactorPanel read_factors(std::istream& in, MissingPolicy missing) {
    std::vector<std::string> columns(kFactorNames.begin(), kFactorNames.end());
    auto table = read_table(in, columns, missing);
    return {std::move(table.dates), std::move(table.values)};
}

FactorPanel load_factors(const std::filesystem::path& path, MissingPolicy missing) {
    auto in = open_in(path);
    return read_factors(in, missing);
}

void write_panel(std::ostream& out, const FuturesPanel& panel) {
    out << "date";
    for (const auto& t : panel.tenors()) out << ',' << t.label;
    out << '\n';
    write_rows(out, panel.dates(), panel.values());
}

void save_panel(const std::filesystem::path& path, const FuturesPanel& panel) {
    auto out = open_out(path);
    write_panel(out, panel);
}

void write_factors(std::ostream& out, const FactorPanel& factors) {
    out << "date";
    for (auto name : kFactorNames) out << ',' << name;
    out << '\n';
    write_rows(out, factors.dates(), factors.levels());
}

void save_factors(const std::filesystem::path& path, const FactorPanel& factors) {
    auto out = open_out(path);
    write_factors(out, factors);
}

}  // namespace curvecast
