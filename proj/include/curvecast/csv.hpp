#pragma once

#include "curvecast/panel.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace curvecast {

enum class MissingPolicy { kReject, kForwardFill };

/// Expected futures columns after `date`, plus how to treat empty cells.
struct PanelSchema {
    std::vector<Tenor> tenors = canonical_tenors();
    MissingPolicy missing = MissingPolicy::kReject;
};

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Splits one CSV line on commas; surrounding whitespace is trimmed per field.
std::vector<std::string> split_csv_line(std::string_view line);

FuturesPanel read_panel(std::istream& in, const PanelSchema& schema = {});
FuturesPanel load_panel(const std::filesystem::path& path, const PanelSchema& schema = {});

FactorPanel read_factors(std::istream& in, MissingPolicy missing = MissingPolicy::kReject);
FactorPanel load_factors(const std::filesystem::path& path,
                         MissingPolicy missing = MissingPolicy::kReject);

/// Header `date,<tenor labels>` then one row per date.
void write_panel(std::ostream& out, const FuturesPanel& panel);
void save_panel(const std::filesystem::path& path, const FuturesPanel& panel);

void write_factors(std::ostream& out, const FactorPanel& factors);
void save_factors(const std::filesystem::path& path, const FactorPanel& factors);

}  // namespace curvecast
