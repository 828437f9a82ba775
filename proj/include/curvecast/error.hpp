#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvecast {

enum class ErrorKind {
    kMissingCell,
    kNonPositivePrice,
    kDuplicateDate,
    kUnparseableRow,
    kSchemaMismatch,
    kWrongScale,
    kEmptyIntersection,
    kNonOrthonormalSpec,
    kNumericalFailure,
    kAllZeroEigenvalues,
    kGridMismatch,
    kInadmissibleParams,
    kSingularDesign,
    kCoverageMismatch,
    kZeroDenominator,
    kInvalidArgument,
    kWindowFailure,
    kIoFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace curvecast
