#include "curvecast/error.hpp"

namespace curvecast {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::kMissingCell: return "MissingCell";
        case ErrorKind::kNonPositivePrice: return "NonPositivePrice";
        case ErrorKind::kDuplicateDate: return "DuplicateDate";
        case ErrorKind::kUnparseableRow: return "UnparseableRow";
        case ErrorKind::kSchemaMismatch: return "SchemaMismatch";
        case ErrorKind::kWrongScale: return "WrongScale";
        case ErrorKind::kEmptyIntersection: return "EmptyIntersection";
        case ErrorKind::kNonOrthonormalSpec: return "NonOrthonormalSpec";
        case ErrorKind::kNumericalFailure: return "NumericalFailure";
        case ErrorKind::kAllZeroEigenvalues: return "AllZeroEigenvalues";
        case ErrorKind::kGridMismatch: return "GridMismatch";
        case ErrorKind::kInadmissibleParams: return "InadmissibleParams";
        case ErrorKind::kSingularDesign: return "SingularDesign";
        case ErrorKind::kCoverageMismatch: return "CoverageMismatch";
        case ErrorKind::kZeroDenominator: return "ZeroDenominator";
        case ErrorKind::kInvalidArgument: return "InvalidArgument";
        case ErrorKind::kWindowFailure: return "WindowFailure";
        case ErrorKind::kIoFailure: return "IoFailure";
    }
    return "Unknown";
}

}  // namespace curvecast
