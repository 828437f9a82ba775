#include "curvecast/ols.hpp"

#include "curvecast/error.hpp"

namespace curvecast {

namespace {

constexpr double kRankThreshold = 1e-10;

Eigen::MatrixXd design_with_intercept(const Eigen::MatrixXd& regressors) {
    Eigen::MatrixXd design(regressors.rows(), regressors.cols() + 1);
    design.col(0).setOnes();
    design.rightCols(regressors.cols()) = regressors;
    return design;
}

}  // namespace

double OlsFit::predict(const Eigen::Ref<const Eigen::VectorXd>& regressors) const {
    return coefficients(0) + coefficients.tail(coefficients.size() - 1).dot(regressors);
}

Eigen::VectorXd OlsFit::predict_rows(const Eigen::MatrixXd& regressors) const {
    Eigen::VectorXd out = regressors * coefficients.tail(coefficients.size() - 1);
    out.array() += coefficients(0);
    return out;
}

std::vector<OlsFit> fit_ols_multi(const Eigen::MatrixXd& regressors, const Eigen::MatrixXd& targets,
                                  std::vector<std::string> names) {
    const Eigen::Index n = regressors.rows();
    const Eigen::Index p = regressors.cols() + 1;
    if (targets.rows() != n) throw Error(ErrorKind::kInvalidArgument, "target length mismatch");
    if (n < p) {
        throw Error(ErrorKind::kSingularDesign,
                    std::to_string(n) + " observations for " + std::to_string(p) + " coefficients");
    }
    if (!names.empty() && static_cast<Eigen::Index>(names.size()) != regressors.cols()) {
        throw Error(ErrorKind::kInvalidArgument, "one name per regressor");
    }

    const Eigen::MatrixXd design = design_with_intercept(regressors);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < p) {
        throw Error(ErrorKind::kSingularDesign, "design rank " + std::to_string(qr.rank()) + " < " +
                                                    std::to_string(p));
    }

    std::vector<OlsFit> fits;
    fits.reserve(static_cast<std::size_t>(targets.cols()));
    const double dof = n > p ? static_cast<double>(n - p) : 1.0;
    for (Eigen::Index c = 0; c < targets.cols(); ++c) {
        OlsFit fit;
        fit.coefficients = qr.solve(targets.col(c));
        fit.residual_variance = (targets.col(c) - design * fit.coefficients).squaredNorm() / dof;
        fit.regressor_names = names;
        fits.push_back(std::move(fit));
    }
    return fits;
}

OlsFit fit_ols(const Eigen::MatrixXd& regressors, const Eigen::Ref<const Eigen::VectorXd>& target,
               std::vector<std::string> names) {
    return fit_ols_multi(regressors, target, std::move(names)).front();
}

}  // namespace curvecast
