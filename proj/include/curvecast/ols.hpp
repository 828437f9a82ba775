#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace curvecast {

/// Least-squares fit with an intercept. coefficients(0) is the intercept,
/// followed by one slope per regressor column.
struct OlsFit {
    Eigen::VectorXd coefficients;
    double residual_variance = 0.0;
    std::vector<std::string> regressor_names;

    [[nodiscard]] double predict(const Eigen::Ref<const Eigen::VectorXd>& regressors) const;
    [[nodiscard]] Eigen::VectorXd predict_rows(const Eigen::MatrixXd& regressors) const;
};

/// Column-pivoted QR solve; throws SingularDesign when the design (intercept
/// plus regressors) has relative rank deficiency below 1e-10.
OlsFit fit_ols(const Eigen::MatrixXd& regressors, const Eigen::Ref<const Eigen::VectorXd>& target,
               std::vector<std::string> names = {});

/// One fit per target column sharing the same design; rank checked once.
std::vector<OlsFit> fit_ols_multi(const Eigen::MatrixXd& regressors, const Eigen::MatrixXd& targets,
                                  std::vector<std::string> names = {});

}  // namespace curvecast
