#include "curvecast/fpca.hpp"

#include "curvecast/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace curvecast {

FunctionGrid::FunctionGrid(Eigen::VectorXd nodes, Eigen::VectorXd weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.size() == 0 || nodes_.size() != weights_.size()) {
        throw Error(ErrorKind::kInvalidArgument, "grid needs one weight per node");
    }
    if ((weights_.array() <= 0.0).any()) {
        throw Error(ErrorKind::kInvalidArgument, "grid weights must be positive");
    }
}

FunctionGrid FunctionGrid::trapezoidal(const Eigen::VectorXd& nodes) {
    const Eigen::Index n = nodes.size();
    if (n < 2) throw Error(ErrorKind::kInvalidArgument, "trapezoidal grid needs >= 2 nodes");
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double left = i > 0 ? nodes(i) - nodes(i - 1) : 0.0;
        const double right = i + 1 < n ? nodes(i + 1) - nodes(i) : 0.0;
        if ((i > 0 && left <= 0.0) || (i + 1 < n && right <= 0.0)) {
            throw Error(ErrorKind::kInvalidArgument, "grid nodes must increase strictly");
        }
        w(i) = 0.5 * (left + right);
    }
    return {nodes, w};
}

double FunctionGrid::inner(const Eigen::Ref<const Eigen::VectorXd>& a,
                           const Eigen::Ref<const Eigen::VectorXd>& b) const {
    if (a.size() != size() || b.size() != size()) {
        throw Error(ErrorKind::kGridMismatch, "function length differs from grid size");
    }
    return (a.array() * b.array() * weights_.array()).sum();
}

Eigen::MatrixXd FunctionGrid::gram(const Eigen::MatrixXd& functions) const {
    if (functions.rows() != size()) {
        throw Error(ErrorKind::kGridMismatch, "function length differs from grid size");
    }
    return functions.transpose() * weights_.asDiagonal() * functions;
}

bool FunctionGrid::same_as(const FunctionGrid& other) const {
    return nodes_.size() == other.nodes_.size() && nodes_ == other.nodes_ &&
           weights_ == other.weights_;
}

FunctionGrid grid_for(const FuturesPanel& panel) {
    return FunctionGrid::trapezoidal(panel.tenor_positions());
}

Eigen::VectorXd estimate_mean(const Eigen::MatrixXd& curves) {
    if (curves.rows() < 1) throw Error(ErrorKind::kInvalidArgument, "mean needs >= 1 curve");
    return curves.colwise().mean().transpose();
}

Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& curves, const Eigen::VectorXd& mean) {
    if (curves.rows() < 2) throw Error(ErrorKind::kInvalidArgument, "covariance needs >= 2 curves");
    if (mean.size() != curves.cols()) {
        throw Error(ErrorKind::kGridMismatch, "mean length differs from curve length");
    }
    const Eigen::MatrixXd centred = curves.rowwise() - mean.transpose();
    Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(curves.rows());
    // Exact symmetry; the product above is symmetric only up to rounding.
    return 0.5 * (cov + cov.transpose());
}

Eigensystem eigendecompose(const Eigen::MatrixXd& covariance, const FunctionGrid& grid) {
    const Eigen::Index n = grid.size();
    if (covariance.rows() != n || covariance.cols() != n) {
        throw Error(ErrorKind::kGridMismatch, "covariance size differs from grid size");
    }
    const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorKind::kInvalidArgument, "covariance surface is not symmetric");
    }

    // K phi = lambda phi with <phi, phi>_W = 1  <=>  (W^1/2 C W^1/2) u = lambda u,
    // phi = W^-1/2 u.
    const Eigen::VectorXd root = grid.weights().array().sqrt();
    const Eigen::MatrixXd sym = root.asDiagonal() * covariance * root.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (sym + sym.transpose()));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::kNumericalFailure, "symmetric eigensolver did not converge");
    }

    Eigensystem out;
    out.values = solver.eigenvalues().reverse();
    out.functions = solver.eigenvectors().rowwise().reverse();
    out.functions = root.cwiseInverse().asDiagonal() * out.functions;
    for (Eigen::Index k = 0; k < out.functions.cols(); ++k) {
        Eigen::Index arg = 0;
        out.functions.col(k).cwiseAbs().maxCoeff(&arg);
        if (out.functions(arg, k) < 0.0) out.functions.col(k) *= -1.0;
    }
    return out;
}

Eigen::Index select_K(const Eigen::VectorXd& eigenvalues, double proportion) {
    if (!(proportion > 0.0 && proportion <= 1.0)) {
        throw Error(ErrorKind::kInvalidArgument, "proportion must lie in (0, 1]");
    }
    double total = 0.0;
    for (double v : eigenvalues) {
        if (v > 0.0) total += v;
    }
    if (!(total > 0.0)) throw Error(ErrorKind::kAllZeroEigenvalues, "no positive eigenvalue");

    double cumulative = 0.0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        if (eigenvalues(k) > 0.0) cumulative += eigenvalues(k);
        // Small slack so that exact boundary ratios such as 9.9 / 10 qualify.
        if (cumulative / total >= proportion - 1e-12) return k + 1;
    }
    return eigenvalues.size();
}

Eigen::MatrixXd compute_scores(const Eigen::MatrixXd& curves, const FunctionGrid& curve_grid,
                               const FpcaModel& model, Eigen::Index count) {
    if (!curve_grid.same_as(model.grid) || curves.cols() != model.grid.size()) {
        throw Error(ErrorKind::kGridMismatch, "curves are not on the model grid");
    }
    if (count < 0 || count > model.eigenfunctions.cols()) {
        throw Error(ErrorKind::kInvalidArgument, "score count exceeds available components");
    }
    const Eigen::MatrixXd centred = curves.rowwise() - model.mean.transpose();
    return centred * model.grid.weights().asDiagonal() * model.eigenfunctions.leftCols(count);
}

Eigen::MatrixXd compute_scores(const FuturesPanel& panel, const FpcaModel& model) {
    return compute_scores(panel.values(), grid_for(panel), model, model.K);
}

Eigen::MatrixXd reconstruct(const FpcaModel& model, const Eigen::MatrixXd& scores, Eigen::Index K) {
    if (K < 0 || K > model.eigenfunctions.cols() || scores.cols() < K) {
        throw Error(ErrorKind::kInvalidArgument, "reconstruction rank exceeds available components");
    }
    Eigen::MatrixXd out = scores.leftCols(K) * model.eigenfunctions.leftCols(K).transpose();
    out.rowwise() += model.mean.transpose();
    return out;
}

FpcaModel fit_fpca(const Eigen::MatrixXd& curves, const FunctionGrid& grid, double proportion) {
    if (curves.rows() < 2) throw Error(ErrorKind::kInvalidArgument, "FPCA needs >= 2 curves");
    if (curves.cols() != grid.size()) {
        throw Error(ErrorKind::kGridMismatch, "curve length differs from grid size");
    }

    FpcaModel model{grid, estimate_mean(curves), {}, {}, {}, 0, 0.0};
    const Eigen::MatrixXd cov = estimate_covariance(curves, model.mean);
    auto system = eigendecompose(cov, grid);

    const double top = system.values.size() > 0 ? system.values(0) : 0.0;
    const double negative_floor = -1e-10 * std::max(1.0, top);
    // Rounding noise of an exactly degenerate surface counts as zero.
    const double zero_floor = 1e-16 * std::max(1.0, top);
    for (Eigen::Index k = 0; k < system.values.size(); ++k) {
        if (system.values(k) < negative_floor) {
            throw Error(ErrorKind::kNumericalFailure,
                        "covariance eigenvalue " + std::to_string(system.values(k)) + " < 0");
        }
        if (system.values(k) < zero_floor) system.values(k) = 0.0;
    }
    model.eigenvalues = std::move(system.values);
    model.eigenfunctions = std::move(system.functions);
    model.K = select_K(model.eigenvalues, proportion);
    model.explained_variance_ratio =
        model.eigenvalues.head(model.K).sum() / model.eigenvalues.cwiseMax(0.0).sum();
    model.scores = compute_scores(curves, grid, model, model.K);
    return model;
}

FpcaModel fit_fpca(const FuturesPanel& panel, double proportion) {
    return fit_fpca(panel.values(), grid_for(panel), proportion);
}

}  // namespace curvecast
