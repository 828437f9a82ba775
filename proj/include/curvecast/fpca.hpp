#pragma once

#include "curvecast/panel.hpp"

#include <Eigen/Dense>

namespace curvecast {

/// Discretised expiry continuum: node positions plus quadrature weights, so
/// that inner(w, v) approximates the integral of w * v over the node span.
class FunctionGrid {
public:
    FunctionGrid(Eigen::VectorXd nodes, Eigen::VectorXd weights);

    /// Trapezoidal weights over strictly increasing nodes; they sum to the span.
    static FunctionGrid trapezoidal(const Eigen::VectorXd& nodes);

    [[nodiscard]] const Eigen::VectorXd& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Eigen::VectorXd& weights() const noexcept { return weights_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return nodes_.size(); }

    [[nodiscard]] double inner(const Eigen::Ref<const Eigen::VectorXd>& a,
                               const Eigen::Ref<const Eigen::VectorXd>& b) const;

    /// Gram matrix of the columns of `functions` under inner().
    [[nodiscard]] Eigen::MatrixXd gram(const Eigen::MatrixXd& functions) const;

    [[nodiscard]] bool same_as(const FunctionGrid& other) const;

private:
    Eigen::VectorXd nodes_;
    Eigen::VectorXd weights_;
};

/// Trapezoidal grid over a panel's tenor positions.
FunctionGrid grid_for(const FuturesPanel& panel);

struct Eigensystem {
    Eigen::VectorXd values;     // descending
    Eigen::MatrixXd functions;  // one column per eigenvalue, grid-orthonormal
};

struct FpcaModel {
    FunctionGrid grid;
    Eigen::VectorXd mean;            // at nodes
    Eigen::VectorXd eigenvalues;     // all of them, descending, clipped at 0
    Eigen::MatrixXd eigenfunctions;  // all of them, columns
    Eigen::MatrixXd scores;          // n x K
    Eigen::Index K = 0;
    double explained_variance_ratio = 0.0;

    /// Leading K eigenfunctions.
    [[nodiscard]] Eigen::MatrixXd retained() const { return eigenfunctions.leftCols(K); }
};

Eigen::VectorXd estimate_mean(const Eigen::MatrixXd& curves);

/// Divisor-n covariance surface at the nodes.
Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& curves, const Eigen::VectorXd& mean);

/// Solves the covariance-operator eigenproblem under the grid inner product.
/// Eigenfunctions are orthonormal under grid.inner(), sorted by descending
/// eigenvalue, with each function's largest-magnitude entry made positive.
Eigensystem eigendecompose(const Eigen::MatrixXd& covariance, const FunctionGrid& grid);

/// Smallest K whose leading eigenvalues explain at least `proportion` of the
/// positive-eigenvalue total.
Eigen::Index select_K(const Eigen::VectorXd& eigenvalues, double proportion);

/// Projections of the centred curves onto the first `count` eigenfunctions.
Eigen::MatrixXd compute_scores(const Eigen::MatrixXd& curves, const FunctionGrid& curve_grid,
                               const FpcaModel& model, Eigen::Index count);
Eigen::MatrixXd compute_scores(const FuturesPanel& panel, const FpcaModel& model);

/// mean + scores * first-K eigenfunctions, one curve per row.
Eigen::MatrixXd reconstruct(const FpcaModel& model, const Eigen::MatrixXd& scores, Eigen::Index K);

FpcaModel fit_fpca(const Eigen::MatrixXd& curves, const FunctionGrid& grid, double proportion);
FpcaModel fit_fpca(const FuturesPanel& panel, double proportion);

}  // namespace curvecast
