#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace curvecast::detail {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

// Plain Nelder-Mead (reflection 1, expansion 2, contraction 0.5, shrink 0.5).
// Deterministic: ties keep the earlier vertex.
template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> start, const std::vector<double>& steps,
                          int max_evaluations, double rel_tol) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> pts(dim + 1, start);
    std::vector<double> vals(dim + 1);
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    vals[0] = eval(pts[0]);
    for (std::size_t i = 0; i < dim; ++i) {
        pts[i + 1][i] += steps[i];
        vals[i + 1] = eval(pts[i + 1]);
    }

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    while (evals < max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
        if (std::abs(vals[worst] - vals[best]) <=
            rel_tol * (std::abs(vals[best]) + std::abs(vals[worst])) + 1e-300) {
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[i][d] / static_cast<double>(dim);
        }
        for (std::size_t d = 0; d < dim; ++d) trial[d] = centroid[d] + (centroid[d] - pts[worst][d]);
        const double fr = eval(trial);

        if (fr < vals[best]) {
            for (std::size_t d = 0; d < dim; ++d) trial2[d] = centroid[d] + 2.0 * (trial[d] - centroid[d]);
            const double fe = eval(trial2);
            if (fe < fr) {
                pts[worst] = trial2;
                vals[worst] = fe;
            } else {
                pts[worst] = trial;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = trial;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const auto& anchor = outside ? trial : pts[worst];
        for (std::size_t d = 0; d < dim; ++d) trial2[d] = centroid[d] + 0.5 * (anchor[d] - centroid[d]);
        const double fc = eval(trial2);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = trial2;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t d = 0; d < dim; ++d) pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
            vals[i] = eval(pts[i]);
        }
    }

    const auto best = static_cast<std::size_t>(
        std::distance(vals.begin(), std::min_element(vals.begin(), vals.end())));
    return {pts[best], vals[best], evals};
}

}  // namespace curvecast::detail
