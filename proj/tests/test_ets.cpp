#include "curvecast/error.hpp"
#include "curvecast/ets.hpp"
#include "curvecast/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace curvecast;

namespace {

// Literal transcription of the three state equations.
struct Reference {
    std::vector<double> l, b, e;
};

Reference reference_filter(const std::vector<double>& y, const DampedTrendParams& p) {
    Reference r;
    double l = p.l0, b = p.b0;
    for (double obs : y) {
        const double e = obs - (l + p.xi * b);
        const double l_new = l + p.xi * b + p.delta * e;
        const double b_new = p.xi * b + p.gamma * e;
        l = l_new;
        b = b_new;
        r.l.push_back(l);
        r.b.push_back(b);
        r.e.push_back(e);
    }
    return r;
}

DampedTrendParams random_params(Rng& rng) {
    DampedTrendParams p;
    p.xi = 0.98 * rng.uniform();
    p.delta = 0.01 + 0.99 * rng.uniform();
    p.gamma = p.delta * rng.uniform();
    p.l0 = rng.normal(0.0, 2.0);
    p.b0 = rng.normal(0.0, 0.5);
    return p;
}

std::vector<double> simulate(const DampedTrendParams& p, int n, double sd, Rng& rng) {
    std::vector<double> y;
    double l = p.l0, b = p.b0;
    for (int t = 0; t < n; ++t) {
        const double e = rng.normal(0.0, sd);
        y.push_back(l + p.xi * b + e);
        const double l_new = l + p.xi * b + p.delta * e;
        b = p.xi * b + p.gamma * e;
        l = l_new;
    }
    return y;
}

}  // namespace

TEST_CASE("xi = 0, delta = 1 collapses to the naive forecast") {
    const std::vector<double> y{1.0, 2.0, 3.0};
    const auto fit = ets_filter(y, {0.0, 1.0, 0.0, 1.0, 0.0});
    CHECK(fit.levels == y);
    CHECK(ets_forecast(fit, 1).front() == 3.0);
    CHECK(ets_forecast(fit, 5).back() == 3.0);
}

TEST_CASE("a constant series is a fixed point") {
    const std::vector<double> y(30, 4.25);
    Rng rng(1);
    for (int rep = 0; rep < 10; ++rep) {
        auto p = random_params(rng);
        p.l0 = 4.25;
        p.b0 = 0.0;
        const auto fit = ets_filter(y, p);
        CHECK(fit.sse == 0.0);
        for (double e : fit.residuals) CHECK(e == 0.0);
    }
}

TEST_CASE("filter matches a step-by-step reference") {
    Rng rng(2);
    for (int rep = 0; rep < 50; ++rep) {
        const auto p = random_params(rng);
        std::vector<double> y(40);
        for (auto& v : y) v = rng.normal(0.0, 3.0);
        const auto fit = ets_filter(y, p);
        const auto ref = reference_filter(y, p);
        double sse = 0.0;
        for (std::size_t t = 0; t < y.size(); ++t) {
            CHECK(std::abs(fit.levels[t] - ref.l[t]) <= 1e-12);
            CHECK(std::abs(fit.growths[t] - ref.b[t]) <= 1e-12);
            CHECK(std::abs(fit.residuals[t] - ref.e[t]) <= 1e-12);
            sse += ref.e[t] * ref.e[t];
        }
        CHECK(fit.residuals.size() == y.size());
        CHECK(std::abs(fit.sse - sse) <= 1e-10 * std::max(1.0, sse));
        const auto fitted = fit.fitted(y);
        for (std::size_t t = 0; t < y.size(); ++t) CHECK(fitted[t] + fit.residuals[t] == doctest::Approx(y[t]));
    }
}

TEST_CASE("inadmissible parameters are refused") {
    const std::vector<double> y{1.0, 2.0, 3.0};
    for (const DampedTrendParams& p : {DampedTrendParams{1.0, 0.5, 0.1, 0, 0}, DampedTrendParams{0.5, 0.0, 0.0, 0, 0},
                                       DampedTrendParams{0.5, 0.3, 0.4, 0, 0}, DampedTrendParams{-0.1, 0.5, 0.1, 0, 0},
                                       DampedTrendParams{0.5, 1.1, 0.1, 0, 0}}) {
        try {
            (void)ets_filter(y, p);
            FAIL("expected InadmissibleParams");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::kInadmissibleParams);
        }
    }
    CHECK_THROWS_AS((void)ets_filter(std::vector<double>{1.0}, {}), Error);
}

TEST_CASE("forecast paths") {
    EtsFit fit;
    fit.params = {0.5, 0.5, 0.1, 0.0, 0.0};
    fit.levels = {10.0};
    fit.growths = {1.0};
    fit.residuals = {0.0};
    const auto two = ets_forecast(fit, 2);
    CHECK(two[0] == 10.5);
    CHECK(two[1] == 10.75);

    fit.params.xi = 0.0;
    for (double v : ets_forecast(fit, 6)) CHECK(v == 10.0);

    fit.params.xi = 0.9;
    const auto far = ets_forecast(fit, 200);
    CHECK(std::abs(far.back() - 19.0) <= 1e-6);
    for (std::size_t h = 1; h < far.size(); ++h) CHECK(far[h] >= far[h - 1]);
    CHECK_THROWS_AS((void)ets_forecast(fit, 0), Error);
}

TEST_CASE("closed form equals the recursion; one-step consistency") {
    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const auto p = random_params(rng);
        std::vector<double> y(12);
        for (auto& v : y) v = rng.normal(0.0, 1.0);
        const auto fit = ets_filter(y, p);
        const double l = fit.levels.back(), b = fit.growths.back();
        const auto path = ets_forecast(fit, 25);
        double geometric = 0.0, power = 1.0;
        for (int h = 1; h <= 25; ++h) {
            power *= p.xi;
            geometric += power;
            CHECK(std::abs(path[static_cast<std::size_t>(h - 1)] - (l + geometric * b)) <= 1e-12);
        }
        CHECK(path.front() == l + p.xi * b);
    }
}

TEST_CASE("filter linearity under affine maps") {
    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        const auto p = random_params(rng);
        std::vector<double> y(30);
        for (auto& v : y) v = rng.normal(0.0, 1.0);
        const double a = 0.5 + 3.0 * rng.uniform(), c = rng.normal(0.0, 10.0);
        std::vector<double> z;
        for (double v : y) z.push_back(a * v + c);
        auto q = p;
        q.l0 = a * p.l0 + c;
        q.b0 = a * p.b0;
        const auto fy = ets_filter(y, p);
        const auto fz = ets_filter(z, q);
        for (std::size_t t = 0; t < y.size(); ++t) CHECK(std::abs(fz.residuals[t] - a * fy.residuals[t]) <= 1e-9);
    }
}

TEST_CASE("fitting") {
    SUBCASE("known generating parameters") {
        Rng rng(5);
        const DampedTrendParams truth{0.8, 0.3, 0.1, 0.0, 0.05};
        const auto y = simulate(truth, 1000, 0.1, rng);
        const auto fit = ets_fit(y);
        const auto at_truth = ets_filter(y, truth);
        CHECK(fit.sse <= 1.05 * at_truth.sse);
        CHECK(admissible(fit.params));
    }
    SUBCASE("linear ramp") {
        std::vector<double> y;
        for (int t = 0; t < 60; ++t) y.push_back(static_cast<double>(t));
        const auto fit = ets_fit(y);
        CHECK(fit.params.xi >= 0.95);
        CHECK(fit.params.xi <= EtsBounds::kXiMax);
        const double forecast_error = std::abs(ets_forecast(fit, 1).front() - 60.0);
        const double naive_error = std::abs(y.back() - 60.0);
        CHECK(forecast_error < naive_error);
    }
    SUBCASE("constant series") {
        const std::vector<double> y(20, -1.5);
        const auto fit = ets_fit(y);
        CHECK(fit.sse == 0.0);
        CHECK(fit.params.xi == 0.0);
        CHECK(ets_forecast(fit, 3).back() == -1.5);
    }
    SUBCASE("fitted parameters stay inside the box and are deterministic") {
        Rng rng(6);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<double> y(80);
            double level = 0.0;
            for (auto& v : y) v = (level += rng.normal(0.0, 1.0));
            const auto a = ets_fit(y);
            const auto b = ets_fit(y);
            CHECK(a.sse == b.sse);
            CHECK(a.params.xi == b.params.xi);
            CHECK(a.params.xi >= 0.0);
            CHECK(a.params.xi <= EtsBounds::kXiMax);
            CHECK(a.params.delta >= EtsBounds::kDeltaMin);
            CHECK(a.params.delta <= 1.0);
            CHECK(a.params.gamma >= 0.0);
            CHECK(a.params.gamma <= a.params.delta);
        }
    }
    SUBCASE("too short") {
        CHECK_THROWS_AS((void)ets_fit(std::vector<double>{1, 2, 3}), Error);
    }
}
