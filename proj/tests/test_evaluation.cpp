#include "support.hpp"

#include "curvecast/error.hpp"
#include "curvecast/losses.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace curvecast;
using testsupport::weekdays;

namespace {

Eigen::MatrixXd column(std::initializer_list<double> v) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

TEST_CASE("absolute and signed errors") {
    CHECK(mae(Eigen::MatrixXd::Zero(5, 11)).overall == 0.0);
    CHECK(mae(column({0.01, -0.03})).per_tenor(0) == doctest::Approx(0.02));
    CHECK(me(column({0.01, -0.01})).overall == 0.0);
    CHECK(me(column({0.02, 0.04})).overall == doctest::Approx(0.03));

    Rng rng(1);
    const Eigen::MatrixXd e = testsupport::normal_matrix(rng, 30, 11, 0.01);
    const auto a = mae(e);
    const auto m = me(e);
    CHECK(std::abs(a.overall - a.per_tenor.mean()) <= 1e-12);
    for (Eigen::Index j = 0; j < 11; ++j) CHECK(a.per_tenor(j) >= std::abs(m.per_tenor(j)));
}

TEST_CASE("scaled errors") {
    const Eigen::MatrixXd in_sample = column({1.0, 3.0, 2.0, 4.0});  // mean |diff| = 5/3
    CHECK(mase(column({5.0 / 3.0, -5.0 / 3.0}), in_sample).overall == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mase(column({0.0, 0.0}), in_sample).overall == 0.0);
    try {
        (void)mase(column({1.0}), column({2.0, 2.0, 2.0}));
        FAIL("expected ZeroDenominator");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::kZeroDenominator);
    }

    // The naive in-sample forecaster scored over its own one-step errors.
    Rng rng(2);
    const Eigen::MatrixXd series = testsupport::normal_matrix(rng, 40, 11, 0.01);
    const Eigen::MatrixXd naive_errors = series.bottomRows(39) - series.topRows(39);
    CHECK(mase(naive_errors, series).overall == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mixed asymmetric errors") {
    const auto u = mme(column({0.04, -0.04}), MmeMode::kUnder);
    const auto o = mme(column({0.04, -0.04}), MmeMode::kOver);
    CHECK(u.overall == doctest::Approx(0.12).epsilon(1e-14));
    CHECK(o.overall == doctest::Approx(0.12).epsilon(1e-14));
    CHECK(mme(Eigen::MatrixXd::Zero(4, 11), MmeMode::kUnder).overall == 0.0);
    CHECK(mme(Eigen::MatrixXd::Zero(4, 11), MmeMode::kOver).overall == 0.0);

    // Under mode: positive errors (under-predictions) take the square root.
    CHECK(mme(column({0.09}), MmeMode::kUnder).overall == doctest::Approx(0.3));
    CHECK(mme(column({0.09}), MmeMode::kOver).overall == doctest::Approx(0.09));

    Rng rng(3);
    for (int rep = 0; rep < 25; ++rep) {
        const Eigen::MatrixXd e = testsupport::normal_matrix(rng, 20, 11, 0.02);
        const Eigen::MatrixXd flipped = -e;
        CHECK(mme(flipped, MmeMode::kUnder).per_tenor == mme(e, MmeMode::kOver).per_tenor);
        CHECK(mme(flipped, MmeMode::kOver).per_tenor == mme(e, MmeMode::kUnder).per_tenor);
        CHECK(mae(flipped).per_tenor == mae(e).per_tenor);
        CHECK(me(flipped).per_tenor == -me(e).per_tenor);
    }
}

TEST_CASE("direction of change") {
    Rng rng(4);
    const Eigen::MatrixXd r = testsupport::normal_matrix(rng, 25, 11, 0.01);
    CHECK(mcpdc(r, r).overall == 1.0);
    CHECK(mcpdc(-r, r).overall == 0.0);

    const Eigen::MatrixXd f = testsupport::normal_matrix(rng, 25, 11, 0.01);
    CHECK(mcpdc(3.0 * f, 0.5 * r).per_tenor == mcpdc(f, r).per_tenor);

    SUBCASE("tie rules") {
        const Eigen::MatrixXd fz = column({0.0, 0.0, 0.01, -0.01});
        const Eigen::MatrixXd rz = column({0.0, 0.02, 0.0, -0.03});
        CHECK(mcpdc(fz, rz).overall == doctest::Approx(0.5));  // both-zero and matching signs
        CHECK(mcpdc(fz, rz, TiePolicy::kZeroNeverCorrect).overall == doctest::Approx(0.25));
    }
    SUBCASE("brute-force oracle") {
        const auto v = mcpdc(f, r);
        for (Eigen::Index j = 0; j < 11; ++j) {
            int hits = 0;
            for (Eigen::Index t = 0; t < 25; ++t) hits += sign(f(t, j)) == sign(r(t, j));
            CHECK(v.per_tenor(j) == doctest::Approx(hits / 25.0));
            CHECK(v.per_tenor(j) >= 0.0);
            CHECK(v.per_tenor(j) <= 1.0);
        }
    }
}

TEST_CASE("measure labels") {
    CHECK(measure_label(Measure::kMae, false) == "MAE");
    CHECK(measure_label(Measure::kMae, true) == "MAFE");
    CHECK(measure_label(Measure::kMase, true) == "MASFE");
    CHECK(measure_label(Measure::kMcpdc, true) == "MCFDC");
    CHECK(measure_label(Measure::kMmeUnder, true) == "MMFE(U)");
}

TEST_CASE("loss report") {
    Rng rng(5);
    const Eigen::MatrixXd realized = testsupport::normal_matrix(rng, 30, 11, 0.01);
    const Eigen::MatrixXd in_sample = testsupport::normal_matrix(rng, 50, 11, 0.01);
    std::vector<ModelPredictions> preds{{ModelKind::kFts, realized, realized},
                                        {ModelKind::kRandomWalk, testsupport::normal_matrix(rng, 30, 11, 0.01), realized}};
    std::vector<std::string> tenors;
    for (const auto& t : canonical_tenors()) tenors.push_back(t.label);
    const auto report = build_loss_report(preds, tenors, in_sample,
                                          {std::begin(kAllMeasures), std::end(kAllMeasures)}, true);
    CHECK(report.find(Measure::kMae, ModelKind::kFts)->overall == 0.0);
    CHECK(report.find(Measure::kMcpdc, ModelKind::kFts)->overall == 1.0);
    for (auto measure : kAllMeasures) {
        const auto* v = report.find(measure, ModelKind::kRandomWalk);
        REQUIRE(v != nullptr);
        CHECK(std::abs(v->overall - v->per_tenor.mean()) <= 1e-12);
    }
    std::ostringstream out;
    write_loss_report(out, report);
    const auto text = out.str();
    CHECK(text.rfind("measure,expiry,FTS,RW\nMAFE,Overall,0,", 0) == 0);
    CHECK(text.find("MASFE,CL18,") != std::string::npos);
}

TEST_CASE("loss matrix") {
    Rng rng(6);
    const auto dates = weekdays(12);
    std::vector<ForecastRecord> records;
    for (auto model : {ModelKind::kPc, ModelKind::kFts}) {
        for (const auto& d : dates) {
            records.push_back({model, d, testsupport::normal_matrix(rng, 11, 1, 0.01).col(0),
                               testsupport::normal_matrix(rng, 11, 1, 0.01).col(0)});
        }
    }
    const auto m = build_loss_matrix(records);
    REQUIRE(m.losses.rows() == 12);
    REQUIRE(m.models == std::vector<std::string>{"PC", "FTS"});
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        double s = 0.0;
        for (Eigen::Index j = 0; j < 11; ++j) s += std::abs(r.realized(j) - r.forecast(j));
        CHECK(std::abs(m.losses(static_cast<Eigen::Index>(i % 12), static_cast<Eigen::Index>(i / 12)) - s / 11.0) <= 1e-15);
    }
    const auto tenor3 = build_loss_matrix(records, 3);
    CHECK(tenor3.losses(0, 0) == std::abs(records[0].realized(3) - records[0].forecast(3)));

    SUBCASE("perfect and identical models") {
        std::vector<ForecastRecord> same;
        for (const auto& d : dates) {
            const Eigen::VectorXd v = testsupport::normal_matrix(rng, 11, 1).col(0);
            same.push_back({ModelKind::kPc, d, v, v});
            same.push_back({ModelKind::kFts, d, v, v});
        }
        const auto z = build_loss_matrix(same);
        CHECK(z.losses.isZero(0.0));
        CHECK(z.losses.col(0) == z.losses.col(1));
    }
    SUBCASE("coverage mismatch") {
        auto partial = records;
        partial.pop_back();
        try {
            (void)build_loss_matrix(partial);
            FAIL("expected CoverageMismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::kCoverageMismatch);
        }
    }
    SUBCASE("CSV round trip") {
        std::stringstream io;
        write_loss_matrix(io, m);
        const auto back = read_loss_matrix(io);
        CHECK(back.models == m.models);
        CHECK(back.dates == m.dates);
        CHECK(back.losses == m.losses);
    }
}
