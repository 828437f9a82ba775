#include "support.hpp"

#include "curvecast/dm.hpp"
#include "curvecast/error.hpp"
#include "curvecast/mcs.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace curvecast;
using testsupport::weekdays;

namespace {

LossMatrix make_matrix(const Eigen::MatrixXd& losses, std::vector<std::string> names) {
    return {weekdays(static_cast<int>(losses.rows())), std::move(names), losses};
}

// Model C = model A + 1 + noise; B close to A.
LossMatrix planted(std::uint64_t seed, Eigen::Index T = 500) {
    Rng rng(seed);
    Eigen::MatrixXd l(T, 3);
    for (Eigen::Index t = 0; t < T; ++t) {
        const double a = std::abs(rng.normal(0.0, 1.0));
        l(t, 0) = a;
        l(t, 1) = a + rng.normal(0.0, 0.1);
        l(t, 2) = a + 1.0 + rng.normal(0.0, 0.1);
    }
    return make_matrix(l, {"A", "B", "C"});
}

std::vector<double> as_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("loss differentials") {
    SUBCASE("identical columns") {
        Rng rng(1);
        const Eigen::MatrixXd c = testsupport::normal_matrix(rng, 8, 1);
        Eigen::MatrixXd l(8, 3);
        l << c, c, c;
        const auto d = loss_differentials(l);
        CHECK(d.relative.isZero(0.0));
        for (const auto& p : d.pairwise) CHECK(p.isZero(0.0));
    }
    SUBCASE("two models") {
        Eigen::MatrixXd l(2, 2);
        l << 1, 0, 1, 0;
        const auto d = loss_differentials(l);
        CHECK(d.pairwise[0](0, 1) == 1.0);
        CHECK(d.pairwise[0](1, 1) == 1.0);
        CHECK(d.relative(0, 0) == 1.0);
        CHECK(d.relative(1, 1) == -1.0);
    }
    SUBCASE("elementwise oracle, antisymmetry, zero sum") {
        Rng rng(2);
        const Eigen::MatrixXd l = testsupport::normal_matrix(rng, 15, 3);
        const auto d = loss_differentials(l);
        for (Eigen::Index t = 0; t < 15; ++t) {
            double total = 0.0;
            for (Eigen::Index i = 0; i < 3; ++i) {
                double rel = 0.0;
                for (Eigen::Index j = 0; j < 3; ++j) {
                    CHECK(d.pairwise[static_cast<std::size_t>(i)](t, j) == l(t, i) - l(t, j));
                    CHECK(d.pairwise[static_cast<std::size_t>(i)](t, j) == -d.pairwise[static_cast<std::size_t>(j)](t, i));
                    rel += l(t, i) - l(t, j);
                }
                CHECK(d.relative(t, i) == doctest::Approx(rel / 2.0).epsilon(1e-14));
                total += d.relative(t, i);
            }
            CHECK(std::abs(total) <= 1e-12);
        }
    }
    SUBCASE("needs two models") { CHECK_THROWS_AS((void)loss_differentials(Eigen::MatrixXd::Ones(5, 1)), Error); }
}

TEST_CASE("block length from AR significance") {
    SUBCASE("white noise") {
        Rng rng(3);
        const Eigen::MatrixXd l = testsupport::normal_matrix(rng, 500, 2);
        CHECK(select_block_length(l) == 1);
    }
    SUBCASE("strong AR(2) differential") {
        Rng rng(4);
        const Eigen::Index T = 500;
        Eigen::MatrixXd l(T, 2);
        double d1 = 0.0, d2 = 0.0;
        for (Eigen::Index t = 0; t < T; ++t) {
            const double d = 0.5 * d1 + 0.4 * d2 + rng.normal();
            d2 = d1;
            d1 = d;
            l(t, 0) = 5.0 + d;
            l(t, 1) = 5.0;
        }
        CHECK(select_block_length(l) == 2);
    }
    SUBCASE("minimal length respects the cap") {
        Rng rng(5);
        for (int rep = 0; rep < 20; ++rep) {
            const int p = select_block_length(testsupport::normal_matrix(rng, 10, 3));
            CHECK(p >= 1);
            CHECK(p <= 2);
        }
        CHECK_THROWS_AS((void)select_block_length(Eigen::MatrixXd::Ones(9, 2)), Error);
    }
    SUBCASE("identical models") { CHECK(select_block_length(Eigen::MatrixXd::Ones(50, 2)) == 1); }
}

TEST_CASE("circular block bootstrap") {
    SUBCASE("one block spanning the sample is a rotation") {
        const auto idx = block_bootstrap(20, {20, 50, 7});
        for (Eigen::Index b = 0; b < idx.rows(); ++b) {
            for (Eigen::Index t = 1; t < 20; ++t) CHECK(idx(b, t) == (idx(b, t - 1) + 1) % 20);
        }
    }
    SUBCASE("deterministic given the seed") {
        CHECK(block_bootstrap(30, {3, 2, 11}) == block_bootstrap(30, {3, 2, 11}));
        CHECK(block_bootstrap(30, {3, 2, 11}) != block_bootstrap(30, {3, 2, 12}));
    }
    SUBCASE("unit blocks draw time indices independently") {
        const auto idx = block_bootstrap(10, {1, 4000, 1});
        std::vector<int> counts(10, 0);
        for (Eigen::Index b = 0; b < idx.rows(); ++b) {
            for (Eigen::Index t = 0; t < 10; ++t) {
                REQUIRE(idx(b, t) >= 0);
                REQUIRE(idx(b, t) < 10);
                ++counts[static_cast<std::size_t>(idx(b, t))];
            }
        }
        for (int c : counts) CHECK(std::abs(c - 4000) < 300);
    }
    SUBCASE("blocks are consecutive runs") {
        const auto idx = block_bootstrap(23, {5, 10, 2});
        for (Eigen::Index b = 0; b < idx.rows(); ++b) {
            for (Eigen::Index t = 0; t < 23; ++t) {
                if (t % 5 != 0) CHECK(idx(b, t) == (idx(b, t - 1) + 1) % 23);
            }
        }
    }
    SUBCASE("invalid plans") {
        CHECK_THROWS_AS((void)block_bootstrap(10, {0, 5, 1}), Error);
        CHECK_THROWS_AS((void)block_bootstrap(10, {11, 5, 1}), Error);
        CHECK_THROWS_AS((void)block_bootstrap(10, {2, 0, 1}), Error);
    }
}

TEST_CASE("model confidence set") {
    const BootstrapPlan plan{2, 1000, 42};

    SUBCASE("single model") {
        Rng rng(6);
        const auto r = mcs_run(make_matrix(testsupport::normal_matrix(rng, 30, 1), {"FTS"}), 0.1,
                               McsStatistic::kRange, plan);
        CHECK(r.surviving == std::vector<std::string>{"FTS"});
        CHECK(r.eliminations.empty());
    }
    SUBCASE("bitwise-identical pair survives") {
        Rng rng(7);
        const Eigen::MatrixXd c = testsupport::normal_matrix(rng, 100, 1).cwiseAbs();
        Eigen::MatrixXd l(100, 2);
        l << c, c;
        for (auto stat : {McsStatistic::kRange, McsStatistic::kMax}) {
            for (double alpha : {0.25, 0.10, 0.9}) {
                const auto r = mcs_run(make_matrix(l, {"A", "B"}), alpha, stat, plan);
                CHECK(r.surviving.size() == 2);
                REQUIRE(r.sequence.size() == 1);
                CHECK(r.sequence[0].statistic == 0.0);
                CHECK(r.sequence[0].p_value == 1.0);
            }
        }
    }
    SUBCASE("a dominated model is removed; the rest survive") {
        const auto m = planted(8);
        for (auto stat : {McsStatistic::kRange, McsStatistic::kMax}) {
            for (double alpha : {0.25, 0.10}) {
                const auto r = mcs_run(m, alpha, stat, plan);
                CHECK_FALSE(r.contains("C"));
                CHECK(r.contains("A"));
                CHECK(r.contains("B"));
                REQUIRE_FALSE(r.eliminations.empty());
                CHECK(r.eliminations.front().eliminated == "C");
            }
        }
    }
    SUBCASE("zero-variance dominance eliminates the worse model") {
        Rng rng(9);
        // Dyadic values keep the differential exactly constant.
        const Eigen::MatrixXd c = (8.0 * testsupport::normal_matrix(rng, 60, 1).cwiseAbs()).array().round() / 8.0;
        Eigen::MatrixXd l(60, 2);
        l << c, c.array() + 0.5;
        for (auto stat : {McsStatistic::kRange, McsStatistic::kMax}) {
            const auto r = mcs_run(make_matrix(l, {"good", "bad"}), 0.1, stat, plan);
            CHECK(r.surviving == std::vector<std::string>{"good"});
            CHECK(std::isinf(r.eliminations.front().statistic));
        }
    }
    SUBCASE("structural invariants over seeded instances") {
        for (std::uint64_t seed = 100; seed < 120; ++seed) {
            Rng rng(seed);
            Eigen::MatrixXd l = testsupport::normal_matrix(rng, 80, 4).cwiseAbs();
            for (Eigen::Index j = 0; j < 4; ++j) l.col(j).array() += 0.1 * rng.uniform();
            const auto m = make_matrix(l, {"P", "Q", "R", "S"});
            for (auto stat : {McsStatistic::kRange, McsStatistic::kMax}) {
                const BootstrapPlan p{3, 300, seed};
                const auto loose = mcs_run(m, 0.10, stat, p);
                const auto strict = mcs_run(m, 0.25, stat, p);
                // Higher alpha eliminates weakly more.
                for (const auto& s : strict.surviving) CHECK(loose.contains(s));
                CHECK_FALSE(strict.surviving.empty());
                std::set<std::string> all(strict.surviving.begin(), strict.surviving.end());
                for (const auto& e : strict.eliminations) CHECK(all.insert(e.eliminated).second);
                CHECK(all == std::set<std::string>{"P", "Q", "R", "S"});
                // Reproducible.
                const auto again = mcs_run(m, 0.25, stat, p);
                CHECK(again.surviving == strict.surviving);
                CHECK(again.sequence.size() == strict.sequence.size());
            }
        }
    }
    SUBCASE("shift invariance and relabelling") {
        const auto m = planted(10, 200);
        auto shifted = m;
        shifted.losses.array() += 3.0;
        auto permuted = m;
        permuted.losses.col(0) = m.losses.col(2);
        permuted.losses.col(2) = m.losses.col(0);
        permuted.models = {"C", "B", "A"};
        for (auto stat : {McsStatistic::kRange, McsStatistic::kMax}) {
            const auto base = mcs_run(m, 0.25, stat, plan);
            const auto s = mcs_run(shifted, 0.25, stat, plan);
            CHECK(s.surviving == base.surviving);
            REQUIRE(s.sequence.size() == base.sequence.size());
            for (std::size_t k = 0; k < s.sequence.size(); ++k) {
                CHECK(s.sequence[k].eliminated == base.sequence[k].eliminated);
                CHECK(s.sequence[k].statistic == doctest::Approx(base.sequence[k].statistic).epsilon(1e-9));
            }
            const auto p = mcs_run(permuted, 0.25, stat, plan);
            auto a = p.surviving, b = base.surviving;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(a == b);
        }
    }
    SUBCASE("argument checks") {
        const auto m = planted(11, 50);
        CHECK_THROWS_AS((void)mcs_run(m, 0.0, McsStatistic::kRange, plan), Error);
        CHECK_THROWS_AS((void)mcs_run(m, 1.0, McsStatistic::kRange, plan), Error);
    }
}

TEST_CASE("Diebold-Mariano tests") {
    Rng rng(12);
    const Eigen::VectorXd a = testsupport::normal_matrix(rng, 500, 1).col(0);
    const Eigen::VectorXd b = testsupport::normal_matrix(rng, 500, 1).col(0);
    const auto va = as_vector(a), vb = as_vector(b);

    SUBCASE("identical losses") {
        const auto r = dm_test(va, va);
        CHECK(r.statistic == 0.0);
        CHECK(r.p_value == 1.0);
        const auto m = modified_dm_test(va, va);
        CHECK(m.statistic == 0.0);
        CHECK(m.p_value == 1.0);
    }
    SUBCASE("antisymmetry") {
        CHECK(dm_test(va, vb).statistic == -dm_test(vb, va).statistic);
        CHECK(dm_test(va, vb).p_value == dm_test(vb, va).p_value);
        CHECK(modified_dm_test(va, vb).statistic == -modified_dm_test(vb, va).statistic);
    }
    SUBCASE("unit mean differential") {
        std::vector<double> shifted(va);
        for (std::size_t t = 0; t < shifted.size(); ++t) shifted[t] = vb[t] + 1.0;
        const auto r = dm_test(shifted, va);
        CHECK(std::abs(r.statistic) > 10.0);
        CHECK(r.p_value < 0.001);
    }
    SUBCASE("bandwidth and hand-computed statistic") {
        const std::vector<double> x(va.begin(), va.begin() + 64), y(vb.begin(), vb.begin() + 64);
        const auto r = dm_test(x, y);
        CHECK(r.bandwidth == 4);
        double mean = 0.0;
        std::vector<double> d(64);
        for (std::size_t t = 0; t < 64; ++t) mean += (d[t] = x[t] - y[t]);
        mean /= 64.0;
        auto gamma = [&](std::size_t k) {
            double s = 0.0;
            for (std::size_t t = k; t < 64; ++t) s += (d[t] - mean) * (d[t - k] - mean);
            return s / 64.0;
        };
        double lrv = gamma(0);
        for (std::size_t k = 1; k <= 4; ++k) lrv += 2.0 * (1.0 - static_cast<double>(k) / 5.0) * gamma(k);
        const double expected = mean / std::sqrt(lrv / 64.0);
        CHECK(std::abs(r.statistic - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
        CHECK(r.p_value == doctest::Approx(std::erfc(std::abs(expected) / std::sqrt(2.0))).epsilon(1e-12));
        CHECK(dm_test(std::vector<double>(va.begin(), va.begin() + 27), std::vector<double>(vb.begin(), vb.begin() + 27)).bandwidth == 3);
    }
    SUBCASE("modified statistic is the corrected DM statistic") {
        const auto r = dm_test(va, vb);
        const auto m = modified_dm_test(va, vb, 1);
        const double factor = std::sqrt((500.0 + 1.0 - 2.0 + 0.0) / 500.0);
        CHECK(modified_dm_correction(500, 1) == doctest::Approx(factor).epsilon(1e-15));
        CHECK(std::abs(m.statistic - r.statistic * factor) <= 1e-10);
        CHECK(std::abs(m.statistic / r.statistic - 1.0) < 0.005);
        CHECK(modified_dm_correction(20, 3) == doctest::Approx(std::sqrt((21.0 - 6.0 + 6.0 / 20.0) / 20.0)));
    }
    SUBCASE("argument checks") {
        CHECK_THROWS_AS((void)dm_test(std::vector<double>(9, 1.0), std::vector<double>(9, 1.0)), Error);
        CHECK_THROWS_AS((void)dm_test(std::vector<double>(12, 1.0), std::vector<double>(11, 1.0)), Error);
    }
}
