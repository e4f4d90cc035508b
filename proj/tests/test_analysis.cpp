#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "polya/analysis.hpp"
#include "polya/simulate.hpp"

using namespace polya;

TEST_CASE("capital curve from a state") {
    const CapitalCurve curve = capital_curve(Composition{3, 1, 0, 4});
    CHECK(curve.ranks == std::vector<std::int64_t>{1, 2, 3, 4});
    REQUIRE(curve.weights.size() == 4);
    CHECK_THAT(curve.weights[0], Catch::Matchers::WithinRel(0.5, 1e-15));
    CHECK_THAT(curve.weights[1], Catch::Matchers::WithinRel(0.375, 1e-15));
    CHECK_THAT(curve.weights[2], Catch::Matchers::WithinRel(0.125, 1e-15));
    CHECK(curve.weights[3] == 0.0);
    // the zero-weight rank has no log point
    REQUIRE(curve.log10_points.size() == 3);
    CHECK(curve.log10_points[0].first == 0.0);
    CHECK_THAT(curve.log10_points[0].second, Catch::Matchers::WithinRel(std::log10(0.5), 1e-13));
    CHECK_THAT(curve.log10_points[2].first, Catch::Matchers::WithinRel(std::log10(3.0), 1e-13));

    double total = 0.0;
    for (double w : curve.weights) total += w;
    CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
    for (std::size_t i = 0; i + 1 < curve.weights.size(); ++i)
        CHECK(curve.weights[i] >= curve.weights[i + 1]);

    CHECK_THROWS_AS(capital_curve(Composition{0, 0}), std::domain_error);
    CHECK_THROWS_AS(capital_curve(Composition{3, -1}), std::domain_error);
}

TEST_CASE("top-k truncation keeps full-market normalization") {
    const CapitalCurve curve = capital_curve(Composition{3, 1, 0, 4}, 2);
    REQUIRE(curve.weights.size() == 2);
    CHECK_THAT(curve.weights[0], Catch::Matchers::WithinRel(0.5, 1e-15));
    CHECK_THAT(curve.weights[1], Catch::Matchers::WithinRel(0.375, 1e-15));
    CHECK(curve.log10_points.size() == 2);
}

TEST_CASE("capital curve from a snapshot, ties stay in input order") {
    MarketSnapshot snap;
    snap.date_label = "demo";
    snap.entries = {{"AAA", 2.0}, {"BBB", 6.0}, {"CCC", 2.0}};
    const CapitalCurve curve = capital_curve(snap);
    CHECK_THAT(curve.weights[0], Catch::Matchers::WithinRel(0.6, 1e-15));
    CHECK_THAT(curve.weights[1], Catch::Matchers::WithinRel(0.2, 1e-15));
    CHECK_THAT(curve.weights[2], Catch::Matchers::WithinRel(0.2, 1e-15));

    MarketSnapshot bad;
    bad.entries = {{"AAA", std::numeric_limits<double>::infinity()}};
    CHECK_THROWS_AS(capital_curve(bad), std::domain_error);
}

TEST_CASE("curve is scale-invariant") {
    MarketSnapshot snap;
    snap.entries = {{"A", 1.25}, {"B", 7.5}, {"C", 0.5}, {"D", 3.0}};
    MarketSnapshot scaled = snap;
    for (auto& e : scaled.entries) e.market_cap *= 7.0;
    const CapitalCurve a = capital_curve(snap);
    const CapitalCurve b = capital_curve(scaled);
    REQUIRE(a.weights.size() == b.weights.size());
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        CHECK_THAT(a.weights[i], Catch::Matchers::WithinRel(b.weights[i], 1e-12));
}

TEST_CASE("kendall tau basics") {
    CHECK(kendall_tau({1, 2, 3}, {10, 20, 30}) == 1.0);
    CHECK(kendall_tau({1, 2, 3}, {30, 20, 10}) == -1.0);
    CHECK(kendall_tau({1, 1, 2}, {1, 1, 2}) == 1.0);  // tau-b with matching ties
    CHECK(kendall_tau({1, 2, 3, 4}, {1, 3, 2, 4}) > 0.0);
    CHECK_THROWS_AS(kendall_tau({1, 2}, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(kendall_tau({1}, {1}), std::domain_error);
    CHECK_THROWS_AS(kendall_tau({1, 1, 1}, {1, 2, 3}), std::domain_error);
}

TEST_CASE("stability between two states") {
    const StabilityStats same = stability_between({3, 2, 1}, {3, 2, 1});
    CHECK(same.max_weight_deviation == 0.0);
    CHECK(same.rank_correlation == 1.0);
    // scaled state: same weights, same ranking
    const StabilityStats scaled = stability_between({3, 2, 1}, {6, 4, 2});
    CHECK_THAT(scaled.max_weight_deviation, Catch::Matchers::WithinAbs(0.0, 1e-15));
    CHECK(scaled.rank_correlation == 1.0);
    const StabilityStats reversed = stability_between({3, 2, 1}, {1, 2, 3});
    CHECK(reversed.rank_correlation == -1.0);
    CHECK_THAT(reversed.max_weight_deviation, Catch::Matchers::WithinRel(2.0 / 6.0, 1e-14));
    CHECK_THROWS_AS(stability_between({0, 0}, {1, 1}), std::domain_error);
}

TEST_CASE("stability stats over a trajectory window") {
    Trajectory traj;
    traj.scenario = ScenarioConfig{ModelParams(1.0, 3), ScenarioMode::GrowthOnly, 30, 0, 0, 10, false};
    traj.records = {{10, StepKind::DownUp, {3, 2, 1}},
                    {20, StepKind::DownUp, {3, 2, 1}},
                    {30, StepKind::DownUp, {3, 2, 1}}};
    traj.terminal = {3, 2, 1};
    const StabilityReport constant = stability_stats(traj, 10, 30);
    CHECK(constant.max_weight_deviation == 0.0);
    CHECK(constant.per_stock_max_deviation == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(constant.rank_correlation == 1.0);

    traj.records[2].state = {1, 2, 3};
    traj.terminal = {1, 2, 3};
    const StabilityReport reversed = stability_stats(traj, 10, 30);
    CHECK(reversed.rank_correlation == -1.0);
    CHECK_THAT(reversed.max_weight_deviation, Catch::Matchers::WithinRel(2.0 / 6.0, 1e-14));

    // window selection: only the middle record
    const StabilityReport middle = stability_stats(traj, 15, 25);
    CHECK(middle.rank_correlation == 1.0);  // single record: start = end

    CHECK_THROWS_AS(stability_stats(traj, 31, 40), std::domain_error);
    CHECK_THROWS_AS(stability_stats(traj, 40, 31), std::invalid_argument);
}

TEST_CASE("max weight deviation over observed states") {
    const Composition reference{5, 5};
    CHECK(max_weight_deviation(reference, {{5, 5}, {50, 50}}) == 0.0);
    // (6,4) at level 10: weights (0.6,0.4) vs (0.5,0.5): deviation 0.1
    CHECK_THAT(max_weight_deviation(reference, {{6, 4}}),
               Catch::Matchers::WithinRel(0.1, 1e-14));
    CHECK_THROWS_AS(max_weight_deviation({0, 0}, {{1, 1}}), std::domain_error);
}

TEST_CASE("large-prior growth keeps rankings steady over the late window (frozen seeds)") {
    ScenarioConfig cfg;
    cfg.params = ModelParams(5.0, 20);
    cfg.mode = ScenarioMode::GrowthOnly;
    cfg.total_steps = 3000;
    std::vector<double> taus;
    for (std::uint64_t r = 0; r < 100; ++r) {
        cfg.seed = derive_stream_seed(90210, r);
        RngEngine rng = make_engine(cfg.seed);
        const Trajectory traj = run_growth(cfg, rng);
        taus.push_back(stability_stats(traj, 1500, 3000).rank_correlation);
    }
    // Calibrated: the median over 1000 seeds is 0.899 with 100-seed block
    // medians in [0.893, 0.903]; asserted with margin below that band.
    CHECK(testutil::median(taus) >= 0.85);
}
