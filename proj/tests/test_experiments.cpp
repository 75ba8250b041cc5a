#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icalab/experiments.hpp"

using namespace icalab;

TEST_CASE("power-law fit recovers a planted -0.5 exponent exactly") {
    std::vector<double> ns = {500, 1000, 2000, 5000, 10000};
    std::vector<double> eps;
    for (const auto n : ns) eps.push_back(3.0 / std::sqrt(n));
    const FitSummary fit = fit_power_law(ns, eps);
    CHECK(std::abs(fit.slope - (-0.5)) < 1e-10);
    CHECK(std::abs(fit.r2 - 1.0) < 1e-10);
    CHECK(std::abs(std::exp(fit.intercept) - 3.0) < 1e-9);
    for (const auto r : fit.residuals) CHECK(std::abs(r) < 1e-10);
}

TEST_CASE("linear fit recovers a planted line with residuals") {
    const FitSummary fit = fit_linear({1, 2, 3, 4}, {3, 5, 7, 9}, "linear");
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.residuals.size() == 4);
}

TEST_CASE("min_n_for_target inverts a planted 1/sqrt(n) law") {
    const EpsEvaluator eval = [](std::size_t n, std::size_t) {
        return 1.0 / std::sqrt(static_cast<double>(n));
    };
    const auto n = min_n_for_target(eval, 0.1, 10, 10000, 0.05, 1);
    REQUIRE(n.has_value());
    // True crossing at n = 100; grid resolution is 5%.
    CHECK(static_cast<double>(*n) >= 100.0 * 0.95);
    CHECK(static_cast<double>(*n) <= 100.0 * 1.10);
}

TEST_CASE("min_n_for_target boundary cases") {
    const EpsEvaluator eval = [](std::size_t n, std::size_t) {
        return 1.0 / std::sqrt(static_cast<double>(n));
    };
    // Target 1.0 is satisfied everywhere: the lower bound wins.
    const auto lo = min_n_for_target(eval, 1.0, 7, 10000, 0.05, 1);
    REQUIRE(lo.has_value());
    CHECK(*lo == 7);
    // Unreachable target.
    const auto none = min_n_for_target(eval, 1e-6, 10, 10000, 0.05, 1);
    CHECK(!none.has_value());
}

TEST_CASE("min_n_for_target handles a noisy non-monotone evaluator") {
    // Planted crossing at n = 2000 with deterministic seed-dependent wiggle.
    const EpsEvaluator eval = [](std::size_t n, std::size_t seed) {
        const double base = 0.1 * std::sqrt(2000.0 / static_cast<double>(n));
        Rng rng(static_cast<std::uint64_t>(n) * 1000 + seed);
        return base * (1.0 + 0.02 * rng.normal());
    };
    const auto n = min_n_for_target(eval, 0.1, 100, 100000, 0.05, 5);
    REQUIRE(n.has_value());
    CHECK(static_cast<double>(*n) >= 2000.0 * 0.90);
    CHECK(static_cast<double>(*n) <= 2000.0 * 1.12);
}

TEST_CASE("min_n_for_target is monotone in the target") {
    const EpsEvaluator eval = [](std::size_t n, std::size_t) {
        return 1.0 / std::sqrt(static_cast<double>(n));
    };
    std::size_t prev = 0;
    for (const double target : {0.5, 0.2, 0.1, 0.05}) {
        const auto n = min_n_for_target(eval, target, 2, 1000000, 0.05, 1);
        REQUIRE(n.has_value());
        CHECK(*n >= prev);  // stricter target never returns smaller n
        prev = *n;
    }
}

TEST_CASE("planted dimension oracle yields slope 50000 with perfect fit") {
    // eps(n) = 5000 d / n crosses 0.1 at n = 50000 d.
    std::vector<double> ds = {2, 4, 6, 8};
    std::vector<double> min_ns;
    for (const auto d : ds) {
        const EpsEvaluator eval = [d](std::size_t n, std::size_t) {
            return 5000.0 * d / static_cast<double>(n);
        };
        const auto n = min_n_for_target(eval, 0.1, 1000, 1000000, 0.001, 1);
        REQUIRE(n.has_value());
        min_ns.push_back(static_cast<double>(*n));
    }
    const FitSummary fit = fit_linear(ds, min_ns, "linear");
    CHECK(std::abs(fit.slope - 50000.0) / 50000.0 < 0.01);
    CHECK(fit.r2 > 0.999);
}

TEST_CASE("planted diversity law gives a line through the origin in 1/delta") {
    // eps(n, delta) = c / sqrt(n delta) crosses target at n = (c/target)^2 / delta.
    const double c = 3.0;
    std::vector<double> inv_deltas, min_ns;
    for (const double delta : {0.5, 1.0, 2.0, 4.0}) {
        const EpsEvaluator eval = [c, delta](std::size_t n, std::size_t) {
            return c / std::sqrt(static_cast<double>(n) * delta);
        };
        const auto n = min_n_for_target(eval, 0.1, 10, 10000000, 0.001, 1);
        REQUIRE(n.has_value());
        inv_deltas.push_back(1.0 / delta);
        min_ns.push_back(static_cast<double>(*n));
    }
    const FitSummary fit = fit_linear(inv_deltas, min_ns, "inverse");
    const double expect_slope = (c / 0.1) * (c / 0.1);
    CHECK(std::abs(fit.slope - expect_slope) / expect_slope < 0.01);
    CHECK(std::abs(fit.intercept) < 0.01 * expect_slope);
    CHECK(fit.r2 > 0.999);
}

TEST_CASE("calibrate_constant recovers a planted constant exactly") {
    const std::size_t d = 10;
    const double delta = 1.0, conf = 0.05;
    const double scale = std::sqrt(static_cast<double>(d) + std::log(1.0 / conf));
    std::vector<std::pair<std::size_t, double>> grid;
    for (const std::size_t n : {500u, 1000u, 2000u, 5000u, 10000u})
        grid.emplace_back(n, 2.0 * scale / std::sqrt(static_cast<double>(n) * delta));
    const CalibrationResult res = calibrate_constant(d, delta, conf, grid, 200);
    CHECK(std::abs(res.c_hat - 2.0) < 1e-10);
    CHECK(res.c_practical == 2.0 * res.c_hat);
    CHECK(std::abs(res.c_practical - 4.0) < 1e-9);
    CHECK(res.ci_lo <= res.c_hat);
    CHECK(res.c_hat <= res.ci_hi);
}

TEST_CASE("calibrate_constant is equivariant under scaling the errors") {
    const std::size_t d = 5;
    std::vector<std::pair<std::size_t, double>> grid, scaled;
    Rng rng(3);
    for (const std::size_t n : {400u, 900u, 1600u, 4000u}) {
        const double e = (1.0 + 0.1 * rng.normal()) / std::sqrt(static_cast<double>(n));
        grid.emplace_back(n, e);
        scaled.emplace_back(n, 3.0 * e);
    }
    const CalibrationResult a = calibrate_constant(d, 1.0, 0.05, grid, 50);
    const CalibrationResult b = calibrate_constant(d, 1.0, 0.05, scaled, 50);
    CHECK(b.c_hat == doctest::Approx(3.0 * a.c_hat).epsilon(1e-12));
}

TEST_CASE("calibrate_constant input validation") {
    std::vector<std::pair<std::size_t, double>> two = {{100, 0.1}, {200, 0.08}};
    CHECK_THROWS_AS(calibrate_constant(10, 1.0, 0.05, two, 100), ParameterError);
    std::vector<std::pair<std::size_t, double>> bad = {{100, 0.1}, {200, 0.0}, {400, 0.05}};
    CHECK_THROWS_AS(calibrate_constant(10, 1.0, 0.05, bad, 100), ParameterError);
}

TEST_CASE("bootstrap CI covers a noisy planted constant in most meta-repetitions") {
    const std::size_t d = 10;
    const double delta = 1.0, conf = 0.05;
    const double scale = std::sqrt(static_cast<double>(d) + std::log(1.0 / conf));
    std::size_t covered = 0;
    const int reps = 50;
    Rng meta(2024);
    for (int r = 0; r < reps; ++r) {
        std::vector<std::pair<std::size_t, double>> grid;
        for (const std::size_t n : {500u, 700u, 1000u, 1400u, 2000u, 2800u, 4000u, 5600u,
                                    8000u, 11000u, 16000u, 22000u}) {
            const double noise = 1.0 + 0.05 * meta.normal();
            grid.emplace_back(n,
                              2.0 * noise * scale / std::sqrt(static_cast<double>(n) * delta));
        }
        const CalibrationResult res =
            calibrate_constant(d, delta, conf, grid, 1000, 100 + r);
        if (res.ci_lo <= 2.0 && 2.0 <= res.ci_hi) ++covered;
    }
    CHECK(covered >= 45);  // >= 90% of 50
}

TEST_CASE("plan_sample_size matches the planning rule") {
    CHECK(plan_sample_size(10, 1.0, 0.10) == 5000);
    CHECK(plan_sample_size(10, 1.0, 0.05) == 20000);
    CHECK(plan_sample_size(20, 2.0, 0.10) == 5000);
}

TEST_CASE("seed means of a scaling run") {
    ScalingRun run;
    run.eps = {{0.1, 0.2}, {0.3, 0.5}};
    const auto m = run.seed_means();
    CHECK(m[0] == doctest::Approx(0.15));
    CHECK(m[1] == doctest::Approx(0.4));
}
