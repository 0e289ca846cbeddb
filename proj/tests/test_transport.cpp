// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rtprune/parallel.hpp"
#include "rtprune/transport.hpp"

using namespace rtprune;
using namespace rtprune::transport;

namespace {

tokens::SelectionResult partition(std::vector<std::size_t> kept, std::vector<std::size_t> pruned) {
    tokens::SelectionResult sel;
    sel.kept_count = kept.size();
    sel.kept_indices = std::move(kept);
    sel.pruned_indices = std::move(pruned);
    return sel;
}

AugmentedScoreMatrix random_scores(std::mt19937_64& rng, std::size_t m, std::size_t p, double z) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScoreMatrix s{Matrix<double>(m, p)};
    for (auto& v : s.values.data()) {
        v = dist(rng);
    }
    return augment(s, z);
}

// Marginals of the augmented plan summed in long double.
struct Marginals {
    double col_error = 0.0;
    double row_error = 0.0;
};

Marginals marginal_errors(const TransportPlan& plan, std::size_t m, std::size_t p) {
    Marginals out;
    const auto& a = plan.augmented;
    for (std::size_t i = 0; i <= m; ++i) {
        long double row = 0.0L;
        for (std::size_t j = 0; j <= p; ++j) {
            row += a(i, j);
        }
        const long double target = i < m ? 1.0L : static_cast<long double>(p);
        out.row_error = std::max(out.row_error, static_cast<double>(std::fabs(row - target)));
    }
    for (std::size_t j = 0; j <= p; ++j) {
        long double col = 0.0L;
        for (std::size_t i = 0; i <= m; ++i) {
            col += a(i, j);
        }
        const long double target = j < p ? 1.0L : static_cast<long double>(m);
        out.col_error = std::max(out.col_error, static_cast<double>(std::fabs(col - target)));
    }
    return out;
}

}  // namespace

TEST_CASE("build_scores examples") {
    SUBCASE("identical") {
        const TokenMatrix t(2, 2, {1, 0, 1, 0});
        CHECK(build_scores(t, partition({0}, {1})).values(0, 0) == 1.0);
    }
    SUBCASE("orthogonal") {
        const TokenMatrix t(2, 2, {1, 0, 0, 1});
        CHECK(build_scores(t, partition({0}, {1})).values(0, 0) == 0.0);
    }
    SUBCASE("3-4-5") {
        const TokenMatrix t(3, 2, {3, 4, 4, 3, 0, 5});
        const auto s = build_scores(t, partition({0}, {1, 2}));
        REQUIRE(s.values.rows() == 1);
        REQUIRE(s.values.cols() == 2);
        CHECK(s.values(0, 0) == doctest::Approx(0.96).epsilon(1e-15));
        CHECK(s.values(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    }
    SUBCASE("zero token scores 0") {
        const TokenMatrix t(2, 2, {1, 0, 0, 0});
        CHECK(build_scores(t, partition({0}, {1})).values(0, 0) == 0.0);
    }
    SUBCASE("empty prune set") {
        const TokenMatrix t(2, 2, {1, 0, 0, 1});
        try {
            build_scores(t, partition({0, 1}, {}));
            FAIL("expected EmptyPruneSet");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyPruneSet);
        }
    }
}

TEST_CASE("augment examples") {
    const auto a = augment(ScoreMatrix{Matrix<double>(1, 1, 0.5)}, 0.2);
    CHECK(a.values == Matrix<double>(2, 2, {0.5, 0.2, 0.2, 0.2}));

    const auto b = augment(ScoreMatrix{Matrix<double>(2, 3, {1, 2, 3, 4, 5, 6})}, 0.0);
    CHECK(b.values == Matrix<double>(3, 4, {1, 2, 3, 0, 4, 5, 6, 0, 0, 0, 0, 0}));
    CHECK(b.kept() == 2);
    CHECK(b.pruned() == 3);

    const auto c = augment(ScoreMatrix{Matrix<double>(1, 1, 1.0)}, 1.0);
    CHECK(c.values == Matrix<double>(2, 2, 1.0));
}

TEST_CASE("sinkhorn on a fully symmetric 1x1 problem gives one half everywhere") {
    const auto plan = sinkhorn(augment(ScoreMatrix{Matrix<double>(1, 1, 0.3)}, 0.3), SinkhornConfig{});
    REQUIRE(plan.plan.rows() == 1);
    REQUIRE(plan.plan.cols() == 1);
    for (const double v : plan.augmented.data()) {
        CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
    }
    CHECK(plan.row_mass[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(plan.iterations == 100);
}

TEST_CASE("sinkhorn at low temperature recovers the identity matching") {
    SinkhornConfig cfg;
    cfg.temperature = 0.01;
    cfg.dustbin = 0.0;
    const auto plan = sinkhorn(augment(ScoreMatrix{Matrix<double>(2, 2, {1, 0, 0, 1})}, 0.0), cfg);
    CHECK(plan.plan(0, 0) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(plan.plan(1, 1) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(plan.plan(0, 1) <= 1e-3);
    CHECK(plan.plan(1, 0) <= 1e-3);
}

TEST_CASE("sinkhorn marginals on random instances") {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 1 + rng() % 12;
        const std::size_t p = 1 + rng() % 30;
        const auto plan = sinkhorn(random_scores(rng, m, p, 0.2), SinkhornConfig{});
        const auto err = marginal_errors(plan, m, p);
        CHECK(err.col_error <= 1e-12);
        CHECK(err.row_error <= 1e-6);
        CHECK(plan.converged_residual >= err.row_error * 0.5 - 1e-15);
        CHECK(plan.converged_residual <= 1e-6);
        for (const double v : plan.augmented.data()) {
            CHECK(v > 0.0);
        }
        for (const double v : plan.plan.data()) {
            CHECK(v <= 1.0);
        }
    }
    // The concrete 3x5 example.
    std::mt19937_64 fixed(35);
    const auto plan = sinkhorn(random_scores(fixed, 3, 5, 0.2), SinkhornConfig{});
    const auto err = marginal_errors(plan, 3, 5);
    CHECK(err.col_error <= 1e-12);
    CHECK(err.row_error <= 1e-6);
}

// Once converged the residual is rounding noise; differences below this are not a trend.
constexpr double kResidualFloor = 1e-13;

TEST_CASE("sinkhorn residual does not grow with more iterations") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 1 + rng() % 10;
        const std::size_t p = 1 + rng() % 20;
        const auto scores = random_scores(rng, m, p, 0.2);
        SinkhornConfig cfg;
        double previous = std::numeric_limits<double>::infinity();
        for (const std::size_t t : {1, 10, 100}) {
            cfg.iterations = t;
            const double residual = sinkhorn(scores, cfg).converged_residual;
            CHECK(residual <= previous + kResidualFloor);
            previous = residual;
        }
    }
}

TEST_CASE("early exit stays within its tolerance of the fixed-iteration plan") {
    std::mt19937_64 rng(12);
    const auto scores = random_scores(rng, 6, 9, 0.2);
    SinkhornConfig full;
    SinkhornConfig early;
    early.early_exit_tolerance = 1e-9;
    const auto a = sinkhorn(scores, full);
    const auto b = sinkhorn(scores, early);
    CHECK(b.iterations <= a.iterations);
    for (std::size_t i = 0; i < a.plan.data().size(); ++i) {
        CHECK(std::abs(a.plan.data()[i] - b.plan.data()[i]) <= 1e-9);
    }
}

TEST_CASE("permuting pruned tokens permutes plan columns") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t m = 1 + rng() % 6;
        const std::size_t p = 1 + rng() % 6;
        const auto scores = random_scores(rng, m, p, 0.2);
        std::vector<std::size_t> perm(p);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);

        ScoreMatrix permuted{Matrix<double>(m, p)};
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                permuted.values(i, j) = scores.values(i, perm[j]);
            }
        }
        const auto base = sinkhorn(scores, SinkhornConfig{});
        const auto moved = sinkhorn(augment(permuted, 0.2), SinkhornConfig{});
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                CHECK(moved.plan(i, j) == doctest::Approx(base.plan(i, perm[j])).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("low-temperature plans follow the exhaustive dustbin matching") {
    std::mt19937_64 rng(77);
    SinkhornConfig cfg;
    cfg.temperature = 0.01;
    int checked = 0;
    while (checked < 40) {
        const std::size_t m = 1 + rng() % 4;
        const std::size_t p = 1 + rng() % 4;
        const auto scores = random_scores(rng, m, p, cfg.dustbin);
        std::vector<double> flat;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                flat.push_back(scores.values(i, j));
            }
        }
        double best = 0.0;
        double runner_up = 0.0;
        const auto expected = testing::dustbin_assignment_oracle(flat, m, p, cfg.dustbin, &best, &runner_up);
        // Near-ties smear the entropic plan across both matchings.
        if (best - runner_up < 5.0 * cfg.temperature) {
            continue;
        }
        const auto plan = sinkhorn(scores, cfg);
        for (std::size_t i = 0; i < m; ++i) {
            const auto row = plan.augmented.row(i);
            const auto argmax = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
            CHECK(argmax == expected[i]);
        }
        ++checked;
    }
}

TEST_CASE("sinkhorn rejects bad configs and inputs") {
    const auto scores = augment(ScoreMatrix{Matrix<double>(1, 1, 0.5)}, 0.2);
    SinkhornConfig cfg;
    cfg.iterations = 0;
    CHECK_THROWS_AS(sinkhorn(scores, cfg), Error);
    cfg = SinkhornConfig{};
    cfg.temperature = 0.0;
    CHECK_THROWS_AS(sinkhorn(scores, cfg), Error);
    auto bad = scores;
    bad.values(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(sinkhorn(bad, SinkhornConfig{}), Error);
}

TEST_CASE("sinkhorn reports overflow as NumericalFailure") {
    SinkhornConfig cfg;
    cfg.temperature = 1e-320;
    try {
        sinkhorn(augment(ScoreMatrix{Matrix<double>(1, 2, {1.0, -1.0})}, 0.5), cfg);
        FAIL("expected NumericalFailure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NumericalFailure);
    }
}

TEST_CASE("sinkhorn is independent of the worker count") {
    std::mt19937_64 rng(4);
    const auto scores = random_scores(rng, 64, 192, 0.2);
    set_thread_limit(1);
    const auto one = sinkhorn(scores, SinkhornConfig{});
    set_thread_limit(4);
    const auto four = sinkhorn(scores, SinkhornConfig{});
    set_thread_limit(0);
    CHECK(one.augmented == four.augmented);
    CHECK(one.converged_residual == four.converged_residual);
}

TEST_CASE("merge examples") {
    SUBCASE("single pruned token") {
        const TokenMatrix t(2, 2, {1, 0, 0, 2});
        TransportPlan plan;
        plan.plan = Matrix<double>(1, 1, 1.0);
        const auto out = merge(t, partition({0}, {1}), plan, 0.1);
        CHECK(out.count() == 1);
        CHECK(out.row(0)[0] == 1.0f);
        CHECK(out.row(0)[1] == doctest::Approx(0.2).epsilon(1e-7));
    }
    SUBCASE("two pruned tokens split evenly") {
        const TokenMatrix t(3, 2, {1, 0, 0, 1, 0, 3});
        TransportPlan plan;
        plan.plan = Matrix<double>(1, 2, {0.5, 0.5});
        const auto out = merge(t, partition({0}, {1, 2}), plan, 0.1);
        CHECK(out.row(0)[0] == 1.0f);
        CHECK(out.row(0)[1] == doctest::Approx(0.2).epsilon(1e-7));
    }
    SUBCASE("alpha zero is the identity, negative zero included") {
        const TokenMatrix t(3, 2, {-0.0f, 1.5f, 7, 8, 2, -3});
        TransportPlan plan;
        plan.plan = Matrix<double>(2, 1, {0.7, 0.3});
        const auto out = merge(t, partition({0, 2}, {1}), plan, 0.0);
        CHECK(std::signbit(out.row(0)[0]));
        CHECK(out == TokenMatrix(2, 2, {-0.0f, 1.5f, 2, -3}));
    }
    SUBCASE("input rows are untouched") {
        const TokenMatrix t(2, 2, {1, 0, 0, 2});
        const TokenMatrix copy = t;
        TransportPlan plan;
        plan.plan = Matrix<double>(1, 1, 1.0);
        merge(t, partition({0}, {1}), plan, 0.5);
        CHECK(t == copy);
    }
    SUBCASE("shape mismatch") {
        const TokenMatrix t(2, 2, {1, 0, 0, 2});
        TransportPlan plan;
        plan.plan = Matrix<double>(2, 1, 1.0);
        CHECK_THROWS_AS(merge(t, partition({0}, {1}), plan, 0.1), Error);
        plan.plan = Matrix<double>(1, 1, 1.0);
        CHECK_THROWS_AS(merge(t, partition({0}, {1}), plan, -0.1), Error);
    }
}
