// Copyright 2026 The amdriver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "amdriver/model.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace amdriver;

namespace {

InstructionArray arr(const char *bits) { return InstructionArray::parse(bits); }

const PayoffSchedule kDriver{{0.0, 4.0}, 1.0};

} // namespace

TEST_CASE("instruction arrays read left to right as the most significant bit") {
    CHECK(arr("01").code() == 1);
    CHECK(arr("10").code() == 2);
    CHECK(arr("110").code() == 6);
    CHECK(InstructionArray::from_code(5, 3).to_string() == "101");

    const int bits[] = {0, 1, 1};
    CHECK(InstructionArray::from_bits(bits) == arr("011"));

    CHECK_FALSE(arr("000").first_exit().has_value());
    CHECK(arr("011").first_exit() == 1);
    CHECK(arr("100").first_exit() == 0);
    CHECK(arr("0001").first_exit() == 3);

    CHECK(arr("001").complement() == arr("110"));
    CHECK(arr("010").with_flipped(2) == arr("011"));
    CHECK(hamming_distance(arr("011"), arr("100")) == 3);

    CHECK_THROWS_AS(arr("012"), DomainError);
    CHECK_THROWS_AS(arr(""), DimensionError);
    CHECK_THROWS_AS(InstructionArray::from_code(8, 3), DomainError);
    CHECK_THROWS_AS(hamming_distance(arr("01"), arr("010")), DimensionError);
}

TEST_CASE("payoff schedules reject negative or non-finite payoffs") {
    CHECK_THROWS_AS(PayoffSchedule({0.0, -1.0}, 1.0), DomainError);
    CHECK_THROWS_AS(PayoffSchedule({0.0, 4.0}, std::nan("")), DomainError);
    CHECK_THROWS_AS(PayoffSchedule({0.0, INFINITY}, 1.0), DomainError);
    CHECK_THROWS_AS(PayoffSchedule({}, 1.0), DimensionError);
}

TEST_CASE("strategy distributions are validated and kept sparse") {
    StrategyDistribution d(2, {{arr("10"), 0.5}, {arr("11"), 0.0}, {arr("01"), 0.5}});
    CHECK(d.support_size() == 2);
    CHECK(d.entries()[0].first == arr("01"));
    CHECK(d.weight(arr("11")) == 0.0);
    CHECK(d.weight(arr("10")) == 0.5);

    CHECK_THROWS_AS(StrategyDistribution(2, {{arr("01"), 0.6}}), DomainError);
    CHECK_THROWS_AS(StrategyDistribution(2, {{arr("01"), 0.5}, {arr("01"), 0.5}}),
                    DomainError);
    CHECK_THROWS_AS(StrategyDistribution(2, {{arr("01"), 1.5}, {arr("10"), -0.5}}),
                    DomainError);
    CHECK_THROWS_AS(StrategyDistribution(3, {{arr("01"), 1.0}}), DimensionError);
}

TEST_CASE("payoff_of_array is decided by the first exit") {
    CHECK(payoff_of_array(arr("01"), kDriver) == 4.0);
    CHECK(payoff_of_array(arr("00"), kDriver) == 1.0);
    CHECK(payoff_of_array(arr("11"), kDriver) == 0.0);
    CHECK(payoff_of_array(arr("011"), PayoffSchedule({0.0, 5.0, 4.0}, 1.0)) == 5.0);
    CHECK_THROWS_AS(payoff_of_array(arr("011"), kDriver), DimensionError);
}

TEST_CASE("expected_payoff examples") {
    CHECK(expected_payoff(StrategyDistribution(2, {{arr("01"), 0.5}, {arr("10"), 0.5}}),
                          kDriver) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(expected_payoff(StrategyDistribution::point(arr("00")), kDriver) == 1.0);
    const StrategyDistribution w(3, {{arr("001"), 1.0 / 3}, {arr("010"), 1.0 / 3},
                                     {arr("100"), 1.0 / 3}});
    CHECK(expected_payoff(w, PayoffSchedule({0.0, 5.0, 4.0}, 1.0)) ==
          doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(expected_payoff(w, kDriver), DimensionError);
}

TEST_CASE("deterministic_optimum") {
    auto d = deterministic_optimum(kDriver);
    CHECK(d.payoff == 1.0);
    CHECK(d.action == DeterministicAction::AlwaysContinue);

    d = deterministic_optimum(PayoffSchedule({3.0, 4.0}, 1.0));
    CHECK(d.payoff == 3.0);
    CHECK(d.action == DeterministicAction::AlwaysExit);

    // Tie goes to continuing.
    d = deterministic_optimum(PayoffSchedule({2.0, 0.0}, 2.0));
    CHECK(d.action == DeterministicAction::AlwaysContinue);

    // Oracle: evaluate both point masses directly.
    for (double n : {0.0, 0.5, 2.0, 8.0, 100.0}) {
        const PayoffSchedule s({0.0, n, 4.0}, 1.0);
        const double cont = expected_payoff(StrategyDistribution::point(arr("000")), s);
        const double exit = expected_payoff(StrategyDistribution::point(arr("111")), s);
        d = deterministic_optimum(s);
        CHECK(d.payoff == std::max(cont, exit));
        CHECK(d.payoff == 1.0);
        CHECK(d.action == DeterministicAction::AlwaysContinue);
    }
}

TEST_CASE("probabilistic_payoff") {
    CHECK(probabilistic_payoff(2.0 / 3.0, kDriver) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(probabilistic_payoff(1.0, kDriver) == 1.0);
    CHECK(probabilistic_payoff(0.0, kDriver) == 0.0);
    CHECK(probabilistic_payoff(0.5, kDriver) ==
          doctest::Approx(testing::exhaustive_iid_payoff(0.5, {0.0, 4.0}, 1.0)).epsilon(1e-15));
    CHECK(testing::exhaustive_iid_payoff(0.5, {0.0, 4.0}, 1.0) == doctest::Approx(1.25));
    CHECK_THROWS_AS(probabilistic_payoff(-0.1, kDriver), DomainError);
    CHECK_THROWS_AS(probabilistic_payoff(1.5, kDriver), DomainError);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = testing::random_schedule(rng, 1 + trial % 5);
        CHECK(probabilistic_payoff(1.0, s) == s.motel_payoff());
        CHECK(probabilistic_payoff(0.0, s) == s.exit_payoff(0));
    }
}

TEST_CASE("probabilistic_optimum on the two-intersection driver") {
    const auto opt = probabilistic_optimum(kDriver);
    CHECK(std::abs(opt.p_star - 2.0 / 3.0) <= 1e-9);
    CHECK(std::abs(opt.payoff - 4.0 / 3.0) <= 1e-9);
}

TEST_CASE("probabilistic_optimum at an endpoint") {
    const auto opt = probabilistic_optimum(PayoffSchedule({5.0, 0.0}, 0.0));
    CHECK(opt.p_star == 0.0);
    CHECK(opt.payoff == 5.0);

    const auto motel = probabilistic_optimum(PayoffSchedule({0.0, 0.0}, 3.0));
    CHECK(motel.p_star == 1.0);
    CHECK(motel.payoff == 3.0);

    const auto flat = probabilistic_optimum(PayoffSchedule({0.0, 0.0}, 0.0));
    CHECK(flat.p_star == 0.0);
    CHECK(flat.payoff == 0.0);
}

TEST_CASE("probabilistic_optimum matches a dense grid for r=(0,0,4), motel 1") {
    const PayoffSchedule s({0.0, 0.0, 4.0}, 1.0);
    const auto grid = testing::dense_grid_max(
        [](double p) { return testing::exhaustive_iid_payoff(p, {0.0, 0.0, 4.0}, 1.0); });
    // f'(p) = 8p - 9p^2 vanishes at 8/9, f(8/9) = 768/729.
    CHECK(std::abs(grid.argmax - 8.0 / 9.0) <= 1e-6);
    CHECK(std::abs(grid.value - 768.0 / 729.0) <= 1e-11);

    const auto opt = probabilistic_optimum(s);
    CHECK(std::abs(opt.p_star - 8.0 / 9.0) <= 1e-9);
    CHECK(std::abs(opt.payoff - 768.0 / 729.0) <= 1e-12);
}

TEST_CASE("probabilistic_optimum never loses to a dense grid") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 6;
        const auto s = testing::random_schedule(rng, n);
        const std::vector<double> exits(s.exit_payoffs().begin(), s.exit_payoffs().end());
        const auto grid = testing::dense_grid_max(
            [&](double p) { return testing::exhaustive_iid_payoff(p, exits, s.motel_payoff()); },
            100'000);
        const auto opt = probabilistic_optimum(s);
        CHECK(opt.payoff >= grid.value - 1e-12);
        CHECK(opt.payoff == doctest::Approx(probabilistic_payoff(opt.p_star, s)));
        CHECK(opt.payoff >= deterministic_optimum(s).payoff);
    }
}

TEST_CASE("iid_distribution") {
    const auto uniform = iid_distribution(0.5, 2);
    CHECK(uniform.support_size() == 4);
    for (const auto &[v, w] : uniform.entries()) {
        CHECK(w == 0.25);
    }

    // Oracle: enumerate the four arrays and multiply per-site probabilities.
    const double p = 2.0 / 3.0;
    const auto d = iid_distribution(p, 2);
    for (std::uint32_t code = 0; code < 4; ++code) {
        double expected = 1.0;
        for (int i = 0; i < 2; ++i) {
            expected *= testing::bit_of(code, 2, i) == 0 ? p : 1.0 - p;
        }
        CHECK(d.weight(InstructionArray::from_code(code, 2)) ==
              doctest::Approx(expected).epsilon(1e-15));
    }
    CHECK(d.weight(arr("00")) == doctest::Approx(4.0 / 9.0));
    CHECK(d.weight(arr("11")) == doctest::Approx(1.0 / 9.0));

    const auto det = iid_distribution(1.0, 3);
    CHECK(det.support_size() == 1);
    CHECK(det.weight(arr("000")) == 1.0);

    CHECK_THROWS_AS(iid_distribution(1.01, 2), DomainError);
}

TEST_CASE("property: expected_payoff is linear under mixing") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 4;
        const auto s = testing::random_schedule(rng, n);
        const auto d1 = iid_distribution(unif(rng), n);
        const auto d2 = StrategyDistribution::point(
            InstructionArray::from_code(static_cast<std::uint32_t>(rng() % (1U << n)), n));
        const double lambda = unif(rng);
        const double mixed = expected_payoff(mix(d1, d2, lambda), s);
        const double split =
            lambda * expected_payoff(d1, s) + (1.0 - lambda) * expected_payoff(d2, s);
        CHECK(std::abs(mixed - split) <= 1e-12 * std::max(1.0, std::abs(split)));
    }
}

TEST_CASE("property: closed-form coin payoff equals the payoff of the i.i.d. distribution") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 6;
        const auto s = testing::random_schedule(rng, n);
        const double p = unif(rng);
        CHECK(std::abs(probabilistic_payoff(p, s) - expected_payoff(iid_distribution(p, n), s)) <=
              1e-12 * 10.0);
    }
}

TEST_CASE("property: bits after the first exit never matter") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        const auto s = testing::random_schedule(rng, n);
        const auto v =
            InstructionArray::from_code(static_cast<std::uint32_t>(rng() % (1U << n)), n);
        const auto first = v.first_exit();
        if (!first) {
            continue;
        }
        for (int i = *first + 1; i < n; ++i) {
            CHECK(payoff_of_array(v.with_flipped(i), s) == payoff_of_array(v, s));
        }
    }
}

TEST_CASE("property: i.i.d. distributions have equal exit marginals 1 - p") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 6;
        const double p = unif(rng);
        for (double u : iid_distribution(p, n).exit_marginals()) {
            CHECK(std::abs(u - (1.0 - p)) <= 1e-12);
        }
    }
}
