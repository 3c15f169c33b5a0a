#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "teflow/errors.hpp"
#include "teflow/synthetic.hpp"

using namespace teflow;
using namespace teflow::test;
using namespace teflow::synth;

namespace {

double te_of(const AlignedPair& p, const BinningSpec& b, Direction d = Direction::XtoY) {
    const auto x = discretize(p.driver(), b);
    const auto y = discretize(p.target(), b);
    return d == Direction::XtoY ? transfer_entropy(x, y) : transfer_entropy(y, x);
}

double median_of(std::vector<double> v) { return median(v); }

}  // namespace

TEST_CASE("process specs parse and validate") {
    CHECK(std::get<Copy>(parse_process("copy:3")).lag == 3);
    const auto l = std::get<LinearCoupled>(parse_process("linear:0.5,2"));
    CHECK(l.a == 0.5);
    CHECK(l.sigma_eps == 2.0);
    CHECK(std::holds_alternative<Independent>(parse_process("independent")));
    CHECK(to_string(parse_process("threshold:2,0.1")) == "threshold:2,0.1");
    CHECK_THROWS_AS(parse_process("garch:1"), DomainError);
    CHECK_THROWS_AS(parse_process("copy:x"), DomainError);

    CHECK_THROWS_AS(generate({Independent{}, 99, 0}), DomainError);
    CHECK_THROWS_AS(generate({Copy{0}, 500, 0}), DomainError);
    CHECK_THROWS_AS(generate({LinearCoupled{1.0, 0.0}, 500, 0}), DomainError);
    CHECK_THROWS_AS(generate({ThresholdCoupled{1, 0.6}, 500, 0}), DomainError);
    CHECK_THROWS_AS(generate({ThresholdCoupled{1, -0.1}, 500, 0}), DomainError);
}

TEST_CASE("generate is deterministic and follows its definition") {
    const ProcessSpec spec{LinearCoupled{0.7, 0.5}, 300, 17};
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(std::ranges::equal(a.driver().values(), b.driver().values()));
    CHECK(std::ranges::equal(a.target().values(), b.target().values()));
    CHECK_FALSE(std::ranges::equal(a.driver().values(), generate({LinearCoupled{0.7, 0.5}, 300, 18}).driver().values()));
    CHECK(a.size() == 300);
    CHECK(format_date(a.dates().front()) == "2000-01-01");
    CHECK(a.driver().ticker() == "X");

    const auto c = generate({Copy{2}, 200, 3});
    for (std::size_t t = 2; t < 200; ++t) CHECK(c.target().values()[t] == c.driver().values()[t - 2]);

    const auto th = generate({ThresholdCoupled{1, 0.0}, 200, 4});
    for (std::size_t t = 1; t < 200; ++t) {
        CHECK(th.target().values()[t] == (th.driver().values()[t - 1] < 0.0 ? -1.0 : 1.0));
    }

    // the driver stream does not depend on the coupling
    const auto l1 = generate({LinearCoupled{0.2, 1.0}, 200, 9});
    const auto l2 = generate({LinearCoupled{2.0, 1.0}, 200, 9});
    CHECK(std::ranges::equal(l1.driver().values(), l2.driver().values()));
}

TEST_CASE("generated normals have unit moments") {
    const auto p = generate({Independent{}, 10'000, 1});
    const auto s = describe(p.driver());
    CHECK(std::abs(s.mean) < 0.05);
    CHECK(std::abs(s.std - 1.0) < 0.03);
    CHECK(std::abs(*s.excess_kurtosis) < 0.15);
}

TEST_CASE("copy process reaches the entropy of the alphabet") {
    const auto p = generate({Copy{1}, 10'000, 21});
    CHECK(std::abs(te_of(p, QuantileBinning{3}) - std::log2(3.0)) <= 0.02);
    CHECK(te_of(p, QuantileBinning{3}, Direction::YtoX) < 0.01);
}

TEST_CASE("independent processes carry no transfer") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto p = generate({Independent{}, 10'000, seed});
        CHECK(te_of(p, QuantileBinning{2}) < 0.005);
        CHECK(te_of(p, QuantileBinning{2}, Direction::YtoX) < 0.005);
    }
}

TEST_CASE("coupling outside the embedding is invisible") {
    std::vector<double> te;
    for (std::uint64_t seed = 0; seed < 50; ++seed) te.push_back(te_of(generate({Copy{3}, 5000, seed}), TailQuantileBinning{}));
    CHECK(median_of(te) < 0.01);
}

TEST_CASE("linear coupling is directional") {
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto p = generate({LinearCoupled{1.0, 1.0}, 5000, seed});
        if (te_of(p, QuantileBinning{2}) > te_of(p, QuantileBinning{2}, Direction::YtoX)) ++wins;
    }
    CHECK(wins >= 95);
}

TEST_CASE("brute_force_te") {
    Rng rng(31);
    SUBCASE("agrees with the estimator on random small instances") {
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const TeLags lags{static_cast<std::uint32_t>(1 + rng.below(2)), static_cast<std::uint32_t>(1 + rng.below(2)),
                              static_cast<std::uint32_t>(1 + rng.below(2))};
            const std::size_t n = 24 + rng.below(177);
            const auto x = random_symbols(rng, n, static_cast<std::uint32_t>(2 + rng.below(2)));
            const auto y = random_symbols(rng, n, static_cast<std::uint32_t>(2 + rng.below(2)));
            worst = std::max(worst, std::abs(transfer_entropy(x, y, lags) - brute_force_te(x, y, lags)));
        }
        CHECK(worst <= 1e-12);
    }
    SUBCASE("point-mass driver") {
        const SymbolicSeries x(std::vector<Symbol>(100, 0), 2);
        const auto y = random_symbols(rng, 100, 3);
        CHECK(std::abs(brute_force_te(x, y)) < 1e-15);
    }
    SUBCASE("limits") {
        const auto x = random_symbols(rng, 10'001, 2);
        CHECK_THROWS_AS(brute_force_te(x, x), LengthError);
        CHECK_THROWS_AS(brute_force_te(x, random_symbols(rng, 50, 2)), LengthError);
    }
}
