#include <doctest.h>

#include "helpers.hpp"
#include "teflow/errors.hpp"
#include "teflow/rolling.hpp"
#include "teflow/synthetic.hpp"

using namespace teflow;
using namespace teflow::test;

namespace {

AlignedPair noise_pair(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    auto x = normal_draws(rng, n, 0.02);
    auto y = normal_draws(rng, n, 0.02);
    return pair_of(std::move(x), std::move(y));
}

RollingConfig small_config() {
    RollingConfig c;
    c.window = 100;
    c.n_shuffles = 100;
    c.seed = 5;
    return c;
}

}  // namespace

TEST_CASE("window_count") {
    CHECK(window_count(252, 252, 1) == 1);
    CHECK(window_count(262, 252, 5) == 3);
    CHECK(window_count(251, 252, 1) == 0);
    CHECK_THROWS_AS(window_count(300, 252, 0), DomainError);
    for (std::size_t window = 100; window <= 130; window += 3) {
        for (std::size_t stride = 1; stride <= 9; ++stride) {
            for (std::size_t length = window; length <= window + 40; ++length) {
                std::size_t brute = 0;
                for (std::size_t start = 0; start + window <= length; start += stride) ++brute;
                REQUIRE(window_count(length, window, stride) == brute);
            }
        }
    }
}

TEST_CASE("rolling_te window placement") {
    auto cfg = small_config();
    SUBCASE("window equal to the series") {
        const auto pair = noise_pair(1, 252);
        cfg.window = 252;
        const auto [xy, yx] = rolling_te(pair, cfg);
        REQUIRE(xy.windows.size() == 1);
        CHECK(xy.windows[0].end_date == pair.dates().back());
        CHECK(yx.direction == Direction::YtoX);
    }
    SUBCASE("stride 5 over 262 observations") {
        const auto pair = noise_pair(2, 262);
        cfg.window = 252;
        cfg.stride = 5;
        const auto [xy, yx] = rolling_te(pair, cfg);
        REQUIRE(xy.windows.size() == 3);
        REQUIRE(yx.windows.size() == 3);
        CHECK(xy.windows[0].end_date == pair.dates()[251]);
        CHECK(xy.windows[1].end_date == pair.dates()[256]);
        CHECK(xy.windows[2].end_date == pair.dates()[261]);
        CHECK(xy.window_length == 252);
        CHECK(xy.stride == 5);
    }
    SUBCASE("each window matches a standalone shuffle test") {
        const auto pair = noise_pair(3, 130);
        cfg.stride = 10;
        const auto [xy, yx] = rolling_te(pair, cfg);
        REQUIRE(xy.windows.size() == 4);
        for (std::size_t w = 0; w < 4; ++w) {
            const std::size_t start = w * 10;
            const auto sx = discretize(pair.driver().values().subspan(start, 100), cfg.binning);
            const auto sy = discretize(pair.target().values().subspan(start, 100), cfg.binning);
            ShuffleTestConfig st;
            st.n_shuffles = cfg.n_shuffles;
            st.seed = derive_seed(cfg.seed, {start, 0});
            const auto r = shuffle_test(sx, sy, st);
            CHECK(xy.windows[w].te == r.te_observed);
            CHECK(xy.windows[w].p_value == r.p_value);
            CHECK(xy.windows[w].tier == tier(r.p_value));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(rolling_te(noise_pair(4, 99), cfg), LengthError);
        cfg.window = 99;
        CHECK_THROWS_AS(rolling_te(noise_pair(4, 200), cfg), DomainError);
    }
}

TEST_CASE("significance tiers") {
    CHECK(tier(0.0) == SignificanceTier::T1);
    CHECK(tier(0.01) == SignificanceTier::T1);
    CHECK(tier(0.011) == SignificanceTier::T2);
    CHECK(tier(0.05) == SignificanceTier::T2);
    CHECK(tier(0.07) == SignificanceTier::T3);
    CHECK(tier(0.1) == SignificanceTier::T3);
    CHECK(tier(0.2) == SignificanceTier::NS);
    CHECK(tier(1.0) == SignificanceTier::NS);
    CHECK_THROWS_AS(tier(-0.01), DomainError);
    CHECK_THROWS_AS(tier(1.5), DomainError);
    CHECK(to_string(SignificanceTier::T2) == "T2");
}

TEST_CASE("summarize") {
    RollingTeTrack track;
    track.windows = {{day(0), 0.02, 0.2, tier(0.2)}};
    auto s = summarize(track);
    CHECK(s.mean_te == 0.02);
    CHECK(s.std_te == 0.0);
    CHECK(s.fraction_significant == 0.0);
    CHECK(s.n_windows == 1);

    track.windows.push_back({day(1), 0.04, 0.05, tier(0.05)});
    track.windows.push_back({day(2), 0.06, 0.1, tier(0.1)});
    s = summarize(track);
    CHECK(s.mean_te == doctest::Approx(0.04));
    CHECK(s.std_te == doctest::Approx(0.02));
    CHECK(s.n_significant_10pct == 2);
    CHECK(s.fraction_significant == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(summarize(RollingTeTrack{}), LengthError);
}

TEST_CASE("stride-s track is every s-th window of the stride-1 track") {
    const auto pair = noise_pair(6, 160);
    auto cfg = small_config();
    const auto [full_xy, full_yx] = rolling_te(pair, cfg);
    for (std::size_t s : {2u, 5u, 7u}) {
        cfg.stride = s;
        const auto [xy, yx] = rolling_te(pair, cfg);
        REQUIRE(xy.windows.size() == window_count(160, 100, s));
        for (std::size_t w = 0; w < xy.windows.size(); ++w) {
            CHECK(xy.windows[w] == full_xy.windows[w * s]);
            CHECK(yx.windows[w] == full_yx.windows[w * s]);
        }
    }
}

TEST_CASE("rolling_te is independent of the thread count") {
    const auto pair = synth::generate({synth::LinearCoupled{0.3, 1.0}, 180, 8});
    auto cfg = small_config();
    const auto serial = rolling_te(pair, cfg);
    for (unsigned threads : {2u, 4u, 8u}) {
        cfg.threads = threads;
        CHECK(rolling_te(pair, cfg) == serial);
    }
    cfg.global_edges = true;
    cfg.threads = 1;
    const auto global_serial = rolling_te(pair, cfg);
    cfg.threads = 8;
    CHECK(rolling_te(pair, cfg) == global_serial);
}

TEST_CASE("rolling null calibration") {
    std::size_t hits = 0, total = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto cfg = small_config();
        cfg.seed = s;
        const auto [xy, yx] = rolling_te(noise_pair(derive_seed(13, {s}), 149), cfg);
        REQUIRE(xy.windows.size() == 50);
        hits += summarize(xy).n_significant_10pct;
        total += xy.windows.size();
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(total);
    CHECK(frac >= 0.05);
    CHECK(frac <= 0.15);
}
