#include <doctest.h>

#include <cmath>

#include "nakabound/errors.hpp"
#include "nakabound/postconf.hpp"
#include "support/oracles.hpp"

using namespace nakabound;

TEST_CASE("three-way tail at Bitcoin alpha = 0.9") {
    const ThreeWayWalk w = ThreeWayWalk::from(DerivedParams({1.0 / 600.0, 10.0, 0.9, 6}));
    CHECK(three_way_max_tail(w, 3) == doctest::Approx(0.0013969866775021966475).epsilon(1e-12));
    CHECK(three_way_max_tail(w, 0) == 1.0);
    CHECK(three_way_max_tail(w, -4) == 1.0);
}

TEST_CASE("three-way tail matches value iteration on the race") {
    for (const ProtocolParams& p : {ProtocolParams{1.0 / 600.0, 10.0, 0.75, 6}, ProtocolParams{1.0 / 13.0, 2.0, 0.75, 6},
                                    ProtocolParams{0.1, 5.0, 0.8, 6}}) {
        const ThreeWayWalk w = ThreeWayWalk::from(DerivedParams(p));
        for (int a = 1; a <= 8; ++a) CHECK(std::abs(three_way_max_tail(w, a) - oracle::three_way_catchup(w, a)) < 1e-13);
    }
}

TEST_CASE("max of the walk has the truncated lead law") {
    for (const ProtocolParams& p : {ProtocolParams{1.0 / 600.0, 10.0, 0.9, 6}, ProtocolParams{1.0 / 13.0, 2.0, 0.75, 6}}) {
        const DerivedParams d(p);
        const LeadPmf a = lead_equivalent_pmf(ThreeWayWalk::from(d));
        const LeadPmf b = lead_truncated_lower(d);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }
}

TEST_CASE("two-step catch-up matches value iteration") {
    for (const ProtocolParams& p : {ProtocolParams{1.0 / 600.0, 10.0, 0.9, 6}, ProtocolParams{1.0 / 600.0, 10.0, 0.75, 6},
                                    ProtocolParams{1.0 / 13.0, 2.0, 0.75, 6}}) {
        const TwoStepWalk w = TwoStepWalk::from(DerivedParams(p));
        for (int l = 0; l <= 9; ++l) {
            CAPTURE(l);
            CHECK(std::abs(two_step_catchup_survival(w, l) - oracle::two_step_catchup(w, l + 1)) < 1e-13);
            CHECK(two_step_catchup_cdf(w, l) + two_step_catchup_survival(w, l) == doctest::Approx(1.0).epsilon(1e-15));
        }
        CHECK(two_step_catchup_cdf(w, -1) == 0.0);
        CHECK(two_step_catchup_survival(w, -1) == 1.0);
    }
}

TEST_CASE("two-step survival is non-increasing") {
    const TwoStepWalk w = TwoStepWalk::from(DerivedParams({1.0 / 13.0, 2.0, 0.75, 6}));
    for (int l = 0; l < 100; ++l) CHECK(two_step_catchup_survival(w, l + 1) <= two_step_catchup_survival(w, l));
}

TEST_CASE("hit-count law") {
    const ThreeWayWalk w = ThreeWayWalk::from(DerivedParams({1.0 / 600.0, 10.0, 0.75, 6}));
    double s = 0.0;
    for (int n = 1; n < 200; ++n) s += max_hit_count_pmf(w, n);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_hit_count_pmf(w, 0) == 0.0);
    // Without ties it is geometric with ratio beta.
    const ThreeWayWalk two{0.7, 0.0, 0.3};
    for (int n = 1; n < 6; ++n)
        CHECK(max_hit_count_pmf(two, n) == doctest::Approx(0.7 * std::pow(0.3, n - 1)).epsilon(1e-14));
}

TEST_CASE("ratio powers") {
    CHECK(ratio_power(0.5, 3) == 0.125);
    CHECK(ratio_power(0.9, 200) == doctest::Approx(std::pow(0.9, 200)).epsilon(1e-12));
    CHECK(ratio_power(0.0, 0) == 1.0);
}

TEST_CASE("walks without downward drift throw") {
    const ThreeWayWalk flat{0.3, 0.3, 0.4};
    CHECK_THROWS_AS(three_way_max_tail(flat, 2), RegimeViolation);
    const TwoStepWalk eth = TwoStepWalk::from(DerivedParams({1.0 / 13.0, 2.0, 0.52, 6}));
    CHECK_THROWS_AS(two_step_catchup_survival(eth, 2), RegimeViolation);
}
