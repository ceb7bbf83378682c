#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nakabound/bounds.hpp"
#include "nakabound/confirmation.hpp"
#include "nakabound/errors.hpp"
#include "nakabound/lead.hpp"
#include "nakabound/postconf.hpp"
#include "nakabound/rng.hpp"
#include "nakabound/sim.hpp"

using namespace nakabound;

namespace {

SimConfig config(const ProtocolParams& p, SimMode mode, std::uint64_t trials, std::uint64_t seed = 7) {
    SimConfig c;
    c.params = p;
    c.mode = mode;
    c.trials = trials;
    c.seed = seed;
    c.warmup_blocks = 200;
    return c;
}

const ProtocolParams kBtc75{1.0 / 600.0, 10.0, 0.75, 6};
const ProtocolParams kBtc90{1.0 / 600.0, 10.0, 0.9, 6};
const ProtocolParams kEth75{1.0 / 13.0, 2.0, 0.75, 6};

// |freq - p| within z binomial standard errors of the reference p.
bool within(double freq, double p, std::uint64_t n, double z = 4.0) {
    return std::abs(freq - p) <= z * std::sqrt(p * (1.0 - p) / static_cast<double>(n)) + 1e-12;
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.warmup_blocks = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.horizon = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.params.alpha = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("histogram arithmetic") {
    Histogram a, b;
    a.add(0);
    a.add(2);
    b.add(2);
    b.add(5);
    a.merge(b);
    CHECK(a.total == 4);
    CHECK(a.count(2) == 2);
    CHECK(a.count(9) == 0);
    CHECK(a.count_at_least(2) == 3);
    CHECK(a.freq(2) == 0.5);
    CHECK(a.freq_at_least(3) == 0.25);
    CHECK(a.mean() == doctest::Approx(9.0 / 4.0));
}

TEST_CASE("trial streams are independent of each other") {
    Xoshiro256 a = trial_stream(1, 0), b = trial_stream(1, 1), c = trial_stream(2, 0);
    const double x = a.uniform(), y = b.uniform(), z = c.uniform();
    CHECK(x != y);
    CHECK(x != z);
    Xoshiro256 again = trial_stream(1, 0);
    CHECK(again.uniform() == x);
}

TEST_CASE("Poisson sampler mean and zero rate") {
    Xoshiro256 rng = trial_stream(3, 0);
    PoissonSampler zero(0.0);
    for (int i = 0; i < 100; ++i) CHECK(zero(rng) == 0);
    PoissonSampler p(2.5);
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) s += static_cast<double>(p(rng));
    CHECK(std::abs(s / n - 2.5) < 4.0 * std::sqrt(2.5 / n));
}

TEST_CASE("no adversary: zero lead and no discard") {
    const ProtocolParams p{1.0 / 600.0, 10.0, 1.0, 6};
    const SimConfig c = config(p, SimMode::PrivateAttackDelta, 5000);
    CHECK(simulate_lead(c).count(0) == 5000);
    CHECK(simulate_end_to_end(c, 6).discard_freq() == 0.0);
}

TEST_CASE("zero delay, k = 1: geometric counts") {
    const ProtocolParams p{1.0 / 600.0, 0.0, 0.7, 1};
    const std::uint64_t n = 200000;
    const Histogram h = simulate_confirmation(config(p, SimMode::PrivateAttackDelta, n), 1);
    for (std::size_t s = 0; s < 6; ++s) CHECK(within(h.freq(s), 0.7 * std::pow(0.3, s), n));
}

TEST_CASE("renewal lead agrees with the analytic laws") {
    const std::uint64_t n = 200000;
    for (const ProtocolParams& p : {kBtc75, kEth75}) {
        const DerivedParams d(p);
        const Histogram priv = simulate_lead(config(p, SimMode::PrivateAttackDelta, n));
        const Histogram rig = simulate_lead(config(p, SimMode::RiggedModel, n));
        const LeadPmf full = lead_full_lower(d), rigged = lead_rigged_upper(d), trunc = lead_truncated_lower(d);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(within(priv.freq(i), full[i], n));
            CHECK(within(rig.freq(i), rigged[i], n));
        }
        // Truncation weakens the adversary: the simulated tail sits on or above it.
        for (std::size_t i = 1; i < 5; ++i) {
            const double q = trunc.survival(i);
            CHECK(priv.freq_at_least(i) >= q - 4.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(n)));
        }
    }
}

TEST_CASE("confirmation counts agree with the analytic laws") {
    const std::uint64_t n = 200000;
    const DerivedParams d(kEth75);
    const Histogram lo = simulate_confirmation(config(kEth75, SimMode::PrivateAttackDelta, n), 6);
    const Histogram hi = simulate_confirmation(config(kEth75, SimMode::RiggedModel, n), 10);
    const ConfPmf a = conf_pmf_lower(d, 6), b = conf_pmf_upper(d, 10);
    for (std::size_t s = 0; s < 8; ++s) {
        CHECK(within(lo.freq(s), a[s], n));
        CHECK(within(hi.freq(s), b[s], n));
    }
}

TEST_CASE("post-confirmation races agree with the walk formulas") {
    const std::uint64_t n = 200000;
    const DerivedParams d(kBtc90);
    const Estimate e2 = simulate_postconf(config(kBtc90, SimMode::PrivateAttackDelta, n), 2);
    CHECK(within(e2.freq(), three_way_max_tail(ThreeWayWalk::from(d), 2), n));
    const Estimate e3 = simulate_postconf(config(kBtc90, SimMode::RiggedModel, n), 3);
    CHECK(within(e3.freq(), two_step_catchup_survival(TwoStepWalk::from(d), 2), n));
    CHECK(e2.truncated == 0);
}

TEST_CASE("huge deficits are never closed") {
    const Estimate e = simulate_postconf(config(kBtc90, SimMode::PrivateAttackDelta, 20000), 200);
    CHECK(e.successes == 0);
    CHECK(e.truncated == 0);
}

TEST_CASE("a tiny horizon is reported") {
    SimConfig c = config(kBtc75, SimMode::PrivateAttackDelta, 20000);
    c.horizon = 1;
    CHECK_THROWS_AS(simulate_postconf(c, 3), HorizonTooSmall);
    CHECK_THROWS_AS(simulate_postconf(c, 0), std::invalid_argument);
}

TEST_CASE("determinism across worker counts") {
    for (SimMode mode : {SimMode::PrivateAttackDelta, SimMode::RiggedModel}) {
        SimConfig c = config(kBtc75, mode, 30000, 11);
        c.workers = 1;
        const SimReport one = simulate_end_to_end(c, 6);
        for (unsigned w : {2u, 3u, 8u}) {
            c.workers = w;
            const SimReport many = simulate_end_to_end(c, 6);
            CHECK(many.lead_hist == one.lead_hist);
            CHECK(many.conf_count_hist == one.conf_count_hist);
            CHECK(many.discard == one.discard);
        }
    }
}

TEST_CASE("report bookkeeping") {
    const SimReport r = simulate_end_to_end(config(kBtc75, SimMode::RiggedModel, 10000), 6);
    CHECK(r.lead_hist.total == 10000);
    CHECK(r.conf_count_hist.total == 10000);
    CHECK(r.discard.trials == 10000);
    CHECK(r.discard_freq() >= 0.0);
    CHECK(r.discard_freq() <= 1.0);
    CHECK(r.k == 6);
}

TEST_CASE("doubling the trials stays inside the sampling envelope") {
    const DerivedParams d(kBtc75);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const std::uint64_t n = 20000;
        const Histogram a = simulate_lead(config(kBtc75, SimMode::PrivateAttackDelta, n, seed));
        const Histogram b = simulate_lead(config(kBtc75, SimMode::PrivateAttackDelta, 2 * n, seed));
        for (std::size_t i = 0; i < 3; ++i) {
            const double p = lead_full_lower(d)[i];
            const double env = 3.0 * std::sqrt(p * (1.0 - p) * (1.0 / n + 1.0 / (2.0 * n)));
            CHECK(std::abs(a.freq(i) - b.freq(i)) <= env);
        }
    }
}

TEST_CASE("raw timeline agrees with the renewal form") {
    const std::uint64_t n = 100000;
    for (SimMode mode : {SimMode::PrivateAttackDelta, SimMode::RiggedModel}) {
        SimConfig c = config(kEth75, mode, n, 5);
        c.warmup_blocks = 100;
        const DerivedParams d(kEth75);
        const LeadPmf lead = mode == SimMode::RiggedModel ? lead_rigged_upper(d) : lead_full_lower(d);
        const ConfPmf conf = conf_pmf(d, mode == SimMode::RiggedModel ? ConfVariant::UpperS : ConfVariant::LowerS, 6);
        const Histogram rl = raw_timeline_lead(c), rc = raw_timeline_confirmation(c, 6);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(within(rl.freq(i), lead[i], n));
            CHECK(within(rc.freq(i), conf[i], n));
        }
    }
}

TEST_CASE("consecutive jumper counts are uncorrelated") {
    for (SimMode mode : {SimMode::PrivateAttackDelta, SimMode::RiggedModel}) {
        const auto xs = raw_timeline_jumper_counts(config(kEth75, mode, 1, 13), 200000);
        REQUIRE(xs.size() == 200000);
        double mean = 0.0;
        for (auto x : xs) mean += static_cast<double>(x);
        mean /= static_cast<double>(xs.size());
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double u = static_cast<double>(xs[i]) - mean;
            den += u * u;
            if (i + 1 < xs.size()) num += u * (static_cast<double>(xs[i + 1]) - mean);
        }
        CHECK(std::abs(num / den) <= 3.0 / std::sqrt(static_cast<double>(xs.size())));
        // Per-jumper law.
        const DerivedParams d(kEth75);
        std::vector<double> freq(4, 0.0);
        for (auto x : xs)
            if (x < 4) freq[x] += 1.0 / static_cast<double>(xs.size());
        for (std::size_t c = 0; c < 4; ++c) {
            const double p = mode == SimMode::RiggedModel ? per_jumper_pmf_upper(d, c) : per_jumper_pmf_lower(d, c);
            CHECK(within(freq[c], p, xs.size()));
        }
    }
}

TEST_CASE("hit counts at the maximum follow the geometric law") {
    const ThreeWayWalk w = ThreeWayWalk::from(DerivedParams(kBtc75));
    const Histogram h = simulate_max_hit_counts(w, 200000, 3, 2, 1);
    REQUIRE(h.total > 1000);
    for (int n = 1; n < 4; ++n) CHECK(within(h.freq(n), max_hit_count_pmf(w, n), h.total));
}

TEST_CASE("Lundberg exponent of a simple walk") {
    const double p = 0.3, q = 0.7;
    const double theta = lundberg_exponent([&](double t) { return p * std::exp(t) + q * std::exp(-t); });
    CHECK(theta == doctest::Approx(std::log(q / p)).epsilon(1e-9));
    CHECK_THROWS_AS(lundberg_exponent([&](double t) { return q * std::exp(t) + p * std::exp(-t); }), RegimeViolation);
}

TEST_CASE("end-to-end frequencies bracket the bounds") {
    const std::uint64_t n = 400000;
    const double lo = lower_bound(kBtc75).value, hi = upper_bound(kBtc75).value;
    const SimReport priv = simulate_end_to_end(config(kBtc75, SimMode::PrivateAttackDelta, n), 6);
    const SimReport rig = simulate_end_to_end(config(kBtc75, SimMode::RiggedModel, n), 6);
    CHECK(priv.discard_freq() >= lo - 4.0 * priv.discard_stderr());
    CHECK(rig.discard_freq() <= hi + 4.0 * rig.discard_stderr());
}
