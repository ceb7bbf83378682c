#include <doctest.h>

#include <cmath>
#include <vector>

#include "nakabound/errors.hpp"
#include "nakabound/lead.hpp"
#include "support/oracles.hpp"

using namespace nakabound;

namespace {

const std::vector<ProtocolParams> kPoints = {
    {1.0 / 600.0, 10.0, 0.9, 6},
    {1.0 / 600.0, 10.0, 0.75, 6},
    {1.0 / 13.0, 2.0, 0.75, 6},
    {1.0 / 13.0, 2.0, 0.9, 6},
    {0.1, 5.0, 0.8, 6},
};

double max_gap(const Pmf& p, const std::vector<double>& ref) {
    double g = 0.0;
    for (std::size_t i = 0; i + 1 < ref.size(); ++i) g = std::max(g, std::abs(p[i] - ref[i]));
    return g;
}

}  // namespace

TEST_CASE("closed-form pi_0 values") {
    const DerivedParams d({1.0 / 600.0, 10.0, 0.9, 6});
    CHECK(lead_truncated_lower(d)[0] == doctest::Approx(0.88722345387966488843).epsilon(1e-13));
    CHECK(lead_rigged_upper(d)[0] == doctest::Approx(0.87222222222222222222).epsilon(1e-13));
    const double beta = 0.1, lt = 1.0 / 60.0;
    CHECK(lead_full_lower(d)[0] == doctest::Approx((1.0 - beta * (2.0 + 0.9 * lt)) / 0.9).epsilon(1e-14));
}

TEST_CASE("truncated lead is geometric past zero") {
    const DerivedParams d({1.0 / 13.0, 2.0, 0.75, 6});
    const LeadPmf l = lead_truncated_lower(d);
    const double r = d.beta1() / d.alpha0();
    CHECK(l[1] == doctest::Approx(l[0] * (1.0 - d.alpha0()) / d.alpha0()).epsilon(1e-14));
    for (std::size_t i = 2; i < 20; ++i) CHECK(l[i] == doctest::Approx(l[i - 1] * r).epsilon(1e-12));
    CHECK(l.tail_mass == doctest::Approx(std::pow(r, static_cast<double>(l.size() - 1)) * (1.0 - d.alpha0()) /
                                         (1.0 - d.beta1()))
                             .epsilon(1e-9));
}

TEST_CASE("lead laws match power iteration on the cut chain") {
    for (const ProtocolParams& p : kPoints) {
        CAPTURE(p.alpha);
        CAPTURE(p.lambda);
        const DerivedParams d(p);
        for (LeadVariant v : {LeadVariant::TruncatedLower, LeadVariant::FullLower, LeadVariant::RiggedUpper}) {
            CAPTURE(to_string(v));
            const auto ref = oracle::power_iteration_lead(d, v);
            CHECK(max_gap(lead_pmf(d, v), ref) < 1e-12);
        }
    }
}

TEST_CASE("lead laws are normalized including the tail") {
    for (const ProtocolParams& p : kPoints) {
        const DerivedParams d(p);
        for (LeadVariant v : {LeadVariant::TruncatedLower, LeadVariant::FullLower, LeadVariant::RiggedUpper}) {
            const LeadPmf l = lead_pmf(d, v);
            CHECK(std::abs(l.total() - 1.0) < 1e-12);
            CHECK(l.tail_mass <= kDefaultEps * 1.01);
            CHECK(l.variant == v);
            for (double m : l.masses) CHECK(m >= 0.0);
        }
    }
}

TEST_CASE("dominance: rigged over full over truncated") {
    for (const ProtocolParams& p : kPoints) {
        CAPTURE(p.alpha);
        const DerivedParams d(p);
        const LeadPmf t = lead_truncated_lower(d), f = lead_full_lower(d), r = lead_rigged_upper(d);
        for (std::size_t i = 0; i < 40; ++i) {
            CHECK(f.survival_with_tail(i) >= t.survival(i) - 1e-15);
            CHECK(r.survival_with_tail(i) >= f.survival(i) - 1e-15);
        }
    }
}

TEST_CASE("eps and min_support control the stored support") {
    const DerivedParams d({1.0 / 600.0, 10.0, 0.75, 6});
    for (LeadVariant v : {LeadVariant::TruncatedLower, LeadVariant::FullLower, LeadVariant::RiggedUpper}) {
        const LeadPmf coarse = lead_pmf(d, v, 1e-6);
        const LeadPmf fine = lead_pmf(d, v, 1e-14);
        CHECK(coarse.size() < fine.size());
        CHECK(coarse.tail_mass <= 1e-6);
        for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(std::abs(coarse[i] - fine[i]) < 1e-15);
        CHECK(lead_pmf(d, v, 1e-3, 50).size() >= 50);
    }
}

TEST_CASE("zero delay: all three variants coincide") {
    for (double alpha : {0.6, 0.75, 0.9}) {
        const DerivedParams d({1.0 / 600.0, 0.0, alpha, 6});
        const LeadPmf t = lead_truncated_lower(d), f = lead_full_lower(d), r = lead_rigged_upper(d);
        for (std::size_t i = 0; i < 30; ++i) {
            CHECK(std::abs(t[i] - f[i]) < 1e-12);
            CHECK(std::abs(t[i] - r[i]) < 1e-12);
        }
    }
}

TEST_CASE("no adversary means no private lead") {
    const DerivedParams d({1.0 / 600.0, 10.0, 1.0, 6});
    for (LeadVariant v : {LeadVariant::TruncatedLower, LeadVariant::FullLower}) {
        const LeadPmf l = lead_pmf(d, v);
        CHECK(l[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(l.survival_with_tail(1) < 1e-15);
    }
    // Rigged blocks still count against the honest chain.
    CHECK(lead_rigged_upper(d).survival(1) > 0.0);
}

TEST_CASE("regime violations throw") {
    const DerivedParams weak({1.0 / 600.0, 10.0, 0.45, 6});
    CHECK_THROWS_AS(lead_truncated_lower(weak), RegimeViolation);
    CHECK_THROWS_AS(lead_full_lower(weak), RegimeViolation);
    CHECK_THROWS_AS(lead_rigged_upper(weak), RegimeViolation);
    // Ethereum at alpha = 0.52 keeps the lower chains but loses the rigged one.
    const DerivedParams eth({1.0 / 13.0, 2.0, 0.52, 6});
    CHECK_NOTHROW(lead_full_lower(eth));
    CHECK_THROWS_AS(lead_rigged_upper(eth), RegimeViolation);
}

TEST_CASE("Ramaswami recursion on a plain birth-death chain") {
    // a_0 = 0.7 down, a_1 = 0 stay, a_2 = 0.3 up; b_1 = 0.3.
    const std::vector<double> a = {0.0, 0.3, 0.3};
    const std::vector<double> b = {0.0, 0.3};
    const double pi0 = 1.0 - 0.3 / 0.7;
    const LeadPmf l = ramaswami_steady_state(a, b, pi0, 1e-13);
    const double r = 0.3 / 0.7;
    for (std::size_t i = 0; i < 20; ++i) CHECK(l[i] == doctest::Approx(pi0 * std::pow(r, i)).epsilon(1e-12));
    CHECK_THROWS_AS(ramaswami_steady_state(a, b, pi0, 1e-13, 5), NonConvergence);
}
