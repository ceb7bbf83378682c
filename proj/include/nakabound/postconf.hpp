#pragma once

#include <cstdint>

#include "nakabound/lead.hpp"
#include "nakabound/params.hpp"

namespace nakabound {

/// Three-way walk of the truncated Delta-delay race. Each step is a jumper
/// with no adversarial block in its window (left), a jumper with exactly one
/// (stay), or a net adversarial gain of one (right).
struct ThreeWayWalk {
    double p_left = 0.0;
    double p_stay = 0.0;
    double p_right = 0.0;

    static ThreeWayWalk from(const DerivedParams& d) { return {d.alpha0(), d.alpha1(), d.beta1()}; }
};

/// Rigged race taken two arrivals at a time. `single_honest` is the chance a
/// lone arrival becomes a non-rigged honest block, used to make odd deficits even.
struct TwoStepWalk {
    double p2_left = 0.0;   // (H, A) = (2, 0)
    double p2_stay = 0.0;   // (1, 1)
    double p2_right = 0.0;  // (0, 2)
    double single_honest = 0.0;

    static TwoStepWalk from(const DerivedParams& d) {
        return {d.abar() * d.abar(), d.rho(), d.bbar_sq(), d.abar()};
    }
};

/// P(max_i T'_i >= a) for the three-way walk where a tie step taken one
/// block short of the target also counts as reaching it. Returns 1 for a <= 0.
double three_way_max_tail(const ThreeWayWalk& w, std::int64_t a);

/// PMF of max_i T'_i, obtained by differencing the tail; coincides with the
/// truncated lead law.
LeadPmf lead_equivalent_pmf(const ThreeWayWalk& w, double eps = kDefaultEps, std::size_t min_support = 0);

/// F'_3(l) = P(M' <= l): the adversary never closes a deficit of l + 1 in the
/// two-step rigged race. Zero for l < 0.
double two_step_catchup_cdf(const TwoStepWalk& w, std::int64_t l);

/// 1 - F'_3(l), evaluated without cancellation.
double two_step_catchup_survival(const TwoStepWalk& w, std::int64_t l);

/// Conditional law of how many times the walk steps from M-1 up to its
/// overall maximum M: geometric with success p_left / (p_left + p_right).
/// With p_stay = 0 this is the two-way law alpha beta^{n-1}.
double max_hit_count_pmf(const ThreeWayWalk& w, std::int64_t n);

/// r^n with r in [0, 1), via log space for large n.
double ratio_power(double r, std::int64_t n);

}  // namespace nakabound
