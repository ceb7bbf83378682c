#include "nakabound/postconf.hpp"

#include <cmath>
#include <string>

#include "nakabound/errors.hpp"

namespace nakabound {

namespace {

void require_drift(const ThreeWayWalk& w) {
    if (!(w.p_right < w.p_left))
        throw RegimeViolation("three-way walk needs p_right < p_left (" + std::to_string(w.p_right) +
                              " >= " + std::to_string(w.p_left) + ")");
}

void require_drift(const TwoStepWalk& w) {
    if (!(w.p2_right < w.p2_left))
        throw RegimeViolation("two-step walk needs bbar < abar (bbar^2=" + std::to_string(w.p2_right) +
                              ", abar^2=" + std::to_string(w.p2_left) + ")");
}

}  // namespace

double ratio_power(double r, std::int64_t n) {
    if (n <= 0) return 1.0;
    if (r == 0.0) return 0.0;
    if (n > 50) return std::exp(static_cast<double>(n) * std::log(r));
    return std::pow(r, static_cast<double>(n));
}

double three_way_max_tail(const ThreeWayWalk& w, std::int64_t a) {
    require_drift(w);
    if (a <= 0) return 1.0;
    const double r = w.p_right / w.p_left;
    return ratio_power(r, a - 1) * ((1.0 - w.p_left) / (1.0 - w.p_right));
}

LeadPmf lead_equivalent_pmf(const ThreeWayWalk& w, double eps, std::size_t min_support) {
    require_drift(w);
    LeadPmf out;
    out.variant = LeadVariant::TruncatedLower;
    std::int64_t a = 0;
    double tail = 1.0;
    while ((tail >= eps || out.size() < min_support) && out.size() < kIndexCap) {
        const double next = three_way_max_tail(w, a + 1);
        out.masses.push_back(tail - next);
        tail = next;
        ++a;
        if (tail == 0.0 && out.size() >= min_support) break;
    }
    out.tail_mass = tail;
    return out;
}

double two_step_catchup_survival(const TwoStepWalk& w, std::int64_t l) {
    require_drift(w);
    if (l < 0) return 1.0;
    const double r = std::sqrt(w.p2_right / w.p2_left);
    if (l % 2 == 1) return ratio_power(r, l + 1);
    // Odd deficit l + 1: one single rigged-model toss first, then the even case.
    const double h = w.single_honest;
    return ratio_power(r, l) * (1.0 - h + h * r * r);
}

double two_step_catchup_cdf(const TwoStepWalk& w, std::int64_t l) {
    if (l < 0) {
        require_drift(w);
        return 0.0;
    }
    return 1.0 - two_step_catchup_survival(w, l);
}

double max_hit_count_pmf(const ThreeWayWalk& w, std::int64_t n) {
    require_drift(w);
    if (n < 1) return 0.0;
    const double moving = w.p_left + w.p_right;
    return (w.p_left / moving) * ratio_power(w.p_right / moving, n - 1);
}

}  // namespace nakabound
