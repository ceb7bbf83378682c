#include "nakabound/lead.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "nakabound/errors.hpp"

namespace nakabound {

std::string_view to_string(LeadVariant v) {
    switch (v) {
        case LeadVariant::TruncatedLower: return "truncated";
        case LeadVariant::FullLower: return "full";
        case LeadVariant::RiggedUpper: return "rigged";
    }
    return "unknown";
}

LeadPmf lead_truncated_lower(const DerivedParams& d, double eps, std::size_t min_support) {
    const double a0 = d.alpha0();
    const double b1 = d.beta1();
    if (!(b1 < a0))
        throw RegimeViolation("truncated lead chain needs beta_1 < alpha_0 (beta_1=" + std::to_string(b1) +
                              ", alpha_0=" + std::to_string(a0) + ")");
    const double ratio = b1 / a0;
    const double pi0 = (a0 - b1) / (1.0 - b1);
    // P(L >= i) = ratio^{i-1} (1 - alpha_0) / (1 - beta_1) for i >= 1.
    const double tail1 = (1.0 - a0) / (1.0 - b1);

    LeadPmf out;
    out.variant = LeadVariant::TruncatedLower;
    out.masses.push_back(pi0);
    double tail = tail1;  // P(L >= size())
    double pi = pi0 * (1.0 - a0) / a0;
    while ((tail >= eps || out.size() < min_support) && out.size() < kIndexCap) {
        out.masses.push_back(pi);
        tail *= ratio;
        pi *= ratio;
        if (tail == 0.0 && out.size() >= min_support) break;
    }
    out.tail_mass = tail;
    return out;
}

LeadPmf ramaswami_steady_state(std::span<const double> a, std::span<const double> b, double pi0, double eps,
                               std::size_t cap, std::size_t min_support) {
    auto at = [](std::span<const double> s, std::size_t i) { return i < s.size() ? s[i] : 0.0; };
    const double denom = 1.0 - at(a, 1);
    if (!(denom > 0.0)) throw RegimeViolation("Ramaswami recursion needs a_1 < 1");
    if (!(pi0 > 0.0 && pi0 <= 1.0)) throw RegimeViolation("Ramaswami recursion needs pi_0 in (0, 1]");

    LeadPmf out;
    out.masses.push_back(pi0);
    double cumulative = pi0;
    std::vector<double> terms;
    while (cumulative < 1.0 - eps || out.size() < min_support) {
        const std::size_t i = out.size();
        if (i >= cap)
            throw NonConvergence("Ramaswami recursion reached index cap " + std::to_string(cap) +
                                 " with mass " + std::to_string(cumulative));
        terms.clear();
        terms.push_back(pi0 * at(b, i));
        // a_{i+1-j} vanishes once i+1-j runs past the stored support.
        const std::size_t j_lo = (i + 2 > a.size()) ? i + 2 - a.size() : 1;
        for (std::size_t j = std::max<std::size_t>(j_lo, 1); j < i; ++j) terms.push_back(out.masses[j] * at(a, i + 1 - j));
        const double pi = sum_ascending(terms) / denom;
        out.masses.push_back(pi);
        cumulative += pi;
        if (pi == 0.0 && out.size() >= min_support && cumulative >= 1.0 - eps) break;
    }
    out.tail_mass = std::max(0.0, 1.0 - cumulative);
    return out;
}

namespace {

template <typename Coef>
void fill_coefficients(const DerivedParams& d, Coef coef, std::vector<double>& out) {
    // +2 covers the beta indicator terms when the Poisson support is tiny.
    const std::size_t n = d.support() + 3;
    out.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) out[i] = coef(i);
}

}  // namespace

LeadPmf lead_full_lower(const DerivedParams& d, double eps, std::size_t min_support) {
    const ProtocolParams& p = d.params();
    const double beta = p.beta();
    const double load = beta * (2.0 + p.alpha * p.lambda * p.delta);
    if (!(load < 1.0))
        throw RegimeViolation("full lead chain needs 1 > beta(2 + alpha lambda delta), got " + std::to_string(load));
    std::vector<double> a, b;
    fill_coefficients(d, [&](std::size_t i) { return d.a_i(i); }, a);
    fill_coefficients(d, [&](std::size_t i) { return d.b_i(i); }, b);
    LeadPmf out = ramaswami_steady_state(a, b, (1.0 - load) / p.alpha, eps, kIndexCap, min_support);
    out.variant = LeadVariant::FullLower;
    return out;
}

LeadPmf lead_rigged_upper(const DerivedParams& d, double eps, std::size_t min_support) {
    const ProtocolParams& p = d.params();
    const double load = 2.0 * p.beta() + p.alpha * p.lambda * p.delta;
    if (!(load < 1.0))
        throw RegimeViolation("rigged lead chain needs 1 > 2 beta + alpha lambda delta, got " + std::to_string(load));
    std::vector<double> a, b;
    fill_coefficients(d, [&](std::size_t i) { return d.abar_seq_i(i); }, a);
    fill_coefficients(d, [&](std::size_t i) { return d.bbar_seq_i(i); }, b);
    LeadPmf out = ramaswami_steady_state(a, b, (1.0 - load) / p.alpha, eps, kIndexCap, min_support);
    out.variant = LeadVariant::RiggedUpper;
    return out;
}

LeadPmf lead_pmf(const DerivedParams& d, LeadVariant v, double eps, std::size_t min_support) {
    switch (v) {
        case LeadVariant::TruncatedLower: return lead_truncated_lower(d, eps, min_support);
        case LeadVariant::FullLower: return lead_full_lower(d, eps, min_support);
        case LeadVariant::RiggedUpper: return lead_rigged_upper(d, eps, min_support);
    }
    throw std::invalid_argument("unknown lead variant");
}

}  // namespace nakabound
