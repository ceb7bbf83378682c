#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "nakabound/params.hpp"
#include "nakabound/pmf.hpp"

namespace nakabound {

enum class LeadVariant {
    TruncatedLower,  // at most two adversarial arrivals per delay window, closed form
    FullLower,       // Delta-delay private attack chain, Ramaswami recursion
    RiggedUpper,     // rigged chain: every non-jumper block credited to the adversary
};

std::string_view to_string(LeadVariant v);

/// Stationary distribution of the adversary's pre-mining lead.
struct LeadPmf : Pmf {
    LeadVariant variant = LeadVariant::TruncatedLower;
};

inline constexpr double kDefaultEps = 1e-12;
inline constexpr std::size_t kIndexCap = 10000;

/// Closed-form steady state of the truncated birth-death chain.
/// Requires beta_1 < alpha_0; stops once the remaining tail is below `eps`
/// and at least `min_support` entries exist.
LeadPmf lead_truncated_lower(const DerivedParams& d, double eps = kDefaultEps, std::size_t min_support = 0);

/// Ramaswami's recursion for a skip-free-to-the-left M/G/1-type chain,
///
///   pi_i = (pi_0 b_i + sum_{j=1}^{i-1} pi_j a_{i+1-j}) / (1 - a_1),  i >= 1,
///
/// with `a[i]`, `b[i]` holding a_i, b_i (index 0 unused, zero past the end).
/// Stops when cumulative mass reaches 1 - eps; throws NonConvergence after
/// `cap` entries.
LeadPmf ramaswami_steady_state(std::span<const double> a, std::span<const double> b, double pi0,
                               double eps = kDefaultEps, std::size_t cap = kIndexCap,
                               std::size_t min_support = 0);

/// Steady state of the full Delta-delay lead chain. Requires 1 > beta(2 + alpha lambda delta).
LeadPmf lead_full_lower(const DerivedParams& d, double eps = kDefaultEps, std::size_t min_support = 0);

/// Steady state of the rigged lead chain. Requires 1 > 2 beta + alpha lambda delta.
LeadPmf lead_rigged_upper(const DerivedParams& d, double eps = kDefaultEps, std::size_t min_support = 0);

LeadPmf lead_pmf(const DerivedParams& d, LeadVariant v, double eps = kDefaultEps, std::size_t min_support = 0);

}  // namespace nakabound
