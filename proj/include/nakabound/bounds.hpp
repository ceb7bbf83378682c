#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nakabound/confirmation.hpp"
#include "nakabound/lead.hpp"
#include "nakabound/params.hpp"

namespace nakabound {

enum class BoundKind { Lower, Upper };

std::string_view to_string(BoundKind b);

struct BoundOptions {
    double eps = kDefaultEps;
    LeadVariant lower_lead = LeadVariant::TruncatedLower;  // or FullLower
    PmfForm pmf_form = PmfForm::Printed;
};

/// A discard-probability bound. `value` is already rounded in the safe
/// direction; the exact bound lies within `truncation_error` of it, on the
/// side away from the conservative direction.
struct BoundResult {
    double value = 0.0;
    double truncation_error = 0.0;
    BoundKind kind = BoundKind::Lower;
    LeadVariant lead_variant = LeadVariant::TruncatedLower;
    PmfForm pmf_form = PmfForm::Printed;
    ProtocolParams params;
};

/// Probability that the Delta-delay private attack discards a k-deep
/// transaction: P(L + S + max T' >= k). Throws RegimeViolation outside the
/// ultimate fault-tolerance region or when beta_1 >= alpha_0.
BoundResult lower_bound(const ProtocolParams& p, const BoundOptions& opts = {});

/// Upper bound on the discard probability under any attack, from the rigged
/// model: 1 - sum_{i+j<k} P'_1(i) P'_2(j) F'_3(k-1-i-j). Throws
/// RegimeViolation unless 1 > 2 beta + alpha lambda delta and bbar < abar.
BoundResult upper_bound(const ProtocolParams& p, const BoundOptions& opts = {});

enum class Which { Lower, Upper, Both };

struct SweepRow {
    ProtocolParams params;
    RegimeReport regime;
    std::optional<BoundResult> lower;
    std::optional<BoundResult> upper;
    std::string note;  // why a requested bound is missing
};

std::vector<SweepRow> sweep(const std::vector<ProtocolParams>& points, Which which, const BoundOptions& opts = {});

/// base with k = from..to inclusive (empty when from > to).
std::vector<ProtocolParams> k_range(const ProtocolParams& base, int from, int to);

/// base with alpha = from, from + step, ... up to `to` (inclusive within 1e-9).
std::vector<ProtocolParams> alpha_grid(const ProtocolParams& base, double from, double to, double step);

}  // namespace nakabound
