#include "nakabound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nakabound/errors.hpp"
#include "nakabound/postconf.hpp"

namespace nakabound {

std::string_view to_string(BoundKind b) { return b == BoundKind::Lower ? "lower" : "upper"; }

namespace {

// P(L + S >= k) from the two PMFs, optionally counting their tail masses as
// reaching k. All terms are non-negative.
double reach_probability(const Pmf& lead, const Pmf& conf, int k, bool with_tails, std::vector<double>& terms) {
    terms.clear();
    const std::size_t kk = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < kk; ++i) {
        const double s = with_tails ? conf.survival_with_tail(kk - i) : conf.survival(kk - i);
        terms.push_back(lead[i] * s);
    }
    terms.push_back(with_tails ? lead.survival_with_tail(kk) : lead.survival(kk));
    return sum_ascending(terms);
}

}  // namespace

BoundResult lower_bound(const ProtocolParams& p, const BoundOptions& opts) {
    if (opts.lower_lead == LeadVariant::RiggedUpper)
        throw std::invalid_argument("the lower bound takes the truncated or full lead");
    const RegimeReport regime = check_regime(p);
    if (!regime.ultimate_tolerance)
        throw RegimeViolation("lower bound needs beta < (1-beta)/(1+(1-beta) lambda delta)");
    if (!regime.lower_walk_drift) throw RegimeViolation("lower bound needs beta_1 < alpha_0");

    const DerivedParams d(p);
    const int k = p.k;
    const std::size_t support = static_cast<std::size_t>(k) + 1;
    const LeadPmf lead = lead_pmf(d, opts.lower_lead, opts.eps, support);
    const ConfPmf conf = conf_pmf_lower(d, k, opts.eps, opts.pmf_form, support);
    const ThreeWayWalk walk = ThreeWayWalk::from(d);

    std::vector<double> terms;
    const double reached = reach_probability(lead, conf, k, false, terms);
    terms.clear();
    for (int i = 0; i < k; ++i)
        for (int j = 0; i + j < k; ++j) terms.push_back(lead[i] * conf[j] * three_way_max_tail(walk, k - i - j));
    terms.push_back(reached);

    BoundResult r;
    r.value = std::clamp(sum_ascending(terms), 0.0, 1.0);
    r.truncation_error = lead.tail_mass + conf.tail_mass;
    r.kind = BoundKind::Lower;
    r.lead_variant = opts.lower_lead;
    r.pmf_form = opts.pmf_form;
    r.params = p;
    return r;
}

BoundResult upper_bound(const ProtocolParams& p, const BoundOptions& opts) {
    const RegimeReport regime = check_regime(p);
    if (!regime.rigged_tolerance) throw RegimeViolation("upper bound needs 1 > 2 beta + alpha lambda delta");
    if (!regime.upper_walk_drift) throw RegimeViolation("upper bound needs bbar < abar");

    const DerivedParams d(p);
    const int k = p.k;
    const std::size_t support = static_cast<std::size_t>(k) + 1;
    const LeadPmf lead = lead_rigged_upper(d, opts.eps, support);
    const ConfPmf conf = conf_pmf_upper(d, k, opts.eps, opts.pmf_form, support);
    const TwoStepWalk walk = TwoStepWalk::from(d);

    std::vector<double> terms;
    const double reached = reach_probability(lead, conf, k, true, terms);
    terms.clear();
    for (int i = 0; i < k; ++i)
        for (int j = 0; i + j < k; ++j)
            terms.push_back(lead[i] * conf[j] * two_step_catchup_survival(walk, k - 1 - i - j));
    terms.push_back(reached);

    BoundResult r;
    r.value = std::clamp(sum_ascending(terms), 0.0, 1.0);
    r.truncation_error = lead.tail_mass + conf.tail_mass;
    r.kind = BoundKind::Upper;
    r.lead_variant = LeadVariant::RiggedUpper;
    r.pmf_form = opts.pmf_form;
    r.params = p;
    return r;
}

std::vector<SweepRow> sweep(const std::vector<ProtocolParams>& points, Which which, const BoundOptions& opts) {
    std::vector<SweepRow> rows;
    rows.reserve(points.size());
    for (const ProtocolParams& p : points) {
        SweepRow row;
        row.params = p;
        row.regime = check_regime(p);
        auto attempt = [&](auto fn, std::optional<BoundResult>& slot) {
            try {
                slot = fn(p, opts);
            } catch (const RegimeViolation& e) {
                if (!row.note.empty()) row.note += "; ";
                row.note += e.what();
            } catch (const NonConvergence& e) {
                if (!row.note.empty()) row.note += "; ";
                row.note += e.what();
            }
        };
        if (which != Which::Upper) attempt(lower_bound, row.lower);
        if (which != Which::Lower) attempt(upper_bound, row.upper);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ProtocolParams> k_range(const ProtocolParams& base, int from, int to) {
    std::vector<ProtocolParams> out;
    for (int k = from; k <= to; ++k) {
        ProtocolParams p = base;
        p.k = k;
        out.push_back(p);
    }
    return out;
}

std::vector<ProtocolParams> alpha_grid(const ProtocolParams& base, double from, double to, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("alpha step must be positive");
    std::vector<ProtocolParams> out;
    for (long i = 0;; ++i) {
        // Round to the step's grid so 0.52 + 47*0.01 prints as 0.99.
        const double a = std::round((from + static_cast<double>(i) * step) * 1e9) / 1e9;
        if (a > to + 1e-9) break;
        ProtocolParams p = base;
        p.alpha = a;
        out.push_back(p);
    }
    return out;
}

}  // namespace nakabound
