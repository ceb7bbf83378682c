#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "nakabound/errors.hpp"
#include "nakabound/params.hpp"
#include "nakabound/postconf.hpp"

namespace nakabound {

enum class SimMode {
    PrivateAttackDelta,  // adversary mines privately and delays every honest block by Delta
    RiggedModel,         // every non-jumper block is credited to the adversary
};

std::string_view to_string(SimMode m);

struct SimConfig {
    ProtocolParams params;
    std::uint64_t trials = 1'000'000;
    std::uint64_t warmup_blocks = 10'000;  // renewal steps before the target transaction
    std::uint64_t seed = 1;
    SimMode mode = SimMode::PrivateAttackDelta;
    std::uint64_t horizon = 1'000'000;  // step cap for one post-confirmation race
    unsigned workers = 1;

    /// Throws std::invalid_argument on zero trials, warm-up, horizon or workers.
    void validate() const;
};

/// Integer histogram over {0, 1, ...}; merging is plain addition.
struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(std::uint64_t value);
    void merge(const Histogram& other);

    std::uint64_t count(std::size_t i) const { return i < counts.size() ? counts[i] : 0; }
    std::uint64_t count_at_least(std::size_t i) const;
    double freq(std::size_t i) const { return total ? static_cast<double>(count(i)) / static_cast<double>(total) : 0.0; }
    double freq_at_least(std::size_t i) const;
    double mean() const;

    bool operator==(const Histogram&) const = default;
};

/// Binomial frequency estimate.
struct Estimate {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t truncated = 0;  // trials that hit the step cap unresolved (counted as failures)

    double freq() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
    double stderr_() const {
        const double p = freq();
        return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
    }
    bool operator==(const Estimate&) const = default;
};

struct SimReport {
    SimConfig config;
    int k = 0;
    Histogram lead_hist;
    Histogram conf_count_hist;
    Estimate discard;

    double discard_freq() const { return discard.freq(); }
    double discard_stderr() const { return discard.stderr_(); }
    std::uint64_t truncated_trials() const { return discard.truncated; }
};

/// Lead after `warmup_blocks` renewal steps started from lead 0. In private
/// mode honest blocks inside a jumper's delay window are wasted; in rigged
/// mode every arrival inside it counts for the adversary.
Histogram simulate_lead(const SimConfig& cfg);

/// Blocks credited to the adversary while k jumpers are mined and published.
Histogram simulate_confirmation(const SimConfig& cfg, int k);

/// Chance the adversary closes a deficit after confirmation. Private mode runs
/// the three-way walk (jumper with 0 / 1 / 2+ window arrivals, or an
/// adversarial block) with the tie rule; rigged mode runs the two-arrival walk
/// with one leading single toss for odd deficits. Throws HorizonTooSmall when
/// truncated races reach 1e-3 of the successes.
Estimate simulate_postconf(const SimConfig& cfg, int deficit);

/// Pre-mining lead, confirmation count and post-confirmation race chained per
/// trial. Private mode uses the untruncated Delta-delay race.
SimReport simulate_end_to_end(const SimConfig& cfg, int k);

/// Number of moves from M-1 to the overall maximum M of a walk started at 0,
/// over the trials whose maximum equals `max_value` (>= 1). `total` of the
/// returned histogram is the number of such trials.
Histogram simulate_max_hit_counts(const ThreeWayWalk& w, std::uint64_t trials, std::uint64_t seed, int max_value,
                                  unsigned workers = 1);

// Continuous-time reference implementations: exponential inter-arrival times,
// Bernoulli(alpha) labels and explicit delay windows. Used to validate the
// renewal decomposition the fast simulators rely on.
Histogram raw_timeline_lead(const SimConfig& cfg);
Histogram raw_timeline_confirmation(const SimConfig& cfg, int k);
/// Per-jumper credited counts for `jumpers` consecutive jumpers of one long run.
std::vector<std::uint64_t> raw_timeline_jumper_counts(const SimConfig& cfg, std::uint64_t jumpers);

/// Positive root of E[exp(theta W)] = 1 for a step law given by its MGF;
/// throws RegimeViolation when the walk does not drift down.
template <typename Mgf>
double lundberg_exponent(Mgf mgf) {
    double hi = 1e-3;
    while (mgf(hi) < 1.0) {
        hi *= 2.0;
        if (hi > 700.0) return 700.0;
    }
    double lo = hi / 2.0;
    if (mgf(lo) >= 1.0) {
        // Drift check near zero.
        const double h = 1e-7;
        if (mgf(h) >= 1.0) throw RegimeViolation("walk does not drift downward");
        lo = h;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mgf(mid) < 1.0 ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace nakabound
