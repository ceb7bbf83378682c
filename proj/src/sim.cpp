#include "nakabound/sim.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "nakabound/rng.hpp"

namespace nakabound {

std::string_view to_string(SimMode m) { return m == SimMode::PrivateAttackDelta ? "private-delta" : "rigged"; }

void SimConfig::validate() const {
    params.validate();
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (warmup_blocks < 1) throw std::invalid_argument("warmup must be at least 1");
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
}

void Histogram::add(std::uint64_t value) {
    if (value >= counts.size()) counts.resize(value + 1, 0);
    ++counts[value];
    ++total;
}

void Histogram::merge(const Histogram& other) {
    if (other.counts.size() > counts.size()) counts.resize(other.counts.size(), 0);
    for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

std::uint64_t Histogram::count_at_least(std::size_t i) const {
    std::uint64_t n = 0;
    for (std::size_t j = i; j < counts.size(); ++j) n += counts[j];
    return n;
}

double Histogram::freq_at_least(std::size_t i) const {
    return total ? static_cast<double>(count_at_least(i)) / static_cast<double>(total) : 0.0;
}

double Histogram::mean() const {
    if (!total) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) s += static_cast<double>(i) * static_cast<double>(counts[i]);
    return s / static_cast<double>(total);
}

namespace {

constexpr std::uint64_t kChunk = 4096;
// Per-race probability of a walk that is abandoned ever coming back.
constexpr double kGiveUpBias = 1e-12;

// Runs trials [0, n) in fixed chunks spread over `workers` threads. Each
// chunk's result depends only on its trial indices, and merging is integer
// addition, so the outcome does not depend on the worker count.
template <typename Acc, typename Body>
Acc run_trials(std::uint64_t n, unsigned workers, Body body) {
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, chunks)));
    std::vector<Acc> partial(workers);
    auto work = [&](unsigned w) {
        for (std::uint64_t c = w; c < chunks; c += workers) {
            const std::uint64_t lo = c * kChunk;
            const std::uint64_t hi = std::min(n, lo + kChunk);
            for (std::uint64_t t = lo; t < hi; ++t) body(t, partial[w]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& th : threads) th.join();
    }
    Acc out = std::move(partial[0]);
    for (unsigned w = 1; w < workers; ++w) out.merge(partial[w]);
    return out;
}

struct HistAcc {
    Histogram h;
    void merge(const HistAcc& o) { h.merge(o.h); }
};

struct EstAcc {
    Estimate e;
    void merge(const EstAcc& o) {
        e.trials += o.e.trials;
        e.successes += o.e.successes;
        e.truncated += o.e.truncated;
    }
};

// Renewal-form primitives of one parameter point.
class Model {
public:
    Model(const ProtocolParams& p, SimMode mode)
        : p_(p),
          mode_(mode),
          window_(mode == SimMode::RiggedModel ? p.lambda * p.delta : p.beta() * p.lambda * p.delta) {}

    // Blocks credited to the adversary inside one jumper's delay window.
    template <typename Rng>
    std::uint64_t window_arrivals(Rng& rng) const {
        return window_(rng);
    }

    template <typename Rng>
    std::uint64_t lead_step(Rng& rng, std::uint64_t lead) const {
        if (rng.bernoulli(p_.beta())) return lead + 1;
        const std::uint64_t j = window_(rng);
        return (lead > 0 ? lead - 1 : 0) + j;
    }

    template <typename Rng>
    std::uint64_t lead(Rng& rng, std::uint64_t warmup) const {
        std::uint64_t l = 0;
        for (std::uint64_t i = 0; i < warmup; ++i) l = lead_step(rng, l);
        return l;
    }

    // Credited blocks from one jumper's publication to the next one's.
    template <typename Rng>
    std::uint64_t jumper_count(Rng& rng) const {
        std::uint64_t m = 0;
        while (rng.bernoulli(p_.beta())) ++m;
        return m + window_(rng);
    }

    template <typename Rng>
    std::uint64_t confirmation(Rng& rng, int k) const {
        std::uint64_t s = 0;
        for (int i = 0; i < k; ++i) s += jumper_count(rng);
        return s;
    }

    const ProtocolParams& params() const { return p_; }
    SimMode mode() const { return mode_; }
    double window_mean() const { return window_.mean(); }

private:
    ProtocolParams p_;
    SimMode mode_;
    PoissonSampler window_;
};

enum class RaceOutcome { Win, Loss, Truncated };

// Levels below the target past which a race is abandoned as lost.
std::int64_t give_up_depth(double theta) {
    return static_cast<std::int64_t>(std::ceil(-std::log(kGiveUpBias) / theta)) + 2;
}

// Post-confirmation race of the Delta-delay private attack. The adversary
// wins once its chain ties the honest one; blocks mined inside a jumper's
// window can be released before that jumper is published.
class PrivateRace {
public:
    PrivateRace(const Model& m, bool truncated) : m_(m), truncated_(truncated) {
        const double beta = m.params().beta();
        const double alpha = m.params().alpha;
        const double mu = m.window_mean();
        double theta;
        if (truncated) {
            const ThreeWayWalk w = ThreeWayWalk::from(DerivedParams(m.params()));
            theta = lundberg_exponent([&](double t) {
                return w.p_right * std::exp(t) + w.p_stay + w.p_left * std::exp(-t);
            });
        } else {
            theta = lundberg_exponent([&](double t) {
                return beta * std::exp(t) + alpha * std::exp(-t) * std::exp(mu * std::expm1(t));
            });
        }
        give_up_ = give_up_depth(theta);
    }

    template <typename Rng>
    RaceOutcome run(Rng& rng, std::int64_t deficit, std::uint64_t horizon) const {
        if (deficit <= 0) return RaceOutcome::Win;
        const double beta = m_.params().beta();
        std::int64_t x = 0;
        for (std::uint64_t step = 0; step < horizon; ++step) {
            if (rng.bernoulli(beta)) {
                if (++x >= deficit) return RaceOutcome::Win;
            } else {
                std::int64_t j = static_cast<std::int64_t>(m_.window_arrivals(rng));
                if (truncated_) {
                    // Three outcomes: j = 0 steps left, j = 1 ties (T' = T + 1), j >= 2 steps right.
                    j = std::min<std::int64_t>(j, 2);
                    if (j >= 1 && x + 1 >= deficit) return RaceOutcome::Win;
                } else if (x + j >= deficit) {
                    return RaceOutcome::Win;
                }
                x += j - 1;
            }
            if (deficit - x >= give_up_) return RaceOutcome::Loss;
        }
        return RaceOutcome::Truncated;
    }

private:
    const Model& m_;
    bool truncated_;
    std::int64_t give_up_ = 0;
};

enum class PairOutcome { HonestBoth, Split, AdversaryBoth };

// Rigged post-confirmation race, two arrivals at a time. Timing is measured
// from the end of the previous pair.
class RiggedRace {
public:
    explicit RiggedRace(const ProtocolParams& p) : p_(p) {
        const TwoStepWalk w = TwoStepWalk::from(DerivedParams(p));
        const double theta = lundberg_exponent([&](double t) {
            return w.p2_right * std::exp(2.0 * t) + w.p2_stay + w.p2_left * std::exp(-2.0 * t);
        });
        give_up_ = give_up_depth(theta);
    }

    template <typename Rng>
    PairOutcome pair(Rng& rng) const {
        const double t1 = rng.exponential(p_.lambda);
        const bool h1 = rng.bernoulli(p_.alpha);
        const double t2 = t1 + rng.exponential(p_.lambda);
        const bool h2 = rng.bernoulli(p_.alpha);
        if (t1 > p_.delta) {
            if (h1) return (h2 && t2 - t1 > p_.delta) ? PairOutcome::HonestBoth : PairOutcome::Split;
            return h2 ? PairOutcome::Split : PairOutcome::AdversaryBoth;
        }
        // First arrival falls in the previous window and is rigged.
        return (h2 && t2 > p_.delta) ? PairOutcome::Split : PairOutcome::AdversaryBoth;
    }

    template <typename Rng>
    RaceOutcome run(Rng& rng, std::int64_t deficit, std::uint64_t horizon) const {
        if (deficit <= 0) return RaceOutcome::Win;
        if (deficit % 2 != 0) {
            const double t = rng.exponential(p_.lambda);
            const bool honest = rng.bernoulli(p_.alpha) && t > p_.delta;
            deficit += honest ? 1 : -1;
            if (deficit <= 0) return RaceOutcome::Win;
        }
        std::int64_t x = 0;
        for (std::uint64_t step = 0; step < horizon; ++step) {
            switch (pair(rng)) {
                case PairOutcome::AdversaryBoth:
                    x += 2;
                    if (x >= deficit) return RaceOutcome::Win;
                    break;
                case PairOutcome::HonestBoth:
                    x -= 2;
                    break;
                case PairOutcome::Split:
                    break;
            }
            if (deficit - x >= give_up_) return RaceOutcome::Loss;
        }
        return RaceOutcome::Truncated;
    }

private:
    ProtocolParams p_;
    std::int64_t give_up_ = 0;
};

void record(Estimate& e, RaceOutcome o) {
    ++e.trials;
    if (o == RaceOutcome::Win) ++e.successes;
    if (o == RaceOutcome::Truncated) ++e.truncated;
}

void check_horizon(const Estimate& e, std::uint64_t horizon) {
    if (e.truncated == 0) return;
    if (static_cast<double>(e.truncated) >= 1e-3 * static_cast<double>(e.successes))
        throw HorizonTooSmall(std::to_string(e.truncated) + " of " + std::to_string(e.trials) +
                              " races hit the " + std::to_string(horizon) + "-step horizon");
}

// Continuous-time arrivals with explicit delay windows.
class RawTimeline {
public:
    RawTimeline(const ProtocolParams& p, SimMode mode, Xoshiro256 rng)
        : p_(p), rigged_(mode == SimMode::RiggedModel), rng_(rng) {}

    struct Arrival {
        bool in_window;
        bool honest;
    };

    Arrival next() {
        t_ += rng_.exponential(p_.lambda);
        return {t_ < window_end_, rng_.bernoulli(p_.alpha)};
    }

    // Honest arrival outside any window: becomes a jumper and opens its window.
    void open_window() { window_end_ = t_ + p_.delta; }

    // Whether an arrival inside a window is credited to the adversary.
    bool credited_in_window(const Arrival& a) const { return rigged_ || !a.honest; }

private:
    ProtocolParams p_;
    bool rigged_;
    Xoshiro256 rng_;
    double t_ = 0.0;
    double window_end_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

Histogram simulate_lead(const SimConfig& cfg) {
    cfg.validate();
    const Model m(cfg.params, cfg.mode);
    return run_trials<HistAcc>(cfg.trials, cfg.workers,
                               [&](std::uint64_t t, HistAcc& acc) {
                                   Xoshiro256 rng = trial_stream(cfg.seed, t);
                                   acc.h.add(m.lead(rng, cfg.warmup_blocks));
                               })
        .h;
}

Histogram simulate_confirmation(const SimConfig& cfg, int k) {
    cfg.validate();
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const Model m(cfg.params, cfg.mode);
    return run_trials<HistAcc>(cfg.trials, cfg.workers,
                               [&](std::uint64_t t, HistAcc& acc) {
                                   Xoshiro256 rng = trial_stream(cfg.seed, t);
                                   acc.h.add(m.confirmation(rng, k));
                               })
        .h;
}

Estimate simulate_postconf(const SimConfig& cfg, int deficit) {
    cfg.validate();
    if (deficit < 1) throw std::invalid_argument("deficit must be at least 1");
    const Model m(cfg.params, cfg.mode);
    Estimate e;
    if (cfg.mode == SimMode::PrivateAttackDelta) {
        const PrivateRace race(m, true);
        e = run_trials<EstAcc>(cfg.trials, cfg.workers,
                               [&](std::uint64_t t, EstAcc& acc) {
                                   Xoshiro256 rng = trial_stream(cfg.seed, t);
                                   record(acc.e, race.run(rng, deficit, cfg.horizon));
                               })
                .e;
    } else {
        const RiggedRace race(cfg.params);
        e = run_trials<EstAcc>(cfg.trials, cfg.workers,
                               [&](std::uint64_t t, EstAcc& acc) {
                                   Xoshiro256 rng = trial_stream(cfg.seed, t);
                                   record(acc.e, race.run(rng, deficit, cfg.horizon));
                               })
                .e;
    }
    check_horizon(e, cfg.horizon);
    return e;
}

SimReport simulate_end_to_end(const SimConfig& cfg, int k) {
    cfg.validate();
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const Model m(cfg.params, cfg.mode);

    struct Acc {
        Histogram lead, conf;
        Estimate e;
        void merge(const Acc& o) {
            lead.merge(o.lead);
            conf.merge(o.conf);
            e.trials += o.e.trials;
            e.successes += o.e.successes;
            e.truncated += o.e.truncated;
        }
    };

    auto run_with = [&](const auto& race) {
        return run_trials<Acc>(cfg.trials, cfg.workers, [&](std::uint64_t t, Acc& acc) {
            Xoshiro256 rng = trial_stream(cfg.seed, t);
            const std::uint64_t lead = m.lead(rng, cfg.warmup_blocks);
            const std::uint64_t conf = m.confirmation(rng, k);
            acc.lead.add(lead);
            acc.conf.add(conf);
            const std::int64_t deficit =
                static_cast<std::int64_t>(k) - static_cast<std::int64_t>(lead) - static_cast<std::int64_t>(conf);
            record(acc.e, race.run(rng, deficit, cfg.horizon));
        });
    };

    Acc acc = cfg.mode == SimMode::PrivateAttackDelta ? run_with(PrivateRace(m, false)) : run_with(RiggedRace(cfg.params));
    check_horizon(acc.e, cfg.horizon);

    SimReport r;
    r.config = cfg;
    r.k = k;
    r.lead_hist = std::move(acc.lead);
    r.conf_count_hist = std::move(acc.conf);
    r.discard = acc.e;
    return r;
}

Histogram simulate_max_hit_counts(const ThreeWayWalk& w, std::uint64_t trials, std::uint64_t seed, int max_value,
                                  unsigned workers) {
    if (max_value < 1) throw std::invalid_argument("max_value must be at least 1");
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    const std::int64_t give_up = give_up_depth(lundberg_exponent([&](double t) {
        return w.p_right * std::exp(t) + w.p_stay + w.p_left * std::exp(-t);
    }));
    const double stay_or_right = w.p_stay + w.p_right;
    return run_trials<HistAcc>(trials, workers,
                               [&](std::uint64_t t, HistAcc& acc) {
                                   Xoshiro256 rng = trial_stream(seed, t);
                                   std::int64_t x = 0, top = 0, hits = 0;
                                   while (top - x < give_up) {
                                       const double u = rng.uniform();
                                       if (u < w.p_right) {
                                           ++x;
                                           if (x > top) {
                                               top = x;
                                               hits = 1;
                                           } else if (x == top) {
                                               ++hits;
                                           }
                                       } else if (u >= stay_or_right) {
                                           --x;
                                       }
                                       if (top > max_value) return;
                                   }
                                   if (top == max_value) acc.h.add(static_cast<std::uint64_t>(hits));
                               })
        .h;
}

Histogram raw_timeline_lead(const SimConfig& cfg) {
    cfg.validate();
    return run_trials<HistAcc>(cfg.trials, cfg.workers,
                               [&](std::uint64_t t, HistAcc& acc) {
                                   RawTimeline line(cfg.params, cfg.mode, trial_stream(cfg.seed, t));
                                   std::uint64_t lead = 0, steps = 0;
                                   for (;;) {
                                       const auto a = line.next();
                                       if (a.in_window) {
                                           if (line.credited_in_window(a)) ++lead;
                                           continue;
                                       }
                                       if (steps == cfg.warmup_blocks) break;
                                       ++steps;
                                       if (a.honest) {
                                           lead = lead > 0 ? lead - 1 : 0;
                                           line.open_window();
                                       } else {
                                           ++lead;
                                       }
                                   }
                                   acc.h.add(lead);
                               })
        .h;
}

Histogram raw_timeline_confirmation(const SimConfig& cfg, int k) {
    cfg.validate();
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    return run_trials<HistAcc>(cfg.trials, cfg.workers,
                               [&](std::uint64_t t, HistAcc& acc) {
                                   RawTimeline line(cfg.params, cfg.mode, trial_stream(cfg.seed, t));
                                   std::uint64_t count = 0;
                                   int jumpers = 0;
                                   for (;;) {
                                       const auto a = line.next();
                                       if (a.in_window) {
                                           if (line.credited_in_window(a)) ++count;
                                           continue;
                                       }
                                       if (jumpers == k) break;
                                       if (a.honest) {
                                           ++jumpers;
                                           line.open_window();
                                       } else {
                                           ++count;
                                       }
                                   }
                                   acc.h.add(count);
                               })
        .h;
}

std::vector<std::uint64_t> raw_timeline_jumper_counts(const SimConfig& cfg, std::uint64_t jumpers) {
    cfg.validate();
    RawTimeline line(cfg.params, cfg.mode, trial_stream(cfg.seed, 0));
    std::vector<std::uint64_t> out;
    out.reserve(jumpers);
    std::uint64_t count = 0;
    bool started = false;
    while (out.size() < jumpers) {
        const auto a = line.next();
        if (a.in_window) {
            if (line.credited_in_window(a)) ++count;
            continue;
        }
        if (a.honest) {
            // The previous jumper's window just closed: its interval is complete.
            if (started) out.push_back(count);
            started = true;
            count = 0;
            line.open_window();
        } else {
            ++count;
        }
    }
    return out;
}

}  // namespace nakabound
