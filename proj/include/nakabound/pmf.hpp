#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nakabound {

/// Probability mass function on {0, 1, 2, ...} stored up to a truncation index.
///
/// `tail_mass` is the probability of all values >= masses.size(). It is kept
/// apart from `masses` so callers can decide which side of a bound it lands on.
struct Pmf {
    std::vector<double> masses;
    double tail_mass = 0.0;

    std::size_t size() const { return masses.size(); }
    double operator[](std::size_t i) const { return i < masses.size() ? masses[i] : 0.0; }

    /// Sum of stored masses plus tail_mass.
    double total() const;

    /// P(X >= i) over stored masses only; tail_mass is excluded.
    double survival(std::size_t i) const;

    /// P(X >= i) counting tail_mass as mass at or beyond every index.
    double survival_with_tail(std::size_t i) const { return survival(i) + tail_mass; }

    /// P(X <= i) over stored masses.
    double cdf(std::size_t i) const;

    double mean() const;
};

/// Sum of two independent variables, truncated to at most `max_len` entries.
/// Entries below min(max_len, a.size() + b.size() - 1) are exact; tail masses
/// combine as 1 - (1 - ta)(1 - tb) plus whatever `max_len` cut off.
Pmf convolve(const Pmf& a, const Pmf& b, std::size_t max_len);

/// Compensated (Neumaier) summation.
double stable_sum(std::span<const double> values);

/// Sums non-negative terms smallest first; reorders `values`.
double sum_ascending(std::vector<double>& values);

}  // namespace nakabound
