#include "nakabound/pmf.hpp"

#include <algorithm>
#include <cmath>

namespace nakabound {

double stable_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double sum_ascending(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    return stable_sum(values);
}

double Pmf::total() const { return stable_sum(masses) + tail_mass; }

double Pmf::survival(std::size_t i) const {
    if (i >= masses.size()) return 0.0;
    // Smallest terms live at the far end, so accumulate from the back.
    double sum = 0.0;
    for (std::size_t j = masses.size(); j-- > i;) sum += masses[j];
    return sum;
}

double Pmf::cdf(std::size_t i) const {
    const std::size_t n = std::min(i + 1, masses.size());
    return stable_sum(std::span<const double>(masses.data(), n));
}

double Pmf::mean() const {
    double m = 0.0;
    for (std::size_t i = masses.size(); i-- > 0;) m += static_cast<double>(i) * masses[i];
    return m;
}

Pmf convolve(const Pmf& a, const Pmf& b, std::size_t max_len) {
    Pmf out;
    if (a.masses.empty() || b.masses.empty()) {
        out.tail_mass = 1.0 - (1.0 - a.tail_mass) * (1.0 - b.tail_mass);
        return out;
    }
    const std::size_t full = a.size() + b.size() - 1;
    const std::size_t len = std::min(full, max_len);
    out.masses.assign(len, 0.0);
    std::vector<double> terms;
    double kept = 0.0;
    for (std::size_t s = 0; s < len; ++s) {
        terms.clear();
        const std::size_t lo = s >= b.size() ? s - b.size() + 1 : 0;
        const std::size_t hi = std::min(s, a.size() - 1);
        for (std::size_t i = lo; i <= hi; ++i) terms.push_back(a.masses[i] * b.masses[s - i]);
        out.masses[s] = sum_ascending(terms);
        kept += out.masses[s];
    }
    // Mass of the exact product distribution that was not stored.
    const double both_stored = stable_sum(a.masses) * stable_sum(b.masses);
    const double either_tail = a.tail_mass + b.tail_mass - a.tail_mass * b.tail_mass;
    out.tail_mass = either_tail + std::max(0.0, both_stored - kept);
    return out;
}

}  // namespace nakabound
