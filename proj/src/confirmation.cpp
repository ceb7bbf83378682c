#include "nakabound/confirmation.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nakabound/errors.hpp"

namespace nakabound {

namespace {

constexpr std::size_t kLogGammaThreshold = 60;

// power * log(x), with 0 * log(0) taken as 0.
double log_power(double x, double power) {
    if (power == 0.0) return 0.0;
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    return power * std::log(x);
}

double log_binomial(std::size_t top, std::size_t n) {
    return std::lgamma(static_cast<double>(top) + 1.0) - std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(top - n) + 1.0);
}

// alpha * sum_{j<=c} beta^{c-j} w_j, where w_j = alpha * Poisson(j) is `weight(j)`.
template <typename Weight>
double geometric_poisson(double beta, std::size_t c, Weight weight) {
    std::vector<double> terms;
    terms.reserve(c + 1);
    for (std::size_t j = 0; j <= c; ++j) {
        const double w = weight(j);
        if (w == 0.0) continue;
        terms.push_back(w * std::pow(beta, static_cast<double>(c - j)));
    }
    return sum_ascending(terms);
}

}  // namespace

std::string_view to_string(ConfVariant v) { return v == ConfVariant::LowerS ? "lower" : "upper"; }

std::string_view to_string(PmfForm f) { return f == PmfForm::Printed ? "printed" : "composition"; }

double binomial_coefficient(std::size_t top, std::size_t n) {
    if (n > top) return 0.0;
    if (top > kLogGammaThreshold) return std::exp(log_binomial(top, n));
    if (n > top - n) n = top - n;
    double c = 1.0;
    for (std::size_t i = 1; i <= n; ++i) c = c * static_cast<double>(top - n + i) / static_cast<double>(i);
    return std::round(c);
}

double per_jumper_pmf_lower(const DerivedParams& d, std::size_t c) {
    return geometric_poisson(d.beta(), c, [&](std::size_t j) { return d.alpha_i(j); });
}

double per_jumper_pmf_upper(const DerivedParams& d, std::size_t c) {
    return geometric_poisson(d.beta(), c, [&](std::size_t j) { return d.abar_i(j); });
}

double per_jumper_pmf_lower_printed(const DerivedParams& d, std::size_t c) {
    const ProtocolParams& p = d.params();
    const double beta = d.beta();
    const double ld = d.lambda_delta();
    double sum = 0.0;
    double term = 1.0;
    for (std::size_t j = 0; j <= c; ++j) {
        if (j > 0) term *= ld / static_cast<double>(j);
        sum += term;
    }
    return p.alpha * std::pow(beta, static_cast<double>(c)) * std::exp(-beta * ld) * sum;
}

double per_jumper_pmf_upper_printed(const DerivedParams& d, std::size_t c) {
    const double beta = d.beta();
    if (!(beta > 0.0)) throw std::invalid_argument("printed upper per-jumper law needs beta > 0");
    const double ld = d.lambda_delta();
    const double x = ld / beta;
    double sum = 0.0;
    double term = 1.0;
    for (std::size_t j = 0; j <= c; ++j) {
        if (j > 0) term *= x / static_cast<double>(j);
        sum += term;
    }
    return d.params().alpha * std::pow(beta, static_cast<double>(c)) * std::exp(-ld) * sum;
}

Pmf per_jumper_pmf(const DerivedParams& d, ConfVariant v, std::size_t len) {
    Pmf out;
    out.masses.reserve(len);
    for (std::size_t c = 0; c < len; ++c)
        out.masses.push_back(v == ConfVariant::LowerS ? per_jumper_pmf_lower(d, c) : per_jumper_pmf_upper(d, c));
    out.tail_mass = std::max(0.0, 1.0 - stable_sum(out.masses));
    return out;
}

Pmf conf_pmf_by_convolution(const DerivedParams& d, ConfVariant v, int k, std::size_t len) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const Pmf single = per_jumper_pmf(d, v, len);
    Pmf acc = single;
    for (int i = 1; i < k; ++i) acc = convolve(acc, single, len);
    return acc;
}

double conf_mass_closed_form(const DerivedParams& d, ConfVariant v, int k, std::size_t s) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const double beta = d.beta();
    const double xk = d.lambda_delta() * static_cast<double>(k);
    const double head = v == ConfVariant::LowerS ? d.alpha0() : d.abar();
    const std::size_t kk = static_cast<std::size_t>(k);

    // Lower: alpha_0^k beta^s sum_n binom(k-1+n, n) (lambda delta k)^{s-n} / (s-n)!
    // Upper: abar_0^k sum_n binom(k-1+n, n) (lambda delta k)^{s-n} / (s-n)! beta^n
    std::vector<double> terms;
    terms.reserve(s + 1);
    for (std::size_t n = 0; n <= s; ++n) {
        const std::size_t m = s - n;
        const std::size_t top = kk - 1 + n;
        const double beta_power = v == ConfVariant::LowerS ? static_cast<double>(s) : static_cast<double>(n);
        double term;
        if (top > kLogGammaThreshold) {
            const double lt = log_power(head, static_cast<double>(k)) + log_power(beta, beta_power) +
                              log_binomial(top, n) + log_power(xk, static_cast<double>(m)) -
                              std::lgamma(static_cast<double>(m) + 1.0);
            term = std::exp(lt);
        } else {
            term = std::pow(head, static_cast<double>(k)) * std::pow(beta, beta_power) *
                   binomial_coefficient(top, n) * std::pow(xk, static_cast<double>(m)) /
                   std::tgamma(static_cast<double>(m) + 1.0);
        }
        if (term > 0.0) terms.push_back(term);
    }
    return sum_ascending(terms);
}

ConfPmf conf_pmf(const DerivedParams& d, ConfVariant v, int k, double eps, PmfForm form, std::size_t min_support) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    ConfPmf out;
    out.variant = v;
    out.k = k;

    double sum = 0.0, comp = 0.0;  // Neumaier running sum of the closed form
    while (1.0 - (sum + comp) >= eps || out.size() < min_support) {
        if (out.size() >= kIndexCap)
            throw NonConvergence("confirmation PMF reached index cap " + std::to_string(kIndexCap) +
                                 " with mass " + std::to_string(sum + comp));
        const double m = conf_mass_closed_form(d, v, k, out.size());
        out.masses.push_back(m);
        const double t = sum + m;
        comp += std::abs(sum) >= std::abs(m) ? (sum - t) + m : (m - t) + sum;
        sum = t;
    }

    const Pmf conv = conf_pmf_by_convolution(d, v, k, out.size());
    for (std::size_t s = 0; s < out.size(); ++s)
        out.route_discrepancy = std::max(out.route_discrepancy, std::abs(out.masses[s] - conv[s]));

    if (form == PmfForm::Composition) out.masses = conv.masses;
    out.tail_mass = std::max(0.0, 1.0 - stable_sum(out.masses));
    return out;
}

}  // namespace nakabound
