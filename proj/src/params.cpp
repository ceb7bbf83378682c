#include "nakabound/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nakabound {

namespace {

// alpha * Poisson(mean) masses, cut once terms stop mattering.
std::vector<double> scaled_poisson(double alpha, double mean, double& residual) {
    std::vector<double> out;
    const std::size_t cap = std::max<std::size_t>(64, 2 * static_cast<std::size_t>(std::ceil(mean)) + 64);
    double term = alpha * std::exp(-mean);
    double sum = 0.0;
    for (std::size_t i = 0; i <= cap; ++i) {
        if (i > 0) term *= mean / static_cast<double>(i);
        if (term == 0.0 && i > 0) break;
        out.push_back(term);
        sum += term;
        if (static_cast<double>(i) > mean && term < 1e-18 * sum) break;
    }
    residual = std::max(0.0, alpha - sum);
    return out;
}

std::vector<double> suffix_sums(const std::vector<double>& v) {
    std::vector<double> s(v.size() + 1, 0.0);
    for (std::size_t i = v.size(); i-- > 0;) s[i] = s[i + 1] + v[i];
    return s;
}

double suffix_at(const std::vector<double>& s, std::size_t i) { return i < s.size() ? s[i] : 0.0; }

}  // namespace

void ProtocolParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be positive, got " + std::to_string(lambda));
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be non-negative, got " + std::to_string(delta));
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
    if (k < 1) throw std::invalid_argument("k must be at least 1, got " + std::to_string(k));
}

DerivedParams::DerivedParams(const ProtocolParams& p) : params_(p) {
    p.validate();
    const double beta = p.beta();
    const double ld = p.lambda * p.delta;

    double r1 = 0.0, r2 = 0.0;
    alpha_seq_ = scaled_poisson(p.alpha, beta * ld, r1);
    abar_seq_ = scaled_poisson(p.alpha, ld, r2);
    residual_ = std::max(r1, r2);
    alpha_suffix_ = suffix_sums(alpha_seq_);
    abar_suffix_ = suffix_sums(abar_seq_);

    // beta_1 = 1 - alpha_0 - alpha_1 = beta + sum_{j>=2} alpha_j, summed without cancellation.
    beta1_ = beta + suffix_at(alpha_suffix_, 2);

    const double abar = abar_i(0);
    rho_ = abar * (1.0 + ld + beta - abar);
    // 1 - abar^2 - rho, with the abar^2 terms cancelled analytically.
    bbar_sq_ = 1.0 - abar * (1.0 + ld + beta);
}

double DerivedParams::a_i(std::size_t i) const {
    return suffix_at(alpha_suffix_, i) + (i <= 2 ? beta() : 0.0);
}

double DerivedParams::b_i(std::size_t i) const {
    return suffix_at(alpha_suffix_, i) + (i <= 1 ? beta() : 0.0);
}

double DerivedParams::abar_seq_i(std::size_t i) const {
    return suffix_at(abar_suffix_, i) + (i <= 2 ? beta() : 0.0);
}

double DerivedParams::bbar_seq_i(std::size_t i) const {
    return suffix_at(abar_suffix_, i) + (i <= 1 ? beta() : 0.0);
}

DerivedParams derive(const ProtocolParams& p) { return DerivedParams(p); }

RegimeReport check_regime(const ProtocolParams& p) {
    const DerivedParams d(p);
    const double beta = p.beta();
    const double ld = p.lambda * p.delta;
    RegimeReport r;
    r.ultimate_tolerance = beta < (1.0 - beta) / (1.0 + (1.0 - beta) * ld);
    r.rigged_tolerance = 1.0 > 2.0 * beta + p.alpha * ld;
    r.upper_walk_drift = std::sqrt(std::max(0.0, d.bbar_sq())) < d.abar();
    r.lower_walk_drift = d.beta1() < d.alpha0();
    return r;
}

}  // namespace nakabound
