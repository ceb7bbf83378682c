#pragma once

#include <cstddef>
#include <vector>

namespace nakabound {

/// Protocol parameters of a proof-of-work longest-chain system.
///
/// `lambda` is the block rate (blocks/s), `delta` the network delay bound (s),
/// `alpha` the honest share of mining power and `k` the confirmation depth.
struct ProtocolParams {
    double lambda = 1.0 / 600.0;
    double delta = 10.0;
    double alpha = 0.9;
    int k = 6;

    double beta() const { return 1.0 - alpha; }

    /// Throws std::invalid_argument unless lambda > 0, delta >= 0,
    /// alpha in (0, 1] and k >= 1.
    void validate() const;
};

/// Derived quantities shared by the lower and upper bound machinery.
///
/// Two Poisson sequences are kept: `alpha_i` counts adversarial arrivals in a
/// jumper's delay window (rate beta*lambda*delta), `abar_i` counts all arrivals
/// in that window (rate lambda*delta). Both are scaled by alpha. Their suffix
/// sums give the M/G/1 coefficients a_i, b_i and their barred versions.
class DerivedParams {
public:
    explicit DerivedParams(const ProtocolParams& p);

    const ProtocolParams& params() const { return params_; }
    double beta() const { return params_.beta(); }
    double lambda_delta() const { return params_.lambda * params_.delta; }

    double alpha_i(std::size_t i) const { return at(alpha_seq_, i); }
    double abar_i(std::size_t i) const { return at(abar_seq_, i); }

    double alpha0() const { return alpha_i(0); }
    double alpha1() const { return alpha_i(1); }
    double beta1() const { return beta1_; }
    double abar() const { return abar_i(0); }
    double rho() const { return rho_; }
    double bbar_sq() const { return bbar_sq_; }

    // Row-sum coefficients for the skip-free-to-the-left lead chains.
    double a_i(std::size_t i) const;
    double b_i(std::size_t i) const;
    double abar_seq_i(std::size_t i) const;
    double bbar_seq_i(std::size_t i) const;

    /// Number of stored Poisson terms; every coefficient sequence is zero past it.
    std::size_t support() const { return alpha_seq_.size() > abar_seq_.size() ? alpha_seq_.size() : abar_seq_.size(); }

    /// Mass dropped when cutting the Poisson series (relative to alpha).
    double poisson_residual() const { return residual_; }

private:
    static double at(const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; }

    ProtocolParams params_;
    std::vector<double> alpha_seq_;
    std::vector<double> abar_seq_;
    std::vector<double> alpha_suffix_;  // alpha_suffix_[i] = sum_{j>=i} alpha_j
    std::vector<double> abar_suffix_;
    double beta1_ = 0.0;
    double rho_ = 0.0;
    double bbar_sq_ = 0.0;
    double residual_ = 0.0;
};

DerivedParams derive(const ProtocolParams& p);

struct RegimeReport {
    bool ultimate_tolerance = false;  // beta < (1-beta) / (1 + (1-beta) lambda delta)
    bool rigged_tolerance = false;    // 1 > 2 beta + alpha lambda delta
    bool upper_walk_drift = false;    // bbar < abar
    bool lower_walk_drift = false;    // beta_1 < alpha_0

    bool lower_valid() const { return ultimate_tolerance && lower_walk_drift; }
    bool upper_valid() const { return rigged_tolerance && upper_walk_drift; }
};

RegimeReport check_regime(const ProtocolParams& p);

}  // namespace nakabound
