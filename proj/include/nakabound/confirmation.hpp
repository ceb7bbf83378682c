#pragma once

#include <cstddef>
#include <string_view>

#include "nakabound/lead.hpp"
#include "nakabound/params.hpp"
#include "nakabound/pmf.hpp"

namespace nakabound {

enum class ConfVariant {
    LowerS,  // adversarial blocks only (Delta-delay private attack)
    UpperS,  // adversarial plus rigged blocks
};

/// How the confirmation-count PMF is evaluated.
enum class PmfForm {
    Printed,      // closed-form Pascal/Poisson mixture
    Composition,  // k-fold convolution of the per-jumper geometric+Poisson law
};

std::string_view to_string(ConfVariant v);
std::string_view to_string(PmfForm f);

/// Distribution of blocks credited to the adversary while the target block
/// becomes k-deep. `route_discrepancy` is the largest pointwise gap between the
/// closed form and the k-fold convolution, both of which are always computed.
struct ConfPmf : Pmf {
    ConfVariant variant = ConfVariant::LowerS;
    int k = 1;
    double route_discrepancy = 0.0;
};

// Per-jumper count C: geometric(alpha) adversarial blocks before the next
// honest block, plus Poisson arrivals inside its delay window.
double per_jumper_pmf_lower(const DerivedParams& d, std::size_t c);
// Same law written as alpha beta^c e^{-beta lambda delta} sum_{j<=c} (lambda delta)^j / j!.
double per_jumper_pmf_lower_printed(const DerivedParams& d, std::size_t c);
double per_jumper_pmf_upper(const DerivedParams& d, std::size_t c);
// alpha beta^c e^{-lambda delta} sum_{j<=c} (lambda delta / beta)^j / j!; needs beta > 0.
double per_jumper_pmf_upper_printed(const DerivedParams& d, std::size_t c);

/// First `len` masses of the per-jumper law; tail_mass holds the rest.
Pmf per_jumper_pmf(const DerivedParams& d, ConfVariant v, std::size_t len);

/// k-fold self-convolution of the per-jumper law, first `len` entries.
Pmf conf_pmf_by_convolution(const DerivedParams& d, ConfVariant v, int k, std::size_t len);

/// Closed-form P(S = s).
double conf_mass_closed_form(const DerivedParams& d, ConfVariant v, int k, std::size_t s);

ConfPmf conf_pmf(const DerivedParams& d, ConfVariant v, int k, double eps = kDefaultEps,
                 PmfForm form = PmfForm::Printed, std::size_t min_support = 0);

inline ConfPmf conf_pmf_lower(const DerivedParams& d, int k, double eps = kDefaultEps,
                              PmfForm form = PmfForm::Printed, std::size_t min_support = 0) {
    return conf_pmf(d, ConfVariant::LowerS, k, eps, form, min_support);
}

inline ConfPmf conf_pmf_upper(const DerivedParams& d, int k, double eps = kDefaultEps,
                              PmfForm form = PmfForm::Printed, std::size_t min_support = 0) {
    return conf_pmf(d, ConfVariant::UpperS, k, eps, form, min_support);
}

/// binom(top, n) by multiplicative recurrence, log-gamma once top > 60.
double binomial_coefficient(std::size_t top, std::size_t n);

}  // namespace nakabound
