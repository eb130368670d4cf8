#pragma once

#include "tradeoff/domain.hpp"

namespace tradeoff {

/// G(r) = (1-κ) - (0.5-κ)(1-r)^γ / (r^ψ + (1-r)^ψ)^{1/ψ} for r >= 0, and 1 - G(-r) below 0.
struct GCurve {
    double kappa = 0.0;
    double gamma = 1.0;
    double psi = 1.0;

    GCurve() = default;
    GCurve(double k, double g, double p = 1.0);

    static GCurve linear() { return GCurve(0.0, 1.0, 1.0); }
    double operator()(double r) const;
    /// G'(0) when it exists (ψ = 1, γ >= 1), used by the nonlinear duopoly candidate.
    double slope_at_zero() const;
};

double g_eval(double r, const GCurve& curve);

/// Signal precision τ, or the perfectly-comparable sentinel (τ = infinity).
struct Precision {
    double tau = 0.0;
    bool perfect = false;

    static Precision perfectly_comparable() { return {0.0, true}; }
    static Precision finite(double t) { return {t, false}; }
};

/// H(r) = (Φ^{-1}(G(r)))^2 for r in [0, 1]; perfectly comparable when G(r) = 1.
Precision tau_from_ratio(double r, const GCurve& curve);

struct SignedRatio {
    double r = 0.0;
    bool degenerate = false;
};

struct RatioParts {
    double value_diff = 0.0;
    double dissimilarity = 0.0;
    SignedRatio ratio;
};

double d_l1(const AttributeVector& x, const AttributeVector& y, const std::vector<double>& beta);
double d_cdf(const Lottery& x, const Lottery& y, const UtilityModel& u);
double d_cpf(const PayoffFlow& x, const PayoffFlow& y, const DiscountFunction& d);

double dissimilarity(const Option& x, const Option& y, const UtilityModel& model);
RatioParts ratio_parts(const Option& x, const Option& y, const UtilityModel& model);
/// (V(x) - V(y)) / d(x, y). Values within 1e-12 of ±1 are snapped to ±1 so that
/// dominance pairs map exactly onto G(±1).
SignedRatio signed_ratio(const Option& x, const Option& y, const UtilityModel& model);

/// Optimal transport cost between the utility-valued lotteries, by comonotone matching.
double min_coupling_lottery(const Lottery& x, const Lottery& y, const UtilityModel& u);
/// Cost of the independent (product) coupling; a feasible, generally suboptimal point.
double product_coupling_lottery(const Lottery& x, const Lottery& y, const UtilityModel& u);
/// Transport cost between the discount-weighted measures of two positive flows.
double min_coupling_flow(const PayoffFlow& x, const PayoffFlow& y, const DiscountFunction& d);

// Strict dominance: weakly better everywhere, strictly somewhere.
bool attribute_dominates(const AttributeVector& x, const AttributeVector& y,
                         const std::vector<double>& beta);
bool fosd_dominates(const Lottery& x, const Lottery& y);
bool temporal_dominates(const PayoffFlow& x, const PayoffFlow& y);
bool dominates(const Option& x, const Option& y, const UtilityModel& model);

}  // namespace tradeoff
