#pragma once

#include <string>
#include <vector>

#include "tradeoff/bayes_engine.hpp"

namespace tradeoff {

/// One simulated point: series label, x coordinate, simulated mean with MC standard
/// error, the distortion-free benchmark, and the mass excluded by the edge rules.
struct FigureRow {
    std::string series;
    double x = 0.0;
    double mean = 0.0;
    double se = 0.0;
    double truth = 0.0;
    double excluded = 0.0;
};

struct FigureSettings {
    GCurve curve{0.0, 0.5};
    int list_size = 15;
    SimConfig sim{};
};

/// Mean CE and PE of equal-EV simple lotteries (w_l, p_l) as a function of p_l.
struct CePeReversalSpec {
    double anchor_payoff = 23.5;
    double anchor_prob = 0.19;
    std::vector<double> probs;  // default 0.19, 0.24, ..., 0.94
    std::vector<double> alphas{1.0, 0.9};
    double pe_yardstick = 24.0;
};
std::vector<FigureRow> figure_ce_pe_reversal(const CePeReversalSpec& spec, const FigureSettings& s);

/// Mean PVE and TE of delayed payments with equal present value.
struct PveTeReversalSpec {
    double anchor_amount = 8.25;
    double anchor_delay = 30.0;
    double delta = 0.95;
    double period_days = 30.0;
    std::vector<double> delays;  // default 30, 60, ..., 720
    double te_yardstick = 27.5;
    std::vector<double> te_grid = default_te_grid();
};
std::vector<FigureRow> figure_pve_te_reversal(const PveTeReversalSpec& spec, const FigureSettings& s);

/// Normalized CE of (w̄, p) against p.
struct PwfSpec {
    double wbar = 24.0;
    double alpha = 1.0;
    std::vector<double> probs;  // default 0.05, 0.10, ..., 0.95
};
std::vector<FigureRow> figure_pwf(const PwfSpec& spec, const FigureSettings& s);

/// PE of certain payments (w_c, 1) against w_c / w̄.
std::vector<FigureRow> figure_pwf_pe(const PwfSpec& spec, const FigureSettings& s);

/// Discount curves implied by PVE (x = delay) and TE (x = normalized amount).
struct DiscountSpec {
    UtilityModel discount = ExponentialDiscount(0.95, 30.0);
    double mbar = 27.5;
    std::vector<double> delays;   // PVE anchors; default 7, 30, 60, ..., 1440
    std::vector<double> amounts;  // TE anchors as m_c / m̄; default matches the PVE delays
    std::vector<double> te_grid = default_te_grid();
};
std::vector<FigureRow> figure_discount_pve(const DiscountSpec& spec, const FigureSettings& s);
std::vector<FigureRow> figure_discount_te(const DiscountSpec& spec, const FigureSettings& s);

/// PVE and TE curves under generalized hyperbolic discounting, one series per ζ.
struct HyperbolicSpec {
    double iota = 0.159;
    std::vector<double> zetas{0.1, 0.3};
    double period_days = 24.0;
    double mbar = 27.5;
};
std::vector<FigureRow> figure_hyperbolic(const HyperbolicSpec& spec, const FigureSettings& s);

/// ρ(y, x | {z}) for the three decoy cases with x = (1,2), y = (2,1).
std::vector<FigureRow> figure_decoy_cases(const FigureSettings& s);

/// Mean valuation of `anchor` on `list`.
ValuationSummary simulate_valuation(const Option& anchor, const PriceList& list, const UtilityModel& model,
                                    const FigureSettings& s);

const std::vector<std::string>& figure_ids();
std::vector<FigureRow> run_figure(const std::string& id, const FigureSettings& s);

}  // namespace tradeoff
