#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tradeoff/complexity.hpp"

namespace tradeoff {

/// Two-good market on the segment q1 + q2 = Q with q in [q_lo, q_hi]^2.
struct MarketConfig {
    double c_a = 1.0;
    double c_b = 1.0;
    double q_lo = 0.0;
    double q_hi = 1.0;
    GCurve curve = GCurve::linear();

    void validate() const;
    double total() const { return q_lo + q_hi; }
    /// Largest quantity dissimilarity two firms can implement: 2 (q_hi - q_lo).
    double max_dissimilarity() const { return 2.0 * (q_hi - q_lo); }
};

bool is_linear(const GCurve& g);

/// Who takes the market when identical offers carry identical prices.
enum class TieRule { Split, FirstWins, SecondWins };

/// Share of firm i against j: G((p_j - p_i) / (Δq + |p_i - p_j|)). At Δq = 0 the
/// comparison is a dominance step and exact ties follow `tie`.
double duopoly_demand(double p_i, double p_j, double dq, const GCurve& curve, TieRule tie = TieRule::Split);

/// Profits (Π_a, Π_b); the tie goes to the lower-cost firm.
std::array<double, 2> duopoly_profits(double p_a, double p_b, double c_a, double c_b, double dq,
                                      const GCurve& curve);

struct DuopolyResult {
    double p_a = 0.0, p_b = 0.0;
    double share_a = 0.0, share_b = 0.0;
    double profit_a = 0.0, profit_b = 0.0;
    bool closed_form = true;      // false: first-order candidate under a nonlinear curve
    bool share_b_increasing = false;   // d share_b / dΔq > 0 at this point
    bool profit_b_increasing = false;  // d Π_b / dΔq > 0 at this point
    double residual = 0.0;        // best grid deviation gain
};

/// Linear G: p = c + Δq for equal costs, otherwise p_a = c_b + Δq and
/// p_b = c_b + Δq/4 + (3/4) sqrt(Δq² + (8/9) Δq Δc), with a the low-cost firm.
/// Nonlinear G with equal costs: candidate c + Δq / (2 G'(0)).
DuopolyResult duopoly_equilibrium(double c_a, double c_b, double dq, const GCurve& curve = GCurve::linear());

enum class MoverOrder { Simultaneous, HighCostFirst };
enum class StageRegime { Symmetric, Imitate, Obfuscate, Indifferent };
std::string regime_name(StageRegime r);

struct StageOutcome {
    StageRegime regime = StageRegime::Symmetric;
    double dq = 0.0;
    DuopolyResult prices;
    double profit_a_imitate = 0.0;    // Π_a at Δq = 0
    double profit_a_obfuscate = 0.0;  // Π_a at the maximal dissimilarity
};

/// Location stage followed by pricing. Symmetric costs locate maximally apart. With a
/// cost gap the high-cost firm moves first and the low-cost firm compares imitation
/// (Δq = 0) with obfuscation (Δq maximal) by their equilibrium profits.
StageOutcome location_stage_outcome(const MarketConfig& cfg, MoverOrder order = MoverOrder::HighCostFirst);

// Three firms: a and b at dissimilarity Δq, s sharing a's quantities at a higher cost.

struct ThreeFirmDemand {
    std::array<double, 3> share{};   // a, b, s
    std::array<double, 3> profit{};
    bool formula = true;  // false: event enumeration outside the analyzed orderings
};

/// Binary-signal demand with linear H: each pair reveals its ordinal ranking with
/// probability τ_ij = |Δp| / d_L1, and the consumer picks the best posterior rank.
ThreeFirmDemand three_firm_profits(double p_a, double p_b, double p_s, double dq, double c, double c_s);

/// Same demand by enumerating the eight reveal events; valid at any price vector.
ThreeFirmDemand three_firm_enumerated(double p_a, double p_b, double p_s, double dq, double c, double c_s);

struct SearchConfig {
    int grid = 400;
    int max_iter = 2000;
    double tol = 1e-8;
    double damping = 0.5;
    int restarts = 4;
};

struct ThreeFirmResult {
    double p_a = 0.0, p_b = 0.0, p_s = 0.0;
    ThreeFirmDemand demand;
    int iterations = 0;
    double residual = 0.0;
    bool s_at_cost = false;
};

/// Damped best-response iteration; throws SolverError when it does not settle or
/// when the result contradicts p_b < p_a.
ThreeFirmResult three_firm_equilibrium(double dq, double c, double c_s, const SearchConfig& cfg = {});

using ProfitFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// max over firms of (best profit on the deviation grid - profit at `prices`).
/// `ranges[i]` bounds firm i's grid; `step` is the grid spacing.
double verify_equilibrium(const std::vector<double>& prices, const ProfitFn& profits,
                          const std::vector<std::pair<double, double>>& ranges, double step);

}  // namespace tradeoff
