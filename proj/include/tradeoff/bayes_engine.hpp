#pragma once

#include <cstdint>
#include <vector>

#include "tradeoff/complexity.hpp"
#include "tradeoff/domain.hpp"
#include "tradeoff/rng.hpp"

namespace tradeoff {

struct PriorSpec {
    enum class Kind { Uniform01, StandardNormal };
    Kind kind = Kind::Uniform01;
    std::uint64_t mc_draws = 200000;  // only for priors without a closed form
    std::uint64_t seed = 1;
};

/// V(k|N): expected value of the k-th best of N prior draws, k = 1..N (index k-1).
std::vector<double> order_stat_means(int n, const PriorSpec& prior = {});

/// Pairwise precisions and true values over a finite option set.
struct ComparisonStructure {
    std::vector<double> values;
    std::vector<std::vector<Precision>> tau;

    ComparisonStructure(std::vector<double> v, std::vector<std::vector<Precision>> t);
    static ComparisonStructure from_options(const std::vector<Option>& options, const UtilityModel& model,
                                            const GCurve& curve);

    std::size_t size() const { return values.size(); }
    ComparisonStructure restrict(const std::vector<int>& idx) const;
};

/// One realization of the pairwise signals, stored scaled: a[i][j] = τ_ij s_ij with
/// s_ij = sgn(v_i - v_j) + ε_ij / sqrt(τ_ij). The scaled form stays finite at τ = 0,
/// and the Gaussian log-likelihood of an ordering is Σ_{i<j} a_ij σ_ij up to a constant.
struct SignalDraw {
    std::vector<std::vector<double>> a;
};

SignalDraw draw_signals(const ComparisonStructure& s, Rng& rng, double tau_scale = 1.0);

inline constexpr int kMaxEnumeration = 8;

struct RankingPosterior {
    std::vector<std::vector<int>> ranks;  // ranks[p][i]: rank of option i (1 = best) in ordering p
    std::vector<double> prob;

    /// Pr(option i has rank n | s), n = 1..N.
    double marginal(int i, int n) const;
    /// E[v_i | s] = Σ_n V(n|N) Pr(π(i) = n | s).
    std::vector<double> expected_values(const std::vector<double>& order_means) const;
};

/// Exact posterior over orderings by enumeration. Perfectly comparable pairs act as
/// hard constraints. N <= 8.
RankingPosterior ranking_posterior(const ComparisonStructure& s, const SignalDraw& draw);

struct SimConfig {
    std::uint64_t draws = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
    double tau_scale = 1.0;  // multiplier on every finite precision
    PriorSpec prior{};
};

struct ChoiceEstimate {
    std::vector<double> prob;
    std::vector<double> se;
};

/// MC estimate of ρ(a, A | C) for each a in `menu` (indices into the structure).
ChoiceEstimate simulate_choice(const ComparisonStructure& s, const std::vector<int>& menu,
                               const std::vector<int>& context, const SimConfig& cfg);

/// Posterior over the insertion rank k = 1..n+1 of x into an internally perfectly
/// comparable list. `a[j]` is the scaled signal τ_xj s_xj, `sign[j]` = sgn(v_x - v_j)
/// (used only for perfectly comparable entries). O(n).
std::vector<double> insertion_posterior(const std::vector<Precision>& tau, const std::vector<double>& a,
                                        const std::vector<int>& sign);

enum class ListKind { CertaintyEquivalent, ProbabilityEquivalent, PresentValueEquivalent, TimeEquivalent };

const char* list_kind_name(ListKind k);

struct PriceList {
    ListKind kind;
    std::vector<Option> entries;  // z^1..z^n, best first
    std::vector<double> grid;     // payment, probability, amount or delay read off each entry
};

struct Yardstick {
    double amount = 0.0;              // w̄ for PE lists, m̄ for TE lists
    std::vector<double> delays_days;  // TE grid, offset by the anchor delay
};

std::vector<double> default_te_grid();

PriceList build_adapted_list(ListKind kind, const Option& anchor, int n, const Yardstick& yardstick = {});

struct SwitchingDistribution {
    std::vector<double> prob;  // Pr(R = r), r = 1..n+1 (index r-1)
    std::uint64_t draws = 0;   // 0 for analytic distributions

    double mean() const;
};

/// Posterior expected values and the switching index for one signal realization.
/// Returns Pr(R = r | s) with ties split evenly (each tied menu flips independently).
std::vector<double> switching_given_signal(const std::vector<Precision>& tau, const std::vector<double>& a,
                                           const std::vector<int>& sign, const std::vector<double>& order_means);

/// Exact switching distribution when x is uninformatively comparable to every entry.
SwitchingDistribution switching_uninformative(int n);

SwitchingDistribution simulate_switching(const Option& x, const PriceList& list, const UtilityModel& model,
                                         const GCurve& curve, const SimConfig& cfg);

struct ValuationSummary {
    double mean = 0.0;
    double se = 0.0;
    double excluded_mass = 0.0;  // mass at switching indices without an edge rule
};

double valuation_at(const PriceList& list, int r);  // NaN when r has no valuation
ValuationSummary valuation_summary(const SwitchingDistribution& dist, const PriceList& list);

}  // namespace tradeoff
