#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tradeoff/choice_models.hpp"
#include "tradeoff/domain.hpp"

namespace tradeoff {

struct ChoiceObservation {
    Option a;
    Option b;
    int trials = 1;
    int successes = 0;  // times a was chosen

    ChoiceObservation(Option x, Option y, int n, int k);
    double rate() const { return static_cast<double>(successes) / trials; }
};

using ChoiceDataset = std::vector<ChoiceObservation>;

inline constexpr double kProbClamp = 1e-9;

double clamp_prob(double p);

std::vector<double> empirical_rates(const ChoiceDataset& data);
std::vector<double> trial_weights(const ChoiceDataset& data);

/// -(1/Σn) Σ n [r log p + (1-r) log(1-p)], with p clamped to [1e-9, 1-1e-9].
double nll(const std::vector<double>& p, const std::vector<double>& r, const std::vector<double>& n);
double nll(const std::vector<double>& p, const ChoiceDataset& data);

/// 1 - Σ n (r-p)^2 / Σ n (r - r̄)^2.
double weighted_r2(const std::vector<double>& p, const ChoiceDataset& data);

double completeness_index(double e_base, double e_model, double e_star);

/// d(p, p') = -(1/Σn) Σ n [p' log(p/p') + (1-p') log((1-p)/(1-p'))].
double expected_kl(const std::vector<double>& p, const std::vector<double>& p_prime, const std::vector<double>& n);

// Parametric families ----------------------------------------------------------

enum class Transform {
    Positive,  // exp
    Interval,  // lo + (hi - lo) logistic
    BelowOne,  // 1 - exp
};

struct ParamSpec {
    std::string name;
    Transform transform;
    double lo = 0.0, hi = 1.0;              // Interval bounds
    double start_lo = 0.1, start_hi = 1.0;  // multistart box in natural units

    double to_natural(double u) const;
    double to_free(double v) const;
};

/// A family of prediction rules over binary problems, indexed by a parameter vector.
struct ModelTemplate {
    std::string name;
    std::vector<ParamSpec> params;
    std::function<std::vector<double>(const std::vector<double>&, const ChoiceDataset&)> predict;
    std::vector<Domain> domains;  // empty: any domain
};

/// Named families: DistortionFree, Salience, Focusing, RelativeThinking, L1-C, L1-C3,
/// EDU, QDU, HDU, CPF-C, EU, RDEU, CPT, EV-CDF-C, EU-CDF-C.
ModelTemplate model_template(const std::string& name, double period_days = 24.0);
const std::vector<std::string>& template_names();

/// Builds the choice model a named family induces at natural parameters.
ChoiceModel build_model(const std::string& name, const std::vector<double>& theta, double period_days = 24.0);

/// A parameter-free family that always predicts `rule`.
ModelTemplate fixed_rule_template(std::vector<double> rule, std::string name = "base");

/// Constant prediction equal to the observation-weighted mean choice rate.
std::vector<double> mean_rate_rule(const ChoiceDataset& data);

struct FitConfig {
    int starts = 20;
    std::uint64_t seed = 1;
    int max_evals = 4000;  // per start, per simplex restart
    double tol = 1e-10;
    int threads = 1;
    std::vector<std::vector<double>> extra_starts;  // natural units, tried before random starts
};

struct FitResult {
    std::string family;
    std::vector<std::string> names;
    std::vector<double> params;
    double loss = 0.0;  // nll, or expected KL for soft targets
    double r2 = 0.0;    // NaN when the observed rates have no variance
    std::vector<double> predictions;
    int best_start = 0;
    double best_initial_loss = 0.0;
};

/// Maximum likelihood by multistart Nelder-Mead on transformed parameters.
FitResult fit(const ModelTemplate& family, const ChoiceDataset& data, const FitConfig& cfg = {});

/// Minimizes d(p_θ, target) over the family; same optimizer, KL loss.
FitResult fit_kl(const ModelTemplate& family, const ChoiceDataset& problems, const std::vector<double>& target,
                 const FitConfig& cfg = {});

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             double step, int max_evals, double tol);

// Completeness and restrictiveness ----------------------------------------------

/// Linear constraints on prediction rules p in [0,1]^dim: per-coordinate bounds and
/// order constraints p[hi] >= p[lo] + margin.
class ConstraintSet {
public:
    struct Order {
        int hi, lo;
        double margin;
    };

    explicit ConstraintSet(int dim);

    void set_lower(int i, double v);
    void set_upper(int i, double v);
    void add_order(int hi, int lo, double margin = 1e-6);

    int dim() const { return dim_; }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<Order>& orders() const { return orders_; }

    bool satisfied(const std::vector<double>& p, double tol = 0.0) const;
    /// Strictly feasible point; throws SolverError when none exists.
    std::vector<double> interior_point() const;

private:
    int dim_;
    std::vector<double> lower_, upper_;
    std::vector<Order> orders_;
};

/// Weak dominance (p >= 1/2 when a dominates b, <= 1/2 when b dominates a) and
/// monotonicity across problems sharing an option, from verified dominance relations.
ConstraintSet constraints_from_dataset(const ChoiceDataset& data, const UtilityModel& model, double margin = 1e-6);

bool same_option(const Option& x, const Option& y);

struct HarConfig {
    int count = 1000;
    int burn_in = -1;   // default 10 * dim
    int thinning = -1;  // default dim
    std::uint64_t seed = 1;
};

std::vector<std::vector<double>> har_sample(const ConstraintSet& c, const HarConfig& cfg);

struct RestrictivenessResult {
    double value = 0.0;
    double se = 0.0;
    std::vector<double> family_distance;
    std::vector<double> base_distance;
};

RestrictivenessResult restrictiveness_index(const ModelTemplate& family, const std::vector<double>& base_rule,
                                            const std::vector<std::vector<double>>& synthetic,
                                            const ChoiceDataset& problems, const FitConfig& cfg = {});

}  // namespace tradeoff
