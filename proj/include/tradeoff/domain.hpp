#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tradeoff {

/// Bad input: shapes, parameter boxes, schema problems. Maps to CLI exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergence, empty feasible sets. Maps to CLI exit code 3.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class AttributeVector {
public:
    explicit AttributeVector(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

private:
    std::vector<double> values_;
};

struct Outcome {
    double payoff;
    double prob;
};

/// Finite-support lottery. Outcomes are kept sorted by payoff, duplicates merged,
/// zero-probability outcomes dropped.
class Lottery {
public:
    explicit Lottery(std::vector<Outcome> outcomes);

    static Lottery certain(double w);
    /// (w, p) with the remaining mass on 0.
    static Lottery simple(double w, double p);

    const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }
    double cdf(double w) const;
    /// inf{w : q <= F(w)}, q in (0, 1].
    double quantile(double q) const;

private:
    std::vector<Outcome> outcomes_;
};

struct Payment {
    double delay_days;
    double amount;
};

/// Finite payoff stream sorted by delay. May be empty (the zero flow).
class PayoffFlow {
public:
    PayoffFlow() = default;
    explicit PayoffFlow(std::vector<Payment> payments);

    static PayoffFlow single(double amount, double delay_days);

    const std::vector<Payment>& payments() const noexcept { return payments_; }
    /// Right-continuous cumulative payoff M(t).
    double cumulative(double t_days) const;
    double total() const;

private:
    std::vector<Payment> payments_;
};

using Option = std::variant<AttributeVector, Lottery, PayoffFlow>;

enum class Domain { Multiattribute, Lottery, Intertemporal };

Domain domain_of(const Option& opt);
std::string domain_name(Domain d);

// Utility model variants. Constructors enforce the parameter boxes.

struct LinearAttributes {
    std::vector<double> beta;
    explicit LinearAttributes(std::vector<double> b);
    static LinearAttributes unit(std::size_t n);
};

struct CrraSymmetric {
    double alpha;
    explicit CrraSymmetric(double a);
};

struct PowerLossAverse {
    double alpha, beta, lambda;
    PowerLossAverse(double a, double b, double l);
};

struct ExponentialDiscount {
    double delta, period_days;
    ExponentialDiscount(double d, double period);
};

struct QuasiHyperbolic {
    double beta_qh, delta, period_days;
    QuasiHyperbolic(double b, double d, double period);
};

struct GeneralizedHyperbolic {
    double iota, zeta, period_days;
    GeneralizedHyperbolic(double i, double z, double period);
};

using UtilityModel = std::variant<LinearAttributes, CrraSymmetric, PowerLossAverse,
                                  ExponentialDiscount, QuasiHyperbolic, GeneralizedHyperbolic>;

Domain domain_of(const UtilityModel& m);

/// Bernoulli utility of a single payoff. Throws for non-Bernoulli models.
double bernoulli(const UtilityModel& m, double w);

/// d(t) for t in days, normalized so d(0) = 1. d(infinity) = 0 is never evaluated
/// numerically; callers treat the terminal segment explicitly.
class DiscountFunction {
public:
    explicit DiscountFunction(const UtilityModel& m);
    double operator()(double t_days) const;

private:
    UtilityModel model_;
};

double value(const Option& opt, const UtilityModel& model);
double value(const AttributeVector& x, const LinearAttributes& m);
double value(const Lottery& x, const UtilityModel& m);
double value(const PayoffFlow& x, const DiscountFunction& d);

}  // namespace tradeoff
