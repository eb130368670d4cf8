#pragma once

#include <string>
#include <variant>

#include "tradeoff/complexity.hpp"
#include "tradeoff/domain.hpp"

namespace tradeoff {

// Benchmark value families. Each constructor enforces its parameter box.

struct DistortionFree {};

/// Continuous salience weighting; exponent (1 - δ_s), δ_s <= 1.
struct Salience {
    double delta_s;
    explicit Salience(double d);
};

struct Focusing {
    double theta;
    explicit Focusing(double t);
};

struct RelativeThinking {
    double omega, xi;
    RelativeThinking(double w, double x);
};

struct EDU {
    double delta, period_days;
    EDU(double d, double period);
};

/// V = m(0) + β Σ_{t>0} δ^t m(t).
struct QDU {
    double beta_qh, delta, period_days;
    QDU(double b, double d, double period);
};

struct HDU {
    double iota, zeta, period_days;
    HDU(double i, double z, double period);
};

struct EU {
    double alpha;
    explicit EU(double a);
};

struct RDEU {
    double alpha, beta, lambda;
    RDEU(double a, double b, double l);
};

struct CPT {
    double alpha, beta, lambda, chi, nu;
    CPT(double a, double b, double l, double c, double n);
};

using BenchmarkFamily = std::variant<DistortionFree, Salience, Focusing, RelativeThinking, EDU, QDU,
                                     HDU, EU, RDEU, CPT>;

Domain domain_of(const BenchmarkFamily& f);
std::string family_name(const BenchmarkFamily& f);

/// ρ(x, y) = G(signed ratio).
struct Complexity {
    UtilityModel utility;
    GCurve curve;
};

/// ρ(x, y) = 1 / (1 + exp(-η (V(x) - V(y)))).
struct LogitBenchmark {
    BenchmarkFamily family;
    double eta;
    LogitBenchmark(BenchmarkFamily f, double e);
};

using ChoiceModel = std::variant<Complexity, LogitBenchmark>;

double logistic(double t);

/// Menu-dependent value V(x | {x, y}). Context-free families ignore y.
double context_value(const BenchmarkFamily& family, const Option& x, const Option& y);
double context_value(const BenchmarkFamily& family, const AttributeVector& x, const AttributeVector& y);

double cpt_value(const Lottery& lot, double alpha, double beta, double lambda, double chi, double nu);
double cpt_weight(double p, double chi, double nu);

/// Probability of choosing x from {x, y}.
double rho(const ChoiceModel& model, const Option& x, const Option& y);

/// Binary-signal convention: the ranking is revealed with probability τ = 2G(|r|) - 1
/// (τ = |r| for linear G), otherwise the choice is a coin flip.
double rho_binary_signal(const Option& x, const Option& y, const UtilityModel& model, const GCurve& curve);

}  // namespace tradeoff
