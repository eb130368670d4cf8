#include "tradeoff/choice_models.hpp"

#include <cmath>

namespace tradeoff {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double pt_utility(double w, double alpha, double beta, double lambda) {
    return w >= 0.0 ? std::pow(w, alpha) : -lambda * std::pow(-w, beta);
}

}  // namespace

Salience::Salience(double d) : delta_s(d) { require(std::isfinite(d) && d <= 1.0, "delta_s must be <= 1"); }

Focusing::Focusing(double t) : theta(t) { require(std::isfinite(t) && t >= 0.0, "theta must be >= 0"); }

RelativeThinking::RelativeThinking(double w, double x) : omega(w), xi(x) {
    require(w >= 0.0 && w <= 1.0, "omega must lie in [0,1]");
    require(positive(x), "xi must be > 0");
}

EDU::EDU(double d, double period) : delta(d), period_days(period) {
    require(d > 0.0 && d < 1.0, "delta must lie in (0,1)");
    require(positive(period), "period_days must be > 0");
}

QDU::QDU(double b, double d, double period) : beta_qh(b), delta(d), period_days(period) {
    require(positive(b), "beta_qh must be > 0");
    require(d > 0.0 && d < 1.0, "delta must lie in (0,1)");
    require(positive(period), "period_days must be > 0");
}

HDU::HDU(double i, double z, double period) : iota(i), zeta(z), period_days(period) {
    require(positive(i), "iota must be > 0");
    require(positive(z), "zeta must be > 0");
    require(positive(period), "period_days must be > 0");
}

EU::EU(double a) : alpha(a) { require(positive(a), "alpha must be > 0"); }

RDEU::RDEU(double a, double b, double l) : alpha(a), beta(b), lambda(l) {
    require(positive(a) && positive(b) && positive(l), "RDEU parameters must be > 0");
}

CPT::CPT(double a, double b, double l, double c, double n) : alpha(a), beta(b), lambda(l), chi(c), nu(n) {
    require(positive(a) && positive(b) && positive(l) && positive(c) && positive(n),
            "CPT parameters must be > 0");
}

LogitBenchmark::LogitBenchmark(BenchmarkFamily f, double e) : family(std::move(f)), eta(e) {
    require(std::isfinite(e) && e >= 0.0, "eta must be >= 0");
}

Domain domain_of(const BenchmarkFamily& f) {
    switch (f.index()) {
        case 0:
        case 1:
        case 2:
        case 3: return Domain::Multiattribute;
        case 4:
        case 5:
        case 6: return Domain::Intertemporal;
        default: return Domain::Lottery;
    }
}

std::string family_name(const BenchmarkFamily& f) {
    static const char* names[] = {"DistortionFree", "Salience", "Focusing", "RelativeThinking", "EDU",
                                  "QDU",            "HDU",      "EU",       "RDEU",             "CPT"};
    return names[f.index()];
}

double logistic(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    double e = std::exp(t);
    return e / (1.0 + e);
}

double context_value(const BenchmarkFamily& family, const AttributeVector& x, const AttributeVector& y) {
    if (x.size() != y.size()) throw ValidationError("attribute length mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double xk = x[k], yk = y[k];
        double w = 1.0;
        std::visit(overloaded{
                       [&](const DistortionFree&) {},
                       [&](const Salience& s) {
                           double m = 0.5 * (xk + yk);
                           double den = std::abs(xk) + std::abs(m);
                           if (den > 0.0) w = std::pow(1.0 + std::abs(xk - m) / den, 1.0 - s.delta_s);
                       },
                       [&](const Focusing& f) { w = std::pow(std::abs(xk - yk), f.theta); },
                       [&](const RelativeThinking& r) {
                           w = (1.0 - r.omega) + r.omega / (std::abs(xk - yk) + r.xi);
                       },
                       [&](const auto&) { throw ValidationError("family is not multiattribute"); },
                   },
                   family);
        acc += xk * w;
    }
    return acc;
}

double cpt_weight(double p, double chi, double nu) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double a = chi * std::pow(p, nu);
    return a / (a + std::pow(1.0 - p, nu));
}

double cpt_value(const Lottery& lot, double alpha, double beta, double lambda, double chi, double nu) {
    const auto& o = lot.outcomes();  // ascending payoffs
    double v = 0.0;
    // gains, from the best outcome down: π_k = q(p_k + ... + p_n) - q(p_{k+1} + ... + p_n)
    double tail = 0.0;
    for (std::size_t i = o.size(); i-- > 0 && o[i].payoff >= 0.0;) {
        double next = tail + o[i].prob;
        v += pt_utility(o[i].payoff, alpha, beta, lambda) * (cpt_weight(next, chi, nu) - cpt_weight(tail, chi, nu));
        tail = next;
    }
    // losses, from the worst outcome up: π_k = q(p_{-m} + ... + p_k) - q(p_{-m} + ... + p_{k-1})
    double head = 0.0;
    for (std::size_t i = 0; i < o.size() && o[i].payoff < 0.0; ++i) {
        double next = head + o[i].prob;
        v += pt_utility(o[i].payoff, alpha, beta, lambda) * (cpt_weight(next, chi, nu) - cpt_weight(head, chi, nu));
        head = next;
    }
    return v;
}

double context_value(const BenchmarkFamily& family, const Option& x, const Option& y) {
    if (domain_of(x) != domain_of(family) || domain_of(y) != domain_of(family))
        throw ValidationError(family_name(family) + " is incompatible with " + domain_name(domain_of(x)) +
                              " options");
    return std::visit(
        overloaded{
            [&](const EDU& f) {
                return value(x, UtilityModel(ExponentialDiscount(f.delta, f.period_days)));
            },
            [&](const QDU& f) {
                return value(x, UtilityModel(QuasiHyperbolic(f.beta_qh, f.delta, f.period_days)));
            },
            [&](const HDU& f) {
                return value(x, UtilityModel(GeneralizedHyperbolic(f.iota, f.zeta, f.period_days)));
            },
            [&](const EU& f) { return value(x, UtilityModel(CrraSymmetric(f.alpha))); },
            [&](const RDEU& f) { return value(x, UtilityModel(PowerLossAverse(f.alpha, f.beta, f.lambda))); },
            [&](const CPT& f) {
                return cpt_value(std::get<Lottery>(x), f.alpha, f.beta, f.lambda, f.chi, f.nu);
            },
            [&](const auto&) {
                return context_value(family, std::get<AttributeVector>(x), std::get<AttributeVector>(y));
            },
        },
        family);
}

double rho(const ChoiceModel& model, const Option& x, const Option& y) {
    if (domain_of(x) != domain_of(y)) throw ValidationError("options come from different domains");
    if (const auto* c = std::get_if<Complexity>(&model)) {
        return g_eval(signed_ratio(x, y, c->utility).r, c->curve);
    }
    const auto& l = std::get<LogitBenchmark>(model);
    double diff = context_value(l.family, x, y) - context_value(l.family, y, x);
    return logistic(l.eta * diff);
}

double rho_binary_signal(const Option& x, const Option& y, const UtilityModel& model, const GCurve& curve) {
    SignedRatio s = signed_ratio(x, y, model);
    double tau = 2.0 * g_eval(std::abs(s.r), curve) - 1.0;
    if (s.r > 0.0) return 0.5 * (1.0 + tau);
    if (s.r < 0.0) return 0.5 * (1.0 - tau);
    return 0.5;
}

}  // namespace tradeoff
