#include "tradeoff/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tradeoff {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

AttributeVector::AttributeVector(std::vector<double> values) : values_(std::move(values)) {
    require(values_.size() >= 2, "attribute vector needs at least 2 attributes");
    for (double v : values_) require(finite(v), "attribute values must be finite");
}

Lottery::Lottery(std::vector<Outcome> outcomes) {
    std::map<double, double> merged;
    double total = 0.0;
    for (const auto& o : outcomes) {
        require(finite(o.payoff), "lottery payoff must be finite");
        require(finite(o.prob) && o.prob >= 0.0 && o.prob <= 1.0,
                "lottery probability must lie in [0,1]");
        total += o.prob;
        if (o.prob > 0.0) merged[o.payoff + 0.0] += o.prob;
    }
    require(!merged.empty(), "lottery needs at least one outcome");
    require(std::abs(total - 1.0) <= 1e-12, "lottery probabilities must sum to 1");
    outcomes_.reserve(merged.size());
    for (const auto& [w, p] : merged) outcomes_.push_back({w, std::min(p, 1.0)});  // merging can round past 1
}

Lottery Lottery::certain(double w) { return Lottery({{w, 1.0}}); }

Lottery Lottery::simple(double w, double p) { return Lottery({{w, p}, {0.0, 1.0 - p}}); }

double Lottery::cdf(double w) const {
    double acc = 0.0;
    for (const auto& o : outcomes_) {
        if (o.payoff > w) break;
        acc += o.prob;
    }
    return std::min(acc, 1.0);
}

double Lottery::quantile(double q) const {
    if (!(q > 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in (0,1]");
    double acc = 0.0;
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        acc += outcomes_[i].prob;
        // the final outcome absorbs rounding in the running sum
        if (q <= acc || i + 1 == outcomes_.size()) return outcomes_[i].payoff;
    }
    return outcomes_.back().payoff;
}

PayoffFlow::PayoffFlow(std::vector<Payment> payments) {
    std::map<double, double> merged;
    for (const auto& p : payments) {
        require(finite(p.delay_days) && p.delay_days >= 0.0, "payment delay must be finite and >= 0");
        require(finite(p.amount), "payment amount must be finite");
        merged[p.delay_days + 0.0] += p.amount;
    }
    for (const auto& [t, m] : merged)
        if (m != 0.0) payments_.push_back({t, m});
}

PayoffFlow PayoffFlow::single(double amount, double delay_days) {
    return PayoffFlow({{delay_days, amount}});
}

double PayoffFlow::cumulative(double t_days) const {
    double acc = 0.0;
    for (const auto& p : payments_) {
        if (p.delay_days > t_days) break;
        acc += p.amount;
    }
    return acc;
}

double PayoffFlow::total() const {
    double acc = 0.0;
    for (const auto& p : payments_) acc += p.amount;
    return acc;
}

Domain domain_of(const Option& opt) { return static_cast<Domain>(opt.index()); }

std::string domain_name(Domain d) {
    switch (d) {
        case Domain::Multiattribute: return "multiattribute";
        case Domain::Lottery: return "lottery";
        case Domain::Intertemporal: return "temporal";
    }
    return "unknown";
}

LinearAttributes::LinearAttributes(std::vector<double> b) : beta(std::move(b)) {
    require(!beta.empty(), "attribute weights must be non-empty");
    for (double v : beta) require(finite(v) && v != 0.0, "attribute weights must be finite and nonzero");
}

LinearAttributes LinearAttributes::unit(std::size_t n) {
    return LinearAttributes(std::vector<double>(n, 1.0));
}

CrraSymmetric::CrraSymmetric(double a) : alpha(a) { require(finite(a) && a > 0.0, "alpha must be > 0"); }

PowerLossAverse::PowerLossAverse(double a, double b, double l) : alpha(a), beta(b), lambda(l) {
    require(finite(a) && a > 0.0, "alpha must be > 0");
    require(finite(b) && b > 0.0, "beta must be > 0");
    require(finite(l) && l > 0.0, "lambda must be > 0");
}

ExponentialDiscount::ExponentialDiscount(double d, double period) : delta(d), period_days(period) {
    require(d > 0.0 && d < 1.0, "delta must lie in (0,1)");
    require(finite(period) && period > 0.0, "period_days must be > 0");
}

QuasiHyperbolic::QuasiHyperbolic(double b, double d, double period)
    : beta_qh(b), delta(d), period_days(period) {
    require(finite(b) && b > 0.0, "beta_qh must be > 0");
    require(d > 0.0 && d < 1.0, "delta must lie in (0,1)");
    require(finite(period) && period > 0.0, "period_days must be > 0");
}

GeneralizedHyperbolic::GeneralizedHyperbolic(double i, double z, double period)
    : iota(i), zeta(z), period_days(period) {
    require(finite(i) && i > 0.0, "iota must be > 0");
    require(finite(z) && z > 0.0, "zeta must be > 0");
    require(finite(period) && period > 0.0, "period_days must be > 0");
}

Domain domain_of(const UtilityModel& m) {
    switch (m.index()) {
        case 0: return Domain::Multiattribute;
        case 1:
        case 2: return Domain::Lottery;
        default: return Domain::Intertemporal;
    }
}

double bernoulli(const UtilityModel& m, double w) {
    if (const auto* c = std::get_if<CrraSymmetric>(&m)) {
        return w >= 0.0 ? std::pow(w, c->alpha) : -std::pow(-w, c->alpha);
    }
    if (const auto* p = std::get_if<PowerLossAverse>(&m)) {
        return w >= 0.0 ? std::pow(w, p->alpha) : -p->lambda * std::pow(-w, p->beta);
    }
    throw ValidationError("utility model has no Bernoulli utility");
}

DiscountFunction::DiscountFunction(const UtilityModel& m) : model_(m) {
    if (domain_of(m) != Domain::Intertemporal)
        throw ValidationError("utility model is not a discount function");
}

double DiscountFunction::operator()(double t) const {
    if (const auto* e = std::get_if<ExponentialDiscount>(&model_))
        return std::pow(e->delta, t / e->period_days);
    if (const auto* q = std::get_if<QuasiHyperbolic>(&model_))
        return t <= 0.0 ? 1.0 : q->beta_qh * std::pow(q->delta, t / q->period_days);
    const auto& h = std::get<GeneralizedHyperbolic>(model_);
    return std::pow(1.0 + h.iota * t / h.period_days, -h.zeta / h.iota);
}

double value(const AttributeVector& x, const LinearAttributes& m) {
    if (m.beta.size() != x.size()) throw ValidationError("attribute weight length mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += m.beta[k] * x[k];
    return acc;
}

double value(const Lottery& x, const UtilityModel& m) {
    double acc = 0.0;
    for (const auto& o : x.outcomes()) acc += o.prob * bernoulli(m, o.payoff);
    return acc;
}

double value(const PayoffFlow& x, const DiscountFunction& d) {
    double acc = 0.0;
    for (const auto& p : x.payments()) acc += d(p.delay_days) * p.amount;
    return acc;
}

double value(const Option& opt, const UtilityModel& model) {
    if (domain_of(opt) != domain_of(model))
        throw ValidationError("utility model incompatible with " + domain_name(domain_of(opt)) + " option");
    double v = 0.0;
    switch (domain_of(opt)) {
        case Domain::Multiattribute:
            v = value(std::get<AttributeVector>(opt), std::get<LinearAttributes>(model));
            break;
        case Domain::Lottery: v = value(std::get<Lottery>(opt), model); break;
        case Domain::Intertemporal:
            v = value(std::get<PayoffFlow>(opt), DiscountFunction(model));
            break;
    }
    if (!std::isfinite(v)) throw ValidationError("value is not finite");
    return v;
}

}  // namespace tradeoff
