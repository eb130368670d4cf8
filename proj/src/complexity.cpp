#include "tradeoff/complexity.hpp"

#include <algorithm>
#include <cmath>

#include "tradeoff/normal.hpp"

namespace tradeoff {

namespace {

constexpr double kSnap = 1e-12;

struct Atom {
    double level;
    double mass;
};

// W1 distance between two discrete measures on the line with equal total mass.
double transport_1d(std::vector<Atom> a, std::vector<Atom> b) {
    auto by_level = [](const Atom& l, const Atom& r) { return l.level < r.level; };
    std::sort(a.begin(), a.end(), by_level);
    std::sort(b.begin(), b.end(), by_level);
    double cost = 0.0;
    std::size_t i = 0, j = 0;
    double ra = a.empty() ? 0.0 : a[0].mass;
    double rb = b.empty() ? 0.0 : b[0].mass;
    while (i < a.size() && j < b.size()) {
        double m = std::min(ra, rb);
        cost += m * std::abs(a[i].level - b[j].level);
        ra -= m;
        rb -= m;
        if (ra <= 0.0 && ++i < a.size()) ra = a[i].mass;
        if (rb <= 0.0 && ++j < b.size()) rb = b[j].mass;
    }
    return cost;
}

// Smallest γ keeping the three-parameter tail (1-a)^γ / (a^ψ + (1-a)^ψ)^{1/ψ}
// decreasing: sup over a of (1-a) ((1-a)^{ψ-1} - a^{ψ-1}) / (a^ψ + (1-a)^ψ).
double min_monotone_gamma(double psi) {
    if (psi == 1.0) return 0.0;
    if (psi > 1.0) return 1.0;  // supremum approached as a -> 0
    auto req = [psi](double a) {
        double b = 1.0 - a;
        return b * (std::pow(b, psi - 1.0) - std::pow(a, psi - 1.0)) / (std::pow(a, psi) + std::pow(b, psi));
    };
    const int n = 2000;
    int best = 1;
    for (int i = 2; i < n; ++i)
        if (req(static_cast<double>(i) / n) > req(static_cast<double>(best) / n)) best = i;
    double lo = (best - 1.0) / n, hi = (best + 1.0) / n;
    for (int it = 0; it < 60; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (req(m1) < req(m2)) lo = m1;
        else hi = m2;
    }
    return req(0.5 * (lo + hi));
}

}  // namespace

GCurve::GCurve(double k, double g, double p) : kappa(k), gamma(g), psi(p) {
    if (!(k >= 0.0 && k <= 0.5)) throw ValidationError("kappa must lie in [0, 0.5]");
    if (!(std::isfinite(g) && g > 0.0)) throw ValidationError("gamma must be > 0");
    if (!(std::isfinite(p) && p > 0.0)) throw ValidationError("psi must be > 0");
    if (p != 1.0 && g < min_monotone_gamma(p))
        throw ValidationError("gamma too small for psi: G would not be increasing");
}

double GCurve::operator()(double r) const { return g_eval(r, *this); }

double GCurve::slope_at_zero() const {
    if (psi != 1.0) throw SolverError("G'(0) is unbounded for psi != 1");
    return (0.5 - kappa) * gamma;
}

double g_eval(double r, const GCurve& c) {
    if (!(r >= -1.0 - kSnap && r <= 1.0 + kSnap)) throw ValidationError("ratio must lie in [-1, 1]");
    double a = std::min(std::abs(r), 1.0);
    double tail = std::pow(1.0 - a, c.gamma);
    if (c.psi != 1.0) tail /= std::pow(std::pow(a, c.psi) + std::pow(1.0 - a, c.psi), 1.0 / c.psi);
    double upper = (1.0 - c.kappa) - (0.5 - c.kappa) * tail;
    return r >= 0.0 ? upper : 1.0 - upper;
}

Precision tau_from_ratio(double r, const GCurve& curve) {
    if (r < 0.0) throw ValidationError("precision map needs a nonnegative ratio");
    double g = g_eval(r, curve);
    if (g >= 1.0) return Precision::perfectly_comparable();
    double z = norm_quantile(g);
    return Precision::finite(z * z);
}

double d_l1(const AttributeVector& x, const AttributeVector& y, const std::vector<double>& beta) {
    if (x.size() != y.size() || beta.size() != x.size())
        throw ValidationError("attribute length mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += std::abs(beta[k] * (x[k] - y[k]));
    return acc;
}

double d_cdf(const Lottery& x, const Lottery& y, const UtilityModel& u) {
    // Walk the merged breakpoints of both CDFs; on each q-segment both quantile
    // functions are constant.
    const auto& ox = x.outcomes();
    const auto& oy = y.outcomes();
    std::size_t i = 0, j = 0;
    double cx = ox[0].prob, cy = oy[0].prob;  // cumulative probability at current atoms
    double q = 0.0, acc = 0.0;
    while (true) {
        double next = std::min(cx, cy);
        bool last_x = i + 1 == ox.size(), last_y = j + 1 == oy.size();
        if (last_x && last_y) next = 1.0;
        if (next > q) acc += (next - q) * std::abs(bernoulli(u, ox[i].payoff) - bernoulli(u, oy[j].payoff));
        q = std::max(q, next);
        if (last_x && last_y) break;
        bool adv_x = !last_x && (cx <= cy || last_y);
        bool adv_y = !last_y && (cy <= cx || last_x);
        if (adv_x) cx += ox[++i].prob;
        if (adv_y) cy += oy[++j].prob;
    }
    return acc;
}

double d_cpf(const PayoffFlow& x, const PayoffFlow& y, const DiscountFunction& d) {
    std::vector<double> times{0.0};
    for (const auto& p : x.payments()) times.push_back(p.delay_days);
    for (const auto& p : y.payments()) times.push_back(p.delay_days);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    double acc = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        double gap = std::abs(x.cumulative(times[k]) - y.cumulative(times[k]));
        double d_next = k + 1 < times.size() ? d(times[k + 1]) : 0.0;  // d(inf) = 0
        acc += gap * (d(times[k]) - d_next);
    }
    return acc;
}

double dissimilarity(const Option& x, const Option& y, const UtilityModel& model) {
    if (domain_of(x) != domain_of(y)) throw ValidationError("options come from different domains");
    if (domain_of(x) != domain_of(model)) throw ValidationError("utility model incompatible with options");
    switch (domain_of(x)) {
        case Domain::Multiattribute:
            return d_l1(std::get<AttributeVector>(x), std::get<AttributeVector>(y),
                        std::get<LinearAttributes>(model).beta);
        case Domain::Lottery: return d_cdf(std::get<Lottery>(x), std::get<Lottery>(y), model);
        case Domain::Intertemporal:
            return d_cpf(std::get<PayoffFlow>(x), std::get<PayoffFlow>(y), DiscountFunction(model));
    }
    return 0.0;
}

RatioParts ratio_parts(const Option& x, const Option& y, const UtilityModel& model) {
    RatioParts out;
    out.dissimilarity = dissimilarity(x, y, model);
    out.value_diff = value(x, model) - value(y, model);
    if (out.dissimilarity <= 0.0) {
        out.ratio = {0.0, true};
        return out;
    }
    double r = out.value_diff / out.dissimilarity;
    if (r >= 1.0 - kSnap) r = 1.0;
    if (r <= -1.0 + kSnap) r = -1.0;
    out.ratio = {r, false};
    return out;
}

SignedRatio signed_ratio(const Option& x, const Option& y, const UtilityModel& model) {
    return ratio_parts(x, y, model).ratio;
}

double min_coupling_lottery(const Lottery& x, const Lottery& y, const UtilityModel& u) {
    std::vector<Atom> a, b;
    for (const auto& o : x.outcomes()) a.push_back({bernoulli(u, o.payoff), o.prob});
    for (const auto& o : y.outcomes()) b.push_back({bernoulli(u, o.payoff), o.prob});
    return transport_1d(std::move(a), std::move(b));
}

double product_coupling_lottery(const Lottery& x, const Lottery& y, const UtilityModel& u) {
    double acc = 0.0;
    for (const auto& ox : x.outcomes())
        for (const auto& oy : y.outcomes())
            acc += ox.prob * oy.prob * std::abs(bernoulli(u, ox.payoff) - bernoulli(u, oy.payoff));
    return acc;
}

double min_coupling_flow(const PayoffFlow& x, const PayoffFlow& y, const DiscountFunction& d) {
    for (const auto* f : {&x, &y})
        for (const auto& p : f->payments())
            if (p.amount <= 0.0) throw ValidationError("coupling oracle needs positively-valued flows");
    double total = x.total() + y.total();
    if (total <= 0.0) return 0.0;
    auto measure = [&](const PayoffFlow& f) {
        std::vector<Atom> atoms;
        for (const auto& p : f.payments()) atoms.push_back({d(p.delay_days), p.amount / total});
        atoms.push_back({0.0, 1.0 - f.total() / total});
        return atoms;
    };
    return total * transport_1d(measure(x), measure(y));
}

bool attribute_dominates(const AttributeVector& x, const AttributeVector& y,
                         const std::vector<double>& beta) {
    if (x.size() != y.size() || beta.size() != x.size())
        throw ValidationError("attribute length mismatch");
    bool strict = false;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double g = beta[k] * (x[k] - y[k]);
        if (g < 0.0) return false;
        if (g > 0.0) strict = true;
    }
    return strict;
}

bool fosd_dominates(const Lottery& x, const Lottery& y) {
    constexpr double tol = 1e-12;
    bool strict = false;
    auto check = [&](double w) {
        double fx = x.cdf(w), fy = y.cdf(w);
        if (fx > fy + tol) return false;
        if (fx < fy - tol) strict = true;
        return true;
    };
    for (const auto& o : x.outcomes())
        if (!check(o.payoff)) return false;
    for (const auto& o : y.outcomes())
        if (!check(o.payoff)) return false;
    return strict;
}

bool temporal_dominates(const PayoffFlow& x, const PayoffFlow& y) {
    constexpr double tol = 1e-12;
    bool strict = false;
    auto check = [&](double t) {
        double mx = x.cumulative(t), my = y.cumulative(t);
        if (mx < my - tol) return false;
        if (mx > my + tol) strict = true;
        return true;
    };
    if (!check(0.0)) return false;
    for (const auto& p : x.payments())
        if (!check(p.delay_days)) return false;
    for (const auto& p : y.payments())
        if (!check(p.delay_days)) return false;
    return strict;
}

bool dominates(const Option& x, const Option& y, const UtilityModel& model) {
    if (domain_of(x) != domain_of(y)) throw ValidationError("options come from different domains");
    switch (domain_of(x)) {
        case Domain::Multiattribute:
            return attribute_dominates(std::get<AttributeVector>(x), std::get<AttributeVector>(y),
                                       std::get<LinearAttributes>(model).beta);
        case Domain::Lottery: return fosd_dominates(std::get<Lottery>(x), std::get<Lottery>(y));
        case Domain::Intertemporal:
            return temporal_dominates(std::get<PayoffFlow>(x), std::get<PayoffFlow>(y));
    }
    return false;
}

}  // namespace tradeoff
