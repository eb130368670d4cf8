#pragma once

// Random instance generators shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "tradeoff/complexity.hpp"
#include "tradeoff/estimation.hpp"
#include "tradeoff/normal.hpp"
#include "tradeoff/rng.hpp"

namespace testing_support {

using namespace tradeoff;

inline int uniform_int(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(hi - lo + 1)); }

// Integer levels keep dominance pairs frequent and ratios exact.
inline AttributeVector random_attributes(Rng& rng, int n) {
    std::vector<double> v;
    for (int k = 0; k < n; ++k) v.push_back(uniform_int(rng, 0, 9));
    return AttributeVector(v);
}

inline std::vector<double> random_probs(Rng& rng, int k) {
    std::vector<double> p;
    double total = 0.0;
    for (int i = 0; i < k; ++i) total += p.emplace_back(0.05 + rng.uniform());
    for (auto& x : p) x /= total;
    return p;
}

inline Lottery random_lottery(Rng& rng, int max_support = 6, int max_payoff = 20) {
    int k = uniform_int(rng, 1, max_support);
    auto p = random_probs(rng, k);
    std::vector<Outcome> o;
    for (int i = 0; i < k; ++i) o.push_back({static_cast<double>(uniform_int(rng, 0, max_payoff)), p[i]});
    return Lottery(o);
}

inline PayoffFlow random_flow(Rng& rng, int max_support = 6) {
    int k = uniform_int(rng, 1, max_support);
    std::vector<Payment> pay;
    for (int i = 0; i < k; ++i)
        pay.push_back({static_cast<double>(uniform_int(rng, 0, 72) * 10), static_cast<double>(uniform_int(rng, 1, 20))});
    return PayoffFlow(pay);
}

// x weakly improves y in every coordinate; strict somewhere unless nothing moved.
inline AttributeVector improved(Rng& rng, const AttributeVector& y) {
    auto v = y.values();
    for (auto& x : v)
        if (rng.coin()) x += uniform_int(rng, 1, 3);
    return AttributeVector(v);
}

inline Lottery improved(Rng& rng, const Lottery& y) {
    auto o = y.outcomes();
    for (auto& x : o)
        if (rng.coin()) x.payoff += uniform_int(rng, 1, 5);
    return Lottery(o);
}

inline PayoffFlow improved(Rng& rng, const PayoffFlow& y) {
    auto pay = y.payments();
    for (auto& x : pay) {
        if (rng.coin()) x.amount += uniform_int(rng, 1, 5);
        if (rng.coin()) x.delay_days = std::max(0.0, x.delay_days - 10.0 * uniform_int(rng, 1, 5));
    }
    return PayoffFlow(pay);
}

// ∫ |F_x - F_y| over the utility axis: an area computation independent of the
// quantile form and of the transport oracle.
inline double cdf_area_in_utility(const Lottery& x, const Lottery& y, const UtilityModel& u) {
    std::vector<std::pair<double, double>> jumps;  // (utility, signed mass)
    for (const auto& o : x.outcomes()) jumps.push_back({bernoulli(u, o.payoff), o.prob});
    for (const auto& o : y.outcomes()) jumps.push_back({bernoulli(u, o.payoff), -o.prob});
    std::sort(jumps.begin(), jumps.end());
    double diff = 0.0, area = 0.0;
    for (std::size_t i = 0; i + 1 < jumps.size(); ++i) {
        diff += jumps[i].second;
        area += std::abs(diff) * (jumps[i + 1].first - jumps[i].first);
    }
    return area;
}

// ln(1/δ) ∫ δ^t |M_x - M_y| dt for exponential discounting, by composite Simpson
// on each constant piece plus the closed-form tail.
inline double cpf_integral_exponential(const PayoffFlow& x, const PayoffFlow& y, double delta, double period) {
    double rate = std::log(1.0 / delta) / period;  // per day
    std::vector<double> t{0.0};
    for (const auto& p : x.payments()) t.push_back(p.delay_days);
    for (const auto& p : y.payments()) t.push_back(p.delay_days);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double gap = std::abs(x.cumulative(t[i]) - y.cumulative(t[i]));
        double a = t[i], b = t[i + 1];
        const int m = 2000;
        double h = (b - a) / m, s = 0.0;
        for (int k = 0; k <= m; ++k) {
            double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            s += w * rate * std::exp(-rate * (a + k * h));
        }
        total += gap * s * h / 3.0;
    }
    total += std::abs(x.cumulative(t.back()) - y.cumulative(t.back())) * std::exp(-rate * t.back());
    return total;
}

// Φ^{-1} by bisection on the erfc-based CDF, independent of the rational approximation.
inline double quantile_by_bisection(double p) {
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline int binomial(Rng& rng, int n, double p) {
    int k = 0;
    for (int i = 0; i < n; ++i) k += rng.uniform() < p;
    return k;
}

// Sooner-smaller against later-larger single payments, with a share of pairs where
// the later option is also smaller (dominance) and some two-payment streams.
inline ChoiceObservation random_temporal_problem(Rng& rng, const ChoiceModel& model, int trials) {
    PayoffFlow a, b;
    double m1 = 5.0 + 15.0 * rng.uniform();
    double t1 = 30.0 * uniform_int(rng, 0, 6);
    double t2 = t1 + 30.0 * uniform_int(rng, 1, 24);
    double u = rng.uniform();
    if (u < 0.1) {
        a = PayoffFlow::single(m1, t1);
        b = PayoffFlow::single(m1 * (0.5 + 0.45 * rng.uniform()), t2);
    } else if (u < 0.25) {
        double m2 = m1 * (1.05 + rng.uniform());
        a = PayoffFlow({{t1, 0.5 * m1}, {t2, 0.5 * m1}});
        b = PayoffFlow::single(m2, t2 + 30.0 * uniform_int(rng, 0, 6));
    } else {
        a = PayoffFlow::single(m1, t1);
        b = PayoffFlow::single(m1 * (1.02 + 1.2 * rng.uniform()), t2);
    }
    double p = rho(model, a, b);
    return ChoiceObservation(a, b, trials, binomial(rng, trials, p));
}

inline ChoiceDataset simulate_temporal(std::uint64_t seed, const ChoiceModel& model, int problems, int trials) {
    Rng rng(seed, 0);
    ChoiceDataset out;
    for (int c = 0; c < problems; ++c) out.push_back(random_temporal_problem(rng, model, trials));
    return out;
}

}  // namespace testing_support
