#include "tradeoff/bayes_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tradeoff {

namespace {

constexpr double kTieTol = 1e-12;

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

bool is_tie(double a, double b) { return std::abs(a - b) <= kTieTol * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// Orderings consistent with every perfectly comparable pair.
std::vector<std::vector<int>> feasible_rankings(const ComparisonStructure& s) {
    int n = static_cast<int>(s.size());
    std::vector<int> ranks(n);
    std::iota(ranks.begin(), ranks.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n && ok; ++j)
                if (s.tau[i][j].perfect && (s.values[i] > s.values[j]) != (ranks[i] < ranks[j])) ok = false;
        if (ok) out.push_back(ranks);
    } while (std::next_permutation(ranks.begin(), ranks.end()));
    if (out.empty()) throw SolverError("no ordering is consistent with the perfectly comparable pairs");
    return out;
}

std::vector<double> posterior_weights(const ComparisonStructure& s, const std::vector<std::vector<int>>& rankings,
                                      const SignalDraw& draw) {
    int n = static_cast<int>(s.size());
    std::vector<double> logw(rankings.size(), 0.0);
    for (std::size_t p = 0; p < rankings.size(); ++p) {
        const auto& r = rankings[p];
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!s.tau[i][j].perfect) acc += r[i] < r[j] ? draw.a[i][j] : -draw.a[i][j];
        logw[p] = acc;
    }
    double mx = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (double& w : logw) total += (w = std::exp(w - mx));
    for (double& w : logw) w /= total;
    return logw;
}

struct Switch {
    int base;  // 1 + number of menus where the list entry strictly wins
    int ties;
};

Switch locate_switch(const std::vector<double>& p, const std::vector<double>& v) {
    std::size_t n = p.size() - 1;
    double ex = 0.0;
    for (std::size_t k = 0; k <= n; ++k) ex += v[k] * p[k];
    Switch out{1, 0};
    double upto = 0.0;  // Pr(k <= j)
    for (std::size_t j = 1; j <= n; ++j) {
        upto += p[j - 1];
        double above = 0.0;
        for (std::size_t k = j; k <= n; ++k) above += p[k];
        // z^j is ranked j-th when x is inserted below it, (j+1)-th otherwise
        double ez = upto * v[j] + above * v[j - 1];
        if (is_tie(ez, ex))
            ++out.ties;
        else if (ez > ex)
            ++out.base;
    }
    return out;
}

struct PreparedList {
    std::vector<Precision> tau;
    std::vector<int> sign;
};

PreparedList prepare(const Option& x, const PriceList& list, const UtilityModel& model, const GCurve& curve,
                     double tau_scale) {
    std::size_t n = list.entries.size();
    if (n < 2) throw ValidationError("price list needs at least 2 entries");
    std::vector<double> vz(n);
    for (std::size_t j = 0; j < n; ++j) vz[j] = value(list.entries[j], model);
    for (std::size_t j = 1; j < n; ++j)
        if (!(vz[j] < vz[j - 1])) throw ValidationError("price list entry values are not strictly decreasing");
    double vx = value(x, model);
    PreparedList out;
    for (std::size_t j = 0; j < n; ++j) {
        SignedRatio r = signed_ratio(x, list.entries[j], model);
        Precision t = r.degenerate ? Precision::finite(0.0) : tau_from_ratio(std::abs(r.r), curve);
        if (!t.perfect) t.tau *= tau_scale;
        out.tau.push_back(t);
        out.sign.push_back(sgn(vx - vz[j]));
    }
    return out;
}

}  // namespace

std::vector<double> order_stat_means(int n, const PriorSpec& prior) {
    if (n < 1) throw ValidationError("order statistics need N >= 1");
    std::vector<double> v(n);
    if (prior.kind == PriorSpec::Kind::Uniform01) {
        for (int k = 1; k <= n; ++k) v[k - 1] = static_cast<double>(n + 1 - k) / (n + 1);
        return v;
    }
    Rng rng(prior.seed, 0);
    std::vector<double> draw(n);
    for (std::uint64_t d = 0; d < prior.mc_draws; ++d) {
        for (double& x : draw) x = rng.normal();
        std::sort(draw.begin(), draw.end(), std::greater<>());
        for (int k = 0; k < n; ++k) v[k] += draw[k];
    }
    for (double& x : v) x /= static_cast<double>(prior.mc_draws);
    return v;
}

ComparisonStructure::ComparisonStructure(std::vector<double> v, std::vector<std::vector<Precision>> t)
    : values(std::move(v)), tau(std::move(t)) {
    std::size_t n = values.size();
    if (n == 0) throw ValidationError("comparison structure needs at least one option");
    if (tau.size() != n) throw ValidationError("precision matrix has the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        if (tau[i].size() != n) throw ValidationError("precision matrix has the wrong size");
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto &a = tau[i][j], &b = tau[j][i];
            if (a.perfect != b.perfect || (!a.perfect && a.tau != b.tau))
                throw ValidationError("precision matrix must be symmetric");
            if (!a.perfect && !(a.tau >= 0.0 && std::isfinite(a.tau)))
                throw ValidationError("precision must be finite and nonnegative");
            if (a.perfect && values[i] == values[j])
                throw ValidationError("equal-value options cannot be perfectly comparable");
        }
    }
}

ComparisonStructure ComparisonStructure::from_options(const std::vector<Option>& options, const UtilityModel& model,
                                                      const GCurve& curve) {
    std::size_t n = options.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = value(options[i], model);
    std::vector<std::vector<Precision>> t(n, std::vector<Precision>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            SignedRatio r = signed_ratio(options[i], options[j], model);
            Precision p = (r.degenerate || v[i] == v[j]) ? Precision::finite(0.0)
                                                         : tau_from_ratio(std::abs(r.r), curve);
            t[i][j] = t[j][i] = p;
        }
    return ComparisonStructure(std::move(v), std::move(t));
}

ComparisonStructure ComparisonStructure::restrict(const std::vector<int>& idx) const {
    std::vector<double> v;
    std::vector<std::vector<Precision>> t(idx.size(), std::vector<Precision>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (idx[a] < 0 || static_cast<std::size_t>(idx[a]) >= size()) throw ValidationError("option index out of range");
        v.push_back(values[idx[a]]);
        for (std::size_t b = 0; b < idx.size(); ++b)
            if (a != b) t[a][b] = tau[idx[a]][idx[b]];
    }
    return ComparisonStructure(std::move(v), std::move(t));
}

SignalDraw draw_signals(const ComparisonStructure& s, Rng& rng, double tau_scale) {
    std::size_t n = s.size();
    SignalDraw d{std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Precision& p = s.tau[i][j];
            if (p.perfect) continue;
            double t = p.tau * tau_scale;
            double a = t * sgn(s.values[i] - s.values[j]) + std::sqrt(t) * rng.normal();
            d.a[i][j] = a;
            d.a[j][i] = -a;
        }
    return d;
}

double RankingPosterior::marginal(int i, int n) const {
    double acc = 0.0;
    for (std::size_t p = 0; p < ranks.size(); ++p)
        if (ranks[p][i] == n) acc += prob[p];
    return acc;
}

std::vector<double> RankingPosterior::expected_values(const std::vector<double>& v) const {
    std::size_t n = ranks.empty() ? 0 : ranks[0].size();
    std::vector<double> e(n, 0.0);
    for (std::size_t p = 0; p < ranks.size(); ++p)
        for (std::size_t i = 0; i < n; ++i) e[i] += prob[p] * v[ranks[p][i] - 1];
    return e;
}

RankingPosterior ranking_posterior(const ComparisonStructure& s, const SignalDraw& draw) {
    if (s.size() > static_cast<std::size_t>(kMaxEnumeration))
        throw ValidationError("ranking enumeration is limited to 8 options");
    RankingPosterior out;
    out.ranks = feasible_rankings(s);
    out.prob = posterior_weights(s, out.ranks, draw);
    return out;
}

ChoiceEstimate simulate_choice(const ComparisonStructure& s, const std::vector<int>& menu,
                               const std::vector<int>& context, const SimConfig& cfg) {
    if (menu.empty()) throw ValidationError("menu must be non-empty");
    std::vector<int> all = menu;
    for (int c : context) {
        if (std::find(menu.begin(), menu.end(), c) != menu.end())
            throw ValidationError("menu and context must be disjoint");
        all.push_back(c);
    }
    if (all.size() > static_cast<std::size_t>(kMaxEnumeration))
        throw ValidationError("menu plus context is limited to 8 options");
    if (cfg.draws == 0) throw ValidationError("draws must be positive");
    ComparisonStructure sub = s.restrict(all);
    auto rankings = feasible_rankings(sub);
    auto v = order_stat_means(static_cast<int>(all.size()), cfg.prior);
    std::size_t m = menu.size();

    auto blocks = run_blocks<std::vector<std::uint64_t>>(cfg.draws, cfg.threads, [&](std::uint64_t b, std::uint64_t count) {
        Rng rng(cfg.seed, b);
        std::vector<std::uint64_t> wins(m, 0);
        RankingPosterior post;
        post.ranks = rankings;
        std::vector<int> best;
        for (std::uint64_t d = 0; d < count; ++d) {
            SignalDraw draw = draw_signals(sub, rng, cfg.tau_scale);
            post.prob = posterior_weights(sub, rankings, draw);
            auto e = post.expected_values(v);
            best.assign(1, 0);
            for (std::size_t i = 1; i < m; ++i) {
                if (is_tie(e[i], e[best[0]]))
                    best.push_back(static_cast<int>(i));
                else if (e[i] > e[best[0]])
                    best.assign(1, static_cast<int>(i));
            }
            int pick = best.size() == 1 ? best[0] : best[rng.below(best.size())];
            ++wins[pick];
        }
        return wins;
    });

    std::vector<std::uint64_t> wins(m, 0);
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < m; ++i) wins[i] += b[i];
    ChoiceEstimate out;
    double n = static_cast<double>(cfg.draws);
    for (std::size_t i = 0; i < m; ++i) {
        double p = wins[i] / n;
        out.prob.push_back(p);
        out.se.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    return out;
}

std::vector<double> insertion_posterior(const std::vector<Precision>& tau, const std::vector<double>& a,
                                        const std::vector<int>& sign) {
    std::size_t n = tau.size();
    if (a.size() != n || sign.size() != n) throw ValidationError("insertion posterior inputs misaligned");
    // x inserted at rank k outranks z^j iff k <= j (1-based), so
    // log p_k = Σ_{j>=k} a_j - Σ_{j<k} a_j = S - 2 Σ_{j<k} a_j.
    std::size_t lo = 1, hi = n + 1;
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        if (tau[j - 1].perfect) {
            if (sign[j - 1] > 0) hi = std::min(hi, j);
            else if (sign[j - 1] < 0) lo = std::max(lo, j + 1);
            else throw ValidationError("perfectly comparable entry with equal value");
        } else {
            total += a[j - 1];
        }
    }
    if (lo > hi) throw SolverError("price list constraints are inconsistent");
    std::vector<double> logp(n + 1, -std::numeric_limits<double>::infinity());
    double prefix = 0.0, mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= n + 1; ++k) {
        if (k >= lo && k <= hi) {
            logp[k - 1] = total - 2.0 * prefix;
            mx = std::max(mx, logp[k - 1]);
        }
        if (k <= n && !tau[k - 1].perfect) prefix += a[k - 1];
    }
    std::vector<double> p(n + 1, 0.0);
    double z = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
        if (std::isfinite(logp[k])) z += (p[k] = std::exp(logp[k] - mx));
    for (double& q : p) q /= z;
    return p;
}

const char* list_kind_name(ListKind k) {
    switch (k) {
        case ListKind::CertaintyEquivalent: return "CE";
        case ListKind::ProbabilityEquivalent: return "PE";
        case ListKind::PresentValueEquivalent: return "PVE";
        case ListKind::TimeEquivalent: return "TE";
    }
    return "?";
}

std::vector<double> default_te_grid() {
    return {0, 7, 30, 60, 120, 180, 240, 360, 480, 600, 720, 900, 1080, 1260, 1440};
}

PriceList build_adapted_list(ListKind kind, const Option& anchor, int n, const Yardstick& yardstick) {
    PriceList list{kind, {}, {}};
    auto steps = [&](double top, double bottom, int k) {
        if (k == 1) return top;
        return bottom + (top - bottom) * static_cast<double>(n - k) / (n - 1);
    };
    if (kind != ListKind::TimeEquivalent && n < 3) throw ValidationError("price list needs n >= 3");

    switch (kind) {
        case ListKind::CertaintyEquivalent: {
            const auto* l = std::get_if<Lottery>(&anchor);
            if (!l) throw ValidationError("certainty equivalents need a lottery anchor");
            double top = l->outcomes().back().payoff, bottom = l->outcomes().front().payoff;
            if (!(top > bottom)) throw ValidationError("certainty-equivalent anchor must be risky");
            for (int k = 1; k <= n; ++k) {
                double w = steps(top, bottom, k);
                list.entries.emplace_back(Lottery::certain(w));
                list.grid.push_back(w);
            }
            break;
        }
        case ListKind::ProbabilityEquivalent: {
            const auto* l = std::get_if<Lottery>(&anchor);
            if (!l) throw ValidationError("probability equivalents need a lottery anchor");
            if (!(yardstick.amount > 0.0)) throw ValidationError("probability list needs a positive yardstick");
            const auto& o = l->outcomes();
            double top;
            if (o.size() == 1) {
                top = 1.0;
            } else if (o.size() == 2 && o[0].payoff == 0.0 && o[1].payoff > 0.0) {
                top = o[1].prob;
            } else {
                throw ValidationError("probability equivalents need a certain or simple lottery anchor");
            }
            if (o.back().payoff >= yardstick.amount)
                throw ValidationError("yardstick payment must exceed the anchor's payoffs");
            for (int k = 1; k <= n; ++k) {
                double p = steps(top, 0.0, k);
                list.entries.emplace_back(Lottery::simple(yardstick.amount, p));
                list.grid.push_back(p);
            }
            break;
        }
        case ListKind::PresentValueEquivalent: {
            const auto* f = std::get_if<PayoffFlow>(&anchor);
            if (!f || f->payments().size() != 1 || f->payments()[0].amount <= 0.0)
                throw ValidationError("present value equivalents need a single positive delayed payment");
            double m = f->payments()[0].amount;
            for (int k = 1; k <= n; ++k) {
                double w = steps(m, 0.0, k);
                list.entries.emplace_back(PayoffFlow::single(w, 0.0));
                list.grid.push_back(w);
            }
            break;
        }
        case ListKind::TimeEquivalent: {
            const auto* f = std::get_if<PayoffFlow>(&anchor);
            if (!f || f->payments().size() != 1 || f->payments()[0].amount <= 0.0)
                throw ValidationError("time equivalents need a single positive payment");
            if (!(yardstick.amount > 0.0)) throw ValidationError("time list needs a positive yardstick");
            auto delays = yardstick.delays_days.empty() ? default_te_grid() : yardstick.delays_days;
            if (n > 0 && static_cast<std::size_t>(n) != delays.size())
                throw ValidationError("time list size must match the delay grid");
            if (delays.size() < 3) throw ValidationError("time list needs at least 3 delays");
            for (std::size_t k = 1; k < delays.size(); ++k)
                if (!(delays[k] > delays[k - 1])) throw ValidationError("time list delays must increase");
            double t0 = f->payments()[0].delay_days;
            for (double t : delays) {
                list.entries.emplace_back(PayoffFlow::single(yardstick.amount, t0 + t));
                list.grid.push_back(t0 + t);
            }
            break;
        }
    }
    return list;
}

double SwitchingDistribution::mean() const {
    double acc = 0.0;
    for (std::size_t r = 0; r < prob.size(); ++r) acc += (r + 1) * prob[r];
    return acc;
}

std::vector<double> switching_given_signal(const std::vector<Precision>& tau, const std::vector<double>& a,
                                           const std::vector<int>& sign, const std::vector<double>& order_means) {
    std::size_t n = tau.size();
    if (order_means.size() != n + 1) throw ValidationError("order statistics must cover n+1 ranks");
    Switch s = locate_switch(insertion_posterior(tau, a, sign), order_means);
    std::vector<double> out(n + 1, 0.0);
    // each tied menu flips independently: R = base + Binomial(ties, 1/2)
    double c = std::pow(0.5, s.ties);
    for (int t = 0; t <= s.ties; ++t) {
        out[s.base - 1 + t] += c;
        c = c * (s.ties - t) / (t + 1);
    }
    return out;
}

SwitchingDistribution switching_uninformative(int n) {
    std::vector<Precision> tau(n, Precision::finite(0.0));
    std::vector<double> a(n, 0.0);
    std::vector<int> sign(n, 0);
    return {switching_given_signal(tau, a, sign, order_stat_means(n + 1)), 0};
}

SwitchingDistribution simulate_switching(const Option& x, const PriceList& list, const UtilityModel& model,
                                         const GCurve& curve, const SimConfig& cfg) {
    if (cfg.draws == 0) throw ValidationError("draws must be positive");
    PreparedList prep = prepare(x, list, model, curve, cfg.tau_scale);
    std::size_t n = list.entries.size();
    auto v = order_stat_means(static_cast<int>(n + 1), cfg.prior);
    std::vector<double> sd(n);
    for (std::size_t j = 0; j < n; ++j) sd[j] = prep.tau[j].perfect ? 0.0 : std::sqrt(prep.tau[j].tau);
    // fails early on inconsistent hard constraints, outside the worker threads
    insertion_posterior(prep.tau, std::vector<double>(n, 0.0), prep.sign);

    auto blocks = run_blocks<std::vector<std::uint64_t>>(cfg.draws, cfg.threads, [&](std::uint64_t b, std::uint64_t count) {
        Rng rng(cfg.seed, b);
        std::vector<std::uint64_t> counts(n + 1, 0);
        std::vector<double> a(n, 0.0);
        for (std::uint64_t d = 0; d < count; ++d) {
            for (std::size_t j = 0; j < n; ++j)
                if (!prep.tau[j].perfect) a[j] = prep.tau[j].tau * prep.sign[j] + sd[j] * rng.normal();
            Switch s = locate_switch(insertion_posterior(prep.tau, a, prep.sign), v);
            int r = s.base;
            for (int t = 0; t < s.ties; ++t) r += rng.coin();
            ++counts[r - 1];
        }
        return counts;
    });

    SwitchingDistribution out;
    out.prob.assign(n + 1, 0.0);
    out.draws = cfg.draws;
    std::vector<std::uint64_t> counts(n + 1, 0);
    for (const auto& b : blocks)
        for (std::size_t r = 0; r <= n; ++r) counts[r] += b[r];
    for (std::size_t r = 0; r <= n; ++r) out.prob[r] = static_cast<double>(counts[r]) / cfg.draws;
    return out;
}

double valuation_at(const PriceList& list, int r) {
    int n = static_cast<int>(list.grid.size());
    if (r >= 2 && r <= n) return 0.5 * (list.grid[r - 2] + list.grid[r - 1]);
    if (r == n + 1 && list.kind == ListKind::TimeEquivalent)
        return list.grid[n - 1] + 0.5 * (list.grid[n - 1] - list.grid[n - 2]);
    return std::numeric_limits<double>::quiet_NaN();
}

ValuationSummary valuation_summary(const SwitchingDistribution& dist, const PriceList& list) {
    if (dist.prob.size() != list.grid.size() + 1)
        throw ValidationError("switching distribution does not match the price list");
    double mass = 0.0, m1 = 0.0, m2 = 0.0;
    ValuationSummary out;
    for (std::size_t i = 0; i < dist.prob.size(); ++i) {
        double val = valuation_at(list, static_cast<int>(i) + 1);
        if (std::isnan(val)) {
            out.excluded_mass += dist.prob[i];
            continue;
        }
        mass += dist.prob[i];
        m1 += dist.prob[i] * val;
        m2 += dist.prob[i] * val * val;
    }
    if (mass <= 0.0) throw SolverError("every switching index lies outside the valuation range");
    out.mean = m1 / mass;
    if (dist.draws > 0) {
        double var = std::max(0.0, m2 / mass - out.mean * out.mean);
        out.se = std::sqrt(var / (mass * dist.draws));
    }
    return out;
}

}  // namespace tradeoff
