#include "tradeoff/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tradeoff {

namespace {

constexpr double kTieBand = 1e-12;

double closed_form_pb(double cb, double dq, double dc) {
    return cb + 0.25 * dq + 0.75 * std::sqrt(dq * dq + (8.0 / 9.0) * dq * dc);
}

// Closed-form equilibrium with a as the low-cost firm, linear G.
DuopolyResult linear_equilibrium(double ca, double cb, double dq) {
    DuopolyResult r;
    if (cb == ca) {
        r.p_a = r.p_b = ca + dq;
    } else {
        r.p_a = cb + dq;
        r.p_b = closed_form_pb(cb, dq, cb - ca);
    }
    return r;
}

void fill_outcome(DuopolyResult& r, double ca, double cb, double dq, const GCurve& g) {
    auto pi = duopoly_profits(r.p_a, r.p_b, ca, cb, dq, g);
    r.profit_a = pi[0];
    r.profit_b = pi[1];
    TieRule tie = ca < cb ? TieRule::FirstWins : ca > cb ? TieRule::SecondWins : TieRule::Split;
    r.share_a = duopoly_demand(r.p_a, r.p_b, dq, g, tie);
    r.share_b = 1.0 - r.share_a;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double& best_x) {
    const double phi = 0.6180339887498949;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++i) {
        if (f1 < f2) {
            lo = x1, x1 = x2, f1 = f2;
            x2 = lo + phi * (hi - lo), f2 = f(x2);
        } else {
            hi = x2, x2 = x1, f2 = f1;
            x1 = hi - phi * (hi - lo), f1 = f(x1);
        }
    }
    best_x = f1 > f2 ? x1 : x2;
    return std::max(f1, f2);
}

// Best grid point among `grid` plus golden refinement between its neighbours.
double argmax_price(const std::function<double(double)>& profit, std::vector<double> grid, double& best_value) {
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::size_t k = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = profit(grid[i]);
        if (v > best) best = v, k = i;
    }
    double x = grid[k];
    for (int side : {-1, 1}) {
        std::size_t j = k + side;
        if (j >= grid.size()) continue;
        double lo = std::min(grid[k], grid[j]), hi = std::max(grid[k], grid[j]);
        double xr;
        double v = golden_max(profit, lo, hi, xr);
        if (v > best) best = v, x = xr;
    }
    best_value = best;
    return x;
}

}  // namespace

void MarketConfig::validate() const {
    if (!(q_lo < q_hi)) throw ValidationError("location bounds need q_lo < q_hi");
    if (!(c_a >= 0.0) || !(c_b >= 0.0)) throw ValidationError("costs must be >= 0");
    if (!std::isfinite(q_lo) || !std::isfinite(q_hi) || !std::isfinite(c_a) || !std::isfinite(c_b))
        throw ValidationError("market parameters must be finite");
}

bool is_linear(const GCurve& g) { return g.kappa == 0.0 && g.gamma == 1.0 && g.psi == 1.0; }

double duopoly_demand(double p_i, double p_j, double dq, const GCurve& curve, TieRule tie) {
    if (!(dq >= 0.0)) throw ValidationError("quantity dissimilarity must be >= 0");
    if (!std::isfinite(p_i) || !std::isfinite(p_j)) throw ValidationError("prices must be finite");
    double gap = std::abs(p_i - p_j);
    if (dq == 0.0) {
        if (p_i < p_j) return curve(1.0);
        if (p_i > p_j) return curve(-1.0);
        switch (tie) {
            case TieRule::FirstWins: return curve(1.0);
            case TieRule::SecondWins: return curve(-1.0);
            case TieRule::Split: return 0.5;
        }
    }
    return curve((p_j - p_i) / (dq + gap));
}

std::array<double, 2> duopoly_profits(double p_a, double p_b, double c_a, double c_b, double dq,
                                      const GCurve& curve) {
    TieRule tie = c_a < c_b ? TieRule::FirstWins : c_a > c_b ? TieRule::SecondWins : TieRule::Split;
    double s = duopoly_demand(p_a, p_b, dq, curve, tie);
    return {(p_a - c_a) * s, (p_b - c_b) * (1.0 - s)};
}

DuopolyResult duopoly_equilibrium(double c_a, double c_b, double dq, const GCurve& curve) {
    if (!(dq >= 0.0) || !std::isfinite(dq)) throw ValidationError("quantity dissimilarity must be finite and >= 0");
    if (!(c_a >= 0.0) || !(c_b >= 0.0)) throw ValidationError("costs must be >= 0");
    if (c_a > c_b) {  // label the low-cost firm a internally
        DuopolyResult r = duopoly_equilibrium(c_b, c_a, dq, curve);
        std::swap(r.p_a, r.p_b);
        std::swap(r.share_a, r.share_b);
        std::swap(r.profit_a, r.profit_b);
        return r;
    }
    DuopolyResult r;
    if (is_linear(curve)) {
        r = linear_equilibrium(c_a, c_b, dq);
    } else {
        if (c_a != c_b)
            throw SolverError("asymmetric-cost equilibrium has no closed form under a nonlinear G curve");
        r.p_a = r.p_b = c_a + dq / (2.0 * curve.slope_at_zero());
        r.closed_form = false;
    }
    fill_outcome(r, c_a, c_b, dq, curve);

    if (is_linear(curve) && c_b > c_a) {
        double h = 1e-6 * std::max(1.0, dq);
        auto at = [&](double q) {
            DuopolyResult x = linear_equilibrium(c_a, c_b, q);
            fill_outcome(x, c_a, c_b, q, curve);
            return x;
        };
        DuopolyResult lo = at(std::max(0.0, dq - h)), hi = at(dq + h);
        r.share_b_increasing = hi.share_b > lo.share_b;
        r.profit_b_increasing = hi.profit_b > lo.profit_b;
    }

    double span = 3.0 * dq + 1.0;
    r.residual = verify_equilibrium(
        {r.p_a, r.p_b},
        [&](const std::vector<double>& p) {
            auto pi = duopoly_profits(p[0], p[1], c_a, c_b, dq, curve);
            return std::vector<double>{pi[0], pi[1]};
        },
        {{c_a, c_a + span + (r.p_a - c_a)}, {c_b, c_b + span + (r.p_b - c_b)}}, 1e-3);
    return r;
}

std::string regime_name(StageRegime r) {
    switch (r) {
        case StageRegime::Symmetric: return "symmetric";
        case StageRegime::Imitate: return "imitate";
        case StageRegime::Obfuscate: return "obfuscate";
        case StageRegime::Indifferent: return "indifferent";
    }
    return "?";
}

StageOutcome location_stage_outcome(const MarketConfig& cfg, MoverOrder order) {
    cfg.validate();
    if (!is_linear(cfg.curve)) throw SolverError("location stage is solved for a linear G curve only");
    StageOutcome out;
    double dq_max = cfg.max_dissimilarity();
    if (cfg.c_a == cfg.c_b) {
        // profits Δq/2 rise with dissimilarity: locate at opposite ends
        out.regime = StageRegime::Symmetric;
        out.dq = dq_max;
        out.prices = duopoly_equilibrium(cfg.c_a, cfg.c_b, dq_max, cfg.curve);
        out.profit_a_obfuscate = out.prices.profit_a;
        out.profit_a_imitate = 0.0;
        return out;
    }
    if (order == MoverOrder::Simultaneous)
        throw SolverError("no pure-strategy location equilibrium is solved for simultaneous moves with a cost gap");

    bool a_low = cfg.c_a < cfg.c_b;
    double lo_cost = std::min(cfg.c_a, cfg.c_b), hi_cost = std::max(cfg.c_a, cfg.c_b);
    // Low-cost profit is quasi-convex in Δq, so only the two endpoints compete.
    DuopolyResult imitate = duopoly_equilibrium(lo_cost, hi_cost, 0.0, cfg.curve);
    DuopolyResult obfuscate = duopoly_equilibrium(lo_cost, hi_cost, dq_max, cfg.curve);
    out.profit_a_imitate = imitate.profit_a;
    out.profit_a_obfuscate = obfuscate.profit_a;
    double diff = obfuscate.profit_a - imitate.profit_a;
    double band = kTieBand * std::max(1.0, std::abs(imitate.profit_a));
    if (std::abs(diff) <= band) {
        // equal profits for the low-cost firm; the high-cost firm prefers dissimilarity
        out.regime = StageRegime::Indifferent;
        out.dq = dq_max;
        out.prices = obfuscate;
    } else if (diff < 0.0) {
        out.regime = StageRegime::Imitate;
        out.dq = 0.0;
        out.prices = imitate;
    } else {
        out.regime = StageRegime::Obfuscate;
        out.dq = dq_max;
        out.prices = obfuscate;
    }
    if (!a_low) {
        std::swap(out.prices.p_a, out.prices.p_b);
        std::swap(out.prices.share_a, out.prices.share_b);
        std::swap(out.prices.profit_a, out.prices.profit_b);
    }
    return out;
}

// Three firms ------------------------------------------------------------------

namespace {

void check_three(double dq, double c, double c_s) {
    if (!(dq > 0.0) || !std::isfinite(dq)) throw ValidationError("three-firm market needs Δq > 0");
    if (!(c >= 0.0) || !(c_s >= c)) throw ValidationError("three-firm market needs 0 <= c <= c_s");
}

double reveal(double p_i, double p_j, double dq) {
    double gap = std::abs(p_i - p_j);
    return gap == 0.0 ? 0.0 : gap / (dq + gap);
}

void add_profits(ThreeFirmDemand& d, double p_a, double p_b, double p_s, double c, double c_s) {
    d.profit = {(p_a - c) * d.share[0], (p_b - c) * d.share[1], (p_s - c_s) * d.share[2]};
}

}  // namespace

ThreeFirmDemand three_firm_enumerated(double p_a, double p_b, double p_s, double dq, double c, double c_s) {
    check_three(dq, c, c_s);
    // Utility is Q - p; a beats s at equal prices by the tie rule.
    const double price[3] = {p_a, p_b, p_s};
    auto better = [&](int i, int j) {
        if (price[i] != price[j]) return price[i] < price[j];
        return i == 0 && j == 2;
    };
    const int pairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};
    // a and s share quantities, so any price gap (or the tie rule) is a dominance
    const double tau[3] = {reveal(p_a, p_b, dq), reveal(p_b, p_s, dq), 1.0};
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

    ThreeFirmDemand d;
    d.formula = false;
    for (int event = 0; event < 8; ++event) {
        double pr = 1.0;
        for (int k = 0; k < 3; ++k) pr *= (event >> k & 1) ? tau[k] : 1.0 - tau[k];
        if (pr == 0.0) continue;
        double score[3] = {0, 0, 0};
        for (const auto& perm : perms) {
            int pos[3];
            for (int r = 0; r < 3; ++r) pos[perm[r]] = r;
            bool ok = true;
            for (int k = 0; k < 3 && ok; ++k) {
                if (!(event >> k & 1)) continue;
                int i = pairs[k][0], j = pairs[k][1];
                int hi = better(i, j) ? i : j, lo = hi == i ? j : i;
                ok = pos[hi] < pos[lo];
            }
            if (ok)
                for (int i = 0; i < 3; ++i) score[i] += 2 - pos[i];
        }
        double top = *std::max_element(score, score + 3);
        int winners = 0;
        for (double s : score) winners += s == top;
        for (int i = 0; i < 3; ++i)
            if (score[i] == top) d.share[i] += pr / winners;
    }
    add_profits(d, p_a, p_b, p_s, c, c_s);
    return d;
}

ThreeFirmDemand three_firm_profits(double p_a, double p_b, double p_s, double dq, double c, double c_s) {
    check_three(dq, c, c_s);
    ThreeFirmDemand d;
    double t_ab = reveal(p_a, p_b, dq), t_bs = reveal(p_b, p_s, dq);
    if (p_b <= p_a + kTieBand && p_a <= p_s + kTieBand && p_b <= p_s) {
        d.share[1] = t_ab + 0.5 * (1.0 - t_ab) * t_bs;
        d.share[0] = 0.5 * (1.0 - t_ab) * t_bs + (1.0 - t_ab) * (1.0 - t_bs);
        d.share[2] = 0.0;
    } else if (p_a < p_b && p_b < p_s) {
        d.share[0] = t_ab + 0.5 * (1.0 - t_ab) * t_bs + (1.0 - t_ab) * (1.0 - t_bs);
        d.share[1] = 0.5 * (1.0 - t_ab) * t_bs;
        d.share[2] = 0.0;
    } else {
        return three_firm_enumerated(p_a, p_b, p_s, dq, c, c_s);
    }
    add_profits(d, p_a, p_b, p_s, c, c_s);
    return d;
}

ThreeFirmResult three_firm_equilibrium(double dq, double c, double c_s, const SearchConfig& cfg) {
    check_three(dq, c, c_s);
    const double cost[3] = {c, c, c_s};
    auto profit_of = [&](int i, const std::array<double, 3>& p) {
        return three_firm_profits(p[0], p[1], p[2], dq, c, c_s).profit[i];
    };
    auto best_response = [&](int i, const std::array<double, 3>& p) {
        double top = std::max({p[0], p[1], p[2], cost[i]}) + 4.0 * dq + 1.0;
        std::vector<double> grid;
        for (int k = 0; k <= cfg.grid; ++k) grid.push_back(cost[i] + (top - cost[i]) * k / cfg.grid);
        for (int j = 0; j < 3; ++j)
            if (j != i && p[j] > cost[i]) grid.push_back(p[j]);  // discontinuities at rivals' prices
        auto f = [&](double x) {
            auto q = p;
            q[i] = x;
            return profit_of(i, q);
        };
        double value;
        double x = argmax_price(f, grid, value);
        return value <= 0.0 ? cost[i] : x;  // no positive profit available: price at cost
    };

    auto residual_at = [&](const std::array<double, 3>& p) {
        double top = std::max({p[0], p[1], p[2]}) + 4.0 * dq + 1.0;
        return verify_equilibrium(
            {p[0], p[1], p[2]},
            [&](const std::vector<double>& x) {
                auto d = three_firm_profits(x[0], x[1], x[2], dq, c, c_s);
                return std::vector<double>(d.profit.begin(), d.profit.end());
            },
            {{c, top}, {c, top}, {c_s, top}}, 1e-3);
    };

    // Best-response dynamics between a and s at equal offers stall in an undercutting
    // race, so s starts at cost and a fixed point is accepted only once no firm gains
    // on the deviation grid.
    ThreeFirmResult out;
    std::array<double, 3> p{};
    bool accepted = false;
    double last_residual = 0.0;
    for (int attempt = 0; attempt <= cfg.restarts && !accepted; ++attempt) {
        double jitter = 0.05 * dq * attempt;
        p = {std::min(c + dq, c_s) + jitter, c + 0.5 * dq + jitter, c_s};
        bool converged = false;
        for (out.iterations = 0; out.iterations < cfg.max_iter; ++out.iterations) {
            std::array<double, 3> br{best_response(0, p), best_response(1, p), best_response(2, p)};
            double change = 0.0;
            for (int i = 0; i < 3; ++i) {
                double next = (1.0 - cfg.damping) * br[i] + cfg.damping * p[i];
                change = std::max(change, std::abs(next - p[i]));
                p[i] = next;
            }
            if (change < cfg.tol) {
                converged = true;
                break;
            }
        }
        if (!converged) continue;
        // snap coordinates the damped map approaches only geometrically
        for (int i = 0; i < 3; ++i) {
            double br = best_response(i, p);
            if (std::abs(br - p[i]) < 1e-6) p[i] = br;
        }
        auto d = three_firm_profits(p[0], p[1], p[2], dq, c, c_s);
        double scale = std::max({1e-12, std::abs(d.profit[0]), std::abs(d.profit[1]), std::abs(d.profit[2])});
        last_residual = residual_at(p);
        accepted = last_residual <= 1e-6 * scale;
    }
    if (!accepted)
        throw SolverError("three-firm best-response iteration did not reach an equilibrium (deviation gain " +
                          std::to_string(last_residual) + ")");

    out.p_a = p[0];
    out.p_b = p[1];
    out.p_s = p[2];
    out.demand = three_firm_profits(p[0], p[1], p[2], dq, c, c_s);
    out.s_at_cost = out.p_s == c_s;
    out.residual = last_residual;
    if (!(out.p_b < out.p_a)) throw SolverError("three-firm solution violates p_b < p_a");
    return out;
}

double verify_equilibrium(const std::vector<double>& prices, const ProfitFn& profits,
                          const std::vector<std::pair<double, double>>& ranges, double step) {
    if (ranges.size() != prices.size()) throw ValidationError("one deviation range per firm is required");
    if (!(step > 0.0)) throw ValidationError("deviation grid step must be > 0");
    auto base = profits(prices);
    double gain = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < prices.size(); ++i) {
        auto [lo, hi] = ranges[i];
        auto p = prices;
        long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long k = 0; k <= n; ++k) {
            p[i] = lo + step * k;
            gain = std::max(gain, profits(p)[i] - base[i]);
        }
    }
    return gain;
}

}  // namespace tradeoff
