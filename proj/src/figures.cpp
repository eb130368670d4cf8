#include "tradeoff/figures.hpp"

#include <cmath>
#include <cstdio>

namespace tradeoff {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

std::string label(const char* prefix, const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %s=%g", prefix, key, v);
    return buf;
}

std::vector<double> default_discount_delays() {
    return {7, 30, 60, 120, 180, 240, 360, 480, 600, 720, 900, 1080, 1260, 1440};
}

// Delay t with d(t) = y, by bisection on the decreasing discount function.
double inverse_discount(const DiscountFunction& d, double y) {
    double lo = 0.0, hi = 1.0;
    while (d(hi) > y && hi < 1e9) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (d(mid) > y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

FigureRow make_row(std::string series, double x, const ValuationSummary& v, double truth, double scale = 1.0) {
    return {std::move(series), x, v.mean / scale, v.se / scale, truth, v.excluded_mass};
}

}  // namespace

ValuationSummary simulate_valuation(const Option& anchor, const PriceList& list, const UtilityModel& model,
                                    const FigureSettings& s) {
    return valuation_summary(simulate_switching(anchor, list, model, s.curve, s.sim), list);
}

std::vector<FigureRow> figure_ce_pe_reversal(const CePeReversalSpec& spec, const FigureSettings& s) {
    auto probs = spec.probs.empty() ? linspace(0.19, 0.94, 16) : spec.probs;
    double ev = spec.anchor_payoff * spec.anchor_prob;
    std::vector<FigureRow> rows;
    for (double alpha : spec.alphas) {
        UtilityModel u = CrraSymmetric(alpha);
        for (double p : probs) {
            double w = ev / p;
            Option l = Lottery::simple(w, p);
            auto ce_list = build_adapted_list(ListKind::CertaintyEquivalent, l, s.list_size);
            rows.push_back(make_row(label("CE", "alpha", alpha), p, simulate_valuation(l, ce_list, u, s),
                                    w * std::pow(p, 1.0 / alpha)));
            auto pe_list =
                build_adapted_list(ListKind::ProbabilityEquivalent, l, s.list_size, {spec.pe_yardstick, {}});
            rows.push_back(make_row(label("PE", "alpha", alpha), p, simulate_valuation(l, pe_list, u, s),
                                    p * std::pow(w / spec.pe_yardstick, alpha)));
        }
    }
    return rows;
}

std::vector<FigureRow> figure_pve_te_reversal(const PveTeReversalSpec& spec, const FigureSettings& s) {
    std::vector<double> delays = spec.delays;
    if (delays.empty())
        for (int k = 1; k <= 24; ++k) delays.push_back(30.0 * k);
    UtilityModel model = ExponentialDiscount(spec.delta, spec.period_days);
    DiscountFunction d(model);
    double pv = spec.anchor_amount * d(spec.anchor_delay);
    std::vector<FigureRow> rows;
    for (double t : delays) {
        double m = pv / d(t);
        Option v = PayoffFlow::single(m, t);
        auto pve = build_adapted_list(ListKind::PresentValueEquivalent, v, s.list_size);
        rows.push_back(make_row("PVE", t, simulate_valuation(v, pve, model, s), pv));
        auto te = build_adapted_list(ListKind::TimeEquivalent, v, static_cast<int>(spec.te_grid.size()),
                                     {spec.te_yardstick, spec.te_grid});
        rows.push_back(make_row("TE", t, simulate_valuation(v, te, model, s),
                                inverse_discount(d, pv / spec.te_yardstick)));
    }
    return rows;
}

std::vector<FigureRow> figure_pwf(const PwfSpec& spec, const FigureSettings& s) {
    auto probs = spec.probs.empty() ? linspace(0.05, 0.95, 19) : spec.probs;
    UtilityModel u = CrraSymmetric(spec.alpha);
    std::vector<FigureRow> rows;
    for (double p : probs) {
        Option l = Lottery::simple(spec.wbar, p);
        auto list = build_adapted_list(ListKind::CertaintyEquivalent, l, s.list_size);
        rows.push_back(make_row("CE", p, simulate_valuation(l, list, u, s), std::pow(p, 1.0 / spec.alpha), spec.wbar));
    }
    return rows;
}

std::vector<FigureRow> figure_pwf_pe(const PwfSpec& spec, const FigureSettings& s) {
    auto shares = spec.probs.empty() ? linspace(0.05, 0.95, 19) : spec.probs;
    UtilityModel u = CrraSymmetric(spec.alpha);
    std::vector<FigureRow> rows;
    for (double c : shares) {
        Option l = Lottery::certain(c * spec.wbar);
        auto list = build_adapted_list(ListKind::ProbabilityEquivalent, l, s.list_size, {spec.wbar, {}});
        rows.push_back(make_row("PE", c, simulate_valuation(l, list, u, s), std::pow(c, spec.alpha)));
    }
    return rows;
}

std::vector<FigureRow> figure_discount_pve(const DiscountSpec& spec, const FigureSettings& s) {
    auto delays = spec.delays.empty() ? default_discount_delays() : spec.delays;
    DiscountFunction d(spec.discount);
    std::vector<FigureRow> rows;
    for (double t : delays) {
        Option v = PayoffFlow::single(spec.mbar, t);
        auto list = build_adapted_list(ListKind::PresentValueEquivalent, v, s.list_size);
        rows.push_back(make_row("PVE", t, simulate_valuation(v, list, spec.discount, s), d(t), spec.mbar));
    }
    return rows;
}

std::vector<FigureRow> figure_discount_te(const DiscountSpec& spec, const FigureSettings& s) {
    DiscountFunction d(spec.discount);
    std::vector<double> amounts = spec.amounts;
    if (amounts.empty())
        for (double t : default_discount_delays()) amounts.push_back(d(t));
    std::vector<FigureRow> rows;
    for (double y : amounts) {
        Option c = PayoffFlow::single(y * spec.mbar, 0.0);
        auto list = build_adapted_list(ListKind::TimeEquivalent, c, static_cast<int>(spec.te_grid.size()),
                                       {spec.mbar, spec.te_grid});
        rows.push_back(make_row("TE", y, simulate_valuation(c, list, spec.discount, s), inverse_discount(d, y)));
    }
    return rows;
}

std::vector<FigureRow> figure_hyperbolic(const HyperbolicSpec& spec, const FigureSettings& s) {
    std::vector<FigureRow> rows;
    for (double zeta : spec.zetas) {
        DiscountSpec ds;
        ds.discount = GeneralizedHyperbolic(spec.iota, zeta, spec.period_days);
        ds.mbar = spec.mbar;
        for (auto r : figure_discount_pve(ds, s)) {
            r.series = label("PVE", "zeta", zeta);
            rows.push_back(std::move(r));
        }
        for (auto r : figure_discount_te(ds, s)) {
            r.series = label("TE", "zeta", zeta);
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

std::vector<FigureRow> figure_decoy_cases(const FigureSettings& s) {
    const double decoys[3][2] = {{1.8, 0.8}, {1.5, 1.1}, {0.8, 0.5}};
    UtilityModel model = LinearAttributes::unit(2);
    std::vector<FigureRow> rows;
    for (int c = 0; c < 3; ++c) {
        std::vector<Option> opts{AttributeVector({1.0, 2.0}), AttributeVector({2.0, 1.0}),
                                 AttributeVector({decoys[c][0], decoys[c][1]})};
        auto st = ComparisonStructure::from_options(opts, model, s.curve);
        auto est = simulate_choice(st, {0, 1}, {2}, s.sim);
        rows.push_back({"case" + std::to_string(c + 1), static_cast<double>(c + 1), est.prob[1], est.se[1], 0.5, 0.0});
    }
    return rows;
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"ce-pe-reversal", "pve-te-reversal", "pwf", "pwf-pe",
                                              "discount-pve",   "discount-te",     "hyperbolic-appendix",
                                              "decoy-cases"};
    return ids;
}

std::vector<FigureRow> run_figure(const std::string& id, const FigureSettings& s) {
    if (id == "ce-pe-reversal") return figure_ce_pe_reversal({}, s);
    if (id == "pve-te-reversal") return figure_pve_te_reversal({}, s);
    if (id == "pwf") return figure_pwf({}, s);
    if (id == "pwf-pe") return figure_pwf_pe({}, s);
    if (id == "discount-pve") return figure_discount_pve({}, s);
    if (id == "discount-te") return figure_discount_te({}, s);
    if (id == "hyperbolic-appendix") return figure_hyperbolic({}, s);
    if (id == "decoy-cases") return figure_decoy_cases(s);
    throw ValidationError("unknown figure id: " + id);
}

}  // namespace tradeoff
