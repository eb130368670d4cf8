// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support.hpp"
#include "tradeoff/bayes_engine.hpp"
#include "tradeoff/choice_models.hpp"
#include "tradeoff/complexity.hpp"
#include "tradeoff/estimation.hpp"
#include "tradeoff/figures.hpp"
#include "tradeoff/market.hpp"

using namespace tradeoff;
using namespace testing_support;

namespace {

// Pinned tolerances.
constexpr double kIdentityTol = 1e-12;
constexpr double kOracleTol = 1e-9;
constexpr double kPropertyTol = 1e-9;
constexpr double kSigmas = 3.0;
constexpr double kRecoveryTol = 0.03;
constexpr double kRestrictTol = 1e-9;
constexpr double kDeviationTol = 1e-6;
constexpr double kDeviationStep = 1e-3;
constexpr double kSwitchTol = 1e-6;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 ---------------------------------------------------------------------------
Verdict g_identities() {
    Verdict out;
    int grid = 0, bad = 0;
    for (double k : {0.0, 0.05, 0.15, 0.3, 0.45})
        for (double g : {0.3, 0.7, 1.0, 1.8, 3.0})
            for (double psi : {1.0, 0.55}) {
                ++grid;
                GCurve c(k, g, psi);
                bad += std::abs(c(0.0) - 0.5) > kIdentityTol;
                bad += std::abs(c(1.0) - (1.0 - k)) > kIdentityTol;
                bad += std::abs(c(-1.0) - k) > kIdentityTol;
                for (int i = 0; i <= 100; ++i) {
                    double r = i / 100.0;
                    bad += std::abs(c(r) + c(-r) - 1.0) > kIdentityTol;
                }
            }
    out.require(grid == 50, "grid size " + std::to_string(grid));
    out.require(bad == 0, std::to_string(bad) + " identity violations");
    out.detail = out.pass ? "50 parameter points, 104 checks each" : out.detail;
    return out;
}

// 2 ---------------------------------------------------------------------------
Verdict coupling_oracles() {
    Verdict out;
    Rng rng(2002, 0);
    UtilityModel lin = CrraSymmetric(1.0), crra = CrraSymmetric(0.7);
    DiscountFunction exp_d(ExponentialDiscount(0.96, 24.0)), hyp_d(GeneralizedHyperbolic(0.16, 0.12, 24.0));
    double worst_l = 0.0, worst_f = 0.0;
    for (int i = 0; i < 1000; ++i) {
        auto x = random_lottery(rng), y = random_lottery(rng);
        const UtilityModel& u = i % 2 ? lin : crra;
        worst_l = std::max(worst_l, std::abs(min_coupling_lottery(x, y, u) - d_cdf(x, y, u)));
        auto f = random_flow(rng), g = random_flow(rng);
        const DiscountFunction& d = i % 2 ? exp_d : hyp_d;
        worst_f = std::max(worst_f, std::abs(min_coupling_flow(f, g, d) - d_cpf(f, g, d)));
    }
    out.require(worst_l <= kOracleTol, "lottery gap " + num(worst_l));
    out.require(worst_f <= kOracleTol, "flow gap " + num(worst_f));
    if (out.pass) out.detail = "max gap lottery " + num(worst_l) + ", flow " + num(worst_f);
    return out;
}

// 3 ---------------------------------------------------------------------------
Lottery mix(double a, const Lottery& x, const Lottery& z) {
    std::vector<Outcome> o;
    for (auto q : x.outcomes()) o.push_back({q.payoff, a * q.prob});
    for (auto q : z.outcomes()) o.push_back({q.payoff, (1 - a) * q.prob});
    return Lottery(o);
}

PayoffFlow mix(double a, const PayoffFlow& x, const PayoffFlow& z) {
    std::vector<Payment> p;
    for (auto q : x.payments()) p.push_back({q.delay_days, a * q.amount});
    for (auto q : z.payments()) p.push_back({q.delay_days, (1 - a) * q.amount});
    return PayoffFlow(p);
}

AttributeVector mix(double a, const AttributeVector& x, const AttributeVector& z) {
    std::vector<double> v;
    for (std::size_t k = 0; k < x.size(); ++k) v.push_back(a * x[k] + (1 - a) * z[k]);
    return AttributeVector(v);
}

struct AxiomTally {
    long draws = 0, dominance = 0, nondominance = 0, transitive = 0, violations = 0;
};

template <class Opt, class Gen>
void axiom_suite(const ChoiceModel& m, const UtilityModel& u, const GCurve& curve, Gen gen, Rng& rng, int n,
                 AxiomTally& t) {
    double g1 = curve(1.0);
    for (int i = 0; i < n; ++i) {
        Opt x = gen(rng), y = gen(rng), z = gen(rng);
        ++t.draws;
        double pxy = rho(m, x, y), pyz = rho(m, y, z), pxz = rho(m, x, z);
        // M1: complementarity
        t.violations += std::abs(pxy + rho(m, y, x) - 1.0) > kPropertyTol;
        // M4: dominance is maximal
        if (dominates(Option(x), Option(y), u)) {
            ++t.dominance;
            t.violations += std::abs(pxy - g1) > kPropertyTol;
        } else if (!dominates(Option(y), Option(x), u)) {
            ++t.nondominance;
            t.violations += !(pxy < g1);
        }
        // M3: moderate transitivity
        if (pxy >= 0.5 && pyz >= 0.5) {
            ++t.transitive;
            bool all_equal = std::abs(pxy - pyz) <= kPropertyTol && std::abs(pyz - pxz) <= kPropertyTol;
            t.violations += !(pxz > std::min(pxy, pyz) - kPropertyTol || all_equal);
        }
        // monotonicity: improving x never lowers its choice probability
        Opt better = improved(rng, x);
        t.violations += rho(m, better, y) < pxy - kPropertyTol;
        // M2: linearity under a common mixture
        double a = 0.05 + 0.9 * rng.uniform();
        t.violations += std::abs(rho(m, mix(a, x, z), mix(a, y, z)) - pxy) > kPropertyTol;
    }
}

Verdict axiom_properties() {
    Verdict out;
    Rng rng(3003, 0);
    const int n = 10000;
    GCurve curve(0.05, 0.8);
    AxiomTally ta, tl, tf;
    UtilityModel ua = LinearAttributes({1.0, 0.7, 1.4});
    axiom_suite<AttributeVector>(Complexity{ua, curve}, ua, curve, [](Rng& r) { return random_attributes(r, 3); }, rng, n, ta);
    UtilityModel ul = CrraSymmetric(0.8);
    axiom_suite<Lottery>(Complexity{ul, curve}, ul, curve, [](Rng& r) { return random_lottery(r, 4); }, rng, n, tl);
    UtilityModel uf = ExponentialDiscount(0.96, 24.0);
    axiom_suite<PayoffFlow>(Complexity{uf, curve}, uf, curve, [](Rng& r) { return random_flow(r, 4); }, rng, n, tf);
    for (auto* t : {&ta, &tl, &tf}) {
        out.require(t->violations == 0, std::to_string(t->violations) + " violations");
        out.require(t->dominance > 0 && t->transitive > 0, "a property was never exercised");
    }
    if (out.pass)
        out.detail = "3 x 10^4 triples, dominance pairs " + std::to_string(ta.dominance + tl.dominance + tf.dominance) +
                     ", transitivity premises " + std::to_string(ta.transitive + tl.transitive + tf.transitive);
    return out;
}

// 4 ---------------------------------------------------------------------------
Verdict binary_consistency() {
    Verdict out;
    int worst = 0;
    double worst_z = 0.0;
    for (int k = 0; k < 20; ++k) {
        double tau = 0.15 * k;
        std::vector<std::vector<Precision>> t(2, std::vector<Precision>(2, Precision::finite(tau)));
        ComparisonStructure s({0.7, 0.4}, t);
        SimConfig cfg;
        cfg.draws = 100000;
        cfg.seed = 400 + k;
        auto est = simulate_choice(s, {0, 1}, {}, cfg);
        double truth = norm_cdf(std::sqrt(tau));
        double se = std::sqrt(truth * (1 - truth) / cfg.draws);
        double z = std::abs(est.prob[0] - truth) / se;
        if (z > worst_z) worst_z = z, worst = k;
    }
    out.require(worst_z <= kSigmas, "tau=" + num(0.15 * worst) + " off by " + num(worst_z) + " se");
    if (out.pass) out.detail = "20 tau points, worst deviation " + num(worst_z) + " se";
    return out;
}

// 5 ---------------------------------------------------------------------------
Verdict pull_to_center() {
    Verdict out;
    for (int n : {5, 14, 15}) {
        double m = switching_uninformative(n).mean();
        out.require(std::abs(m - (n + 2) / 2.0) <= kIdentityTol, "analytic E[R] at n=" + std::to_string(n) + " is " + num(m));

        // zero precision through the simulation path; κ > 0 keeps the list's end points finite
        Option x = Lottery::simple(10.0, 0.5);
        auto list = build_adapted_list(ListKind::CertaintyEquivalent, x, n);
        SimConfig cfg;
        cfg.draws = 100000;
        cfg.seed = 500 + n;
        cfg.tau_scale = 0.0;
        auto d = simulate_switching(x, list, CrraSymmetric(1.0), GCurve(0.1, 0.5), cfg);
        double mean = d.mean(), m2 = 0.0;
        for (std::size_t r = 0; r < d.prob.size(); ++r) m2 += d.prob[r] * (r + 1.0) * (r + 1.0);
        double se = std::sqrt((m2 - mean * mean) / cfg.draws);
        out.require(std::abs(mean - (n + 2) / 2.0) <= kSigmas * se,
                    "simulated E[R] at n=" + std::to_string(n) + " is " + num(mean));
    }
    // every pair perfectly comparable: certain payments against a CE list under κ = 0
    auto list = build_adapted_list(ListKind::CertaintyEquivalent, Lottery::simple(10.0, 0.5), 15);
    SimConfig cfg;
    cfg.draws = 20000;
    for (double c : {0.3, 4.1, 6.3, 9.9}) {
        int r_star = 1;
        for (double w : list.grid) r_star += w > c;
        auto d = simulate_switching(Lottery::certain(c), list, CrraSymmetric(1.0), GCurve(0.0, 0.5), cfg);
        out.require(d.prob[r_star - 1] == 1.0, "R != R* for certain " + num(c));
    }
    if (out.pass) out.detail = "E[R] = (n+2)/2 for n in {5,14,15}; R = R* in every draw";
    return out;
}

// 6 ---------------------------------------------------------------------------
Verdict decoys() {
    Verdict out;
    FigureSettings fs;
    fs.sim.draws = 100000;
    fs.sim.seed = 606;
    auto rows = figure_decoy_cases(fs);
    out.require(rows[0].mean - 0.5 > kSigmas * rows[0].se, "case 1 rho " + num(rows[0].mean));
    out.require(rows[1].mean - 0.5 > kSigmas * rows[1].se, "case 2 rho " + num(rows[1].mean));
    out.require(std::abs(rows[2].mean - 0.5) <= kSigmas * rows[2].se, "case 3 rho " + num(rows[2].mean));
    out.detail = "rho(y,x|z): " + num(rows[0].mean) + ", " + num(rows[1].mean) + ", " + num(rows[2].mean) +
                 (out.pass ? "" : "; " + out.detail);
    return out;
}

double gap_z(const FigureRow& a, const FigureRow& b) { return (a.mean - b.mean) / std::hypot(a.se, b.se); }

// 7 ---------------------------------------------------------------------------
Verdict ce_pe_reversal() {
    Verdict out;
    FigureSettings fs;
    fs.sim.seed = 707;
    CePeReversalSpec spec;
    spec.probs = {0.19, 0.94};
    auto rows = figure_ce_pe_reversal(spec, fs);
    // per alpha: CE(p=.19), PE(p=.19), CE(p=.94), PE(p=.94)
    std::string note;
    for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
        const auto* r = &rows[4 * a];
        double ce = gap_z(r[0], r[2]), pe = gap_z(r[3], r[1]);
        out.require(ce > kSigmas, "alpha " + num(spec.alphas[a]) + " CE gap " + num(ce) + " se");
        out.require(pe > kSigmas, "alpha " + num(spec.alphas[a]) + " PE gap " + num(pe) + " se");
        note += (note.empty() ? "" : "; ") + std::string("alpha ") + num(spec.alphas[a]) + ": CE " + num(r[0].mean) +
                " > " + num(r[2].mean) + ", PE " + num(r[1].mean) + " < " + num(r[3].mean);
    }
    out.detail = out.pass ? note : out.detail;
    return out;
}

// 8 ---------------------------------------------------------------------------
Verdict figure_shapes() {
    Verdict out;
    FigureSettings fs;
    fs.sim.seed = 808;
    auto z = [](const FigureRow& r) { return (r.mean - r.truth) / r.se; };

    PwfSpec pw;
    pw.probs = {0.05, 0.95};
    auto ce = figure_pwf(pw, fs);
    out.require(z(ce[0]) > kSigmas, "CE weighting at 0.05 not above the diagonal");
    out.require(z(ce[1]) < -kSigmas, "CE weighting at 0.95 not below the diagonal");
    // PE of a certain share c: PE > c means the implied weight c sits below the diagonal
    auto pe = figure_pwf_pe(pw, fs);
    out.require(z(pe[0]) > kSigmas, "PE weighting at 0.05 not reversed");
    out.require(z(pe[1]) < -kSigmas, "PE weighting at 0.95 not reversed");

    DiscountSpec ds;
    DiscountFunction d(ds.discount);
    ds.delays = {7.0, 1080.0};
    ds.amounts = {d(7.0), d(1080.0)};
    auto pve = figure_discount_pve(ds, fs);
    out.require(z(pve[0]) < -kSigmas, "PVE curve not below truth at 7 days");
    out.require(z(pve[1]) > kSigmas, "PVE curve not above truth at 1080 days");
    // TE delay above the true delay puts the implied curve above truth
    auto te = figure_discount_te(ds, fs);
    out.require(z(te[0]) > kSigmas, "TE curve not above truth at 7 days");
    out.require(z(te[1]) < -kSigmas, "TE curve not below truth at 1080 days");
    if (out.pass)
        out.detail = "CE " + num(ce[0].mean) + "/" + num(ce[1].mean) + ", PE " + num(pe[0].mean) + "/" + num(pe[1].mean) +
                     ", PVE " + num(pve[0].mean) + "/" + num(pve[1].mean) + ", TE " + num(te[0].mean) + "/" +
                     num(te[1].mean);
    return out;
}

// 9 ---------------------------------------------------------------------------
Verdict recovery() {
    Verdict out;
    const std::vector<double> truth{0.96, 0.03, 0.85};
    auto data = simulate_temporal(909, build_model("CPF-C", truth, 24.0), 500, 40);
    FitConfig cfg;
    cfg.seed = 9;
    auto f = fit(model_template("CPF-C", 24.0), data, cfg);
    const char* names[3] = {"delta", "kappa", "gamma"};
    std::string est;
    for (int i = 0; i < 3; ++i) {
        out.require(std::abs(f.params[i] - truth[i]) <= kRecoveryTol, std::string(names[i]) + " = " + num(f.params[i]));
        est += (i ? ", " : "") + std::string(names[i]) + " " + num(f.params[i]);
    }
    auto edu = fit(model_template("EDU", 24.0), data, cfg);
    FitConfig nested = cfg;
    nested.extra_starts = {{edu.params[0], edu.params[1], 1.0}};
    auto qdu = fit(model_template("QDU", 24.0), data, nested);
    out.require(qdu.loss <= edu.loss, "QDU nll " + num(qdu.loss) + " above EDU " + num(edu.loss));
    out.detail = (out.pass ? "" : out.detail + "; ") + est + "; nll QDU " + num(qdu.loss) + " <= EDU " + num(edu.loss);
    return out;
}

// 10 --------------------------------------------------------------------------
Verdict appendix_identities() {
    Verdict out;
    out.require(completeness_index(0.69, 0.69, 0.4) == 0.0, "completeness of the base is not 0");
    out.require(completeness_index(0.69, 0.4, 0.4) == 1.0, "completeness of the best predictor is not 1");

    Rng rng(1010, 0);
    ChoiceDataset data;
    AttributeVector anchor({4, 4});
    for (int c = 0; c < 12; ++c) {
        // a shared second option creates monotonicity constraints
        auto a = random_attributes(rng, 2);
        auto b = c % 3 == 0 ? anchor : random_attributes(rng, 2);
        data.emplace_back(a, b, 20, uniform_int(rng, 0, 20));
    }
    auto cons = constraints_from_dataset(data, LinearAttributes::unit(2));
    HarConfig h;
    h.count = 10000;
    h.seed = 10;
    auto synth = har_sample(cons, h);
    long bad = 0;
    for (const auto& p : synth) bad += !cons.satisfied(p);
    out.require(bad == 0, std::to_string(bad) + " HAR samples violate constraints");

    auto base = mean_rate_rule(data);
    std::vector<std::vector<double>> first(synth.begin(), synth.begin() + 200);
    auto r = restrictiveness_index(fixed_rule_template(base), base, first, data);
    out.require(std::abs(r.value - 1.0) <= kRestrictTol, "base restrictiveness " + num(r.value));

    const int dim = 6;
    auto box = har_sample(ConstraintSet(dim), h);
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
        double m = 0.0;
        for (const auto& p : box) m += p[i] / box.size();
        worst = std::max(worst, std::abs(m - 0.5) / std::sqrt(1.0 / 12.0 / box.size()));
    }
    out.require(worst <= kSigmas, "box mean off by " + num(worst) + " se");
    if (out.pass)
        out.detail = std::to_string(cons.orders().size()) + " order constraints, base restrictiveness " + num(r.value) +
                     ", box mean within " + num(worst) + " se";
    return out;
}

// 11 --------------------------------------------------------------------------
double duopoly_gain(double ca, double cb, double dq, const DuopolyResult& r) {
    ProfitFn fn = [=](const std::vector<double>& p) {
        auto pi = duopoly_profits(p[0], p[1], ca, cb, dq, GCurve::linear());
        return std::vector<double>{pi[0], pi[1]};
    };
    double top = std::max(r.p_a, r.p_b) + 2.0;
    return verify_equilibrium({r.p_a, r.p_b}, fn, {{ca, top}, {cb, top}}, kDeviationStep);
}

Verdict market_claims() {
    Verdict out;
    double worst = 0.0;
    for (double dq : {0.2, 0.5, 1.0}) {
        worst = std::max(worst, duopoly_gain(1.0, 1.0, dq, duopoly_equilibrium(1.0, 1.0, dq)));
        worst = std::max(worst, duopoly_gain(0.0, 1.0, dq, duopoly_equilibrium(0.0, 1.0, dq)));
        worst = std::max(worst, duopoly_gain(0.7, 1.0, dq, duopoly_equilibrium(0.7, 1.0, dq)));
    }
    out.require(worst <= kDeviationTol, "closed-form deviation gain " + num(worst));

    double worst_switch = 0.0;
    for (double dq_bar : {0.2, 0.3, 0.45}) {
        double q_lo = 0.5 * (1.0 - dq_bar / 2), q_hi = 0.5 * (1.0 + dq_bar / 2);
        double lo = 1e-3, hi = 5.0 * dq_bar;
        for (int k = 0; k < 80; ++k) {
            double mid = 0.5 * (lo + hi);
            MarketConfig m{5.0 - mid, 5.0, q_lo, q_hi};
            (location_stage_outcome(m).regime == StageRegime::Imitate ? hi : lo) = mid;
        }
        worst_switch = std::max(worst_switch, std::abs(0.5 * (lo + hi) - 2.0 * dq_bar));
    }
    out.require(worst_switch <= kSwitchTol, "regime switch off by " + num(worst_switch));

    auto e5 = three_firm_equilibrium(0.5, 1.0, 1.2);
    auto e6 = three_firm_equilibrium(0.6, 1.0, 1.2);
    out.require(e5.p_b < e5.p_a && e6.p_b < e6.p_a, "p_b >= p_a");
    out.require(e5.p_s == 1.2 && e6.p_s == 1.2, "s does not price at cost");
    out.require(e6.demand.profit[1] < e5.demand.profit[1], "profit_b not decreasing in dq");
    if (out.pass)
        out.detail = "max gain " + num(worst) + ", switch error " + num(worst_switch) + ", three-firm (" +
                     num(e5.p_a) + ", " + num(e5.p_b) + ", " + num(e5.p_s) + "), profit_b " +
                     num(e5.demand.profit[1]) + " -> " + num(e6.demand.profit[1]);
    return out;
}

// 12 --------------------------------------------------------------------------
std::string serialize(const std::vector<FigureRow>& rows) {
    std::string s;
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.series.c_str(), r.x, r.mean, r.se,
                      r.truth, r.excluded);
        s += buf;
    }
    return s;
}

Verdict reproducibility() {
    Verdict out;
    for (const auto& id : figure_ids()) {
        FigureSettings fs;
        fs.sim.draws = 3 * kBlockDraws + 17;
        fs.sim.seed = 1212;
        auto first = serialize(run_figure(id, fs));
        auto second = serialize(run_figure(id, fs));
        fs.sim.threads = 3;
        auto threaded = serialize(run_figure(id, fs));
        out.require(first == second, id + " differs between reruns");
        out.require(first == threaded, id + " differs across thread counts");
    }
    if (out.pass) out.detail = std::to_string(figure_ids().size()) + " figures byte-identical across reruns and thread counts";
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;  // 0: no runtime bound
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "G-curve identities", 1.0, g_identities},
        {2, "coupling-oracle equivalence", 30.0, coupling_oracles},
        {3, "binary-rule axiom properties", 120.0, axiom_properties},
        {4, "binary MC consistency", 0.0, binary_consistency},
        {5, "pull to center", 0.0, pull_to_center},
        {6, "decoy cases", 0.0, decoys},
        {7, "CE/PE reversal", 300.0, ce_pe_reversal},
        {8, "weighting and discounting shapes", 0.0, figure_shapes},
        {9, "estimation recovery", 600.0, recovery},
        {10, "completeness/restrictiveness/HAR", 0.0, appendix_identities},
        {11, "market closed forms and solver", 0.0, market_claims},
        {12, "figure reproducibility", 0.0, reproducibility},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Verdict o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = seconds_since(t0);
        if (c.budget_s > 0.0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += "; runtime " + num(secs) + " s over budget " + num(c.budget_s) + " s";
        }
        failed += !o.pass;
        std::printf("criterion %2d %s: %s (%s) [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
