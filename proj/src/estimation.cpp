#include "tradeoff/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "tradeoff/rng.hpp"

namespace tradeoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic_fn(double u) { return logistic(u); }

void check_aligned(std::size_t a, std::size_t b) {
    if (a != b) throw ValidationError("prediction rule and data are misaligned");
}

ParamSpec positive(std::string name, double s_lo, double s_hi) {
    return {std::move(name), Transform::Positive, 0.0, 0.0, s_lo, s_hi};
}

ParamSpec interval(std::string name, double lo, double hi, double s_lo, double s_hi) {
    return {std::move(name), Transform::Interval, lo, hi, s_lo, s_hi};
}

ParamSpec below_one(std::string name, double s_lo, double s_hi) {
    return {std::move(name), Transform::BelowOne, 0.0, 1.0, s_lo, s_hi};
}

std::vector<double> predict_with(const ChoiceModel& m, const ChoiceDataset& data) {
    std::vector<double> p;
    p.reserve(data.size());
    for (const auto& o : data) p.push_back(rho(m, o.a, o.b));
    return p;
}

}  // namespace

ChoiceObservation::ChoiceObservation(Option x, Option y, int n, int k)
    : a(std::move(x)), b(std::move(y)), trials(n), successes(k) {
    if (n < 1) throw ValidationError("trial count must be >= 1");
    if (k < 0 || k > n) throw ValidationError("choice count must lie in [0, trials]");
    if (domain_of(a) != domain_of(b)) throw ValidationError("problem options come from different domains");
}

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

std::vector<double> empirical_rates(const ChoiceDataset& data) {
    std::vector<double> r;
    for (const auto& o : data) r.push_back(o.rate());
    return r;
}

std::vector<double> trial_weights(const ChoiceDataset& data) {
    std::vector<double> n;
    for (const auto& o : data) n.push_back(o.trials);
    return n;
}

double nll(const std::vector<double>& p, const std::vector<double>& r, const std::vector<double>& n) {
    check_aligned(p.size(), r.size());
    check_aligned(p.size(), n.size());
    double acc = 0.0, total = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        double q = clamp_prob(p[c]);
        acc += n[c] * (r[c] * std::log(q) + (1.0 - r[c]) * std::log(1.0 - q));
        total += n[c];
    }
    if (total <= 0.0) throw ValidationError("dataset has no observations");
    return -acc / total;
}

double nll(const std::vector<double>& p, const ChoiceDataset& data) {
    return nll(p, empirical_rates(data), trial_weights(data));
}

double weighted_r2(const std::vector<double>& p, const ChoiceDataset& data) {
    check_aligned(p.size(), data.size());
    double total = 0.0, mean = 0.0;
    for (const auto& o : data) {
        total += o.trials;
        mean += o.trials * o.rate();
    }
    mean /= total;
    double sse = 0.0, sst = 0.0;
    for (std::size_t c = 0; c < data.size(); ++c) {
        double r = data[c].rate();
        sse += data[c].trials * (r - p[c]) * (r - p[c]);
        sst += data[c].trials * (r - mean) * (r - mean);
    }
    if (sst <= 0.0) throw ValidationError("observed choice rates have zero variance");
    return 1.0 - sse / sst;
}

double completeness_index(double e_base, double e_model, double e_star) {
    if (e_base < e_star) throw ValidationError("base error must be at least the best achievable error");
    if (e_base == e_star) throw ValidationError("base error equals the best achievable error");
    return (e_base - e_model) / (e_base - e_star);
}

double expected_kl(const std::vector<double>& p, const std::vector<double>& q, const std::vector<double>& n) {
    check_aligned(p.size(), q.size());
    check_aligned(p.size(), n.size());
    double acc = 0.0, total = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        double a = clamp_prob(p[c]), b = clamp_prob(q[c]);
        acc += n[c] * (b * std::log(a / b) + (1.0 - b) * std::log((1.0 - a) / (1.0 - b)));
        total += n[c];
    }
    if (total <= 0.0) throw ValidationError("weights must have positive total");
    return -acc / total;
}

double ParamSpec::to_natural(double u) const {
    switch (transform) {
        case Transform::Positive: return std::exp(u);
        case Transform::Interval: return lo + (hi - lo) * logistic_fn(u);
        case Transform::BelowOne: return 1.0 - std::exp(u);
    }
    return u;
}

double ParamSpec::to_free(double v) const {
    switch (transform) {
        case Transform::Positive:
            if (!(v > 0.0)) throw ValidationError(name + " must be > 0");
            return std::log(v);
        case Transform::Interval:
            if (!(v > lo && v < hi)) throw ValidationError(name + " must lie strictly inside its box");
            return std::log((v - lo) / (hi - v));
        case Transform::BelowOne:
            if (!(v < 1.0)) throw ValidationError(name + " must be < 1");
            return std::log(1.0 - v);
    }
    return v;
}

ChoiceModel build_model(const std::string& name, const std::vector<double>& t, double period) {
    auto need = [&](std::size_t k) {
        if (t.size() != k) throw ValidationError(name + " expects " + std::to_string(k) + " parameters");
    };
    if (name == "DistortionFree") return need(1), ChoiceModel(LogitBenchmark(DistortionFree{}, t[0]));
    if (name == "Salience") return need(2), ChoiceModel(LogitBenchmark(Salience(t[1]), t[0]));
    if (name == "Focusing") return need(2), ChoiceModel(LogitBenchmark(Focusing(t[1]), t[0]));
    if (name == "RelativeThinking")
        return need(3), ChoiceModel(LogitBenchmark(RelativeThinking(t[1], t[2]), t[0]));
    if (name == "EDU") return need(2), ChoiceModel(LogitBenchmark(EDU(t[1], period), t[0]));
    if (name == "QDU") return need(3), ChoiceModel(LogitBenchmark(QDU(t[2], t[1], period), t[0]));
    if (name == "HDU") return need(3), ChoiceModel(LogitBenchmark(HDU(t[1], t[2], period), t[0]));
    if (name == "EU") return need(2), ChoiceModel(LogitBenchmark(EU(t[1]), t[0]));
    if (name == "RDEU") return need(4), ChoiceModel(LogitBenchmark(RDEU(t[1], t[2], t[3]), t[0]));
    if (name == "CPT") return need(6), ChoiceModel(LogitBenchmark(CPT(t[1], t[2], t[3], t[4], t[5]), t[0]));
    if (name == "CPF-C")
        return need(3), ChoiceModel(Complexity{ExponentialDiscount(t[0], period), GCurve(t[1], t[2])});
    if (name == "EV-CDF-C") return need(2), ChoiceModel(Complexity{CrraSymmetric(1.0), GCurve(t[0], t[1])});
    if (name == "EU-CDF-C") return need(3), ChoiceModel(Complexity{CrraSymmetric(t[2]), GCurve(t[0], t[1])});
    throw ValidationError("unknown model family: " + name);
}

ModelTemplate model_template(const std::string& name, double period_days) {
    ModelTemplate m;
    m.name = name;
    const auto eta = positive("eta", 0.05, 2.0);
    const auto kappa = interval("kappa", 0.0, 0.5, 0.01, 0.3);
    const auto gamma = positive("gamma", 0.3, 3.0);
    const auto delta = interval("delta", 0.0, 1.0, 0.8, 0.99);

    if (name == "L1-C" || name == "L1-C3") {
        m.params = {kappa, gamma};
        if (name == "L1-C3") m.params.push_back(positive("psi", 0.3, 2.0));
        m.domains = {Domain::Multiattribute};
        m.predict = [](const std::vector<double>& t, const ChoiceDataset& data) {
            GCurve curve(t[0], t[1], t.size() > 2 ? t[2] : 1.0);
            std::vector<double> p;
            for (const auto& o : data) {
                const auto& a = std::get<AttributeVector>(o.a);
                ChoiceModel cm = Complexity{LinearAttributes::unit(a.size()), curve};
                p.push_back(rho(cm, o.a, o.b));
            }
            return p;
        };
        return m;
    }

    if (name == "DistortionFree") m.params = {eta};
    else if (name == "Salience") m.params = {eta, below_one("delta_s", 0.0, 0.95)};
    else if (name == "Focusing") m.params = {eta, positive("theta", 0.05, 2.0)};
    else if (name == "RelativeThinking")
        m.params = {eta, interval("omega", 0.0, 1.0, 0.1, 0.9), positive("xi", 0.2, 5.0)};
    else if (name == "EDU") m.params = {eta, delta};
    else if (name == "QDU") m.params = {eta, delta, positive("beta", 0.6, 1.2)};
    else if (name == "HDU") m.params = {eta, positive("iota", 0.05, 1.0), positive("zeta", 0.02, 0.5)};
    else if (name == "EU") m.params = {eta, positive("alpha", 0.3, 1.2)};
    else if (name == "RDEU")
        m.params = {eta, positive("alpha", 0.3, 1.2), positive("beta", 0.3, 1.2), positive("lambda", 0.5, 2.0)};
    else if (name == "CPT")
        m.params = {eta,
                    positive("alpha", 0.3, 1.2),
                    positive("beta", 0.3, 1.2),
                    positive("lambda", 0.5, 2.0),
                    positive("chi", 0.5, 1.5),
                    positive("nu", 0.4, 1.2)};
    else if (name == "CPF-C") m.params = {delta, kappa, gamma};
    else if (name == "EV-CDF-C") m.params = {kappa, gamma};
    else if (name == "EU-CDF-C") m.params = {kappa, gamma, positive("alpha", 0.3, 1.2)};
    else throw ValidationError("unknown model family: " + name);

    m.predict = [name, period_days](const std::vector<double>& t, const ChoiceDataset& data) {
        return predict_with(build_model(name, t, period_days), data);
    };
    if (name == "CPF-C") {
        m.domains = {Domain::Intertemporal};
    } else if (name == "EV-CDF-C" || name == "EU-CDF-C") {
        m.domains = {Domain::Lottery};
    } else {
        // logit families: read the domain off a representative parameter vector
        std::vector<double> mid;
        for (const auto& p : m.params) mid.push_back(0.5 * (p.start_lo + p.start_hi));
        m.domains = {domain_of(std::get<LogitBenchmark>(build_model(name, mid, period_days)).family)};
    }
    return m;
}

const std::vector<std::string>& template_names() {
    static const std::vector<std::string> names{"DistortionFree", "Salience", "Focusing", "RelativeThinking",
                                                "L1-C",           "L1-C3",    "EDU",      "QDU",
                                                "HDU",            "CPF-C",    "EU",       "RDEU",
                                                "CPT",            "EV-CDF-C", "EU-CDF-C"};
    return names;
}

ModelTemplate fixed_rule_template(std::vector<double> rule, std::string name) {
    ModelTemplate m;
    m.name = std::move(name);
    m.predict = [rule = std::move(rule)](const std::vector<double>&, const ChoiceDataset& data) {
        check_aligned(rule.size(), data.size());
        return rule;
    };
    return m;
}

std::vector<double> mean_rate_rule(const ChoiceDataset& data) {
    double total = 0.0, chosen = 0.0;
    for (const auto& o : data) {
        total += o.trials;
        chosen += o.successes;
    }
    return std::vector<double>(data.size(), chosen / total);
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             double step, int max_evals, double tol) {
    const std::size_t n = x0.size();
    NelderMeadResult out;
    auto eval = [&](const std::vector<double>& x) {
        ++out.evals;
        double v = f(x);
        return std::isfinite(v) ? v : kInf;
    };
    if (n == 0) {
        out.x = x0;
        out.f = eval(x0);
        return out;
    }
    std::vector<std::vector<double>> s(n + 1, x0);
    std::vector<double> fs(n + 1);
    fs[0] = eval(x0);
    for (std::size_t i = 0; i < n; ++i) {
        s[i + 1][i] += step;
        fs[i + 1] = eval(s[i + 1]);
    }
    std::vector<std::size_t> idx(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (out.evals < max_evals) {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
        double spread = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(s[i][k] - s[best][k]));
        if (std::abs(fs[worst] - fs[best]) <= tol && spread <= 1e-8) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t k = 0; k < n; ++k) centroid[k] += s[i][k] / n;
        for (std::size_t k = 0; k < n; ++k) xr[k] = centroid[k] + (centroid[k] - s[worst][k]);
        double fr = eval(xr);
        if (fr < fs[best]) {
            for (std::size_t k = 0; k < n; ++k) xe[k] = centroid[k] + 2.0 * (centroid[k] - s[worst][k]);
            double fe = eval(xe);
            if (fe < fr) s[worst] = xe, fs[worst] = fe;
            else s[worst] = xr, fs[worst] = fr;
            continue;
        }
        if (fr < fs[second]) {
            s[worst] = xr, fs[worst] = fr;
            continue;
        }
        bool outside = fr < fs[worst];
        for (std::size_t k = 0; k < n; ++k)
            xc[k] = outside ? centroid[k] + 0.5 * (xr[k] - centroid[k]) : centroid[k] + 0.5 * (s[worst][k] - centroid[k]);
        double fc = eval(xc);
        if (fc < (outside ? fr : fs[worst])) {
            s[worst] = xc, fs[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < n; ++k) s[i][k] = s[best][k] + 0.5 * (s[i][k] - s[best][k]);
            fs[i] = eval(s[i]);
        }
    }
    std::size_t best = std::min_element(fs.begin(), fs.end()) - fs.begin();
    out.x = s[best];
    out.f = fs[best];
    return out;
}

namespace {

struct StartOutcome {
    std::vector<double> u;
    double loss = kInf;
    double initial = kInf;
};

FitResult run_fit(const ModelTemplate& family, const ChoiceDataset& data,
                  const std::function<double(const std::vector<double>&)>& loss_of_prediction, const FitConfig& cfg) {
    if (data.empty()) throw ValidationError("dataset is empty");
    if (!family.domains.empty())
        for (const auto& o : data)
            if (std::find(family.domains.begin(), family.domains.end(), domain_of(o.a)) == family.domains.end())
                throw ValidationError(family.name + " is incompatible with " + domain_name(domain_of(o.a)) +
                                      " problems");
    const auto& ps = family.params;
    auto natural = [&](const std::vector<double>& u) {
        std::vector<double> t(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) t[i] = ps[i].to_natural(u[i]);
        return t;
    };
    auto objective = [&](const std::vector<double>& u) {
        try {
            return loss_of_prediction(family.predict(natural(u), data));
        } catch (const ValidationError&) {
            return kInf;  // transform saturated at a box edge
        }
    };

    std::vector<std::vector<double>> starts;
    {
        std::vector<double> center;
        for (const auto& p : ps) center.push_back(p.to_free(0.5 * (p.start_lo + p.start_hi)));
        starts.push_back(center);
    }
    for (const auto& e : cfg.extra_starts) {
        if (e.size() != ps.size()) throw ValidationError("extra start has the wrong dimension");
        std::vector<double> u;
        for (std::size_t i = 0; i < ps.size(); ++i) u.push_back(ps[i].to_free(e[i]));
        starts.push_back(u);
    }
    for (int k = 1; static_cast<int>(starts.size()) < std::max(cfg.starts, 1) + static_cast<int>(cfg.extra_starts.size()); ++k) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(k));
        std::vector<double> u;
        for (const auto& p : ps) u.push_back(p.to_free(p.start_lo + (p.start_hi - p.start_lo) * rng.uniform()));
        starts.push_back(u);
    }
    if (ps.empty()) starts.resize(1);

    std::vector<StartOutcome> outcomes(starts.size());
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < starts.size(); i += stride) {
            StartOutcome o;
            o.initial = objective(starts[i]);
            auto res = nelder_mead(objective, starts[i], 0.5, cfg.max_evals, cfg.tol);
            // restart from the optimum until the simplex stops improving
            for (int round = 0; round < 5; ++round) {
                auto again = nelder_mead(objective, res.x, 0.1, cfg.max_evals, cfg.tol);
                bool improved = again.f < res.f - cfg.tol;
                if (again.f < res.f) res = again;
                if (!improved) break;
            }
            o.u = res.x;
            o.loss = res.f;
            if (o.initial < o.loss) {  // never worse than the starting point
                o.u = starts[i];
                o.loss = o.initial;
            }
            outcomes[i] = std::move(o);
        }
    };
    std::size_t workers = std::clamp<std::size_t>(cfg.threads < 1 ? 1 : cfg.threads, 1, starts.size());
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& t : pool) t.join();
    }

    // best objective, ties to the lowest start index
    std::size_t best = 0;
    double best_initial = kInf;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].loss < outcomes[best].loss) best = i;
        best_initial = std::min(best_initial, outcomes[i].initial);
    }
    if (!std::isfinite(outcomes[best].loss)) throw SolverError(family.name + ": loss is not finite at any start");

    FitResult r;
    r.family = family.name;
    for (const auto& p : ps) r.names.push_back(p.name);
    r.params = natural(outcomes[best].u);
    r.loss = outcomes[best].loss;
    r.predictions = family.predict(r.params, data);
    r.best_start = static_cast<int>(best);
    r.best_initial_loss = best_initial;
    r.r2 = std::numeric_limits<double>::quiet_NaN();
    return r;
}

}  // namespace

FitResult fit(const ModelTemplate& family, const ChoiceDataset& data, const FitConfig& cfg) {
    auto r = empirical_rates(data);
    auto n = trial_weights(data);
    FitResult out = run_fit(family, data, [&](const std::vector<double>& p) { return nll(p, r, n); }, cfg);
    try {
        out.r2 = weighted_r2(out.predictions, data);
    } catch (const ValidationError&) {
        // zero-variance rates: R^2 undefined, left as NaN
    }
    return out;
}

FitResult fit_kl(const ModelTemplate& family, const ChoiceDataset& problems, const std::vector<double>& target,
                 const FitConfig& cfg) {
    check_aligned(target.size(), problems.size());
    auto n = trial_weights(problems);
    return run_fit(family, problems, [&](const std::vector<double>& p) { return expected_kl(p, target, n); }, cfg);
}

// Constraints and hit-and-run ---------------------------------------------------

ConstraintSet::ConstraintSet(int dim) : dim_(dim), lower_(dim, 0.0), upper_(dim, 1.0) {
    if (dim < 1) throw ValidationError("constraint set needs dim >= 1");
}

void ConstraintSet::set_lower(int i, double v) { lower_.at(i) = std::max(lower_.at(i), v); }
void ConstraintSet::set_upper(int i, double v) { upper_.at(i) = std::min(upper_.at(i), v); }

void ConstraintSet::add_order(int hi, int lo, double margin) {
    if (hi < 0 || lo < 0 || hi >= dim_ || lo >= dim_ || hi == lo) throw ValidationError("bad order constraint");
    orders_.push_back({hi, lo, margin});
}

bool ConstraintSet::satisfied(const std::vector<double>& p, double tol) const {
    if (static_cast<int>(p.size()) != dim_) return false;
    for (int i = 0; i < dim_; ++i)
        if (p[i] < lower_[i] - tol || p[i] > upper_[i] + tol) return false;
    for (const auto& o : orders_)
        if (p[o.hi] < p[o.lo] + o.margin - tol) return false;
    return true;
}

std::vector<double> ConstraintSet::interior_point() const {
    // Longest-path relaxation with doubled margins gives tightest feasible lower and
    // upper envelopes; their midpoint is strictly feasible when the envelopes do not cross.
    std::vector<double> lo = lower_, hi = upper_;
    bool changed = true;
    for (int round = 0; changed && round <= dim_ + 1; ++round) {
        changed = false;
        for (const auto& o : orders_) {
            if (lo[o.lo] + 2 * o.margin > lo[o.hi]) lo[o.hi] = lo[o.lo] + 2 * o.margin, changed = true;
            if (hi[o.hi] - 2 * o.margin < hi[o.lo]) hi[o.lo] = hi[o.hi] - 2 * o.margin, changed = true;
        }
    }
    if (changed) throw SolverError("order constraints contain a cycle");
    std::vector<double> p(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (!(lo[i] < hi[i])) throw SolverError("constraint set has no interior point");
        p[i] = 0.5 * (lo[i] + hi[i]);
    }
    return p;
}

bool same_option(const Option& x, const Option& y) {
    if (x.index() != y.index()) return false;
    if (const auto* a = std::get_if<AttributeVector>(&x)) return a->values() == std::get<AttributeVector>(y).values();
    if (const auto* l = std::get_if<Lottery>(&x)) {
        const auto &p = l->outcomes(), &q = std::get<Lottery>(y).outcomes();
        if (p.size() != q.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i].payoff != q[i].payoff || p[i].prob != q[i].prob) return false;
        return true;
    }
    const auto &p = std::get<PayoffFlow>(x).payments(), &q = std::get<PayoffFlow>(y).payments();
    if (p.size() != q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i].delay_days != q[i].delay_days || p[i].amount != q[i].amount) return false;
    return true;
}

ConstraintSet constraints_from_dataset(const ChoiceDataset& data, const UtilityModel& model, double margin) {
    int n = static_cast<int>(data.size());
    ConstraintSet c(n);
    for (int i = 0; i < n; ++i) {
        if (dominates(data[i].a, data[i].b, model)) c.set_lower(i, 0.5);
        if (dominates(data[i].b, data[i].a, model)) c.set_upper(i, 0.5);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            // improving the first option, or worsening the second, raises the choice rate
            bool better_a = same_option(data[i].b, data[j].b) && dominates(data[i].a, data[j].a, model);
            bool worse_b = same_option(data[i].a, data[j].a) && dominates(data[j].b, data[i].b, model);
            if (better_a || worse_b) c.add_order(i, j, margin);
        }
    return c;
}

std::vector<std::vector<double>> har_sample(const ConstraintSet& c, const HarConfig& cfg) {
    const int d = c.dim();
    const int burn = cfg.burn_in < 0 ? 10 * d : cfg.burn_in;
    const int thin = cfg.thinning < 1 ? d : cfg.thinning;
    std::vector<double> x = c.interior_point();
    Rng rng(cfg.seed, 0);
    std::vector<double> dir(d), next(d);

    auto step = [&]() {
        for (int attempt = 0; attempt < 100; ++attempt) {
            double norm = 0.0;
            for (auto& v : dir) {
                v = rng.normal();
                norm += v * v;
            }
            norm = std::sqrt(norm);
            for (auto& v : dir) v /= norm;
            double tmin = -kInf, tmax = kInf;
            auto clip = [&](double slack, double rate) {  // slack + t * rate >= 0
                if (rate > 0.0) tmin = std::max(tmin, -slack / rate);
                else if (rate < 0.0) tmax = std::min(tmax, -slack / rate);
                else if (slack < 0.0) tmax = tmin = 0.0;
            };
            for (int i = 0; i < d; ++i) {
                clip(x[i] - c.lower()[i], dir[i]);
                clip(c.upper()[i] - x[i], -dir[i]);
            }
            for (const auto& o : c.orders()) clip(x[o.hi] - x[o.lo] - o.margin, dir[o.hi] - dir[o.lo]);
            if (!(tmax > tmin)) continue;
            double t = tmin + (tmax - tmin) * rng.uniform();
            for (int i = 0; i < d; ++i) next[i] = x[i] + t * dir[i];
            if (!c.satisfied(next)) continue;  // rounding at a face; redraw
            x.swap(next);
            return;
        }
        throw SolverError("hit-and-run chord is numerically empty");
    };

    for (int i = 0; i < burn; ++i) step();
    std::vector<std::vector<double>> out;
    out.reserve(cfg.count);
    for (int k = 0; k < cfg.count; ++k) {
        for (int i = 0; i < thin; ++i) step();
        out.push_back(x);
    }
    return out;
}

RestrictivenessResult restrictiveness_index(const ModelTemplate& family, const std::vector<double>& base_rule,
                                            const std::vector<std::vector<double>>& synthetic,
                                            const ChoiceDataset& problems, const FitConfig& cfg) {
    if (synthetic.empty()) throw ValidationError("restrictiveness needs synthetic rules");
    auto n = trial_weights(problems);
    RestrictivenessResult out;
    for (const auto& rule : synthetic) {
        out.family_distance.push_back(fit_kl(family, problems, rule, cfg).loss);
        out.base_distance.push_back(expected_kl(base_rule, rule, n));
    }
    double k = static_cast<double>(synthetic.size());
    double ma = std::accumulate(out.family_distance.begin(), out.family_distance.end(), 0.0) / k;
    double mb = std::accumulate(out.base_distance.begin(), out.base_distance.end(), 0.0) / k;
    if (mb <= 0.0) throw SolverError("base rule matches every synthetic rule; restrictiveness undefined");
    out.value = ma / mb;
    if (synthetic.size() > 1) {
        // delta method for a ratio of means
        double vaa = 0.0, vbb = 0.0, vab = 0.0;
        for (std::size_t i = 0; i < synthetic.size(); ++i) {
            double da = out.family_distance[i] - ma, db = out.base_distance[i] - mb;
            vaa += da * da;
            vbb += db * db;
            vab += da * db;
        }
        vaa /= k - 1;
        vbb /= k - 1;
        vab /= k - 1;
        double var = (vaa - 2.0 * out.value * vab + out.value * out.value * vbb) / (mb * mb * k);
        out.se = std::sqrt(std::max(0.0, var));
    }
    return out;
}

}  // namespace tradeoff
