#include <cstdint>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "tradeoff/figures.hpp"
#include "tradeoff/market.hpp"

using namespace tradeoff;
using tradeoff::cli::json;

namespace {

// Effective configuration: defaults, then the config file (top level, then the
// command's own section), then flags.
class Settings {
public:
    Settings(std::string command, json defaults) : command_(std::move(command)), values_(std::move(defaults)) {}

    void merge_file(const json& file, const std::set<std::string>& commands) {
        for (auto it = file.begin(); it != file.end(); ++it) {
            if (it.key() == "seed" || it.key() == "threads") continue;
            if (commands.count(it.key())) continue;
            set_known(it.key(), it.value(), "config");
        }
        if (file.contains(command_)) {
            const auto& own = file.at(command_);
            if (!own.is_object()) throw ValidationError("config section '" + command_ + "' must be an object");
            for (auto it = own.begin(); it != own.end(); ++it) set_known(it.key(), it.value(), "config section");
        }
    }

    void merge_flags(const json& flags) {
        for (auto it = flags.begin(); it != flags.end(); ++it) values_[it.key()] = it.value();
    }

    template <class T>
    T get(const std::string& key) const {
        try {
            return values_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ValidationError("setting '" + key + "' has the wrong type");
        }
    }
    bool is_null(const std::string& key) const { return values_.at(key).is_null(); }
    const json& values() const { return values_; }

private:
    void set_known(const std::string& key, const json& v, const char* where) {
        if (!values_.contains(key))
            throw ValidationError(std::string(where) + " key '" + key + "' is not a setting of '" + command_ + "'");
        values_[key] = v;
    }

    std::string command_;
    json values_;
};

UtilityModel utility_for(Domain d, const Settings& s, std::size_t dim) {
    switch (d) {
        case Domain::Multiattribute: {
            auto beta = s.get<std::vector<double>>("beta");
            if (beta.empty()) return LinearAttributes::unit(dim);
            if (beta.size() != dim) throw ValidationError("beta has " + std::to_string(beta.size()) +
                                                          " weights but the data has " + std::to_string(dim) +
                                                          " attributes");
            return LinearAttributes(beta);
        }
        case Domain::Lottery: return CrraSymmetric(s.get<double>("alpha"));
        case Domain::Intertemporal: {
            auto kind = s.get<std::string>("discount");
            double period = s.get<double>("period_days");
            if (kind == "exponential") return ExponentialDiscount(s.get<double>("delta"), period);
            if (kind == "quasi-hyperbolic")
                return QuasiHyperbolic(s.get<double>("beta_qh"), s.get<double>("delta"), period);
            if (kind == "hyperbolic") return GeneralizedHyperbolic(s.get<double>("iota"), s.get<double>("zeta"), period);
            throw ValidationError("unknown discount '" + kind + "' (exponential, quasi-hyperbolic, hyperbolic)");
        }
    }
    throw ValidationError("unknown domain");
}

std::size_t option_dim(const Option& o) {
    if (const auto* a = std::get_if<AttributeVector>(&o)) return a->size();
    return 0;
}

std::string cmd_ratio(const Settings& s) {
    auto domain = cli::parse_domain(s.get<std::string>("domain"));
    auto ds = cli::read_dataset(s.get<std::string>("input"), domain);
    auto model = utility_for(domain, s, option_dim(ds.data.front().a));
    std::ostringstream out;
    out << "problem_id,value_diff,dissimilarity,ratio,dominance_flag\n";
    for (std::size_t i = 0; i < ds.data.size(); ++i) {
        const auto& o = ds.data[i];
        auto parts = ratio_parts(o.a, o.b, model);
        int flag = dominates(o.a, o.b, model) ? 1 : dominates(o.b, o.a, model) ? -1 : 0;
        out << ds.ids[i] << ',' << cli::fmt(parts.value_diff) << ',' << cli::fmt(parts.dissimilarity) << ','
            << cli::fmt(parts.ratio.r) << ',' << flag << '\n';
    }
    return out.str();
}

json figure_defaults(const std::string& id) {
    json d = json::object();
    if (id == "ce-pe-reversal") {
        CePeReversalSpec x;
        d = {{"anchor_payoff", x.anchor_payoff}, {"anchor_prob", x.anchor_prob}, {"probs", json::array()},
             {"alphas", x.alphas}, {"pe_yardstick", x.pe_yardstick}};
    } else if (id == "pve-te-reversal") {
        PveTeReversalSpec x;
        d = {{"anchor_amount", x.anchor_amount}, {"anchor_delay", x.anchor_delay}, {"delta", x.delta},
             {"period_days", x.period_days}, {"delays", json::array()}, {"te_yardstick", x.te_yardstick},
             {"te_grid", x.te_grid}};
    } else if (id == "pwf" || id == "pwf-pe") {
        PwfSpec x;
        d = {{"wbar", x.wbar}, {"alpha", x.alpha}, {"probs", json::array()}};
    } else if (id == "discount-pve" || id == "discount-te") {
        DiscountSpec x;
        d = {{"delta", 0.95}, {"period_days", 30.0}, {"mbar", x.mbar}, {"delays", json::array()},
             {"amounts", json::array()}, {"te_grid", x.te_grid}};
    } else if (id == "hyperbolic-appendix") {
        HyperbolicSpec x;
        d = {{"iota", x.iota}, {"zetas", x.zetas}, {"period_days", x.period_days}, {"mbar", x.mbar}};
    } else if (id != "decoy-cases") {
        throw ValidationError("unknown figure id: " + id);
    }
    return d;
}

std::vector<FigureRow> run_configured_figure(const std::string& id, const json& f, const FigureSettings& fs) {
    auto vec = [&](const char* k) { return f.at(k).get<std::vector<double>>(); };
    auto num = [&](const char* k) { return f.at(k).get<double>(); };
    try {
        if (id == "ce-pe-reversal") {
            CePeReversalSpec x;
            x.anchor_payoff = num("anchor_payoff");
            x.anchor_prob = num("anchor_prob");
            x.probs = vec("probs");
            x.alphas = vec("alphas");
            x.pe_yardstick = num("pe_yardstick");
            return figure_ce_pe_reversal(x, fs);
        }
        if (id == "pve-te-reversal") {
            PveTeReversalSpec x;
            x.anchor_amount = num("anchor_amount");
            x.anchor_delay = num("anchor_delay");
            x.delta = num("delta");
            x.period_days = num("period_days");
            x.delays = vec("delays");
            x.te_yardstick = num("te_yardstick");
            x.te_grid = vec("te_grid");
            return figure_pve_te_reversal(x, fs);
        }
        if (id == "pwf" || id == "pwf-pe") {
            PwfSpec x;
            x.wbar = num("wbar");
            x.alpha = num("alpha");
            x.probs = vec("probs");
            return id == "pwf" ? figure_pwf(x, fs) : figure_pwf_pe(x, fs);
        }
        if (id == "discount-pve" || id == "discount-te") {
            DiscountSpec x;
            x.discount = ExponentialDiscount(num("delta"), num("period_days"));
            x.mbar = num("mbar");
            x.delays = vec("delays");
            x.amounts = vec("amounts");
            x.te_grid = vec("te_grid");
            return id == "discount-pve" ? figure_discount_pve(x, fs) : figure_discount_te(x, fs);
        }
        if (id == "hyperbolic-appendix") {
            HyperbolicSpec x;
            x.iota = num("iota");
            x.zetas = vec("zetas");
            x.period_days = num("period_days");
            x.mbar = num("mbar");
            return figure_hyperbolic(x, fs);
        }
    } catch (const json::exception&) {
        throw ValidationError("figure parameters have the wrong type");
    }
    return run_figure(id, fs);
}

std::string cmd_figure(const Settings& s, std::uint64_t seed, int threads) {
    auto id = s.get<std::string>("figure");
    FigureSettings fs;
    fs.curve = GCurve(s.get<double>("kappa"), s.get<double>("gamma"), s.get<double>("psi"));
    fs.list_size = s.get<int>("list_size");
    if (fs.list_size < 2) throw ValidationError("list_size must be >= 2");
    auto draws = s.get<std::int64_t>("draws");
    if (draws < 1) throw ValidationError("draws must be >= 1");
    fs.sim.draws = static_cast<std::uint64_t>(draws);
    fs.sim.seed = seed;
    fs.sim.threads = threads;
    auto rows = run_configured_figure(id, s.values().at("params"), fs);
    std::ostringstream out;
    out << "figure,series,x,mean,se,truth,excluded_mass\n";
    for (const auto& r : rows)
        out << id << ',' << r.series << ',' << cli::fmt(r.x) << ',' << cli::fmt(r.mean) << ',' << cli::fmt(r.se)
            << ',' << cli::fmt(r.truth) << ',' << cli::fmt(r.excluded) << '\n';
    return out.str();
}

std::vector<std::string> default_families(Domain d) {
    switch (d) {
        case Domain::Multiattribute: return {"DistortionFree", "Salience", "Focusing", "RelativeThinking", "L1-C", "L1-C3"};
        case Domain::Lottery: return {"EU", "RDEU", "CPT", "EV-CDF-C", "EU-CDF-C"};
        case Domain::Intertemporal: return {"EDU", "QDU", "HDU", "CPF-C"};
    }
    return {};
}

std::string cmd_fit(const Settings& s, std::uint64_t seed, int threads) {
    auto domain = cli::parse_domain(s.get<std::string>("domain"));
    auto ds = cli::read_dataset(s.get<std::string>("input"), domain);
    auto families = s.get<std::vector<std::string>>("families");
    if (families.empty()) families = default_families(domain);
    FitConfig fc;
    fc.seed = seed;
    fc.threads = threads;
    fc.starts = s.get<int>("starts");
    fc.max_evals = s.get<int>("max_evals");
    if (fc.starts < 1 || fc.max_evals < 1) throw ValidationError("starts and max_evals must be >= 1");
    double period = s.get<double>("period_days");
    bool have_star = !s.is_null("e_star");
    double e_star = have_star ? s.get<double>("e_star") : 0.0;
    double e_base = nll(mean_rate_rule(ds.data), ds.data);

    std::ostringstream out;
    out << "family,parameters,nll,r2,completeness\n";
    for (const auto& name : families) {
        auto r = fit(model_template(name, period), ds.data, fc);
        std::string params;
        for (std::size_t i = 0; i < r.params.size(); ++i)
            params += (i ? ";" : "") + r.names[i] + "=" + cli::fmt(r.params[i]);
        out << r.family << ',' << params << ',' << cli::fmt(r.loss) << ',' << cli::fmt(r.r2) << ',';
        if (have_star) out << cli::fmt(completeness_index(e_base, r.loss, e_star));
        out << '\n';
    }
    return out.str();
}

json duopoly_json(const DuopolyResult& r) {
    return {{"p_a", r.p_a},
            {"p_b", r.p_b},
            {"share_a", r.share_a},
            {"share_b", r.share_b},
            {"profit_a", r.profit_a},
            {"profit_b", r.profit_b},
            {"closed_form", r.closed_form},
            {"share_b_increasing", r.share_b_increasing},
            {"profit_b_increasing", r.profit_b_increasing},
            {"deviation_gain", r.residual}};
}

json cmd_market(const Settings& s) {
    auto mode = s.get<std::string>("mode");
    GCurve curve(s.get<double>("kappa"), s.get<double>("gamma"), s.get<double>("psi"));
    json out = {{"mode", mode}};
    if (mode == "duopoly") {
        out["result"] = duopoly_json(duopoly_equilibrium(s.get<double>("c_a"), s.get<double>("c_b"), s.get<double>("dq"), curve));
    } else if (mode == "stage") {
        MarketConfig m;
        m.c_a = s.get<double>("c_a");
        m.c_b = s.get<double>("c_b");
        m.curve = curve;
        if (!s.is_null("q_lo") || !s.is_null("q_hi")) {
            m.q_lo = s.get<double>("q_lo");
            m.q_hi = s.get<double>("q_hi");
        } else {
            double q = s.get<double>("total_q"), bar = s.get<double>("dq_bar");
            m.q_lo = 0.5 * (q - 0.5 * bar);
            m.q_hi = 0.5 * (q + 0.5 * bar);
        }
        auto order_name = s.get<std::string>("order");
        MoverOrder order;
        if (order_name == "high-cost-first") order = MoverOrder::HighCostFirst;
        else if (order_name == "simultaneous") order = MoverOrder::Simultaneous;
        else throw ValidationError("unknown mover order '" + order_name + "' (high-cost-first, simultaneous)");
        auto st = location_stage_outcome(m, order);
        out["regime"] = regime_name(st.regime);
        out["dq"] = st.dq;
        out["dq_bar"] = m.max_dissimilarity();
        out["profit_a_imitate"] = st.profit_a_imitate;
        out["profit_a_obfuscate"] = st.profit_a_obfuscate;
        out["result"] = duopoly_json(st.prices);
    } else if (mode == "three-firm") {
        double c = s.get<double>("c"), c_s = s.get<double>("c_s");
        auto sweep = s.get<std::vector<double>>("dq_sweep");
        if (sweep.empty()) sweep = {s.get<double>("dq"), s.get<double>("dq") + 0.1};
        json rows = json::array();
        double prev = 0.0;
        bool decreasing = true;
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            auto r = three_firm_equilibrium(sweep[i], c, c_s);
            rows.push_back({{"dq", sweep[i]},
                            {"p_a", r.p_a},
                            {"p_b", r.p_b},
                            {"p_s", r.p_s},
                            {"shares", r.demand.share},
                            {"profits", r.demand.profit},
                            {"s_at_cost", r.s_at_cost},
                            {"iterations", r.iterations},
                            {"deviation_gain", r.residual}});
            if (i > 0 && !(r.demand.profit[1] < prev)) decreasing = false;
            prev = r.demand.profit[1];
        }
        out["sweep"] = rows;
        out["profit_b_decreasing"] = decreasing;
    } else {
        throw ValidationError("unknown market mode '" + mode + "' (duopoly, stage, three-firm)");
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Comparison-complexity choice models: ratios, figure simulations, estimation, markets"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", cli::kEngineVersion);

    std::string config_path, out_path;
    std::uint64_t seed = 1;
    int threads = 1;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "output file (default stdout)");

    json flags = json::object();
    auto flag_num = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
        sub->add_option_function<double>(name, [&flags, key](double v) { flags[key] = v; }, help);
    };
    auto flag_str = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
        return sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    auto flag_list = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
        sub->add_option_function<std::vector<double>>(name, [&flags, key](const std::vector<double>& v) { flags[key] = v; }, help)
            ->delimiter(',');
    };

    auto* ratio = app.add_subcommand("ratio", "value-dissimilarity ratio per problem");
    flag_str(ratio, "--input", "input", "dataset CSV");
    flag_str(ratio, "--domain", "domain", "multiattribute | lottery | temporal");
    flag_list(ratio, "--beta", "beta", "attribute weights (default all 1)");
    flag_num(ratio, "--alpha", "alpha", "CRRA curvature");
    flag_str(ratio, "--discount", "discount", "exponential | quasi-hyperbolic | hyperbolic");
    flag_num(ratio, "--delta", "delta", "per-period discount factor");
    flag_num(ratio, "--beta-qh", "beta_qh", "present-bias factor");
    flag_num(ratio, "--iota", "iota", "hyperbolic iota");
    flag_num(ratio, "--zeta", "zeta", "hyperbolic zeta");
    flag_num(ratio, "--period", "period_days", "days per discount period");

    auto* figure = app.add_subcommand("simulate-figure", "simulate a figure's data series");
    flag_str(figure, "--figure", "figure", "figure id");
    flag_num(figure, "--kappa", "kappa", "G-curve tremble");
    flag_num(figure, "--gamma", "gamma", "G-curve curvature");
    flag_num(figure, "--psi", "psi", "G-curve steepness");
    figure->add_option_function<int>("--list-size", [&](int v) { flags["list_size"] = v; }, "price list length");
    figure->add_option_function<std::int64_t>("--draws", [&](std::int64_t v) { flags["draws"] = v; }, "MC draws");

    auto* fitcmd = app.add_subcommand("fit", "maximum-likelihood estimation");
    flag_str(fitcmd, "--input", "input", "dataset CSV");
    flag_str(fitcmd, "--domain", "domain", "multiattribute | lottery | temporal");
    fitcmd->add_option_function<std::vector<std::string>>(
              "--families", [&](const std::vector<std::string>& v) { flags["families"] = v; }, "model families")
        ->delimiter(',');
    flag_num(fitcmd, "--e-star", "e_star", "best achievable nll for completeness");
    fitcmd->add_option_function<int>("--starts", [&](int v) { flags["starts"] = v; }, "multistarts");
    flag_num(fitcmd, "--period", "period_days", "days per discount period");

    auto* market = app.add_subcommand("market", "obfuscation-game equilibria");
    market->add_option_function<std::string>("mode", [&](const std::string& v) { flags["mode"] = v; },
                                             "duopoly | stage | three-firm");
    flag_num(market, "--c-a", "c_a", "cost of firm a");
    flag_num(market, "--c-b", "c_b", "cost of firm b");
    flag_num(market, "--dq", "dq", "quantity dissimilarity");
    flag_num(market, "--dq-bar", "dq_bar", "maximal dissimilarity");
    flag_num(market, "--q-lo", "q_lo", "lower location bound");
    flag_num(market, "--q-hi", "q_hi", "upper location bound");
    flag_str(market, "--order", "order", "high-cost-first | simultaneous");
    flag_num(market, "--c", "c", "cost of firms a and b (three-firm)");
    flag_num(market, "--c-s", "c_s", "cost of firm s (three-firm)");
    flag_list(market, "--dq-sweep", "dq_sweep", "dissimilarities to solve (three-firm)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        json file = cli::load_config(config_path);
        if (!seed_opt->count() && file.contains("seed")) seed = file.at("seed").get<std::uint64_t>();
        if (!threads_opt->count() && file.contains("threads")) threads = file.at("threads").get<int>();
        if (threads < 1) throw ValidationError("threads must be >= 1");
        const std::set<std::string> commands{"ratio", "simulate-figure", "fit", "market"};

        std::string content;
        if (ratio->parsed()) {
            Settings s("ratio", {{"input", ""}, {"domain", "multiattribute"}, {"beta", json::array()},
                                 {"alpha", 1.0}, {"discount", "exponential"}, {"delta", 0.96}, {"beta_qh", 1.0},
                                 {"iota", 0.159}, {"zeta", 0.1}, {"period_days", 24.0}});
            s.merge_file(file, commands);
            s.merge_flags(flags);
            content = cli::metadata_line(s.values(), seed) + "\n" + cmd_ratio(s);
        } else if (figure->parsed()) {
            std::string id = flags.contains("figure") ? flags["figure"].get<std::string>()
                             : file.contains("simulate-figure") && file["simulate-figure"].contains("figure")
                                 ? file["simulate-figure"]["figure"].get<std::string>()
                                 : file.value("figure", std::string());
            if (id.empty()) throw ValidationError("simulate-figure needs --figure");
            json params = figure_defaults(id);
            Settings s("simulate-figure", {{"figure", id}, {"kappa", 0.0}, {"gamma", 0.5}, {"psi", 1.0},
                                           {"list_size", 15}, {"draws", 100000}, {"params", params}});
            s.merge_file(file, commands);
            s.merge_flags(flags);
            json merged = params;
            const json& given = s.values().at("params");
            if (!given.is_object()) throw ValidationError("params must be an object");
            for (auto it = given.begin(); it != given.end(); ++it) {
                if (!params.contains(it.key()))
                    throw ValidationError("figure '" + id + "' has no parameter '" + it.key() + "'");
                merged[it.key()] = it.value();
            }
            json eff = s.values();
            eff["params"] = merged;
            Settings resolved("simulate-figure", eff);
            content = cli::metadata_line(eff, seed) + "\n" + cmd_figure(resolved, seed, threads);
        } else if (fitcmd->parsed()) {
            Settings s("fit", {{"input", ""}, {"domain", "temporal"}, {"families", json::array()},
                               {"e_star", nullptr}, {"starts", 20}, {"max_evals", 4000}, {"period_days", 24.0}});
            s.merge_file(file, commands);
            s.merge_flags(flags);
            content = cli::metadata_line(s.values(), seed) + "\n" + cmd_fit(s, seed, threads);
        } else {
            Settings s("market", {{"mode", "duopoly"}, {"c_a", 1.0}, {"c_b", 1.0}, {"dq", 0.5}, {"dq_bar", 0.3},
                                  {"total_q", 1.0}, {"q_lo", nullptr}, {"q_hi", nullptr},
                                  {"order", "high-cost-first"}, {"kappa", 0.0}, {"gamma", 1.0}, {"psi", 1.0},
                                  {"c", 1.0}, {"c_s", 1.2}, {"dq_sweep", json::array()}});
            s.merge_file(file, commands);
            s.merge_flags(flags);
            json doc = cmd_market(s);
            doc["metadata"] = cli::metadata(s.values(), seed);
            content = doc.dump(2, ' ') + "\n";
        }
        cli::write_output(out_path, content);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
