#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "tradeoff/choice_models.hpp"
#include "tradeoff/complexity.hpp"
#include "tradeoff/figures.hpp"
#include "tradeoff/market.hpp"

namespace py = pybind11;
using namespace tradeoff;

namespace {

// The variant alternatives have no default constructor, which the stock
// std::variant caster needs, so dispatch on the Python type by hand.
template <class Variant, class... Ts>
Variant unwrap(py::handle h, const char* what) {
    std::optional<Variant> out;
    ((!out && py::isinstance<Ts>(h) ? (out.emplace(h.cast<const Ts&>()), true) : false), ...);
    if (!out) throw py::type_error(std::string("expected ") + what);
    return *out;
}

Option option(py::handle h) {
    return unwrap<Option, AttributeVector, Lottery, PayoffFlow>(h, "AttributeVector, Lottery or PayoffFlow");
}

UtilityModel model(py::handle h) {
    return unwrap<UtilityModel, LinearAttributes, CrraSymmetric, PowerLossAverse, ExponentialDiscount,
                  QuasiHyperbolic, GeneralizedHyperbolic>(h, "a utility or discount model");
}

}  // namespace

// ValidationError derives from std::invalid_argument and SolverError from
// std::runtime_error, so pybind11 raises ValueError and RuntimeError.

PYBIND11_MODULE(_tradeoff, m) {
    m.doc() = "Comparison-complexity choice models";

    py::class_<AttributeVector>(m, "AttributeVector")
        .def(py::init<std::vector<double>>(), py::arg("values"))
        .def_property_readonly("values", &AttributeVector::values);

    py::class_<Lottery>(m, "Lottery")
        .def(py::init([](const std::vector<std::pair<double, double>>& outcomes) {
                 std::vector<Outcome> o;
                 for (auto [w, p] : outcomes) o.push_back({w, p});
                 return Lottery(o);
             }),
             py::arg("outcomes"), "list of (payoff, probability)")
        .def_static("certain", &Lottery::certain)
        .def_static("simple", &Lottery::simple, py::arg("payoff"), py::arg("prob"))
        .def_property_readonly("outcomes", [](const Lottery& l) {
            std::vector<std::pair<double, double>> out;
            for (const auto& o : l.outcomes()) out.emplace_back(o.payoff, o.prob);
            return out;
        });

    py::class_<PayoffFlow>(m, "PayoffFlow")
        .def(py::init([](const std::vector<std::pair<double, double>>& payments) {
                 std::vector<Payment> p;
                 for (auto [t, a] : payments) p.push_back({t, a});
                 return PayoffFlow(p);
             }),
             py::arg("payments"), "list of (delay_days, amount)")
        .def_static("single", &PayoffFlow::single, py::arg("amount"), py::arg("delay_days"))
        .def_property_readonly("payments", [](const PayoffFlow& f) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p : f.payments()) out.emplace_back(p.delay_days, p.amount);
            return out;
        });

    py::class_<LinearAttributes>(m, "LinearAttributes")
        .def(py::init<std::vector<double>>(), py::arg("beta"))
        .def_readonly("beta", &LinearAttributes::beta);
    py::class_<CrraSymmetric>(m, "CrraSymmetric")
        .def(py::init<double>(), py::arg("alpha"))
        .def_readonly("alpha", &CrraSymmetric::alpha);
    py::class_<PowerLossAverse>(m, "PowerLossAverse")
        .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("beta"), py::arg("lam"));
    py::class_<ExponentialDiscount>(m, "ExponentialDiscount")
        .def(py::init<double, double>(), py::arg("delta"), py::arg("period_days"));
    py::class_<QuasiHyperbolic>(m, "QuasiHyperbolic")
        .def(py::init<double, double, double>(), py::arg("beta_qh"), py::arg("delta"), py::arg("period_days"));
    py::class_<GeneralizedHyperbolic>(m, "GeneralizedHyperbolic")
        .def(py::init<double, double, double>(), py::arg("iota"), py::arg("zeta"), py::arg("period_days"));

    py::class_<GCurve>(m, "GCurve")
        .def(py::init<double, double, double>(), py::arg("kappa") = 0.0, py::arg("gamma") = 1.0,
             py::arg("psi") = 1.0)
        .def_readonly("kappa", &GCurve::kappa)
        .def_readonly("gamma", &GCurve::gamma)
        .def_readonly("psi", &GCurve::psi)
        .def("__call__", &GCurve::operator(), py::arg("r"));

    m.def(
        "signed_ratio",
        [](py::object x, py::object y, py::object u) { return signed_ratio(option(x), option(y), model(u)).r; },
        py::arg("x"), py::arg("y"), py::arg("model"), "signed value-dissimilarity ratio in [-1, 1]");
    m.def(
        "dissimilarity",
        [](py::object x, py::object y, py::object u) { return dissimilarity(option(x), option(y), model(u)); },
        py::arg("x"), py::arg("y"), py::arg("model"));
    m.def(
        "dominates", [](py::object x, py::object y, py::object u) { return dominates(option(x), option(y), model(u)); },
        py::arg("x"), py::arg("y"), py::arg("model"));
    m.def(
        "precision",
        [](double r, const GCurve& g) -> py::object {
            auto p = tau_from_ratio(r, g);
            if (p.perfect) return py::float_(INFINITY);
            return py::float_(p.tau);
        },
        py::arg("r"), py::arg("curve"), "tau implied by |r|; inf when perfectly comparable");
    m.def(
        "choice_probability",
        [](py::object x, py::object y, py::object u, const GCurve& g) {
            return rho(Complexity{model(u), g}, option(x), option(y));
        },
        py::arg("x"), py::arg("y"), py::arg("model"), py::arg("curve"));

    m.def(
        "duopoly",
        [](double c_a, double c_b, double dq, const GCurve& g) {
            auto r = duopoly_equilibrium(c_a, c_b, dq, g);
            py::dict d;
            d["p_a"] = r.p_a;
            d["p_b"] = r.p_b;
            d["share_a"] = r.share_a;
            d["share_b"] = r.share_b;
            d["profit_a"] = r.profit_a;
            d["profit_b"] = r.profit_b;
            d["closed_form"] = r.closed_form;
            d["deviation_gain"] = r.residual;
            return d;
        },
        py::arg("c_a"), py::arg("c_b"), py::arg("dq"), py::arg("curve") = GCurve::linear());
    m.def(
        "location_stage",
        [](double c_a, double c_b, double q_lo, double q_hi) {
            MarketConfig cfg;
            cfg.c_a = c_a;
            cfg.c_b = c_b;
            cfg.q_lo = q_lo;
            cfg.q_hi = q_hi;
            auto s = location_stage_outcome(cfg);
            py::dict d;
            d["regime"] = regime_name(s.regime);
            d["dq"] = s.dq;
            d["p_a"] = s.prices.p_a;
            d["p_b"] = s.prices.p_b;
            return d;
        },
        py::arg("c_a"), py::arg("c_b"), py::arg("q_lo") = 0.0, py::arg("q_hi") = 1.0);
    m.def(
        "three_firm",
        [](double dq, double c, double c_s) {
            auto r = three_firm_equilibrium(dq, c, c_s);
            py::dict d;
            d["prices"] = std::vector<double>{r.p_a, r.p_b, r.p_s};
            d["shares"] = r.demand.share;
            d["profits"] = r.demand.profit;
            d["s_at_cost"] = r.s_at_cost;
            return d;
        },
        py::arg("dq"), py::arg("c"), py::arg("c_s"));

    m.def("figure_ids", &figure_ids);
    m.def(
        "simulate_figure",
        [](const std::string& id, std::uint64_t draws, std::uint64_t seed, int threads, double kappa, double gamma,
           double psi, int list_size) {
            FigureSettings fs;
            fs.curve = GCurve(kappa, gamma, psi);
            fs.list_size = list_size;
            fs.sim.draws = draws;
            fs.sim.seed = seed;
            fs.sim.threads = threads;
            std::vector<FigureRow> out;
            {
                py::gil_scoped_release release;
                out = run_figure(id, fs);
            }
            std::vector<py::tuple> rows;
            for (const auto& r : out) rows.push_back(py::make_tuple(r.series, r.x, r.mean, r.se, r.truth, r.excluded));
            return rows;
        },
        py::arg("figure"), py::arg("draws") = 100000, py::arg("seed") = 1, py::arg("threads") = 1,
        py::arg("kappa") = 0.0, py::arg("gamma") = 0.5, py::arg("psi") = 1.0, py::arg("list_size") = 15,
        "rows of (series, x, mean, se, truth, excluded_mass)");
}
