#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "support.hpp"
#include "tradeoff/bayes_engine.hpp"
#include "tradeoff/figures.hpp"

using namespace tradeoff;
using testing_support::uniform_int;

namespace {

std::vector<std::vector<Precision>> flat_tau(std::size_t n, double t) {
    return std::vector<std::vector<Precision>>(n, std::vector<Precision>(n, Precision::finite(t)));
}

// x at index 0, list entries 1..n with decreasing values and perfect internal comparability.
ComparisonStructure list_structure(double vx, const std::vector<double>& vz, const std::vector<Precision>& tx) {
    std::size_t n = vz.size();
    std::vector<double> v{vx};
    v.insert(v.end(), vz.begin(), vz.end());
    auto t = flat_tau(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            if (i != j) t[i][j] = Precision::perfectly_comparable();
    for (std::size_t j = 0; j < n; ++j) t[0][j + 1] = t[j + 1][0] = tx[j];
    return ComparisonStructure(v, t);
}

}  // namespace

TEST_CASE("uniform order statistic means") {
    auto v3 = order_stat_means(3);
    CHECK(v3[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(v3[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(v3[2] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(order_stat_means(1)[0] == 0.5);
    for (int n : {2, 5, 16}) {
        auto v = order_stat_means(n);
        CHECK(v.front() + v.back() == doctest::Approx(1.0).epsilon(1e-15));
        for (int k = 1; k < n; ++k) CHECK(v[k] < v[k - 1]);
    }
    CHECK_THROWS_AS(order_stat_means(0), ValidationError);
}

TEST_CASE("uniform order statistic means agree with sorted draws") {
    const int n = 5, draws = 200000;
    Rng rng(11, 0);
    std::vector<double> sum(n, 0.0), sq(n, 0.0), x(n);
    for (int d = 0; d < draws; ++d) {
        for (double& u : x) u = rng.uniform();
        std::sort(x.begin(), x.end(), std::greater<>());
        for (int k = 0; k < n; ++k) sum[k] += x[k], sq[k] += x[k] * x[k];
    }
    auto v = order_stat_means(n);
    for (int k = 0; k < n; ++k) {
        double m = sum[k] / draws, se = std::sqrt((sq[k] / draws - m * m) / draws);
        CHECK(std::abs(m - v[k]) < 4.0 * se);
    }
}

TEST_CASE("normal prior order statistics are symmetric and decreasing") {
    PriorSpec p{PriorSpec::Kind::StandardNormal, 100000, 3};
    auto v = order_stat_means(4, p);
    for (int k = 1; k < 4; ++k) CHECK(v[k] < v[k - 1]);
    CHECK(std::abs(v[0] + v[3]) < 0.02);
    CHECK(v[0] == doctest::Approx(1.0294).epsilon(0.01));
}

TEST_CASE("comparison structure validation") {
    auto t = flat_tau(2, 1.0);
    t[0][1] = Precision::finite(2.0);
    CHECK_THROWS_AS(ComparisonStructure({1.0, 0.0}, t), ValidationError);
    t = flat_tau(2, 1.0);
    t[0][1] = t[1][0] = Precision::perfectly_comparable();
    CHECK_THROWS_AS(ComparisonStructure({0.5, 0.5}, t), ValidationError);
    CHECK_NOTHROW(ComparisonStructure({0.7, 0.5}, t));
    CHECK_THROWS_AS(ComparisonStructure({1.0, 0.0}, flat_tau(3, 0.0)), ValidationError);
}

TEST_CASE("ranking posterior examples") {
    Rng rng(1, 0);
    ComparisonStructure s({0.3, 0.2, 0.1}, flat_tau(3, 0.0));
    auto post = ranking_posterior(s, draw_signals(s, rng));
    REQUIRE(post.prob.size() == 6);
    for (double p : post.prob) CHECK(p == doctest::Approx(1.0 / 6).epsilon(1e-12));

    auto t = flat_tau(3, 0.0);
    t[0][1] = t[1][0] = Precision::perfectly_comparable();
    ComparisonStructure c({0.3, 0.2, 0.1}, t);
    auto pc = ranking_posterior(c, draw_signals(c, rng));
    REQUIRE(pc.prob.size() == 3);
    for (std::size_t p = 0; p < 3; ++p) {
        CHECK(pc.prob[p] == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(pc.ranks[p][0] < pc.ranks[p][1]);
    }

    ComparisonStructure sharp({0.3, 0.2, 0.1}, flat_tau(3, 400.0));
    double truth = 0.0;
    for (int d = 0; d < 50; ++d) {
        auto q = ranking_posterior(sharp, draw_signals(sharp, rng));
        for (std::size_t p = 0; p < q.ranks.size(); ++p)
            if (q.ranks[p] == std::vector<int>{1, 2, 3}) truth += q.prob[p] / 50;
    }
    CHECK(truth > 0.999);

    CHECK_THROWS_AS(ranking_posterior(ComparisonStructure(std::vector<double>(9, 0.0), flat_tau(9, 0.0)),
                                      SignalDraw{std::vector<std::vector<double>>(9, std::vector<double>(9, 0.0))}),
                    ValidationError);
}

TEST_CASE("binary choice matches the analytic probit form") {
    for (double tau : {0.0, 0.3, 1.0, 2.5}) {
        auto t = flat_tau(2, tau);
        ComparisonStructure s({0.8, 0.4}, t);
        SimConfig cfg;
        cfg.draws = 40000;
        cfg.seed = 5;
        auto est = simulate_choice(s, {0, 1}, {}, cfg);
        double truth = norm_cdf(std::sqrt(tau));
        CHECK(est.prob[0] + est.prob[1] == doctest::Approx(1.0));
        CHECK(std::abs(est.prob[0] - truth) < 3.0 * std::max(est.se[0], 1e-3));
    }
}

TEST_CASE("simulate_choice guards") {
    ComparisonStructure s({0.8, 0.4, 0.2}, flat_tau(3, 1.0));
    SimConfig cfg;
    cfg.draws = 10;
    CHECK_THROWS_AS(simulate_choice(s, {0, 1}, {1}, cfg), ValidationError);
    CHECK_THROWS_AS(simulate_choice(s, {}, {1}, cfg), ValidationError);
    cfg.draws = 0;
    CHECK_THROWS_AS(simulate_choice(s, {0, 1}, {}, cfg), ValidationError);
}

TEST_CASE("results do not depend on the worker count") {
    auto t = flat_tau(3, 0.7);
    t[0][2] = t[2][0] = Precision::finite(2.0);
    ComparisonStructure s({0.6, 0.6, 0.3}, t);
    SimConfig cfg;
    cfg.draws = 30000;
    cfg.seed = 9;
    auto one = simulate_choice(s, {0, 1}, {2}, cfg);
    cfg.threads = 4;
    auto four = simulate_choice(s, {0, 1}, {2}, cfg);
    CHECK(one.prob == four.prob);

    Option x = Lottery::simple(10.0, 0.4);
    auto list = build_adapted_list(ListKind::CertaintyEquivalent, x, 9);
    SimConfig sw;
    sw.draws = 20000;
    sw.threads = 1;
    auto a = simulate_switching(x, list, CrraSymmetric(1.0), GCurve(0.0, 0.5), sw);
    sw.threads = 3;
    auto b = simulate_switching(x, list, CrraSymmetric(1.0), GCurve(0.0, 0.5), sw);
    CHECK(a.prob == b.prob);
}

TEST_CASE("phantom context favours the option closer to the decoy") {
    // equal values, τ_xy = 0, y is easier to compare with the inferior z
    auto t = flat_tau(3, 0.0);
    t[1][2] = t[2][1] = Precision::finite(2.0);
    t[0][2] = t[2][0] = Precision::finite(0.2);
    ComparisonStructure s({0.6, 0.6, 0.3}, t);
    SimConfig cfg;
    cfg.draws = 60000;
    auto est = simulate_choice(s, {0, 1}, {2}, cfg);
    CHECK(est.prob[1] > 0.5 + 3.0 * est.se[1]);
}

TEST_CASE("decoy cases") {
    FigureSettings fs;
    fs.sim.draws = 60000;
    auto rows = figure_decoy_cases(fs);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].mean > 0.5 + 3.0 * rows[0].se);
    CHECK(rows[1].mean > 0.5 + 3.0 * rows[1].se);
    CHECK(std::abs(rows[2].mean - 0.5) < 3.0 * rows[2].se);
}

TEST_CASE("insertion posterior examples") {
    const int n = 5;
    auto p = insertion_posterior(std::vector<Precision>(n, Precision::finite(0.0)), std::vector<double>(n, 0.0),
                                 std::vector<int>(n, 1));
    for (double q : p) CHECK(q == doctest::Approx(1.0 / (n + 1)).epsilon(1e-14));

    std::vector<Precision> tau(n, Precision::finite(0.5));
    tau[0] = Precision::perfectly_comparable();
    std::vector<int> sign(n, -1);
    auto forced = insertion_posterior(tau, {0.0, 0.3, -0.2, 0.1, 0.4}, sign);
    CHECK(forced[0] == 0.0);
    CHECK(std::accumulate(forced.begin(), forced.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));

    std::vector<Precision> both(2, Precision::perfectly_comparable());
    CHECK_THROWS_AS(insertion_posterior(both, {0.0, 0.0}, {1, -1}), SolverError);
}

TEST_CASE("insertion posterior equals the enumerated rank marginal") {
    Rng rng(21, 0);
    for (int trial = 0; trial < 300; ++trial) {
        int n = uniform_int(rng, 1, 6);
        std::vector<double> vz;
        for (int j = 0; j < n; ++j) vz.push_back(1.0 - (j + 1) * 0.1);
        double vx = 1.0 - (uniform_int(rng, 0, n) + 0.5) * 0.1;
        std::vector<Precision> tx;
        for (int j = 0; j < n; ++j)
            tx.push_back(rng.uniform() < 0.2 ? Precision::perfectly_comparable()
                                             : Precision::finite(3.0 * rng.uniform()));
        auto s = list_structure(vx, vz, tx);
        auto draw = draw_signals(s, rng);
        auto post = ranking_posterior(s, draw);
        std::vector<double> a;
        std::vector<int> sign;
        for (int j = 0; j < n; ++j) {
            a.push_back(draw.a[0][j + 1]);
            sign.push_back(vx > vz[j] ? 1 : -1);
        }
        auto ins = insertion_posterior(tx, a, sign);
        for (int k = 1; k <= n + 1; ++k) CHECK(std::abs(ins[k - 1] - post.marginal(0, k)) < 1e-12);
    }
}

TEST_CASE("uninformative price list switching") {
    for (int n : {5, 14, 15}) CHECK(switching_uninformative(n).mean() == doctest::Approx((n + 2) / 2.0).epsilon(1e-14));
    auto d = switching_uninformative(15);
    CHECK(d.prob[7] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.prob[8] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::accumulate(d.prob.begin(), d.prob.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("simulated switching with zero precision centers on the middle") {
    Option x = Lottery::simple(10.0, 0.5);
    auto list = build_adapted_list(ListKind::CertaintyEquivalent, x, 15);
    SimConfig cfg;
    cfg.draws = 20000;
    cfg.tau_scale = 0.0;
    auto d = simulate_switching(x, list, CrraSymmetric(1.0), GCurve(0.1, 0.5), cfg);
    double m = d.mean(), m2 = 0.0;
    for (std::size_t r = 0; r < d.prob.size(); ++r) m2 += d.prob[r] * (r + 1.0) * (r + 1.0);
    double se = std::sqrt((m2 - m * m) / cfg.draws);
    CHECK(std::abs(m - 8.5) < 3.0 * se);
}

TEST_CASE("perfectly comparable list recovers the true rank") {
    Option x = Lottery::certain(6.3);
    auto list = build_adapted_list(ListKind::CertaintyEquivalent, Lottery::simple(10.0, 0.5), 15);
    SimConfig cfg;
    cfg.draws = 5000;
    auto d = simulate_switching(x, list, CrraSymmetric(1.0), GCurve(0.0, 0.5), cfg);
    // entries 10(15-k)/14 exceed 6.3 for k <= 6
    CHECK(d.prob[6] == 1.0);
}

TEST_CASE("switching concentrates as precision grows") {
    Option x = Lottery::simple(10.0, 0.37);
    auto list = build_adapted_list(ListKind::CertaintyEquivalent, x, 15);
    int r_star = 1;
    for (double w : list.grid)
        if (w > 3.7) ++r_star;
    double prev = 1e9;
    for (double scale : {0.25, 1.0, 4.0, 16.0}) {
        SimConfig cfg;
        cfg.draws = 20000;
        cfg.tau_scale = scale;
        auto d = simulate_switching(x, list, CrraSymmetric(1.0), GCurve(0.0, 0.5), cfg);
        double spread = 0.0;
        for (std::size_t r = 0; r < d.prob.size(); ++r) spread += d.prob[r] * std::abs(static_cast<int>(r) + 1 - r_star);
        CHECK(spread < prev);
        prev = spread;
    }
}

TEST_CASE("adapted price lists") {
    auto ce = build_adapted_list(ListKind::CertaintyEquivalent, Lottery::simple(10.0, 0.5), 3);
    CHECK(ce.grid == std::vector<double>{10.0, 5.0, 0.0});

    auto pe = build_adapted_list(ListKind::ProbabilityEquivalent, Lottery::simple(10.0, 0.3), 15, {24.0, {}});
    CHECK(pe.grid.front() == 0.3);
    CHECK(pe.grid.back() == 0.0);
    auto pe_certain = build_adapted_list(ListKind::ProbabilityEquivalent, Lottery::certain(6.0), 5, {24.0, {}});
    CHECK(pe_certain.grid.front() == 1.0);
    CHECK_THROWS_AS(build_adapted_list(ListKind::ProbabilityEquivalent, Lottery::simple(30.0, 0.3), 5, {24.0, {}}),
                    ValidationError);

    auto pve = build_adapted_list(ListKind::PresentValueEquivalent, PayoffFlow::single(8.0, 60.0), 5);
    CHECK(pve.grid == std::vector<double>{8.0, 6.0, 4.0, 2.0, 0.0});

    auto te = build_adapted_list(ListKind::TimeEquivalent, PayoffFlow::single(10.0, 30.0), 15, {27.5, {}});
    CHECK(te.grid.front() == 30.0);
    CHECK(te.grid.back() == 30.0 + 1440.0);

    CHECK_THROWS_AS(build_adapted_list(ListKind::CertaintyEquivalent, PayoffFlow::single(1.0, 0.0), 5), ValidationError);
    CHECK_THROWS_AS(build_adapted_list(ListKind::TimeEquivalent, Lottery::certain(1.0), 5), ValidationError);
    CHECK_THROWS_AS(build_adapted_list(ListKind::CertaintyEquivalent, Lottery::simple(10.0, 0.5), 2), ValidationError);
}

TEST_CASE("valuation summary") {
    auto ce = build_adapted_list(ListKind::CertaintyEquivalent, Lottery::simple(10.0, 0.5), 3);
    CHECK(valuation_summary({{0.0, 1.0, 0.0, 0.0}, 0}, ce).mean == 7.5);

    auto mid = build_adapted_list(ListKind::CertaintyEquivalent, Lottery::simple(10.0, 0.5), 15);
    CHECK(valuation_summary(switching_uninformative(15), mid).mean == doctest::Approx(5.0).epsilon(1e-14));

    std::vector<double> grid{0, 7, 30, 60, 120, 180, 240, 360, 480, 600, 720, 900, 1080};
    auto te = build_adapted_list(ListKind::TimeEquivalent, PayoffFlow::single(10.0, 0.0), static_cast<int>(grid.size()),
                                 {27.5, grid});
    std::vector<double> edge(grid.size() + 1, 0.0);
    edge.back() = 1.0;
    CHECK(valuation_summary({edge, 0}, te).mean == 1170.0);

    // R = 1 has no valuation on a CE list: excluded, not averaged
    auto s = valuation_summary({{0.5, 0.5, 0.0, 0.0}, 0}, ce);
    CHECK(s.excluded_mass == 0.5);
    CHECK(s.mean == 7.5);
    CHECK_THROWS_AS(valuation_summary({{1.0, 0.0, 0.0, 0.0}, 0}, ce), SolverError);
    CHECK_THROWS_AS(valuation_summary({{1.0, 0.0}, 0}, ce), ValidationError);
}
