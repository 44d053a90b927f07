#include "doctest.h"

#include "ppszlab/dist.hpp"

#include <cmath>

using namespace ppszlab;

namespace {

// Fraction of samples satisfying pred, with its standard error.
template <class Pred>
Estimate frequency(std::size_t n, Pred pred) {
    std::vector<double> hits(n);
    for (std::size_t i = 0; i < n; ++i) hits[i] = pred(i) ? 1.0 : 0.0;
    return summarize(hits);
}

bool within(const Estimate& e, double target, double k) { return std::abs(e.mean - target) <= k * e.stderr_ + 1e-12; }

}  // namespace

TEST_CASE("gamma registry") {
    for (const auto& name : gamma_names()) {
        auto g = gamma_by_name(name, 0.1);
        CHECK(g.gamma(0.0) == doctest::Approx(0.0));
        CHECK(g.gamma(g.support_end) == doctest::Approx(0.0).epsilon(1e-12));
        // phi is the derivative of gamma
        for (double r : {0.05, 0.13, 0.27, 0.41}) {
            if (r >= g.support_end) continue;
            double h = 1e-6;
            double fd = (g.gamma(r + h) - g.gamma(r - h)) / (2 * h);
            CHECK(g.phi(r) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
    CHECK_THROWS_AS(gamma_by_name("nope"), Error);
    CHECK_THROWS_AS(gamma_generalk(0.0), Error);
}

TEST_CASE("univariate sampling") {
    auto g = gamma_main();
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        double u = uniform01(rng);
        CHECK(univariate_quantile(g, 0.0, u) == u);
    }
    const std::size_t n = 100000;
    for (double eps : {0.1, -0.1}) {
        Rng r(eps > 0 ? 2 : 3);
        auto e = frequency(n, [&](std::size_t) { return sample_univariate(g, eps, r) < 0.25; });
        CHECK(within(e, 0.25 + eps * g.gamma(0.25), 4));
    }
    CHECK(g.gamma(0.25) == doctest::Approx(0.25 * std::pow(0.5, 1.5)));
    CHECK_THROWS_AS(sample_univariate(gamma_twocc_irr(), 0.5, rng), Error);
}

TEST_CASE("pair sampling") {
    auto g = gamma_main();
    const std::size_t n = 100000;
    const double r = 0.3, eps = 0.1;
    std::vector<std::pair<double, double>> s(n);
    Rng rng(4);
    for (auto& p : s) p = sample_pair(g, eps, rng);
    CHECK(within(frequency(n, [&](std::size_t i) { return s[i].first < r; }), r, 4));
    CHECK(within(frequency(n, [&](std::size_t i) { return s[i].second < r; }), r, 4));
    CHECK(within(frequency(n, [&](std::size_t i) { return s[i].first < r && s[i].second < r; }),
                 r * r + eps * g.gamma(r) * g.gamma(r), 4));

    Rng rng0(5);
    auto e0 = frequency(n, [&](std::size_t) {
        auto [x, y] = sample_pair(g, 0.0, rng0);
        return x < r && y < r;
    });
    CHECK(within(e0, r * r, 4));
}

TEST_CASE("graph sampling") {
    auto g = gamma_main();
    const double eps = 0.1, r = 0.3;
    GraphSampler path(GraphShape::path(2), g, eps);
    const std::size_t n = 100000;
    std::vector<std::vector<double>> s(n);
    Rng rng(6);
    for (auto& x : s) x = path.sample(rng);
    double both = r * r + eps * g.gamma(r) * g.gamma(r);
    CHECK(within(frequency(n, [&](std::size_t i) { return s[i][0] < r && s[i][1] < r; }), both, 4));
    CHECK(within(frequency(n, [&](std::size_t i) { return s[i][1] < r && s[i][2] < r; }), both, 4));
    CHECK(within(frequency(n, [&](std::size_t i) { return s[i][0] < r && s[i][2] < r; }), r * r, 4));

    CHECK_NOTHROW(GraphSampler(GraphShape::cycle(22), g, eps));
    CHECK_THROWS_AS(GraphSampler(GraphShape::cycle(23), g, eps), Error);
    CHECK(GraphSampler(GraphShape::cycle(22), g, eps).envelope() <= 3.2);
}

TEST_CASE("cond_prob one-edge identities") {
    auto g = gamma_main();
    const double eps = 0.1;
    auto edge = GraphShape::path(1);
    for (double r : {0.1, 0.25, 0.4}) {
        for (double b : {0.05, 0.3, 0.8}) {
            double v = cond_prob(edge, {0}, {Interval{0, r}, Interval{b, b}}, g, eps);
            CHECK(v == doctest::Approx(r + eps * g.phi(b) * g.gamma(r)).epsilon(1e-12));
        }
        double v = cond_prob(edge, {0}, {Interval{0, r}, Interval{r, 1}}, g, eps);
        CHECK(v == doctest::Approx(r - eps * g.gamma(r) * g.gamma(r) / (1 - r)).epsilon(1e-12));
    }
}

TEST_CASE("cond_prob with full conditioning intervals is unconditional") {
    auto g = gamma_main();
    auto c4 = GraphShape::cycle(4);
    std::vector<Interval> a = {Interval{0.1, 0.4}, Interval{0, 1}, Interval{0, 1}, Interval{0, 1}};
    CHECK(cond_prob(c4, {0}, a, g, 0.1) == doctest::Approx(0.3).epsilon(1e-12));
    // adjacent K vertices keep their edge term
    a[1] = Interval{0.0, 0.3};
    double expect = 0.3 * 0.3 * (1 + 0.1 * t_value(g, a[0]) * t_value(g, a[1]));
    CHECK(cond_prob(c4, {0, 1}, a, g, 0.1) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("cond_prob matches rejection sampling on a 4-cycle") {
    auto g = gamma_main();
    const double eps = 0.1;
    auto c4 = GraphShape::cycle(4);
    std::vector<Interval> a = {Interval{0, 0.3}, Interval{0.3, 1}, Interval{0, 0.2}, Interval{0.5, 1}};
    GraphSampler gs(c4, g, eps);
    Rng rng(8);
    std::vector<double> hits;
    while (hits.size() < 60000) {
        auto x = gs.sample(rng);
        bool cond = x[1] >= a[1].lo && x[1] <= a[1].hi && x[3] >= a[3].lo && x[3] <= a[3].hi;
        if (!cond) continue;
        hits.push_back(x[0] <= a[0].hi && x[2] <= a[2].hi ? 1.0 : 0.0);
    }
    auto e = summarize(hits);
    CHECK(within(e, cond_prob(c4, {0, 2}, a, g, eps), 3));
}

TEST_CASE("cond_range_lower_bound") {
    auto g = gamma_main();
    const double eps = 0.1;
    auto p = GraphShape::path(2);
    for (double r : {0.1, 0.3, 0.45}) {
        CHECK(cond_range_lower_bound(p, 1, {Interval{0, r}, Interval{0, r}, Interval{0, r}}, g, eps, r) == r);
        double one = cond_range_lower_bound(p, 1, {Interval{r, 1}, Interval{0, r}, Interval{0, r}}, g, eps, r);
        CHECK(one == doctest::Approx(r - 1.147 * eps * g.gamma(r) * g.gamma(r) / (1 - r)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(cond_range_lower_bound(GraphShape::path(23), 0, std::vector<Interval>(24), g, eps, 0.1), Error);
    CHECK_THROWS_AS(cond_range_lower_bound(p, 1, {Interval{}, Interval{}, Interval{}}, gamma_twocc(), eps, 0.1), Error);
}

TEST_CASE("cond_range_lower_bound holds over interval patterns on a 6-path") {
    auto g = gamma_main();
    const double eps = 0.1;
    auto p = GraphShape::path(6);
    const int nv = 7;
    int checked = 0;
    for (double r : {0.1, 0.3, 0.45}) {
        const std::vector<Interval> choices = {Interval{0, r}, Interval{r, 1}, Interval{0, 1}, Interval{0.05, 0.05},
                                               Interval{0.4, 0.4}, Interval{0.9, 0.9}};
        for (int u = 0; u < nv; ++u) {
            std::vector<int> pick(nv, 0);
            for (;;) {
                int points = 0;
                for (int v = 0; v < nv; ++v)
                    if (v != u && pick[v] >= 3) ++points;
                if (points <= 1) {
                    std::vector<Interval> a(nv);
                    for (int v = 0; v < nv; ++v) a[v] = v == u ? Interval{0, r} : choices[pick[v]];
                    double exact = cond_prob(p, {u}, a, g, eps);
                    double lb = cond_range_lower_bound(p, u, a, g, eps, r);
                    CHECK(exact >= lb - 1e-15);
                    ++checked;
                }
                int pos = 0;
                while (pos < nv && (pos == u || ++pick[pos] == static_cast<int>(choices.size()))) {
                    if (pos != u) pick[pos] = 0;
                    ++pos;
                }
                if (pos == nv) break;
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("moments") {
    auto m = moments(gamma_main());
    CHECK(std::abs(m.m1) < 1e-12);
    CHECK(std::abs(m.m2 - 3.0 / 32) < 1e-9);
    CHECK(std::abs(m.m3 - 12.0 / 385) < 1e-9);
    CHECK(std::abs(m.m4 - 9.0 / 224) < 1e-9);
    CHECK(std::abs(moments(gamma_twocc()).m2 - 125.0 / 1008) < 1e-9);
    CHECK(std::abs(moments(gamma_twocc_irr()).m2 - 15.0 / 14) < 1e-9);
    for (double rho : {0.05, 0.1, 0.3}) CHECK(std::abs(moments(gamma_generalk(rho)).m2 - rho * rho * rho / 3) < 1e-12);
}

TEST_CASE("f_kl") {
    CHECK(f_kl(0.0) == 0.0);
    CHECK(f_kl(0.1) == doctest::Approx(0.0051755).epsilon(1e-5));
    for (int i = 1; i < 500; ++i) {
        double e = 0.5 * i / 500;
        CHECK(f_kl(e) <= (e * e + e * e * e) / 2);
    }
    CHECK_THROWS_AS(f_kl(1.0), Error);
}

TEST_CASE("univariate KL") {
    CHECK(kl_univariate(gamma_main(), 0.0).numeric == 0.0);
    auto k = kl_univariate(gamma_main(), 0.1);
    CHECK(k.numeric > 0);
    CHECK(k.numeric <= 3.0 / 32 * f_kl(0.1) / std::log(2.0));
    for (double eps : {0.029, 0.1, 0.19}) {
        auto t = kl_univariate(gamma_twocc_irr(), eps);
        CHECK(t.numeric <= f_kl(5 * eps) / (25 * std::log(2.0)) * 15.0 / 14);
    }
}

TEST_CASE("edge moments: closed forms agree with enumeration") {
    for (const auto& spec : {gamma_main(), gamma_twocc(), gamma_id01()}) {
        auto m = moments(spec);
        m.m1 = 0;  // exact; quadrature leaves ~1e-17
        for (int t = 1; t <= 7; ++t)
            for (int p = 1; p <= 4; ++p)
                CHECK(edge_moment(GraphShape::path(t), m, p) ==
                      doctest::Approx(edge_moment_enumerated(GraphShape::path(t), m, p)).epsilon(1e-12));
        for (int t = 3; t <= 7; ++t)
            for (int p = 1; p <= 4; ++p)
                CHECK(edge_moment(GraphShape::cycle(t), m, p) ==
                      doctest::Approx(edge_moment_enumerated(GraphShape::cycle(t), m, p)).epsilon(1e-12));
    }
}

TEST_CASE("graph KL") {
    auto g = gamma_main();
    const double eps = 0.1;
    double one = kl_graph(GraphShape::path(1), g, eps);
    double quad = kl_pair_quadrature(g, eps);
    // the expansion drops O(eps^5) terms
    CHECK(std::abs(one - quad) <= 1e-3 * quad);
    CHECK(kl_graph(GraphShape::path(17), g, eps) <= 0.00638 * eps * eps * 17);
    CHECK(kl_graph(GraphShape::cycle(3), g, eps) <= 0.00638 * eps * eps * 3);

    KlGraphOptions mc;
    mc.mode = KlMode::MonteCarlo;
    mc.trials = 200000;
    double est = kl_graph(GraphShape::cycle(5), g, eps, mc);
    CHECK(est == doctest::Approx(kl_graph(GraphShape::cycle(5), g, eps)).epsilon(0.05));
}
