#include "ppszlab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ppszlab {

namespace {

GammaSpec finish(GammaSpec s) {
    // Extremes of phi over its support; phi is 0 beyond support_end.
    std::vector<double> pts{0.0, s.support_end};
    for (double k : s.kinks) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        lo = std::min({lo, minimize(s.phi, pts[i], pts[i + 1]).value, s.phi(pts[i]), s.phi(pts[i + 1])});
        hi = std::max({hi, maximize(s.phi, pts[i], pts[i + 1]).value, s.phi(pts[i]), s.phi(pts[i + 1])});
    }
    s.phi_min = lo;
    s.phi_max = hi;
    return s;
}

// Wraps a polynomial-style pair on [0, end], zero outside.
GammaSpec make(std::string name, double end, std::function<double(double)> g, std::function<double(double)> f) {
    GammaSpec s;
    s.name = std::move(name);
    s.support_end = end;
    s.gamma = [g, end](double r) { return r <= 0 || r >= end ? 0.0 : g(r); };
    s.phi = [f, end](double r) { return r < 0 || r > end ? 0.0 : f(r); };
    return finish(std::move(s));
}

}  // namespace

GammaSpec gamma_main() {
    return make(
        "main", 0.5, [](double r) { return r * std::pow(1 - 2 * r, 1.5); },
        [](double r) { return std::sqrt(std::max(0.0, 1 - 2 * r)) * (1 - 5 * r); });
}

GammaSpec gamma_twocc() {
    return make(
        "twocc", 0.5, [](double r) { return 25 * r * r * r * (1 - 2 * r) * (1 - 2 * r); },
        [](double r) { return 25 * r * r * (1 - 2 * r) * (3 - 10 * r); });
}

GammaSpec gamma_id01() {
    return make(
        "id01", 0.5, [](double r) { return 10 * r * r * (1 - 2 * r) * (1 - 2 * r); },
        [](double r) { return 20 * r * (1 - 2 * r) * (1 - 4 * r); });
}

GammaSpec gamma_pid01() {
    return make(
        "pid01", 0.5, [](double r) { return 61.0 / 6.0 * r * r * r * (1 - 2 * r) * (1 - 2 * r); },
        [](double r) { return 61.0 / 6.0 * r * r * (1 - 2 * r) * (3 - 10 * r); });
}

GammaSpec gamma_twocc_irr() {
    return make(
        "twocc_irr", 0.5, [](double r) { return 20 * r * r * r * (1 - 2 * r); },
        [](double r) { return 20 * r * r * (3 - 8 * r); });
}

GammaSpec gamma_generalk(double rho) {
    if (!(rho > 0 && rho <= 1)) throw Error("generalk: rho must lie in (0,1]");
    auto s = make(
        "generalk", rho, [rho](double r) { return r * (rho - r); }, [rho](double r) { return rho - 2 * r; });
    return s;
}

GammaSpec gamma_by_name(const std::string& name, double rho) {
    if (name == "main") return gamma_main();
    if (name == "twocc") return gamma_twocc();
    if (name == "id01") return gamma_id01();
    if (name == "pid01") return gamma_pid01();
    if (name == "twocc_irr") return gamma_twocc_irr();
    if (name == "generalk") return gamma_generalk(rho);
    throw Error("unknown gamma: " + name);
}

std::vector<std::string> gamma_names() { return {"main", "twocc", "id01", "pid01", "twocc_irr", "generalk"}; }

double min_univariate_density(const GammaSpec& spec, double eps) {
    return 1 + std::min(eps * spec.phi_min, eps * spec.phi_max);
}

double univariate_quantile(const GammaSpec& spec, double eps, double u) {
    if (eps == 0) return u;
    double lo = 0, hi = 1;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (mid + eps * spec.gamma(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double sample_univariate(const GammaSpec& spec, double eps, Rng& rng) {
    if (min_univariate_density(spec, eps) < 0) throw Error("D_eps^" + spec.name + ": density goes negative");
    return univariate_quantile(spec, eps, uniform01(rng));
}

std::pair<double, double> sample_pair(const GammaSpec& spec, double eps, Rng& rng) {
    GraphShape one = GraphShape::path(1);
    if (min_graph_density(one, spec, eps) < 0) throw Error("pair density goes negative");
    double x = uniform01(rng);
    double y = univariate_quantile(spec, eps * spec.phi(x), uniform01(rng));
    return {x, y};
}

GraphShape GraphShape::path(int t) {
    if (t < 0) throw Error("path: negative length");
    GraphShape g;
    g.kind = Kind::Path;
    for (int i = 0; i <= t; ++i) g.vertices.push_back(Label::fresh(i));
    for (int i = 0; i < t; ++i) g.edges.emplace_back(i, i + 1);
    return g;
}

GraphShape GraphShape::cycle(int t) {
    if (t < 3) throw Error("cycle: need at least 3 edges");
    GraphShape g;
    g.kind = Kind::Cycle;
    for (int i = 0; i < t; ++i) g.vertices.push_back(Label::fresh(i));
    for (int i = 0; i < t; ++i) g.edges.emplace_back(i, (i + 1) % t);
    return g;
}

double min_graph_density(const GraphShape& g, const GammaSpec& spec, double eps) {
    double sq = std::max(spec.phi_min * spec.phi_min, spec.phi_max * spec.phi_max);
    double worst = std::min({eps * spec.phi_min * spec.phi_max, eps * sq, 0.0});
    return 1 + static_cast<double>(g.edges.size()) * worst;
}

GraphSampler::GraphSampler(GraphShape g, GammaSpec spec, double eps) : g_(std::move(g)), spec_(std::move(spec)), eps_(eps) {
    for (auto [a, b] : g_.edges)
        if (a < 0 || b < 0 || a >= static_cast<int>(g_.vertices.size()) || b >= static_cast<int>(g_.vertices.size()) || a == b)
            throw Error("graph shape: bad edge");
    if (min_graph_density(g_, spec_, eps_) < 0)
        throw Error("D^G density can go negative (|E| = " + std::to_string(g_.edges.size()) + ")");
    double sq = std::max(spec_.phi_min * spec_.phi_min, spec_.phi_max * spec_.phi_max);
    envelope_ = 1 + std::fabs(eps_) * static_cast<double>(g_.edges.size()) * sq;
}

double GraphSampler::density(const std::vector<double>& x) const {
    double s = 0;
    for (auto [a, b] : g_.edges) s += spec_.phi(x[a]) * spec_.phi(x[b]);
    return 1 + eps_ * s;
}

std::vector<double> GraphSampler::sample(Rng& rng, std::size_t* proposals) const {
    std::vector<double> x(g_.vertices.size());
    for (std::size_t tries = 1;; ++tries) {
        for (auto& v : x) v = uniform01(rng);
        if (uniform01(rng) * envelope_ <= density(x)) {
            if (proposals) *proposals += tries;
            return x;
        }
    }
}

BiasedSampler::BiasedSampler(GammaSpec spec, double eps) : spec_(std::move(spec)), eps_(eps) {
    if (min_univariate_density(spec_, eps_) < 0) throw Error("D_eps^" + spec_.name + ": density goes negative");
}

Placement BiasedSampler::sample(const std::vector<Label>& labels, Rng& rng) const {
    Placement p;
    for (Label l : labels) p.set(l, sample_univariate(spec_, eps_, rng));
    return p;
}

std::string BiasedSampler::name() const { return "biased(" + spec_.name + ", eps=" + std::to_string(eps_) + ")"; }

ComponentSampler::ComponentSampler(std::vector<GraphShape> components, GammaSpec spec, double eps)
    : spec_(std::move(spec)), eps_(eps) {
    std::map<Label, int> owner;
    for (std::size_t i = 0; i < components.size(); ++i)
        for (Label l : components[i].vertices)
            if (!owner.emplace(l, static_cast<int>(i)).second) throw Error("components share a vertex");
    for (auto& c : components) comps_.emplace_back(std::move(c), spec_, eps_);
}

Placement ComponentSampler::sample(const std::vector<Label>& labels, Rng& rng) const {
    Placement p;
    for (const auto& c : comps_) {
        std::vector<double> x;
        if (c.shape().edges.size() == 1 && c.shape().vertices.size() == 2) {
            auto [a, b] = sample_pair(spec_, eps_, rng);
            x = {a, b};
            if (c.shape().edges[0].first == 1) std::swap(x[0], x[1]);
        } else {
            x = c.sample(rng);
        }
        for (std::size_t i = 0; i < x.size(); ++i) p.set(c.shape().vertices[i], x[i]);
    }
    for (Label l : labels)
        if (!p.has(l)) p.set(l, uniform01(rng));
    return p;
}

std::string ComponentSampler::name() const {
    return "components(" + spec_.name + ", eps=" + std::to_string(eps_) + ", n=" + std::to_string(comps_.size()) + ")";
}

double t_value(const GammaSpec& spec, const Interval& a) {
    if (a.lo < 0 || a.hi > 1 || a.lo > a.hi) throw Error("interval out of [0,1]");
    if (a.is_point()) return spec.phi(a.lo);
    // gamma is an antiderivative of phi with gamma(0) = 0.
    return (spec.gamma(a.hi) - spec.gamma(a.lo)) / (a.hi - a.lo);
}

double cond_prob(const GraphShape& g, const std::vector<int>& k_set, const std::vector<Interval>& intervals,
                 const GammaSpec& spec, double eps) {
    const std::size_t nv = g.vertices.size();
    if (intervals.size() != nv) throw Error("cond_prob: one interval per vertex required");
    std::vector<char> in_k(nv, 0);
    for (int v : k_set) in_k.at(v) = 1;
    std::vector<double> t(nv);
    for (std::size_t v = 0; v < nv; ++v) t[v] = t_value(spec, intervals[v]);
    double prod = 1;
    for (std::size_t v = 0; v < nv; ++v)
        if (in_k[v]) prod *= intervals[v].measure();
    if (prod == 0) return 0;
    double sum_all = 0, sum_i = 0;
    for (auto [a, b] : g.edges) {
        double tt = t[a] * t[b];
        sum_all += tt;
        if (!in_k[a] && !in_k[b]) sum_i += tt;
    }
    return prod * (1 + eps * sum_all) / (1 + eps * sum_i);
}

double cond_range_lower_bound(const GraphShape& g, int u, const std::vector<Interval>& intervals, const GammaSpec& spec,
                              double eps, double r) {
    if (g.kind != GraphShape::Kind::Path && g.kind != GraphShape::Kind::Cycle)
        throw Error("cond_range_lower_bound: path or cycle required");
    if (spec.name != "main") throw Error("cond_range_lower_bound: gamma_main required");
    if (!(eps >= 0 && eps <= 0.1)) throw Error("cond_range_lower_bound: eps must lie in [0, 0.1]");
    if (g.edges.size() > 22) throw Error("cond_range_lower_bound: more than 22 edges");
    if (intervals.size() != g.vertices.size()) throw Error("cond_range_lower_bound: one interval per vertex required");
    int points = 0;
    for (std::size_t v = 0; v < intervals.size(); ++v)
        if (static_cast<int>(v) != u && intervals[v].is_point()) ++points;
    if (points > 1) throw Error("cond_range_lower_bound: at most one point condition allowed");
    double s = 0;
    for (auto [a, b] : g.edges) {
        if (a == u) s += std::min(0.0, t_value(spec, intervals[b]));
        if (b == u) s += std::min(0.0, t_value(spec, intervals[a]));
    }
    return r + 1.147 * eps * spec.gamma(r) * s;
}

Moments moments(const GammaSpec& spec) {
    auto m = [&](int d) {
        return integrate([&](double r) { return std::pow(spec.phi(r), d); }, 0.0, spec.support_end, 1e-14, spec.kinks);
    };
    return {m(1), m(2), m(3), m(4)};
}

double f_kl(double eps) {
    if (!(eps < 1)) throw Error("f_kl: eps must be < 1");
    return (1 - eps) * std::log1p(-eps) + eps;
}

KlReport kl_univariate(const GammaSpec& spec, double eps) {
    if (min_univariate_density(spec, eps) < 0) throw Error("kl_univariate: density goes negative");
    KlReport rep;
    rep.numeric = integrate(
                      [&](double r) {
                          double d = 1 + eps * spec.phi(r);
                          return d * std::log(d);
                      },
                      0.0, spec.support_end, 1e-15, spec.kinks) /
                  std::log(2.0);
    rep.bound = moments(spec).m2 * f_kl(std::fabs(eps)) / std::log(2.0);
    return rep;
}

double kl_pair_quadrature(const GammaSpec& spec, double eps) {
    if (min_graph_density(GraphShape::path(1), spec, eps) < 0) throw Error("kl_pair_quadrature: density goes negative");
    std::vector<double> breaks = spec.kinks;
    if (spec.support_end < 1) breaks.push_back(spec.support_end);
    return integrate2d(
               [&](double x, double y) {
                   double d = 1 + eps * spec.phi(x) * spec.phi(y);
                   return d * std::log(d);
               },
               breaks, 24) /
           std::log(2.0);
}

double edge_moment(const GraphShape& g, const Moments& m, int p) {
    const double t = static_cast<double>(g.edges.size());
    const double m2 = m.m2, m3 = m.m3, m4 = m.m4;
    if (g.kind == GraphShape::Kind::General) throw Error("edge_moment: closed forms exist only for paths and cycles");
    const bool cyc = g.kind == GraphShape::Kind::Cycle;
    switch (p) {
        case 1:
            return 0;
        case 2:
            return t * m2 * m2;
        case 3:
            if (cyc && t == 3) return 3 * m3 * m3 + 6 * m2 * m2 * m2;
            return t * m3 * m3;
        case 4:
            if (!cyc) return t * m4 * m4 + 3 * (t - 1) * (2 * m4 * m2 * m2 + (t - 2) * m2 * m2 * m2 * m2);
            if (t == 3) return 3 * m4 * m4 + 18 * m4 * m2 * m2 + 36 * m3 * m3 * m2;
            if (t == 4) return 4 * m4 * m4 + 24 * m4 * m2 * m2 + 36 * m2 * m2 * m2 * m2;
            return t * m4 * m4 + 3 * t * (2 * m4 * m2 * m2 + (t - 3) * m2 * m2 * m2 * m2);
        default:
            throw Error("edge_moment: p must be 1..4");
    }
}

double edge_moment_enumerated(const GraphShape& g, const Moments& m, int p) {
    if (p < 1 || p > 4) throw Error("edge_moment_enumerated: p must be 1..4");
    const double md[5] = {1.0, m.m1, m.m2, m.m3, m.m4};
    const std::size_t ne = g.edges.size();
    std::vector<int> deg(g.vertices.size(), 0);
    std::vector<std::size_t> idx(p, 0);
    double total = 0;
    if (ne == 0) return 0;
    for (;;) {
        std::fill(deg.begin(), deg.end(), 0);
        for (int i = 0; i < p; ++i) {
            ++deg[g.edges[idx[i]].first];
            ++deg[g.edges[idx[i]].second];
        }
        double prod = 1;
        for (int d : deg) {
            prod *= md[d];
            if (prod == 0) break;
        }
        total += prod;
        int pos = p - 1;
        while (pos >= 0 && ++idx[pos] == ne) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return total;
}

double kl_graph(const GraphShape& g, const GammaSpec& spec, double eps, const KlGraphOptions& opt) {
    if (min_graph_density(g, spec, eps) < 0) throw Error("kl_graph: density goes negative");
    if (opt.mode == KlMode::MomentExpansion) {
        Moments m = moments(spec);
        double e2 = edge_moment(g, m, 2), e3 = edge_moment(g, m, 3), e4 = edge_moment(g, m, 4);
        return (eps * eps * e2 / 2 - eps * eps * eps * e3 / 6 + eps * eps * eps * eps * e4 / 3) / std::log(2.0);
    }
    if (opt.trials < 1) throw Error("trials must be >= 1");
    std::vector<double> vals(opt.trials);
    std::vector<double> x(g.vertices.size());
    for (std::size_t i = 0; i < opt.trials; ++i) {
        Rng rng = trial_rng(opt.seed, i);
        for (auto& v : x) v = uniform01(rng);
        double z = 0;
        for (auto [a, b] : g.edges) z += spec.phi(x[a]) * spec.phi(x[b]);
        z *= eps;
        vals[i] = (1 + z) * std::log1p(z) / std::log(2.0);
    }
    return summarize(vals).mean;
}

}  // namespace ppszlab
