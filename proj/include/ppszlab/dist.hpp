#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ppszlab/numeric.hpp"
#include "ppszlab/ppsz.hpp"

namespace ppszlab {

// Bias function gamma with derivative phi; Pr[X < r] = r + eps * gamma(r).
struct GammaSpec {
    std::string name;
    std::function<double(double)> gamma;  // zero beyond support_end
    std::function<double(double)> phi;
    double support_end = 1.0;
    std::vector<double> kinks;  // interior points where phi is not smooth
    double phi_min = 0, phi_max = 0;  // extremes of phi over [0,1]
};

GammaSpec gamma_main();       // r (1-2r)^{3/2}
GammaSpec gamma_twocc();      // 25 r^3 (1-2r)^2
GammaSpec gamma_id01();       // 10 r^2 (1-2r)^2
GammaSpec gamma_pid01();      // 61/6 r^3 (1-2r)^2
GammaSpec gamma_twocc_irr();  // 20 r^3 (1-2r)
GammaSpec gamma_generalk(double rho);  // r (rho - r) on [0, rho]

// Names: main, twocc, id01, pid01, twocc_irr, generalk (uses rho).
GammaSpec gamma_by_name(const std::string& name, double rho = 0.1);
std::vector<std::string> gamma_names();

// Minimum of 1 + eps*phi over [0,1]; sampling requires it to be >= 0.
double min_univariate_density(const GammaSpec& spec, double eps);

// Inverse-CDF sampling of D_eps^gamma.
double sample_univariate(const GammaSpec& spec, double eps, Rng& rng);
// Inverse CDF for a given u; bisection to 1e-12.
double univariate_quantile(const GammaSpec& spec, double eps, double u);
// (X, Y) with density 1 + eps phi(x) phi(y).
std::pair<double, double> sample_pair(const GammaSpec& spec, double eps, Rng& rng);

struct GraphShape {
    enum class Kind { Path, Cycle, General };
    std::vector<Label> vertices;
    std::vector<std::pair<int, int>> edges;  // indices into vertices
    Kind kind = Kind::General;

    static GraphShape path(int t);   // t edges, t+1 fresh vertices
    static GraphShape cycle(int t);  // t >= 3 edges
    std::size_t edge_count() const { return edges.size(); }
};

// Lower bound on the D^G density: 1 - eps |E| max(-phi(a) phi(b)).
double min_graph_density(const GraphShape& g, const GammaSpec& spec, double eps);

// Rejection sampler for D^G; values indexed like g.vertices.
class GraphSampler {
public:
    GraphSampler(GraphShape g, GammaSpec spec, double eps);  // throws if the density can go negative
    std::vector<double> sample(Rng& rng, std::size_t* proposals = nullptr) const;
    double density(const std::vector<double>& x) const;
    double envelope() const { return envelope_; }
    const GraphShape& shape() const { return g_; }

private:
    GraphShape g_;
    GammaSpec spec_;
    double eps_;
    double envelope_;
};

// Every label independent, drawn from D_eps^gamma.
class BiasedSampler : public PlacementSampler {
public:
    BiasedSampler(GammaSpec spec, double eps);
    Placement sample(const std::vector<Label>& labels, Rng& rng) const override;
    bool independent() const override { return true; }
    double sample_one(Label, Rng& rng) const override { return sample_univariate(spec_, eps_, rng); }
    std::string name() const override;

private:
    GammaSpec spec_;
    double eps_;
};

// Labels inside a component follow D^G for that component (an exact pair
// sampler for single edges); every other label is uniform.
class ComponentSampler : public PlacementSampler {
public:
    ComponentSampler(std::vector<GraphShape> components, GammaSpec spec, double eps);
    Placement sample(const std::vector<Label>& labels, Rng& rng) const override;
    std::string name() const override;

private:
    std::vector<GraphSampler> comps_;
    GammaSpec spec_;
    double eps_;
};

// Interval A_v = [lo, hi]; lo == hi is the point {lo}.
struct Interval {
    double lo = 0, hi = 1;
    bool is_point() const { return lo == hi; }
    double measure() const { return hi - lo; }
};

// Mean of phi over A (phi itself at a point).
double t_value(const GammaSpec& spec, const Interval& a);

// Pr[X_v in A_v for v in K | X_v in A_v for v in I], K and I partitioning V(G).
double cond_prob(const GraphShape& g, const std::vector<int>& k_set, const std::vector<Interval>& intervals,
                 const GammaSpec& spec, double eps);

// r + 1.147 eps gamma(r) sum over neighbours v of u of min(0, T_v).
// Requires a path or cycle, eps <= 0.1, |E| <= 22, gamma_main, and at most
// one point interval among the neighbours' conditions.
double cond_range_lower_bound(const GraphShape& g, int u, const std::vector<Interval>& intervals,
                              const GammaSpec& spec, double eps, double r);

struct Moments {
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
};
Moments moments(const GammaSpec& spec);

double f_kl(double eps);

struct KlReport {
    double numeric = 0;
    double bound = 0;
};
KlReport kl_univariate(const GammaSpec& spec, double eps);
// KL(D_eps^{gamma,box} || U) by 2-D quadrature, in bits.
double kl_pair_quadrature(const GammaSpec& spec, double eps);

enum class KlMode { MomentExpansion, MonteCarlo };
struct KlGraphOptions {
    KlMode mode = KlMode::MomentExpansion;
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
};
// E[z^p] / eps^p for z = eps sum_E phi phi under the uniform law.
double edge_moment(const GraphShape& g, const Moments& m, int p);            // closed forms per shape
double edge_moment_enumerated(const GraphShape& g, const Moments& m, int p); // ordered edge tuples
double kl_graph(const GraphShape& g, const GammaSpec& spec, double eps, const KlGraphOptions& opt = {});

}  // namespace ppszlab
