#pragma once

#include <map>
#include <string>
#include <vector>

#include "ppszlab/formula.hpp"

namespace ppszlab {

// Arcs x -> y for every negated y in x's canonical critical clause.
struct CriticalClauseGraph {
    int n = 0, k = 0;
    std::vector<std::pair<VarId, VarId>> arcs;
    std::vector<int> indeg;       // index 1..n
    std::vector<Clause> canonical;  // index 1..n; canonical[0] unused
};
CriticalClauseGraph build_ccg(const CnfFormula& f);

// Multigraph edge {a, b} (a < b) contributed by parent's canonical clause.
struct SgEdge {
    VarId a = 0, b = 0;
    VarId parent = 0;
    bool operator==(const SgEdge&) const = default;
};
using EdgeSet = std::vector<SgEdge>;

// k = 3: one edge per canonical critical clause with exactly two negated literals.
struct SiblingGraph {
    int n = 0;
    EdgeSet edges;
    std::vector<int> degree;  // index 1..n, with multiplicity
};
SiblingGraph sibling_graph(const CnfFormula& f);
SiblingGraph sibling_graph(const CriticalClauseGraph& ccg);

std::vector<VarId> heavy_set(const CriticalClauseGraph& ccg, int k_prime);
int indeg_sum(const CriticalClauseGraph& ccg, const std::vector<VarId>& vars);
struct IdSets {
    std::vector<VarId> id0, id1, id01;
};
IdSets id_sets(const CriticalClauseGraph& ccg);

// Degree-2 subgraph: at each vertex with more than two unmarked incident
// edges, mark the surplus; H is what stays unmarked.
EdgeSet extract_h(const SiblingGraph& sg);
// Drops edges touching TwoCC through either endpoint or the parent.
EdgeSet h_free(const EdgeSet& h, const std::vector<VarId>& twocc);

struct Component {
    std::vector<SgEdge> edges;  // in walk order
    bool cycle = false;
};
// Connected components of a max-degree-2 edge set.
std::vector<Component> components(const EdgeSet& h);
// Splits a component into pieces of at most 22 edges, removing edges 23,
// 46, ... along a path; a cycle first loses one edge.
std::vector<Component> trim_component(const Component& c, int max_edges = 22);

struct HPartition {
    EdgeSet h, h_free, h_high, h_rest, h_prime, h_low;
    std::vector<Component> low_components;
    double thr = 0;
    int height = 0;
    // LabelDensity(z, T_y) for the endpoints examined, keyed by (y, z).
    std::map<std::pair<VarId, VarId>, double> densities;
};

constexpr double kDefaultThr = 1.0 / 4678.0;
constexpr int kDefaultDensityHeight = 6;

HPartition partition_high_low(const CnfFormula& f, const EdgeSet& h, const EdgeSet& hfree, double thr = kDefaultThr,
                              int height = kDefaultDensityHeight, TwoCCMode mode = TwoCCMode::FTilde);

std::vector<VarId> privileged_set(const CnfFormula& f);

struct VarPair {
    VarId y = 0, z = 0;
    VarId parent = 0;  // owner of the clause in G
};
struct GeneralMatching {
    std::vector<Clause> g;
    std::vector<VarPair> m_prime, m;
    std::vector<VarId> parent_m;  // every parent of a surviving pair
    std::vector<VarId> heavy, privileged;
    int indeg_heavy = 0;
    double g_bound = 0;  // (n - indeg(Heavy)) / (k k')
    double m_bound = 0;  // g_bound - 2 |Privileged|
};
GeneralMatching matching_general_k(const CnfFormula& f, int k_prime);

// Checked inequalities on one formula (k = 3 for the H chain).
struct StructureBounds {
    int n = 0;
    int h = 0, id0 = 0, id1 = 0, twocc = 0, h_free = 0, h_high = 0, h_low = 0, m = 0;
    double m_bound = 0;
    bool h_ok = false, h_free_ok = false, partition_ok = false, m_ok = false, components_ok = false;
    bool all() const { return h_ok && h_free_ok && partition_ok && m_ok && components_ok; }
};
StructureBounds check_structure_bounds(const CnfFormula& f, double thr = kDefaultThr, int height = 3, int k_prime = 3);

std::string structure_report_json(const CnfFormula& f, double thr, int height, int k_prime);

}  // namespace ppszlab
