#include "doctest.h"

#include "ppszlab/structure.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

using namespace ppszlab;

namespace {

CnfFormula make(int n, std::vector<std::vector<Lit>> clauses) {
    CnfFormula f;
    f.n = n;
    for (auto& c : clauses) {
        f.k = std::max<int>(f.k, static_cast<int>(c.size()));
        f.clauses.emplace_back(c);
    }
    return f;
}

bool contains(const std::vector<VarId>& v, VarId x) { return std::find(v.begin(), v.end(), x) != v.end(); }

Component path_component(int edges, bool cycle) {
    Component c;
    c.cycle = cycle;
    for (int i = 0; i < edges; ++i) c.edges.push_back(SgEdge{i + 1, cycle && i + 1 == edges ? 1 : i + 2, 0});
    return c;
}

std::size_t total_edges(const std::vector<Component>& cs) {
    std::size_t s = 0;
    for (const auto& c : cs) s += c.edges.size();
    return s;
}

}  // namespace

TEST_CASE("critical clause graph and sibling graph of a triangle") {
    // x = 1, y = 2, z = 3
    auto f = make(3, {{1, -2, -3}, {-1, 2, -3}, {-1, -2, 3}});
    auto ccg = build_ccg(f);
    CHECK(ccg.arcs.size() == 6);
    for (VarId v = 1; v <= 3; ++v) CHECK(ccg.indeg[v] == 2);
    CHECK(std::accumulate(ccg.indeg.begin(), ccg.indeg.end(), 0) == (f.k - 1) * f.n);

    auto sg = sibling_graph(ccg);
    REQUIRE(sg.edges.size() == 3);
    CHECK(sg.edges[0] == SgEdge{2, 3, 1});
    CHECK(sg.edges[1] == SgEdge{1, 3, 2});
    CHECK(sg.edges[2] == SgEdge{1, 2, 3});

    auto ids = id_sets(ccg);
    CHECK(ids.id0.empty());
    CHECK(ids.id1.empty());
    CHECK(heavy_set(ccg, 3).empty());
}

TEST_CASE("parallel sibling edges are kept") {
    // a = 1 and b = 2 share the companion pair {3, 4}
    auto f = make(4, {{1, -3, -4}, {2, -3, -4}, {3}, {4}});
    auto sg = sibling_graph(f);
    REQUIRE(sg.edges.size() == 2);
    CHECK(sg.edges[0].a == 3);
    CHECK(sg.edges[1].a == 3);
    CHECK(sg.degree[3] == 2);
    CHECK(sg.degree[4] == 2);
}

TEST_CASE("heavy set") {
    // y = 5 is negated in the canonical clauses of 1, 2, 3 and 4
    auto f = make(6, {{1, -5, -6}, {2, -5, -6}, {3, -5, -6}, {4, -5}, {5}, {6}});
    auto ccg = build_ccg(f);
    CHECK(ccg.indeg[5] == 4);
    CHECK(contains(heavy_set(ccg, 3), 5));
    CHECK(contains(heavy_set(ccg, 3), 6));
    CHECK_FALSE(contains(heavy_set(ccg, 4), 6));
    CHECK(indeg_sum(ccg, heavy_set(ccg, 3)) == 7);
}

TEST_CASE("degree-2 subgraph") {
    SiblingGraph sg;
    sg.n = 4;
    sg.edges = {SgEdge{1, 2, 0}, SgEdge{1, 3, 0}, SgEdge{1, 4, 0}, SgEdge{2, 3, 0}};
    sg.degree = {0, 3, 2, 2, 1};
    auto h = extract_h(sg);
    CHECK(h.size() == 3);
    CHECK(h.size() >= static_cast<std::size_t>(4 - 1));

    SiblingGraph low;
    low.n = 4;
    low.edges = {SgEdge{1, 2, 0}, SgEdge{2, 3, 0}, SgEdge{3, 4, 0}};
    low.degree = {0, 1, 2, 2, 1};
    CHECK(extract_h(low) == low.edges);
}

TEST_CASE("h_free") {
    EdgeSet h = {SgEdge{1, 2, 5}, SgEdge{2, 3, 6}, SgEdge{3, 4, 2}, SgEdge{4, 7, 8}};
    CHECK(h_free(h, {}) == h);
    auto hf = h_free(h, {2});
    CHECK(h.size() - hf.size() == 3);
    CHECK(hf.size() == 1);
}

TEST_CASE("component trimming") {
    auto short_path = trim_component(path_component(22, false));
    CHECK(total_edges(short_path) == 22);

    auto p = trim_component(path_component(23, false));
    CHECK(total_edges(p) == 22);
    for (const auto& c : p) CHECK(c.edges.size() <= 22);

    // A cycle loses one edge to become a 22-edge path, which needs no further cut.
    auto c = trim_component(path_component(23, true));
    CHECK(total_edges(c) == 22);
    CHECK(c.size() == 1);

    for (int len = 1; len <= 120; ++len)
        for (bool cyc : {false, true}) {
            if (cyc && len < 3) continue;
            auto pieces = trim_component(path_component(len, cyc));
            for (const auto& pc : pieces) CHECK(pc.edges.size() <= 22);
            CHECK(12.0 / 11.0 * static_cast<double>(total_edges(pieces)) >= len - (cyc ? 1 : 0) - 1e-9);
        }
}

TEST_CASE("components of a max-degree-2 edge set") {
    EdgeSet h = {SgEdge{1, 2, 0}, SgEdge{2, 3, 0}, SgEdge{1, 3, 0}, SgEdge{5, 6, 0}, SgEdge{6, 7, 0}};
    auto cs = components(h);
    REQUIRE(cs.size() == 2);
    int cycles = 0;
    for (const auto& c : cs) cycles += c.cycle ? 1 : 0;
    CHECK(cycles == 1);
    CHECK(total_edges(cs) == 5);
}

TEST_CASE("partition with an infinite threshold") {
    auto f = generate_unique_instance(12, 3, 3.0, 21, kEnumerationCap, GenMode::SparseCritical).formula;
    auto sg = sibling_graph(f);
    auto h = extract_h(sg);
    auto hf = h_free(h, twocc_set(f, TwoCCMode::FTilde));
    auto p = partition_high_low(f, h, hf, std::numeric_limits<double>::infinity(), 3);
    CHECK(p.h_high.empty());
    CHECK(p.h_rest.empty());
    std::size_t expect = 0;
    for (const auto& c : components(hf)) expect += total_edges(trim_component(c));
    CHECK(p.h_low.size() == expect);
    CHECK_FALSE(hf.empty());
}

TEST_CASE("privileged set and general-k matching on a hand instance") {
    auto f = make(6, {{1, -2, -3}, {4, -5, -6}, {2}, {3}, {5}, {6}});
    auto gm = matching_general_k(f, 3);
    REQUIRE(gm.g.size() == 2);
    CHECK(gm.g[0] == Clause({1, -2, -3}));
    CHECK(gm.g[1] == Clause({4, -5, -6}));
    CHECK(gm.m_prime.size() == 2);
    // the depth-2 levels are empty, so both owners are privileged and M is empty
    CHECK(contains(gm.privileged, 1));
    CHECK(contains(gm.privileged, 4));
    CHECK(gm.m.empty());

    auto two = make(5, {{1, -2, -3}, {1, -4, -5}, {2}, {3}, {4}, {5}});
    CHECK(contains(privileged_set(two), 1));
}

TEST_CASE("matching is disjoint and meets its bound on generated instances") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto mode = seed % 2 ? GenMode::SparseCritical : GenMode::Mixed;
        auto f = generate_unique_instance(12, 3, 3.0, seed, kEnumerationCap, mode).formula;
        auto gm = matching_general_k(f, 3);
        std::vector<int> used(f.n + 1, 0);
        for (const auto& c : gm.g)
            for (Lit l : c.lits) CHECK(++used[var_of(l)] == 1);
        CHECK(static_cast<double>(gm.g.size()) >= gm.g_bound - 1e-9);
        CHECK(static_cast<double>(gm.m.size()) >= gm.m_bound - 1e-9);
    }
}

TEST_CASE("structure bounds on generated instances") {
    int checked = 0, nontrivial = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        int n = 8 + static_cast<int>(seed % 7);
        auto mode = seed % 2 ? GenMode::SparseCritical : GenMode::Mixed;
        auto f = generate_unique_instance(n, 3, 3.0, seed, kEnumerationCap, mode).formula;
        auto b = check_structure_bounds(f);
        if (b.h_free > 0 && b.m > 0) ++nontrivial;
        CHECK(b.h_ok);
        CHECK(b.h_free_ok);
        CHECK(b.partition_ok);
        CHECK(b.m_ok);
        CHECK(b.components_ok);
        ++checked;
    }
    CHECK(checked == 60);
    CHECK(nontrivial >= 20);
}
