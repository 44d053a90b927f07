#include "ppszlab/structure.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "ppszlab/cct.hpp"

namespace ppszlab {

CriticalClauseGraph build_ccg(const CnfFormula& f) {
    CriticalClauseGraph g;
    g.n = f.n;
    g.k = f.k;
    g.indeg.assign(f.n + 1, 0);
    g.canonical.resize(f.n + 1);
    for (VarId x = 1; x <= f.n; ++x) {
        g.canonical[x] = canonical_critical_clause(f, x);
        for (Lit l : g.canonical[x].lits) {
            if (is_positive(l)) continue;
            g.arcs.emplace_back(x, var_of(l));
            ++g.indeg[var_of(l)];
        }
    }
    return g;
}

SiblingGraph sibling_graph(const CriticalClauseGraph& ccg) {
    SiblingGraph sg;
    sg.n = ccg.n;
    sg.degree.assign(ccg.n + 1, 0);
    for (VarId x = 1; x <= ccg.n; ++x) {
        std::vector<VarId> neg;
        for (Lit l : ccg.canonical[x].lits)
            if (!is_positive(l)) neg.push_back(var_of(l));
        if (neg.size() != 2) continue;
        sg.edges.push_back(SgEdge{std::min(neg[0], neg[1]), std::max(neg[0], neg[1]), x});
        ++sg.degree[neg[0]];
        ++sg.degree[neg[1]];
    }
    return sg;
}

SiblingGraph sibling_graph(const CnfFormula& f) { return sibling_graph(build_ccg(f)); }

std::vector<VarId> heavy_set(const CriticalClauseGraph& ccg, int k_prime) {
    std::vector<VarId> out;
    for (VarId v = 1; v <= ccg.n; ++v)
        if (ccg.indeg[v] >= k_prime) out.push_back(v);
    return out;
}

int indeg_sum(const CriticalClauseGraph& ccg, const std::vector<VarId>& vars) {
    int s = 0;
    for (VarId v : vars) s += ccg.indeg.at(v);
    return s;
}

IdSets id_sets(const CriticalClauseGraph& ccg) {
    IdSets s;
    for (VarId v = 1; v <= ccg.n; ++v) {
        if (ccg.indeg[v] == 0) s.id0.push_back(v);
        if (ccg.indeg[v] == 1) s.id1.push_back(v);
        if (ccg.indeg[v] <= 1) s.id01.push_back(v);
    }
    return s;
}

EdgeSet extract_h(const SiblingGraph& sg) {
    const auto& e = sg.edges;
    std::vector<char> marked(e.size(), 0);
    std::map<std::pair<VarId, VarId>, int> mult;
    for (const auto& x : e) ++mult[{x.a, x.b}];
    std::vector<std::vector<int>> inc(sg.n + 1);
    for (std::size_t i = 0; i < e.size(); ++i) {
        inc[e[i].a].push_back(static_cast<int>(i));
        inc[e[i].b].push_back(static_cast<int>(i));
    }
    for (VarId v = 1; v <= sg.n; ++v) {
        std::vector<int> live;
        for (int i : inc[v])
            if (!marked[i]) live.push_back(i);
        if (live.size() <= 2) continue;
        // Low-multiplicity edges first, then by endpoints; mark from the front.
        std::sort(live.begin(), live.end(), [&](int i, int j) {
            int mi = mult[{e[i].a, e[i].b}], mj = mult[{e[j].a, e[j].b}];
            if (mi != mj) return mi < mj;
            if (e[i].a != e[j].a) return e[i].a < e[j].a;
            if (e[i].b != e[j].b) return e[i].b < e[j].b;
            return i < j;
        });
        for (std::size_t t = 0; t + 2 < live.size(); ++t) marked[live[t]] = 1;
    }
    EdgeSet h;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (!marked[i]) h.push_back(e[i]);
    return h;
}

EdgeSet h_free(const EdgeSet& h, const std::vector<VarId>& twocc) {
    std::set<VarId> t(twocc.begin(), twocc.end());
    EdgeSet out;
    for (const auto& e : h)
        if (!t.count(e.a) && !t.count(e.b) && !t.count(e.parent)) out.push_back(e);
    return out;
}

std::vector<Component> components(const EdgeSet& h) {
    std::map<VarId, std::vector<int>> inc;
    for (std::size_t i = 0; i < h.size(); ++i) {
        inc[h[i].a].push_back(static_cast<int>(i));
        inc[h[i].b].push_back(static_cast<int>(i));
    }
    for (const auto& [v, list] : inc)
        if (list.size() > 2) throw Error("components: vertex of degree > 2");
    std::vector<char> used(h.size(), 0);
    std::vector<Component> out;
    auto walk = [&](VarId start, int first, bool cycle) {
        Component c;
        c.cycle = cycle;
        VarId cur = start;
        int e = first;
        while (e >= 0 && !used[e]) {
            used[e] = 1;
            c.edges.push_back(h[e]);
            cur = h[e].a == cur ? h[e].b : h[e].a;
            int next = -1;
            for (int j : inc[cur])
                if (!used[j]) next = j;
            e = next;
        }
        out.push_back(std::move(c));
    };
    for (const auto& [v, list] : inc)
        if (list.size() == 1 && !used[list[0]]) walk(v, list[0], false);
    for (const auto& [v, list] : inc) {
        int first = -1;
        for (int j : list)
            if (!used[j] && (first < 0 || j < first)) first = j;
        if (first >= 0) walk(v, first, true);
    }
    return out;
}

std::vector<Component> trim_component(const Component& c, int max_edges) {
    if (static_cast<int>(c.edges.size()) <= max_edges) return {c};
    std::vector<SgEdge> path = c.edges;
    if (c.cycle) path.erase(path.begin());
    std::vector<Component> out;
    Component piece;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if ((i + 1) % static_cast<std::size_t>(max_edges + 1) == 0) {
            if (!piece.edges.empty()) out.push_back(std::move(piece));
            piece = Component{};
            continue;
        }
        piece.edges.push_back(path[i]);
    }
    if (!piece.edges.empty()) out.push_back(std::move(piece));
    return out;
}

HPartition partition_high_low(const CnfFormula& f, const EdgeSet& h, const EdgeSet& hfree, double thr, int height,
                              TwoCCMode mode) {
    HPartition p;
    p.h = h;
    p.h_free = hfree;
    p.thr = thr;
    p.height = height;
    const auto twocc = twocc_set(f, mode);
    std::map<VarId, CriticalClauseTree> trees;
    auto tree = [&](VarId y) -> const CriticalClauseTree& {
        auto it = trees.find(y);
        if (it != trees.end()) return it->second;
        CriticalClauseTree t = build_cct(f, y, height);
        mark_canonical(t, f, twocc);
        return trees.emplace(y, std::move(t)).first->second;
    };
    auto density = [&](VarId y, VarId z) {
        auto key = std::make_pair(y, z);
        auto it = p.densities.find(key);
        if (it != p.densities.end()) return it->second;
        double d = label_density_integrated(Label::var(z), tree(y));
        p.densities[key] = d;
        return d;
    };
    const std::size_t m = hfree.size();
    std::vector<char> high(m, 0), rest(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& e = hfree[i];
        if (density(e.a, e.b) >= thr || density(e.b, e.a) >= thr) high[i] = 1;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!high[i]) continue;
        const auto& e = hfree[i];
        VarId z = density(e.a, e.b) >= thr ? e.b : e.a;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i && !high[j] && (hfree[j].a == z || hfree[j].b == z)) rest[j] = 1;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (high[i])
            p.h_high.push_back(hfree[i]);
        else if (rest[i])
            p.h_rest.push_back(hfree[i]);
        else
            p.h_prime.push_back(hfree[i]);
    }
    for (const auto& c : components(p.h_prime))
        for (auto& piece : trim_component(c)) {
            for (const auto& e : piece.edges) p.h_low.push_back(e);
            p.low_components.push_back(std::move(piece));
        }
    return p;
}

std::vector<VarId> privileged_set(const CnfFormula& f) {
    std::vector<VarId> out;
    const int want = (f.k - 1) * (f.k - 1);
    for (VarId x = 1; x <= f.n; ++x) {
        if (critical_clauses(f, x).size() >= 2) {
            out.push_back(x);
            continue;
        }
        CriticalClauseTree t = build_cct(f, x, 2);
        std::set<Label> d1, d2;
        int depth2 = 0;
        for (const auto& nd : t.nodes) {
            if (nd.depth == 1) d1.insert(nd.label);
            if (nd.depth == 2) {
                d2.insert(nd.label);
                ++depth2;
            }
        }
        bool repeat = std::any_of(d1.begin(), d1.end(), [&](Label l) { return d2.count(l) != 0; });
        if (repeat || depth2 < want) out.push_back(x);
    }
    return out;
}

GeneralMatching matching_general_k(const CnfFormula& f, int k_prime) {
    if (k_prime < 1) throw Error("k' must be positive");
    GeneralMatching gm;
    const auto ccg = build_ccg(f);
    gm.heavy = heavy_set(ccg, k_prime);
    gm.indeg_heavy = indeg_sum(ccg, gm.heavy);
    gm.privileged = privileged_set(f);
    std::vector<char> used(f.n + 1, 0);
    std::vector<VarId> owner;
    for (VarId x = 1; x <= f.n; ++x) {
        const Clause& c = ccg.canonical[x];
        bool clash = std::any_of(c.lits.begin(), c.lits.end(), [&](Lit l) { return used[var_of(l)] != 0; });
        if (clash) continue;
        for (Lit l : c.lits) used[var_of(l)] = 1;
        gm.g.push_back(c);
        owner.push_back(x);
    }
    std::set<VarId> priv(gm.privileged.begin(), gm.privileged.end());
    for (std::size_t i = 0; i < gm.g.size(); ++i) {
        std::vector<VarId> neg;
        for (Lit l : gm.g[i].lits)
            if (!is_positive(l)) neg.push_back(var_of(l));
        if (neg.size() < 2) continue;
        VarPair pr{neg[0], neg[1], owner[i]};  // lits are sorted, so these are the smallest two
        gm.m_prime.push_back(pr);
        if (!priv.count(pr.parent) && !priv.count(pr.y) && !priv.count(pr.z)) gm.m.push_back(pr);
    }
    std::set<VarId> parents;
    for (const auto& pr : gm.m)
        for (VarId x = 1; x <= f.n; ++x)
            if (ccg.canonical[x].contains(-pr.y) && ccg.canonical[x].contains(-pr.z)) parents.insert(x);
    gm.parent_m.assign(parents.begin(), parents.end());
    gm.g_bound = static_cast<double>(f.n - gm.indeg_heavy) / (static_cast<double>(f.k) * k_prime);
    gm.m_bound = gm.g_bound - 2.0 * static_cast<double>(gm.privileged.size());
    return gm;
}

StructureBounds check_structure_bounds(const CnfFormula& f, double thr, int height, int k_prime) {
    StructureBounds b;
    b.n = f.n;
    const auto ccg = build_ccg(f);
    const auto sg = sibling_graph(ccg);
    const auto h = extract_h(sg);
    const auto ids = id_sets(ccg);
    const auto twocc = twocc_set(f, TwoCCMode::FTilde);
    const auto hf = h_free(h, twocc);
    const auto part = partition_high_low(f, h, hf, thr, height, TwoCCMode::FTilde);
    const auto gm = matching_general_k(f, k_prime);
    b.h = static_cast<int>(h.size());
    b.id0 = static_cast<int>(ids.id0.size());
    b.id1 = static_cast<int>(ids.id1.size());
    b.twocc = static_cast<int>(twocc.size());
    b.h_free = static_cast<int>(hf.size());
    b.h_high = static_cast<int>(part.h_high.size());
    b.h_low = static_cast<int>(part.h_low.size());
    b.m = static_cast<int>(gm.m.size());
    b.m_bound = gm.m_bound;

    std::map<VarId, int> deg;
    for (const auto& e : h) {
        ++deg[e.a];
        ++deg[e.b];
    }
    bool deg_ok = std::all_of(deg.begin(), deg.end(), [](const auto& kv) { return kv.second <= 2; });
    b.h_ok = deg_ok && b.h >= f.n - b.id1 - 2 * b.id0;
    b.h_free_ok = b.h_free >= b.h - 3 * b.twocc;
    b.partition_ok = 12.0 / 11.0 * b.h_low + 2.0 * b.h_high + 3.0 * b.twocc >= b.h - 1e-9;
    b.components_ok = std::all_of(part.low_components.begin(), part.low_components.end(),
                                  [](const Component& c) { return c.edges.size() <= 22; });
    std::set<VarId> seen;
    bool disjoint = true;
    for (const auto& pr : gm.m) disjoint = disjoint && seen.insert(pr.y).second && seen.insert(pr.z).second;
    b.m_ok = disjoint && b.m >= b.m_bound - 1e-9;
    return b;
}

std::string structure_report_json(const CnfFormula& f, double thr, int height, int k_prime) {
    const auto ccg = build_ccg(f);
    nlohmann::json j;
    std::map<int, int> hist;
    for (VarId v = 1; v <= f.n; ++v) ++hist[ccg.indeg[v]];
    nlohmann::json hj = nlohmann::json::object();
    for (auto [d, c] : hist) hj[std::to_string(d)] = c;
    j["indeg_histogram"] = hj;
    auto gm = matching_general_k(f, k_prime);
    j["heavy"] = gm.heavy.size();
    j["indeg_heavy"] = gm.indeg_heavy;
    j["privileged"] = gm.privileged.size();
    j["G"] = gm.g.size();
    j["M"] = gm.m.size();
    j["M_bound"] = gm.m_bound;
    auto ids = id_sets(ccg);
    j["ID0"] = ids.id0.size();
    j["ID1"] = ids.id1.size();
    if (f.k == 3) {
        auto sg = sibling_graph(ccg);
        auto h = extract_h(sg);
        auto twocc = twocc_set(f, TwoCCMode::FTilde);
        auto hf = h_free(h, twocc);
        auto part = partition_high_low(f, h, hf, thr, height, TwoCCMode::FTilde);
        j["TwoCC"] = twocc.size();
        j["H"] = h.size();
        j["H_free"] = hf.size();
        j["H_high"] = part.h_high.size();
        j["H_rest"] = part.h_rest.size();
        j["H_low"] = part.h_low.size();
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : part.low_components) comps.push_back({{"edges", c.edges.size()}, {"cycle", c.cycle}});
        j["components"] = comps;
        auto b = check_structure_bounds(f, thr, height, k_prime);
        j["bounds_ok"] = b.all();
    } else {
        j["bounds_ok"] = gm.m.size() >= gm.m_bound - 1e-9;
    }
    return j.dump(2);
}

}  // namespace ppszlab
