#include "ppszlab/cct.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace ppszlab {

std::vector<Label> LabeledTree::labels() const {
    std::set<Label> s;
    for (const auto& n : nodes) s.insert(n.label);
    return {s.begin(), s.end()};
}

std::vector<int> LabeledTree::path_to(int node) const {
    std::vector<int> path;
    for (int u = node; u >= 0; u = nodes.at(u).parent) path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

bool LabeledTree::path_labels_distinct() const {
    for (std::size_t u = 0; u < nodes.size(); ++u)
        for (int a = nodes[u].parent; a >= 0; a = nodes[a].parent)
            if (nodes[a].label == nodes[u].label) return false;
    return true;
}

int LabeledTree::safe_leaf_count() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.kind == LeafKind::Safe; }));
}

namespace {

// alpha_u violates c: every positive literal's variable is on the path, no
// negative literal's variable is.
bool violated_by_path(const Clause& c, const std::vector<char>& on_path) {
    for (Lit l : c.lits) {
        bool flipped = on_path[var_of(l)] != 0;
        if (is_positive(l) != flipped) return false;
    }
    return true;
}

std::vector<char> path_mask(const LabeledTree& t, int u, int n) {
    std::vector<char> on(n + 1, 0);
    for (int a = u; a >= 0; a = t.nodes[a].parent) on[t.nodes[a].label.as_var()] = 1;
    return on;
}

}  // namespace

CriticalClauseTree build_cct(const CnfFormula& f, VarId x, int h) {
    if (x < 1 || x > f.n) throw Error("build_cct: variable out of range");
    if (h < 0) throw Error("build_cct: negative height");
    std::vector<std::optional<Clause>> canon(f.n + 1);
    auto canonical_of = [&](VarId v) -> const Clause& {
        if (!canon[v]) canon[v] = canonical_critical_clause(f, v);
        return *canon[v];
    };
    std::vector<const Clause*> sorted;
    for (const auto& c : f.clauses) sorted.push_back(&c);
    std::stable_sort(sorted.begin(), sorted.end(), [](const Clause* a, const Clause* b) { return clause_less(*a, *b); });

    CriticalClauseTree t;
    t.height = h;
    t.root_var = x;
    t.nodes.push_back(TreeNode{Label::var(x), -1, 0, {}, false, LeafKind::Internal, std::nullopt});
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (t.nodes[u].depth == h) {
            t.nodes[u].kind = LeafKind::Safe;
            continue;
        }
        auto on = path_mask(t, u, f.n);
        VarId z = t.nodes[u].label.as_var();
        const Clause* chosen = nullptr;
        const Clause& cz = canonical_of(z);
        if (violated_by_path(cz, on)) {
            chosen = &cz;
        } else {
            for (const Clause* c : sorted)
                if (violated_by_path(*c, on)) {
                    chosen = c;
                    break;
                }
        }
        if (!chosen) throw Error("build_cct: no violated clause (formula not uniquely satisfiable or not normalized)");
        t.nodes[u].clause = *chosen;
        for (Lit l : chosen->lits) {
            if (is_positive(l)) continue;
            TreeNode child{Label::var(var_of(l)), u, t.nodes[u].depth + 1, {}, false, LeafKind::Internal, std::nullopt};
            t.nodes.push_back(child);
            int id = static_cast<int>(t.nodes.size()) - 1;
            t.nodes[u].children.push_back(id);
            queue.push_back(id);
        }
        if (t.nodes[u].children.empty()) t.nodes[u].kind = LeafKind::Unsafe;
    }

    // Structural invariants of the construction.
    for (std::size_t u = 0; u < t.nodes.size(); ++u) {
        const auto& node = t.nodes[u];
        if (!node.clause) continue;
        auto on = path_mask(t, static_cast<int>(u), f.n);
        for (Lit l : node.clause->lits)
            if (is_positive(l) && !on[var_of(l)]) throw Error("build_cct: positive literal not on path");
        if (node.children.size() > static_cast<std::size_t>(std::max(f.k - 1, 0)))
            throw Error("build_cct: node has more than k-1 children");
    }
    if (!t.path_labels_distinct()) throw Error("build_cct: label repeated on a down-path");
    return t;
}

void mark_canonical(CriticalClauseTree& t, const CnfFormula& f, const std::vector<VarId>& twocc) {
    std::vector<char> in_twocc(f.n + 1, 0);
    for (VarId v : twocc) in_twocc.at(v) = 1;
    for (std::size_t u = 0; u < t.nodes.size(); ++u) {
        auto& node = t.nodes[u];
        VarId z = node.label.as_var();
        bool ok = !in_twocc[z];
        if (ok) {
            const auto crit = critical_clauses(f, z);
            if (crit.empty()) {
                ok = false;
            } else if (node.clause) {
                ok = *node.clause == canonical_critical_clause(f, z);
            } else {
                // Truncated node: the construction would pick the canonical
                // clause exactly when alpha_u violates it.
                ok = violated_by_path(canonical_critical_clause(f, z), path_mask(t, static_cast<int>(u), f.n));
            }
        }
        bool parent_ok = node.parent < 0 || t.nodes[node.parent].canonical;
        node.canonical = ok && parent_ok;  // BFS order: parent already decided
    }
}

LabeledTree to_labeled(const CriticalClauseTree& t) {
    LabeledTree out;
    out.height = t.height;
    out.nodes = t.nodes;
    for (auto& n : out.nodes) n.clause.reset();
    return out;
}

LabeledTree complete_tree(int k, int depth) {
    if (k < 2) throw Error("complete_tree: k must be >= 2");
    if (depth < 0) throw Error("complete_tree: negative depth");
    double count = 0;
    for (int d = 0; d <= depth; ++d) count += std::pow(k - 1.0, d);
    if (count > 5e7) throw Error("complete_tree: tree too large");
    LabeledTree t;
    t.height = depth;
    int counter = 0;
    t.nodes.push_back(TreeNode{Label::fresh(counter++), -1, 0, {}, false, LeafKind::Internal, std::nullopt});
    for (std::size_t u = 0; u < t.nodes.size(); ++u) {
        if (t.nodes[u].depth == depth) {
            t.nodes[u].kind = LeafKind::Safe;
            continue;
        }
        for (int c = 0; c < k - 1; ++c) {
            TreeNode child{Label::fresh(counter++), static_cast<int>(u), t.nodes[u].depth + 1, {}, false,
                           LeafKind::Internal, std::nullopt};
            t.nodes.push_back(child);
            t.nodes[u].children.push_back(static_cast<int>(t.nodes.size()) - 1);
        }
    }
    return t;
}

namespace {

template <class Value>
bool cut_rec(const LabeledTree& t, int u, double r, bool weak, Value& value) {
    const auto& node = t.nodes[u];
    bool dead = (u != 0 || weak) && value(node.label) < r;
    if (dead) return true;
    if (node.kind == LeafKind::Safe) return false;
    if (node.kind == LeafKind::Unsafe) return true;
    for (int c : node.children)
        if (!cut_rec(t, c, r, weak, value)) return false;
    return true;
}

}  // namespace

bool cut_event(const LabeledTree& t, const Placement& pi, double r, bool weak) {
    if (t.nodes.empty()) return true;
    auto value = [&](Label l) { return pi.get(l); };
    return cut_rec(t, 0, r, weak, value);
}

Estimate cut_probability_mc(const LabeledTree& t, const PlacementSampler& sampler, double r, const CutOptions& opt) {
    if (opt.trials < 1) throw Error("trials must be >= 1");
    std::vector<double> hits(opt.trials);
    const bool lazy = sampler.independent();
    std::vector<Label> labels;
    if (!lazy) labels = t.labels();
    parallel_for(opt.trials, opt.threads, [&](std::size_t i) {
        Rng rng = trial_rng(opt.seed, i);
        if (lazy) {
            std::unordered_map<int, double> memo;
            auto value = [&](Label l) {
                auto it = memo.find(l.id);
                if (it != memo.end()) return it->second;
                double v = sampler.sample_one(l, rng);
                memo.emplace(l.id, v);
                return v;
            };
            double rr = opt.root_relative ? value(t.nodes[0].label) : r;
            hits[i] = cut_rec(t, 0, rr, opt.weak, value) ? 1.0 : 0.0;
        } else {
            Placement pi = sampler.sample(labels, rng);
            double rr = opt.root_relative ? pi.get(t.nodes[0].label) : r;
            hits[i] = cut_event(t, pi, rr, opt.weak) ? 1.0 : 0.0;
        }
    });
    return summarize(hits);
}

double depth_weight_integral(int d) {
    static std::map<int, double> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    double v = integrate([d](double r) { return (1 - 2 * r) * (1 - 2 * r) / std::pow(1 - r, 3) * std::pow(r, d + 1); },
                         0.0, 0.5, 1e-15);
    cache[d] = v;
    return v;
}

double label_density(Label z, const LabeledTree& t, double r) {
    if (!(r >= 0 && r < 0.5)) throw Error("label_density: r must lie in [0, 1/2)");
    double w = (1 - 2 * r) * (1 - 2 * r) / std::pow(1 - r, 3);
    double sum = 0;
    for (const auto& n : t.nodes)
        if (n.canonical && n.label == z) sum += w * std::pow(r, n.depth + 1);
    return sum;
}

double label_density_integrated(Label z, const LabeledTree& t) {
    double sum = 0;
    for (const auto& n : t.nodes)
        if (n.canonical && n.label == z) sum += depth_weight_integral(n.depth);
    return sum;
}

SimilarityReport similarity_check(const CnfFormula& f, const CriticalClauseTree& tx, int u, int v,
                                  const std::vector<VarId>& twocc) {
    SimilarityReport rep;
    auto path = tx.path_to(v);
    auto pos = std::find(path.begin(), path.end(), u);
    if (pos == path.end()) {
        rep.precondition_ok = false;
        rep.note = "v is not a descendant of u";
        return rep;
    }
    if (!tx.nodes[v].canonical) {
        rep.precondition_ok = false;
        rep.note = "v is not canonical";
        return rep;
    }
    for (auto it = pos; it != path.end(); ++it) rep.sequence.push_back(tx.nodes[*it].label);
    VarId a = tx.nodes[u].label.as_var();
    int need = static_cast<int>(rep.sequence.size()) - 1;
    CriticalClauseTree ta = build_cct(f, a, need);
    mark_canonical(ta, f, twocc);
    int cur = 0;
    rep.matched_path.push_back(0);
    for (std::size_t i = 1; i < rep.sequence.size(); ++i) {
        int next = -1;
        for (int c : ta.nodes[cur].children)
            if (ta.nodes[c].label == rep.sequence[i]) next = c;
        if (next < 0) {
            rep.note = "no child labeled " + rep.sequence[i].to_string() + " at depth " + std::to_string(i - 1);
            return rep;
        }
        cur = next;
        rep.matched_path.push_back(cur);
    }
    if (!ta.nodes[cur].canonical) {
        rep.note = "matched endpoint is not canonical";
        return rep;
    }
    rep.matched = true;
    return rep;
}

std::string to_dot(const LabeledTree& t) {
    std::ostringstream out;
    out << "digraph cct {\n  node [shape=circle];\n";
    for (std::size_t u = 0; u < t.nodes.size(); ++u) {
        const auto& n = t.nodes[u];
        out << "  n" << u << " [label=\"" << n.label.to_string();
        if (n.clause) out << "\\n" << n.clause->to_string();
        out << "\"";
        if (n.kind == LeafKind::Safe) out << ", shape=doublecircle";
        if (n.kind == LeafKind::Unsafe) out << ", shape=box";
        if (n.canonical) out << ", style=bold";
        out << "];\n";
    }
    for (std::size_t u = 0; u < t.nodes.size(); ++u)
        for (int c : t.nodes[u].children) out << "  n" << u << " -> n" << c << ";\n";
    out << "}\n";
    return out.str();
}

std::string to_json_dump(const LabeledTree& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t u = 0; u < t.nodes.size(); ++u) {
        const auto& n = t.nodes[u];
        nlohmann::json j;
        j["id"] = u;
        j["label"] = n.label.to_string();
        j["parent"] = n.parent;
        j["depth"] = n.depth;
        j["children"] = n.children;
        j["canonical"] = n.canonical;
        j["kind"] = n.kind == LeafKind::Safe ? "safe" : n.kind == LeafKind::Unsafe ? "unsafe" : "internal";
        if (n.clause) j["clause"] = n.clause->lits;
        arr.push_back(j);
    }
    return arr.dump();
}

}  // namespace ppszlab
