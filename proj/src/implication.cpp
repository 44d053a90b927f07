#include "ppszlab/implication.hpp"

#include <algorithm>
#include <functional>

namespace ppszlab {

bool subset_implies(const std::vector<Clause>& g, VarId x, int b) {
    std::vector<VarId> vars{x};
    for (const auto& c : g)
        for (Lit l : c.lits) vars.push_back(var_of(l));
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (static_cast<int>(vars.size()) > kSubsetVarCap)
        throw Error("subset_implies: " + std::to_string(vars.size()) + " variables exceeds cap " +
                    std::to_string(kSubsetVarCap));
    auto idx = [&](VarId v) { return std::lower_bound(vars.begin(), vars.end(), v) - vars.begin(); };
    const int xi = static_cast<int>(idx(x));
    const std::uint32_t total = 1u << vars.size();
    for (std::uint32_t m = 0; m < total; ++m) {
        if (static_cast<int>((m >> xi) & 1u) == b) continue;
        bool ok = true;
        for (const auto& c : g) {
            bool sat = false;
            for (Lit l : c.lits)
                if ((((m >> idx(var_of(l))) & 1u) != 0) == is_positive(l)) {
                    sat = true;
                    break;
                }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return false;  // model of G with x = 1-b
    }
    return true;
}

namespace {

// Minimal implying sets are found by closure: in a minimal set G with x
// fixed to 1-b, every literal other than the falsified x literal has its
// complement somewhere in G (a pure literal could be set true, dropping its
// clauses). So growing G only needs to add clauses containing the complement
// of some unmatched literal; when nothing is unmatched and G is still
// satisfiable, any clause sharing a variable may complete it.
class Searcher {
public:
    Searcher(const CnfFormula& f) : f_(f), occ_(2 * (f.n + 1)), assign_(f.n + 1, -1) {
        for (int i = 0; i < static_cast<int>(f.clauses.size()); ++i)
            for (Lit l : f.clauses[i].lits) occ_[slot(l)].push_back(i);
    }

    bool implies(int w, VarId x, int b, std::vector<int>* witness) {
        x_ = x;
        b_ = b;
        witness_ = witness;
        mode_implies_ = true;
        if (x >= 1 && x <= f_.n) {
            for (int c : occ_[slot(b ? x : -x)]) {
                std::vector<int> sub{c};
                if (grow(sub, w)) return true;
            }
        }
        if (may_have_unsat_subset()) {
            // An unsatisfiable set needs a clause without positive literals.
            mode_implies_ = false;
            for (int c = 0; c < static_cast<int>(f_.clauses.size()); ++c) {
                const auto& lits = f_.clauses[c].lits;
                if (std::any_of(lits.begin(), lits.end(), is_positive)) continue;
                std::vector<int> sub{c};
                if (grow(sub, w)) return true;
            }
        }
        return false;
    }

private:
    const CnfFormula& f_;
    std::vector<std::vector<int>> occ_;  // by literal slot
    std::vector<std::int8_t> assign_;
    std::vector<int>* witness_ = nullptr;
    VarId x_ = 0;
    int b_ = 0;
    bool mode_implies_ = true;

    static std::size_t slot(Lit l) { return 2 * static_cast<std::size_t>(var_of(l)) + (l > 0 ? 1 : 0); }

    bool may_have_unsat_subset() const {
        bool no_pos = false, no_neg = false;
        for (const auto& c : f_.clauses) {
            bool has_pos = false, has_neg = false;
            for (Lit l : c.lits) (is_positive(l) ? has_pos : has_neg) = true;
            no_pos |= !has_pos;
            no_neg |= !has_neg;
        }
        return no_pos && no_neg;
    }

    bool in_sub(const std::vector<int>& sub, int c) const { return std::find(sub.begin(), sub.end(), c) != sub.end(); }

    bool contains_lit(const std::vector<int>& sub, Lit l) const {
        for (int c : sub)
            if (f_.clauses[c].contains(l)) return true;
        return false;
    }

    // Clauses satisfied by x = 1-b never belong to a minimal implying set.
    bool useless(int c) const { return mode_implies_ && f_.clauses[c].contains(b_ ? -x_ : x_); }

    Lit unmatched(const std::vector<int>& sub) const {
        for (int c : sub)
            for (Lit l : f_.clauses[c].lits) {
                if (mode_implies_ && var_of(l) == x_) continue;
                if (!contains_lit(sub, -l)) return l;
            }
        return 0;
    }

    bool grow(std::vector<int>& sub, int w) {
        const int size = static_cast<int>(sub.size());
        if (Lit l = unmatched(sub)) {
            if (size == w) return false;
            for (int d : occ_[slot(-l)]) {
                if (in_sub(sub, d) || useless(d)) continue;
                sub.push_back(d);
                bool found = grow(sub, w);
                sub.pop_back();
                if (found) return true;
            }
            return false;
        }
        if (test(sub)) {
            if (witness_) {
                *witness_ = sub;
                std::sort(witness_->begin(), witness_->end());
            }
            return true;
        }
        if (size == w) return false;
        std::vector<int> next;
        for (int c : sub)
            for (Lit l : f_.clauses[c].lits)
                for (Lit s : {l, -l})
                    for (int d : occ_[slot(s)])
                        if (!in_sub(sub, d) && !useless(d)) next.push_back(d);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (int d : next) {
            sub.push_back(d);
            bool found = grow(sub, w);
            sub.pop_back();
            if (found) return true;
        }
        return false;
    }

    bool test(const std::vector<int>& sub) {
        if (mode_implies_) {
            assign_[x_] = static_cast<std::int8_t>(1 - b_);
            bool sat = dpll(sub);
            assign_[x_] = -1;
            return !sat;
        }
        return !dpll(sub);
    }

    bool dpll(const std::vector<int>& sub) {
        const Clause* open = nullptr;
        for (int ci : sub) {
            const Clause& c = f_.clauses[ci];
            bool sat = false, undecided = false;
            for (Lit l : c.lits) {
                int v = assign_[var_of(l)];
                if (v < 0)
                    undecided = true;
                else if ((v == 1) == is_positive(l)) {
                    sat = true;
                    break;
                }
            }
            if (sat) continue;
            if (!undecided) return false;
            if (!open) open = &c;
        }
        if (!open) return true;
        std::vector<VarId> touched;
        bool result = false;
        for (Lit l : open->lits) {
            VarId v = var_of(l);
            if (assign_[v] >= 0) continue;
            assign_[v] = is_positive(l) ? 1 : 0;
            touched.push_back(v);
            if (dpll(sub)) {
                result = true;
                break;
            }
            assign_[v] = is_positive(l) ? 0 : 1;  // later branches assume this literal false
        }
        for (VarId v : touched) assign_[v] = -1;
        return result;
    }
};

bool exhaustive(const CnfFormula& f, int w, VarId x, int b, std::vector<int>* witness) {
    const int m = static_cast<int>(f.clauses.size());
    std::vector<int> pick;
    std::function<bool(int)> rec = [&](int start) -> bool {
        if (!pick.empty()) {
            std::vector<Clause> g;
            for (int i : pick) g.push_back(f.clauses[i]);
            if (subset_implies(g, x, b)) {
                if (witness) *witness = pick;
                return true;
            }
        }
        if (static_cast<int>(pick.size()) == w) return false;
        for (int i = start; i < m; ++i) {
            pick.push_back(i);
            if (rec(i + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    return rec(0);
}

}  // namespace

bool w_implies_witness(const CnfFormula& f, int w, VarId x, int b, std::vector<int>* witness,
                       const ImplyOptions& opt) {
    if (w < 1) throw Error("w must be >= 1");
    if (w > opt.w_cap) throw Error("w = " + std::to_string(w) + " exceeds cap " + std::to_string(opt.w_cap));
    if (b != 0 && b != 1) throw Error("b must be 0 or 1");
    if (opt.search == ImplySearch::Exhaustive) return exhaustive(f, w, x, b, witness);
    Searcher s(f);
    return s.implies(w, x, b, witness);
}

bool w_implies(const CnfFormula& f, int w, VarId x, int b, const ImplyOptions& opt) {
    return w_implies_witness(f, w, x, b, nullptr, opt);
}

}  // namespace ppszlab
