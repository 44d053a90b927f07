#include "ppszlab/formula.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ppszlab {

Clause::Clause(std::vector<Lit> l) : lits(std::move(l)) {
    std::sort(lits.begin(), lits.end(), lit_less);
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (lits[i] == 0) throw Error("literal 0 inside clause");
        if (i > 0 && var_of(lits[i]) == var_of(lits[i - 1]))
            throw Error("variable " + std::to_string(var_of(lits[i])) + " repeated in clause");
    }
}

bool Clause::contains(Lit l) const { return std::find(lits.begin(), lits.end(), l) != lits.end(); }

bool Clause::mentions(VarId v) const {
    return std::any_of(lits.begin(), lits.end(), [v](Lit l) { return var_of(l) == v; });
}

std::string Clause::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(lits[i]);
    }
    return s + ")";
}

bool clause_less(const Clause& a, const Clause& b) {
    return std::lexicographical_compare(a.lits.begin(), a.lits.end(), b.lits.begin(), b.lits.end(),
                                        lit_less);
}

bool CnfFormula::has_empty_clause() const {
    return std::any_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.empty(); });
}

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    std::vector<Lit> pending;
    bool done = false;
    while (!done && std::getline(in, line)) {
        std::size_t p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos) continue;
        if (line[p] == 'c') {
            std::string body = line.substr(p + 1);
            if (!body.empty() && body[0] == ' ') body.erase(0, 1);
            while (!body.empty() && (body.back() == '\r')) body.pop_back();
            f.comments.push_back(body);
            continue;
        }
        if (line[p] == '%') break;  // SATLIB end marker
        if (line[p] == 'p') {
            if (have_header) throw Error("duplicate header line");
            std::istringstream hs(line.substr(p));
            std::string pp, fmt, extra;
            long long n = -1, m = -1;
            if (!(hs >> pp >> fmt >> n >> m) || pp != "p" || fmt != "cnf" || n < 0 || m < 0 || (hs >> extra))
                throw Error("malformed header: '" + line + "'");
            f.n = static_cast<int>(n);
            have_header = true;
            continue;
        }
        if (!have_header) throw Error("clause data before header");
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            long long v;
            std::size_t used = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                throw Error("bad token '" + tok + "'");
            }
            if (used != tok.size()) throw Error("bad token '" + tok + "'");
            if (v == 0) {
                f.clauses.emplace_back(pending);
                f.k = std::max<int>(f.k, static_cast<int>(pending.size()));
                pending.clear();
                continue;
            }
            if (std::llabs(v) > f.n) throw Error("literal " + tok + " out of range (n = " + std::to_string(f.n) + ")");
            pending.push_back(static_cast<Lit>(v));
        }
    }
    if (!have_header) throw Error("malformed header: missing 'p cnf' line");
    if (!pending.empty()) throw Error("missing 0 terminator on last clause");
    return f;
}

CnfFormula read_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dimacs(ss.str());
}

std::string write_dimacs(const CnfFormula& f) {
    std::ostringstream out;
    for (const auto& c : f.comments) out << "c " << c << "\n";
    out << "p cnf " << f.n << " " << f.clauses.size() << "\n";
    for (const auto& c : f.clauses) {
        for (Lit l : c.lits) out << l << " ";
        out << "0\n";
    }
    return out.str();
}

CnfFormula restrict_formula(const CnfFormula& f, const PartialAssignment& rho) {
    CnfFormula g;
    g.n = f.n;
    g.k = f.k;
    g.comments = f.comments;
    for (const auto& c : f.clauses) {
        bool sat = false;
        Clause out;
        for (Lit l : c.lits) {
            int b = rho.get(var_of(l));
            if (b < 0) {
                out.lits.push_back(l);
            } else if ((b == 1) == is_positive(l)) {
                sat = true;
                break;
            }
        }
        if (!sat) g.clauses.push_back(std::move(out));
    }
    return g;
}

bool satisfies(const CnfFormula& f, const Assignment& a) {
    for (const auto& c : f.clauses) {
        bool ok = false;
        for (Lit l : c.lits)
            if ((a.values.at(var_of(l)) == 1) == is_positive(l)) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}

namespace {

struct MaskClause {
    std::uint32_t pos = 0, neg = 0;
};

std::vector<MaskClause> to_masks(const CnfFormula& f) {
    std::vector<MaskClause> out;
    out.reserve(f.clauses.size());
    for (const auto& c : f.clauses) {
        MaskClause m;
        for (Lit l : c.lits) (is_positive(l) ? m.pos : m.neg) |= 1u << (var_of(l) - 1);
        out.push_back(m);
    }
    // Short clauses first: they fail more often, so checks exit earlier.
    std::stable_sort(out.begin(), out.end(), [](const MaskClause& a, const MaskClause& b) {
        return __builtin_popcount(a.pos | a.neg) < __builtin_popcount(b.pos | b.neg);
    });
    return out;
}

template <class Visit>
void enumerate(const CnfFormula& f, int cap, Visit visit) {
    if (f.n > cap) throw Error("enumeration cap exceeded: n = " + std::to_string(f.n) + " > " + std::to_string(cap));
    if (f.n > 31) throw Error("enumeration beyond 31 variables is not supported");
    auto masks = to_masks(f);
    const std::uint32_t full = f.n == 0 ? 0 : (f.n == 32 ? ~0u : ((1u << f.n) - 1));
    const std::uint64_t total = 1ULL << f.n;
    for (std::uint64_t m64 = 0; m64 < total; ++m64) {
        std::uint32_t m = static_cast<std::uint32_t>(m64);
        bool ok = true;
        for (const auto& c : masks)
            if (!((m & c.pos) | (~m & full & c.neg))) {
                ok = false;
                break;
            }
        if (ok && !visit(m)) return;
    }
}

Assignment from_mask(std::uint32_t m, int n) {
    Assignment a;
    a.values.assign(n + 1, 0);
    for (int v = 1; v <= n; ++v) a.values[v] = (m >> (v - 1)) & 1u;
    return a;
}

}  // namespace

std::vector<Assignment> all_satisfying(const CnfFormula& f, int cap) {
    std::vector<Assignment> out;
    enumerate(f, cap, [&](std::uint32_t m) {
        out.push_back(from_mask(m, f.n));
        return true;
    });
    return out;
}

std::size_t count_satisfying(const CnfFormula& f, std::size_t limit, int cap) {
    std::size_t cnt = 0;
    enumerate(f, cap, [&](std::uint32_t) { return ++cnt < limit; });
    return cnt;
}

CnfFormula normalize_all_ones(const CnfFormula& f) {
    auto sols = all_satisfying(f);
    if (sols.size() != 1)
        throw Error("formula is not uniquely satisfiable (" + std::to_string(sols.size()) + " solutions)");
    const auto& a = sols.front();
    CnfFormula g = f;
    for (auto& c : g.clauses) {
        std::vector<Lit> lits;
        for (Lit l : c.lits) lits.push_back(a.values[var_of(l)] ? l : -l);
        c = Clause(lits);
    }
    return g;
}

bool is_critical_for(const Clause& c, VarId x) {
    bool found = false;
    for (Lit l : c.lits) {
        if (var_of(l) == x) {
            if (!is_positive(l)) return false;
            found = true;
        } else if (is_positive(l)) {
            return false;
        }
    }
    return found;
}

std::vector<Clause> critical_clauses(const CnfFormula& f, VarId x) {
    std::vector<Clause> out;
    for (const auto& c : f.clauses)
        if (is_critical_for(c, x)) out.push_back(c);
    return out;
}

Clause canonical_critical_clause(const CnfFormula& f, VarId x) {
    const Clause* best = nullptr;
    for (const auto& c : f.clauses)
        if (is_critical_for(c, x) && (!best || clause_less(c, *best))) best = &c;
    if (!best) throw Error("variable " + std::to_string(x) + " has no critical clause");
    return *best;
}

CnfFormula f_tilde(const CnfFormula& f) {
    if (f.k != 3) throw Error("f_tilde requires k = 3 (got k = " + std::to_string(f.k) + ")");
    CnfFormula g = f;
    std::set<std::vector<Lit>> seen;
    for (const auto& c : f.clauses) seen.insert(c.lits);
    std::vector<const Clause*> threes;
    for (const auto& c : f.clauses)
        if (c.size() == 3) threes.push_back(&c);

    for (std::size_t i = 0; i < threes.size(); ++i) {
        for (std::size_t j = i + 1; j < threes.size(); ++j) {
            const Clause& a = *threes[i];
            const Clause& b = *threes[j];
            std::vector<VarId> vars;
            for (Lit l : a.lits) vars.push_back(var_of(l));
            for (Lit l : b.lits) vars.push_back(var_of(l));
            std::sort(vars.begin(), vars.end());
            vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
            if (vars.size() == 6) continue;  // disjoint pair: only implies its own members
            const int u = static_cast<int>(vars.size());
            auto idx = [&](VarId v) {
                return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
            };
            auto sat = [&](const Clause& c, unsigned m) {
                for (Lit l : c.lits)
                    if ((((m >> idx(var_of(l))) & 1u) != 0) == is_positive(l)) return true;
                return false;
            };
            std::vector<unsigned> models;
            for (unsigned m = 0; m < (1u << u); ++m)
                if (sat(a, m) && sat(b, m)) models.push_back(m);
            for (int p = 0; p < u; ++p)
                for (int q = p + 1; q < u; ++q)
                    for (int r = q + 1; r < u; ++r)
                        for (int pol = 0; pol < 8; ++pol) {
                            std::vector<Lit> lits = {(pol & 1) ? vars[p] : -vars[p],
                                                     (pol & 2) ? vars[q] : -vars[q],
                                                     (pol & 4) ? vars[r] : -vars[r]};
                            Clause cand(lits);
                            bool implied = std::all_of(models.begin(), models.end(),
                                                       [&](unsigned m) { return sat(cand, m); });
                            if (implied && seen.insert(cand.lits).second) g.clauses.push_back(cand);
                        }
        }
    }
    return g;
}

std::vector<VarId> twocc_set(const CnfFormula& f, TwoCCMode mode) {
    const CnfFormula g = (mode == TwoCCMode::FTilde) ? f_tilde(f) : f;
    std::vector<int> count(f.n + 1, 0);
    std::set<std::vector<Lit>> distinct;
    for (const auto& c : g.clauses) {
        if (!distinct.insert(c.lits).second) continue;
        for (Lit l : c.lits)
            if (is_positive(l) && is_critical_for(c, var_of(l))) ++count[var_of(l)];
    }
    std::vector<VarId> out;
    for (VarId v = 1; v <= f.n; ++v)
        if (count[v] >= 2) out.push_back(v);
    return out;
}

namespace {

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased and library-independent.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
}

std::vector<VarId> pick_distinct(Rng& rng, int n, int count, VarId exclude) {
    std::vector<VarId> pool;
    for (VarId v = 1; v <= n; ++v)
        if (v != exclude) pool.push_back(v);
    for (int i = 0; i < count; ++i) {
        auto j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

Clause random_positive_clause(Rng& rng, int n, int width, int min_positive) {
    auto vars = pick_distinct(rng, n, width, 0);
    std::vector<Lit> lits(width);
    for (;;) {
        int pos_count = 0;
        for (int i = 0; i < width; ++i) {
            bool pos = rng() & 1u;
            pos_count += pos ? 1 : 0;
            lits[i] = pos ? vars[i] : -vars[i];
        }
        if (pos_count >= min_positive) break;
    }
    return Clause(lits);
}

}  // namespace

std::string GeneratedInstance::sidecar_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["k"] = k;
    j["seed"] = seed;
    j["attempts"] = attempts;
    j["mode"] = mode == GenMode::SparseCritical ? "sparse" : "mixed";
    j["unique_solution"] = std::vector<int>(n, 1);
    return j.dump();
}

GeneratedInstance generate_unique_instance(int n, int k, double density, std::uint64_t seed, int cap, GenMode mode) {
    if (n < 1) throw Error("n must be positive");
    if (k < 1) throw Error("k must be positive");
    if (n > cap) throw Error("generation cap exceeded: n = " + std::to_string(n) + " > " + std::to_string(cap));
    if (density < 0) throw Error("density must be nonnegative");
    Rng rng(mix64(seed));
    const int width = std::min(k, n);
    const int min_positive = (mode == GenMode::SparseCritical && width >= 2) ? 2 : 1;
    const int base_extra = static_cast<int>(density * n + 0.5);
    const int max_extra = base_extra + std::max(3 * base_extra, 3 * n);
    for (int attempt = 1; attempt <= kGenerationBudget; ++attempt) {
        CnfFormula f;
        f.n = n;
        f.k = k;
        f.comments.push_back("ppszlab gen n=" + std::to_string(n) + " k=" + std::to_string(k) +
                             " seed=" + std::to_string(seed) +
                             (mode == GenMode::SparseCritical ? " sparse" : ""));
        // companions[x] = negated variables of x's planted critical clause
        std::vector<std::vector<VarId>> companions(n + 1);
        auto bad_pair = [&](VarId x, const std::vector<VarId>& nx, VarId v) {
            // Planted clauses of x and v resolve (on v, or on x) into a clause
            // with one positive literal when the remaining negatives overlap.
            const auto& nv = companions[v];
            auto has = [](const std::vector<VarId>& s, VarId a) { return std::find(s.begin(), s.end(), a) != s.end(); };
            bool v_in_x = has(nx, v), x_in_v = has(nv, x);
            // Mutual companions: zeroing both can only be excluded by a clause
            // with positives {x, v}, which would itself be critical.
            if (v_in_x && x_in_v) return true;
            if (!v_in_x && !x_in_v) return false;
            const auto& outer = v_in_x ? nx : nv;
            const auto& inner = v_in_x ? nv : nx;
            VarId pivot = v_in_x ? v : x;
            for (VarId a : outer)
                if (a != pivot && has(inner, a)) return true;
            return false;
        };
        for (VarId x = 1; x <= n; ++x) {
            std::vector<VarId> nx = pick_distinct(rng, n, width - 1, x);
            if (mode == GenMode::SparseCritical) {
                for (int tries = 0; tries < 100; ++tries) {
                    bool clash = false;
                    for (VarId v = 1; v < x && !clash; ++v) clash = bad_pair(x, nx, v);
                    if (!clash) break;
                    nx = pick_distinct(rng, n, width - 1, x);
                }
            }
            companions[x] = nx;
            std::vector<Lit> lits{x};
            for (VarId y : nx) lits.push_back(-y);
            f.clauses.emplace_back(lits);
        }
        // An extra clause whose positive literals are exactly {x, y} with y a
        // companion of x resolves with x's planted clause into a critical one.
        auto makes_critical = [&](const Clause& c) {
            std::vector<VarId> pos;
            for (Lit l : c.lits)
                if (is_positive(l)) pos.push_back(var_of(l));
            if (pos.size() != 2) return false;
            auto comp = [&](VarId a, VarId b) {
                return std::find(companions[a].begin(), companions[a].end(), b) != companions[a].end();
            };
            return comp(pos[0], pos[1]) || comp(pos[1], pos[0]);
        };
        std::set<std::vector<Lit>> seen;
        for (const auto& c : f.clauses) seen.insert(c.lits);
        auto add_random = [&] {
            for (int tries = 0; tries < 64; ++tries) {
                Clause c = random_positive_clause(rng, n, width, min_positive);
                if (mode == GenMode::SparseCritical && makes_critical(c)) continue;
                if (seen.insert(c.lits).second) {
                    f.clauses.push_back(c);
                    return true;
                }
            }
            return false;
        };
        for (int i = 0; i < base_extra; ++i) add_random();
        int extra = base_extra;
        bool unique = count_satisfying(f, 2, cap) == 1;
        while (!unique && extra < max_extra) {
            if (!add_random()) break;
            ++extra;
            unique = count_satisfying(f, 2, cap) == 1;
        }
        // Sparse mode: a companion cycle x -> y -> z -> x leaves a closed zero
        // set that only an all-positive clause can kill without creating a
        // second critical clause. Random draws rarely hit it, so kill such
        // solutions directly: every closed zero set has at least 3 variables.
        for (int fix = 0; !unique && mode == GenMode::SparseCritical && width >= 3 && fix < n; ++fix) {
            std::uint32_t other = 0;
            enumerate(f, cap, [&](std::uint32_t m) {
                if (std::popcount(m) == n) return true;
                other = m;
                return false;
            });
            std::vector<VarId> zeros;
            for (VarId v = 1; v <= n; ++v)
                if (!((other >> (v - 1)) & 1u)) zeros.push_back(v);
            if (static_cast<int>(zeros.size()) < width) break;
            std::shuffle(zeros.begin(), zeros.end(), rng);
            Clause c(std::vector<Lit>(zeros.begin(), zeros.begin() + width));
            if (!seen.insert(c.lits).second) break;
            f.clauses.push_back(c);
            unique = count_satisfying(f, 2, cap) == 1;
        }
        if (unique) {
            GeneratedInstance g;
            g.formula = std::move(f);
            g.n = n;
            g.k = k;
            g.seed = seed;
            g.attempts = attempt;
            g.mode = mode;
            return g;
        }
    }
    throw Error("generation failed after " + std::to_string(kGenerationBudget) + " attempts");
}

}  // namespace ppszlab
