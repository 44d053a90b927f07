#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppszlab/numeric.hpp"

namespace ppszlab {

using VarId = int;  // 1-based

// DIMACS-style literal: +v or -v.
using Lit = int;

inline VarId var_of(Lit l) { return l < 0 ? -l : l; }
inline bool is_positive(Lit l) { return l > 0; }

// Sort key used for clause-internal order and lexicographic comparisons:
// variable index first, negative before positive.
inline bool lit_less(Lit a, Lit b) {
    VarId va = var_of(a), vb = var_of(b);
    return va != vb ? va < vb : a < b;
}

struct Clause {
    std::vector<Lit> lits;  // sorted by lit_less, no repeated variable

    Clause() = default;
    explicit Clause(std::vector<Lit> l);  // sorts; throws on repeated variable

    std::size_t size() const { return lits.size(); }
    bool empty() const { return lits.empty(); }
    bool contains(Lit l) const;
    bool mentions(VarId v) const;
    bool operator==(const Clause& o) const { return lits == o.lits; }
    std::string to_string() const;
};

// Lexicographic order on the sorted literal sequence.
bool clause_less(const Clause& a, const Clause& b);

struct CnfFormula {
    int n = 0;
    int k = 0;
    std::vector<Clause> clauses;
    std::vector<std::string> comments;  // DIMACS `c` lines, kept verbatim on write

    bool has_empty_clause() const;
};

// values[v] for v in 1..n; index 0 unused.
struct Assignment {
    std::vector<std::uint8_t> values;
    static Assignment all_ones(int n) {
        Assignment a{std::vector<std::uint8_t>(n + 1, 1)};
        a.values[0] = 0;
        return a;
    }
    int n() const { return static_cast<int>(values.size()) - 1; }
    bool operator==(const Assignment& o) const { return values == o.values; }
};

// values[v] = -1 unassigned, else 0/1.
struct PartialAssignment {
    std::vector<std::int8_t> values;
    explicit PartialAssignment(int n = 0) : values(n + 1, -1) {}
    void set(VarId v, int b) { values.at(v) = static_cast<std::int8_t>(b); }
    int get(VarId v) const { return v < static_cast<int>(values.size()) ? values[v] : -1; }
};

CnfFormula parse_dimacs(const std::string& text);
CnfFormula read_dimacs_file(const std::string& path);
std::string write_dimacs(const CnfFormula& f);

CnfFormula restrict_formula(const CnfFormula& f, const PartialAssignment& rho);
bool satisfies(const CnfFormula& f, const Assignment& a);

constexpr int kEnumerationCap = 24;
std::vector<Assignment> all_satisfying(const CnfFormula& f, int cap = kEnumerationCap);
// Stops after `limit` solutions; cheaper uniqueness test.
std::size_t count_satisfying(const CnfFormula& f, std::size_t limit, int cap = kEnumerationCap);

CnfFormula normalize_all_ones(const CnfFormula& f);

std::vector<Clause> critical_clauses(const CnfFormula& f, VarId x);
bool is_critical_for(const Clause& c, VarId x);
Clause canonical_critical_clause(const CnfFormula& f, VarId x);

CnfFormula f_tilde(const CnfFormula& f);

enum class TwoCCMode { FTilde, Plain };
std::vector<VarId> twocc_set(const CnfFormula& f, TwoCCMode mode);

// Mixed: extra clauses have any polarity pattern with at least one positive
// literal, so many of them are critical. SparseCritical: extras carry at least
// two positive literals, so each variable keeps only its planted critical clause.
enum class GenMode { Mixed, SparseCritical };

struct GeneratedInstance {
    CnfFormula formula;
    int n = 0, k = 0;
    std::uint64_t seed = 0;
    int attempts = 0;
    GenMode mode = GenMode::Mixed;
    std::string sidecar_json() const;
};

constexpr int kGenerationBudget = 200;

GeneratedInstance generate_unique_instance(int n, int k, double density, std::uint64_t seed,
                                           int cap = kEnumerationCap, GenMode mode = GenMode::Mixed);

}  // namespace ppszlab
