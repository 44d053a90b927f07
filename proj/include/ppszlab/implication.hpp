#pragma once

#include <vector>

#include "ppszlab/formula.hpp"

namespace ppszlab {

constexpr int kSubsetVarCap = 20;
constexpr int kDefaultWCap = 4;

// Brute force: every assignment of vars(G) + {x} satisfying G sets x = b.
bool subset_implies(const std::vector<Clause>& g, VarId x, int b);

enum class ImplySearch {
    Pruned,     // closure search over candidate minimal sets
    Exhaustive  // every subset of size <= w, brute force (reference)
};

struct ImplyOptions {
    int w_cap = kDefaultWCap;
    ImplySearch search = ImplySearch::Pruned;
};

bool w_implies(const CnfFormula& f, int w, VarId x, int b, const ImplyOptions& opt = {});

// Same as w_implies but returns the implying subset (clause indices into f)
// when one exists.
bool w_implies_witness(const CnfFormula& f, int w, VarId x, int b, std::vector<int>* witness,
                       const ImplyOptions& opt = {});

}  // namespace ppszlab
