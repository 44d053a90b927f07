#include "doctest.h"

#include "ppszlab/implication.hpp"

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

}  // namespace

TEST_CASE("subset_implies") {
    CHECK(subset_implies({Clause({1})}, 1, 1));
    CHECK_FALSE(subset_implies({Clause({1})}, 1, 0));
    CHECK(subset_implies({Clause({1, -2, -3}), Clause({2}), Clause({3})}, 1, 1));
    // x = 0, y = 1, z = 0 satisfies both clauses
    CHECK_FALSE(subset_implies({Clause({1, -2, -3}), Clause({2})}, 1, 1));
    // x not mentioned: nothing forces it
    CHECK_FALSE(subset_implies({Clause({2})}, 1, 1));
}

TEST_CASE("w_implies small cases") {
    auto unit = make(3, {{2, 3}, {1}});
    CHECK(w_implies(unit, 1, 1, 1));

    auto chain = make(3, {{1, -2, -3}, {2}, {3}});
    CHECK(w_implies(chain, 3, 1, 1));
    CHECK_FALSE(w_implies(chain, 2, 1, 1));
    std::vector<int> witness;
    REQUIRE(w_implies_witness(chain, 3, 1, 1, &witness));
    CHECK(witness.size() == 3);

    // ex falso
    auto contra = make(3, {{2}, {-2}, {1, 3}});
    CHECK(w_implies(contra, 2, 1, 0));
    CHECK(w_implies(contra, 2, 1, 1));
    CHECK_FALSE(w_implies(contra, 1, 1, 1));
}

TEST_CASE("pruned search agrees with exhaustive search") {
    ImplyOptions ex;
    ex.search = ImplySearch::Exhaustive;
    int checked = 0, positives = 0, unsat_cases = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto g = generate_unique_instance(7, 3, 4.0, seed);
        // Restrict two variables, sometimes against the solution, so that
        // both short implications and unsatisfiable subsets show up.
        Rng rng(seed);
        PartialAssignment rho(g.formula.n);
        for (int i = 0; i < 2; ++i) rho.set(static_cast<VarId>(rng() % 7) + 1, static_cast<int>(rng() % 2));
        auto f = restrict_formula(g.formula, rho);
        if (all_satisfying(f).empty()) ++unsat_cases;
        for (int w = 1; w <= 4; ++w)
            for (VarId x = 1; x <= f.n; ++x)
                for (int b = 0; b < 2; ++b) {
                    std::vector<int> witness;
                    bool fast = w_implies_witness(f, w, x, b, &witness);
                    CHECK(fast == w_implies(f, w, x, b, ex));
                    if (fast) {
                        ++positives;
                        CHECK(static_cast<int>(witness.size()) <= w);
                        std::vector<Clause> sub;
                        for (int i : witness) sub.push_back(f.clauses[i]);
                        CHECK(subset_implies(sub, x, b));
                    }
                    ++checked;
                }
    }
    CHECK(checked == 40 * 4 * 7 * 2);
    CHECK(positives > 0);
    CHECK(unsat_cases > 0);
}

TEST_CASE("w bounds are validated") {
    auto f = make(1, {{1}});
    CHECK_THROWS_AS(w_implies(f, 0, 1, 1), Error);
    CHECK_THROWS_AS(w_implies(f, kDefaultWCap + 1, 1, 1), Error);
    CHECK_THROWS_AS(w_implies(f, 1, 1, 2), Error);
}
