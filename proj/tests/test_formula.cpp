#include "doctest.h"

#include "ppszlab/formula.hpp"

#include <algorithm>

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

bool has_clause(const CnfFormula& f, std::vector<Lit> lits) {
    Clause c(std::move(lits));
    return std::find(f.clauses.begin(), f.clauses.end(), c) != f.clauses.end();
}

bool contains(const std::vector<VarId>& v, VarId x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

TEST_CASE("parse_dimacs basic instances") {
    auto f = parse_dimacs("p cnf 1 1\n1 0\n");
    CHECK(f.n == 1);
    REQUIRE(f.clauses.size() == 1);
    CHECK(f.clauses[0].lits == std::vector<Lit>{1});

    auto g = parse_dimacs("c hello\np cnf 3 1\n1 -2 -3 0\n");
    REQUIRE(g.clauses.size() == 1);
    CHECK(g.k == 3);
    CHECK(g.clauses[0].lits == std::vector<Lit>{1, -2, -3});
    CHECK(g.comments.size() == 1);
}

TEST_CASE("parse_dimacs rejects malformed input") {
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 -1 0\n"), Error);
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), Error);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), Error);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), Error);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), Error);
}

TEST_CASE("write_dimacs round trips") {
    auto f = parse_dimacs("c a comment\np cnf 4 3\n1 -2 0\n-3 4 2 0\n4 0\n");
    auto g = parse_dimacs(write_dimacs(f));
    CHECK(g.n == f.n);
    REQUIRE(g.clauses.size() == f.clauses.size());
    for (std::size_t i = 0; i < f.clauses.size(); ++i) CHECK(g.clauses[i] == f.clauses[i]);
    CHECK(g.comments == f.comments);
}

TEST_CASE("restrict_formula") {
    auto f = make(2, {{1, -2}});
    PartialAssignment y1(2);
    y1.set(2, 1);
    auto r = restrict_formula(f, y1);
    REQUIRE(r.clauses.size() == 1);
    CHECK(r.clauses[0].lits == std::vector<Lit>{1});

    PartialAssignment y0(2);
    y0.set(2, 0);
    CHECK(restrict_formula(f, y0).clauses.empty());

    auto g = make(2, {{1, -2}, {2}});
    PartialAssignment both(2);
    both.set(1, 0);
    both.set(2, 0);
    CHECK(restrict_formula(g, both).has_empty_clause());
}

TEST_CASE("all_satisfying") {
    auto sols = all_satisfying(make(1, {{1}}));
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].values[1] == 1);

    CnfFormula empty;
    empty.n = 2;
    CHECK(all_satisfying(empty).size() == 4);
    CHECK(all_satisfying(make(1, {{1}, {-1}})).empty());

    CnfFormula big;
    big.n = 25;
    CHECK_THROWS_AS(all_satisfying(big), Error);
}

TEST_CASE("normalize_all_ones") {
    // unique solution x1 = 0, x2 = 1
    auto f = make(2, {{-1}, {2}});
    auto g = normalize_all_ones(f);
    auto sols = all_satisfying(g);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == Assignment::all_ones(2));
    CHECK(g.clauses[0].lits == std::vector<Lit>{1});

    auto h = make(2, {{1}, {2, -1}});
    auto hn = normalize_all_ones(h);
    for (std::size_t i = 0; i < h.clauses.size(); ++i) CHECK(hn.clauses[i] == h.clauses[i]);

    CHECK_THROWS_AS(normalize_all_ones(make(2, {{1}})), Error);
}

TEST_CASE("critical clauses") {
    // x = 1, y = 2, z = 3
    auto f = make(3, {{1, -2, -3}, {2, -1}, {3}});
    auto cx = critical_clauses(f, 1);
    REQUIRE(cx.size() == 1);
    CHECK(cx[0] == Clause({1, -2, -3}));
    auto cz = critical_clauses(f, 3);
    REQUIRE(cz.size() == 1);
    CHECK(cz[0] == Clause({3}));

    auto g = make(3, {{1, -2}, {1, -3}, {2}, {3}});
    CHECK(critical_clauses(g, 1).size() == 2);
}

TEST_CASE("canonical critical clause uses lexicographic order") {
    auto f = make(4, {{1, -2, -4}, {1, -2, -3}, {2}, {3}, {4}});
    CHECK(canonical_critical_clause(f, 1) == Clause({1, -2, -3}));
    auto g = make(5, {{1, -5}, {1, -2}, {2}, {5}});
    CHECK(canonical_critical_clause(g, 1) == Clause({1, -2}));
    CHECK(canonical_critical_clause(g, 2) == Clause({2}));
    CHECK_THROWS_AS(canonical_critical_clause(make(2, {{1}}), 2), Error);
}

TEST_CASE("f_tilde adds resolvent-style 3-clauses") {
    // x = 1, y = 2, z = 3, a = 4
    auto f = make(4, {{1, -2, -3}, {4, -1, -2}});
    auto g = f_tilde(f);
    CHECK(has_clause(g, {4, -2, -3}));
    // Every added clause is implied by F.
    auto sols = all_satisfying(f);
    for (const auto& c : g.clauses) {
        CnfFormula one;
        one.n = 4;
        one.clauses = {c};
        for (const auto& s : sols) CHECK(satisfies(one, s));
    }

    auto disjoint = make(6, {{1, -2, -3}, {4, -5, -6}});
    CHECK(f_tilde(disjoint).clauses.size() == 2);

    auto two = make(2, {{1, -2}});
    two.k = 2;
    CHECK_THROWS_AS(f_tilde(two), Error);
}

TEST_CASE("twocc_set") {
    auto lone = make(3, {{1, -2, -3}, {2}, {3}});
    CHECK(twocc_set(lone, TwoCCMode::Plain).empty());

    // x = 1 with (x, y', z') and (x, u', v')
    auto two = make(5, {{1, -2, -3}, {1, -4, -5}, {2}, {3}, {4}, {5}});
    CHECK(contains(twocc_set(two, TwoCCMode::Plain), 1));

    // a = 4 has one critical clause in F; the second appears only in F~.
    auto f = make(4, {{1, -2, -3}, {4, -1, -2}});
    CHECK_FALSE(contains(twocc_set(f, TwoCCMode::Plain), 4));
    CHECK(contains(twocc_set(f, TwoCCMode::FTilde), 4));
}

TEST_CASE("generate_unique_instance") {
    auto one = generate_unique_instance(1, 3, 4.0, 1);
    auto sols = all_satisfying(one.formula);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == Assignment::all_ones(1));

    for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
        auto g = generate_unique_instance(3, 3, 4.0, seed);
        auto s = all_satisfying(g.formula);
        REQUIRE(s.size() == 1);
        CHECK(s[0] == Assignment::all_ones(3));
        CHECK(g.formula.k <= 3);
    }
    auto a = generate_unique_instance(10, 3, 5.0, 42);
    auto b = generate_unique_instance(10, 3, 5.0, 42);
    CHECK(write_dimacs(a.formula) == write_dimacs(b.formula));
    CHECK_THROWS_AS(generate_unique_instance(25, 3, 4.0, 1), Error);
}

TEST_CASE("sparse generation keeps one critical clause per variable") {
    int ftilde_empty = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = generate_unique_instance(12, 3, 3.0, seed, kEnumerationCap, GenMode::SparseCritical);
        CHECK(g.mode == GenMode::SparseCritical);
        REQUIRE(all_satisfying(g.formula).size() == 1);
        for (VarId x = 1; x <= g.formula.n; ++x) CHECK(critical_clauses(g.formula, x).size() == 1);
        CHECK(twocc_set(g.formula, TwoCCMode::Plain).empty());
        if (twocc_set(g.formula, TwoCCMode::FTilde).empty()) ++ftilde_empty;
    }
    CHECK(ftilde_empty >= 8);
}
