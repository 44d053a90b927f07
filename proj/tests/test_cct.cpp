#include "doctest.h"

#include "ppszlab/cct.hpp"
#include "ppszlab/gw.hpp"
#include "ppszlab/numeric.hpp"

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

// root -> two safe leaves
LabeledTree cherry() { return complete_tree(3, 1); }

}  // namespace

TEST_CASE("build_cct hand trace") {
    // x = 1, y = 2, z = 3; unique solution all-ones
    auto f = make(3, {{1, -2, -3}, {2, -1}, {3, -1}, {2}, {3}});
    auto t = build_cct(f, 1, 2);
    REQUIRE(t.root().clause);
    CHECK(*t.root().clause == Clause({1, -2, -3}));
    REQUIRE(t.root().children.size() == 2);
    const auto& y = t.nodes[t.root().children[0]];
    CHECK(y.label == Label::var(2));
    CHECK(t.nodes[t.root().children[1]].label == Label::var(3));
    // alpha zeroes x and y: (y or not x) holds, the unit (y) is the first violated clause
    REQUIRE(y.clause);
    CHECK(*y.clause == Clause({2}));
    CHECK(y.children.empty());
    CHECK(y.kind == LeafKind::Unsafe);
    CHECK(t.path_labels_distinct());

    auto leaf = build_cct(f, 1, 0);
    CHECK(leaf.size() == 1);
    CHECK_FALSE(leaf.root().clause);
    CHECK(leaf.root().kind == LeafKind::Safe);

    CHECK_THROWS_AS(build_cct(make(2, {{1, 2}}), 1, 2), Error);
}

TEST_CASE("built trees are well formed on generated instances") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto f = generate_unique_instance(10, 3, 4.5, seed).formula;
        for (VarId x = 1; x <= f.n; ++x) {
            auto t = build_cct(f, x, 3);
            CHECK(t.path_labels_distinct());
            for (const auto& nd : t.nodes) {
                CHECK(nd.children.size() <= 2);
                if (nd.depth == 3) CHECK(nd.kind == LeafKind::Safe);
                if (nd.depth < 3 && nd.children.empty()) CHECK(nd.kind == LeafKind::Unsafe);
            }
        }
    }
}

TEST_CASE("mark_canonical") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto f = generate_unique_instance(10, 3, 4.5, seed).formula;
        auto twocc = twocc_set(f, TwoCCMode::FTilde);
        for (VarId x = 1; x <= f.n; ++x) {
            auto t = build_cct(f, x, 3);
            mark_canonical(t, f, twocc);
            bool root_in = std::find(twocc.begin(), twocc.end(), x) != twocc.end();
            for (const auto& nd : t.nodes) {
                if (root_in) CHECK_FALSE(nd.canonical);
                if (nd.parent >= 0 && !t.nodes[nd.parent].canonical) CHECK_FALSE(nd.canonical);
                if (nd.canonical && nd.clause) CHECK(*nd.clause == canonical_critical_clause(f, nd.label.as_var()));
            }
        }
    }

    // With TwoCC empty and canonical labels throughout, every node is canonical.
    auto f = make(3, {{1, -2, -3}, {2}, {3}});
    auto t = build_cct(f, 1, 2);
    mark_canonical(t, f, {});
    for (const auto& nd : t.nodes) CHECK(nd.canonical);
    mark_canonical(t, f, {1});
    for (const auto& nd : t.nodes) CHECK_FALSE(nd.canonical);
}

TEST_CASE("to_labeled keeps leaf kinds and drops clauses") {
    auto f = make(3, {{1, -2, -3}, {2, -1}, {3, -1}, {2}, {3}});
    auto l = to_labeled(build_cct(f, 1, 2));
    CHECK(l.root().kind == LeafKind::Internal);
    for (const auto& nd : l.nodes) CHECK_FALSE(nd.clause);
    auto deep = to_labeled(build_cct(make(3, {{1, -2, -3}, {2}, {3}}), 1, 1));
    CHECK(deep.safe_leaf_count() == 2);
}

TEST_CASE("complete_tree sizes") {
    auto t1 = complete_tree(3, 1);
    CHECK(t1.size() == 3);
    CHECK(t1.labels().size() == 3);
    CHECK(t1.safe_leaf_count() == 2);
    CHECK(complete_tree(3, 3).size() == 15);
    CHECK(complete_tree(5, 2).size() == 21);
}

TEST_CASE("cut_event definition") {
    auto t = cherry();
    Placement pi;
    pi.set(t.nodes[0].label, 0.9);
    pi.set(t.nodes[1].label, 0.3);
    pi.set(t.nodes[2].label, 0.5);
    CHECK(cut_event(t, pi, 0.6, false));
    pi.set(t.nodes[2].label, 0.7);
    CHECK_FALSE(cut_event(t, pi, 0.6, false));
    pi.set(t.nodes[0].label, 0.1);
    CHECK_FALSE(cut_event(t, pi, 0.6, false));  // the root never dies in the strong event
    CHECK(cut_event(t, pi, 0.6, true));

    LabeledTree no_safe;
    no_safe.nodes.push_back(TreeNode{Label::fresh(0), -1, 0, {}, false, LeafKind::Unsafe, std::nullopt});
    Placement p0;
    p0.set(Label::fresh(0), 0.99);
    CHECK(cut_event(no_safe, p0, 0.1, false));
}

TEST_CASE("cut_probability_mc against the branching process") {
    UniformSampler u;
    CutOptions opt;
    opt.trials = 20000;
    opt.seed = 3;
    auto zero = cut_probability_mc(complete_tree(3, 6), u, 0.0, opt);
    CHECK(zero.mean == 0.0);

    auto quarter = cut_probability_mc(complete_tree(3, 12), u, 0.25, opt);
    CHECK(std::abs(quarter.mean - 1.0 / 9) <= 3 * quarter.stderr_ + 2e-3);

    auto high = cut_probability_mc(complete_tree(3, 12), u, 0.75, opt);
    CHECK(high.mean > 0.99);

    CutOptions threaded = opt;
    threaded.threads = 3;
    threaded.trials = 3000;
    opt.trials = 3000;
    CHECK(cut_probability_mc(complete_tree(3, 8), u, 0.3, opt).mean ==
          cut_probability_mc(complete_tree(3, 8), u, 0.3, threaded).mean);
}

TEST_CASE("label_density") {
    LabeledTree t;
    t.nodes.push_back(TreeNode{Label::var(1), -1, 0, {1}, true, LeafKind::Internal, std::nullopt});
    t.nodes.push_back(TreeNode{Label::var(2), 0, 1, {}, true, LeafKind::Safe, std::nullopt});
    t.height = 1;
    // (1/2)^2 / (3/4)^3 * (1/4)^2 = 1/27
    CHECK(label_density(Label::var(2), t, 0.25) == doctest::Approx(1.0 / 27).epsilon(1e-12));
    CHECK(label_density(Label::var(7), t, 0.25) == 0.0);

    LabeledTree two = t;
    two.nodes[0].children.push_back(2);
    two.nodes.push_back(TreeNode{Label::var(2), 0, 1, {}, true, LeafKind::Safe, std::nullopt});
    CHECK(label_density(Label::var(2), two, 0.25) == doctest::Approx(2.0 / 27).epsilon(1e-12));

    double direct = integrate([&](double r) { return label_density(Label::var(2), t, r); }, 0.0, 0.5 - 1e-12);
    CHECK(label_density_integrated(Label::var(2), t) == doctest::Approx(direct).epsilon(1e-8));
    CHECK_THROWS_AS(label_density(Label::var(2), t, 0.5), Error);
}

TEST_CASE("similarity_check") {
    int pairs = 0, matched = 0;
    for (std::uint64_t seed = 1; seed <= 16; ++seed) {
        // sparse instances keep TwoCC small, so canonical paths exist
        auto mode = seed % 2 ? GenMode::SparseCritical : GenMode::Mixed;
        auto f = generate_unique_instance(12, 3, 3.0, seed, kEnumerationCap, mode).formula;
        auto twocc = twocc_set(f, TwoCCMode::FTilde);
        for (VarId x = 1; x <= f.n; ++x) {
            auto t = build_cct(f, x, 3);
            mark_canonical(t, f, twocc);
            for (std::size_t u = 0; u < t.size(); ++u) {
                auto self = similarity_check(f, t, static_cast<int>(u), static_cast<int>(u), twocc);
                if (t.nodes[u].canonical) CHECK(self.matched);
                for (std::size_t v = u + 1; v < t.size(); ++v) {
                    auto path = t.path_to(static_cast<int>(v));
                    if (std::find(path.begin(), path.end(), static_cast<int>(u)) == path.end()) continue;
                    auto rep = similarity_check(f, t, static_cast<int>(u), static_cast<int>(v), twocc);
                    if (!t.nodes[v].canonical) {
                        CHECK_FALSE(rep.precondition_ok);
                        continue;
                    }
                    ++pairs;
                    if (rep.matched) ++matched;
                    CHECK_MESSAGE(rep.matched, rep.note);
                }
            }
        }
    }
    CHECK(pairs > 0);
    CHECK(matched == pairs);
}
