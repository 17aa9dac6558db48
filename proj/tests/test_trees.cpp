#include <set>

#include "doctest.h"
#include "wkelab/trees.hpp"

using namespace wkl;

TEST_CASE("tree enumeration") {
    const std::uint64_t expect[] = {1, 1, 3, 12, 55, 273, 1428};
    for (int n = 0; n <= 6; ++n) {
        const auto ts = enumerate_trees(n);
        CHECK(ts.size() == expect[n]);
        CHECK(fuss_catalan(n) == expect[n]);
        std::set<std::string> seen;
        for (const auto& t : ts) {
            CHECK(t.scale() == n);
            CHECK(t.size() == 3 * n + 1);
            CHECK(static_cast<int>(t.leaves().size()) == 2 * n + 1);
            seen.insert(t.str());
        }
        CHECK(seen.size() == ts.size());
    }
    CHECK(enumerate_trees(1)[0].str() == "(...)");
}

TEST_CASE("tree structure") {
    const auto L = TernaryTree::leaf();
    const auto t = TernaryTree::join(TernaryTree::join(L, L, L), L, L);
    CHECK(t.str() == "((...)..)");
    CHECK(t.parent[0] == -1);
    for (int v = 1; v < t.size(); ++v) {
        const auto& c = t.child[t.parent[v]];
        CHECK((c[0] == v || c[1] == v || c[2] == v));
    }
    CHECK(t.subtree(1).size() == 4);
    CHECK(t.branching() == std::vector<int>{0, 1});
    const auto s = assign_signs(t);
    // leaves of (( . . . ) . .) : + - + - +
    std::vector<int> ls;
    for (int v : t.leaves()) ls.push_back(s[v]);
    CHECK(ls == std::vector<int>{1, -1, 1, -1, 1});
}

TEST_CASE("pairings") {
    const auto t1 = enumerate_trees(1)[0];
    const auto p1 = enumerate_pairings(t1, assign_signs(t1));
    // signs + - + : empty, (0,1), (1,2)
    CHECK(p1.size() == 3);
    CHECK(p1[0].pairs() == 0);
    for (const auto& p : enumerate_pairings(enumerate_trees(2)[0], assign_signs(enumerate_trees(2)[0]))) {
        const auto s = assign_signs(enumerate_trees(2)[0]);
        const auto lv = enumerate_trees(2)[0].leaves();
        for (int i = 0; i < 5; ++i)
            if (p.partner[i] >= 0) {
                CHECK(p.partner[p.partner[i]] == i);
                CHECK(s[lv[i]] + s[lv[p.partner[i]]] == 0);
            }
    }
}

TEST_CASE("admissibility") {
    const auto t = enumerate_trees(1)[0];
    const Mode a = make_mode({1, 0}), b = make_mode({0, 1}), c = make_mode({2, 2});
    CHECK(is_admissible(t, {a - b + c, a, b, c}));
    CHECK(!is_admissible(t, {a - b + c + a, a, b, c}));
    // k1 = k with k2 = k3 != k is excluded, the fully degenerate one is not.
    CHECK(!is_admissible(t, {a, a, b, b}));
    CHECK(is_admissible(t, {a, a, a, a}));
}
