#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wkelab/lattice.hpp"

namespace wkl {

/// Ternary tree stored in preorder: node 0 is the root and every branching
/// node's children appear after it, left to right.
struct TernaryTree {
    std::vector<std::array<int, 3>> child;  // {-1,-1,-1} for leaves
    std::vector<int> parent;                // -1 for the root

    int size() const { return static_cast<int>(child.size()); }
    bool is_leaf(int v) const { return child[v][0] < 0; }
    int scale() const;
    /// Leaves left to right.
    std::vector<int> leaves() const;
    /// Branching nodes in preorder.
    std::vector<int> branching() const;
    /// Nodes of the subtree at v, v included.
    std::vector<int> subtree(int v) const;
    /// Nested notation: "." for a leaf, "(ABC)" for a branching node.
    std::string str() const;

    static TernaryTree leaf();
    static TernaryTree join(const TernaryTree& a, const TernaryTree& b, const TernaryTree& c);
};

/// Every ternary tree of scale n exactly once, ordered by the scales of the
/// root's children (lexicographic), then recursively.  n <= 6.
std::vector<TernaryTree> enumerate_trees(int n);

/// (1 / (2n + 1)) C(3n, n).
std::uint64_t fuss_catalan(int n);

/// +1 / -1 per node.
std::vector<int> assign_signs(const TernaryTree& t);

/// Partner leaf ordinal per leaf ordinal, -1 for single leaves.
struct Pairing {
    std::vector<int> partner;

    int pairs() const;
    std::vector<int> singles() const;  // leaf ordinals
};

/// All partial matchings of opposite-sign leaves, the empty one first.
/// Scale <= 5.
std::vector<Pairing> enumerate_pairings(const TernaryTree& t, const std::vector<int>& signs);

/// Red nodes with their fixed modes.  Only single leaves and the root may be
/// red.
struct Coloring {
    bool root_red = false;
    Mode root_mode;
    std::vector<std::pair<int, Mode>> red_leaves;  // (leaf ordinal, mode)

    int r() const { return static_cast<int>(red_leaves.size()) + (root_red ? 1 : 0); }
};

struct CountProblem {
    TernaryTree tree;
    Pairing pairing;
    Coloring coloring;
    std::vector<double> sigma;  // per node id; only branching entries are read
    double T = 1.0;
    double theta = 0.1;
    TorusSpec torus;
    /// Cap on visited search states; exceeded -> ResourceGuard.
    std::uint64_t budget = 4'000'000'000ULL;
};

/// Exact number of strongly admissible assignments satisfying every omega
/// window.  Backtracks top-down from the root and memoizes subtrees whose
/// leaves no longer constrain anything outside them.
std::uint64_t count_strongly_admissible(const CountProblem& prob);

/// Same count by plain leaf-by-leaf enumeration; the reference for tests.
std::uint64_t count_strongly_admissible_naive(const CountProblem& prob);

/// Visits every strongly admissible assignment (mode per node id).  For small
/// instances only.
void for_each_assignment(const CountProblem& prob,
                         const std::function<void(const std::vector<Mode>&)>& f);

/// Omega_n per node (0 at leaves) and q_n from the recursion with flags d
/// (per node id, read at non-root nodes).
std::vector<double> node_omegas(const TernaryTree& t, const std::vector<Mode>& k,
                                const TorusSpec& torus);
std::vector<double> node_q(const TernaryTree& t, const std::vector<double>& omegas,
                           const std::vector<int>& dflag);

/// Validates admissibility of a full assignment (momentum and degeneracy).
bool is_admissible(const TernaryTree& t, const std::vector<Mode>& k);

}  // namespace wkl
