#include <algorithm>
#include <mutex>

#include "wkelab/errors.hpp"
#include "wkelab/trees.hpp"

namespace wkl {

int TernaryTree::scale() const {
    int n = 0;
    for (int v = 0; v < size(); ++v) n += !is_leaf(v);
    return n;
}

std::vector<int> TernaryTree::leaves() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (is_leaf(v)) out.push_back(v);
    return out;
}

std::vector<int> TernaryTree::branching() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (!is_leaf(v)) out.push_back(v);
    return out;
}

std::vector<int> TernaryTree::subtree(int v) const {
    // Preorder makes every subtree a contiguous block.
    int end = v + 1;
    std::vector<int> stack{v};
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        end = std::max(end, u + 1);
        if (!is_leaf(u))
            for (int c : child[u]) stack.push_back(c);
    }
    std::vector<int> out;
    for (int u = v; u < end; ++u) out.push_back(u);
    return out;
}

std::string TernaryTree::str() const {
    std::string s;
    std::function<void(int)> rec = [&](int v) {
        if (is_leaf(v)) {
            s += '.';
            return;
        }
        s += '(';
        for (int c : child[v]) rec(c);
        s += ')';
    };
    rec(0);
    return s;
}

TernaryTree TernaryTree::leaf() {
    TernaryTree t;
    t.child.push_back({-1, -1, -1});
    t.parent.push_back(-1);
    return t;
}

TernaryTree TernaryTree::join(const TernaryTree& a, const TernaryTree& b, const TernaryTree& c) {
    TernaryTree t;
    t.child.push_back({-1, -1, -1});
    t.parent.push_back(-1);
    int slot = 0;
    for (const TernaryTree* sub : {&a, &b, &c}) {
        const int off = t.size();
        t.child[0][slot++] = off;
        for (int v = 0; v < sub->size(); ++v) {
            auto ch = sub->child[v];
            if (ch[0] >= 0)
                for (int& x : ch) x += off;
            t.child.push_back(ch);
            t.parent.push_back(v == 0 ? 0 : sub->parent[v] + off);
        }
    }
    return t;
}

std::vector<TernaryTree> enumerate_trees(int n) {
    require(n >= 0 && n <= 6, "enumerate_trees: scale must be in [0, 6]");
    static std::mutex m;
    static std::vector<std::vector<TernaryTree>> memo;
    std::lock_guard<std::mutex> lock(m);
    if (memo.empty()) memo.push_back({TernaryTree::leaf()});
    while (static_cast<int>(memo.size()) <= n) {
        const int s = static_cast<int>(memo.size());
        std::vector<TernaryTree> cur;
        for (int n1 = s - 1; n1 >= 0; --n1)
            for (int n2 = s - 1 - n1; n2 >= 0; --n2) {
                const int n3 = s - 1 - n1 - n2;
                for (const auto& a : memo[n1])
                    for (const auto& b : memo[n2])
                        for (const auto& c : memo[n3]) cur.push_back(TernaryTree::join(a, b, c));
            }
        memo.push_back(std::move(cur));
    }
    return memo[n];
}

std::uint64_t fuss_catalan(int n) {
    // C(3n, n) / (2n + 1), exact in 64 bits for the scales used here.
    std::uint64_t c = 1;
    for (int i = 1; i <= n; ++i) c = c * static_cast<std::uint64_t>(2 * n + i) / i;
    return c / static_cast<std::uint64_t>(2 * n + 1);
}

std::vector<int> assign_signs(const TernaryTree& t) {
    std::vector<int> s(t.size(), 0);
    s[0] = +1;
    for (int v = 0; v < t.size(); ++v) {
        if (t.is_leaf(v)) continue;
        s[t.child[v][0]] = s[v];
        s[t.child[v][1]] = -s[v];
        s[t.child[v][2]] = s[v];
    }
    return s;
}

int Pairing::pairs() const {
    int p = 0;
    for (int x : partner) p += x >= 0;
    return p / 2;
}

std::vector<int> Pairing::singles() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(partner.size()); ++i)
        if (partner[i] < 0) out.push_back(i);
    return out;
}

namespace {
void match(const std::vector<int>& ls, std::vector<int>& partner, std::vector<char>& done,
           int from, std::vector<Pairing>& out) {
    const int n = static_cast<int>(ls.size());
    while (from < n && done[from]) ++from;
    if (from == n) {
        out.push_back(Pairing{partner});
        return;
    }
    done[from] = 1;
    match(ls, partner, done, from + 1, out);
    for (int j = from + 1; j < n; ++j) {
        if (done[j] || ls[j] + ls[from] != 0) continue;
        done[j] = 1;
        partner[from] = j;
        partner[j] = from;
        match(ls, partner, done, from + 1, out);
        partner[from] = partner[j] = -1;
        done[j] = 0;
    }
    done[from] = 0;
}
}  // namespace

std::vector<Pairing> enumerate_pairings(const TernaryTree& t, const std::vector<int>& signs) {
    require(t.scale() <= 5, "enumerate_pairings: scale must be <= 5");
    std::vector<int> ls;
    for (int v : t.leaves()) ls.push_back(signs[v]);
    std::vector<int> partner(ls.size(), -1);
    std::vector<char> done(ls.size(), 0);
    std::vector<Pairing> out;
    match(ls, partner, done, 0, out);
    return out;
}

std::vector<double> node_omegas(const TernaryTree& t, const std::vector<Mode>& k,
                                const TorusSpec& torus) {
    std::vector<double> om(t.size(), 0.0);
    for (int v : t.branching()) {
        const auto& c = t.child[v];
        om[v] = omega(k[c[0]], k[c[1]], k[c[2]], k[v], torus);
    }
    return om;
}

std::vector<double> node_q(const TernaryTree& t, const std::vector<double>& omegas,
                           const std::vector<int>& dflag) {
    std::vector<double> q(t.size(), 0.0);
    for (int v = t.size() - 1; v >= 0; --v) {
        if (t.is_leaf(v)) continue;
        const auto& c = t.child[v];
        q[v] = dflag[c[0]] * q[c[0]] - dflag[c[1]] * q[c[1]] + dflag[c[2]] * q[c[2]] + omegas[v];
    }
    return q;
}

bool is_admissible(const TernaryTree& t, const std::vector<Mode>& k) {
    for (int v : t.branching()) {
        const auto& c = t.child[v];
        if (k[c[0]] - k[c[1]] + k[c[2]] != k[v]) return false;
        const bool deg = k[v] == k[c[0]] || k[v] == k[c[2]];
        if (deg && !(k[v] == k[c[0]] && k[v] == k[c[1]] && k[v] == k[c[2]])) return false;
    }
    return true;
}

}  // namespace wkl
