#include <algorithm>
#include <string>
#include <unordered_map>

#include "ternary_solver.hpp"
#include "wkelab/errors.hpp"
#include "wkelab/trees.hpp"

namespace wkl {

namespace {

using detail::Domain;

struct Item {
    int node;
    Mode k;
};

class Counter {
public:
    explicit Counter(const CountProblem& p) : p_(p), t_(p.tree) {
        const int n = t_.size();
        require(static_cast<int>(p.sigma.size()) == n || p.sigma.empty(),
                "count: sigma must have one entry per node");
        leaves_ = t_.leaves();
        ord_.assign(n, -1);
        for (int i = 0; i < static_cast<int>(leaves_.size()); ++i) ord_[leaves_[i]] = i;
        require(p.pairing.partner.size() == leaves_.size(), "count: pairing size mismatch");
        signs_ = assign_signs(t_);
        const auto& signs = signs_;
        for (int i = 0; i < static_cast<int>(leaves_.size()); ++i) {
            const int j = p.pairing.partner[i];
            if (j < 0) continue;
            require(p.pairing.partner[j] == i, "count: pairing not symmetric");
            require(signs[leaves_[i]] + signs[leaves_[j]] == 0, "count: pair signs must differ");
        }
        has_.assign(leaves_.size(), 0);
        val_.assign(leaves_.size(), Mode{});
        for (const auto& [l, m] : p.coloring.red_leaves) {
            require(l >= 0 && l < static_cast<int>(leaves_.size()), "count: bad red leaf");
            require(p.pairing.partner[l] < 0, "count: only single leaves can be red");
            has_[l] = 1;
            val_[l] = m;
        }
        R_ = window_radius_idx(p.torus, p.theta);
        sub_leaves_.resize(n);
        for (int v = 0; v < n; ++v)
            for (int u : t_.subtree(v))
                if (ord_[u] >= 0) sub_leaves_[v].push_back(ord_[u]);
        in_sub_.assign(n, std::vector<char>(leaves_.size(), 0));
        for (int v = 0; v < n; ++v)
            for (int l : sub_leaves_[v]) in_sub_[v][l] = 1;
        windows_.resize(n);
        for (int v : t_.branching())
            windows_[v] = OmegaWindow::make(p.sigma.empty() ? 0.0 : p.sigma[v], p.T, p.torus);
    }

    std::uint64_t run() {
        const Ball all{Mode{}, R_ * static_cast<double>(leaves_.size())};
        std::vector<Item> work;
        if (p_.coloring.root_red) {
            work.push_back({0, p_.coloring.root_mode});
            return solve(work);
        }
        std::uint64_t total = 0;
        for_each_in_ball(all, p_.torus.d, [&](const Mode& k) {
            work.assign(1, {0, k});
            total += solve(work);
        });
        return total;
    }

private:
    void tick() {
        if (++states_ > p_.budget) throw ResourceGuard("count: search budget exceeded");
    }

    bool closed(int v) const {
        for (int l : sub_leaves_[v]) {
            const int q = p_.pairing.partner[l];
            if (q >= 0 && !in_sub_[v][q] && !has_[q]) return false;
        }
        return true;
    }

    std::uint64_t solve(std::vector<Item>& work) {
        if (work.empty()) return 1;
        tick();
        const Item it = work.back();
        work.pop_back();
        std::uint64_t r = 0;
        if (t_.is_leaf(it.node)) {
            r = leaf(it, work);
        } else if (closed(it.node)) {
            const std::uint64_t c = memo(it);
            if (c) r = c * solve(work);
        } else {
            r = expand(it, work);
        }
        work.push_back(it);
        return r;
    }

    std::uint64_t leaf(const Item& it, std::vector<Item>& work) {
        const int l = ord_[it.node];
        if (!Ball{Mode{}, R_}.contains(it.k, p_.torus.d)) return 0;
        if (has_[l]) return val_[l] == it.k ? solve(work) : 0;
        const int q = p_.pairing.partner[l];
        has_[l] = 1;
        val_[l] = it.k;
        bool set_q = false;
        if (q >= 0 && !has_[q]) {
            has_[q] = 1;
            val_[q] = it.k;
            set_q = true;
        }
        const std::uint64_t r = solve(work);
        if (set_q) has_[q] = 0;
        has_[l] = 0;
        return r;
    }

    Domain child_domain(int c) const {
        if (t_.is_leaf(c)) {
            const int l = ord_[c];
            if (has_[l]) return Domain::at(val_[l]);
            return Domain::in(Ball{Mode{}, R_});
        }
        // Pinned leaves shift the ball; a pair inside the subtree cancels.
        Mode center{};
        int free = 0;
        for (int l : sub_leaves_[c]) {
            if (has_[l]) {
                center = signs_[leaves_[l]] == signs_[c] ? center + val_[l] : center - val_[l];
            } else {
                const int q = p_.pairing.partner[l];
                if (q < 0 || !in_sub_[c][q]) ++free;
            }
        }
        if (free == 0) return Domain::at(center);
        return Domain::in(Ball{center, R_ * free});
    }

    std::uint64_t expand(const Item& it, std::vector<Item>& work) {
        const auto& ch = t_.child[it.node];
        // Leaves are popped first: they pin partners and close sibling subtrees.
        std::array<int, 3> order{0, 1, 2};
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return t_.is_leaf(ch[a]) < t_.is_leaf(ch[b]); });
        std::uint64_t r = 0;
        detail::solve_ternary(
            p_.torus, it.k, child_domain(ch[0]), child_domain(ch[1]), child_domain(ch[2]),
            windows_[it.node], detail::Degeneracy::AllowFull,
            [&](const Mode& c1, const Mode& c2, const Mode& c3) {
                const Mode cm[3] = {c1, c2, c3};
                for (int j : order) work.push_back({ch[j], cm[j]});
                r += solve(work);
                work.resize(work.size() - 3);
            });
        return r;
    }

    std::uint64_t memo(const Item& it) {
        std::string key;
        auto put = [&](int x) { key.append(reinterpret_cast<const char*>(&x), sizeof x); };
        put(it.node);
        for (int j = 0; j < p_.torus.d; ++j) put(it.k.idx[j]);
        for (int l : sub_leaves_[it.node]) {
            put(has_[l]);
            if (has_[l])
                for (int j = 0; j < p_.torus.d; ++j) put(val_[l].idx[j]);
        }
        if (auto f = cache_.find(key); f != cache_.end()) return f->second;
        std::vector<Item> none;
        const std::uint64_t c = expand(it, none);
        cache_.emplace(std::move(key), c);
        return c;
    }

    const CountProblem& p_;
    const TernaryTree& t_;
    std::vector<int> leaves_, ord_, signs_;
    std::vector<char> has_;
    std::vector<Mode> val_;
    double R_ = 0;
    std::vector<std::vector<int>> sub_leaves_;
    std::vector<std::vector<char>> in_sub_;
    std::vector<OmegaWindow> windows_;
    std::unordered_map<std::string, std::uint64_t> cache_;
    std::uint64_t states_ = 0;
};

// Free leaf variables: one per single uncolored leaf and one per pair.
template <class F>
void naive_walk(const CountProblem& p, F&& f) {
    const TernaryTree& t = p.tree;
    const auto leaves = t.leaves();
    const int nl = static_cast<int>(leaves.size());
    std::vector<int> var(nl, -1);
    std::vector<Mode> fixed(nl);
    std::vector<char> is_fixed(nl, 0);
    for (const auto& [l, m] : p.coloring.red_leaves) {
        is_fixed[l] = 1;
        fixed[l] = m;
    }
    int nv = 0;
    for (int l = 0; l < nl; ++l) {
        if (is_fixed[l] || var[l] >= 0) continue;
        var[l] = nv;
        if (p.pairing.partner[l] >= 0) var[p.pairing.partner[l]] = nv;
        ++nv;
    }
    const double R = window_radius_idx(p.torus, p.theta);
    const Ball ball{Mode{}, R};
    std::vector<Mode> pts;
    for_each_in_ball(ball, p.torus.d, [&](const Mode& m) { pts.push_back(m); });
    double space = 1;
    for (int i = 0; i < nv; ++i) space *= static_cast<double>(pts.size());
    if (space > static_cast<double>(p.budget)) throw ResourceGuard("count (naive): too large");

    std::vector<std::size_t> cur(nv, 0);
    std::vector<Mode> k(t.size());
    while (true) {
        bool ok = true;
        for (int l = 0; l < nl && ok; ++l) {
            k[leaves[l]] = is_fixed[l] ? fixed[l] : pts[cur[var[l]]];
            if (is_fixed[l] && !ball.contains(fixed[l], p.torus.d)) ok = false;
        }
        if (ok) {
            for (int v = t.size() - 1; v >= 0; --v)
                if (!t.is_leaf(v)) {
                    const auto& c = t.child[v];
                    k[v] = k[c[0]] - k[c[1]] + k[c[2]];
                }
            if (p.coloring.root_red && k[0] != p.coloring.root_mode) ok = false;
            if (ok && !is_admissible(t, k)) ok = false;
            for (int v : t.branching()) {
                if (!ok) break;
                const auto& c = t.child[v];
                const auto w = OmegaWindow::make(p.sigma.empty() ? 0.0 : p.sigma[v], p.T, p.torus);
                if (!detail::window_ok(p.torus, w, k[v], k[c[0]], k[c[2]])) ok = false;
            }
            if (ok) f(k);
        }
        int i = nv - 1;
        while (i >= 0 && cur[i] + 1 == pts.size()) cur[i--] = 0;
        if (i < 0) break;
        ++cur[i];
    }
}

}  // namespace

std::uint64_t count_strongly_admissible(const CountProblem& prob) {
    Counter c(prob);
    return c.run();
}

std::uint64_t count_strongly_admissible_naive(const CountProblem& prob) {
    std::uint64_t n = 0;
    naive_walk(prob, [&](const std::vector<Mode>&) { ++n; });
    return n;
}

void for_each_assignment(const CountProblem& prob,
                         const std::function<void(const std::vector<Mode>&)>& f) {
    naive_walk(prob, f);
}

}  // namespace wkl
