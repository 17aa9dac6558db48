#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace wkl::detail {

struct GaussRule {
    std::vector<double> x, w;  // on [-1, 1]
};

// Newton on P_n from the Chebyshev guesses; fine for n up to a few hundred.
inline GaussRule make_gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1 - z * z) * dp * dp);
    }
    return r;
}

inline const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

/// Nodes and weights of an n-point rule mapped onto [a, b].
template <class F>
void gl_panel(double a, double b, int n, F&& f) {
    const GaussRule& r = gauss_legendre(n);
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) f(m + h * r.x[i], h * r.w[i]);
}

}  // namespace wkl::detail
