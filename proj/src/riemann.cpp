#include <algorithm>
#include <cmath>

#include "wkelab/errors.hpp"
#include "wkelab/parallel.hpp"
#include "wkelab/simd.hpp"
#include "wkelab/wke.hpp"

namespace wkl {

namespace {

struct Row {
    std::size_t start, len;
};

// Contiguous runs of the mode set along the last coordinate.
std::vector<Row> rows_of(const ModeSet& ms) {
    std::vector<Row> rows;
    const int d = ms.torus().d;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        bool cont = false;
        if (!rows.empty() && i > 0) {
            const Mode& a = ms[i - 1];
            const Mode& b = ms[i];
            cont = b.idx[d - 1] == a.idx[d - 1] + 1;
            for (int j = 0; j + 1 < d && cont; ++j) cont = a.idx[j] == b.idx[j];
        }
        if (cont)
            ++rows.back().len;
        else
            rows.push_back({i, 1});
    }
    return rows;
}

// phi on the box [-P, P]^d, last coordinate fastest.
struct Box {
    int P = 0, side = 1, d = 2;
    std::vector<double> v;

    std::size_t pos(const Mode& m) const {
        std::size_t p = 0;
        for (int j = 0; j < d; ++j) p = p * side + static_cast<std::size_t>(m.idx[j] + P);
        return p;
    }
};

}  // namespace

std::vector<double> riemann_S_t(const Profile& phi, double t, const TorusSpec& torus,
                                double K_max, const std::vector<Mode>& ks) {
    require(t > 0, "riemann_S_t: t must be positive");
    const ModeSet ms(torus, K_max);
    const int d = torus.d;
    const int K = ms.extent();
    std::vector<double> f(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        f[i] = phi.at(ms[i], torus);
        require(f[i] > 0 && std::isfinite(f[i]), "riemann_S_t: profile must be finite and positive on the lattice");
    }
    const auto rows = rows_of(ms);
    int kreach = 0;
    for (const Mode& k : ks)
        for (int j = 0; j < d; ++j) kreach = std::max(kreach, std::abs(k.idx[j]));
    Box box;
    box.d = d;
    box.P = 2 * K + kreach;
    box.side = 2 * box.P + 1;
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= box.side;
    box.v.assign(total, 0.0);
    for (std::size_t i = 0; i < ms.size(); ++i) box.v[box.pos(ms[i])] = f[i];

    const auto& kern = simd::active();
    const double L2 = torus.L * torus.L;
    const double bl = torus.beta[d - 1];
    std::vector<double> out;
    for (const Mode& k : ks) {
        const long kk = ms.find(k);
        const double fk = kk >= 0 ? f[kk] : 0.0;
        std::vector<double> part(ms.size(), 0.0);
        parallel_for(ms.size(), [&](std::size_t i1) {
            const double f1 = f[i1];
            const Mode& k1 = ms[i1];
            const Mode u = k1 - k;
            const double dw = -2.0 * t * bl * u.idx[d - 1] / L2;
            std::vector<double> c;
            double acc = 0;
            for (const Row& r : rows) {
                const Mode& first = ms[r.start];
                // k3 runs along the row; k2 = k1 + k3 - k is a shifted row of the box.
                const double w = -2.0 * t * q_form_scaled(u, first - k, torus) / L2;
                const std::size_t p2 = box.pos(first + u);
                c.resize(r.len);
                for (std::size_t j = 0; j < r.len; ++j) {
                    const double f2 = box.v[p2 + j], f3 = f[r.start + j];
                    // f > 0 inside the ball, so f2 == 0 means k2 lies outside it
                    c[j] = f2 == 0.0 ? 0.0 : f1 * f2 * f3 - fk * f2 * f3 + fk * f1 * f3 - fk * f1 * f2;
                }
                acc += kern.sinc2_dot(c.data(), nullptr, r.len, w, dw);
            }
            part[i1] = acc;
        });
        double s = 0;
        for (double x : part) s += x;
        out.push_back(s);
    }
    return out;
}

double riemann_S_t(const Profile& phi, double t, const TorusSpec& torus, double K_max,
                   const Mode& k) {
    return riemann_S_t(phi, t, torus, K_max, std::vector<Mode>{k})[0];
}

}  // namespace wkl
