#include <cmath>
#include <numbers>

#include "wkelab/errors.hpp"
#include "wkelab/wke.hpp"

namespace wkl {

cplx gauss_sum(double s, int n) {
    require(n >= 0, "gauss_sum: n must be >= 0");
    const double fs = s - std::floor(s);
    cplx acc = 0;
    for (long p = 0; p <= n; ++p) {
        const double x = fs * static_cast<double>(p * p);
        const double ang = 2 * std::numbers::pi * (x - std::floor(x));
        acc += cplx(std::cos(ang), std::sin(ang));
    }
    return acc;
}

DirichletCheck gauss_bound_check(double s, int n) {
    require(n >= 1, "gauss_bound_check: n must be >= 1");
    const double fs = s - std::floor(s);
    DirichletCheck c;
    // The smallest admissible q is automatically coprime to its a.
    for (long q = 1; q <= n; ++q) {
        const long a = std::lround(q * fs);
        const double dist = std::abs(fs - static_cast<double>(a) / q);
        if (dist < 1.0 / (static_cast<double>(q) * n) || q == n) {
            c.a = a % q;
            c.q = q;
            c.dist = dist;
            break;
        }
    }
    c.bound = n / (std::sqrt(static_cast<double>(c.q)) * (1 + n * std::sqrt(c.dist)));
    c.value = std::abs(gauss_sum(s, n));
    return c;
}

double gauss_L4_quadrature(int n) {
    require(n >= 1 && n <= 4096, "gauss_L4_quadrature: n must be in [1, 4096]");
    const std::uint64_t N = 2ULL * n * n + 1;
    std::vector<cplx> tab(N);
    for (std::uint64_t j = 0; j < N; ++j) {
        const double ang = 2 * std::numbers::pi * static_cast<double>(j) / N;
        tab[j] = cplx(std::cos(ang), std::sin(ang));
    }
    std::vector<std::uint64_t> sq(n + 1);
    for (std::uint64_t p = 0; p <= static_cast<std::uint64_t>(n); ++p) sq[p] = (p * p) % N;
    double acc = 0;
    for (std::uint64_t j = 0; j < N; ++j) {
        cplx g = 0;
        for (std::uint64_t p = 0; p <= static_cast<std::uint64_t>(n); ++p) g += tab[(j * sq[p]) % N];
        const double a2 = std::norm(g);
        acc += a2 * a2;
    }
    return std::pow(acc / N, 0.25);
}

std::uint64_t gauss_L4_count(int n) {
    require(n >= 0 && n <= 1 << 14, "gauss_L4_count: n out of range");
    std::vector<std::uint64_t> r(2ULL * n * n + 1, 0);
    for (std::uint64_t a = 0; a <= static_cast<std::uint64_t>(n); ++a)
        for (std::uint64_t b = 0; b <= static_cast<std::uint64_t>(n); ++b) ++r[a * a + b * b];
    std::uint64_t s = 0;
    for (auto x : r) s += x * x;
    return s;
}

}  // namespace wkl
