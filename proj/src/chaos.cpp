#include <cmath>

#include "wkelab/ensemble.hpp"
#include "wkelab/errors.hpp"

namespace wkl {

namespace {

// All partial matchings of slots with opposite signs, as partner arrays.
void matchings(const std::vector<int>& iota, std::vector<int>& partner, int from,
               std::vector<std::vector<int>>& out) {
    const int n = static_cast<int>(iota.size());
    while (from < n && partner[from] != -1) ++from;
    if (from == n) {
        out.push_back(partner);
        return;
    }
    partner[from] = -2;  // single
    matchings(iota, partner, from + 1, out);
    for (int j = from + 1; j < n; ++j) {
        if (partner[j] != -1 || iota[j] + iota[from] != 0) continue;
        partner[from] = j;
        partner[j] = from;
        matchings(iota, partner, from + 1, out);
        partner[j] = -1;
    }
    partner[from] = -1;
}

}  // namespace

TailReport chaos_tail_check(const std::vector<cplx>& coeff, int K, const std::vector<int>& iota,
                            NoiseLaw law, std::uint64_t samples, std::uint64_t seed,
                            const std::vector<double>& A_grid) {
    const int n = static_cast<int>(iota.size());
    require(n >= 1, "chaos_tail_check: need at least one slot");
    require(n <= 8, "chaos_tail_check: n > 8 rejected (cost guard)");
    require(K >= 1, "chaos_tail_check: need K >= 1 labels");
    std::size_t size = 1;
    for (int j = 0; j < n; ++j) size *= static_cast<std::size_t>(K);
    require(coeff.size() == size, "chaos_tail_check: coefficient tensor must have K^n entries");
    for (int s : iota) require(s == 1 || s == -1, "chaos_tail_check: signs must be +1 or -1");
    if (size > (1u << 24)) throw ResourceGuard("chaos_tail_check: tensor too large");

    TailReport rep;
    rep.n = n;
    rep.A = A_grid;

    std::vector<std::vector<int>> all;
    std::vector<int> partner(n, -1);
    matchings(iota, partner, 0, all);
    std::vector<int> idx(n);
    for (const auto& P : all) {
        // Slots that carry their own label: singles and the first of each pair.
        std::vector<int> lead, single;
        for (int j = 0; j < n; ++j) {
            if (P[j] == -2) single.push_back(j);
            else if (P[j] > j) lead.push_back(j);
        }
        const int nf = static_cast<int>(single.size()), np = static_cast<int>(lead.size());
        std::size_t nfree = 1, npair = 1;
        for (int j = 0; j < nf; ++j) nfree *= K;
        for (int j = 0; j < np; ++j) npair *= K;
        for (std::size_t f = 0; f < nfree; ++f) {
            std::size_t r = f;
            for (int j = 0; j < nf; ++j, r /= K) idx[single[j]] = static_cast<int>(r % K);
            double inner = 0;
            for (std::size_t g = 0; g < npair; ++g) {
                std::size_t q = g;
                for (int j = 0; j < np; ++j, q /= K) {
                    idx[lead[j]] = static_cast<int>(q % K);
                    idx[P[lead[j]]] = idx[lead[j]];
                }
                std::size_t pos = 0;
                for (int j = 0; j < n; ++j) pos = pos * K + idx[j];
                inner += std::abs(coeff[pos]);
            }
            rep.M += inner * inner;
        }
    }

    std::vector<std::uint64_t> hits(A_grid.size(), 0);
    std::vector<cplx> eta(K), pw(static_cast<std::size_t>(n) * K);
    const double sqM = std::sqrt(rep.M);
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (int k = 0; k < K; ++k) eta[k] = draw_eta(law, seed, static_cast<std::uint64_t>(k), s);
        cplx F = 0;
        for (std::size_t pos = 0; pos < size; ++pos) {
            if (coeff[pos] == cplx(0)) continue;
            cplx term = coeff[pos];
            std::size_t r = pos;
            for (int j = n - 1; j >= 0; --j, r /= K) {
                const cplx e = eta[r % K];
                term *= iota[j] > 0 ? e : std::conj(e);
            }
            F += term;
        }
        const double aF = std::abs(F);
        for (std::size_t i = 0; i < A_grid.size(); ++i)
            if (aF >= A_grid[i] * sqM && aF > 0) ++hits[i];
    }
    for (std::size_t i = 0; i < A_grid.size(); ++i) {
        rep.exceedance.push_back(samples ? static_cast<double>(hits[i]) / samples : 0.0);
        rep.shape.push_back(std::exp(-std::pow(A_grid[i], 2.0 / n)));
        if (i > 0 && A_grid[i] >= A_grid[i - 1] && rep.exceedance[i] > rep.exceedance[i - 1])
            rep.monotone = false;
    }
    return rep;
}

}  // namespace wkl
