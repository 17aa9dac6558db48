#include <cmath>

#include "wkelab/errors.hpp"
#include "wkelab/nls.hpp"
#include "wkelab/parallel.hpp"
#include "wkelab/simd.hpp"
#include "wkelab/wke.hpp"

namespace wkl {

KineticPrediction kinetic_prediction(const Profile& n_in, double t, const PhysParams& p,
                                     const TorusSpec& torus, double K_max,
                                     const std::vector<Mode>& ks, bool continuum) {
    require(t >= 0, "kinetic_prediction: t must be >= 0");
    KineticPrediction out;
    for (const Mode& k : ks) out.n_in.push_back(n_in.at(k, torus));
    if (t == 0) {
        out.lattice = out.n_in;
        if (continuum) out.finite_t = out.delta = out.n_in;
        return out;
    }
    const double Ld = std::pow(torus.L, torus.d);
    const double lat = 2 * std::pow(p.alpha * t / Ld, 2);
    const auto S = riemann_S_t(n_in, t, torus, K_max, ks);
    for (std::size_t i = 0; i < ks.size(); ++i) out.lattice.push_back(out.n_in[i] + lat * S[i]);
    if (!continuum) return out;
    // (alpha t / L^d)^2 * L^{2d} / t = t / T_kin
    const double cont = 2 * p.alpha * p.alpha * t;
    const double cg = measured_sinc2_constant();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        double xi[kMaxDim] = {};
        for (int j = 0; j < torus.d; ++j) xi[j] = torus.k(ks[i], j);
        out.finite_t.push_back(out.n_in[i] +
                               cont * collision_K(n_in, Kernel::sinc2(t), torus, xi));
        out.delta.push_back(out.n_in[i] + cont * cg * collision_K(n_in, Kernel::delta(), torus, xi));
    }
    return out;
}

ChaosMoments first_iterate_moments(const Profile& n_in, NoiseLaw law, double s,
                                   const PhysParams& p, const TorusSpec& torus, double K_max,
                                   const Mode& k) {
    require(s >= 0, "first_iterate_moments: s must be >= 0");
    const ModeSet ms(torus, K_max);
    std::vector<double> n(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) n[i] = n_in.at(ms[i], torus);
    const long kk = ms.find(k);
    const double nk = kk >= 0 ? n[kk] : 0.0;
    const double Ts = p.T * s;
    const bool circle = law == NoiseLaw::Circle;
    double lattice = 0, weighted = 0;
    for (std::size_t i1 = 0; i1 < ms.size(); ++i1) {
        if (ms[i1] == k) continue;
        for (std::size_t i3 = 0; i3 < ms.size(); ++i3) {
            if (ms[i3] == k) continue;
            const long i2 = ms.find(ms[i1] + ms[i3] - k);
            if (i2 < 0) continue;
            const double w = n[i1] * n[i2] * n[i3] *
                             simd::sinc2(Ts * omega(ms[i1], ms[i2], ms[i3], k, torus));
            lattice += w;
            weighted += (circle && i1 == i3) ? w : 2 * w;
        }
    }
    const double c46 = circle ? 1.0 : 2.0;
    const double c6 = circle ? 1.0 : 6.0;
    const double ks = p.alpha * p.T * s / std::pow(torus.L, torus.d);
    ChaosMoments m;
    m.lattice_sum = lattice;
    m.EJ1sq = ks * ks * (weighted + c6 * nk * nk * nk);
    m.EJ0J1 = cplx(0, ks * c46 * nk * nk);
    return m;
}

ChaosReport second_chaos_identity(const Profile& n_in, NoiseLaw law, const PhysParams& p,
                                  const TorusSpec& torus, double K_max,
                                  const std::vector<Mode>& probes, std::uint64_t samples,
                                  std::uint64_t seed, double c) {
    require(samples >= 2, "second_chaos_identity: need at least 2 samples");
    auto ms = std::make_shared<const ModeSet>(torus, K_max);
    std::vector<long> pos;
    for (const Mode& k : probes) {
        pos.push_back(ms->find(k));
        require(pos.back() >= 0, "second_chaos_identity: probe mode outside the support");
    }
    const TimeGrid grid = TimeGrid::resolving(p, torus, K_max, c);
    const double work = static_cast<double>(samples) * grid.points() * ms->size();
    if (work > 4e11) throw ResourceGuard("second_chaos_identity: sampling budget exceeded");

    const std::size_t P = probes.size();
    constexpr std::uint64_t kChunk = 64;
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<EnsembleStats> parts(chunks, EnsembleStats(3 * P));
    parallel_for(chunks, [&](std::size_t ci) {
        CubicEvaluator ev(ms, p);
        std::vector<cplx> w(ms->size()), J1(ms->size());
        std::vector<double> row(3 * P);
        const double ds = grid.ds();
        for (std::uint64_t smp = ci * kChunk; smp < std::min<std::uint64_t>(samples, (ci + 1) * kChunk); ++smp) {
            const SpectralField f = well_prepared_field(n_in, sample_eta(law, seed, *ms, smp), ms);
            std::fill(J1.begin(), J1.end(), cplx{});
            for (int i = 0; i < grid.points(); ++i) {
                ev.apply(f.a.data(), grid.s(i), w.data());
                const double wt = (i == 0 || i == grid.steps) ? 0.5 * ds : ds;
                for (std::size_t m = 0; m < J1.size(); ++m) J1[m] += wt * w[m];
            }
            for (std::size_t q = 0; q < P; ++q) {
                const cplx j0 = f.a[pos[q]], j1 = J1[pos[q]];
                const cplx x = std::conj(j0) * j1;
                row[3 * q] = std::norm(j1);
                row[3 * q + 1] = x.real();
                row[3 * q + 2] = x.imag();
            }
            parts[ci].add(row);
        }
    });
    EnsembleStats st(3 * P);
    for (const auto& e : parts) st.merge(e);

    ChaosReport rep;
    rep.samples = samples;
    rep.steps = grid.steps;
    for (std::size_t q = 0; q < P; ++q) {
        ChaosProbe pr;
        pr.k = probes[q];
        pr.exact = first_iterate_moments(n_in, law, 1.0, p, torus, K_max, probes[q]);
        pr.mc_J1sq = st.mean(3 * q);
        pr.se_J1sq = st.stderr_of(3 * q);
        pr.mc_re = st.mean(3 * q + 1);
        pr.se_re = st.stderr_of(3 * q + 1);
        pr.mc_im = st.mean(3 * q + 2);
        pr.se_im = st.stderr_of(3 * q + 2);
        auto z = [](double a, double b, double se) { return se > 0 ? (a - b) / se : (a == b ? 0.0 : INFINITY); };
        pr.z_J1sq = z(pr.mc_J1sq, pr.exact.EJ1sq, pr.se_J1sq);
        pr.z_re = z(pr.mc_re, pr.exact.EJ0J1.real(), pr.se_re);
        pr.z_im = z(pr.mc_im, pr.exact.EJ0J1.imag(), pr.se_im);
        rep.probes.push_back(pr);
    }
    return rep;
}

}  // namespace wkl
