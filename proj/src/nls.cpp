#include "wkelab/nls.hpp"

#include <algorithm>
#include <cmath>

#include "wkelab/errors.hpp"
#include "wkelab/fft.hpp"
#include "wkelab/parallel.hpp"
#include "wkelab/simd.hpp"

namespace wkl {

TimeGrid TimeGrid::resolving(const PhysParams& p, const TorusSpec& t, double K_max, double c,
                             int min_steps) {
    require(c > 0, "time grid: safety factor must be positive");
    const double w = p.T * (2 * K_max) * (2 * K_max) * t.beta_max();
    TimeGrid g;
    g.steps = std::max(min_steps, static_cast<int>(std::ceil(w / c - 1e-9)));
    return g;
}

void TimeGrid::check(const PhysParams& p, const TorusSpec& t, double K_max, double c) const {
    require(steps >= 1, "time grid: need at least one step");
    const double lim = c / (p.T * (2 * K_max) * (2 * K_max) * t.beta_max());
    if (ds() > lim * (1 + 1e-12))
        throw ValidationError("time grid: ds=" + std::to_string(ds()) +
                              " exceeds the phase-resolution limit " + std::to_string(lim));
}

CubicEvaluator::CubicEvaluator(std::shared_ptr<const ModeSet> modes, const PhysParams& p)
    : modes_(std::move(modes)) {
    const TorusSpec& t = modes_->torus();
    kappa_ = p.coupling(t);
    T_ = p.T;
    L2_ = t.L * t.L;
    n_ = dealiased_grid(modes_->extent());
    // Cubic products of fields in [-K, K]^d reach [-3K, 3K]^d; they fold back
    // onto [-K, K]^d only if N <= 4K.
    if (n_ < 4 * modes_->extent() + 1) throw ValidationError("cubic: dealias padding too small");
    const FftPlan& plan = FftPlan::get(t.d, n_);
    pos_.resize(modes_->size());
    turns_.resize(modes_->size());
    for (std::size_t i = 0; i < modes_->size(); ++i) {
        const Mode& m = (*modes_)[i];
        std::size_t pos = 0;
        for (int j = 0; j < t.d; ++j) pos = pos * n_ + ((m.idx[j] % n_) + n_) % n_;
        pos_[i] = pos;
        turns_[i] = beta_norm_sq(m, t) * L2_;
    }
    gb_.assign(plan.size(), 0);
    gc_.assign(plan.size(), 0);
    gd_.assign(plan.size(), 0);
    tmp_.assign(modes_->size(), 0);
}

void CubicEvaluator::to_grid(const cplx* a, double s, std::vector<cplx>& g) {
    const auto& k = simd::active();
    std::fill(g.begin(), g.end(), cplx(0));
    k.twist(a, turns_.data(), T_ * s / L2_, tmp_.data(), tmp_.size());
    for (std::size_t i = 0; i < pos_.size(); ++i) g[pos_[i]] = tmp_[i];
    FftPlan::get(modes_->torus().d, n_).backward(g.data());
}

void CubicEvaluator::apply(const cplx* b, const cplx* c, const cplx* d, double s, cplx* out) {
    const std::size_t M = modes_->size();
    const auto& k = simd::active();
    const FftPlan& plan = FftPlan::get(modes_->torus().d, n_);

    cplx cd = 0, cb = 0;
    for (std::size_t i = 0; i < M; ++i) {
        cd += std::conj(c[i]) * d[i];
        cb += std::conj(c[i]) * b[i];
    }

    to_grid(b, s, gb_);
    const cplx* pc = gb_.data();
    const cplx* pd = gb_.data();
    if (c != b) {
        to_grid(c, s, gc_);
        pc = gc_.data();
    }
    if (d == c) {
        pd = pc;
    } else if (d != b) {
        to_grid(d, s, gd_);
        pd = gd_.data();
    }
    k.cubic(gb_.data(), pc, pd, gb_.data(), gb_.size());
    plan.forward(gb_.data());

    const double norm = 1.0 / static_cast<double>(plan.size());
    for (std::size_t i = 0; i < M; ++i) tmp_[i] = gb_[pos_[i]] * norm;
    k.twist(tmp_.data(), turns_.data(), -T_ * s / L2_, tmp_.data(), M);
    const cplx mi_kappa(0.0, -kappa_);
    for (std::size_t i = 0; i < M; ++i) {
        const cplx bi = b[i], di = d[i];
        out[i] = mi_kappa * (tmp_[i] - bi * cd - di * cb);
    }
}

SpectralField twisted_cubic(const SpectralField& field, double s, const PhysParams& p) {
    CubicEvaluator ev(field.modes, p);
    SpectralField out(field.modes);
    ev.apply(field.a.data(), s, out.a.data());
    return out;
}

namespace {
void check_finite(const std::vector<cplx>& a, double s) {
    for (const auto& z : a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalFailure("integrate: non-finite amplitude at s=" + std::to_string(s));
}
}  // namespace

Trajectory integrate(const SpectralField& field_in, const PhysParams& p, const TimeGrid& grid,
                     int save_every) {
    require(grid.steps >= 1, "integrate: need at least one step");
    CubicEvaluator ev(field_in.modes, p);
    Trajectory tr;
    tr.grid = grid;
    tr.save_every = save_every <= 0 ? grid.steps : save_every;
    const std::size_t M = field_in.size();
    std::vector<cplx> a = field_in.a, k1(M), k2(M), k3(M), k4(M), w(M);
    tr.s.push_back(0.0);
    tr.a.push_back(a);
    const double h = grid.ds();
    for (int n = 0; n < grid.steps; ++n) {
        const double s = grid.s(n);
        ev.apply(a.data(), s, k1.data());
        for (std::size_t i = 0; i < M; ++i) w[i] = a[i] + 0.5 * h * k1[i];
        ev.apply(w.data(), s + 0.5 * h, k2.data());
        for (std::size_t i = 0; i < M; ++i) w[i] = a[i] + 0.5 * h * k2[i];
        ev.apply(w.data(), s + 0.5 * h, k3.data());
        for (std::size_t i = 0; i < M; ++i) w[i] = a[i] + h * k3[i];
        ev.apply(w.data(), grid.s(n + 1), k4.data());
        for (std::size_t i = 0; i < M; ++i)
            a[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        check_finite(a, grid.s(n + 1));
        if ((n + 1) % tr.save_every == 0 || n + 1 == grid.steps) {
            tr.s.push_back(grid.s(n + 1));
            tr.a.push_back(a);
        }
    }
    return tr;
}

std::vector<std::vector<double>> wick_unwrap(const Trajectory& tr) {
    std::vector<std::vector<double>> out;
    out.reserve(tr.a.size());
    for (const auto& a : tr.a) {
        std::vector<double> r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::norm(a[i]);
        out.push_back(std::move(r));
    }
    return out;
}

EnsembleDensity ensemble_density(const EnsembleConfig& cfg, std::uint64_t samples,
                                 std::uint64_t seed) {
    require(samples >= 2, "ensemble: need at least 2 samples");
    auto modes = std::make_shared<const ModeSet>(cfg.torus, cfg.K_max);
    const TimeGrid grid = TimeGrid::resolving(cfg.params, cfg.torus, cfg.K_max, cfg.c);
    const int save = cfg.save_every <= 0 ? grid.steps : cfg.save_every;
    const std::size_t times = static_cast<std::size_t>(grid.steps / save) + 1 +
                              (grid.steps % save ? 1 : 0);
    const double work = static_cast<double>(modes->size()) * times * samples;
    if (work > static_cast<double>(cfg.budget))
        throw ResourceGuard("ensemble: modes*times*samples exceeds budget");

    // Fixed chunks keep the merge order independent of the thread count.
    constexpr std::uint64_t kChunk = 16;
    const std::size_t nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<EnsembleStats> part(nchunks, EnsembleStats(modes->size() * times));
    std::vector<double> s_saved;
    parallel_for(nchunks, [&](std::size_t c) {
        std::vector<double> row(modes->size() * times);
        const std::uint64_t lo = c * kChunk, hi = std::min(samples, lo + kChunk);
        for (std::uint64_t smp = lo; smp < hi; ++smp) {
            const auto eta = sample_eta(cfg.law, seed, *modes, smp);
            const auto f = well_prepared_field(cfg.profile, eta, modes);
            const Trajectory tr = integrate(f, cfg.params, grid, save);
            for (std::size_t ti = 0; ti < tr.a.size(); ++ti)
                for (std::size_t i = 0; i < modes->size(); ++i)
                    row[ti * modes->size() + i] = std::norm(tr.a[ti][i]);
            part[c].add(row);
            if (c == 0 && smp == 0) s_saved = tr.s;
        }
    });
    EnsembleDensity out;
    out.modes = modes;
    out.s = s_saved;
    out.stats = EnsembleStats(modes->size() * times);
    for (const auto& p : part) out.stats.merge(p);
    return out;
}

namespace {

// Index maps m -> g m for the signed coordinate permutations g that keep the
// mode set, beta and the profile values fixed.
std::vector<std::vector<std::size_t>> symmetry_maps(const ModeSet& ms, const Profile& prof) {
    const TorusSpec& t = ms.torus();
    const int d = t.d;
    std::vector<int> perm(d);
    for (int j = 0; j < d; ++j) perm[j] = j;
    std::vector<std::vector<std::size_t>> out;
    do {
        bool ok = true;
        for (int j = 0; j < d; ++j) ok = ok && t.beta[perm[j]] == t.beta[j];
        if (!ok) continue;
        for (int signs = 0; signs < (1 << d); ++signs) {
            std::vector<std::size_t> map(ms.size());
            bool good = true;
            for (std::size_t i = 0; i < ms.size() && good; ++i) {
                Mode g;
                for (int j = 0; j < d; ++j)
                    g.idx[j] = (signs >> j & 1 ? -1 : 1) * ms[i].idx[perm[j]];
                const long gi = ms.find(g);
                good = gi >= 0 && prof.at(g, t) == prof.at(ms[i], t);
                if (good) map[i] = static_cast<std::size_t>(gi);
            }
            if (good) out.push_back(std::move(map));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

DensityIncrement density_increment(const EnsembleConfig& cfg, std::uint64_t samples,
                                   std::uint64_t seed, bool symmetrize) {
    require(samples >= 2, "density_increment: need at least 2 samples");
    auto modes = std::make_shared<const ModeSet>(cfg.torus, cfg.K_max);
    const TimeGrid grid = TimeGrid::resolving(cfg.params, cfg.torus, cfg.K_max, cfg.c);
    const std::size_t M = modes->size();
    const double work = static_cast<double>(M) * grid.points() * samples;
    if (work > static_cast<double>(cfg.budget))
        throw ResourceGuard("density_increment: modes*steps*samples exceeds budget");

    std::vector<std::vector<std::size_t>> maps;
    if (symmetrize) maps = symmetry_maps(*modes, cfg.profile);

    constexpr std::uint64_t kChunk = 16;
    const std::size_t nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<EnsembleStats> part(nchunks, EnsembleStats(2 * M));
    parallel_for(nchunks, [&](std::size_t c) {
        CubicEvaluator ev(modes, cfg.params);
        std::vector<double> row(2 * M), sym(2 * M);
        std::vector<cplx> J1(M), w(M);
        const std::uint64_t lo = c * kChunk, hi = std::min(samples, lo + kChunk);
        for (std::uint64_t smp = lo; smp < hi; ++smp) {
            const auto f = well_prepared_field(cfg.profile, sample_eta(cfg.law, seed, *modes, smp), modes);
            const Trajectory tr = integrate(f, cfg.params, grid, 0);
            // Simpson with the RK4 stage times: exactly the first-order part
            // of one RK4 step, so the linear noise cancels term by term.
            std::fill(J1.begin(), J1.end(), cplx(0));
            const double h = grid.ds();
            for (int i = 0; i < grid.points(); ++i) {
                const double wt = (i == 0 || i == grid.steps ? 1.0 : 2.0) * h / 6.0;
                ev.apply(f.a.data(), grid.s(i), w.data());
                for (std::size_t m = 0; m < M; ++m) J1[m] += wt * w[m];
                if (i == grid.steps) break;
                ev.apply(f.a.data(), grid.s(i) + 0.5 * h, w.data());
                for (std::size_t m = 0; m < M; ++m) J1[m] += (4.0 * h / 6.0) * w[m];
            }
            const auto& a1 = tr.a.back();
            for (std::size_t m = 0; m < M; ++m) {
                row[m] = std::norm(a1[m]) - std::norm(f.a[m]);
                row[M + m] = row[m] - 2.0 * std::real(std::conj(f.a[m]) * J1[m]);
            }
            if (!maps.empty()) {
                std::fill(sym.begin(), sym.end(), 0.0);
                for (const auto& g : maps)
                    for (std::size_t m = 0; m < M; ++m) {
                        sym[m] += row[g[m]];
                        sym[M + m] += row[M + g[m]];
                    }
                for (std::size_t m = 0; m < 2 * M; ++m) row[m] = sym[m] / static_cast<double>(maps.size());
            }
            part[c].add(row);
        }
    });
    DensityIncrement out;
    out.modes = modes;
    out.steps = grid.steps;
    out.symmetries = maps.empty() ? 1 : static_cast<int>(maps.size());
    for (std::size_t m = 0; m < M; ++m) out.n_in.push_back(cfg.profile.at((*modes)[m], cfg.torus));
    out.stats = EnsembleStats(2 * M);
    for (const auto& p : part) out.stats.merge(p);
    return out;
}

}  // namespace wkl
