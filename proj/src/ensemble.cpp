#include "wkelab/ensemble.hpp"

#include <cmath>
#include <numbers>

#include "wkelab/errors.hpp"

namespace wkl {

NoiseLaw parse_law(const std::string& s) {
    if (s == "gaussian") return NoiseLaw::Gaussian;
    if (s == "circle") return NoiseLaw::Circle;
    throw ValidationError("law: expected 'gaussian' or 'circle', got '" + s + "'");
}

const char* law_name(NoiseLaw law) { return law == NoiseLaw::Gaussian ? "gaussian" : "circle"; }

Profile Profile::gaussian(double amp, double width) {
    require(amp >= 0 && width > 0, "profile: gaussian needs amp >= 0 and width > 0");
    Profile p;
    p.kind = Kind::Gaussian;
    p.amp = amp;
    p.width = width;
    return p;
}

Profile Profile::rayleigh_jeans(double a, double b) {
    require(a > 0 && b > 0, "profile: rayleigh-jeans needs a, b > 0");
    Profile p;
    p.kind = Kind::RayleighJeans;
    p.a = a;
    p.b = b;
    return p;
}

Profile Profile::constant(double c) {
    require(c >= 0, "profile: constant must be >= 0");
    Profile p;
    p.kind = Kind::Constant;
    p.amp = c;
    return p;
}

double Profile::operator()(const double* xi, const TorusSpec& t) const {
    switch (kind) {
        case Kind::Gaussian: {
            double s = 0;
            for (int j = 0; j < t.d; ++j) s += xi[j] * xi[j];
            return amp * std::exp(-s / (width * width));
        }
        case Kind::RayleighJeans: {
            double s = 0;
            for (int j = 0; j < t.d; ++j) s += t.beta[j] * xi[j] * xi[j];
            return 1.0 / (a + b * s);
        }
        case Kind::Constant:
            return amp;
        case Kind::Custom:
            return custom(xi, t.d);
    }
    return 0.0;
}

double Profile::at(const Mode& m, const TorusSpec& t) const {
    double xi[kMaxDim] = {};
    for (int j = 0; j < t.d; ++j) xi[j] = t.k(m, j);
    return (*this)(xi, t);
}

double Profile::truncation_residual(const TorusSpec& t) const {
    double worst = 0;
    double xi[kMaxDim];
    for (int dir = 1; dir < (1 << t.d); ++dir) {
        const int nz = __builtin_popcount(dir);
        for (int j = 0; j < t.d; ++j) xi[j] = (dir >> j & 1) ? K_max / std::sqrt(nz) : 0.0;
        worst = std::max(worst, (*this)(xi, t));
    }
    return worst;
}

double SpectralField::mass() const {
    double s = 0;
    for (const auto& z : a) s += std::norm(z);
    return s / std::pow(modes->torus().L, modes->torus().d);
}

namespace {
constexpr std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// 53-bit uniform in (0, 1].
double unit_open0(std::uint64_t h) { return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53; }
double unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }
}  // namespace

std::uint64_t stream_hash(std::uint64_t seed, std::uint64_t tag, std::uint64_t key,
                          std::uint64_t sample) {
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ tag);
    h = splitmix(h ^ key);
    return splitmix(h ^ sample);
}

std::uint64_t mode_key(const Mode& m) {
    std::uint64_t k = 0;
    for (int j = 0; j < kMaxDim; ++j)
        k = (k << 16) | static_cast<std::uint16_t>(m.idx[j] + 0x8000);
    return k;
}

cplx draw_eta(NoiseLaw law, std::uint64_t seed, std::uint64_t key, std::uint64_t sample) {
    const std::uint64_t h1 = stream_hash(seed, 0x657461, key, sample);
    const std::uint64_t h2 = splitmix(h1);
    const double ang = 2.0 * std::numbers::pi * unit(h2);
    // Gaussian: |eta|^2 ~ Exp(1), so real and imaginary parts are N(0, 1/2).
    const double r = law == NoiseLaw::Circle ? 1.0 : std::sqrt(-std::log(unit_open0(h1)));
    return std::polar(r, ang);
}

std::vector<cplx> sample_eta(NoiseLaw law, std::uint64_t seed, const ModeSet& modes,
                             std::uint64_t sample) {
    std::vector<cplx> out(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        out[i] = draw_eta(law, seed, mode_key(modes[i]), sample);
    return out;
}

SpectralField well_prepared_field(const Profile& n_in, const std::vector<cplx>& eta,
                                  std::shared_ptr<const ModeSet> modes) {
    require(eta.size() == modes->size(), "well_prepared_field: eta does not cover the mode set");
    SpectralField f(modes);
    const TorusSpec& t = modes->torus();
    for (std::size_t i = 0; i < modes->size(); ++i) {
        const double n = n_in.at((*modes)[i], t);
        if (!(n >= 0)) throw ValidationError("well_prepared_field: profile negative at " +
                                             to_string((*modes)[i], t.d));
        f.a[i] = std::sqrt(n) * eta[i];
    }
    return f;
}

void EnsembleStats::add(const double* x) {
    ++n_;
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < mean_.size(); ++i) {
        const double dlt = x[i] - mean_[i];
        mean_[i] += dlt * inv;
        m2_[i] += dlt * (x[i] - mean_[i]);
    }
}

void EnsembleStats::merge(const EnsembleStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    require(o.channels() == channels(), "stats: channel mismatch in merge");
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    const double n = na + nb;
    for (std::size_t i = 0; i < mean_.size(); ++i) {
        const double dlt = o.mean_[i] - mean_[i];
        mean_[i] = (na * mean_[i] + nb * o.mean_[i]) / n;
        m2_[i] += o.m2_[i] + dlt * dlt * na * nb / n;
    }
    n_ += o.n_;
}

double EnsembleStats::variance(std::size_t i) const {
    return n_ > 1 ? std::max(0.0, m2_[i]) / static_cast<double>(n_ - 1) : 0.0;
}

double EnsembleStats::stderr_of(std::size_t i) const {
    return n_ > 1 ? std::sqrt(variance(i) / static_cast<double>(n_)) : 0.0;
}

}  // namespace wkl
