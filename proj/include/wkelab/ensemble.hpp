#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wkelab/lattice.hpp"

namespace wkl {

using cplx = std::complex<double>;

enum class NoiseLaw { Gaussian, Circle };

NoiseLaw parse_law(const std::string& s);
const char* law_name(NoiseLaw law);

/// Nonnegative initial spectrum n_in on R^d.
struct Profile {
    enum class Kind { Gaussian, RayleighJeans, Constant, Custom };
    Kind kind = Kind::Gaussian;
    // Gaussian: amp * exp(-|xi|^2 / width^2)
    double amp = 1.0;
    double width = 1.0;
    // Rayleigh-Jeans: 1 / (a + b |xi|_beta^2)
    double a = 1.0, b = 1.0;
    std::function<double(const double* xi, int d)> custom;

    double K_max = 6.0;
    double eps_trunc = 1e-12;

    static Profile gaussian(double amp = 1.0, double width = 1.0);
    static Profile rayleigh_jeans(double a, double b);
    static Profile constant(double c);

    double operator()(const double* xi, const TorusSpec& t) const;
    double at(const Mode& m, const TorusSpec& t) const;
    /// Largest profile value on the sphere |xi| = K_max along the axes and
    /// diagonals; a cheap check of the truncation threshold.
    double truncation_residual(const TorusSpec& t) const;
};

/// Amplitudes on the truncated lattice |k| <= K_max, indexed like ModeSet.
struct SpectralField {
    std::shared_ptr<const ModeSet> modes;
    std::vector<cplx> a;

    SpectralField() = default;
    explicit SpectralField(std::shared_ptr<const ModeSet> ms)
        : modes(std::move(ms)), a(modes->size()) {}

    std::size_t size() const { return a.size(); }
    /// L^-d sum |a_k|^2.
    double mass() const;
};

/// 64-bit counter hash; stream id = (seed, tag, key, sample).
std::uint64_t stream_hash(std::uint64_t seed, std::uint64_t tag, std::uint64_t key,
                          std::uint64_t sample);
std::uint64_t mode_key(const Mode& m);

/// One draw of eta_k for every mode of the set.  Draws depend only on
/// (law, seed, mode, sample), never on iteration order.
std::vector<cplx> sample_eta(NoiseLaw law, std::uint64_t seed, const ModeSet& modes,
                             std::uint64_t sample = 0);
cplx draw_eta(NoiseLaw law, std::uint64_t seed, std::uint64_t key, std::uint64_t sample);

SpectralField well_prepared_field(const Profile& n_in, const std::vector<cplx>& eta,
                                  std::shared_ptr<const ModeSet> modes);

/// Welford/Chan accumulators over a fixed number of real channels.
class EnsembleStats {
public:
    EnsembleStats() = default;
    explicit EnsembleStats(std::size_t channels) : mean_(channels), m2_(channels) {}

    void add(const double* x);
    void add(const std::vector<double>& x) { add(x.data()); }
    void merge(const EnsembleStats& o);

    std::size_t channels() const { return mean_.size(); }
    std::uint64_t count() const { return n_; }
    double mean(std::size_t i) const { return mean_[i]; }
    /// Unbiased sample variance.
    double variance(std::size_t i) const;
    /// Standard error of the mean.
    double stderr_of(std::size_t i) const;

private:
    std::uint64_t n_ = 0;
    std::vector<double> mean_, m2_;
};

struct TailReport {
    int n = 0;
    double M = 0.0;
    std::vector<double> A;
    std::vector<double> exceedance;
    /// exp(-A^(2/n)): the decay shape of the bound with C = c = 1.
    std::vector<double> shape;
    bool monotone = true;
};

/// F = sum a_{k_1..k_n} prod eta_{k_j}^{iota_j} over labels 0..K-1, with the
/// coefficient tensor dense in row-major order (size K^n).  iota_j = +1 means
/// eta, -1 means conj(eta).  M sums the pairing-reduced norms over every
/// sign-compatible partial pairing of the n slots, the empty one included.
TailReport chaos_tail_check(const std::vector<cplx>& coeff, int K, const std::vector<int>& iota,
                            NoiseLaw law, std::uint64_t samples, std::uint64_t seed,
                            const std::vector<double>& A_grid);

}  // namespace wkl
