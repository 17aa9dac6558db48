#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wkl {

constexpr int kMaxDim = 4;

/// Lattice mode k = idx / L.  Unused trailing coordinates stay zero so that
/// equality and ordering are plain integer comparisons.
struct Mode {
    std::array<int, kMaxDim> idx{};

    friend bool operator==(const Mode&, const Mode&) = default;
    friend auto operator<=>(const Mode&, const Mode&) = default;

    Mode& operator+=(const Mode& o) {
        for (int j = 0; j < kMaxDim; ++j) idx[j] += o.idx[j];
        return *this;
    }
    Mode& operator-=(const Mode& o) {
        for (int j = 0; j < kMaxDim; ++j) idx[j] -= o.idx[j];
        return *this;
    }
    friend Mode operator+(Mode a, const Mode& b) { return a += b; }
    friend Mode operator-(Mode a, const Mode& b) { return a -= b; }
    friend Mode operator-(Mode a) {
        for (auto& x : a.idx) x = -x;
        return a;
    }
    bool is_zero() const {
        for (int x : idx)
            if (x != 0) return false;
        return true;
    }
};

Mode make_mode(std::initializer_list<int> idx);
std::string to_string(const Mode& m, int d);

struct TorusSpec {
    int d = 2;
    double L = 1.0;
    std::array<double, kMaxDim> beta{1.0, 1.0, 1.0, 1.0};
    // Declared by the caller; the code never tries to certify genericity.
    bool beta_generic = false;

    /// Validates d >= 2, L > 0 and beta in [1,2]^d.
    static TorusSpec make(int d, double L, const std::vector<double>& beta = {},
                          bool beta_generic = false);

    double k(const Mode& m, int j) const { return m.idx[j] / L; }
    double beta_max() const;
};

double beta_norm_sq(const Mode& m, const TorusSpec& t);

/// |k1|^2 - |k2|^2 + |k3|^2 - |k|^2 in beta norms.
double omega(const Mode& k1, const Mode& k2, const Mode& k3, const Mode& k,
             const TorusSpec& t);

/// Q(x, y) = sum_j beta_j x_j y_j in k-coordinates.
double q_form(const Mode& x, const Mode& y, const TorusSpec& t);

/// L^2 * Q(x, y): exact integer arithmetic before the beta weights.
double q_form_scaled(const Mode& x, const Mode& y, const TorusSpec& t);

/// |omega - center| <= 1/T, evaluated on the L^2-scaled values.  A relative
/// slack of 1e-9 keeps exact ties on rational tori inside the window.
struct OmegaWindow {
    double center_scaled = 0.0;
    double half_width_scaled = 0.0;

    static OmegaWindow make(double center, double T, const TorusSpec& t);
    double lo() const;
    double hi() const;
    bool contains(double omega_scaled) const {
        return omega_scaled >= lo() && omega_scaled <= hi();
    }
};

/// Centers and windows of the quasi-resonant sets.
struct ResonanceQuery {
    Mode k, a, b, c;
    double m = 0.0;
    double T = 1.0;
    double theta = 0.1;
};

/// Lattice points with |k| <= K_max in lexicographic order, plus a dense box
/// lookup.  This is the truncated support shared by every spectral field.
class ModeSet {
public:
    ModeSet() = default;
    ModeSet(const TorusSpec& torus, double K_max);

    std::size_t size() const { return modes_.size(); }
    const Mode& operator[](std::size_t i) const { return modes_[i]; }
    const std::vector<Mode>& modes() const { return modes_; }
    const TorusSpec& torus() const { return torus_; }
    double K_max() const { return K_max_; }
    /// Largest |idx_j| present.
    int extent() const { return K_; }
    long find(const Mode& m) const;

private:
    TorusSpec torus_;
    double K_max_ = 0.0;
    int K_ = 0;
    int side_ = 1;
    std::vector<Mode> modes_;
    std::vector<int32_t> box_;
};

/// Euclidean ball in index units around a center.
struct Ball {
    Mode center;
    double radius_idx = 0.0;

    bool contains(const Mode& m, int d) const;
    int reach() const;
};

/// Radius L^theta in k-units, i.e. L^(1+theta) in index units.
double window_radius_idx(const TorusSpec& t, double theta);

/// Calls f(m) for every lattice index in the ball, lexicographically.
template <class F>
void for_each_in_ball(const Ball& b, int d, F&& f) {
    const int r = b.reach();
    Mode m;
    std::array<int, kMaxDim> off{};
    for (int j = 0; j < d; ++j) off[j] = -r;
    while (true) {
        for (int j = 0; j < d; ++j) m.idx[j] = b.center.idx[j] + off[j];
        if (b.contains(m, d)) f(m);
        int j = d - 1;
        while (j >= 0 && off[j] == r) {
            off[j] = -r;
            --j;
        }
        if (j < 0) break;
        ++off[j];
    }
}

using Triple = std::array<Mode, 3>;
using Pair = std::pair<Mode, Mode>;

enum class PairSign { Plus, Minus };

std::vector<Triple> enumerate_S3(const ResonanceQuery& q, const TorusSpec& t);
std::uint64_t count_S3(const ResonanceQuery& q, const TorusSpec& t);
std::vector<Pair> enumerate_S2(const ResonanceQuery& q, PairSign sign, const TorusSpec& t);
std::uint64_t count_S2(const ResonanceQuery& q, PairSign sign, const TorusSpec& t);

/// The defining predicates of S3 / S2, shared by enumeration and oracles.
bool in_S3(const ResonanceQuery& q, const TorusSpec& t, const Mode& x, const Mode& y,
           const Mode& z);
bool in_S2(const ResonanceQuery& q, PairSign sign, const TorusSpec& t, const Mode& x,
           const Mode& y);

struct PhysParams;

struct RhoQ {
    double rho = 0.0;
    double Q = 0.0;
    std::string regime;
    bool admissible = false;  // rho <= L^-delta
};

/// Piecewise rho of the scaling law and Q = L^d rho / (alpha T).
RhoQ rho_and_Q(const PhysParams& p, const TorusSpec& t);

}  // namespace wkl
