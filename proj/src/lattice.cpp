#include "wkelab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkelab/errors.hpp"
#include "wkelab/params.hpp"

namespace wkl {

Mode make_mode(std::initializer_list<int> idx) {
    Mode m;
    int j = 0;
    for (int v : idx) {
        if (j >= kMaxDim) throw ValidationError("make_mode: too many coordinates");
        m.idx[j++] = v;
    }
    return m;
}

std::string to_string(const Mode& m, int d) {
    std::ostringstream os;
    os << '(';
    for (int j = 0; j < d; ++j) os << (j ? "," : "") << m.idx[j];
    os << ')';
    return os.str();
}

TorusSpec TorusSpec::make(int d, double L, const std::vector<double>& beta,
                          bool beta_generic) {
    require(d >= 2 && d <= kMaxDim, "torus: d must be in [2," + std::to_string(kMaxDim) + "]");
    require(L > 0 && std::isfinite(L), "torus: L must be positive");
    TorusSpec t;
    t.d = d;
    t.L = L;
    t.beta_generic = beta_generic;
    if (!beta.empty()) {
        require(static_cast<int>(beta.size()) == d, "torus: beta must have d entries");
        for (int j = 0; j < d; ++j) {
            require(beta[j] >= 1.0 && beta[j] <= 2.0, "torus: beta_j must lie in [1,2]");
            t.beta[j] = beta[j];
        }
    }
    for (int j = d; j < kMaxDim; ++j) t.beta[j] = 0.0;
    return t;
}

double TorusSpec::beta_max() const {
    double b = 0;
    for (int j = 0; j < d; ++j) b = std::max(b, beta[j]);
    return b;
}

double beta_norm_sq(const Mode& m, const TorusSpec& t) {
    double s = 0;
    for (int j = 0; j < t.d; ++j) {
        const double k = m.idx[j] / t.L;
        s += t.beta[j] * (k * k);
    }
    return s;
}

double omega(const Mode& k1, const Mode& k2, const Mode& k3, const Mode& k,
             const TorusSpec& t) {
    return beta_norm_sq(k1, t) - beta_norm_sq(k2, t) + beta_norm_sq(k3, t) - beta_norm_sq(k, t);
}

double q_form(const Mode& x, const Mode& y, const TorusSpec& t) {
    return q_form_scaled(x, y, t) / (t.L * t.L);
}

double q_form_scaled(const Mode& x, const Mode& y, const TorusSpec& t) {
    double s = 0;
    for (int j = 0; j < t.d; ++j)
        s += t.beta[j] * static_cast<double>(static_cast<long long>(x.idx[j]) * y.idx[j]);
    return s;
}

OmegaWindow OmegaWindow::make(double center, double T, const TorusSpec& t) {
    require(T > 0, "omega window: T must be positive");
    OmegaWindow w;
    w.center_scaled = center * t.L * t.L;
    w.half_width_scaled = t.L * t.L / T;
    return w;
}

namespace {
double slack(const OmegaWindow& w) {
    return 1e-9 * std::max({1.0, std::abs(w.center_scaled), w.half_width_scaled});
}
}  // namespace

double OmegaWindow::lo() const { return center_scaled - half_width_scaled - slack(*this); }
double OmegaWindow::hi() const { return center_scaled + half_width_scaled + slack(*this); }

ModeSet::ModeSet(const TorusSpec& torus, double K_max) : torus_(torus), K_max_(K_max) {
    require(K_max >= 0, "mode set: K_max must be nonnegative");
    const double r = K_max * torus.L;
    K_ = static_cast<int>(std::floor(r + 1e-9));
    side_ = 2 * K_ + 1;
    std::size_t box = 1;
    for (int j = 0; j < torus.d; ++j) box *= side_;
    box_.assign(box, -1);
    Ball ball{Mode{}, r};
    for_each_in_ball(ball, torus.d, [&](const Mode& m) {
        std::size_t pos = 0;
        for (int j = 0; j < torus_.d; ++j) pos = pos * side_ + (m.idx[j] + K_);
        box_[pos] = static_cast<int32_t>(modes_.size());
        modes_.push_back(m);
    });
}

long ModeSet::find(const Mode& m) const {
    std::size_t pos = 0;
    for (int j = 0; j < torus_.d; ++j) {
        const int v = m.idx[j];
        if (v < -K_ || v > K_) return -1;
        pos = pos * side_ + (v + K_);
    }
    return box_[pos];
}

bool Ball::contains(const Mode& m, int d) const {
    long long s = 0;
    for (int j = 0; j < d; ++j) {
        const long long x = m.idx[j] - center.idx[j];
        s += x * x;
    }
    return static_cast<double>(s) <= radius_idx * radius_idx * (1 + 1e-12) + 1e-9;
}

int Ball::reach() const { return static_cast<int>(std::floor(radius_idx + 1e-9)); }

double window_radius_idx(const TorusSpec& t, double theta) {
    require(theta >= 0, "theta must be nonnegative");
    return std::pow(t.L, theta) * t.L;
}

PhysParams PhysParams::from_lambda(double lambda, double T, const TorusSpec& t, double delta) {
    require(lambda >= 0 && std::isfinite(lambda), "params: lambda must be finite and >= 0");
    PhysParams p;
    p.lambda = lambda;
    p.alpha = lambda * lambda * std::pow(t.L, -t.d);
    p.T = T;
    p.T_kin = p.alpha > 0 ? 1.0 / (p.alpha * p.alpha) : INFINITY;
    p.delta = delta;
    require(T > 0, "params: T must be positive");
    return p;
}

PhysParams PhysParams::from_alpha(double alpha, double T, const TorusSpec& t, double delta) {
    require(alpha >= 0 && std::isfinite(alpha), "params: alpha must be finite and >= 0");
    return from_lambda(std::sqrt(alpha * std::pow(t.L, t.d)), T, t, delta);
}

double PhysParams::coupling(const TorusSpec& t) const { return alpha * T / std::pow(t.L, t.d); }

RhoQ rho_and_Q(const PhysParams& p, const TorusSpec& t) {
    require(p.T >= 1.0, "rho: T must be >= 1");
    require(p.alpha > 0, "rho: alpha must be positive");
    const double L = t.L;
    RhoQ r;
    if (p.T <= L) {
        r.rho = p.alpha * p.T;
        r.regime = "T<=L";
    } else if (p.T <= L * L) {
        r.rho = p.alpha * L;
        r.regime = "L<=T<=L^2";
    } else {
        if (!t.beta_generic)
            throw ValidationError("rho: T > L^2 needs a torus declared generic");
        r.rho = p.alpha * p.T / L;
        r.regime = "T>=L^2,generic";
    }
    r.Q = std::pow(L, t.d) * r.rho / (p.alpha * p.T);
    r.admissible = r.rho <= std::pow(L, -p.delta);
    return r;
}

}  // namespace wkl
