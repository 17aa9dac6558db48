#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "wkelab/errors.hpp"
#include "wkelab/expansion.hpp"
#include "wkelab/harness.hpp"
#include "wkelab/parallel.hpp"
#include "wkelab/simd.hpp"
#include "wkelab/wke.hpp"

namespace wkl {

using nlohmann::json;

#ifdef WKELAB_VERSION
constexpr const char* kVersion = WKELAB_VERSION;
#else
constexpr const char* kVersion = "dev";
#endif

namespace {

// Reads one config object, fills in defaults on a resolved copy and rejects
// keys nobody asked for.
class Reader {
public:
    Reader(const json& j, std::string path, json& resolved)
        : j_(j), path_(std::move(path)), out_(resolved) {
        if (!j_.is_object()) fail("", "expected an object");
        if (!out_.is_object()) out_ = json::object();
    }

    bool has(const std::string& k) const { return j_.contains(k); }

    // Records a value that a CLI flag forced.
    template <class T>
    void set(const std::string& k, const T& v) {
        out_[k] = v;
    }

    template <class T>
    T get(const std::string& k, const T& def) {
        seen_.insert(k);
        if (!j_.contains(k)) {
            out_[k] = def;
            return def;
        }
        T v = convert<T>(k, j_.at(k));
        out_[k] = v;
        return v;
    }

    template <class T>
    std::optional<T> maybe(const std::string& k) {
        seen_.insert(k);
        if (!j_.contains(k)) return std::nullopt;
        T v = convert<T>(k, j_.at(k));
        out_[k] = v;
        return v;
    }

    Reader child(const std::string& k) {
        seen_.insert(k);
        static const json empty = json::object();
        if (!out_.contains(k)) out_[k] = json::object();
        return Reader(j_.contains(k) ? j_.at(k) : empty, path_ + "." + k, out_[k]);
    }

    [[noreturn]] void fail(const std::string& k, const std::string& msg) const {
        throw ValidationError(path_ + (k.empty() ? "" : "." + k) + ": " + msg);
    }

    void check(bool ok, const std::string& k, const std::string& msg) const {
        if (!ok) fail(k, msg);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(it.key(), "unknown key");
    }

private:
    template <class T>
    T convert(const std::string& k, const json& v) const {
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) fail(k, "expected a number");
            } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                if (!v.is_number_integer()) fail(k, "expected an integer");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) fail(k, "expected true or false");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) fail(k, "expected a string");
            }
            return v.get<T>();
        } catch (const json::exception& e) {
            fail(k, std::string("wrong type (") + e.what() + ")");
        }
    }

    const json& j_;
    std::string path_;
    json& out_;
    std::set<std::string> seen_;
};

// Torus, coupling and data shared by every subcommand.
struct Common {
    int d = 2;
    std::vector<double> beta;
    bool generic = false;
    std::vector<double> Ls;
    std::optional<double> alpha, lambda, T;
    double T_exponent = 1.0;
    double delta = 0.1;
    Profile profile;
    NoiseLaw law = NoiseLaw::Gaussian;
    double K_max = 2.0;
    std::uint64_t seed = 1;
    double budget = 4e9;

    TorusSpec torus(double L) const { return TorusSpec::make(d, L, beta, generic); }
    double T_of(double L) const { return T ? *T : std::pow(L, T_exponent); }
    PhysParams params(const TorusSpec& t) const {
        const double TT = T_of(t.L);
        if (lambda) return PhysParams::from_lambda(*lambda, TT, t, delta);
        return PhysParams::from_alpha(alpha.value_or(0.0), TT, t, delta);
    }
    CsvTable::Common row(const std::string& exp, const TorusSpec& t, const PhysParams& p) const {
        return {exp, t.L, t.d, p.T, p.alpha};
    }
};

Profile read_profile(Reader r) {
    const auto kind = r.get<std::string>("kind", "gaussian");
    Profile p;
    if (kind == "gaussian") {
        p = Profile::gaussian(r.get("amp", 1.0), r.get("width", 1.0));
    } else if (kind == "rayleigh_jeans") {
        p = Profile::rayleigh_jeans(r.get("a", 1.0), r.get("b", 1.0));
    } else if (kind == "constant") {
        p = Profile::constant(r.get("value", 1.0));
    } else {
        r.fail("kind", "expected gaussian, rayleigh_jeans or constant");
    }
    p.eps_trunc = r.get("eps_trunc", 1e-12);
    r.finish();
    return p;
}

Common read_common(Reader& r, const RunOptions& opt, std::vector<double> default_L) {
    Common c;
    c.d = r.get("d", 2);
    r.check(c.d >= 2 && c.d <= kMaxDim, "d", "must be in [2, 4]");
    c.beta = r.get("beta", std::vector<double>(c.d, 1.0));
    r.check(static_cast<int>(c.beta.size()) == c.d, "beta", "needs d entries");
    for (double b : c.beta) r.check(b >= 1 && b <= 2, "beta", "values must lie in [1, 2]");
    c.generic = r.get("beta_generic", false);
    if (r.has("L") && r.has("L_list")) r.fail("L", "give either L or L_list");
    if (auto L = r.maybe<double>("L"))
        c.Ls = {*L};
    else
        c.Ls = r.get("L_list", default_L);
    r.check(!c.Ls.empty(), "L_list", "must not be empty");
    for (double L : c.Ls) r.check(L > 0, "L", "must be positive");
    c.alpha = r.maybe<double>("alpha");
    c.lambda = r.maybe<double>("lambda");
    if (c.alpha && c.lambda) r.fail("alpha", "give either alpha or lambda");
    if (c.alpha) r.check(*c.alpha >= 0, "alpha", "must be >= 0");
    if (c.lambda) r.check(*c.lambda >= 0, "lambda", "must be >= 0");
    c.T = r.maybe<double>("T");
    c.T_exponent = r.get("T_exponent", 1.0);
    if (c.T) r.check(*c.T > 0, "T", "must be positive");
    c.delta = r.get("delta", 0.1);
    c.profile = read_profile(r.child("profile"));
    c.law = [&] {
        const auto s = r.get<std::string>("law", "gaussian");
        try {
            return parse_law(s);
        } catch (const ValidationError& e) {
            r.fail("law", e.what());
        }
    }();
    c.K_max = r.get("K_max", 2.0);
    r.check(c.K_max > 0, "K_max", "must be positive");
    c.profile.K_max = c.K_max;
    c.seed = r.get<std::uint64_t>("seed", 1);
    if (opt.seed) r.set("seed", c.seed = *opt.seed);
    c.budget = r.get("budget", 4e9);
    if (opt.budget) r.set("budget", c.budget = *opt.budget);
    r.check(c.budget > 0, "budget", "must be positive");
    // Validates the tori up front.
    for (double L : c.Ls) c.params(c.torus(L));
    return c;
}

std::vector<Mode> read_modes(Reader& r, const std::string& k, int d,
                             const std::vector<std::vector<int>>& def) {
    const auto raw = r.get(k, def);
    std::vector<Mode> out;
    for (const auto& v : raw) {
        r.check(static_cast<int>(v.size()) == d, k, "each mode needs d integer coordinates");
        Mode m;
        for (int j = 0; j < d; ++j) m.idx[j] = v[j];
        out.push_back(m);
    }
    return out;
}

std::string mode_str(const Mode& m, int d) { return to_string(m, d); }

// Degenerate data (a zero count, say) is a failed fit, not a bad config.
RegressionReport try_fit(const std::vector<Observation>& obs, double target, double slack,
                         RegressionReport::Rule rule, const std::string& label) {
    try {
        return fit_exponent(obs, target, slack, rule, label);
    } catch (const ValidationError& e) {
        RegressionReport r;
        r.label = label + " [" + e.what() + "]";
        r.obs = obs;
        r.slope = r.intercept = std::numeric_limits<double>::quiet_NaN();
        r.target = target;
        r.slack = slack;
        r.rule = rule;
        return r;
    }
}

void guard(double cost, double budget, const std::string& what) {
    if (cost > budget)
        throw ResourceGuard(what + ": estimated cost " + fmt_num(cost) + " exceeds budget " +
                            fmt_num(budget));
}

// ------------------------------------------------------------------ runners

struct Output {
    explicit Output(std::vector<std::string> keys) : table(std::move(keys)) {}
    CsvTable table;
    std::vector<RegressionReport> fits;
    json extra = json::object();
};

using Runner = std::function<Output()>;

Runner plan_simulate(Reader& r, const RunOptions& opt) {
    Common c = read_common(r, opt, {8});
    const auto samples = r.get<std::uint64_t>("samples", 256);
    const double cfl = r.get("c", 0.1);
    const int save_every = r.get("save_every", 0);
    r.check(samples >= 2, "samples", "must be >= 2");
    r.check(cfl > 0, "c", "must be positive");
    return [=] {
        Output o({"quantity", "mode", "s"});
        for (double L : c.Ls) {
            EnsembleConfig cfg;
            cfg.torus = c.torus(L);
            cfg.params = c.params(cfg.torus);
            cfg.profile = c.profile;
            cfg.law = c.law;
            cfg.K_max = c.K_max;
            cfg.c = cfl;
            cfg.save_every = save_every;
            cfg.budget = static_cast<std::uint64_t>(c.budget);
            const auto ed = ensemble_density(cfg, samples, c.seed);
            const auto row = c.row("simulate", cfg.torus, cfg.params);
            const std::size_t M = ed.modes->size();
            for (std::size_t i = 0; i < M; ++i)
                o.table.add(row, {"n_in", mode_str((*ed.modes)[i], c.d), "0"},
                            c.profile.at((*ed.modes)[i], cfg.torus));
            for (std::size_t ti = 0; ti < ed.s.size(); ++ti)
                for (std::size_t i = 0; i < M; ++i)
                    o.table.add(row, {"density", mode_str((*ed.modes)[i], c.d), fmt_num(ed.s[ti])},
                                ed.stats.mean(ti * M + i), ed.stats.stderr_of(ti * M + i));
        }
        return o;
    };
}

Runner plan_expand(Reader& r, const RunOptions& opt) {
    Common c = read_common(r, opt, {6});
    const int n_max = r.get("n_max", 3);
    const double cfl = r.get("c", 0.1);
    const auto samples = r.get<std::uint64_t>("samples", 1);
    r.check(n_max >= 0 && n_max <= 4, "n_max", "must be in [0, 4]");
    r.check(samples >= 1, "samples", "must be >= 1");
    return [=] {
        Output o({"quantity", "n", "sample"});
        for (double L : c.Ls) {
            const TorusSpec t = c.torus(L);
            const PhysParams p = c.params(t);
            auto ms = std::make_shared<const ModeSet>(t, c.K_max);
            const TimeGrid grid = TimeGrid::resolving(p, t, c.K_max, cfl);
            guard(static_cast<double>(samples) * grid.points() * ms->size() * 8, c.budget, "expand");
            const auto row = c.row("expand", t, p);
            for (std::uint64_t smp = 0; smp < samples; ++smp) {
                const auto f = well_prepared_field(c.profile, sample_eta(c.law, c.seed, *ms, smp), ms);
                const auto ex = compute_Jn(f, p, n_max, grid);
                const auto tr = integrate(f, p, grid, 1);
                Series rem = tr.a;
                for (int n = 0; n <= n_max; ++n) {
                    o.table.add(row, {"norm_J", std::to_string(n), std::to_string(smp)},
                                l2_norm(ex.J[n], grid));
                    rem = axpy(rem, -1.0, ex.J[n]);
                    o.table.add(row, {"remainder", std::to_string(n), std::to_string(smp)},
                                l2_norm(rem, grid));
                }
                o.table.add(row, {"resolution", "-", std::to_string(smp)}, ex.resolution);
            }
            if (p.alpha > 0 && p.T >= 1)
                o.table.add(row, {"rho", "-", "-"}, rho_and_Q(p, t).rho);
        }
        return o;
    };
}

Runner plan_count(Reader& r, const RunOptions& opt) {
    Common c = read_common(r, opt, {8, 16, 32});
    const auto T_exps = r.get("T_exponents", std::vector<double>{0.5, 1.5});
    const double theta = r.get("theta", 0.1);
    const double m = r.get("m", 0.0);
    const double slack = r.get("slack", 0.3);
    r.check(!T_exps.empty(), "T_exponents", "must not be empty");
    r.check(theta >= 0, "theta", "must be >= 0");
    return [=] {
        Output o({"set", "T_exponent"});
        for (double e : T_exps) {
            std::map<std::string, std::vector<Observation>> obs;
            for (double L : c.Ls) {
                const TorusSpec t = c.torus(L);
                ResonanceQuery q;
                q.T = std::pow(L, e);
                q.theta = theta;
                q.m = m;
                const double reach = window_radius_idx(t, theta);
                guard(std::pow(2 * reach + 1, 2.0 * c.d), c.budget, "count");
                const CsvTable::Common row{"count", L, c.d, q.T, 0.0};
                const double s3 = static_cast<double>(count_S3(q, t));
                const double s2p = static_cast<double>(count_S2(q, PairSign::Plus, t));
                const double s2m = static_cast<double>(count_S2(q, PairSign::Minus, t));
                o.table.add(row, {"S3", fmt_num(e)}, s3);
                o.table.add(row, {"S2+", fmt_num(e)}, s2p);
                o.table.add(row, {"S2-", fmt_num(e)}, s2m);
                obs["S3"].push_back({L, s3});
                obs["S2+"].push_back({L, s2p});
                obs["S2-"].push_back({L, s2m});
            }
            if (c.Ls.size() < 3) continue;
            const int d = c.d;
            // Exponents in L of the counting bounds with T = L^e.
            if (e <= d) o.fits.push_back(try_fit(obs["S3"], 2.0 * d + theta - e, slack,
                                                      RegressionReport::Rule::TwoSided,
                                                      "S3 T=L^" + fmt_num(e)));
            std::optional<double> s2;
            if (e <= 1) s2 = d + theta;
            else if (e <= 2) s2 = d + 1 + theta - e;
            else if (c.generic) s2 = d - 1 + theta;
            if (s2)
                for (const char* k : {"S2+", "S2-"})
                    o.fits.push_back(try_fit(obs[k], *s2, slack, RegressionReport::Rule::TwoSided,
                                                  std::string(k) + " T=L^" + fmt_num(e)));
        }
        return o;
    };
}

Runner plan_wke(Reader& r, const RunOptions& opt) {
    Common c = read_common(r, opt, {8});
    const double tphys = r.get("t", 1.0);
    const auto modes = read_modes(r, "modes", c.d, {{0, 0}, {1, 0}, {2, 1}});
    const bool continuum = r.get("continuum", true);
    const int grid_n = r.get("moment_grid", 0);
    const double grid_R = r.get("moment_radius", 4.0);
    const auto kernel_kind = r.get<std::string>("moment_kernel", "delta");
    const double kparam = r.get("moment_kernel_param", 0.0);
    r.check(tphys >= 0, "t", "must be >= 0");
    r.check(grid_n >= 0, "moment_grid", "must be >= 0");
    r.check(kernel_kind == "delta" || kernel_kind == "gaussian" || kernel_kind == "sinc2",
            "moment_kernel", "expected delta, gaussian or sinc2");
    if (kernel_kind != "delta") r.check(kparam > 0, "moment_kernel_param", "must be positive");
    if (c.profile.kind != Profile::Kind::Gaussian && c.d != 2 && (continuum || grid_n > 0))
        r.fail("profile", "continuum routes for this profile need d = 2");
    return [=] {
        Output o({"quantity", "mode"});
        for (double L : c.Ls) {
            const TorusSpec t = c.torus(L);
            const PhysParams p = c.params(t);
            const auto row = c.row("wke", t, p);
            const auto pred = kinetic_prediction(c.profile, tphys, p, t, c.K_max, modes, continuum);
            for (std::size_t i = 0; i < modes.size(); ++i) {
                const auto ms = mode_str(modes[i], c.d);
                o.table.add(row, {"n_in", ms}, pred.n_in[i]);
                o.table.add(row, {"lattice", ms}, pred.lattice[i]);
                if (continuum) {
                    o.table.add(row, {"finite_t", ms}, pred.finite_t[i]);
                    o.table.add(row, {"delta", ms}, pred.delta[i]);
                }
            }
            if (grid_n > 0) {
                const Kernel K = kernel_kind == "delta"      ? Kernel::delta()
                                 : kernel_kind == "gaussian" ? Kernel::gaussian(kparam)
                                                             : Kernel::sinc2(kparam);
                const auto mo = collision_moments(c.profile, K, t, grid_n, grid_R);
                o.table.add(row, {"moment_mass", "-"}, mo.mass);
                o.table.add(row, {"moment_energy", "-"}, mo.energy);
                o.table.add(row, {"moment_abs", "-"}, mo.abs);
            }
        }
        o.extra["sinc2_constant"] = measured_sinc2_constant();
        return o;
    };
}

Runner plan_resonance(Reader& r, const RunOptions& opt) {
    Common c = read_common(r, opt, {6, 10, 14});
    const double t_exp = r.get("t_exponent", 1.0);
    const auto modes = read_modes(r, "modes", c.d, {std::vector<int>(c.d, 0)});
    r.check(c.profile.kind == Profile::Kind::Gaussian || c.d == 2, "profile",
            "the continuum side needs a Gaussian profile when d != 2");
    return [=] {
        Output o({"quantity", "mode", "t"});
        std::vector<Observation> err;
        for (double L : c.Ls) {
            const TorusSpec t = c.torus(L);
            const double tk = std::pow(L, t_exp);
            const double M = std::pow(2 * c.K_max * L + 1, c.d);
            guard(M * M * modes.size(), c.budget, "resonance");
            const auto S = riemann_S_t(c.profile, tk, t, c.K_max, modes);
            double num = 0, den = 0;
            const CsvTable::Common row{"resonance", L, c.d, 0.0, 0.0};
            for (std::size_t i = 0; i < modes.size(); ++i) {
                double xi[kMaxDim] = {};
                for (int j = 0; j < c.d; ++j) xi[j] = t.k(modes[i], j);
                const double K = integral_K_t(c.profile, tk, t, xi);
                const auto ms = mode_str(modes[i], c.d);
                o.table.add(row, {"S_t", ms, fmt_num(tk)}, S[i]);
                o.table.add(row, {"K_t", ms, fmt_num(tk)}, K);
                o.table.add(row, {"relerr", ms, fmt_num(tk)}, std::abs(S[i] - K) / std::abs(K));
                num += (S[i] - K) * (S[i] - K);
                den += K * K;
            }
            err.push_back({L, std::sqrt(num / den)});
        }
        if (err.size() >= 3)
            o.fits.push_back(try_fit(err, 0.0, 0.0, RegressionReport::Rule::Upper,
                                          "relative error vs L"));
        return o;
    };
}

Runner plan_worst(Reader& r, const RunOptions& opt) {
    Common c = read_common(r, opt, {8, 16, 32});
    const auto rs = r.get("r_list", std::vector<int>{2, 3});
    const int quad = r.get("quad_points", 2000);
    const double slackA = r.get("slack_A", 0.3);
    const double slackR = r.get("slack_rho", 0.4);
    for (int x : rs) r.check(x >= 1 && x <= 6, "r_list", "entries must be in [1, 6]");
    r.check(quad >= 16, "quad_points", "must be >= 16");
    r.check(c.alpha || c.lambda, "alpha", "worst needs a coupling");
    return [=] {
        Output o({"quantity", "r"});
        for (int rr : rs) {
            std::vector<Observation> oa, oj;
            for (double L : c.Ls) {
                const TorusSpec t = c.torus(L);
                const PhysParams p = c.params(t);
                const WorstChoice ch = WorstChoice::standard();
                const auto w = worst_term(rr, p, t, c.profile, ch, quad);
                const auto row = c.row("worst", t, p);
                const auto rs_ = std::to_string(rr);
                o.table.add(row, {"A_direct", rs_}, std::abs(w.A_direct));
                o.table.add(row, {"A_reduced", rs_}, std::abs(w.A_reduced));
                o.table.add(row, {"J", rs_}, w.J_value);
                o.table.add(row, {"rho", rs_}, w.rho);
                oa.push_back({L, std::abs(w.A_direct) / std::pow(w.t, rr)});
                oj.push_back({w.rho, std::pow(L, c.d) * w.J_value});
            }
            if (oa.size() >= 3) {
                o.fits.push_back(try_fit(oa, (rr - 1.0) * c.d, slackA,
                                              RegressionReport::Rule::TwoSided,
                                              "|A|/t^r vs L, r=" + std::to_string(rr)));
                o.fits.push_back(try_fit(oj, rr, slackR, RegressionReport::Rule::TwoSided,
                                              "L^d J vs rho, r=" + std::to_string(rr)));
            }
        }
        return o;
    };
}

Runner plan_opnorm(Reader& r, const RunOptions& opt) {
    Common c = read_common(r, opt, {4, 8, 16});
    const auto pairs = r.get("orders", std::vector<std::vector<int>>{{0, 0}, {1, 0}});
    const auto sign_s = r.get<std::string>("sign", "plus");
    const double cfl = r.get("c", 0.1);
    const int max_iter = r.get("max_iter", 500);
    const double tol = r.get("tol", 1e-9);
    const double slack = r.get("slack", 0.4);
    r.check(sign_s == "plus" || sign_s == "minus", "sign", "expected plus or minus");
    for (const auto& pr : pairs)
        r.check(pr.size() == 2 && pr[0] >= 0 && pr[1] >= 0 && pr[0] + pr[1] <= 2, "orders",
                "entries are [n1, n2] with n1 + n2 <= 2");
    r.check(c.alpha || c.lambda, "alpha", "opnorm needs a coupling");
    const SlotSign sign = sign_s == "plus" ? SlotSign::Plus : SlotSign::Minus;
    return [=] {
        Output o({"quantity", "n1", "n2"});
        std::map<std::pair<int, int>, std::vector<Observation>> obs;
        for (double L : c.Ls) {
            const TorusSpec t = c.torus(L);
            const PhysParams p = c.params(t);
            auto ms = std::make_shared<const ModeSet>(t, c.K_max);
            const TimeGrid grid = TimeGrid::resolving(p, t, c.K_max, cfl);
            guard(static_cast<double>(grid.points()) * ms->size() * max_iter * 4, c.budget, "opnorm");
            const auto f = well_prepared_field(c.profile, sample_eta(c.law, c.seed, *ms, 0), ms);
            const auto ex = compute_Jn(f, p, 2, grid);
            const double rho = rho_and_Q(p, t).rho;
            const auto row = c.row("opnorm", t, p);
            for (const auto& pr : pairs) {
                const auto res = linearized_operator_norm(ex.J[pr[0]], ex.J[pr[1]], ms, p, grid, sign,
                                                          max_iter, tol, c.seed);
                const auto a = std::to_string(pr[0]), b = std::to_string(pr[1]);
                o.table.add(row, {"norm", a, b}, res.norm);
                o.table.add(row, {"rho", a, b}, rho);
                obs[{pr[0], pr[1]}].push_back({rho, res.norm});
            }
        }
        if (c.Ls.size() >= 3)
            for (const auto& [k, v] : obs)
                o.fits.push_back(try_fit(v, k.first + k.second + 0.5, slack,
                                              RegressionReport::Rule::TwoSided,
                                              "norm vs rho, n1=" + std::to_string(k.first) +
                                                  " n2=" + std::to_string(k.second)));
        return o;
    };
}

Runner plan_gauss(Reader& r, const RunOptions& opt) {
    const auto ns = r.get("n_list", std::vector<int>{64, 128, 256, 512});
    const auto svals = r.get("s_values", std::vector<double>{0.5, 1.0 / 3, 0.41421356237309503});
    const double target = r.get("target", 0.55);
    const double slack = r.get("slack", 0.1);
    for (int n : ns) r.check(n >= 1 && n <= 4096, "n_list", "entries must be in [1, 4096]");
    (void)opt;
    return [=] {
        Output o({"quantity", "n", "s"});
        std::vector<Observation> obs;
        const CsvTable::Common row{"gauss", 0.0, 1, 0.0, 0.0};
        for (int n : ns) {
            const auto N = std::to_string(n);
            o.table.add(row, {"G0", N, "0"}, std::abs(gauss_sum(0.0, n)));
            const double l4 = gauss_L4_quadrature(n);
            o.table.add(row, {"L4_quadrature", N, "-"}, l4);
            o.table.add(row, {"L4_count", N, "-"},
                        std::pow(static_cast<double>(gauss_L4_count(n)), 0.25));
            obs.push_back({static_cast<double>(n), l4});
            for (double s : svals) {
                const auto ck = gauss_bound_check(s, n);
                o.table.add(row, {"abs_G", N, fmt_num(s)}, ck.value);
                o.table.add(row, {"dirichlet_bound", N, fmt_num(s)}, ck.bound);
                o.table.add(row, {"dirichlet_q", N, fmt_num(s)}, static_cast<double>(ck.q));
            }
        }
        if (obs.size() >= 3)
            o.fits.push_back(try_fit(obs, target, slack, RegressionReport::Rule::TwoSided,
                                          "L4 norm vs n"));
        return o;
    };
}

const std::map<std::string, std::function<Runner(Reader&, const RunOptions&)>>& planners() {
    static const std::map<std::string, std::function<Runner(Reader&, const RunOptions&)>> m{
        {"simulate", plan_simulate}, {"expand", plan_expand},       {"count", plan_count},
        {"wke", plan_wke},           {"resonance", plan_resonance}, {"worst", plan_worst},
        {"opnorm", plan_opnorm},     {"gauss", plan_gauss},
    };
    return m;
}

void write_manifest(const std::filesystem::path& path, const json& m) {
    std::ofstream f(path, std::ios::binary);
    if (f) f << m.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> v{"simulate", "expand", "count", "wke",
                                            "resonance", "worst", "opnorm", "gauss"};
    return v;
}

json load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("config: cannot open " + path.string());
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
}

RunResult run(const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult res;
    json manifest{{"tool", "wkelab"},
                  {"version", kVersion},
                  {"subcommand", opt.subcommand},
                  {"simd", simd::active().name}};
    json resolved = json::object();
    Runner runner;
    try {
        auto it = planners().find(opt.subcommand);
        if (it == planners().end()) throw ValidationError("unknown subcommand '" + opt.subcommand + "'");
        if (opt.threads) {
            require(*opt.threads >= 1, "--threads must be >= 1");
            set_threads(*opt.threads);
        }
        Reader r(opt.config, "config", resolved);
        runner = it->second(r, opt);
        r.finish();
    } catch (const ValidationError& e) {
        res.exit_code = kExitValidation;
        res.message = e.what();
        return res;  // nothing on disk for invalid input
    }

    manifest["config"] = resolved;
    if (resolved.contains("seed")) manifest["seed"] = resolved["seed"];
    manifest["threads"] = threads();
    std::error_code ec;
    std::filesystem::create_directories(opt.out, ec);
    if (ec) {
        res.exit_code = kExitValidation;
        res.message = "cannot create output directory " + opt.out.string();
        return res;
    }
    try {
        Output o = runner();
        const auto csv = opt.out / (opt.subcommand + ".csv");
        o.table.write(csv);
        res.files.push_back(csv.string());
        if (!o.fits.empty()) {
            CsvTable ft({"label", "target", "slack", "rule", "intercept", "pass"});
            json fj = json::array();
            for (const auto& f : o.fits) {
                ft.add({opt.subcommand, 0, 0, 0, 0},
                       {f.label, fmt_num(f.target), fmt_num(f.slack),
                        f.rule == RegressionReport::Rule::TwoSided ? "two_sided" : "upper",
                        fmt_num(f.intercept), f.pass ? "1" : "0"},
                       f.slope);
                fj.push_back(f.to_json());
            }
            const auto fp = opt.out / (opt.subcommand + "_fits.csv");
            ft.write(fp);
            res.files.push_back(fp.string());
            manifest["fits"] = fj;
        }
        res.fits = std::move(o.fits);
        if (!o.extra.empty()) manifest["extra"] = o.extra;
        manifest["status"] = "ok";
    } catch (const ValidationError& e) {
        res.exit_code = kExitValidation;
        res.message = e.what();
        manifest["status"] = "validation_error";
    } catch (const ResourceGuard& e) {
        res.exit_code = kExitResource;
        res.message = e.what();
        manifest["status"] = "resource_guard";
    } catch (const NumericalFailure& e) {
        res.exit_code = kExitNumerical;
        res.message = e.what();
        manifest["status"] = "numerical_failure";
    }
    if (!res.message.empty()) manifest["message"] = res.message;
    manifest["outputs"] = res.files;
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opt.out / "manifest.json", manifest);
    return res;
}

}  // namespace wkl
