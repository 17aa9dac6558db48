#include <iostream>

#include "CLI11.hpp"
#include "wkelab/errors.hpp"
#include "wkelab/harness.hpp"

namespace {

const char* kHelp = R"(Config: a JSON object; every key is optional and defaults are echoed into
manifest.json.  Shared keys: d (2), beta ([1,..]), beta_generic (false), L or
L_list, alpha or lambda, T or T_exponent (T = L^e, default 1), delta (0.1),
K_max (2), law ("gaussian" | "circle"), seed (1), budget (4e9), profile
{kind: gaussian (amp 1, width 1) | rayleigh_jeans (a 1, b 1) | constant (value 1)}.
  simulate   samples (256), c (0.1), save_every (0 = endpoint only)
  expand     n_max (3), c (0.1), samples (1)
  count      L_list ([8,16,32]), T_exponents ([0.5,1.5]), theta (0.1), m (0), slack (0.3)
  wke        t (1), modes ([[0,0],[1,0],[2,1]]), continuum (true), moment_grid (0),
             moment_radius (4), moment_kernel ("delta"), moment_kernel_param
  resonance  L_list ([6,10,14]), t_exponent (1), modes ([[0,..]])
  worst      L_list ([8,16,32]), r_list ([2,3]), quad_points (2000), slack_A (0.3), slack_rho (0.4)
  opnorm     L_list ([4,8,16]), orders ([[0,0],[1,0]]), sign ("plus"), c (0.1), max_iter (500),
             tol (1e-9), slack (0.4)
  gauss      n_list ([64,128,256,512]), s_values, target (0.55), slack (0.1)
Exit codes: 0 ok, 2 invalid input, 3 resource guard, 4 numerical failure.)";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wkelab: lattice wave-turbulence experiments"};
    app.footer(kHelp);
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    int threads = 0;
    double budget = 0;
    std::string out = "out";
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    auto* o_seed = app.add_option("--seed", seed, "RNG seed (overrides config)");
    auto* o_threads = app.add_option("--threads", threads, "worker threads (default 1)");
    auto* o_budget = app.add_option("--budget", budget, "cost guard (overrides config)");
    app.add_option("--out", out, "output directory")->capture_default_str();
    for (const auto& name : wkl::subcommands()) app.add_subcommand(name, name + " experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : wkl::kExitValidation;
    }

    wkl::RunOptions opt;
    opt.subcommand = app.get_subcommands().front()->get_name();
    opt.out = out;
    if (*o_seed) opt.seed = seed;
    if (*o_threads) opt.threads = threads;
    if (*o_budget) opt.budget = budget;
    try {
        if (!config_path.empty()) opt.config = wkl::load_config(config_path);
    } catch (const wkl::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wkl::kExitValidation;
    }

    const auto res = wkl::run(opt);
    if (res.exit_code != wkl::kExitOk) {
        std::cerr << "error: " << res.message << '\n';
        return res.exit_code;
    }
    for (const auto& f : res.fits)
        std::cout << (f.pass ? "PASS " : "FAIL ") << f.label << ": slope " << f.slope
                  << " target " << f.target << " slack " << f.slack << '\n';
    for (const auto& f : res.files) std::cout << "wrote " << f << '\n';
    return 0;
}
