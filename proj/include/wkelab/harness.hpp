#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace wkl {

// Process exit codes of the CLI; each error class in errors.hpp maps to one.
enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitResource = 3, kExitNumerical = 4 };

struct Observation {
    double x = 0.0;
    double y = 0.0;
};

/// Least-squares slope of log y against log x.
struct RegressionReport {
    enum class Rule { TwoSided, Upper };  // |slope - target| <= slack, or slope <= target + slack

    std::string label;
    std::vector<Observation> obs;
    double slope = 0.0;
    double intercept = 0.0;
    double target = 0.0;
    double slack = 0.0;
    Rule rule = Rule::TwoSided;
    bool pass = false;

    nlohmann::json to_json() const;
};

/// Needs >= 3 observations with positive x and y.
RegressionReport fit_exponent(const std::vector<Observation>& obs, double target, double slack,
                              RegressionReport::Rule rule = RegressionReport::Rule::TwoSided,
                              std::string label = {});

/// "%.17g", so that equal doubles always print the same bytes.
std::string fmt_num(double v);

/// Long-format table: experiment, L, d, T, alpha, <keys...>, value, stderr.
class CsvTable {
public:
    struct Common {
        std::string experiment;
        double L = 0.0;
        int d = 0;
        double T = 0.0;
        double alpha = 0.0;
    };

    explicit CsvTable(std::vector<std::string> key_columns) : keys_(std::move(key_columns)) {}

    void add(const Common& c, const std::vector<std::string>& keys, double value,
             double stderr_value = 0.0);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> keys_;
    std::vector<std::string> rows_;
};

/// One invocation of a subcommand.  CLI flags, when present, override the
/// matching config entries.
struct RunOptions {
    std::string subcommand;
    nlohmann::json config = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> budget;
    std::filesystem::path out = "out";
};

struct RunResult {
    int exit_code = kExitOk;
    std::string message;
    std::vector<RegressionReport> fits;
    std::vector<std::string> files;
};

const std::vector<std::string>& subcommands();

/// Validates the whole config, runs, writes <out>/<subcommand>.csv, an
/// optional <out>/<subcommand>_fits.csv and <out>/manifest.json.  Errors are
/// mapped to exit codes and recorded in the manifest; nothing else is
/// written when validation fails.
RunResult run(const RunOptions& opt);

nlohmann::json load_config(const std::filesystem::path& path);

}  // namespace wkl
