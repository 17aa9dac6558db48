#include <cmath>

#include "wkelab/errors.hpp"
#include "wkelab/harness.hpp"

namespace wkl {

RegressionReport fit_exponent(const std::vector<Observation>& obs, double target, double slack,
                              RegressionReport::Rule rule, std::string label) {
    require(obs.size() >= 3, "fit_exponent: need at least 3 observations");
    for (const auto& o : obs)
        require(o.x > 0 && o.y > 0 && std::isfinite(o.x) && std::isfinite(o.y),
                "fit_exponent: observations must be positive and finite");
    const double n = static_cast<double>(obs.size());
    double mx = 0, my = 0;
    for (const auto& o : obs) {
        mx += std::log(o.x);
        my += std::log(o.y);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (const auto& o : obs) {
        const double dx = std::log(o.x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(o.y) - my);
    }
    require(sxx > 0, "fit_exponent: all x values are equal");
    RegressionReport r;
    r.label = std::move(label);
    r.obs = obs;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.target = target;
    r.slack = slack;
    r.rule = rule;
    r.pass = rule == RegressionReport::Rule::TwoSided ? std::abs(r.slope - target) <= slack
                                                      : r.slope <= target + slack;
    return r;
}

nlohmann::json RegressionReport::to_json() const {
    nlohmann::json o = nlohmann::json::array();
    for (const auto& p : obs) o.push_back({p.x, p.y});
    return {{"label", label},     {"observations", o},
            {"slope", slope},     {"intercept", intercept},
            {"target", target},   {"slack", slack},
            {"rule", rule == Rule::TwoSided ? "two_sided" : "upper"},
            {"pass", pass}};
}

}  // namespace wkl
