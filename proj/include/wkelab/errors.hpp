#pragma once

#include <stdexcept>
#include <string>

namespace wkl {

// Each class maps onto one CLI exit code (see harness.hpp).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace wkl
