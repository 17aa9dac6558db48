#include <atomic>
#include <cstdlib>
#include <string>

#include "wkelab/errors.hpp"
#include "wkelab/simd.hpp"

namespace wkl::simd {

namespace {

const Kernels* pick_auto() {
    if (const char* env = std::getenv("WKELAB_SIMD"); env && std::string(env) == "scalar")
        return &scalar_kernels();
    if (const Kernels* k = avx2_kernels()) return k;
    return &scalar_kernels();
}

std::atomic<const Kernels*>& slot() {
    static std::atomic<const Kernels*> s{pick_auto()};
    return s;
}

}  // namespace

const Kernels& active() { return *slot().load(std::memory_order_acquire); }

void select(const std::string& name) {
    if (name == "scalar") {
        slot().store(&scalar_kernels());
    } else if (name == "avx2") {
        const Kernels* k = avx2_kernels();
        if (!k) throw ValidationError("simd: avx2 requested but not supported on this CPU");
        slot().store(k);
    } else if (name == "auto") {
        slot().store(pick_auto());
    } else {
        throw ValidationError("simd: unknown kernel set '" + name + "'");
    }
}

}  // namespace wkl::simd
