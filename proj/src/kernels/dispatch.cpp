#include <cstdlib>
#include <string_view>

#include "xbar/kernels.hpp"

namespace xbar::kernels {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
        case Isa::Scalar: break;
    }
    return "scalar";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(XBAR_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(XBAR_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

namespace {

Isa detect() noexcept {
    if (const char* env = std::getenv("XBAR_SIMD")) {
        std::string_view want(env);
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
            if (want == isa_name(isa)) return isa_available(isa) ? isa : Isa::Scalar;
        }
    }
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

}  // namespace

Isa active_isa() noexcept {
    static const Isa isa = detect();
    return isa;
}

const KernelTable& table(Isa isa) {
    switch (isa) {
#if defined(XBAR_HAVE_AVX2)
        case Isa::Avx2:
            if (isa_available(Isa::Avx2)) return detail::avx2_table;
            break;
#endif
#if defined(XBAR_HAVE_NEON)
        case Isa::Neon: return detail::neon_table;
#endif
        default: break;
    }
    return detail::scalar_table;
}

const KernelTable& dispatch() {
    static const KernelTable& t = table(active_isa());
    return t;
}

}  // namespace xbar::kernels
