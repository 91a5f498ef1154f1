#include "motorctl/sim_kernel.hpp"

namespace motorctl {

bool kernel_avx2_compiled(); // defined alongside the AVX2 kernel

namespace {

bool host_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

} // namespace

bool simd_available(SimdLevel level) {
    switch (level) {
    case SimdLevel::scalar:
        return true;
    case SimdLevel::avx2:
        return kernel_avx2_compiled() && host_has_avx2();
    }
    return false;
}

SimdLevel detect_simd() {
    return simd_available(SimdLevel::avx2) ? SimdLevel::avx2 : SimdLevel::scalar;
}

} // namespace motorctl
