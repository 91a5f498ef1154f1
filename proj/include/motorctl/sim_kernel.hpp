#pragma once

namespace motorctl {

inline constexpr int kStateDim = 3;
inline constexpr int kSimdLanes = 4;

/// Closed-loop integration problem: x' = A x + g*tau(t) + base, with tau
/// zero-order-held per step. dt is the fixed step size.
struct KernelParams {
    double a[3][3];
    double g[3];
    double base[3];
    double dt;
};

/// Reference kernel. Advances one run for n_steps classic RK4 steps; writes
/// the states x_0..x_{n_steps} as consecutive rows of out (3 doubles each).
/// tau holds one disturbance value per step.
void rk4_run_scalar(const KernelParams& p, const double x0[3], const double* tau,
                    long n_steps, double* out);

/// AVX2 kernel: four independent runs in lockstep, one per lane. Per lane it
/// performs the exact operation sequence of rk4_run_scalar, so results are
/// bit-identical to four scalar runs. tau4 is interleaved [step*4 + lane];
/// out4 rows are [step][component][lane] blocks of 12 doubles.
void rk4_run_avx2(const KernelParams& p, const double x0[4][3], const double* tau4,
                  long n_steps, double* out4);

enum class SimdLevel { scalar, avx2 };

/// Best kernel the host CPU (and this build) supports.
SimdLevel detect_simd();

/// Whether the given level can run on this host.
bool simd_available(SimdLevel level);

} // namespace motorctl
