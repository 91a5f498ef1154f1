// Four-lane AVX2 variant of rk4_run_scalar. Uses separate mul/add (no FMA) so
// every lane reproduces the scalar kernel bit for bit.

#include "motorctl/sim_kernel.hpp"

#include <stdexcept>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace motorctl {

#if defined(__AVX2__)

bool kernel_avx2_compiled() { return true; }

namespace {

struct State {
    __m256d v[3];
};

inline State deriv(const __m256d a[3][3], const State& c, const State& x) {
    State d;
    for (int i = 0; i < 3; ++i) {
        __m256d acc = _mm256_mul_pd(a[i][0], x.v[0]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(a[i][1], x.v[1]));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(a[i][2], x.v[2]));
        d.v[i] = _mm256_add_pd(acc, c.v[i]);
    }
    return d;
}

} // namespace

void rk4_run_avx2(const KernelParams& p, const double x0[4][3], const double* tau4,
                  long n_steps, double* out4) {
    __m256d a[3][3], g[3], base[3];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            a[i][j] = _mm256_set1_pd(p.a[i][j]);
        }
        g[i] = _mm256_set1_pd(p.g[i]);
        base[i] = _mm256_set1_pd(p.base[i]);
    }
    const __m256d half_dt = _mm256_set1_pd(0.5 * p.dt);
    const __m256d full_dt = _mm256_set1_pd(p.dt);
    const __m256d sixth_dt = _mm256_set1_pd(p.dt / 6.0);
    const __m256d two = _mm256_set1_pd(2.0);

    State x;
    for (int i = 0; i < 3; ++i) {
        x.v[i] = _mm256_set_pd(x0[3][i], x0[2][i], x0[1][i], x0[0][i]);
        _mm256_storeu_pd(out4 + 4 * i, x.v[i]);
    }

    for (long step = 0; step < n_steps; ++step) {
        const __m256d tau_k = _mm256_loadu_pd(tau4 + 4 * step);
        State c;
        for (int i = 0; i < 3; ++i) {
            c.v[i] = _mm256_add_pd(base[i], _mm256_mul_pd(g[i], tau_k));
        }

        const State k1 = deriv(a, c, x);
        State xt;
        for (int i = 0; i < 3; ++i) xt.v[i] = _mm256_add_pd(x.v[i], _mm256_mul_pd(half_dt, k1.v[i]));
        const State k2 = deriv(a, c, xt);
        for (int i = 0; i < 3; ++i) xt.v[i] = _mm256_add_pd(x.v[i], _mm256_mul_pd(half_dt, k2.v[i]));
        const State k3 = deriv(a, c, xt);
        for (int i = 0; i < 3; ++i) xt.v[i] = _mm256_add_pd(x.v[i], _mm256_mul_pd(full_dt, k3.v[i]));
        const State k4 = deriv(a, c, xt);

        double* row = out4 + 12 * (step + 1);
        for (int i = 0; i < 3; ++i) {
            __m256d sum = _mm256_add_pd(k1.v[i], _mm256_mul_pd(two, k2.v[i]));
            sum = _mm256_add_pd(sum, _mm256_mul_pd(two, k3.v[i]));
            sum = _mm256_add_pd(sum, k4.v[i]);
            x.v[i] = _mm256_add_pd(x.v[i], _mm256_mul_pd(sixth_dt, sum));
            _mm256_storeu_pd(row + 4 * i, x.v[i]);
        }
    }
}

#else // !defined(__AVX2__)

bool kernel_avx2_compiled() { return false; }

void rk4_run_avx2(const KernelParams&, const double[4][3], const double*, long, double*) {
    throw std::runtime_error("AVX2 kernel not compiled into this build");
}

#endif

} // namespace motorctl
