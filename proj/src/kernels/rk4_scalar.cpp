// Reference RK4 kernel. Keep the operation order in sync with rk4_avx2.cpp:
// the SIMD lanes must execute this exact sequence. Compiled with
// -ffp-contract=off so the compiler cannot fuse multiply-adds here while the
// intrinsics path uses separate mul/add.

#include "motorctl/sim_kernel.hpp"

namespace motorctl {

namespace {

inline void deriv(const double a[3][3], const double c[3], const double x[3], double d[3]) {
    for (int i = 0; i < 3; ++i) {
        double acc = a[i][0] * x[0];
        acc += a[i][1] * x[1];
        acc += a[i][2] * x[2];
        d[i] = acc + c[i];
    }
}

} // namespace

void rk4_run_scalar(const KernelParams& p, const double x0[3], const double* tau,
                    long n_steps, double* out) {
    const double half_dt = 0.5 * p.dt;
    const double sixth_dt = p.dt / 6.0;

    double x[3] = {x0[0], x0[1], x0[2]};
    out[0] = x[0];
    out[1] = x[1];
    out[2] = x[2];

    double c[3], k1[3], k2[3], k3[3], k4[3], xt[3];
    for (long step = 0; step < n_steps; ++step) {
        const double tau_k = tau[step];
        for (int i = 0; i < 3; ++i) {
            c[i] = p.base[i] + p.g[i] * tau_k;
        }

        deriv(p.a, c, x, k1);
        for (int i = 0; i < 3; ++i) xt[i] = x[i] + half_dt * k1[i];
        deriv(p.a, c, xt, k2);
        for (int i = 0; i < 3; ++i) xt[i] = x[i] + half_dt * k2[i];
        deriv(p.a, c, xt, k3);
        for (int i = 0; i < 3; ++i) xt[i] = x[i] + p.dt * k3[i];
        deriv(p.a, c, xt, k4);
        for (int i = 0; i < 3; ++i) {
            double sum = k1[i] + 2.0 * k2[i];
            sum += 2.0 * k3[i];
            sum += k4[i];
            x[i] += sixth_dt * sum;
        }

        double* row = out + 3 * (step + 1);
        row[0] = x[0];
        row[1] = x[1];
        row[2] = x[2];
    }
}

} // namespace motorctl
