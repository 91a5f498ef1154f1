#pragma once

#include <utility>
#include <vector>

#include "motorctl/matrix.hpp"
#include "motorctl/motor.hpp"
#include "motorctl/spectrum.hpp"

namespace motorctl {

/// Quadratic cost weights: Q = q_scale * I, R = r_scale (scalar input).
struct LqrWeights {
    double q_scale = 1.0;
    double r_scale = 1.0;
};

/// How to choose the eigenvalues the output-feedback loop retains.
struct RetentionPolicy {
    enum class Mode { dominant_auto, explicit_indices };

    Mode mode = Mode::dominant_auto;
    int r = 2;
    std::vector<int> indices; // explicit_indices mode only

    static RetentionPolicy dominant(int r_count) {
        return RetentionPolicy{Mode::dominant_auto, r_count, {}};
    }
    static RetentionPolicy explicit_set(std::vector<int> idx) {
        const int r_count = static_cast<int>(idx.size());
        return RetentionPolicy{Mode::explicit_indices, r_count, std::move(idx)};
    }
};

/// Disturbance-to-state stability report for the loop A - B Ko C.
///
/// passes_paper_condition checks the spectral abscissa against -1/2, which is
/// how the source condition is stated; passes_strict_condition applies the
/// same threshold to lambda_max of the symmetric part, which is the constant
/// actually valid in the quadratic-form bound. Both are reported.
struct IssReport {
    double spectral_abscissa = 0.0;
    double sym_lambda_max = 0.0;
    double gtg = 0.0; // G'G = nu^2, scalar disturbance channel
    bool passes_paper_condition = false;
    bool passes_strict_condition = false;
    bool gtg_positive = false;
};

struct DesignResult {
    RowVector k_full;            // 1 x n full-state gain
    RowVector k_out;             // 1 x r output-feedback gain, always real
    Spectrum full_spectrum;      // eig(A - B k_full)
    std::vector<int> retained;   // indices into full_spectrum
    Spectrum out_spectrum;       // eig(A - B k_out C)
    IssReport iss;
};

/// One eigenvalue relocation applied before the repair placement.
struct PoleShift {
    Complex from;
    Complex to;
};
using ShiftMap = std::vector<PoleShift>;

inline constexpr double kIssThreshold = -0.5;

/// LQR gain k = R^{-1} B' P and the closed-loop spectrum.
std::pair<RowVector, Spectrum> lqr_full_state(const PlantModel& model,
                                              const LqrWeights& w);

/// Pick policy.r eigenvalue indices, closed under conjugation. dominant_auto
/// walks ascending |Re|, promoting the conjugate partner whenever a complex
/// eigenvalue is picked; a pair that would overflow r is skipped in favour of
/// the next real eigenvalue.
std::vector<int> select_retained(const Spectrum& spec, const RetentionPolicy& policy);

/// Output-feedback gain Ko = K Vr (C Vr)^{-1}. Complex retained pairs are
/// realified as (Re v, Im v) columns first, so the result is always real.
/// Throws ProjectionInfeasibleError when cond(C Vr) exceeds cond_max.
RowVector project_gain(const RowVector& k_full, const Spectrum& full_spectrum,
                       const std::vector<int>& retained, const Matrix& c_output,
                       double cond_max = 1e12);

/// Spectrum of A - B k_out C.
Spectrum output_feedback_spectrum(const PlantModel& model, const RowVector& k_out);

IssReport iss_check(const PlantModel& model, const RowVector& k_out);

/// Full pipeline: LQR, retention, projection, output spectrum, ISS report.
DesignResult design_controller(const PlantModel& model, const LqrWeights& w,
                               const RetentionPolicy& policy);
DesignResult design_controller(const PlantModel& model, const LqrWeights& w);

/// Re-derive the design after relocating eigenvalues of the LQR closed loop:
/// the shifted spectrum is imposed with single-input pole placement (the
/// unshifted eigenvalues stay as targets), then retention and projection run
/// as usual. An empty shift map reproduces the nominal design.
DesignResult repair_via_pole_shift(const PlantModel& model, const LqrWeights& w,
                                   const ShiftMap& shifts,
                                   const RetentionPolicy& policy,
                                   double match_tol = 1e-6);
DesignResult repair_via_pole_shift(const PlantModel& model, const LqrWeights& w,
                                   const ShiftMap& shifts);

} // namespace motorctl
