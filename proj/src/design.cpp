#include "motorctl/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "motorctl/care.hpp"
#include "motorctl/errors.hpp"
#include "motorctl/place.hpp"

namespace motorctl {

namespace {

constexpr double kRetainedMatchTol = 1e-6;

std::string describe_indices(const std::vector<int>& idx) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < idx.size(); ++i) {
        os << (i ? ", " : "") << idx[i];
    }
    os << "}";
    return os.str();
}

// Every retained eigenvalue must reappear in the output-feedback spectrum.
void check_retention(const Spectrum& full, const std::vector<int>& retained,
                     const Spectrum& out) {
    for (const int idx : retained) {
        const Complex want = full.eigenvalues[idx];
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < out.eigenvalues.size(); ++j) {
            best = std::min(best, std::abs(out.eigenvalues[j] - want));
        }
        if (!(best <= kRetainedMatchTol)) {
            throw NumericalError("retained eigenvalue moved by " + std::to_string(best) +
                                 " under projection");
        }
    }
}

DesignResult assemble(const PlantModel& model, RowVector k_full, Spectrum full_spectrum,
                      const RetentionPolicy& policy) {
    DesignResult result;
    result.k_full = std::move(k_full);
    result.full_spectrum = std::move(full_spectrum);
    result.retained = select_retained(result.full_spectrum, policy);
    result.k_out = project_gain(result.k_full, result.full_spectrum, result.retained,
                                model.c_output);
    result.out_spectrum = output_feedback_spectrum(model, result.k_out);
    check_retention(result.full_spectrum, result.retained, result.out_spectrum);
    result.iss = iss_check(model, result.k_out);
    return result;
}

} // namespace

std::pair<RowVector, Spectrum> lqr_full_state(const PlantModel& model, const LqrWeights& w) {
    if (!(w.q_scale > 0.0) || !(w.r_scale > 0.0)) {
        throw InputError("LQR weights must be strictly positive");
    }
    const Eigen::Index n = model.a.rows();
    const Matrix q = w.q_scale * Matrix::Identity(n, n);
    const Matrix r = w.r_scale * Matrix::Identity(1, 1);
    const Matrix p = solve_care(model.a, model.b_input, q, r);
    const RowVector k = model.b_input.transpose() * p / w.r_scale;
    Spectrum spectrum = eig_decompose(model.a - model.b_input * k, {.name = "A - B*Kf"});
    if (spectrum.spectral_abscissa() >= 0.0) {
        throw NumericalError("LQR closed loop is not Hurwitz");
    }
    return {k, std::move(spectrum)};
}

std::vector<int> select_retained(const Spectrum& spec, const RetentionPolicy& policy) {
    const int n = spec.size();
    if (policy.r < 1 || policy.r > n) {
        throw InputError("retained count must be between 1 and n");
    }

    if (policy.mode == RetentionPolicy::Mode::explicit_indices) {
        std::set<int> chosen;
        for (const int idx : policy.indices) {
            if (idx < 0 || idx >= n) {
                throw InputError("retention index " + std::to_string(idx) + " out of range");
            }
            chosen.insert(idx);
        }
        if (static_cast<int>(chosen.size()) != policy.r) {
            throw SelectionInfeasibleError("explicit retention needs exactly r distinct indices");
        }
        for (const int idx : chosen) {
            if (!spec.is_real(idx) && chosen.count(spec.pair_index[idx]) == 0) {
                throw SelectionInfeasibleError(
                    "explicit retention set is not closed under conjugation");
            }
        }
        return {chosen.begin(), chosen.end()};
    }

    // dominant_auto: the spectrum is already in dominance order.
    std::vector<int> picked;
    std::vector<bool> taken(static_cast<size_t>(n), false);
    for (int i = 0; i < n && static_cast<int>(picked.size()) < policy.r; ++i) {
        if (taken[static_cast<size_t>(i)]) {
            continue;
        }
        if (spec.is_real(i)) {
            picked.push_back(i);
            taken[static_cast<size_t>(i)] = true;
        } else {
            if (static_cast<int>(picked.size()) + 2 > policy.r) {
                continue; // pair would overflow r; fall through to later eigenvalues
            }
            const int partner = spec.pair_index[static_cast<size_t>(i)];
            picked.push_back(i);
            picked.push_back(partner);
            taken[static_cast<size_t>(i)] = true;
            taken[static_cast<size_t>(partner)] = true;
        }
    }
    if (static_cast<int>(picked.size()) == policy.r) {
        std::sort(picked.begin(), picked.end());
        return picked;
    }

    // The greedy walk can dead-end when only a complex pair could complete the
    // set (e.g. a dominant real eigenvalue plus one pair, r = 2: the pair must
    // be taken instead). Fall back to the most dominant conjugation-closed
    // subset of size r, searched in lexicographic index order.
    std::vector<int> chosen;
    auto closed = [&](const std::vector<int>& set) {
        for (const int idx : set) {
            if (!spec.is_real(idx) &&
                std::find(set.begin(), set.end(), spec.pair_index[static_cast<size_t>(idx)]) ==
                    set.end()) {
                return false;
            }
        }
        return true;
    };
    std::vector<int> current;
    auto search = [&](auto&& self, int start) -> bool {
        if (static_cast<int>(current.size()) == policy.r) {
            if (closed(current)) {
                chosen = current;
                return true;
            }
            return false;
        }
        for (int i = start; i < n; ++i) {
            current.push_back(i);
            if (self(self, i + 1)) {
                return true;
            }
            current.pop_back();
        }
        return false;
    };
    if (!search(search, 0)) {
        throw SelectionInfeasibleError(
            "no conjugation-closed selection of size " + std::to_string(policy.r) + " exists");
    }
    return chosen;
}

RowVector project_gain(const RowVector& k_full, const Spectrum& full_spectrum,
                       const std::vector<int>& retained, const Matrix& c_output,
                       double cond_max) {
    const Eigen::Index n = full_spectrum.eigenvalues.size();
    const Eigen::Index r = c_output.rows();
    if (static_cast<Eigen::Index>(retained.size()) != r) {
        throw DimensionError("retained set size must equal the output count");
    }
    if (k_full.size() != n || c_output.cols() != n) {
        throw DimensionError("gain/output dimensions do not match the spectrum");
    }

    // Realified basis of the retained invariant subspace: a conjugate pair
    // (v, conj v) contributes (Re v, Im v). The projected gain is invariant
    // to this change of basis.
    Matrix v_r(n, r);
    std::set<int> pending(retained.begin(), retained.end());
    Eigen::Index col = 0;
    for (const int idx : retained) {
        if (pending.count(idx) == 0) {
            continue;
        }
        pending.erase(idx);
        if (full_spectrum.is_real(idx)) {
            v_r.col(col++) = full_spectrum.eigenvectors.col(idx).real();
        } else {
            const int partner = full_spectrum.pair_index[static_cast<size_t>(idx)];
            if (pending.count(partner) == 0) {
                throw InputError("retained set is not closed under conjugation");
            }
            pending.erase(partner);
            v_r.col(col++) = full_spectrum.eigenvectors.col(idx).real();
            v_r.col(col++) = full_spectrum.eigenvectors.col(idx).imag();
        }
    }

    const Matrix cv = c_output * v_r;
    Eigen::JacobiSVD<Matrix> svd(cv);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > cond_max) {
        throw ProjectionInfeasibleError("projection infeasible for retained set " +
                                        describe_indices(retained) + ": C*Vr has condition " +
                                        std::to_string(smin > 0.0 ? smax / smin
                                                                  : std::numeric_limits<double>::infinity()));
    }

    const RowVector kv = k_full * v_r;
    return cv.transpose().partialPivLu().solve(kv.transpose()).transpose();
}

Spectrum output_feedback_spectrum(const PlantModel& model, const RowVector& k_out) {
    if (k_out.size() != model.c_output.rows()) {
        throw DimensionError("k_out size must equal the output count");
    }
    return eig_decompose(model.a - model.b_input * (k_out * model.c_output),
                         {.name = "A - B*Ko*C"});
}

IssReport iss_check(const PlantModel& model, const RowVector& k_out) {
    const Matrix closed = model.a - model.b_input * (k_out * model.c_output);
    IssReport report;
    report.spectral_abscissa = eig_decompose(closed, {.name = "A - B*Ko*C"}).spectral_abscissa();
    report.sym_lambda_max = symmetric_part_lambda_max(closed);
    report.gtg = model.g_dist.squaredNorm();
    report.passes_paper_condition = report.spectral_abscissa < kIssThreshold;
    report.passes_strict_condition = report.sym_lambda_max < kIssThreshold;
    report.gtg_positive = report.gtg > 0.0;
    return report;
}

DesignResult design_controller(const PlantModel& model, const LqrWeights& w,
                               const RetentionPolicy& policy) {
    auto [k_full, spectrum] = lqr_full_state(model, w);
    return assemble(model, std::move(k_full), std::move(spectrum), policy);
}

DesignResult design_controller(const PlantModel& model, const LqrWeights& w) {
    return design_controller(model, w, RetentionPolicy::dominant(model.outputs()));
}

DesignResult repair_via_pole_shift(const PlantModel& model, const LqrWeights& w,
                                   const ShiftMap& shifts, const RetentionPolicy& policy,
                                   double match_tol) {
    auto [k_lqr, lqr_spectrum] = lqr_full_state(model, w);
    if (shifts.empty()) {
        return assemble(model, std::move(k_lqr), std::move(lqr_spectrum), policy);
    }

    // Relocate the mapped eigenvalues; the rest stay as placement targets.
    std::vector<Complex> targets;
    targets.reserve(static_cast<size_t>(lqr_spectrum.size()));
    for (Eigen::Index i = 0; i < lqr_spectrum.eigenvalues.size(); ++i) {
        targets.push_back(lqr_spectrum.eigenvalues[i]);
    }
    for (const PoleShift& shift : shifts) {
        const double tol = match_tol * (1.0 + std::abs(shift.from));
        bool matched = false;
        for (Complex& target : targets) {
            if (std::abs(target - shift.from) <= tol) {
                target = shift.to;
                matched = true;
                break;
            }
        }
        if (!matched) {
            std::ostringstream os;
            os << "shift source " << shift.from.real();
            if (shift.from.imag() != 0.0) {
                os << (shift.from.imag() > 0 ? "+" : "") << shift.from.imag() << "i";
            }
            os << " does not match any closed-loop eigenvalue";
            throw InputError(os.str());
        }
    }

    const RowVector k_placed = place_poles_siso(model.a, model.b_input, targets);
    Spectrum placed_spectrum =
        eig_decompose(model.a - model.b_input * k_placed, {.name = "A - B*Kshift"});
    return assemble(model, k_placed, std::move(placed_spectrum), policy);
}

DesignResult repair_via_pole_shift(const PlantModel& model, const LqrWeights& w,
                                   const ShiftMap& shifts) {
    return repair_via_pole_shift(model, w, shifts, RetentionPolicy::dominant(model.outputs()),
                                 1e-6);
}

} // namespace motorctl
