#include "motorctl/report.hpp"

#include <fstream>

#include "json.hpp"

#include "motorctl/errors.hpp"

namespace motorctl {

namespace {

using nlohmann::json;

// Unit suffix for the gain entry multiplying each state (control is volts).
const char* gain_unit(int state) {
    switch (state) {
    case 0: return "V_per_rad";
    case 1: return "V_s_per_rad";
    default: return "V_per_A";
    }
}

json spectrum_json(const Spectrum& spec) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        re.push_back(spec.eigenvalues[i].real());
        im.push_back(spec.eigenvalues[i].imag());
    }
    return json{{"re_1_s", re}, {"im_1_s", im}};
}

json design_json(const PlantModel& model, const DesignResult& d) {
    json k_full = json::object();
    for (int i = 0; i < 3; ++i) {
        k_full[model.state_labels[static_cast<size_t>(i)] + "_" + gain_unit(i)] = d.k_full[i];
    }
    json k_out = json::object();
    for (int i = 0; i < d.k_out.size(); ++i) {
        k_out[model.state_labels[static_cast<size_t>(i)] + "_" + gain_unit(i)] = d.k_out[i];
    }
    json retained = json::array();
    for (const int idx : d.retained) {
        retained.push_back(idx);
    }
    return json{
        {"k_full", k_full},
        {"k_out", k_out},
        {"full_spectrum", spectrum_json(d.full_spectrum)},
        {"retained_indices", retained},
        {"out_spectrum", spectrum_json(d.out_spectrum)},
        {"iss",
         {{"spectral_abscissa_1_s", d.iss.spectral_abscissa},
          {"sym_lambda_max_1_s", d.iss.sym_lambda_max},
          {"gtg_1_per_kg2_m4", d.iss.gtg},
          {"passes_paper_condition", d.iss.passes_paper_condition},
          {"passes_strict_condition", d.iss.passes_strict_condition},
          {"gtg_positive", d.iss.gtg_positive}}},
    };
}

} // namespace

std::string design_report_text(const RunConfig& cfg, const PlantModel& model,
                               const DesignResult& final_design, const DesignResult* nominal) {
    json report{
        {"control_kind", cfg.control_kind == ControlKind::speed ? "speed" : "position"},
        {"weights", {{"q_scale", cfg.weights.q_scale}, {"r_scale", cfg.weights.r_scale}}},
        {"tolerances",
         {{"eig_residual_rel", EigOptions{}.residual_tol},
          {"care_residual_rel", 1e-8},
          {"place_verify_abs", 1e-6},
          {"projection_cond_max", 1e12},
          {"retained_match_abs", 1e-6},
          {"iss_threshold_1_s", kIssThreshold}}},
        {"dominance_tie_break", "ascending_abs_im"},
        {"design", design_json(model, final_design)},
    };
    if (nominal != nullptr) {
        report["nominal_design"] = design_json(model, *nominal);
        report["repair_applied"] = true;
    } else {
        report["repair_applied"] = false;
    }
    return report.dump(2) + "\n";
}

std::string monte_carlo_summary_text(const RunConfig& cfg, const PlantModel& model,
                                     const MonteCarloSummary& summary,
                                     const std::optional<GuardVerdict>& guard) {
    const bool speed = model.kind == ControlKind::speed;
    const std::string err_unit = speed ? "rad_s" : "rad";

    json per_run = json::array();
    for (const double e : summary.terminal_tracking_error) {
        if (std::isfinite(e)) {
            per_run.push_back(e);
        } else {
            per_run.push_back(nullptr); // diverged run
        }
    }

    // Down-sample the pooled series so the summary stays compact.
    const size_t n = summary.error_mean_vs_time.size();
    size_t stride = 1;
    while (n / stride > 600) {
        stride *= 10;
    }
    json mean_series = json::array();
    json std_series = json::array();
    for (size_t k = 0; k < n; k += stride) {
        mean_series.push_back(summary.error_mean_vs_time[k]);
        std_series.push_back(summary.error_std_vs_time[k]);
    }

    json out{
        {"control_kind", speed ? "speed" : "position"},
        {"n_runs", summary.n_runs},
        {"diverged_count", summary.diverged_count},
        {"terminal_tracking_error_mean_" + err_unit, summary.terminal_error_mean()},
        {"terminal_tracking_error_std_" + err_unit, summary.terminal_error_std()},
        {"terminal_tracking_error_per_run_" + err_unit, per_run},
        {"state0_coordinate", speed ? "eps" : "theta_minus_ref"},
        {"max_abs_state0_rad", summary.max_abs_by_component[0]},
        {"max_abs_state1_rad_s", summary.max_abs_by_component[1]},
        {"max_abs_state2_A", summary.max_abs_by_component[2]},
        {"series_stride_steps", stride},
        {"series_dt_s", summary.dt * static_cast<double>(stride)},
        {"error_mean_vs_time_" + err_unit, mean_series},
        {"error_std_vs_time_" + err_unit, std_series},
    };
    out["weights"] = {{"q_scale", cfg.weights.q_scale}, {"r_scale", cfg.weights.r_scale}};
    if (guard) {
        out["disturbance_guard"] = {{"sigma_Nm", guard->sigma_Nm},
                                    {"limit_Nm", guard->limit_Nm},
                                    {"within_protocol", guard->ok}};
    }
    return out.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw InputError("failed writing " + path.string());
    }
}

} // namespace motorctl
