#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "rydfloq/bethe.hpp"
#include "rydfloq/coherence.hpp"
#include "rydfloq/domainwall.hpp"
#include "rydfloq/effective.hpp"
#include "rydfloq/floquet.hpp"
#include "rydfloq/hardware.hpp"
#include "rydfloq/observables.hpp"

namespace rydfloq::cli {

using nlohmann::json;

RunOutput::RunOutput(std::filesystem::path dir, const Output& formats) : dir_(std::move(dir)), formats_(formats)
{
    std::filesystem::create_directories(dir_);
}

void RunOutput::table(const std::string& stem, const CsvTable& t)
{
    t.save(dir_ / (stem + ".csv"));
    files_.push_back(stem + ".csv");
}

void RunOutput::series(const std::string& stem, const ObservableSeries& s, const std::string& time_label)
{
    if (formats_.csv) {
        save_series_csv(s, dir_ / (stem + ".csv"), time_label);
        files_.push_back(stem + ".csv");
    }
    if (formats_.json) document(stem, s.to_json());
}

void RunOutput::document(const std::string& stem, const json& j)
{
    std::ofstream f(dir_ / (stem + ".json"), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / (stem + ".json")).string());
    f << j.dump(2) << '\n';
    files_.push_back(stem + ".json");
}

namespace {

void progress(const std::string& msg) { std::cerr << "[rydfloq] " << msg << std::endl; }

PulseSchedule drive_of(const Physics& p)
{
    return build_perturbed_schedule(p.omega, p.tau, p.epsilon, p.gamma, p.theta);
}

json coefficients_json(const EffectiveCoefficients& c)
{
    return {{"J", c.J}, {"h", c.h}, {"g", c.g}, {"warnings", c.warnings}};
}

CMat remove_trace(const CMat& m)
{
    CMat out = m;
    out.diagonal().array() -= m.trace() / static_cast<double>(m.rows());
    return out;
}

// First cycle index of the largest value.
std::pair<std::size_t, double> peak(const std::vector<double>& v)
{
    auto it = std::max_element(v.begin(), v.end());
    return {static_cast<std::size_t>(it - v.begin()), *it};
}

void fig2_entanglement(const RunConfig& cfg, RunOutput& out)
{
    const auto& p = cfg.physics;
    ConstrainedBasis basis(p.L, p.bc);
    FloquetDriver driver(basis, drive_of(p), cfg.runtime.backend);
    auto obs = standard_observables(
        basis, {"density", "staggered", "ghz_fidelity", "ghz_phase", "qfi_density", "p_z2", "p_z2prime"});
    CsvTable corr({"cycle", "i", "j", "connected_zz"});
    RunOptions opts;
    const int stride = cfg.runtime.snapshot_stride;
    opts.on_cycle = [&](int n, const CVec& psi) {
        if (stride > 0 && n % stride == 0) {
            Eigen::MatrixXd c = connected_zz(basis, psi);
            for (int i = 0; i < p.L; ++i)
                for (int j = 0; j < p.L; ++j)
                    corr.add_row(std::vector<double>{double(n), double(i), double(j), c(i, j)});
        }
        if (n % 25 == 0) progress("cycle " + std::to_string(n) + "/" + std::to_string(cfg.runtime.n_cycles));
    };
    ObservableSeries s = stroboscopic_run(basis_state(basis, neel_z2(p.L)), driver, cfg.runtime.n_cycles, obs, opts);
    s.metadata() = {{"basis", basis.tag()}, {"dim", basis.dim()}, {"tau", p.tau}};
    out.series("timeseries", s);
    if (stride > 0) out.table("correlations", corr);

    auto [n_ghz, ghz] = peak(s.column("ghz_fidelity"));
    auto [n_qfi, qfi] = peak(s.column("qfi_density"));
    const auto& st = s.column("staggered");
    double min_abs = 1e300;
    for (double x : st) min_abs = std::min(min_abs, std::abs(x));
    out.summary = {{"dim", basis.dim()},
                   {"ghz_peak", ghz},
                   {"ghz_peak_cycle", n_ghz},
                   {"qfi_peak", qfi},
                   {"qfi_peak_cycle", n_qfi},
                   {"staggered_initial", st.front()},
                   {"staggered_min_abs", min_abs},
                   {"density_min", *std::min_element(s.column("density").begin(), s.column("density").end())},
                   {"predicted", coefficients_json(closed_form_coefficients(p.omega, p.tau, p.epsilon, p.gamma, p.theta))}};
}

void fig1b_micromotion(const RunConfig& cfg, RunOutput& out)
{
    const auto& p = cfg.physics;
    ConstrainedBasis basis(p.L, p.bc);
    FloquetDriver driver(basis, drive_of(p), cfg.runtime.backend);
    auto obs = standard_observables(basis, {"density", "staggered"});
    CVec psi0 = basis_state(basis, p.L % 2 ? Config{0} : neel_z2(p.L));
    ObservableSeries micro = micromotion_run(psi0, driver, cfg.runtime.samples_per_cycle, cfg.runtime.n_cycles, obs);
    ObservableSeries strobe = stroboscopic_run(psi0, driver, cfg.runtime.n_cycles, obs);
    out.series("micromotion", micro);
    out.series("stroboscopic", strobe);
    const auto& d = micro.column("density");
    out.summary = {{"density_min", *std::min_element(d.begin(), d.end())},
                   {"density_max", *std::max_element(d.begin(), d.end())},
                   {"stroboscopic_density", strobe.column("density")}};
}

void fig3a_domainwall(const RunConfig& cfg, RunOutput& out)
{
    const auto& p = cfg.physics;
    auto c = closed_form_coefficients(p.omega, p.tau, p.epsilon, p.gamma, p.theta);
    const int nk = cfg.runtime.grid_points;
    CsvTable band({"k", "single_dispersion", "pair_offset", "abs_lambda"});
    bool below = false, above = false;
    for (int i = 0; i < nk; ++i) {
        double k = M_PI * i / (nk - 1);
        double off = resonance_offset(k, c.h, c.J);
        below |= off < 0;
        above |= off > 0;
        band.add_row(std::vector<double>{k, single_dispersion(k, c.h), off,
                                         std::abs(coupling_lambda(k, c.g, p.bc))});
    }
    out.table("band", band);

    progress("pair-sector check at L=" + std::to_string(p.L));
    TwoWallReport rep = validate_two_dw_sector(p.L, c.h, c.J, c.g == 0.0 ? 1.0 : c.g);
    CsvTable q({"m", "k", "energy_bethe", "energy_ed", "residual", "abs_lambda_formula", "abs_lambda_operator",
                "delta_formula", "delta_ed"});
    for (std::size_t m = 0; m < rep.k.size(); ++m)
        q.add_row(std::vector<double>{double(m + 1), rep.k[m], rep.energy_bethe[m], rep.energy_ed[m], rep.residual[m],
                                      std::abs(rep.lambda_formula[m]), std::abs(rep.lambda_operator[m]),
                                      rep.delta_formula[m], rep.delta_ed[m]});
    out.table("pair_sector", q);
    out.summary = {{"coefficients", coefficients_json(c)},
                   {"resonant", below && above},
                   {"J_minus_2h_over_4h", (c.J - 2 * c.h) / (4 * std::abs(c.h))},
                   {"sector_dim", rep.sector_dim},
                   {"max_energy_error", rep.max_energy_error},
                   {"max_residual", rep.max_residual},
                   {"max_lambda_error", rep.max_lambda_error}};
}

void fig3c_phase_diagram(const RunConfig& cfg, RunOutput& out)
{
    const int n = cfg.runtime.grid_points;
    std::vector<double> grid;
    for (int i = 0; i < n; ++i) grid.push_back(1e-3 + (0.4999 - 1e-3) * i / (n - 1));
    auto rows = phase_diagram(grid, 1.0);
    CsvTable t({"n0", "U0", "K", "J_over_h", "E_over_h"});
    for (const auto& r : rows) t.add_row(std::vector<double>{r.n0, r.U0, r.K, r.J_over_h, r.E});
    out.table("phase_diagram", t);
    out.summary = {{"J_over_h_low_filling", rows.front().J_over_h},
                   {"J_over_h_half_filling", rows.back().J_over_h},
                   {"K_low_filling", rows.front().K},
                   {"K_half_filling", rows.back().K},
                   {"branch_threshold", branch_threshold()}};
}

void figS2_gamma_sweep(const RunConfig& cfg, RunOutput& out)
{
    const auto& p = cfg.physics;
    ConstrainedBasis basis(p.L, p.bc);
    auto obs = standard_observables(basis, {"p_z2", "p_z2prime", "qfi_density", "staggered", "density"});
    CsvTable traces({"gamma", "cycle", "p_z2", "p_z2prime", "qfi_density", "staggered", "density"});
    CsvTable summary({"gamma", "J", "h", "g", "resonance_ratio", "in_window", "qfi_peak", "qfi_peak_cycle"});
    json points = json::array();
    for (double gamma : cfg.sweep.at("gamma")) {
        progress("gamma " + format_double(gamma));
        Physics q = p;
        q.gamma = gamma;
        FloquetDriver driver(basis, drive_of(q), cfg.runtime.backend);
        ObservableSeries s = stroboscopic_run(basis_state(basis, neel_z2(p.L)), driver, cfg.runtime.n_cycles, obs);
        for (std::size_t n = 0; n < s.size(); ++n)
            traces.add_row(std::vector<double>{gamma, double(n), s.column("p_z2")[n], s.column("p_z2prime")[n],
                                               s.column("qfi_density")[n], s.column("staggered")[n],
                                               s.column("density")[n]});
        auto c = closed_form_coefficients(q.omega, q.tau, q.epsilon, q.gamma, q.theta);
        double ratio = std::abs(c.J - 2 * c.h) / (4 * std::abs(c.h));
        auto [nq, qmax] = peak(s.column("qfi_density"));
        summary.add_row(std::vector<double>{gamma, c.J, c.h, c.g, ratio, ratio < 1 ? 1.0 : 0.0, qmax, double(nq)});
        points.push_back({{"gamma", gamma}, {"qfi_peak", qmax}, {"in_window", ratio < 1}});
    }
    out.table("traces", traces);
    out.table("summary", summary);
    out.summary = {{"points", points}};
}

void figS3_distances(const RunConfig& cfg, RunOutput& out)
{
    const auto& p = cfg.physics;
    ConstrainedBasis basis(p.L, p.bc);
    FloquetDriver driver(basis, drive_of(p), cfg.runtime.backend);
    auto obs = standard_observables(basis, {"p_z2", "p_z2prime"});
    CsvTable dist({"cycle", "distance", "probability"});
    CsvTable weight({"cycle", "paired_weight"});
    RunOptions opts;
    opts.on_cycle = [&](int n, const CVec& psi) {
        DistanceDistribution d = domainwall_distance_distribution(basis, psi);
        weight.add_row(std::vector<double>{double(n), d.paired_weight});
        for (std::size_t l = 0; l < d.p.size(); ++l)
            dist.add_row(std::vector<double>{double(n), double(l + 1), d.empty ? 0.0 : d.p[l]});
    };
    ObservableSeries s = stroboscopic_run(basis_state(basis, neel_z2(p.L)), driver, cfg.runtime.n_cycles, obs, opts);
    out.series("populations", s);
    out.table("distances", dist);
    out.table("paired_weight", weight);
    out.summary = {{"final_p_z2", s.column("p_z2").back()}, {"final_p_z2prime", s.column("p_z2prime").back()}};
}

void fig4_hardware(const RunConfig& cfg, RunOutput& out)
{
    const auto& p = cfg.physics;
    const auto& r = cfg.runtime;
    WalkSettings s;
    s.L = p.L;
    s.omega = p.omega;
    s.tau = p.tau;
    s.epsilon = p.epsilon;
    s.w_over_tau = r.w_over_tau;
    s.delta_mf = r.delta_mf;
    s.n_cycles = r.n_cycles;
    s.dt_over_w = r.dt_over_w;
    s.integrator = r.integrator;
    s.check_convergence = r.check_convergence;
    s.calibrate_delta_mf = r.calibrate_delta_mf;
    progress("walk benchmark, full space dim " + std::to_string(1u << p.L));
    WalkResult res = quantum_walk_benchmark(s);

    CsvTable heat({"cycle", "site", "value", "model_tag"});
    auto add = [&heat](const std::vector<std::vector<double>>& occ, const std::string& tag) {
        for (std::size_t n = 0; n < occ.size(); ++n)
            for (std::size_t i = 0; i < occ[n].size(); ++i)
                heat.add_row(std::vector<std::string>{std::to_string(n), std::to_string(i), format_double(occ[n][i]), tag});
    };
    add(res.pxp, "pxp-delta");
    add(res.vdw, "vdw-gaussian");
    out.table("heatmap", heat);
    CsvTable per({"cycle", "blockade_violation", "pxp_number"});
    for (std::size_t n = 0; n < res.violation.size(); ++n)
        per.add_row(std::vector<double>{double(n), res.violation[n], res.pxp_number[n]});
    out.table("per_cycle", per);

    auto lc = [](const LightCone& c) {
        return json{{"complete", c.complete}, {"monotone", c.monotone}, {"cycles_per_site", c.cycles_per_site},
                    {"r_squared", c.r_squared}, {"ballistic", c.ballistic()}};
    };
    auto ap = arrival_cycles(res.pxp, 0.1), av = arrival_cycles(res.vdw, 0.1);
    json cal = json::array();
    for (const auto& [d, m] : res.calibration) cal.push_back({{"delta_mf", d}, {"mismatch", m}});
    out.summary = {{"arrival_threshold", 0.1},
                   {"arrival_pxp", ap},
                   {"arrival_vdw", av},
                   {"light_cone_pxp", lc(light_cone(ap))},
                   {"light_cone_vdw", lc(light_cone(av))},
                   {"max_blockade_violation", *std::max_element(res.violation.begin(), res.violation.end())},
                   {"dt_used", res.dt_used},
                   {"dt_halving_change", res.dt_halving_change},
                   {"unitarity_error", res.unitarity_error},
                   {"delta_mf_used", res.delta_mf_used},
                   {"calibration", cal},
                   {"target_h", -p.epsilon * p.omega * p.omega * p.tau / 32}};
}

void figS4_coherence(const RunConfig& cfg, RunOutput& out)
{
    const auto& p = cfg.physics;
    const auto& taus = cfg.sweep.at("tau");
    const auto& eps = cfg.sweep.at("epsilon");
    progress("coherence sweep over " + std::to_string(taus.size() * eps.size()) + " cells at L=" + std::to_string(p.L));
    CoherenceSweep sw = sweep_coherence(taus, eps, p.L, cfg.runtime.t_star, p.omega);
    CsvTable t({"tau", "abs_epsilon", "h", "t_c", "h_t_c", "fit_residual", "r_squared", "points", "ok"});
    for (const auto& c : sw.cells)
        t.add_row(std::vector<double>{c.tau, std::abs(c.epsilon), c.h, c.t_c, c.h * c.t_c, c.fit_residual, c.r_squared,
                                      double(c.points), c.ok ? 1.0 : 0.0});
    out.table("coherence", t);
    json best = nullptr;
    if (sw.best >= 0) {
        const auto& b = sw.cells[sw.best];
        best = {{"tau", b.tau}, {"abs_epsilon", std::abs(b.epsilon)}, {"h_t_c", sw.best_value}, {"t_c", b.t_c}};
    }
    out.summary = {{"argmax", best}, {"interior", sw.interior}, {"t_star", cfg.runtime.t_star}};
}

void effective_report(const RunConfig& cfg, RunOutput& out)
{
    const auto& p = cfg.physics;
    ConstrainedBasis basis(p.L, p.bc);
    PulseSchedule sched = drive_of(p);
    auto c = closed_form_coefficients(p.omega, p.tau, p.epsilon, p.gamma, p.theta);
    CMat h0 = magnus_hf(basis, sched, 0), h01 = magnus_hf(basis, sched, 1);
    CMat hc = assemble_hf(c, basis).dense();
    json rep = {{"coefficients", coefficients_json(c)},
                {"dim", basis.dim()},
                {"closed_form_vs_magnus01", operator_distance(remove_trace(hc), remove_trace(h01))},
                {"magnus0_vs_magnus01", operator_distance(h0, h01)}};
    CsvTable t({"quantity", "value"});
    t.add_row(std::vector<std::string>{"J", format_double(c.J)});
    t.add_row(std::vector<std::string>{"h", format_double(c.h)});
    t.add_row(std::vector<std::string>{"g", format_double(c.g)});
    t.add_row(std::vector<std::string>{"closed_form_vs_magnus01", format_double(rep["closed_form_vs_magnus01"])});
    FloquetDriver driver(basis, sched, Backend::dense_eigen);
    try {
        CMat hx = floquet_log_hamiltonian(driver.cycle_unitary(), p.tau);
        rep["exact_vs_magnus01"] = operator_distance(hx, h01);
        rep["exact_vs_magnus0"] = operator_distance(hx, h0);
        rep["exact_vs_closed_form"] = operator_distance(remove_trace(hx), remove_trace(hc));
        for (const char* k : {"exact_vs_magnus01", "exact_vs_magnus0", "exact_vs_closed_form"})
            t.add_row(std::vector<std::string>{k, format_double(rep[k])});
    } catch (const std::exception& e) {
        rep["exact_log"] = std::string("unavailable: ") + e.what();
    }
    out.table("effective", t);
    out.document("report", rep);
    out.summary = rep;
}

}  // namespace

void run_scenario(const RunConfig& cfg, RunOutput& out)
{
    const std::string& s = cfg.scenario;
    if (s == "fig2-entanglement") fig2_entanglement(cfg, out);
    else if (s == "fig1b-micromotion") fig1b_micromotion(cfg, out);
    else if (s == "fig3a-domainwall") fig3a_domainwall(cfg, out);
    else if (s == "fig3c-phase-diagram") fig3c_phase_diagram(cfg, out);
    else if (s == "figS2-gamma-sweep") figS2_gamma_sweep(cfg, out);
    else if (s == "figS3-distances") figS3_distances(cfg, out);
    else if (s == "fig4-hardware") fig4_hardware(cfg, out);
    else if (s == "figS4-coherence-sweep") figS4_coherence(cfg, out);
    else if (s == "effective-report") effective_report(cfg, out);
    else throw std::invalid_argument("unknown scenario '" + s + "'");
}

}  // namespace rydfloq::cli
