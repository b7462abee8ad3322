#include "rydfloq/hardware.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include "rydfloq/observables.hpp"
#include "rydfloq/propagator.hpp"

namespace rydfloq {

double vdw_coupling(const VdWModel& m, int i, int j)
{
    int r = std::abs(i - j);
    if (m.bc == Boundary::periodic) r = std::min(r, m.L - r);
    if (r == 0) throw std::invalid_argument("vdw coupling needs distinct sites");
    return m.omega * std::pow(m.Rb / r, 6);
}

SparseOperator build_vdw_hamiltonian(const VdWModel& m)
{
    if (m.L < 2 || m.L > max_full_space_sites)
        throw std::invalid_argument("full-space model needs 2 <= L <= " + std::to_string(max_full_space_sites));
    if (!(m.Rb > 0.0)) throw std::invalid_argument("blockade radius must be positive");
    const std::size_t dim = std::size_t{1} << m.L;
    std::vector<Triplet> t;
    t.reserve(dim * (m.L + 1));
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(m.L, m.L);
    for (int i = 0; i < m.L; ++i)
        for (int j = i + 1; j < m.L; ++j) V(i, j) = vdw_coupling(m, i, j);
    for (std::size_t c = 0; c < dim; ++c) {
        double e = 0.0;
        for (int i = 0; i < m.L; ++i) {
            if (!((c >> i) & 1u)) continue;
            for (int j = i + 1; j < m.L; ++j)
                if ((c >> j) & 1u) e += V(i, j);
        }
        if (e != 0.0) t.emplace_back(c, c, e);
        for (int i = 0; i < m.L; ++i) t.emplace_back(c ^ (std::size_t{1} << i), c, m.omega / 2);
    }
    return from_triplets(dim, t, "full-L" + std::to_string(m.L));
}

Eigen::VectorXd full_number_diagonal(int L)
{
    const std::size_t dim = std::size_t{1} << L;
    Eigen::VectorXd n(static_cast<Eigen::Index>(dim));
    for (std::size_t c = 0; c < dim; ++c) n[static_cast<Eigen::Index>(c)] = std::popcount(c);
    return n;
}

GaussianDrive::GaussianDrive(const PulseSchedule& schedule, double w, double delta_mf, int n_cycles,
                             double echo_weight)
    : tau_(schedule.tau), w_(w), delta_mf_(delta_mf), n_cycles_(n_cycles)
{
    if (!(w > 0.0)) throw std::invalid_argument("pulse width must be positive");
    if (n_cycles < 1) throw std::invalid_argument("n_cycles must be at least 1");
    schedule.validate();
    for (int n = 0; n < n_cycles; ++n)
        for (const auto& p : schedule.pulses) {
            double weight = p.kind == PulseKind::echo_pi ? echo_weight : p.weight;
            double center = n * tau_ + p.t;
            if (!lobes_.empty() && lobes_.back().center == center) lobes_.back().weight += weight;
            else lobes_.push_back({center, weight});
        }
}

double GaussianDrive::detuning(double t) const
{
    const double norm = 1.0 / (w_ * std::sqrt(2 * M_PI));
    double d = delta_mf_;
    for (const auto& l : lobes_) {
        double x = (t - l.center) / w_;
        if (std::abs(x) < 12) d += l.weight * norm * std::exp(-0.5 * x * x);
    }
    return d;
}

SampledSchedule sample_schedule(const GaussianDrive& drive, double dt)
{
    if (!(dt > 0.0) || dt > drive.width() / 20 * (1 + 1e-12))
        throw std::invalid_argument("dt must resolve the pulse width with at least 20 points per sigma");
    SampledSchedule s;
    s.w = drive.width();
    s.dt = dt;
    const long n = std::lround(std::ceil(drive.duration() / dt));
    for (long k = 0; k <= n; ++k) {
        double t = std::min(k * dt, drive.duration());
        s.times.push_back(t);
        s.delta_of_t.push_back(drive.detuning(t));
    }
    return s;
}

std::string to_string(Integrator m) { return m == Integrator::midpoint ? "midpoint" : "cfm4"; }

Integrator integrator_from_string(const std::string& s)
{
    if (s == "midpoint") return Integrator::midpoint;
    if (s == "cfm4") return Integrator::cfm4;
    throw std::invalid_argument("unknown integrator '" + s + "'");
}

CVec integrate_tdse(const CVec& state, const SparseOperator& h_static, const Eigen::VectorXd& ndiag,
                    const GaussianDrive& drive, double t0, double t1, double dt, Integrator method)
{
    require_normalized(state);
    if (ndiag.size() != state.size() || h_static.mat.rows() != state.size())
        throw std::invalid_argument("integrate_tdse: dimension mismatch");
    if (!(dt > 0.0) || t1 < t0) throw std::invalid_argument("integrate_tdse: bad time window");
    const long steps = std::max(1L, std::lround(std::ceil((t1 - t0) / dt - 1e-9)));
    const double h = (t1 - t0) / steps;

    SpMat N(ndiag.size(), ndiag.size());
    {
        std::vector<Triplet> t;
        for (Eigen::Index k = 0; k < ndiag.size(); ++k)
            if (ndiag[k] != 0.0) t.emplace_back(k, k, ndiag[k]);
        N.setFromTriplets(t.begin(), t.end());
    }
    // The Krylov exponent is rebuilt each substep; the sparsity pattern of
    // H_static + N is fixed, so only values change.
    SpMat A = h_static.mat + N;
    SpMat Hs = h_static.mat + 0.0 * N;
    auto step_exp = [&](const CVec& v, double scale_static, double delta) {
        A = scale_static * Hs - delta * N;
        return KrylovExp(A).apply(v, h);
    };

    const double r3 = std::sqrt(3.0);
    const double c1 = 0.5 - r3 / 6, c2 = 0.5 + r3 / 6;
    const double a1 = 0.25 + r3 / 6, a2 = 0.25 - r3 / 6;
    CVec psi = state;
    for (long k = 0; k < steps; ++k) {
        const double t = t0 + k * h;
        if (method == Integrator::midpoint) {
            psi = step_exp(psi, 1.0, drive.detuning(t + h / 2));
        } else {
            const double d1 = drive.detuning(t + c1 * h), d2 = drive.detuning(t + c2 * h);
            psi = step_exp(psi, a1 + a2, a1 * d1 + a2 * d2);
            psi = step_exp(psi, a1 + a2, a2 * d1 + a1 * d2);
        }
    }
    return psi;
}

double blockade_violation(const CVec& psi, int L, Boundary bc)
{
    double p = 0.0;
    for (Eigen::Index c = 0; c < psi.size(); ++c)
        if (!is_legal(static_cast<Config>(c), L, bc)) p += std::norm(psi[c]);
    return p;
}

namespace {

std::vector<double> full_occupations(const CVec& psi, int L)
{
    std::vector<double> n(L, 0.0);
    for (Eigen::Index c = 0; c < psi.size(); ++c) {
        double p = std::norm(psi[c]);
        if (p == 0.0) continue;
        for (int i = 0; i < L; ++i)
            if ((c >> i) & 1) n[i] += p;
    }
    return n;
}

std::vector<CVec> run_vdw(const WalkSettings& s, const SparseOperator& H, const Eigen::VectorXd& nd,
                          const GaussianDrive& drive, double dt, int n_cycles)
{
    CVec psi = CVec::Zero(H.mat.rows());
    psi[1] = 1.0;
    std::vector<CVec> out{psi};
    for (int n = 0; n < n_cycles; ++n) {
        psi = integrate_tdse(psi, H, nd, drive, n * s.tau, (n + 1) * s.tau, dt, s.integrator);
        out.push_back(psi);
    }
    return out;
}

std::vector<std::vector<double>> pxp_walk(const WalkSettings& s, const PulseSchedule& sched)
{
    ConstrainedBasis cb(s.L, Boundary::periodic);
    FloquetDriver driver(cb, sched);
    CVec psi = basis_state(cb, Config{1});
    std::vector<std::vector<double>> occ;
    for (int n = 0; n <= s.n_cycles; ++n) {
        if (n > 0) psi = driver.cycle(psi);
        Eigen::VectorXd o = site_occupations(cb, psi);
        occ.emplace_back(o.data(), o.data() + o.size());
    }
    return occ;
}

}  // namespace

double occupation_mismatch(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    if (n == 0) throw std::invalid_argument("occupation_mismatch: empty heatmap");
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        if (a[c].size() != b[c].size()) throw std::invalid_argument("occupation_mismatch: site count differs");
        for (std::size_t i = 0; i < a[c].size(); ++i) s += std::abs(a[c][i] - b[c][i]);
    }
    return s / n;
}

WalkResult quantum_walk_benchmark(const WalkSettings& s)
{
    if (s.n_cycles < 1) throw std::invalid_argument("n_cycles must be at least 1");
    const double eps = s.epsilon, gamma = -2 * eps, theta = -eps;
    PulseSchedule sched = build_perturbed_schedule(s.omega, s.tau, eps, gamma, theta);
    WalkResult res;

    auto pxp_future = std::async(std::launch::async, [&] { return pxp_walk(s, sched); });

    const double w = s.w_over_tau * s.tau;
    const double dt = s.dt_over_w * w;
    res.dt_used = dt;
    Eigen::VectorXd nd = full_number_diagonal(s.L);
    auto model_for = [&](double delta) {
        return VdWModel{s.L, s.omega, s.Rb, delta * s.omega, Boundary::periodic};
    };
    auto occupations = [&](const std::vector<CVec>& states) {
        std::vector<std::vector<double>> occ;
        for (const auto& v : states) occ.push_back(full_occupations(v, s.L));
        return occ;
    };

    res.pxp = pxp_future.get();
    for (const auto& row : res.pxp) {
        double t = 0.0;
        for (double x : row) t += x;
        res.pxp_number.push_back(t);
    }

    double delta = s.delta_mf;
    if (s.calibrate_delta_mf && s.delta_mf != 0.0) {
        const int nc = std::min(s.calibration_cycles, s.n_cycles);
        std::vector<std::vector<double>> ref(res.pxp.begin(), res.pxp.begin() + nc + 1);
        double best = 0.0;
        for (double d : {std::abs(s.delta_mf), -std::abs(s.delta_mf)}) {
            VdWModel m = model_for(d);
            GaussianDrive drive(sched, w, m.delta_mf, nc);
            double mis = occupation_mismatch(occupations(run_vdw(s, build_vdw_hamiltonian(m), nd, drive, dt, nc)), ref);
            res.calibration.emplace_back(d, mis);
            if (res.calibration.size() == 1 || mis < best) {
                best = mis;
                delta = d;
            }
        }
    }
    res.delta_mf_used = delta;

    VdWModel m = model_for(delta);
    SparseOperator H = build_vdw_hamiltonian(m);
    GaussianDrive drive(sched, w, m.delta_mf, s.n_cycles);
    auto states = run_vdw(s, H, nd, drive, dt, s.n_cycles);
    res.vdw = occupations(states);
    for (const auto& v : states) {
        res.violation.push_back(blockade_violation(v, s.L, Boundary::periodic));
        res.unitarity_error = std::max(res.unitarity_error, std::abs(v.norm() - 1.0));
    }
    if (s.check_convergence) {
        auto fine = run_vdw(s, H, nd, drive, dt / 2, s.n_cycles);
        res.dt_halving_change = (fine.back() - states.back()).norm();
        if (!(res.dt_halving_change < s.convergence_tol)) {
            std::ostringstream os;
            os << "dt-halving changed the final state by " << res.dt_halving_change << " (tolerance "
               << s.convergence_tol << ", dt " << dt << ", integrator " << to_string(s.integrator) << ")";
            throw StepSizeError(os.str(), res.dt_halving_change, dt);
        }
    }
    return res;
}

std::vector<int> arrival_cycles(const std::vector<std::vector<double>>& occ, double threshold)
{
    if (occ.empty()) return {};
    const int L = static_cast<int>(occ.front().size());
    std::vector<int> out;
    for (int d = 1; d <= L / 2; ++d) {
        int hit = -1;
        for (std::size_t n = 0; n < occ.size() && hit < 0; ++n) {
            double p = occ[n][d] + (d != L - d ? occ[n][L - d] : 0.0);
            if (p >= threshold) hit = static_cast<int>(n);
        }
        out.push_back(hit);
    }
    return out;
}

LightCone light_cone(const std::vector<int>& arrivals)
{
    LightCone lc;
    if (arrivals.size() < 2) return lc;
    lc.complete = std::all_of(arrivals.begin(), arrivals.end(), [](int a) { return a >= 0; });
    lc.monotone = std::is_sorted(arrivals.begin(), arrivals.end());
    if (!lc.complete) return lc;
    const double n = static_cast<double>(arrivals.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < arrivals.size(); ++k) {
        double x = k + 1.0, y = arrivals[k];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
    lc.cycles_per_site = cxy / vx;
    lc.r_squared = vy > 0 ? cxy * cxy / (vx * vy) : 0.0;
    return lc;
}

}  // namespace rydfloq
