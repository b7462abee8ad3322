#include "rydfloq/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rydfloq {

void PulseSchedule::validate() const
{
    if (!(omega > 0.0) || !(tau > 0.0)) throw std::invalid_argument("omega and tau must be positive");
    for (std::size_t k = 0; k < pulses.size(); ++k) {
        const Pulse& p = pulses[k];
        if (!std::isfinite(p.weight)) throw std::invalid_argument("pulse weight must be finite");
        if (p.t < 0.0 || p.t > tau) throw std::invalid_argument("pulse time outside [0, tau]");
        if (k > 0 && p.t < pulses[k - 1].t) throw std::invalid_argument("pulses must be sorted by time");
    }
}

std::vector<Pulse> PulseSchedule::perturbations() const
{
    std::vector<Pulse> out;
    for (const auto& p : pulses)
        if (p.kind == PulseKind::perturbation) out.push_back(p);
    return out;
}

PulseSchedule build_echo_schedule(double omega, double tau, double echo_weight)
{
    if (!(omega > 0.0) || !(tau > 0.0)) throw std::invalid_argument("omega and tau must be positive");
    PulseSchedule s;
    s.omega = omega;
    s.tau = tau;
    s.pulses = {{tau / 4, echo_weight, PulseKind::echo_pi}, {3 * tau / 4, echo_weight, PulseKind::echo_pi}};
    return s;
}

PulseSchedule build_perturbed_schedule(double omega, double tau, double epsilon, double gamma, double theta)
{
    PulseSchedule s = build_echo_schedule(omega, tau);
    s.pulses = {
        {tau / 4, epsilon, PulseKind::perturbation},
        {tau / 4, M_PI, PulseKind::echo_pi},
        {tau / 2, theta, PulseKind::perturbation},
        {3 * tau / 4, epsilon, PulseKind::perturbation},
        {3 * tau / 4, M_PI, PulseKind::echo_pi},
        {tau, gamma - theta, PulseKind::perturbation},
    };
    s.params = DriveParams{epsilon, gamma, theta};
    return s;
}

double effective_time(double t, double tau)
{
    if (t < 0.0 || t > tau) throw std::invalid_argument("effective_time needs t in [0, tau]");
    return std::abs(std::abs(t - tau / 4) - tau / 2) - tau / 4;
}

nlohmann::json schedule_to_json(const PulseSchedule& s)
{
    nlohmann::json j;
    j["omega"] = s.omega;
    j["tau"] = s.tau;
    if (s.params) {
        j["epsilon"] = s.params->epsilon;
        j["gamma"] = s.params->gamma;
        j["theta"] = s.params->theta;
    }
    j["pulses"] = nlohmann::json::array();
    for (const auto& p : s.pulses)
        j["pulses"].push_back({{"t", p.t}, {"weight", p.weight},
                               {"kind", p.kind == PulseKind::echo_pi ? "echo_pi" : "perturbation"}});
    return j;
}

PulseSchedule schedule_from_json(const nlohmann::json& j)
{
    const double omega = j.at("omega").get<double>();
    const double tau = j.at("tau").get<double>();
    if (j.contains("pulses")) {
        PulseSchedule s;
        s.omega = omega;
        s.tau = tau;
        for (const auto& p : j.at("pulses")) {
            std::string kind = p.at("kind").get<std::string>();
            if (kind != "echo_pi" && kind != "perturbation")
                throw std::invalid_argument("unknown pulse kind '" + kind + "'");
            s.pulses.push_back({p.at("t").get<double>(), p.at("weight").get<double>(),
                                kind == "echo_pi" ? PulseKind::echo_pi : PulseKind::perturbation});
        }
        if (j.contains("epsilon"))
            s.params = DriveParams{j.at("epsilon").get<double>(), j.at("gamma").get<double>(),
                                   j.at("theta").get<double>()};
        s.validate();
        return s;
    }
    return build_perturbed_schedule(omega, tau, j.value("epsilon", 0.0), j.value("gamma", 0.0),
                                    j.value("theta", 0.0));
}

FloquetDriver::FloquetDriver(const ConstrainedBasis& basis, PulseSchedule schedule, Backend backend)
    : basis_(&basis),
      schedule_(std::move(schedule)),
      pxp_(build_pxp(basis)),
      free_(pxp_, schedule_.omega / 2, backend),
      ndiag_(number_diagonal(basis))
{
    schedule_.validate();
}

CVec FloquetDriver::kick(const CVec& psi, double weight) const
{
    CVec out = psi;
    for (Eigen::Index k = 0; k < out.size(); ++k) out[k] *= std::exp(cplx(0.0, weight * ndiag_[k]));
    return out;
}

CVec FloquetDriver::advance(const CVec& psi, double a, double b) const
{
    if (a < 0.0 || b > schedule_.tau || a > b) throw std::invalid_argument("advance needs 0 <= a <= b <= tau");
    CVec w = psi;
    double now = a;
    for (const auto& p : schedule_.pulses) {
        const bool fires = (p.t > a && p.t <= b) || (p.t == 0.0 && a == 0.0);
        if (!fires) continue;
        if (p.t > now) {
            w = free_.evolve(w, p.t - now);
            now = p.t;
        }
        w = kick(w, p.weight);
    }
    if (b > now) w = free_.evolve(w, b - now);
    return w;
}

CMat FloquetDriver::cycle_unitary() const
{
    const Eigen::Index d = static_cast<Eigen::Index>(basis_->dim());
    CMat U = CMat::Identity(d, d);
    double now = 0.0;
    auto diag_kick = [this](double w) {
        CVec ph(ndiag_.size());
        for (Eigen::Index k = 0; k < ph.size(); ++k) ph[k] = std::exp(cplx(0.0, w * ndiag_[k]));
        return ph;
    };
    for (const auto& p : schedule_.pulses) {
        if (p.t > now) {
            U = free_.unitary(p.t - now) * U;
            now = p.t;
        }
        U = diag_kick(p.weight).asDiagonal() * U;
    }
    if (schedule_.tau > now) U = free_.unitary(schedule_.tau - now) * U;
    return U;
}

void require_normalized(const CVec& psi, double tol)
{
    if (std::abs(psi.norm() - 1.0) > tol) throw std::invalid_argument("state is not normalized");
}

CVec propagate_cycle(const CVec& state, const FloquetDriver& driver)
{
    require_normalized(state);
    return driver.cycle(state);
}

namespace {

std::vector<std::string> names_of(const std::vector<NamedObservable>& obs)
{
    std::vector<std::string> n;
    for (const auto& o : obs) n.push_back(o.name);
    return n;
}

std::vector<double> eval_all(const std::vector<NamedObservable>& obs, const CVec& psi)
{
    std::vector<double> row;
    for (const auto& o : obs) row.push_back(o.eval(psi));
    return row;
}

}  // namespace

ObservableSeries stroboscopic_run(const CVec& state0, const FloquetDriver& driver, int n_cycles,
                                  const std::vector<NamedObservable>& observables, const RunOptions& opts)
{
    if (n_cycles < 0) throw std::invalid_argument("n_cycles must be non-negative");
    require_normalized(state0);
    ObservableSeries s(names_of(observables));
    CVec psi = state0;
    const double tau = driver.schedule().tau;
    for (int n = 0; n <= n_cycles; ++n) {
        if (n > 0) psi = driver.cycle(psi);
        s.push(n * tau, eval_all(observables, psi));
        if (opts.snapshots && opts.snapshot_stride > 0 && n % opts.snapshot_stride == 0)
            opts.snapshots->push_back(psi);
        if (opts.on_cycle) opts.on_cycle(n, psi);
    }
    return s;
}

ObservableSeries micromotion_run(const CVec& state0, const FloquetDriver& driver, int samples_per_cycle,
                                 int n_cycles, const std::vector<NamedObservable>& observables)
{
    if (samples_per_cycle < 2) throw std::invalid_argument("samples_per_cycle must be at least 2");
    if (n_cycles < 1) throw std::invalid_argument("n_cycles must be at least 1");
    require_normalized(state0);
    ObservableSeries s(names_of(observables));
    const double tau = driver.schedule().tau;
    const int m = samples_per_cycle - 1;
    CVec psi = state0;
    s.push(0.0, eval_all(observables, psi));
    for (int n = 0; n < n_cycles; ++n) {
        double prev = 0.0;
        for (int k = 1; k <= m; ++k) {
            double t = k == m ? tau : tau * k / m;
            psi = driver.advance(psi, prev, t);
            prev = t;
            s.push(n * tau + t, eval_all(observables, psi));
        }
    }
    return s;
}

CVec basis_state(const ConstrainedBasis& basis, Config c)
{
    CVec v = CVec::Zero(static_cast<Eigen::Index>(basis.dim()));
    v[static_cast<Eigen::Index>(basis.index_of(c))] = 1.0;
    return v;
}

}  // namespace rydfloq
