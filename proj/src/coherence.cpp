#include "rydfloq/coherence.hpp"

#include <cmath>
#include <stdexcept>

#include "rydfloq/effective.hpp"
#include "rydfloq/floquet.hpp"

namespace rydfloq {

std::vector<double> fidelity_decay_series(int L, double tau, double epsilon, int n_cycles, double omega,
                                          Backend backend)
{
    ConstrainedBasis basis(L, Boundary::periodic);
    const double gamma = -2 * epsilon, theta = -epsilon;
    FloquetDriver driver(basis, build_perturbed_schedule(omega, tau, epsilon, gamma, theta), backend);
    SparseOperator hf = assemble_hf(closed_form_coefficients(omega, tau, epsilon, gamma, theta), basis);
    return compare_floquet_vs_hf(driver, hf, basis_state(basis, Config{1}), n_cycles, backend);
}

CoherenceResult fit_coherence(const std::vector<double>& times, const std::vector<double>& fidelity, int L,
                              double t_star)
{
    if (times.empty() || times.size() != fidelity.size()) throw std::invalid_argument("fit needs a nonempty series");
    if (!(t_star > 0.0)) throw std::invalid_argument("t_star must be positive");
    CoherenceResult r;
    r.times = times;
    r.fidelity = fidelity;
    std::vector<double> xs, ys;
    for (std::size_t n = 0; n < times.size(); ++n) {
        const double t = times[n];
        if (t <= 0.0 || !(fidelity[n] > 1e-6)) continue;
        const double damped = fidelity[n] * std::exp(-L * (t / t_star) * (t / t_star));
        if (damped < 1e-3 && xs.size() >= 5) break;
        xs.push_back(t * t);
        ys.push_back(-std::log(damped) / L);
    }
    r.points = static_cast<int>(xs.size());
    if (xs.empty()) return r;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    const double slope = sxy / sxx;
    double ss = 0.0, mean = 0.0, tot = 0.0;
    for (double y : ys) mean += y / ys.size();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        ss += std::pow(ys[k] - slope * xs[k], 2);
        tot += std::pow(ys[k] - mean, 2);
    }
    r.fit_residual = std::sqrt(ss / xs.size());
    r.r_squared = tot > 0.0 ? 1 - ss / tot : 1.0;
    r.ok = slope > 0.0;
    r.t_c = r.ok ? 1 / std::sqrt(slope) : 0.0;
    return r;
}

int coherence_cycles(int L, double tau, double t_star)
{
    const double t_end = t_star * std::sqrt(std::log(1e3) / L);
    return static_cast<int>(std::ceil(t_end / tau)) + 2;
}

CoherenceSweep sweep_coherence(const std::vector<double>& tau_grid, const std::vector<double>& eps_grid, int L,
                               double t_star, double omega)
{
    CoherenceSweep sw;
    sw.taus = tau_grid;
    sw.eps = eps_grid;
    for (std::size_t i = 0; i < tau_grid.size(); ++i)
        for (std::size_t j = 0; j < eps_grid.size(); ++j) {
            const double tau = tau_grid[i], eps = -std::abs(eps_grid[j]);
            if (!(omega * tau < 2 * M_PI)) throw std::invalid_argument("sweep needs omega*tau < 2 pi");
            const int n = coherence_cycles(L, tau, t_star);
            auto f = fidelity_decay_series(L, tau, eps, n, omega);
            std::vector<double> t(f.size());
            for (std::size_t k = 0; k < t.size(); ++k) t[k] = k * tau;
            CoherenceResult r = fit_coherence(t, f, L, t_star);
            r.tau = tau;
            r.epsilon = eps;
            r.h = closed_form_coefficients(omega, tau, eps, -2 * eps, -eps).h;
            sw.cells.push_back(r);
            if (r.ok && r.h * r.t_c > sw.best_value) {
                sw.best_value = r.h * r.t_c;
                sw.best = static_cast<int>(sw.cells.size() - 1);
            }
        }
    if (sw.best >= 0) {
        const std::size_t bi = sw.best / eps_grid.size(), bj = sw.best % eps_grid.size();
        sw.interior = bi > 0 && bi + 1 < tau_grid.size() && bj > 0 && bj + 1 < eps_grid.size();
    }
    return sw;
}

}  // namespace rydfloq
