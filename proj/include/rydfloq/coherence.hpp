#pragma once

#include <vector>

#include "rydfloq/propagator.hpp"

namespace rydfloq {

constexpr double default_t_star = 15 * 2 * M_PI;  // 15 drive-free Rabi periods
constexpr double alternative_t_star = 100.0;

struct CoherenceResult {
    double tau = 0.0;
    double epsilon = 0.0;
    double h = 0.0;
    double t_c = 0.0;
    double fit_residual = 0.0;
    double r_squared = 0.0;
    int points = 0;
    bool ok = false;
    std::vector<double> times;
    std::vector<double> fidelity;
};

// F(n tau) between Floquet and closed-form H_F evolution for the drive
// -2 eps = gamma = 2 theta, starting from one excitation on site 0.
std::vector<double> fidelity_decay_series(int L, double tau, double epsilon, int n_cycles,
                                          double omega = 1.0, Backend backend = Backend::automatic);

// Least squares through the origin of -ln(F e^{-L (t/t*)^2})/L against t^2.
// Samples are taken in order until F*damp < 1e-3 (at least 5 points), and
// only where F > 1e-6.
CoherenceResult fit_coherence(const std::vector<double>& times, const std::vector<double>& fidelity, int L,
                              double t_star);

// Cycles needed for the damping alone to cross the fit cutoff.
int coherence_cycles(int L, double tau, double t_star);

struct CoherenceSweep {
    std::vector<double> taus, eps;
    std::vector<CoherenceResult> cells;  // row-major over (tau, eps)
    int best = -1;
    double best_value = 0.0;
    bool interior = false;

    const CoherenceResult& at(std::size_t i, std::size_t j) const { return cells[i * eps.size() + j]; }
};

CoherenceSweep sweep_coherence(const std::vector<double>& tau_grid, const std::vector<double>& eps_grid, int L,
                               double t_star, double omega = 1.0);

}  // namespace rydfloq
