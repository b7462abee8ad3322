#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rydfloq {

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& w);

struct BetheSolution {
    double n0 = 0.0;
    double U0 = 0.0;
    int branch = 1;  // 1: n0 <= 1/3, 2: n0 > 1/3
    Eigen::VectorXd nodes, weights, Q, eta;
    double Q0 = 0.0;    // Q at the Fermi boundary
    double eta0 = 1.0;  // eta at the Fermi boundary
    double dressed_integral = 0.0;  // int eps(U) Q(U) dU in units of h
    double constraint_residual = 0.0;
    int iterations = 0;
};

struct BetheSettings {
    int quad_n = 64;            // nodes per panel
    double panel_width = 4.0;   // composite panels on [-U0, U0]
    double constraint_tol = 1e-13;
    int max_iterations = 300;
};

// Branch 1 targets int Q = n0/(1-n0), branch 2 targets (1-2n0)/(1-n0).
double branch_threshold();

BetheSolution solve_integral_equations(double n0, const BetheSettings& settings = {});

double luttinger_K(const BetheSolution& sol);

// Energy per site at J = 0, including the h/4 offset of the ZIZ term.
double ground_energy(const BetheSolution& sol, double h);

// J = dE/dn0; raises std::domain_error if the denominator vanishes.
double chemical_potential(const BetheSolution& sol, double h);

struct PhaseRow {
    double n0, U0, K, J_over_h, E;
};

std::vector<PhaseRow> phase_diagram(const std::vector<double>& n0_grid, double h,
                                    const BetheSettings& settings = {});

// Kernels of the integral equations.
double bethe_drive(double U);
double bethe_kernel(double U);
double bethe_dispersion(double U);

}  // namespace rydfloq
