#pragma once

#include <complex>
#include <vector>

#include "rydfloq/basis.hpp"
#include "rydfloq/operators.hpp"

namespace rydfloq {

double single_dispersion(double k, double h);

struct PairEnergies {
    double vacuum;
    double pair;
};

PairEnergies pair_energies(double k, double kprime, double h, double J, int L);

// S(k,k') = -(e^{-ik} + e^{ik'} + 1)/(e^{ik} + e^{-ik'} + 1); throws
// std::domain_error at a vanishing denominator.
cplx scattering_phase(double k, double kprime);

double bc_norm(Boundary bc);

// g (N_bc/2) 4 i sin k / (2 e^{ik} + 1).
cplx coupling_lambda(double k, double g, Boundary bc);

// J - 2h - 4h cos k.
double resonance_offset(double k, double h, double J);

// Two-wall configuration on a periodic chain: Z2' domain opened in unit cell
// u (bond 2u-1) and closed in cell u+r (bond 2(u+r)).
Config two_wall_config(int L, int u, int r);

// Total-momentum-zero roots of k (M-1) + 2 arg(2 e^{ik} + 1) = m pi, m = 1..M.
std::vector<double> quantized_momenta(int L);

struct TwoWallReport {
    int L = 0;
    std::vector<double> k;
    std::vector<double> energy_bethe;
    std::vector<double> energy_ed;      // nearest restricted-sector eigenvalue
    std::vector<double> residual;       // |H psi - E psi| / |psi| of the ansatz
    std::vector<std::complex<double>> lambda_formula;
    std::vector<std::complex<double>> lambda_operator;  // <Z2|g H_PXP|psi> with psi scaled by N_bc/L
    std::vector<double> lambda_normalized;              // |<Z2|g H_PXP|psi>| with |psi| = 1
    std::vector<double> delta_formula;
    std::vector<double> delta_ed;
    double max_energy_error = 0.0;
    double max_residual = 0.0;
    double max_lambda_error = 0.0;
    std::size_t sector_dim = 0;
};

TwoWallReport validate_two_dw_sector(int L, double h, double J, double g = 1.0);

}  // namespace rydfloq
