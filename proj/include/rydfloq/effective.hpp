#pragma once

#include <string>
#include <vector>

#include "rydfloq/floquet.hpp"
#include "rydfloq/operators.hpp"

namespace rydfloq {

enum class CoefficientSource { closed_form, fitted };

struct EffectiveCoefficients {
    double J = 0.0;
    double h = 0.0;
    double g = 0.0;
    CoefficientSource source = CoefficientSource::closed_form;
    std::vector<std::string> warnings;
};

// N~(t') = e^{i t' (Omega/2) H_PXP} N e^{-i t' (Omega/2) H_PXP}, dense.
CMat conjugated_number(const Propagator& free_pxp, const ConstrainedBasis& basis, double t_prime);
CMat conjugated_number(const ConstrainedBasis& basis, double omega, double t_prime);

// Floquet-Magnus terms built from the perturbation pulses of a delta schedule:
// order 0 is -sum_j D_j N~_j / tau, order 1 adds
// sum_{j>l} D_j D_l [N~_j, N~_l] / (2 i tau) with j later than l.
CMat magnus_hf(const ConstrainedBasis& basis, const PulseSchedule& schedule, int order);

// Same expansion written out for the (eps, gamma, theta) parameterization.
CMat magnus_hf_explicit(const ConstrainedBasis& basis, double omega, double tau, double epsilon,
                        double gamma, double theta, int order);

EffectiveCoefficients closed_form_coefficients(double omega, double tau, double epsilon, double gamma,
                                               double theta);

// -J N - h H_PXYP + g H_PXP + (h/4) H_ZIZ.
SparseOperator assemble_hf(const EffectiveCoefficients& c, const ConstrainedBasis& basis);

// (i/tau) log U_F on the principal branch; throws when eigenphases approach +-pi.
CMat floquet_log_hamiltonian(const CMat& UF, double tau, double margin = 1e-3);

// |<psi_F(n tau)|psi(n tau)>|^2 for n = 0..n_cycles, psi_F evolved under H_F.
std::vector<double> compare_floquet_vs_hf(const FloquetDriver& driver, const SparseOperator& hf,
                                          const CVec& state0, int n_cycles,
                                          Backend backend = Backend::automatic);

// Spectral norm of a Hermitian (or general) matrix difference.
double operator_distance(const CMat& A, const CMat& B);

}  // namespace rydfloq
