#include "rydfloq/effective.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace rydfloq {

namespace {

CMat number_matrix(const ConstrainedBasis& basis) { return number_diagonal(basis).cast<cplx>().asDiagonal(); }

CMat commutator(const CMat& A, const CMat& B) { return A * B - B * A; }

}  // namespace

CMat conjugated_number(const Propagator& free_pxp, const ConstrainedBasis& basis, double t_prime)
{
    if (free_pxp.dim() != basis.dim()) throw std::invalid_argument("propagator and basis dimensions differ");
    CMat U = free_pxp.unitary(t_prime);
    return U.adjoint() * number_matrix(basis) * U;
}

CMat conjugated_number(const ConstrainedBasis& basis, double omega, double t_prime)
{
    Propagator p(build_pxp(basis), omega / 2, Backend::dense_eigen);
    return conjugated_number(p, basis, t_prime);
}

CMat magnus_hf(const ConstrainedBasis& basis, const PulseSchedule& schedule, int order)
{
    if (order != 0 && order != 1) throw std::invalid_argument("magnus order must be 0 or 1");
    schedule.validate();
    Propagator free(build_pxp(basis), schedule.omega / 2, Backend::dense_eigen);
    const double tau = schedule.tau;
    auto pulses = schedule.perturbations();
    std::vector<CMat> nt;
    for (const auto& p : pulses) nt.push_back(conjugated_number(free, basis, effective_time(p.t, tau)));

    const Eigen::Index d = static_cast<Eigen::Index>(basis.dim());
    CMat H = CMat::Zero(d, d);
    for (std::size_t j = 0; j < pulses.size(); ++j) H -= pulses[j].weight / tau * nt[j];
    if (order == 1) {
        const cplx pref = 1.0 / cplx(0.0, 2.0 * tau);
        for (std::size_t j = 0; j < pulses.size(); ++j)
            for (std::size_t l = 0; l < j; ++l) {

                H += pref * pulses[j].weight * pulses[l].weight * commutator(nt[j], nt[l]);
            }
    }
    return H;
}

CMat magnus_hf_explicit(const ConstrainedBasis& basis, double omega, double tau, double epsilon, double gamma,
                        double theta, int order)
{
    if (order != 0 && order != 1) throw std::invalid_argument("magnus order must be 0 or 1");
    Propagator free(build_pxp(basis), omega / 2, Backend::dense_eigen);
    CMat n0 = number_matrix(basis);
    CMat np = conjugated_number(free, basis, tau / 4);
    CMat nm = conjugated_number(free, basis, -tau / 4);
    CMat H = (-gamma * n0 - epsilon * (np + nm)) / tau;
    if (order == 1) {
        CMat c = epsilon * (gamma - 2 * theta) * commutator(n0, nm) + epsilon * gamma * commutator(n0, np) +
                 epsilon * epsilon * commutator(nm, np);
        H += c / cplx(0.0, 2.0 * tau);
    }
    return H;
}

EffectiveCoefficients closed_form_coefficients(double omega, double tau, double epsilon, double gamma,
                                               double theta)
{
    EffectiveCoefficients c;
    c.J = (gamma + 2 * epsilon) / tau - 3 * epsilon * omega * omega * tau / 32;
    c.h = -epsilon * omega * omega * tau / 32;
    c.g = -epsilon * (theta + epsilon) * omega / 8;
    c.source = CoefficientSource::closed_form;
    if (omega * tau / 4 > 1.0) c.warnings.push_back("omega*tau/4 > 1: expansion outside its regime of validity");
    double weights = std::abs(gamma - theta) + std::abs(theta) + 2 * std::abs(epsilon);
    if (weights > 1.0) c.warnings.push_back("total perturbation weight > 1: higher orders may matter");
    return c;
}

SparseOperator assemble_hf(const EffectiveCoefficients& c, const ConstrainedBasis& basis)
{
    SparseOperator H = combine(-c.J, build_number(basis), -c.h, build_pxyp(basis));
    H = combine(1.0, H, c.g, build_pxp(basis));
    return combine(1.0, H, c.h / 4, build_ziz(basis));
}

CMat floquet_log_hamiltonian(const CMat& UF, double tau, double margin)
{
    Eigen::ComplexEigenSolver<CMat> es(UF, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (std::abs(std::arg(es.eigenvalues()[k])) > M_PI - margin)
            throw std::domain_error("Floquet eigenphase too close to the branch cut");
    CMat logU = UF.log();
    return cplx(0.0, 1.0 / tau) * logU;
}

std::vector<double> compare_floquet_vs_hf(const FloquetDriver& driver, const SparseOperator& hf, const CVec& state0,
                                          int n_cycles, Backend backend)
{
    require_normalized(state0);
    Propagator eff(hf, 1.0, backend);
    const double tau = driver.schedule().tau;
    std::vector<double> f;
    CVec a = state0, b = state0;
    f.push_back(1.0);
    for (int n = 1; n <= n_cycles; ++n) {
        a = driver.cycle(a);
        b = eff.evolve(b, tau);
        f.push_back(std::norm(b.dot(a)));
    }
    return f;
}

double operator_distance(const CMat& A, const CMat& B)
{
    CMat D = A - B;
    Eigen::JacobiSVD<CMat> svd(D);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

}  // namespace rydfloq
