#include "rydfloq/domainwall.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "rydfloq/effective.hpp"

namespace rydfloq {

double single_dispersion(double k, double h) { return -2 * h * std::cos(k); }

PairEnergies pair_energies(double k, double kprime, double h, double J, int L)
{
    return {-J * L / 2.0 + h * L / 4.0,
            -J * (L / 2.0 - 1) - 2 * h * (std::cos(k) + std::cos(kprime)) + h / 4 * (L - 8)};
}

cplx scattering_phase(double k, double kprime)
{
    const cplx I(0.0, 1.0);
    cplx den = std::exp(I * k) + std::exp(-I * kprime) + 1.0;
    if (std::abs(den) < 1e-14) throw std::domain_error("scattering phase: singular point");
    return -(std::exp(-I * k) + std::exp(I * kprime) + 1.0) / den;
}

double bc_norm(Boundary bc) { return bc == Boundary::open ? 2.0 : std::sqrt(2.0); }

cplx coupling_lambda(double k, double g, Boundary bc)
{
    const cplx I(0.0, 1.0);
    return g * bc_norm(bc) / 2 * 4.0 * I * std::sin(k) / (2.0 * std::exp(I * k) + 1.0);
}

double resonance_offset(double k, double h, double J) { return J - 2 * h - 4 * h * std::cos(k); }

Config two_wall_config(int L, int u, int r)
{
    const int a = ((2 * u - 1) % L + L) % L;
    const int l = 2 * r + 1;
    Config c = neel_z2(L);
    for (int s = 1; s <= l; ++s) {
        int site = (a + s) % L;
        bool z2prime_occupied = site % 2 == 1;
        if (z2prime_occupied) c |= Config{1} << site;
        else c &= ~(Config{1} << site);
    }
    return c;
}

std::vector<double> quantized_momenta(int L)
{
    if (L % 2 || L < 4) throw std::invalid_argument("quantization needs even L >= 4");
    const int M = L / 2;
    auto F = [M](double k) { return k * (M - 1) + 2 * std::arg(2.0 * std::exp(cplx(0.0, k)) + 1.0); };
    auto dF = [M](double k) { return (M - 1) + 2 * (4 + 2 * std::cos(k)) / (5 + 4 * std::cos(k)); };
    std::vector<double> roots;
    const int grid = 4000;
    for (int m = 1; m <= M; ++m) {
        const double target = m * M_PI;
        double lo = 0.0, hi = M_PI;
        // F is monotone on [0, pi]; bracket by bisection, then polish.
        for (int i = 0; i < grid && hi - lo > 1e-6; ++i) {
            double mid = (lo + hi) / 2;
            (F(mid) < target ? lo : hi) = mid;
        }
        double k = (lo + hi) / 2;
        for (int it = 0; it < 50; ++it) {
            double dk = (F(k) - target) / dF(k);
            k -= dk;
            if (std::abs(dk) < 1e-15) break;
        }
        if (!(k > 0.0 && k < M_PI) || std::abs(F(k) - target) > 1e-10)
            throw std::runtime_error("quantization root " + std::to_string(m) + " did not converge");
        roots.push_back(k);
    }
    return roots;
}

TwoWallReport validate_two_dw_sector(int L, double h, double J, double g)
{
    if (L % 2 || L < 6 || L > 24) throw std::invalid_argument("two-wall validation needs even 6 <= L <= 24");
    ConstrainedBasis basis(L, Boundary::periodic);
    const int M = L / 2;
    EffectiveCoefficients c;
    c.J = J;
    c.h = h;
    c.g = 0.0;
    SparseOperator H = assemble_hf(c, basis);
    SparseOperator pxp = build_pxp(basis);

    std::vector<Eigen::Index> sector;
    for (std::size_t k = 0; k < basis.dim(); ++k)
        if (std::popcount(basis.state(k)) == M - 1) sector.push_back(static_cast<Eigen::Index>(k));
    const Eigen::Index ds = static_cast<Eigen::Index>(sector.size());
    Eigen::MatrixXd Hs(ds, ds);
    for (Eigen::Index i = 0; i < ds; ++i)
        for (Eigen::Index j = 0; j < ds; ++j) Hs(i, j) = H.mat.coeff(sector[i], sector[j]).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();

    TwoWallReport rep;
    rep.L = L;
    rep.sector_dim = sector.size();
    rep.k = quantized_momenta(L);
    const double nbc = bc_norm(Boundary::periodic);
    const double e_vac = pair_energies(0.0, 0.0, h, J, L).vacuum;
    const Eigen::Index z2 = static_cast<Eigen::Index>(basis.index_of(neel_z2(L)));

    for (double k : rep.k) {
        const cplx S = scattering_phase(k, -k);
        CVec psi = CVec::Zero(static_cast<Eigen::Index>(basis.dim()));
        for (int u = 0; u < M; ++u)
            for (int r = 0; r < M; ++r) {
                cplx f = std::exp(cplx(0.0, k * r)) + S * std::exp(cplx(0.0, -k * r));
                psi[static_cast<Eigen::Index>(basis.index_of(two_wall_config(L, u, r)))] = nbc / L * f;
            }
        const double E = pair_energies(k, -k, h, J, L).pair;
        rep.energy_bethe.push_back(E);
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < ev.size(); ++i)
            if (std::abs(ev[i] - E) < std::abs(ev[best] - E)) best = i;
        rep.energy_ed.push_back(ev[best]);
        rep.max_energy_error = std::max(rep.max_energy_error, std::abs(ev[best] - E));

        CVec Hpsi = H.mat * psi;
        double res = (Hpsi - E * psi).norm() / psi.norm();
        rep.residual.push_back(res);
        rep.max_residual = std::max(rep.max_residual, res);

        cplx lam_op = g * (pxp.mat * psi)[z2];
        cplx lam_f = coupling_lambda(k, g, Boundary::periodic);
        rep.lambda_operator.push_back(lam_op);
        rep.lambda_formula.push_back(lam_f);
        rep.lambda_normalized.push_back(std::abs(lam_op) / psi.norm());
        rep.max_lambda_error = std::max(rep.max_lambda_error, std::abs(lam_op - lam_f));

        rep.delta_formula.push_back(resonance_offset(k, h, J));
        rep.delta_ed.push_back(ev[best] - e_vac);
    }
    return rep;
}

}  // namespace rydfloq
