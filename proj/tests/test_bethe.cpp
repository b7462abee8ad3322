#include <doctest.h>

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rydfloq/bethe.hpp"
#include "rydfloq/effective.hpp"

using namespace rydfloq;

TEST_CASE("gauss-legendre")
{
    Eigen::VectorXd x, w;
    gauss_legendre(12, -1.0, 2.0, x, w);
    CHECK(w.sum() == doctest::Approx(3.0));
    // exact for degree 23
    double s = 0;
    for (int i = 0; i < 12; ++i) s += w[i] * std::pow(x[i], 22);
    CHECK(s == doctest::Approx((std::pow(2.0, 23) + 1) / 23).epsilon(1e-13));
}

TEST_CASE("low-density and half-filling limits")
{
    BetheSolution lo = solve_integral_equations(1e-3);
    CHECK(luttinger_K(lo) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(chemical_potential(lo, 1.0) == doctest::Approx(-3.0).epsilon(0.01));
    BetheSolution hi = solve_integral_equations(0.4999);
    CHECK(luttinger_K(hi) == doctest::Approx(0.25).epsilon(0.01 / 0.25));
    CHECK(chemical_potential(hi, 1.0) == doctest::Approx(6.0).epsilon(0.01));
    BetheSolution z = solve_integral_equations(0.0);
    CHECK(luttinger_K(z) == 1.0);
    CHECK(chemical_potential(z, 2.0) == -6.0);
    CHECK(luttinger_K(solve_integral_equations(0.5)) == 0.25);
    CHECK_THROWS_AS(solve_integral_equations(0.7), std::invalid_argument);
}

TEST_CASE("solution structure")
{
    BetheSolution s = solve_integral_equations(0.25);
    CHECK(std::abs(s.constraint_residual) < 1e-10);
    const Eigen::Index n = s.Q.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        CHECK(s.Q[i] > 0.0);
        CHECK(std::abs(s.Q[i] - s.Q[n - 1 - i]) < 1e-10);
        CHECK(std::abs(s.eta[i] - s.eta[n - 1 - i]) < 1e-10);
    }
    CHECK(ground_energy(s, 1.0) < 0.25);
    CHECK((1 - s.n0) * s.dressed_integral < 0.0);
}

TEST_CASE("self-convergence under refinement")
{
    for (double n0 : {0.1, 0.25, 0.4}) {
        BetheSettings a, b, c;
        b.quad_n = 128;
        c.constraint_tol = 1e-14;
        BetheSolution sa = solve_integral_equations(n0, a), sb = solve_integral_equations(n0, b),
                      sc = solve_integral_equations(n0, c);
        CHECK(std::abs(luttinger_K(sa) - luttinger_K(sb)) < 1e-6);
        CHECK(std::abs(chemical_potential(sa, 1) - chemical_potential(sb, 1)) < 1e-6);
        CHECK(std::abs(ground_energy(sa, 1) - ground_energy(sb, 1)) < 1e-6);
        CHECK(std::abs(luttinger_K(sa) - luttinger_K(sc)) < 1e-6);
    }
}

TEST_CASE("chemical potential is the derivative of the energy")
{
    for (double n0 : {0.1, 0.25, 0.3, 0.4, 0.45}) {
        const double d = 1e-5;
        double num = (ground_energy(solve_integral_equations(n0 + d), 1.0) -
                      ground_energy(solve_integral_equations(n0 - d), 1.0)) / (2 * d);
        CHECK(chemical_potential(solve_integral_equations(n0), 1.0) == doctest::Approx(num).epsilon(1e-6));
    }
}

TEST_CASE("phase diagram is monotone")
{
    std::vector<double> grid;
    for (int i = 1; i < 50; ++i) grid.push_back(0.01 * i);
    auto rows = phase_diagram(grid, 1.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].J_over_h > rows[i - 1].J_over_h);
        CHECK(rows[i].K < rows[i - 1].K);
        CHECK(std::abs(rows[i].K - rows[i - 1].K) < 0.05);
    }
    CHECK(rows.front().K <= 1.0);
    CHECK(rows.back().K >= 0.25);
    CHECK_THROWS(phase_diagram({0.0}, 1.0));
}

TEST_CASE("Bethe energy agrees with exact diagonalization at quarter filling")
{
    // N = L/4 sector of H_F at g = J = 0, h = 1; L = 18 has no integer sector.
    std::vector<double> inv, e;
    for (int L : {16, 20}) {
        ConstrainedBasis b(L, Boundary::periodic);
        EffectiveCoefficients c;
        c.h = 1.0;
        SparseOperator H = assemble_hf(c, b);
        std::vector<Eigen::Index> idx;
        for (std::size_t k = 0; k < b.dim(); ++k)
            if (std::popcount(b.state(k)) == L / 4) idx.push_back(k);
        Eigen::MatrixXd Hs(idx.size(), idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) Hs(i, j) = H.mat.coeff(idx[i], idx[j]).real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs, Eigen::EigenvaluesOnly);
        inv.push_back(1.0 / L);
        e.push_back(es.eigenvalues()[0] / L);
    }
    const double slope = (e[1] - e[0]) / (inv[1] - inv[0]);
    const double extrap = e[1] - slope * inv[1];
    const double bethe = ground_energy(solve_integral_equations(0.25), 1.0);
    MESSAGE("ED extrapolation " << extrap << " vs Bethe " << bethe);
    CHECK(std::abs(extrap - bethe) < 0.02 * std::abs(bethe));
}
