#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracle.hpp"
#include "rydfloq/hardware.hpp"
#include "rydfloq/observables.hpp"
#include "rydfloq/propagator.hpp"

using namespace rydfloq;

namespace {

// Trapezoid rule on a fine grid.
double integrate(const GaussianDrive& d, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = 0.5 * (d.detuning(a) + d.detuning(b));
    for (int k = 1; k < n; ++k) s += d.detuning(a + k * h);
    return s * h;
}

// Drive that switches off every lobe, leaving the constant offset.
GaussianDrive flat_drive(double tau, double delta, int cycles)
{
    return GaussianDrive(build_echo_schedule(1.0, tau), 0.05 * tau, delta, cycles, 0.0);
}

}  // namespace

TEST_CASE("van der Waals couplings")
{
    VdWModel m;
    m.L = 12;
    CHECK(vdw_coupling(m, 0, 1) == doctest::Approx(11.390625).epsilon(1e-14));
    CHECK(vdw_coupling(m, 0, 2) == doctest::Approx(0.177978515625).epsilon(1e-14));
    CHECK(vdw_coupling(m, 0, 11) == vdw_coupling(m, 0, 1));
    CHECK(vdw_coupling(m, 3, 9) == doctest::Approx(std::pow(1.5 / 6, 6)));
    m.bc = Boundary::open;
    CHECK(vdw_coupling(m, 0, 11) == doctest::Approx(std::pow(1.5 / 11, 6)));
    CHECK_THROWS_AS(vdw_coupling(m, 2, 2), std::invalid_argument);
}

TEST_CASE("full-space Hamiltonian against Kronecker oracle")
{
    for (auto bc : {Boundary::periodic, Boundary::open}) {
        VdWModel m{5, 1.3, 1.2, 0.0, bc};
        SparseOperator H = build_vdw_hamiltonian(m);
        CHECK(H.dim() == 32);
        CHECK(H.check_hermitian(1e-14));
        oracle::Sp ref(32, 32);
        for (int i = 0; i < 5; ++i) {
            ref += 0.5 * m.omega * oracle::string_op(5, {{i, 'x'}});
            for (int j = i + 1; j < 5; ++j) ref += vdw_coupling(m, i, j) * oracle::string_op(5, {{i, 'n'}, {j, 'n'}});
        }
        CHECK((CMat(H.mat) - CMat(ref)).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(CMat(H.mat).imag().cwiseAbs().maxCoeff() == 0.0);
    }
    VdWModel big{17, 1.0, 1.5, 0.0, Boundary::periodic};
    CHECK_THROWS_AS(build_vdw_hamiltonian(big), std::invalid_argument);
    VdWModel bad{6, 1.0, 0.0, 0.0, Boundary::periodic};
    CHECK_THROWS_AS(build_vdw_hamiltonian(bad), std::invalid_argument);
}

TEST_CASE("small blockade radius gives free spins")
{
    VdWModel m{4, 1.0, 1e-4, 0.0, Boundary::periodic};
    Eigen::SelfAdjointEigenSolver<CMat> es(build_vdw_hamiltonian(m).dense());
    Eigen::VectorXd ev = es.eigenvalues();
    // (Omega/2) sum_i s_i with s_i = +-1: levels -2..2 with binomial weights
    std::vector<double> ref;
    for (int k = 0; k <= 4; ++k)
        for (int c = 0; c < (k == 0 || k == 4 ? 1 : k == 2 ? 6 : 4); ++c) ref.push_back(-2.0 + k);
    for (int i = 0; i < 16; ++i) CHECK(ev[i] == doctest::Approx(ref[i]).epsilon(1e-10));
}

TEST_CASE("Gaussian lobes integrate to pulse weights")
{
    const double tau = 2 * M_PI / 1.3, eps = 0.45;
    PulseSchedule s = build_perturbed_schedule(1.0, tau, eps, -2 * eps, -eps);
    GaussianDrive d(s, 0.046 * tau, 0.0, 1);
    REQUIRE(d.lobes().size() == 4);
    CHECK(d.lobes()[0].center == doctest::Approx(tau / 4));
    CHECK(d.lobes()[0].weight == doctest::Approx(eps - M_PI));
    CHECK(d.lobes()[1].weight == doctest::Approx(-eps));
    CHECK(d.lobes()[2].weight == doctest::Approx(eps - M_PI));
    CHECK(d.lobes()[3].center == doctest::Approx(tau));
    CHECK(d.lobes()[3].weight == doctest::Approx(-eps));

    // Narrow lobes separate cleanly, so each window holds one pulse.
    GaussianDrive narrow(s, 0.01 * tau, 0.0, 1);
    for (const auto& l : narrow.lobes()) {
        double w = narrow.width();
        CHECK(std::abs(integrate(narrow, l.center - 12 * w, l.center + 12 * w, 20000) - l.weight) < 1e-6);
    }
    // Overlapping tails at the benchmark width: the total must still add up.
    double total = 0.0;
    for (const auto& l : d.lobes()) total += l.weight;
    CHECK(std::abs(integrate(d, -12 * d.width(), tau + 12 * d.width(), 200000) - total) < 1e-6);

    GaussianDrive offset(s, 0.046 * tau, 0.09, 2);
    CHECK(offset.detuning(0.6 * tau + tau) - d.detuning(0.6 * tau) == doctest::Approx(0.09).epsilon(1e-6));
    CHECK(offset.lobes().size() == 8);
    CHECK_THROWS_AS(GaussianDrive(s, 0.0, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(GaussianDrive(s, 0.1, 0.0, 0), std::invalid_argument);
}

TEST_CASE("sampled schedule")
{
    const double tau = 3.0;
    GaussianDrive d(build_perturbed_schedule(1.0, tau, 0.2, -0.4, -0.2), 0.05 * tau, 0.09, 2);
    const double w = d.width();
    CHECK_THROWS_AS(sample_schedule(d, w / 19), std::invalid_argument);
    CHECK_THROWS_AS(sample_schedule(d, -1.0), std::invalid_argument);
    SampledSchedule ss = sample_schedule(d, w / 20);
    CHECK(ss.times.front() == 0.0);
    CHECK(ss.times.back() == doctest::Approx(2 * tau));
    CHECK(ss.times.size() == ss.delta_of_t.size());
    for (std::size_t k = 0; k < ss.times.size(); k += 37) CHECK(ss.delta_of_t[k] == d.detuning(ss.times[k]));
}

TEST_CASE("integrator: static cases")
{
    // Diagonal generator with no drive: pure phases.
    Eigen::VectorXd diag(4);
    diag << 0.3, -1.1, 2.0, 0.0;
    std::vector<Triplet> t;
    for (int k = 0; k < 4; ++k) t.emplace_back(k, k, diag[k]);
    SparseOperator Hd = from_triplets(4, t, "diag");
    Eigen::VectorXd nd = Eigen::VectorXd::Zero(4);
    CVec psi = CVec::Constant(4, 0.5);
    for (auto m : {Integrator::midpoint, Integrator::cfm4}) {
        CVec out = integrate_tdse(psi, Hd, nd, flat_drive(2.0, 0.0, 1), 0.0, 2.0, 0.005, m);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(out[k] - 0.5 * std::exp(cplx(0, -2.0 * diag[k]))) < 1e-12);
    }

    // Constant detuning: one matrix exponential of H - delta N.
    ConstrainedBasis b(6, Boundary::periodic);
    SparseOperator H = build_pxp(b);
    H.mat *= 0.5;
    Eigen::VectorXd n = number_diagonal(b);
    CVec v = random_state(b.dim(), 3);
    CMat gen = H.dense();
    gen.diagonal() -= (0.3 * n).cast<cplx>();
    CVec ref = hermitian_expm(gen, 1.7) * v;
    for (auto m : {Integrator::midpoint, Integrator::cfm4}) {
        CVec out = integrate_tdse(v, H, n, flat_drive(1.7, 0.3, 1), 0.0, 1.7, 0.01, m);
        CHECK((out - ref).norm() < 1e-10);
    }

    CHECK_THROWS_AS(integrate_tdse(2.0 * v, H, n, flat_drive(1.0, 0.0, 1), 0, 1, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(integrate_tdse(v, H, Eigen::VectorXd::Zero(3), flat_drive(1.0, 0.0, 1), 0, 1, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_tdse(v, H, n, flat_drive(1.0, 0.0, 1), 1, 0, 0.01), std::invalid_argument);
}

TEST_CASE("integrator: order and unitarity")
{
    ConstrainedBasis b(8, Boundary::periodic);
    SparseOperator H = build_pxp(b);
    H.mat *= 0.5;
    Eigen::VectorXd n = number_diagonal(b);
    const double tau = 2.5;
    GaussianDrive d(build_perturbed_schedule(1.0, tau, 0.45, -0.9, -0.45), 0.046 * tau, 0.09, 1);
    CVec v = basis_state(b, 1);
    const double w = d.width();
    auto run = [&](double dt, Integrator m) { return integrate_tdse(v, H, n, d, 0.0, tau, dt, m); };
    CVec ref = run(w / 160, Integrator::cfm4);
    CHECK(std::abs(ref.norm() - 1.0) < 1e-10);
    double e1 = (run(w / 20, Integrator::midpoint) - ref).norm();
    double e2 = (run(w / 40, Integrator::midpoint) - ref).norm();
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
    double c1 = (run(w / 20, Integrator::cfm4) - ref).norm();
    double c2 = (run(w / 40, Integrator::cfm4) - ref).norm();
    CHECK(c1 / c2 > 12.0);
    CHECK(c1 < e1);
}

TEST_CASE("narrow pulses converge to the delta-pulse run")
{
    ConstrainedBasis b(8, Boundary::periodic);
    SparseOperator H = build_pxp(b);
    H.mat *= 0.5;
    Eigen::VectorXd n = number_diagonal(b);
    const double tau = 2 * M_PI / 1.3, eps = 0.45;
    PulseSchedule s = build_perturbed_schedule(1.0, tau, eps, -2 * eps, -eps);
    FloquetDriver driver(b, s);
    CVec v = basis_state(b, 1);
    CVec delta = driver.cycle(driver.cycle(v));
    // Stop half a lobe after the last pulse so that pulse has fully acted.
    std::vector<double> dist;
    for (double wf : {0.02, 0.01, 0.005}) {
        GaussianDrive d(s, wf * tau, 0.0, 3);
        CVec g = integrate_tdse(v, H, n, d, 0.0, 2 * tau + 12 * d.width(), d.width() / 20);
        // undo the free evolution past 2 tau
        Propagator back(H, 1.0, Backend::dense_eigen);
        g = back.evolve(g, -12 * d.width());
        dist.push_back((g - delta).norm());
    }
    MESSAGE("distance to delta run at w/tau = 0.02, 0.01, 0.005: " << dist[0] << " " << dist[1] << " " << dist[2]);
    CHECK(dist[1] < dist[0]);
    CHECK(dist[2] < dist[1]);
}

TEST_CASE("blockade violation")
{
    CVec psi = CVec::Zero(16);
    psi[0b0011] = 1.0;
    CHECK(blockade_violation(psi, 4, Boundary::open) == 1.0);
    psi.setZero();
    psi[0b0101] = 1.0;
    CHECK(blockade_violation(psi, 4, Boundary::periodic) == 0.0);
    psi.setZero();
    psi[0b1001] = std::sqrt(0.5);
    psi[0b0001] = std::sqrt(0.5);
    CHECK(blockade_violation(psi, 4, Boundary::periodic) == doctest::Approx(0.5));
    CHECK(blockade_violation(psi, 4, Boundary::open) == 0.0);
}

TEST_CASE("arrival cycles and mismatch")
{
    std::vector<std::vector<double>> occ = {
        {1, 0, 0, 0, 0, 0},
        {0.5, 0.25, 0, 0, 0, 0.25},
        {0.2, 0.15, 0.15, 0, 0.25, 0.25},
        {0.1, 0.1, 0.1, 0.3, 0.1, 0.1},
    };
    auto a = arrival_cycles(occ, 0.3);
    REQUIRE(a.size() == 3);
    CHECK(a[0] == 1);
    CHECK(a[1] == 2);
    CHECK(a[2] == 3);
    CHECK(arrival_cycles(occ, 0.9)[2] == -1);
    CHECK(occupation_mismatch(occ, occ) == 0.0);
    auto other = occ;
    other[3][0] += 0.4;
    CHECK(occupation_mismatch(occ, other) == doctest::Approx(0.1));
}

TEST_CASE("walk benchmark plumbing")
{
    WalkSettings s;
    s.L = 6;
    s.n_cycles = 3;
    s.calibration_cycles = 2;
    WalkResult r = quantum_walk_benchmark(s);
    CHECK(r.pxp.size() == 4);
    CHECK(r.vdw.size() == 4);
    CHECK(r.vdw[0][0] == 1.0);
    CHECK(r.pxp[0][0] == 1.0);
    CHECK(r.calibration.size() == 2);
    CHECK(std::abs(r.delta_mf_used) == doctest::Approx(0.09));
    CHECK(r.unitarity_error < 1e-8);
    CHECK(r.dt_halving_change >= 0.0);
    CHECK(r.dt_halving_change < 1e-6);
    CHECK(r.pxp_number[0] == doctest::Approx(1.0));

    s.convergence_tol = 0.0;
    CHECK_THROWS_AS(quantum_walk_benchmark(s), StepSizeError);
}

TEST_CASE("number drift of the delta-pulse walk shrinks with the period")
{
    // Stroboscopic N is conserved only up to terms beyond the leading
    // expansion orders, so the drift must vanish as tau -> 0.
    ConstrainedBasis b(10, Boundary::periodic);
    std::vector<double> drift;
    for (double tau : {2.0, 1.0, 0.5}) {
        FloquetDriver d(b, build_perturbed_schedule(1.0, tau, 0.45, -0.9, -0.45));
        CVec psi = basis_state(b, 1);
        double m = 0.0;
        for (int c = 0; c < 30; ++c) {
            psi = d.cycle(psi);
            m = std::max(m, std::abs(site_occupations(b, psi).sum() - 1.0));
        }
        drift.push_back(m);
    }
    CHECK(drift[1] < drift[0]);
    CHECK(drift[2] < drift[1]);
    CHECK(drift[2] < 0.05);
}

TEST_CASE("light-cone shape")
{
    LightCone lc = light_cone({2, 4, 6, 8, 12, 13});
    CHECK(lc.complete);
    CHECK(lc.monotone);
    CHECK(lc.cycles_per_site == doctest::Approx(2.3142857142857));
    CHECK(lc.ballistic());
    CHECK_FALSE(light_cone({2, 4, -1}).ballistic());
    CHECK_FALSE(light_cone({2, 1, 6}).ballistic());
    LightCone flat = light_cone({3, 3, 3});
    CHECK_FALSE(flat.ballistic());
    CHECK(light_cone({1, 2, 3}).r_squared == doctest::Approx(1.0));
}
