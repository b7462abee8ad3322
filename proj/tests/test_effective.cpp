#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rydfloq/effective.hpp"

using namespace rydfloq;

namespace {

CMat traceless(const CMat& A) { return A - (A.trace() / double(A.rows())) * CMat::Identity(A.rows(), A.cols()); }

double slope(const std::vector<double>& s, const std::vector<double>& d)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        mx += std::log(s[i]) / s.size();
        my += std::log(d[i]) / s.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        sxy += (std::log(s[i]) - mx) * (std::log(d[i]) - my);
        sxx += std::pow(std::log(s[i]) - mx, 2);
    }
    return sxy / sxx;
}

}  // namespace

TEST_CASE("conjugated number operator")
{
    ConstrainedBasis b(8, Boundary::periodic);
    CMat N = number_diagonal(b).cast<cplx>().asDiagonal();
    CHECK((conjugated_number(b, 1.0, 0.0) - N).norm() < 1e-12);
    CMat Pi = parity_matrix(number_diagonal(b));
    for (double t : {0.3, 1.2}) {
        CMat Nt = conjugated_number(b, 1.0, t);
        CHECK((Nt - Nt.adjoint()).norm() < 1e-12);
        CHECK(std::abs(Nt.trace() - N.trace()) < 1e-10);
        Eigen::SelfAdjointEigenSolver<CMat> a(Nt), c(N);
        CHECK((a.eigenvalues() - c.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
        CMat sym = Nt + conjugated_number(b, 1.0, -t);
        CHECK((sym * Pi - Pi * sym).norm() < 1e-10);
    }
}

TEST_CASE("series expansion of the conjugated number operator")
{
    ConstrainedBasis b(8, Boundary::periodic);
    const double omega = 1.0;
    CMat N = build_number(b).dense(), Y = build_pyp(b).dense(), Z = build_pzp(b).dense(), X = build_pxyp(b).dense();
    std::vector<double> ts, errs;
    for (double t : {0.2, 0.1, 0.05, 0.025}) {
        CMat series = N - (omega * t / 2) * Y + (omega * t) * (omega * t) / 4 * (Z - X);
        ts.push_back(t);
        errs.push_back((conjugated_number(b, omega, t) - series).norm());
    }
    CHECK(slope(ts, errs) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("magnus expansion")
{
    ConstrainedBasis b(8, Boundary::periodic);
    const double tau = 1.0;
    CMat N = build_number(b).dense();
    PulseSchedule s0 = build_perturbed_schedule(1.0, tau, 0.0, 0.7, 0.2);
    CHECK((magnus_hf(b, s0, 0) + 0.7 / tau * N).norm() < 1e-12);
    CHECK((magnus_hf(b, s0, 1) - magnus_hf(b, s0, 0)).norm() < 1e-12);

    CMat Pi = parity_matrix(number_diagonal(b));
    PulseSchedule s = build_perturbed_schedule(1.0, 2.0, -0.3, 0.9, 0.1);
    CMat H0 = magnus_hf(b, s, 0);
    CHECK((H0 * Pi - Pi * H0).norm() < 1e-10);
    CHECK((magnus_hf(b, s, 1) - magnus_hf_explicit(b, 1.0, 2.0, -0.3, 0.9, 0.1, 1)).norm() < 1e-10);
    CHECK((H0 - magnus_hf_explicit(b, 1.0, 2.0, -0.3, 0.9, 0.1, 0)).norm() < 1e-10);
    CHECK_THROWS_AS(magnus_hf(b, s, 2), std::invalid_argument);
}

TEST_CASE("matrix log oracle: first-order Magnus error is third order")
{
    ConstrainedBasis b(8, Boundary::periodic);
    const double tau = 0.3;
    std::vector<double> sc, d;
    for (double s : {1.0, 0.5, 0.25}) {
        PulseSchedule p = build_perturbed_schedule(1.0, tau, 0.02 * s, 0.02 * s, 0.01 * s);
        FloquetDriver drv(b, p, Backend::dense_eigen);
        CMat HL = floquet_log_hamiltonian(drv.cycle_unitary(), tau);
        sc.push_back(s);
        d.push_back(operator_distance(HL, magnus_hf(b, p, 1)));
    }
    CHECK(slope(sc, d) == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("closed-form coefficients")
{
    EffectiveCoefficients c = closed_form_coefficients(1.0, 2 * M_PI / 1.3, -0.45, 1.0, 0.15);
    CHECK(c.J == doctest::Approx(0.225).epsilon(0.001 / 0.225));
    CHECK(c.h == doctest::Approx(0.068).epsilon(0.001 / 0.068));
    CHECK(c.g == doctest::Approx(-0.017).epsilon(0.001 / 0.017));
    EffectiveCoefficients z = closed_form_coefficients(1.0, 2.0, 0.0, 0.6, 0.3);
    CHECK(z.J == doctest::Approx(0.3));
    CHECK(z.h == 0.0);
    CHECK(z.g == 0.0);
    CHECK(closed_form_coefficients(1.0, 2.0, -0.2, 0.4, 0.2).g == 0.0);
    CHECK(!closed_form_coefficients(1.0, 2 * M_PI / 1.3, -0.45, 1.0, 0.15).warnings.empty());
}

TEST_CASE("assemble_hf")
{
    ConstrainedBasis b(8, Boundary::periodic);
    EffectiveCoefficients c;
    c.J = 1.0;
    CHECK((assemble_hf(c, b).dense() + build_number(b).dense()).norm() == 0.0);
    c = closed_form_coefficients(1.0, 2.0, -0.3, 0.6, 0.3);
    CMat H = assemble_hf(c, b).dense(), N = build_number(b).dense();
    CHECK((H * N - N * H).norm() < 1e-12);
    CHECK(assemble_hf(c, b).check_hermitian());
}

TEST_CASE("closed form approaches first-order Magnus as tau shrinks")
{
    ConstrainedBasis b(8, Boundary::periodic);
    std::vector<double> sc, d;
    for (double s : {0.5, 0.25, 0.125}) {
        const double tau = 2 * M_PI / 1.3 * s, eps = -0.45 * s, gam = 1.0 * s, th = 0.15 * s;
        CMat M1 = magnus_hf(b, build_perturbed_schedule(1.0, tau, eps, gam, th), 1);
        CMat A = assemble_hf(closed_form_coefficients(1.0, tau, eps, gam, th), b).dense();
        sc.push_back(s);
        d.push_back(operator_distance(traceless(M1), traceless(A)));
    }
    CHECK(slope(sc, d) > 2.7);

    // Reference drive: spectra agree up to the dropped identity shift.
    const double tau = 2 * M_PI / 1.3;
    CMat M1 = magnus_hf(b, build_perturbed_schedule(1.0, tau, -0.45, 1.0, 0.15), 1);
    CMat A = assemble_hf(closed_form_coefficients(1.0, tau, -0.45, 1.0, 0.15), b).dense();
    Eigen::SelfAdjointEigenSolver<CMat> e1(traceless(M1)), e2(traceless(A));
    double rms = std::sqrt((e1.eigenvalues() - e2.eigenvalues()).squaredNorm() / e1.eigenvalues().size());
    MESSAGE("reference drive eigenvalue RMS (closed form vs Magnus), L=8: " << rms);
    CHECK(rms < std::pow(tau, 3) * 0.01);
}

TEST_CASE("floquet vs effective evolution")
{
    ConstrainedBasis b(10, Boundary::periodic);
    FloquetDriver echo(b, build_echo_schedule(1.0, 2.0));
    EffectiveCoefficients zero;
    auto f = compare_floquet_vs_hf(echo, assemble_hf(zero, b), random_state(b.dim(), 3), 10);
    for (double x : f) CHECK(x == doctest::Approx(1.0).epsilon(1e-10));

    std::vector<double> at10;
    for (double s : {1.0, 0.5, 0.25}) {
        const double tau = 2.0 * s, eps = -0.3 * s, gam = 0.6 * s, th = 0.3 * s;
        FloquetDriver d(b, build_perturbed_schedule(1.0, tau, eps, gam, th));
        auto fs = compare_floquet_vs_hf(d, assemble_hf(closed_form_coefficients(1.0, tau, eps, gam, th), b),
                                        basis_state(b, neel_z2(10)), 10);
        at10.push_back(fs.back());
    }
    CHECK(at10[0] < at10[1]);
    CHECK(at10[1] < at10[2]);
}
