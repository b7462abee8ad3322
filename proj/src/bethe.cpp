#include "rydfloq/bethe.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rydfloq {

namespace {

const double s1 = std::sin(M_PI / 3), c1 = std::cos(M_PI / 3);
const double s2 = std::sin(2 * M_PI / 3), c2 = std::cos(2 * M_PI / 3);

struct Inner {
    Eigen::VectorXd x, w, Q, eta;
    double integral = 0.0;
};

Inner solve_fixed(double U0, const BetheSettings& s)
{
    Inner r;
    if (U0 <= 0.0) {
        r.x = r.w = r.Q = r.eta = Eigen::VectorXd();
        return r;
    }
    const int panels = std::max(1, static_cast<int>(std::ceil(2 * U0 / s.panel_width)));
    const int n = panels * s.quad_n;
    r.x.resize(n);
    r.w.resize(n);
    for (int p = 0; p < panels; ++p) {
        Eigen::VectorXd xp, wp;
        double a = -U0 + 2 * U0 * p / panels, b = -U0 + 2 * U0 * (p + 1) / panels;
        gauss_legendre(s.quad_n, a, b, xp, wp);
        r.x.segment(p * s.quad_n, s.quad_n) = xp;
        r.w.segment(p * s.quad_n, s.quad_n) = wp;
    }
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs[i] = bethe_drive(r.x[i]);
        for (int j = 0; j < n; ++j) A(i, j) = (i == j ? 1.0 : 0.0) + bethe_kernel(r.x[i] - r.x[j]) * r.w[j];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    r.Q = lu.solve(rhs);
    r.eta = lu.solve(Eigen::VectorXd::Ones(n));
    r.integral = r.w.dot(r.Q);
    return r;
}

// Nystrom interpolation of the solution at an arbitrary rapidity.
double interpolate(double U, const Inner& r, bool density)
{
    const Eigen::VectorXd& f = density ? r.Q : r.eta;
    double s = 0.0;
    for (Eigen::Index j = 0; j < r.x.size(); ++j) s += bethe_kernel(U - r.x[j]) * r.w[j] * f[j];
    return (density ? bethe_drive(U) : 1.0) - s;
}

}  // namespace

double bethe_drive(double U) { return s1 / (std::cosh(U) - c1) / (2 * M_PI); }
double bethe_kernel(double U) { return s2 / (std::cosh(U) - c2) / (2 * M_PI); }
double bethe_dispersion(double U) { return -2 * s1 * s1 / (std::cosh(U) - c1); }

void gauss_legendre(int n, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& w)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        double wi = 2 / ((1 - z * z) * dp * dp);
        double mid = (a + b) / 2, half = (b - a) / 2;
        x[i] = mid - half * z;
        x[n - 1 - i] = mid + half * z;
        w[i] = w[n - 1 - i] = half * wi;
    }
}

double branch_threshold() { return 1.0 / 3.0; }

BetheSolution solve_integral_equations(double n0, const BetheSettings& s)
{
    if (!(n0 >= 0.0 && n0 <= 0.5)) throw std::invalid_argument("n0 must lie in [0, 1/2]");
    if (s.quad_n < 8) throw std::invalid_argument("quad_n too small");
    BetheSolution sol;
    sol.n0 = n0;
    sol.branch = n0 <= branch_threshold() ? 1 : 2;
    if (n0 == 0.0 || n0 == 0.5) {
        sol.U0 = 0.0;
        sol.Q0 = bethe_drive(0.0);
        sol.eta0 = 1.0;
        return sol;
    }
    const double target = sol.branch == 1 ? n0 / (1 - n0) : (1 - 2 * n0) / (1 - n0);

    double lo = 0.0, hi = 1.0;
    int it = 0;
    while (solve_fixed(hi, s).integral < target) {
        lo = hi;
        hi *= 2;
        if (++it > 60) throw std::runtime_error("bethe: cannot bracket constraint for n0=" + std::to_string(n0));
    }
    Inner r;
    double U0 = hi;
    for (; it < s.max_iterations; ++it) {
        U0 = (lo + hi) / 2;
        r = solve_fixed(U0, s);
        double res = r.integral - target;
        if (std::abs(res) < s.constraint_tol || hi - lo < 1e-15 * hi) break;
        (res < 0 ? lo : hi) = U0;
    }
    if (it >= s.max_iterations) throw std::runtime_error("bethe: bisection did not converge");
    sol.U0 = U0;
    sol.iterations = it;
    sol.nodes = r.x;
    sol.weights = r.w;
    sol.Q = r.Q;
    sol.eta = r.eta;
    sol.constraint_residual = r.integral - target;
    sol.Q0 = interpolate(U0, r, true);
    sol.eta0 = interpolate(U0, r, false);
    double I = 0.0;
    for (Eigen::Index j = 0; j < r.x.size(); ++j) I += r.w[j] * bethe_dispersion(r.x[j]) * r.Q[j];
    sol.dressed_integral = I;
    return sol;
}

double luttinger_K(const BetheSolution& sol) { return (1 - sol.n0) * (1 - sol.n0) * sol.eta0 * sol.eta0; }

double ground_energy(const BetheSolution& sol, double h) { return h * (0.25 + (1 - sol.n0) * sol.dressed_integral); }

double chemical_potential(const BetheSolution& sol, double h)
{
    const double denom = sol.eta0 * (1 - sol.n0);
    if (std::abs(denom) < 1e-300) throw std::domain_error("chemical potential: singular denominator");
    const double sign = sol.branch == 1 ? -1.0 : 1.0;
    if (sol.n0 == 0.0) return -3.0 * h;
    if (sol.n0 == 0.5) return 6.0 * h;
    return h * (sign * 2 * std::sqrt(3.0) * M_PI * sol.Q0 / denom - sol.dressed_integral);
}

std::vector<PhaseRow> phase_diagram(const std::vector<double>& n0_grid, double h, const BetheSettings& s)
{
    if (!(h > 0.0)) throw std::invalid_argument("phase diagram needs h > 0");
    std::vector<PhaseRow> rows;
    for (double n0 : n0_grid) {
        if (!(n0 > 0.0 && n0 < 0.5)) throw std::invalid_argument("phase diagram grid must lie in (0, 1/2)");
        BetheSolution sol = solve_integral_equations(n0, s);
        rows.push_back({n0, sol.U0, luttinger_K(sol), chemical_potential(sol, h) / h, ground_energy(sol, h)});
    }
    return rows;
}

}  // namespace rydfloq
