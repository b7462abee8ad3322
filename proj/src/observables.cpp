#include "rydfloq/observables.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rydfloq {

namespace {

void require_even(const ConstrainedBasis& b)
{
    if (b.sites() % 2) throw std::invalid_argument("Neel partner needs even L");
}

Eigen::VectorXd probabilities(const CVec& psi) { return psi.cwiseAbs2(); }

cplx amplitude(const ConstrainedBasis& b, const CVec& psi, Config c)
{
    return b.contains(c) ? psi[static_cast<Eigen::Index>(b.index_of(c))] : cplx(0.0);
}

double stag_value(Config c, int L)
{
    double s = 0.0;
    for (int j = 0; j < L; ++j) {
        double z = ((c >> j) & 1u) ? -1.0 : 1.0;
        s += (j % 2 ? -1.0 : 1.0) * z;
    }
    return s;
}

}  // namespace

double rydberg_density(const ConstrainedBasis& b, const CVec& psi)
{
    Eigen::VectorXd p = probabilities(psi);
    double s = 0.0;
    for (std::size_t k = 0; k < b.dim(); ++k) s += p[k] * std::popcount(b.state(k));
    return s / b.sites();
}

double staggered_magnetization(const ConstrainedBasis& b, const CVec& psi)
{
    Eigen::VectorXd p = probabilities(psi);
    double s = 0.0;
    for (std::size_t k = 0; k < b.dim(); ++k) s += p[k] * stag_value(b.state(k), b.sites());
    return s / b.sites();
}

Eigen::VectorXd site_occupations(const ConstrainedBasis& b, const CVec& psi)
{
    Eigen::VectorXd p = probabilities(psi);
    Eigen::VectorXd n = Eigen::VectorXd::Zero(b.sites());
    for (std::size_t k = 0; k < b.dim(); ++k)
        for (int j = 0; j < b.sites(); ++j)
            if ((b.state(k) >> j) & 1u) n[j] += p[k];
    return n;
}

Eigen::MatrixXd connected_zz(const ConstrainedBasis& b, const CVec& psi)
{
    const int L = b.sites();
    Eigen::VectorXd p = probabilities(psi);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(L);
    Eigen::MatrixXd zz = Eigen::MatrixXd::Zero(L, L);
    Eigen::VectorXd zc(L);
    for (std::size_t k = 0; k < b.dim(); ++k) {
        for (int j = 0; j < L; ++j) zc[j] = ((b.state(k) >> j) & 1u) ? -1.0 : 1.0;
        z += p[k] * zc;
        zz.noalias() += p[k] * zc * zc.transpose();
    }
    return zz - z * z.transpose();
}

GhzOverlap ghz_fidelity(const ConstrainedBasis& b, const CVec& psi)
{
    require_even(b);
    cplx a = amplitude(b, psi, neel_z2(b.sites()));
    cplx c = amplitude(b, psi, neel_z2_prime(b.sites()));
    double f = (std::norm(a) + std::norm(c)) / 2 + std::abs(a) * std::abs(c);
    double phi = std::arg(c) - std::arg(a);
    if (phi <= -M_PI) phi += 2 * M_PI;
    if (phi > M_PI) phi -= 2 * M_PI;
    return {f, phi};
}

double qfi_density(const ConstrainedBasis& b, const CVec& psi)
{
    Eigen::VectorXd p = probabilities(psi);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < b.dim(); ++k) {
        double s = stag_value(b.state(k), b.sites());
        m1 += p[k] * s;
        m2 += p[k] * s * s;
    }
    return std::max(0.0, m2 - m1 * m1) / b.sites();
}

std::pair<double, double> z2_populations(const ConstrainedBasis& b, const CVec& psi)
{
    require_even(b);
    return {std::norm(amplitude(b, psi, neel_z2(b.sites()))),
            std::norm(amplitude(b, psi, neel_z2_prime(b.sites())))};
}

std::vector<WallPair> domain_wall_pairs(Config c, int L)
{
    std::vector<int> opens, closes;
    for (int j = 0; j < L; ++j) {
        int k = (j + 1) % L;
        if (((c >> j) & 1u) != ((c >> k) & 1u)) continue;
        (j % 2 ? opens : closes).push_back(j);
    }
    std::vector<WallPair> pairs;
    if (opens.empty() || closes.empty()) return pairs;
    for (int a : opens) {
        int best = -1;
        for (int bnd : closes) {
            int d = ((bnd - a) % L + L) % L;
            if (best < 0 || d < best) best = d;
        }
        pairs.push_back({a, (a + best) % L, best});
    }
    return pairs;
}

DistanceDistribution domainwall_distance_distribution(const ConstrainedBasis& b, const CVec& psi)
{
    require_even(b);
    if (b.boundary() != Boundary::periodic) throw std::invalid_argument("distance distribution needs periodic bc");
    const int L = b.sites();
    DistanceDistribution out;
    out.p.assign(L - 1, 0.0);
    Eigen::VectorXd p = probabilities(psi);
    for (std::size_t k = 0; k < b.dim(); ++k) {
        if (p[k] == 0.0) continue;
        auto pairs = domain_wall_pairs(b.state(k), L);
        if (pairs.empty()) continue;
        out.paired_weight += p[k];
        for (const auto& pr : pairs) out.p[pr.distance - 1] += p[k] / pairs.size();
    }
    if (out.paired_weight > 0.0) {
        out.empty = false;
        for (double& x : out.p) x /= out.paired_weight;
    }
    return out;
}

std::vector<NamedObservable> standard_observables(const ConstrainedBasis& b, const std::vector<std::string>& names)
{
    std::vector<NamedObservable> obs;
    const ConstrainedBasis* bp = &b;
    for (const auto& n : names) {
        if (n == "density") obs.push_back({n, [bp](const CVec& v) { return rydberg_density(*bp, v); }});
        else if (n == "staggered") obs.push_back({n, [bp](const CVec& v) { return staggered_magnetization(*bp, v); }});
        else if (n == "ghz_fidelity") obs.push_back({n, [bp](const CVec& v) { return ghz_fidelity(*bp, v).fidelity; }});
        else if (n == "ghz_phase") obs.push_back({n, [bp](const CVec& v) { return ghz_fidelity(*bp, v).phi_star; }});
        else if (n == "qfi_density") obs.push_back({n, [bp](const CVec& v) { return qfi_density(*bp, v); }});
        else if (n == "p_z2") obs.push_back({n, [bp](const CVec& v) { return z2_populations(*bp, v).first; }});
        else if (n == "p_z2prime") obs.push_back({n, [bp](const CVec& v) { return z2_populations(*bp, v).second; }});
        else if (n == "norm") obs.push_back({n, [](const CVec& v) { return v.norm(); }});
        else if (n.rfind("n_", 0) == 0) {
            int i = std::stoi(n.substr(2));
            if (i < 0 || i >= b.sites()) throw std::invalid_argument("observable " + n + " out of range");
            obs.push_back({n, [bp, i](const CVec& v) { return site_occupations(*bp, v)[i]; }});
        } else {
            throw std::invalid_argument("unknown observable '" + n + "'");
        }
    }
    return obs;
}

}  // namespace rydfloq
