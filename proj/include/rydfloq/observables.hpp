#pragma once

#include <optional>
#include <vector>

#include "rydfloq/basis.hpp"
#include "rydfloq/floquet.hpp"
#include "rydfloq/operators.hpp"

namespace rydfloq {

double rydberg_density(const ConstrainedBasis& b, const CVec& psi);

// (1/L) sum_j (-1)^j <sigma^z_j>; equals -1 on |Z2> (site 0 excited).
double staggered_magnetization(const ConstrainedBasis& b, const CVec& psi);

Eigen::VectorXd site_occupations(const ConstrainedBasis& b, const CVec& psi);

// C_ij = <z_i z_j> - <z_i><z_j>.
Eigen::MatrixXd connected_zz(const ConstrainedBasis& b, const CVec& psi);

struct GhzOverlap {
    double fidelity;
    double phi_star;
};

// max over phi of |<GHZ_phi|psi>|^2 with |GHZ_phi> = (|Z2> + e^{i phi}|Z2'>)/sqrt 2.
GhzOverlap ghz_fidelity(const ConstrainedBasis& b, const CVec& psi);

// Var(sum_j (-1)^j sigma^z_j) / L.
double qfi_density(const ConstrainedBasis& b, const CVec& psi);

std::pair<double, double> z2_populations(const ConstrainedBasis& b, const CVec& psi);

// Domain walls sit on bonds (j, j+1) with equal occupations. A wall on an odd
// bond opens a Z2' domain (Z2 -> Z2'); one on an even bond closes it.
struct WallPair {
    int open_bond;   // Z2 -> Z2' wall
    int close_bond;  // next Z2' -> Z2 wall clockwise
    int distance;    // (close - open) mod L
};

std::vector<WallPair> domain_wall_pairs(Config c, int L);

struct DistanceDistribution {
    std::vector<double> p;  // p[l-1] = P(l), l = 1..L-1
    double paired_weight = 0.0;
    bool empty = true;
};

// Each configuration contributes |a|^2 spread evenly over its pairs.
DistanceDistribution domainwall_distance_distribution(const ConstrainedBasis& b, const CVec& psi);

// Named scalar observables for runs: density, staggered, ghz_fidelity, qfi_density,
// p_z2, p_z2prime, n_<i>.
std::vector<NamedObservable> standard_observables(const ConstrainedBasis& b,
                                                  const std::vector<std::string>& names);

}  // namespace rydfloq
