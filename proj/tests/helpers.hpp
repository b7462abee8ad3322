#pragma once

#include <random>

#include "rydfloq/operators.hpp"

inline rydfloq::CVec random_state(std::size_t dim, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    rydfloq::CVec v(static_cast<Eigen::Index>(dim));
    for (auto& x : v) x = rydfloq::cplx(g(rng), g(rng));
    return v / v.norm();
}

inline rydfloq::CMat parity_matrix(const Eigen::VectorXd& n)
{
    rydfloq::CVec d(n.size());
    for (Eigen::Index k = 0; k < n.size(); ++k) d[k] = std::fmod(n[k], 2.0) == 0.0 ? 1.0 : -1.0;
    return d.asDiagonal();
}
