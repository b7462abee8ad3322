#pragma once

// Independent full-space reference: operators are assembled from 2x2 site
// matrices with Kronecker products on all 2^L configurations and then
// projected onto the constrained basis.

#include <unsupported/Eigen/KroneckerProduct>

#include "rydfloq/basis.hpp"
#include "rydfloq/operators.hpp"

namespace oracle {

using rydfloq::cplx;
using Sp = Eigen::SparseMatrix<cplx>;

inline Sp local(char which)
{
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    const cplx I(0, 1);
    switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -I, I, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    case 'P': m << 1, 0, 0, 0; break;
    case 'n': m << 0, 0, 0, 1; break;
    default: m << 1, 0, 0, 1;
    }
    return m.sparseView();
}

// Product of single-site factors; `ops` maps site -> letter, '1' elsewhere.
inline Sp string_op(int L, const std::vector<std::pair<int, char>>& ops)
{
    Sp out(1, 1);
    out.insert(0, 0) = 1.0;
    for (int site = L - 1; site >= 0; --site) {
        Sp f = local('1');
        for (const auto& [s, c] : ops)
            if (s == site) f = Sp(f * local(c));
        Sp next = Eigen::kroneckerProduct(out, f);
        out = next;
    }
    return out;
}

inline int nb(int i, int off, int L, rydfloq::Boundary bc)
{
    int j = i + off;
    if (bc == rydfloq::Boundary::periodic) return ((j % L) + L) % L;
    return (j < 0 || j >= L) ? -1 : j;
}

inline void add_if(std::vector<std::pair<int, char>>& v, int site, char c)
{
    if (site >= 0) v.push_back({site, c});
}

inline Sp full_pxp(int L, rydfloq::Boundary bc, char mid = 'x')
{
    Sp H(1 << L, 1 << L);
    for (int i = 0; i < L; ++i) {
        std::vector<std::pair<int, char>> ops;
        add_if(ops, nb(i, -1, L, bc), 'P');
        ops.push_back({i, mid});
        add_if(ops, nb(i, 1, L, bc), 'P');
        H += string_op(L, ops);
    }
    return H;
}

inline Sp full_pxyp(int L, rydfloq::Boundary bc)
{
    Sp H(1 << L, 1 << L);
    for (int i = 0; i < L; ++i) {
        int j = nb(i, 1, L, bc);
        if (j < 0) continue;
        for (char c : {'x', 'y'}) {
            std::vector<std::pair<int, char>> ops;
            add_if(ops, nb(i, -1, L, bc), 'P');
            ops.push_back({i, c});
            ops.push_back({j, c});
            add_if(ops, nb(i, 2, L, bc), 'P');
            H += 0.5 * string_op(L, ops);
        }
    }
    return H;
}

inline Sp full_ziz(int L, rydfloq::Boundary bc)
{
    Sp H(1 << L, 1 << L);
    for (int i = 0; i < L; ++i) {
        int j = nb(i, 2, L, bc);
        if (j >= 0) H += string_op(L, {{i, 'z'}, {j, 'z'}});
    }
    return H;
}

inline Sp full_number(int L)
{
    Sp H(1 << L, 1 << L);
    for (int i = 0; i < L; ++i) H += string_op(L, {{i, 'n'}});
    return H;
}

inline Eigen::MatrixXcd project(const Sp& full, const rydfloq::ConstrainedBasis& b)
{
    const Eigen::Index d = static_cast<Eigen::Index>(b.dim());
    Eigen::MatrixXcd out(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) out(r, c) = full.coeff(b.state(r), b.state(c));
    return out;
}

inline double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle
