#include "rydfloq/operators.hpp"

#include <bit>
#include <ostream>

#include <json.hpp>

namespace rydfloq {

namespace {

bool occupied(Config c, int site) { return site >= 0 && ((c >> site) & 1u); }

// Missing neighbours past an open edge count as empty.
bool empty_or_edge(Config c, int site) { return site < 0 || !((c >> site) & 1u); }

void check_site(const ConstrainedBasis& b, int i)
{
    if (i < 0 || i >= b.sites())
        throw std::invalid_argument("site " + std::to_string(i) + " out of range for " + b.tag());
}

template <class F>
SparseOperator diagonal(const ConstrainedBasis& b, F value)
{
    std::vector<Triplet> t;
    t.reserve(b.dim());
    for (std::size_t k = 0; k < b.dim(); ++k) {
        double v = value(b.state(k));
        if (v != 0.0) t.emplace_back(k, k, v);
    }
    return from_triplets(b.dim(), t, b.tag());
}

double z_of(Config c, int i) { return occupied(c, i) ? -1.0 : 1.0; }

// Single flips at sites whose blockade neighbours are empty; phase(c, i)
// gives the matrix element <c ^ (1<<i)| op |c>.
template <class F>
SparseOperator flip_operator(const ConstrainedBasis& b, F phase)
{
    std::vector<Triplet> t;
    const int L = b.sites();
    for (std::size_t k = 0; k < b.dim(); ++k) {
        Config c = b.state(k);
        for (int i = 0; i < L; ++i) {
            if (!empty_or_edge(c, b.neighbor(i, -1)) || !empty_or_edge(c, b.neighbor(i, +1))) continue;
            Config d = c ^ (Config{1} << i);
            if (!b.contains(d)) continue;
            t.emplace_back(b.index_of(d), k, phase(c, i));
        }
    }
    return from_triplets(b.dim(), t, b.tag());
}

}  // namespace

bool SparseOperator::check_hermitian(double tol) const
{
    SpMat diff = SpMat(mat.adjoint()) - mat;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SpMat::InnerIterator it(diff, k); it; ++it)
            if (std::abs(it.value()) > tol) return false;
    return true;
}

SparseOperator from_triplets(std::size_t dim, const std::vector<Triplet>& entries,
                             std::string basis_tag, bool hermitian)
{
    SparseOperator op;
    op.mat.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    op.mat.setFromTriplets(entries.begin(), entries.end());
    op.mat.prune(cplx(0.0));
    op.mat.makeCompressed();
    op.hermitian = hermitian;
    op.basis_tag = std::move(basis_tag);
    return op;
}

SparseOperator combine(cplx a, const SparseOperator& A, cplx b, const SparseOperator& B)
{
    if (A.basis_tag != B.basis_tag || A.dim() != B.dim())
        throw std::invalid_argument("basis mismatch: " + A.basis_tag + " vs " + B.basis_tag);
    SparseOperator out;
    out.mat = a * A.mat + b * B.mat;
    out.mat.prune(cplx(0.0));
    out.hermitian = A.hermitian && B.hermitian && a.imag() == 0.0 && b.imag() == 0.0;
    out.basis_tag = A.basis_tag;
    return out;
}

SparseOperator build_pxp(const ConstrainedBasis& b)
{
    return flip_operator(b, [](Config, int) { return cplx(1.0); });
}

// sigma^y |o> = i |*>, sigma^y |*> = -i |o>, with |o> the +1 state of sigma^z.
SparseOperator build_pyp(const ConstrainedBasis& b)
{
    return flip_operator(b, [](Config c, int i) {
        return occupied(c, i) ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    });
}

SparseOperator build_number(const ConstrainedBasis& b)
{
    return diagonal(b, [](Config c) { return static_cast<double>(std::popcount(c)); });
}

SparseOperator build_local_n(const ConstrainedBasis& b, int i)
{
    check_site(b, i);
    return diagonal(b, [i](Config c) { return occupied(c, i) ? 1.0 : 0.0; });
}

SparseOperator build_sigma_z(const ConstrainedBasis& b, int i)
{
    check_site(b, i);
    return diagonal(b, [i](Config c) { return z_of(c, i); });
}

SparseOperator build_pxyp(const ConstrainedBasis& b)
{
    std::vector<Triplet> t;
    const int L = b.sites();
    for (std::size_t k = 0; k < b.dim(); ++k) {
        Config c = b.state(k);
        for (int i = 0; i < L; ++i) {
            int j = b.neighbor(i, 1);
            if (j < 0) continue;
            if (occupied(c, i) == occupied(c, j)) continue;
            if (!empty_or_edge(c, b.neighbor(i, -1)) || !empty_or_edge(c, b.neighbor(i, 2))) continue;
            Config d = c ^ (Config{1} << i) ^ (Config{1} << j);
            if (!b.contains(d)) continue;
            t.emplace_back(b.index_of(d), k, 1.0);
        }
    }
    return from_triplets(b.dim(), t, b.tag());
}

SparseOperator build_pzp(const ConstrainedBasis& b)
{
    return diagonal(b, [&b](Config c) {
        double s = 0.0;
        for (int i = 0; i < b.sites(); ++i)
            if (empty_or_edge(c, b.neighbor(i, -1)) && empty_or_edge(c, b.neighbor(i, 1))) s += z_of(c, i);
        return s;
    });
}

SparseOperator build_ziz(const ConstrainedBasis& b)
{
    return diagonal(b, [&b](Config c) {
        double s = 0.0;
        for (int i = 0; i < b.sites(); ++i) {
            int j = b.neighbor(i, 2);
            if (j >= 0) s += z_of(c, i) * z_of(c, j);
        }
        return s;
    });
}

Eigen::VectorXd number_diagonal(const ConstrainedBasis& b)
{
    Eigen::VectorXd n(b.dim());
    for (std::size_t k = 0; k < b.dim(); ++k) n[k] = std::popcount(b.state(k));
    return n;
}

void dump_triplets(std::ostream& os, const SparseOperator& op)
{
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 0; k < op.mat.outerSize(); ++k)
        for (SpMat::InnerIterator it(op.mat, k); it; ++it)
            arr.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
    os << nlohmann::json{{"basis", op.basis_tag}, {"dim", op.dim()}, {"entries", arr}}.dump() << '\n';
}

}  // namespace rydfloq
