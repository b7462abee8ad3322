#pragma once

#include <complex>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rydfloq/basis.hpp"

namespace rydfloq {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using RealSpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Triplet = Eigen::Triplet<cplx>;

// Operator in a fixed basis. Entries are assembled from coordinate triplets
// (duplicates summed) and stored in compressed rows for fast products.
struct SparseOperator {
    SpMat mat;
    bool hermitian = true;
    std::string basis_tag;

    std::size_t dim() const { return static_cast<std::size_t>(mat.rows()); }
    CVec apply(const CVec& v) const { return mat * v; }
    CMat dense() const { return CMat(mat); }
    RealSpMat real() const { return mat.real(); }
    bool check_hermitian(double tol = 1e-12) const;
};

SparseOperator from_triplets(std::size_t dim, const std::vector<Triplet>& entries,
                             std::string basis_tag, bool hermitian = true);

// a*A + b*B on a shared basis.
SparseOperator combine(cplx a, const SparseOperator& A, cplx b, const SparseOperator& B);

SparseOperator build_pxp(const ConstrainedBasis& basis);
SparseOperator build_number(const ConstrainedBasis& basis);
SparseOperator build_local_n(const ConstrainedBasis& basis, int i);
SparseOperator build_sigma_z(const ConstrainedBasis& basis, int i);
SparseOperator build_pxyp(const ConstrainedBasis& basis);
SparseOperator build_pyp(const ConstrainedBasis& basis);
SparseOperator build_pzp(const ConstrainedBasis& basis);
SparseOperator build_ziz(const ConstrainedBasis& basis);

// Diagonal of N as a real vector (popcount per configuration).
Eigen::VectorXd number_diagonal(const ConstrainedBasis& basis);

// Debug dump: JSON array of [row, col, re, im].
void dump_triplets(std::ostream& os, const SparseOperator& op);

}  // namespace rydfloq
