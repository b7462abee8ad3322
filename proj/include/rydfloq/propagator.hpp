#pragma once

#include <string>

#include "rydfloq/operators.hpp"

namespace rydfloq {

enum class Backend { dense_eigen, krylov, automatic };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

// Largest dimension for which `automatic` picks the dense backend.
constexpr std::size_t dense_auto_limit = 600;

// Lanczos approximation of exp(-i t H) v with adaptive substeps.
// Each accepted substep meets the a-posteriori error bound `tol`.
class KrylovExp {
public:
    explicit KrylovExp(const SpMat& H, int max_dim = 40, double tol = 1e-12);
    CVec apply(const CVec& v, double t) const;
    int last_substeps() const { return substeps_; }

private:
    const SpMat* H_;
    int max_dim_;
    double tol_;
    mutable int substeps_ = 0;
};

// exp(-i t s H) for a fixed Hermitian generator H and scale s. The dense
// backend caches one eigendecomposition and reuses it for every time.
class Propagator {
public:
    Propagator(const SparseOperator& H, double scale, Backend backend = Backend::automatic);

    CVec evolve(const CVec& psi, double t) const;
    CMat unitary(double t) const;  // dense backend only
    Backend backend() const { return backend_; }
    std::size_t dim() const { return static_cast<std::size_t>(H_.rows()); }

    const Eigen::VectorXd& eigenvalues() const;  // of s*H
    bool real_eigenvectors() const { return real_; }
    const Eigen::MatrixXd& eigenvectors_real() const { return Vr_; }
    const CMat& eigenvectors_complex() const { return Vc_; }

private:
    SpMat H_;
    Backend backend_;
    bool real_ = true;
    Eigen::VectorXd evals_;
    Eigen::MatrixXd Vr_;
    CMat Vc_;
};

// Dense exp(-i t H) of a Hermitian matrix.
CMat hermitian_expm(const CMat& H, double t);

}  // namespace rydfloq
