#include "rydfloq/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace rydfloq {

std::string to_string(Backend b)
{
    switch (b) {
    case Backend::dense_eigen: return "dense";
    case Backend::krylov: return "krylov";
    default: return "auto";
    }
}

Backend backend_from_string(const std::string& s)
{
    if (s == "dense") return Backend::dense_eigen;
    if (s == "krylov") return Backend::krylov;
    if (s == "auto") return Backend::automatic;
    throw std::invalid_argument("unknown backend '" + s + "' (expected dense, krylov or auto)");
}

KrylovExp::KrylovExp(const SpMat& H, int max_dim, double tol) : H_(&H), max_dim_(max_dim), tol_(tol) {}

CVec KrylovExp::apply(const CVec& v, double t) const
{
    substeps_ = 0;
    CVec w = v;
    const double norm0 = w.norm();
    if (norm0 == 0.0 || t == 0.0) return w;

    const Eigen::Index n = H_->rows();
    const int mmax = static_cast<int>(std::min<Eigen::Index>(max_dim_, n));
    CMat Vk(n, mmax + 1);
    double remaining = t;
    double step = t;

    while (std::abs(remaining) > 0.0) {
        double hstep = std::abs(step) < std::abs(remaining) ? step : remaining;
        const double beta = w.norm();
        Vk.col(0) = w / beta;
        std::vector<double> alpha, offd;
        bool accepted = false;
        CVec result;

        for (int j = 0; j < mmax; ++j) {
            CVec u = (*H_) * Vk.col(j);
            double a = Vk.col(j).dot(u).real();
            u -= a * Vk.col(j);
            if (j > 0) u -= offd[j - 1] * Vk.col(j - 1);
            // Full reorthogonalization keeps the basis clean at large m.
            for (int k = 0; k <= j; ++k) u -= Vk.col(k).dot(u) * Vk.col(k);
            double b = u.norm();
            alpha.push_back(a);

            const int m = j + 1;
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int k = 0; k < m; ++k) T(k, k) = alpha[k];
            for (int k = 0; k + 1 < m; ++k) T(k, k + 1) = T(k + 1, k) = offd[k];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            CVec y = es.eigenvectors().row(0).transpose().cast<cplx>();
            for (int k = 0; k < m; ++k) y[k] *= std::exp(cplx(0.0, -hstep * es.eigenvalues()[k]));
            CVec c = es.eigenvectors().cast<cplx>() * y;

            const bool breakdown = b < 1e-13 * std::max(1.0, std::abs(a));
            const double err = beta * b * std::abs(c[m - 1]);
            if (breakdown || err < tol_) {
                result = beta * (Vk.leftCols(m) * c);
                accepted = true;
                break;
            }
            if (j + 1 < mmax) {
                offd.push_back(b);
                Vk.col(j + 1) = u / b;
            }
        }
        if (!accepted) {
            step = hstep / 2;
            if (std::abs(step) < 1e-14 * std::abs(t)) throw std::runtime_error("krylov step size underflow");
            continue;
        }
        w = result;
        remaining -= hstep;
        ++substeps_;
        step = hstep;
    }
    return w;
}

Propagator::Propagator(const SparseOperator& H, double scale, Backend backend)
    : H_(scale * H.mat), backend_(backend)
{
    if (!H.hermitian) throw std::invalid_argument("propagator needs a Hermitian generator");
    if (backend_ == Backend::automatic)
        backend_ = H.dim() <= dense_auto_limit ? Backend::dense_eigen : Backend::krylov;

    if (backend_ == Backend::krylov) return;
    real_ = H_.imag().norm() == 0.0;
    if (real_) {
        Eigen::MatrixXd D = Eigen::MatrixXd(H_.real());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
        evals_ = es.eigenvalues();
        Vr_ = es.eigenvectors();
    } else {
        CMat D = CMat(H_);
        Eigen::SelfAdjointEigenSolver<CMat> es(D);
        evals_ = es.eigenvalues();
        Vc_ = es.eigenvectors();
    }
}

const Eigen::VectorXd& Propagator::eigenvalues() const
{
    if (backend_ != Backend::dense_eigen) throw std::logic_error("eigenvalues need the dense backend");
    return evals_;
}

CVec Propagator::evolve(const CVec& psi, double t) const
{
    if (psi.size() != H_.rows()) throw std::invalid_argument("state dimension mismatch");
    if (backend_ == Backend::krylov) return KrylovExp(H_).apply(psi, t);

    CVec phase(evals_.size());
    for (Eigen::Index k = 0; k < evals_.size(); ++k) phase[k] = std::exp(cplx(0.0, -t * evals_[k]));
    if (real_) {
        // Real eigenvectors: transform real and imaginary parts separately.
        Eigen::VectorXd re = psi.real(), im = psi.imag();
        Eigen::VectorXd cr = Vr_.transpose() * re, ci = Vr_.transpose() * im;
        CVec c(cr.size());
        for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = cplx(cr[k], ci[k]) * phase[k];
        Eigen::VectorXd outr = Vr_ * c.real(), outi = Vr_ * c.imag();
        CVec out(outr.size());
        out.real() = outr;
        out.imag() = outi;
        return out;
    }
    CVec c = Vc_.adjoint() * psi;
    return Vc_ * phase.cwiseProduct(c);
}

CMat Propagator::unitary(double t) const
{
    if (backend_ != Backend::dense_eigen) throw std::logic_error("unitary needs the dense backend");
    CVec phase(evals_.size());
    for (Eigen::Index k = 0; k < evals_.size(); ++k) phase[k] = std::exp(cplx(0.0, -t * evals_[k]));
    if (real_) {
        CMat V = Vr_.cast<cplx>();
        return V * phase.asDiagonal() * V.adjoint();
    }
    return Vc_ * phase.asDiagonal() * Vc_.adjoint();
}

CMat hermitian_expm(const CMat& H, double t)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    CVec phase(H.rows());
    for (Eigen::Index k = 0; k < H.rows(); ++k) phase[k] = std::exp(cplx(0.0, -t * es.eigenvalues()[k]));
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace rydfloq
