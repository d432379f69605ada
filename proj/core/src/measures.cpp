#include "fwmcomb/measures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace fwm {

namespace {

double physical_tol(const Eigen::MatrixXd& V)
{
    return 1e-10 * std::max(1.0, V.cwiseAbs().maxCoeff());
}

void require_physical(const Eigen::MatrixXd& V, const char* where)
{
    if ((V - V.transpose()).cwiseAbs().maxCoeff() > physical_tol(V))
        throw UnphysicalError(std::string(where) + ": covariance matrix is not symmetric");
    const double margin = uncertainty_margin(V);
    if (margin < -physical_tol(V))
        throw UnphysicalError(std::string(where) +
                              ": covariance violates the uncertainty principle (min eig of V + i/2 Omega = " +
                              std::to_string(margin) + ")");
}

double apply_base(double nats, LogBase base)
{
    return base == LogBase::two ? nats / std::numbers::ln2 : nats;
}

}  // namespace

Eigen::MatrixXd symplectic_form(int modes)
{
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        W(2 * k, 2 * k + 1) = 1.0;
        W(2 * k + 1, 2 * k) = -1.0;
    }
    return W;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& V)
{
    const int n = static_cast<int>(V.rows()) / 2;
    const Eigen::MatrixXcd M = cplx(0.0, 1.0) * (symplectic_form(n) * V).cast<cplx>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    std::vector<double> mags(2 * n);
    for (int i = 0; i < 2 * n; ++i) mags[i] = std::abs(es.eigenvalues()[i]);
    std::sort(mags.begin(), mags.end());
    Eigen::VectorXd nu(n);
    for (int k = 0; k < n; ++k) nu[k] = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
    return nu;
}

double uncertainty_margin(const Eigen::MatrixXd& V)
{
    const int n = static_cast<int>(V.rows()) / 2;
    const Eigen::MatrixXcd H = V.cast<cplx>() + cplx(0.0, 0.5) * symplectic_form(n).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_physical(const Eigen::MatrixXd& V, double tol)
{
    return uncertainty_margin(V) >= -tol * std::max(1.0, V.cwiseAbs().maxCoeff());
}

Eigen::Matrix4d two_mode_block(const Eigen::MatrixXd& V, int mode_a, int mode_b)
{
    const int n = static_cast<int>(V.rows()) / 2;
    if (mode_a < 0 || mode_b < 0 || mode_a >= n || mode_b >= n || mode_a == mode_b)
        throw std::invalid_argument("two_mode_block: invalid mode pair");
    const int idx[4] = {2 * mode_a, 2 * mode_a + 1, 2 * mode_b, 2 * mode_b + 1};
    Eigen::Matrix4d B;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) B(i, j) = V(idx[i], idx[j]);
    return B;
}

double logneg(const Eigen::MatrixXd& V, int mode_a, int mode_b, LogBase base)
{
    const Eigen::Matrix4d W = two_mode_block(V, mode_a, mode_b);
    require_physical(W, "logneg");
    const double detA = W.topLeftCorner<2, 2>().determinant();
    const double detB = W.bottomRightCorner<2, 2>().determinant();
    const double detC = W.topRightCorner<2, 2>().determinant();
    const double detV = W.determinant();
    const double delta = detA + detB - 2.0 * detC;
    const double disc = std::max(0.0, delta * delta - 4.0 * detV);
    const double nu = std::sqrt(std::max(0.0, 0.5 * (delta - std::sqrt(disc))));
    if (!(nu > 0.0)) throw UnphysicalError("logneg: vanishing partial-transpose symplectic eigenvalue");
    return apply_base(std::max(0.0, -std::log(2.0 * nu)), base);
}

double entanglement_potential(const Eigen::Matrix2d& V1, LogBase base)
{
    require_physical(V1, "entanglement_potential");
    Eigen::Matrix4d V = Eigen::Matrix4d::Zero();
    V.topLeftCorner<2, 2>() = V1;
    V.bottomRightCorner<2, 2>() = 0.5 * Eigen::Matrix2d::Identity();
    const double s = 1.0 / std::numbers::sqrt2;
    Eigen::Matrix4d S;
    S << s, 0, s, 0,
         0, s, 0, s,
         -s, 0, s, 0,
         0, -s, 0, s;
    const Eigen::Matrix4d V2 = S * V * S.transpose();
    return logneg(V2, 0, 1, base);
}

Mat12 input_matrix(const SystemParams& p)
{
    Mat12 B = Mat12::Zero();
    for (int i = 0; i < 3; ++i) {
        const double bc = -std::sqrt(2.0 * p.kappa[i]);
        const double ba = std::sqrt(2.0 * p.gamma_noise[i]);
        B(2 * i, 2 * i) = B(2 * i + 1, 2 * i + 1) = bc;
        B(6 + 2 * i, 6 + 2 * i) = B(7 + 2 * i, 7 + 2 * i) = ba;
    }
    return B;
}

CovarianceMatrix output_covariance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D, const SystemParams& p)
{
    if (A.rows() != 12 || A.cols() != 12 || D.rows() != 12 || D.cols() != 12)
        throw std::invalid_argument("output_covariance: expected 12x12 drift and diffusion");
    const StabilityReport st = stability(A);
    if (!st.hurwitz) {
        Eigen::Index k;
        st.eigenvalues.real().maxCoeff(&k);
        throw UnstableError("output_covariance: drift matrix is not Hurwitz", st.eigenvalues[k]);
    }
    const Mat12 B = input_matrix(p);
    const Mat12 Dcheck = 0.5 * B * B.transpose();
    if ((Dcheck - D).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, D.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("output_covariance: diffusion matrix inconsistent with the input noise rates");

    Eigen::Matrix<double, 6, 12> R = Eigen::Matrix<double, 6, 12>::Zero();
    Eigen::Matrix<double, 6, 12> P = Eigen::Matrix<double, 6, 12>::Zero();
    for (int i = 0; i < 3; ++i) {
        R(2 * i, 2 * i) = R(2 * i + 1, 2 * i + 1) = p.r[i];
        P(2 * i, 2 * i) = P(2 * i + 1, 2 * i + 1) = 1.0;
    }
    const Eigen::MatrixXd G = (-A).partialPivLu().solve(Eigen::MatrixXd(B));
    const Eigen::Matrix<double, 6, 12> T = R * G + P;
    Eigen::MatrixXd Vout = 0.5 * T * T.transpose();
    Vout = 0.5 * (Vout + Vout.transpose()).eval();

    CovarianceMatrix cm;
    cm.V = Vout;
    for (int i = 1; i <= 3; ++i) {
        cm.labels.push_back("q_out" + std::to_string(i));
        cm.labels.push_back("p_out" + std::to_string(i));
    }
    return cm;
}

}  // namespace fwm
