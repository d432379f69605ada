#include "fwmcomb/fluctuations.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace fwm {

namespace {

constexpr cplx I{0.0, 1.0};

std::string format_eigenvalue(cplx z)
{
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace

std::vector<std::string> mode_labels()
{
    return {"c1", "c2", "c3", "a1", "a2", "a3"};
}

DriftCoefficients drift_coefficients(const SystemParams& p, const SteadyState& s)
{
    const Detunings d = detunings(p);
    const auto& a = s.alpha_a;
    const double chi = p.chi_fwm;

    DriftCoefficients k{Mat6c::Zero(), Mat6c::Zero()};
    auto& M = k.M;
    auto& N = k.N;
    for (int i = 0; i < 3; ++i) {
        M(i, i) = -(p.kappa[i] + I * d.c[i]);
        M(i, 3 + i) = -I * std::conj(p.g[i]);
        M(3 + i, 3 + i) = -(p.gamma_noise[i] + I * d.a[i]);
        M(3 + i, i) = -I * p.g[i];
    }
    M(3, 5) += -2.0 * I * chi * std::conj(a[0]) * a[1];
    M(3, 4) += -2.0 * I * chi * std::conj(a[0]) * a[2];
    N(3, 3) += -2.0 * I * chi * a[1] * a[2];
    M(4, 3) += -2.0 * I * chi * std::conj(a[2]) * a[0];
    N(4, 5) += -I * chi * a[0] * a[0];
    M(5, 3) += -2.0 * I * chi * std::conj(a[1]) * a[0];
    N(5, 4) += -I * chi * a[0] * a[0];
    return k;
}

Mat12 build_drift(const SystemParams& p, const SteadyState& s)
{
    const DriftCoefficients k = drift_coefficients(p, s);
    Mat12 A;
    for (int j = 0; j < 6; ++j) {
        for (int l = 0; l < 6; ++l) {
            const cplx m = k.M(j, l);
            const cplx n = k.N(j, l);
            A(2 * j, 2 * l) = m.real() + n.real();
            A(2 * j, 2 * l + 1) = -m.imag() + n.imag();
            A(2 * j + 1, 2 * l) = m.imag() + n.imag();
            A(2 * j + 1, 2 * l + 1) = m.real() - n.real();
        }
    }
    return A;
}

Mat12 build_diffusion(const SystemParams& p)
{
    Mat12 D = Mat12::Zero();
    for (int i = 0; i < 3; ++i) {
        D(2 * i, 2 * i) = D(2 * i + 1, 2 * i + 1) = p.kappa[i];
        D(6 + 2 * i, 6 + 2 * i) = D(7 + 2 * i, 7 + 2 * i) = p.gamma_noise[i];
    }
    return D;
}

DriftDiffusion build_drift_diffusion(const SystemParams& p, const SteadyState& s)
{
    DriftDiffusion dd{build_drift(p, s), build_diffusion(p), false};
    dd.hurwitz = stability(dd.A).hurwitz;
    return dd;
}

StabilityReport stability(const Eigen::MatrixXd& A)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    StabilityReport r;
    r.eigenvalues = es.eigenvalues();
    r.max_real = r.eigenvalues.real().maxCoeff();
    r.hurwitz = r.max_real < 0.0;
    return r;
}

CovarianceMatrix solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D)
{
    const Eigen::Index n = A.rows();
    if (A.cols() != n || D.rows() != n || D.cols() != n)
        throw std::invalid_argument("solve_lyapunov: dimension mismatch");

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(A.cast<cplx>());
    const Eigen::MatrixXcd& T = schur.matrixT();
    const Eigen::MatrixXcd& U = schur.matrixU();

    Eigen::Index worst = 0;
    for (Eigen::Index i = 1; i < n; ++i)
        if (T(i, i).real() > T(worst, worst).real()) worst = i;
    if (n > 0 && !(T(worst, worst).real() < 0.0))
        throw UnstableError("unstable operating point: drift eigenvalue " + format_eigenvalue(T(worst, worst)) +
                                " has non-negative real part",
                            T(worst, worst));

    // T Y + Y T^H = C with C = -U^H D U, solved column by column from the right.
    const Eigen::MatrixXcd C = -(U.adjoint() * D.cast<cplx>() * U);
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        Eigen::VectorXcd rhs = C.col(j);
        for (Eigen::Index k = j + 1; k < n; ++k) rhs -= std::conj(T(j, k)) * Y.col(k);
        Eigen::MatrixXcd Tj = T;
        Tj.diagonal().array() += std::conj(T(j, j));
        Y.col(j) = Tj.triangularView<Eigen::Upper>().solve(rhs);
    }
    Eigen::MatrixXd V = (U * Y * U.adjoint()).real();
    V = 0.5 * (V + V.transpose()).eval();

    CovarianceMatrix cm;
    cm.V = V;
    if (n == 12) {
        for (const auto& m : mode_labels()) {
            cm.labels.push_back("q_" + m);
            cm.labels.push_back("p_" + m);
        }
    }
    return cm;
}

double lyapunov_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& V, const Eigen::MatrixXd& D)
{
    return (A * V + V * A.transpose() + D).cwiseAbs().maxCoeff();
}

}  // namespace fwm
